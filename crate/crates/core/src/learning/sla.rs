//! Stochastic learning automata with the linear reward–inaction rule.

use crate::error::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-9;

/// Probability vector over channels.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn uniform(num_channels: usize) -> Self {
        MixedStrategy {
            probs: vec![1.0 / num_channels as f64; num_channels],
        }
    }

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Contract(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Contract(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(MixedStrategy { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_channels(&self) -> usize {
        self.probs.len()
    }

    /// Inverse-CDF sample from a uniform draw in `[0, 1)`.
    pub fn sample(&self, draw: f64) -> usize {
        let mut acc = 0.0;
        for (c, p) in self.probs.iter().enumerate() {
            acc += p;
            if draw < acc {
                return c;
            }
        }
        // draw fell in the rounding gap above the accumulated sum
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    /// In-place linear reward–inaction step.
    pub fn update(&mut self, chosen: usize, reward: f64, step: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::Contract(format!("reward {reward} outside [0, 1]")));
        }
        if !(step > 0.0 && step < 1.0) {
            return Err(Error::Contract(format!("step size {step} outside (0, 1)")));
        }
        if chosen >= self.probs.len() {
            return Err(Error::Contract(format!("channel {chosen} out of range")));
        }
        let g = step * reward;
        for (c, p) in self.probs.iter_mut().enumerate() {
            if c == chosen {
                *p += g * (1.0 - *p);
            } else {
                *p -= g * *p;
            }
        }
        Ok(())
    }
}

/// `P_chosen += b·r·(1 − P_chosen)`, `P_other −= b·r·P_other`.
pub fn sla_update(
    strategy: &MixedStrategy,
    chosen: usize,
    normalized_reward: f64,
    step: f64,
) -> Result<MixedStrategy> {
    let mut next = strategy.clone();
    next.update(chosen, normalized_reward, step)?;
    Ok(next)
}
