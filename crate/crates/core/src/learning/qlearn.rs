//! Tabular Q-learning over (sensed jammer channel, own channel).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{ChannelAssignment, ChannelSet};
use crate::error::{Error, Result};
use crate::jammer::uniform_index;

/// Channel the user sensed as jammed in the previous slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObservedState {
    Unknown,
    Jammed(usize),
}

impl ObservedState {
    /// Lowest jammed channel of a slot, or `Unknown` when nothing was jammed.
    pub fn from_jammed(set: ChannelSet) -> Self {
        set.first()
            .map_or(ObservedState::Unknown, ObservedState::Jammed)
    }

    fn index(self, num_channels: usize) -> usize {
        match self {
            ObservedState::Unknown => num_channels,
            ObservedState::Jammed(c) => c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QParams {
    /// λ
    pub learning_rate: f64,
    /// γ
    pub discount: f64,
}

impl QParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::config(
                "learning.learning_rate",
                "must lie in (0, 1]",
            ));
        }
        if !(self.discount >= 0.0 && self.discount < 1.0) {
            return Err(Error::config("learning.discount", "must lie in [0, 1)"));
        }
        Ok(())
    }
}

impl Default for QParams {
    fn default() -> Self {
        QParams {
            learning_rate: 0.1,
            discount: 0.9,
        }
    }
}

/// Q-values for `M + 1` states (each channel plus `Unknown`) and `M` actions.
/// Exploration is supplied per call so one schedule can drive many tables.
#[derive(Clone, Debug, PartialEq)]
pub struct QTable {
    num_channels: usize,
    values: Vec<f64>,
    params: QParams,
}

impl QTable {
    pub fn new(num_channels: usize, params: QParams) -> Result<Self> {
        params.validate()?;
        if num_channels == 0 {
            return Err(Error::config("num_channels", "must be at least 1"));
        }
        Ok(QTable {
            num_channels,
            values: vec![0.0; (num_channels + 1) * num_channels],
            params,
        })
    }

    pub fn num_channels(&self) -> usize {
        self.num_channels
    }

    pub fn params(&self) -> QParams {
        self.params
    }

    pub fn row(&self, s: ObservedState) -> &[f64] {
        let i = s.index(self.num_channels) * self.num_channels;
        &self.values[i..i + self.num_channels]
    }

    pub fn get(&self, s: ObservedState, a: usize) -> f64 {
        self.row(s)[a]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Q(s,a) ← (1−λ)·Q(s,a) + λ·(reward + γ·max_a' Q(s_next, a'))`.
    pub fn update(&mut self, s: ObservedState, a: usize, reward: f64, s_next: ObservedState) {
        let QParams {
            learning_rate: lr,
            discount,
        } = self.params;
        let future = self
            .row(s_next)
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let i = s.index(self.num_channels) * self.num_channels + a;
        self.values[i] = (1.0 - lr) * self.values[i] + lr * (reward + discount * future);
    }

    /// Lowest-index argmax over channels not in `excluded`.
    pub fn greedy_excluding(&self, s: ObservedState, excluded: ChannelSet) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (c, &v) in self.row(s).iter().enumerate() {
            if excluded.contains(c) {
                continue;
            }
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((c, v));
            }
        }
        best.map(|(c, _)| c)
    }

    pub fn greedy(&self, s: ObservedState) -> usize {
        self.greedy_excluding(s, ChannelSet::EMPTY)
            .expect("at least one channel")
    }

    /// ε-greedy from two uniform draws.
    pub fn epsilon_greedy(
        &self,
        s: ObservedState,
        epsilon: f64,
        explore_draw: f64,
        channel_draw: f64,
    ) -> usize {
        if explore_draw < epsilon {
            uniform_index(channel_draw, self.num_channels)
        } else {
            self.greedy(s)
        }
    }
}

/// `Q(s,a) ← (1−λ)·Q(s,a) + λ·(reward + γ·max Q(s_next, ·))`, returning a new table.
pub fn q_update(
    table: &QTable,
    s: ObservedState,
    a: usize,
    reward: f64,
    s_next: ObservedState,
) -> QTable {
    let mut next = table.clone();
    next.update(s, a, reward, s_next);
    next
}

/// Every user ε-greedy on its own table.
pub fn independent_selection<R: Rng + ?Sized>(
    tables: &[QTable],
    s: ObservedState,
    epsilon: f64,
    rng: &mut R,
) -> ChannelAssignment {
    tables
        .iter()
        .map(|t| {
            let explore: f64 = rng.random();
            let channel: f64 = rng.random();
            t.epsilon_greedy(s, epsilon, explore, channel)
        })
        .collect::<Vec<_>>()
        .into()
}

/// Sequential claiming over the control channel.
///
/// Users take turns in `order`. An exploring user (probability ε) picks a
/// uniform channel; otherwise it picks its best channel among those not yet
/// claimed this slot, or its unrestricted best once every channel is claimed.
/// Either way the chosen channel is announced as claimed. Inactive users
/// choose greedily and claim nothing.
pub fn collaborative_joint_selection<R: Rng + ?Sized>(
    tables: &[QTable],
    s: ObservedState,
    order: &[usize],
    active: &[bool],
    epsilon: f64,
    rng: &mut R,
) -> ChannelAssignment {
    let mut choices = vec![0usize; tables.len()];
    let mut claimed = ChannelSet::EMPTY;
    for &n in order {
        let explore: f64 = rng.random();
        let channel: f64 = rng.random();
        let table = &tables[n];
        if !active[n] {
            choices[n] = table.greedy(s);
            continue;
        }
        let c = if explore < epsilon {
            uniform_index(channel, table.num_channels())
        } else {
            table
                .greedy_excluding(s, claimed)
                .unwrap_or_else(|| table.greedy(s))
        };
        claimed.insert(c);
        choices[n] = c;
    }
    choices.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table(m: usize, lr: f64, gamma: f64) -> QTable {
        QTable::new(
            m,
            QParams {
                learning_rate: lr,
                discount: gamma,
            },
        )
        .unwrap()
    }

    #[test]
    fn update_examples() {
        let s = ObservedState::Jammed(0);
        let t = q_update(&table(3, 0.5, 0.9), s, 1, 1.0, ObservedState::Unknown);
        assert_eq!(t.get(s, 1), 0.5);
        assert_eq!(t.values().iter().filter(|&&v| v != 0.0).count(), 1);

        let t = q_update(&table(3, 1.0, 0.0), s, 2, 2.5, s);
        assert_eq!(t.get(s, 2), 2.5);

        let mut t = table(3, 0.25, 0.9);
        t.update(s, 0, 4.0, ObservedState::Unknown);
        let before = t.get(s, 0);
        t.update(s, 0, 0.0, ObservedState::Unknown);
        assert!((t.get(s, 0) - 0.75 * before).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(QTable::new(
            2,
            QParams {
                learning_rate: 0.0,
                discount: 0.5
            }
        )
        .is_err());
        assert!(QTable::new(
            2,
            QParams {
                learning_rate: 0.5,
                discount: 1.0
            }
        )
        .is_err());
        assert!(QTable::new(0, QParams::default()).is_err());
    }

    #[test]
    fn observed_state_from_set() {
        assert_eq!(
            ObservedState::from_jammed(ChannelSet::EMPTY),
            ObservedState::Unknown
        );
        let comb: ChannelSet = [2, 0].into_iter().collect();
        assert_eq!(ObservedState::from_jammed(comb), ObservedState::Jammed(0));
    }

    #[test]
    fn claiming_resolves_shared_argmax() {
        let s = ObservedState::Unknown;
        let mut a = table(3, 1.0, 0.0);
        a.update(s, 1, 5.0, s);
        a.update(s, 2, 1.0, s);
        let mut b = table(3, 1.0, 0.0);
        b.update(s, 1, 4.0, s);
        b.update(s, 0, 3.0, s);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = collaborative_joint_selection(
            &[a.clone(), b.clone()],
            s,
            &[0, 1],
            &[true; 2],
            0.0,
            &mut rng,
        );
        assert_eq!(out.as_slice(), &[1, 0]);
        // reversed order: user 1 claims 1 first, user 0 falls back to 2
        let out = collaborative_joint_selection(&[a, b], s, &[1, 0], &[true; 2], 0.0, &mut rng);
        assert_eq!(out.as_slice(), &[2, 1]);
    }

    #[test]
    fn claiming_falls_back_when_exhausted() {
        let s = ObservedState::Unknown;
        let mut t = table(1, 1.0, 0.0);
        t.update(s, 0, 1.0, s);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out =
            collaborative_joint_selection(&[t.clone(), t], s, &[0, 1], &[true; 2], 0.0, &mut rng);
        assert_eq!(out.as_slice(), &[0, 0]);
    }

    #[test]
    fn single_user_is_plain_epsilon_greedy() {
        let s = ObservedState::Jammed(1);
        let mut t = table(4, 1.0, 0.0);
        t.update(s, 3, 1.0, s);
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = collaborative_joint_selection(
                std::slice::from_ref(&t),
                s,
                &[0],
                &[true],
                0.3,
                &mut r1,
            );
            let b = independent_selection(std::slice::from_ref(&t), s, 0.3, &mut r2);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn full_exploration_is_uniform() {
        let s = ObservedState::Unknown;
        let tables = vec![table(4, 0.5, 0.5); 3];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0usize; 4];
        let draws = 40_000;
        for _ in 0..draws {
            let a =
                collaborative_joint_selection(&tables, s, &[0, 1, 2], &[true; 3], 1.0, &mut rng);
            counts[a[1]] += 1;
        }
        let expected = draws as f64 / 4.0;
        let sd = (draws as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - expected).abs() < 4.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn distinct_argmaxes_match_independent_greedy() {
        let s = ObservedState::Jammed(2);
        let tables: Vec<QTable> = (0..3)
            .map(|n| {
                let mut t = table(4, 1.0, 0.0);
                t.update(s, n, 1.0 + n as f64, s);
                t
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let collab =
            collaborative_joint_selection(&tables, s, &[2, 0, 1], &[true; 3], 0.0, &mut rng);
        let indep = independent_selection(&tables, s, 0.0, &mut rng);
        assert_eq!(collab, indep);
        assert_eq!(collab.as_slice(), &[0, 1, 2]);
    }
}
