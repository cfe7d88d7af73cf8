//! Performance metrics and trial aggregation.

use rand::Rng;

use crate::env::{ChannelAssignment, Jamming, SlotState};
use crate::game::{GameKind, GameSpec};
use crate::learning::MixedStrategy;

/// Normal-approximation 95% quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateMode {
    Sum,
    MeanActive,
}

pub fn network_rate(state: &SlotState, mode: RateMode) -> f64 {
    let (sum, active) = state
        .rates
        .iter()
        .zip(&state.active_mask)
        .filter(|(_, &a)| a)
        .fold((0.0, 0usize), |(s, k), (r, _)| (s + r, k + 1));
    match mode {
        RateMode::Sum => sum,
        RateMode::MeanActive if active == 0 => 0.0,
        RateMode::MeanActive => sum / active as f64,
    }
}

/// Sum of active rates over `num_users · r_max`.
pub fn normalized_capacity(state: &SlotState, r_max: f64) -> f64 {
    network_rate(state, RateMode::Sum) / (state.rates.len() as f64 * r_max)
}

/// Whether any active user sits on a jammed channel.
pub fn jammed_occupancy(state: &SlotState) -> bool {
    let jammed = state.jammed_channels();
    state
        .assignment
        .as_slice()
        .iter()
        .zip(&state.active_mask)
        .any(|(&c, &a)| a && jammed.contains(c))
}

/// Where the equilibria in [`ne_bounds`] are played.
#[derive(Clone, Debug)]
pub enum NeContext {
    /// Jamming is given.
    Fixed(Jamming),
    /// The leader of a Stackelberg game picks its channel after seeing how
    /// followers settle from the trial's start.
    Leader,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeBounds {
    pub best: f64,
    pub worst: f64,
    /// Converged network value per trial; excluded trials are absent.
    pub values: Vec<f64>,
    /// Trials whose best-response run hit the pass cap.
    pub excluded: usize,
}

/// Best and worst equilibrium values found by best-response dynamics from
/// `num_trials` uniformly random starts.
///
/// Returns `None` if every trial was excluded.
pub fn ne_bounds<R: Rng + ?Sized>(
    game: &GameSpec,
    context: &NeContext,
    active: &[bool],
    num_trials: usize,
    max_passes: usize,
    rng: &mut R,
) -> Option<NeBounds> {
    let n = game.num_users();
    let m = game.num_channels();
    let mut values = Vec::with_capacity(num_trials);
    let mut excluded = 0;
    for _ in 0..num_trials {
        let start: ChannelAssignment = (0..n)
            .map(|_| rng.random_range(0..m))
            .collect::<Vec<_>>()
            .into();
        match trial_value(game, context, active, start, max_passes) {
            Some(v) => values.push(v),
            None => excluded += 1,
        }
    }
    if values.is_empty() {
        return None;
    }
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let worst = values.iter().copied().fold(f64::INFINITY, f64::min);
    Some(NeBounds {
        best,
        worst,
        values,
        excluded,
    })
}

fn trial_value(
    game: &GameSpec,
    context: &NeContext,
    active: &[bool],
    start: ChannelAssignment,
    max_passes: usize,
) -> Option<f64> {
    match context {
        NeContext::Fixed(jamming) => {
            let out = game.best_response_dynamics(start, jamming, active, max_passes);
            out.converged
                .then(|| game.network_value(&out.assignment, jamming, active))
        }
        NeContext::Leader => {
            debug_assert_eq!(game.kind(), GameKind::Stackelberg);
            let mut chosen: Option<f64> = None;
            for leader in 0..game.num_channels() {
                let jamming = Jamming::single(leader);
                let out = game.best_response_dynamics(start.clone(), &jamming, active, max_passes);
                if !out.converged {
                    continue;
                }
                let v = game.network_value(&out.assignment, &jamming, active);
                if chosen.is_none_or(|c| v < c) {
                    chosen = Some(v);
                }
            }
            chosen
        }
    }
}

/// First index `i` such that items `i..=i+window` are all equal.
pub fn detect_convergence<T: PartialEq>(series: &[T], window: usize) -> Option<usize> {
    let window = window.max(1);
    if series.len() <= window {
        return None;
    }
    let mut run_start = 0;
    for i in 1..series.len() {
        if series[i] != series[run_start] {
            run_start = i;
        } else if i - run_start >= window {
            return Some(run_start);
        }
    }
    None
}

/// First slot at which every user's largest probability exceeds `threshold`
/// (0.99 by convention).
pub fn detect_strategy_convergence(series: &[Vec<MixedStrategy>], threshold: f64) -> Option<usize> {
    series
        .iter()
        .position(|users| users.iter().all(|s| s.max_prob() > threshold))
}

/// Sample mean and normal-approximation 95% half-width.
pub fn mean_ci(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Z95 * (var / n as f64).sqrt())
}

/// Mean over the last `fraction` of `values`, at least one item.
pub fn tail_mean(values: &[f64], fraction: f64) -> f64 {
    let len = values.len();
    let take = ((len as f64 * fraction).ceil() as usize).clamp(1, len.max(1));
    let tail = &values[len - take..];
    tail.iter().sum::<f64>() / tail.len() as f64
}

/// Per-slot metric values for one seeded run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSeries {
    pub scenario: String,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl TrialSeries {
    /// Mean over the last `fraction` of slots (at least one slot).
    pub fn tail_mean(&self, fraction: f64) -> f64 {
        tail_mean(&self.values, fraction)
    }
}

/// Per-slot mean and half-width across trials.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateCurve {
    pub mean: Vec<f64>,
    pub half_width: Vec<f64>,
    pub trials: usize,
}

impl AggregateCurve {
    /// Panics when `trials` is empty or the series lengths differ.
    pub fn from_trials(trials: &[TrialSeries]) -> Self {
        assert!(!trials.is_empty(), "at least one trial");
        let len = trials[0].values.len();
        assert!(
            trials.iter().all(|t| t.values.len() == len),
            "equal-length series"
        );
        let (mean, half_width) = (0..len)
            .map(|i| {
                let column: Vec<f64> = trials.iter().map(|t| t.values[i]).collect();
                mean_ci(&column)
            })
            .unzip();
        AggregateCurve {
            mean,
            half_width,
            trials: trials.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::InterferenceHypergraph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn state(rates: Vec<f64>, active: Vec<bool>) -> SlotState {
        let n = rates.len();
        SlotState {
            slot_index: 1,
            assignment: ChannelAssignment::uniform(n, 0),
            jamming: Jamming::none(0),
            active_mask: active,
            rates,
        }
    }

    #[test]
    fn network_rate_modes() {
        let s = state(vec![1.0, 2.0], vec![true, true]);
        assert_eq!(network_rate(&s, RateMode::MeanActive), 1.5);
        assert_eq!(network_rate(&s, RateMode::Sum), 3.0);
        let idle = state(vec![0.0, 0.0], vec![false, false]);
        assert_eq!(network_rate(&idle, RateMode::MeanActive), 0.0);
        assert_eq!(network_rate(&idle, RateMode::Sum), 0.0);
        let s = state(vec![1.5, 0.0, 2.5], vec![true, false, true]);
        assert_eq!(
            network_rate(&s, RateMode::Sum),
            network_rate(&s, RateMode::MeanActive) * s.num_active() as f64
        );
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(
            normalized_capacity(&state(vec![2.0; 3], vec![true; 3]), 2.0),
            1.0
        );
        assert_eq!(
            normalized_capacity(&state(vec![0.0; 3], vec![false; 3]), 2.0),
            0.0
        );
        let full = normalized_capacity(&state(vec![1.0, 2.0, 0.5], vec![true; 3]), 2.0);
        let half = normalized_capacity(&state(vec![0.5, 1.0, 0.25], vec![true; 3]), 2.0);
        assert!((half - full / 2.0).abs() < 1e-15);
    }

    #[test]
    fn convergence_detection() {
        assert_eq!(detect_convergence(&[3; 20], 5), Some(0));
        let alternating: Vec<u8> = (0..200).map(|i| (i % 2) as u8).collect();
        assert_eq!(detect_convergence(&alternating, 1), None);
        let mut series: Vec<u32> = (0..100).collect();
        series.extend(std::iter::repeat_n(7, 60));
        assert_eq!(detect_convergence(&series, 50), Some(100));
        assert_eq!(detect_convergence(&series, 60), None);
    }

    #[test]
    fn strategy_convergence() {
        let soft = vec![MixedStrategy::uniform(2)];
        let hard = vec![MixedStrategy::new(vec![0.995, 0.005]).unwrap()];
        assert_eq!(
            detect_strategy_convergence(&[soft.clone(), hard.clone()], 0.99),
            Some(1)
        );
        assert_eq!(detect_strategy_convergence(&[soft], 0.99), None);
    }

    #[test]
    fn ne_bounds_on_unique_equilibrium() {
        // one user, channel 1 jammed: every NE has value 0
        let hg = InterferenceHypergraph::empty(1);
        let g = GameSpec::hypergraph(hg, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = ne_bounds(
            &g,
            &NeContext::Fixed(Jamming::single(1)),
            &[true],
            50,
            100,
            &mut rng,
        )
        .unwrap();
        assert_eq!((b.best, b.worst), (0.0, 0.0));
        assert_eq!(b.values.len(), 50);
    }

    #[test]
    fn ne_bounds_match_enumeration_two_by_two() {
        let hg = InterferenceHypergraph::new(2, vec![[0, 1]], vec![], 3).unwrap();
        let g = GameSpec::hypergraph(hg, 2).unwrap();
        let jam = Jamming::single(0);
        let active = [true, true];
        let ne = g.enumerate_pure_nash(&jam, &active, 100).unwrap();
        let values: Vec<f64> = ne
            .iter()
            .map(|a| g.network_value(a, &jam, &active))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = ne_bounds(&g, &NeContext::Fixed(jam), &active, 200, 100, &mut rng).unwrap();
        assert!(b.best >= b.worst);
        assert_eq!(b.best, values.iter().copied().fold(f64::MIN, f64::max));
        assert_eq!(b.worst, values.iter().copied().fold(f64::MAX, f64::min));
    }

    #[test]
    fn mean_ci_and_curves() {
        let (m, h) = mean_ci(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((h - Z95 * (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_ci(&[4.0]), (4.0, 0.0));

        let t = |v: Vec<f64>| TrialSeries {
            scenario: "s".into(),
            seed: 0,
            values: v,
        };
        let a = t(vec![1.0, 2.0, 3.0, 4.0]);
        let b = t(vec![3.0, 2.0, 1.0, 0.0]);
        let forward = AggregateCurve::from_trials(&[a.clone(), b.clone()]);
        let reverse = AggregateCurve::from_trials(&[b, a.clone()]);
        assert_eq!(forward.mean, reverse.mean);
        assert_eq!(forward.mean, vec![2.0; 4]);
        assert!(forward.half_width.iter().all(|&h| h >= 0.0));
        assert_eq!(a.tail_mean(0.5), 3.5);
        assert_eq!(a.tail_mean(0.1), 4.0);
    }
}
