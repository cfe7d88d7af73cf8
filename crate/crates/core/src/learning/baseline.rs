use serde::{Deserialize, Serialize};

use super::ObservedState;
use crate::jammer::uniform_index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    /// Uniform over all channels.
    Random,
    /// Uniform over the channels not sensed as jammed in the previous slot.
    Sensing,
}

pub fn baseline_action(
    kind: BaselineKind,
    s: ObservedState,
    num_channels: usize,
    draw: f64,
) -> usize {
    match (kind, s) {
        (BaselineKind::Sensing, ObservedState::Jammed(j))
            if num_channels > 1 && j < num_channels =>
        {
            let c = uniform_index(draw, num_channels - 1);
            if c >= j {
                c + 1
            } else {
                c
            }
        }
        _ => uniform_index(draw, num_channels),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn histogram(kind: BaselineKind, s: ObservedState, m: usize, draws: usize) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = vec![0; m];
        for _ in 0..draws {
            counts[baseline_action(kind, s, m, rng.random())] += 1;
        }
        counts
    }

    fn within_3_sigma(count: usize, draws: usize, p: f64) -> bool {
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        (count as f64 - mean).abs() <= 3.0 * sd
    }

    #[test]
    fn sensing_avoids_last_jammed_uniformly() {
        let draws = 100_000;
        let counts = histogram(BaselineKind::Sensing, ObservedState::Jammed(2), 4, draws);
        assert_eq!(counts[2], 0);
        for c in [0, 1, 3] {
            assert!(within_3_sigma(counts[c], draws, 1.0 / 3.0), "{counts:?}");
        }
    }

    #[test]
    fn sensing_single_channel_and_unknown() {
        assert_eq!(
            baseline_action(BaselineKind::Sensing, ObservedState::Jammed(0), 1, 0.7),
            0
        );
        let counts = histogram(BaselineKind::Sensing, ObservedState::Unknown, 3, 30_000);
        assert!(counts.iter().all(|&c| within_3_sigma(c, 30_000, 1.0 / 3.0)));
    }

    #[test]
    fn random_is_uniform() {
        let draws = 100_000;
        let counts = histogram(BaselineKind::Random, ObservedState::Jammed(1), 4, draws);
        for c in counts {
            assert!(within_3_sigma(c, draws, 0.25));
        }
    }
}
