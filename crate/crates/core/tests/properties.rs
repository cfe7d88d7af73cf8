mod common;

use std::collections::BTreeSet;

use antijam::env::{ChannelAssignment, ChannelSet, Jamming};
use antijam::game::{GameSpec, DEFAULT_ENUMERATION_CAP};
use antijam::harness::{simulate, Algorithm, ScenarioConfig, ScenarioKind};
use antijam::jammer::{jammer_action, JammerPattern};
use antijam::learning::{MixedStrategy, ObservedState, QParams, QTable};
use antijam::metrics::{AggregateCurve, TrialSeries};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn rates_nonnegative_and_zero_when_idle(seed in any::<u64>(), n in 1usize..6, m in 1usize..5) {
        let mut rng = instance_rng(seed);
        let world = random_geometric_world(&mut rng, n, m);
        let a = random_assignment(&mut rng, n, m);
        let active = random_active(&mut rng, n);
        let jamming = random_jamming(&mut rng, m);
        let rates = world.rates(&a, &jamming, &active);
        for (r, &on) in rates.iter().zip(&active) {
            prop_assert!(r.is_finite() && *r >= 0.0);
            if !on {
                prop_assert_eq!(*r, 0.0);
            }
        }
    }

    #[test]
    fn extra_interferer_never_raises_rate(seed in any::<u64>(), n in 2usize..6, m in 1usize..5) {
        let mut rng = instance_rng(seed);
        let world = random_geometric_world(&mut rng, n, m);
        let a = random_assignment(&mut rng, n, m);
        let mut active = vec![true; n];
        let jamming = Jamming::single(0);
        let with = world.rates(&a, &jamming, &active);
        active[n - 1] = false;
        let without = world.rates(&a, &jamming, &active);
        for u in 0..n - 1 {
            prop_assert!(without[u] >= with[u]);
        }
    }

    #[test]
    fn stronger_jammer_never_raises_rate(seed in any::<u64>(), n in 1usize..6, m in 1usize..5, scale in 1.0f64..10.0) {
        let mut rng = instance_rng(seed);
        let weak = random_geometric_world(&mut rng, n, m);
        let mut strong = weak.clone();
        strong.params.jam_power *= scale;
        let a = random_assignment(&mut rng, n, m);
        let active = vec![true; n];
        let jamming = random_jamming(&mut rng, m);
        let before = weak.rates(&a, &jamming, &active);
        let after = strong.rates(&a, &jamming, &active);
        for (b, x) in before.iter().zip(&after) {
            prop_assert!(x <= b);
        }
    }

    #[test]
    fn unilateral_change_matches_potential_change(seed in any::<u64>(), n in 1usize..7, m in 1usize..5) {
        let mut rng = instance_rng(seed);
        let graph = random_hypergraph(&mut rng, n);
        let game = GameSpec::hypergraph(graph.clone(), m).unwrap();
        let jamming = random_jamming(&mut rng, m);
        let active = random_active(&mut rng, n);
        let a = random_assignment(&mut rng, n, m);
        let phi = |x: &ChannelAssignment| {
            -(reference_total_interference(&graph, x.as_slice(), &active, jamming.union(), m) as f64)
        };
        for user in 0..n {
            for c in 0..m {
                let b = a.with(user, c);
                let du = game.user_utility(user, b.as_slice(), &jamming, &active)
                    - game.user_utility(user, a.as_slice(), &jamming, &active);
                prop_assert!((du - (phi(&b) - phi(&a))).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn enumerated_equilibria_are_fixpoints(seed in any::<u64>(), n in 1usize..5, m in 1usize..4) {
        let mut rng = instance_rng(seed);
        let game = GameSpec::hypergraph(random_hypergraph(&mut rng, n), m).unwrap();
        let jamming = random_jamming(&mut rng, m);
        let active = random_active(&mut rng, n);
        let equilibria = game.enumerate_pure_nash(&jamming, &active, DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert!(!equilibria.is_empty());
        for a in &equilibria {
            prop_assert!(reference_is_nash(&game, a, &jamming, &active));
            for user in 0..n {
                prop_assert_eq!(&game.best_response_step(a, user, &jamming, &active), a);
            }
        }
    }

    #[test]
    fn strategy_stays_on_simplex(
        m in 1usize..8,
        updates in prop::collection::vec((0usize..8, 0.0f64..=1.0, 1e-6f64..0.999), 1..2000),
    ) {
        let mut p = MixedStrategy::uniform(m);
        for (chosen, reward, step) in updates {
            p.update(chosen % m, reward, step).unwrap();
            prop_assert!(p.probs().iter().all(|&x| (0.0..=1.0).contains(&x)));
            prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn q_values_stay_bounded(
        m in 1usize..6,
        lr in 0.01f64..=1.0,
        discount in 0.0f64..0.99,
        r_max in 0.1f64..10.0,
        updates in prop::collection::vec((0usize..7, 0usize..6, 0.0f64..=1.0, 0usize..7), 1..500),
    ) {
        let mut q = QTable::new(m, QParams { learning_rate: lr, discount }).unwrap();
        let state = |i: usize| if i % (m + 1) == m { ObservedState::Unknown } else { ObservedState::Jammed(i % (m + 1)) };
        let bound = r_max / (1.0 - discount);
        for (s, a, frac, s_next) in updates {
            q.update(state(s), a % m, frac * r_max, state(s_next));
        }
        prop_assert!(q.values().iter().all(|&v| (0.0..=bound * (1.0 + 1e-12)).contains(&v)));
    }

    #[test]
    fn channel_set_matches_btree(items in prop::collection::vec(0usize..64, 0..20), probe in 0usize..64) {
        let set: ChannelSet = items.iter().copied().collect();
        let reference: BTreeSet<usize> = items.iter().copied().collect();
        prop_assert_eq!(set.len(), reference.len());
        prop_assert_eq!(set.contains(probe), reference.contains(&probe));
        prop_assert_eq!(set.iter().collect::<Vec<_>>(), reference.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(set.first(), reference.first().copied());
    }

    #[test]
    fn jammer_targets_stay_in_range(
        m in 1usize..10,
        t in any::<u64>(),
        draw in 0.0f64..1.0,
        observed in prop::collection::vec(0usize..10, 0..6),
    ) {
        let observed: Vec<usize> = observed.into_iter().map(|c| c % m).collect();
        for pattern in [
            JammerPattern::sweep(),
            JammerPattern::default_comb(m.max(2)),
            JammerPattern::Fixed { channel: m - 1 },
            JammerPattern::Reactive,
            JammerPattern::Random,
        ] {
            if pattern.validate(m).is_err() {
                continue;
            }
            let set = jammer_action(&pattern, t, m, Some(&observed), draw);
            prop_assert!(!set.is_empty());
            prop_assert!(set.iter().all(|c| c < m));
        }
    }

    #[test]
    fn aggregate_ignores_trial_order(
        columns in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 1..8),
        rotate in 0usize..8,
    ) {
        let trials: Vec<TrialSeries> = columns
            .iter()
            .enumerate()
            .map(|(i, v)| TrialSeries { scenario: "s".into(), seed: i as u64, values: v.clone() })
            .collect();
        let mut shuffled = trials.clone();
        shuffled.rotate_left(rotate % trials.len());
        shuffled.reverse();
        let a = AggregateCurve::from_trials(&trials);
        let b = AggregateCurve::from_trials(&shuffled);
        for (x, y) in a.mean.iter().zip(&b.mean) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        for (x, y) in a.half_width.iter().zip(&b.half_width) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn simulation_is_deterministic(seed in any::<u64>(), kind in 0usize..3) {
        let kind = [ScenarioKind::Stackelberg, ScenarioKind::Markov, ScenarioKind::Hypergraph][kind];
        let mut c = ScenarioConfig::new(kind, 3, 3);
        c.seed = seed;
        c.trials = 2;
        c.slots = 40;
        c.ne_trials = 10;
        let c = c.resolve().unwrap();
        let a = simulate(&c).unwrap();
        let b = simulate(&c).unwrap();
        prop_assert_eq!(&a.series, &b.series);
        prop_assert_eq!(&a.summary, &b.summary);
        prop_assert!(a.series.iter().any(|s| s.algorithm == Algorithm::Random));
    }
}
