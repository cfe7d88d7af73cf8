//! Seeded trials × slots simulation loop.

use rand::Rng;
use rayon::prelude::*;

use super::config::{Algorithm, ScenarioConfig, ScenarioKind};
use super::seed::{splitmix64, stream_rng, trial_seed, Stream};
use crate::env::{ChannelAssignment, ChannelSet, Jamming, SlotState, World};
use crate::error::Result;
use crate::game::{GameSpec, DEFAULT_ENUMERATION_CAP};
use crate::hypergraph::InterferenceHypergraph;
use crate::jammer::{jammer_action, JammerPattern};
use crate::learning::{
    baseline_action, collaborative_joint_selection, independent_selection, BaselineKind,
    EpsilonSchedule, HierarchicalLearner, MixedStrategy, ObservedState, QTable,
};
use crate::metrics::{
    jammed_occupancy, mean_ci, ne_bounds, network_rate, normalized_capacity, tail_mean, NeBounds,
    NeContext, RateMode,
};

/// Pass cap for best-response runs behind the equilibrium bounds.
pub const BEST_RESPONSE_PASSES: usize = 1000;

pub const SUM_RATE: &str = "sum_rate";
pub const MEAN_RATE: &str = "mean_rate";
pub const NORMALIZED_CAPACITY: &str = "normalized_capacity";
pub const JAM_HIT: &str = "jam_hit";

/// Per-slot metrics emitted for a scenario kind.
pub fn metric_names(kind: ScenarioKind) -> &'static [&'static str] {
    match kind {
        ScenarioKind::Markov => &[SUM_RATE, MEAN_RATE, NORMALIZED_CAPACITY, JAM_HIT],
        _ => &[SUM_RATE, MEAN_RATE, NORMALIZED_CAPACITY],
    }
}

/// Everything derived once from a config and shared by all trials.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub config: ScenarioConfig,
    pub world: World,
    pub r_max: f64,
    pub hypergraph: Option<InterferenceHypergraph>,
    strong_graph: Option<InterferenceHypergraph>,
    /// Leader channel faced by non-learning followers in Stackelberg runs.
    pub stackelberg_channel: Option<usize>,
}

impl Prepared {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let world = config.build_world()?;
        let r_max = world.r_max();
        let hypergraph = match config.scenario {
            ScenarioKind::Hypergraph => Some(config.build_hypergraph()?),
            _ => None,
        };
        let strong_graph = hypergraph.as_ref().map(InterferenceHypergraph::strong_only);
        let stackelberg_channel = if config.scenario == ScenarioKind::Stackelberg {
            let game = GameSpec::stackelberg(world.clone())?;
            let active = vec![true; world.num_users()];
            Some(
                game.stackelberg_solve(&active, DEFAULT_ENUMERATION_CAP)?
                    .leader_channel,
            )
        } else {
            None
        };
        Ok(Prepared {
            config: config.clone(),
            world,
            r_max,
            hypergraph,
            strong_graph,
            stackelberg_channel,
        })
    }

    /// Per-slot metric series of one trial, `[metric][slot]`.
    pub fn run_trial(&self, algorithm: Algorithm, trial: usize) -> Result<Vec<Vec<f64>>> {
        let cfg = &self.config;
        let n = cfg.num_users;
        let base = trial_seed(cfg.seed, trial);
        let mut activity_rng = stream_rng(base, Stream::Activity);
        let mut jammer_rng = stream_rng(base, Stream::Jammer);
        let mut agent_rng = stream_rng(base, Stream::Agent);

        let mut agent = Agent::new(self, algorithm)?;
        let patterns = cfg.jammers.as_deref().unwrap_or_default();
        let metrics = metric_names(cfg.scenario);
        let mut series = vec![Vec::with_capacity(cfg.slots as usize); metrics.len()];
        let mut state = SlotState::initial(n, self.world.num_jammers());
        let mut observed = ObservedState::Unknown;

        for t in 0..cfg.slots {
            let activity: Vec<f64> = (0..n).map(|_| activity_rng.random()).collect();
            let jam_draws: Vec<f64> = (0..self.world.num_jammers())
                .map(|_| jammer_rng.random())
                .collect();
            let active = self.world.activity_from_draws(&activity);

            let (jamming, assignment) = if let Agent::Hierarchical(h) = &mut agent {
                let (leader, a) = h.act(&mut agent_rng);
                (Jamming::single(leader), a)
            } else {
                let jamming = match cfg.scenario {
                    ScenarioKind::Stackelberg => {
                        Jamming::single(self.stackelberg_channel.expect("solved at preparation"))
                    }
                    _ => self.pattern_jamming(patterns, t, &state, &jam_draws),
                };
                let a = agent.select(self, t, observed, &active, &mut agent_rng);
                (jamming, a)
            };

            let next = self
                .world
                .advance_slot(&state, jamming, assignment, &activity)?;
            let next_observed = ObservedState::from_jammed(next.jammed_channels());
            agent.learn(self, observed, next_observed, &next)?;

            let values = [
                network_rate(&next, RateMode::Sum),
                network_rate(&next, RateMode::MeanActive),
                normalized_capacity(&next, self.r_max),
                if jammed_occupancy(&next) { 1.0 } else { 0.0 },
            ];
            for (s, v) in series.iter_mut().zip(values) {
                s.push(v);
            }
            state = next;
            observed = next_observed;
        }
        Ok(series)
    }

    fn pattern_jamming(
        &self,
        patterns: &[JammerPattern],
        t: u64,
        previous: &SlotState,
        draws: &[f64],
    ) -> Jamming {
        let seen: Vec<usize> = previous
            .assignment
            .as_slice()
            .iter()
            .zip(&previous.active_mask)
            .filter(|(_, &a)| a)
            .map(|(&c, _)| c)
            .collect();
        let observed = (t > 0).then_some(seen.as_slice());
        Jamming(
            patterns
                .iter()
                .zip(draws)
                .map(|(p, &d)| jammer_action(p, t, self.config.num_channels, observed, d))
                .collect(),
        )
    }

    /// Best/worst follower equilibria against the Stackelberg leader channel.
    pub fn equilibrium_bounds(&self) -> Result<Option<NeBounds>> {
        let (game, leader) = match (self.config.scenario, self.stackelberg_channel) {
            (ScenarioKind::Stackelberg, Some(c)) => (GameSpec::stackelberg(self.world.clone())?, c),
            _ => return Ok(None),
        };
        let mut rng = stream_rng(splitmix64(self.config.seed), Stream::Equilibrium);
        let active = vec![true; self.config.num_users];
        Ok(ne_bounds(
            &game,
            &NeContext::Fixed(Jamming::single(leader)),
            &active,
            self.config.ne_trials,
            BEST_RESPONSE_PASSES,
            &mut rng,
        ))
    }
}

enum Agent {
    Hierarchical(HierarchicalLearner),
    QLearning {
        tables: Vec<QTable>,
        collaborative: bool,
        epsilon: EpsilonSchedule,
    },
    Baseline(BaselineKind),
    Automata {
        strategies: Vec<MixedStrategy>,
        strong_only: bool,
        step: f64,
    },
}

impl Agent {
    fn new(p: &Prepared, algorithm: Algorithm) -> Result<Self> {
        let cfg = &p.config;
        let n = cfg.num_users;
        let m = cfg.num_channels;
        Ok(match algorithm {
            Algorithm::Hierarchical => Agent::Hierarchical(HierarchicalLearner::new(
                n,
                m,
                p.r_max,
                cfg.learning.hierarchical(),
            )?),
            Algorithm::CollaborativeQ | Algorithm::IndependentQ => Agent::QLearning {
                tables: vec![QTable::new(m, cfg.learning.q_params())?; n],
                collaborative: algorithm == Algorithm::CollaborativeQ,
                epsilon: cfg.learning.epsilon(),
            },
            Algorithm::Random => Agent::Baseline(BaselineKind::Random),
            Algorithm::Sensing => Agent::Baseline(BaselineKind::Sensing),
            Algorithm::HypergraphSla | Algorithm::GraphSla => Agent::Automata {
                strategies: vec![MixedStrategy::uniform(m); n],
                strong_only: algorithm == Algorithm::GraphSla,
                step: cfg.learning.sla_step,
            },
            Algorithm::BestNe | Algorithm::WorstNe => {
                unreachable!("equilibrium bounds are not simulated slot by slot")
            }
        })
    }

    fn select<R: Rng>(
        &mut self,
        p: &Prepared,
        t: u64,
        s: ObservedState,
        active: &[bool],
        rng: &mut R,
    ) -> ChannelAssignment {
        let m = p.config.num_channels;
        match self {
            Agent::Hierarchical(_) => unreachable!("selected jointly with the leader"),
            Agent::QLearning {
                tables,
                collaborative,
                epsilon,
            } => {
                let eps = epsilon.value(t);
                if *collaborative {
                    let order = p.config.learning.claim_order.as_deref().unwrap_or_default();
                    collaborative_joint_selection(tables, s, order, active, eps, rng)
                } else {
                    independent_selection(tables, s, eps, rng)
                }
            }
            Agent::Baseline(kind) => (0..p.config.num_users)
                .map(|_| baseline_action(*kind, s, m, rng.random()))
                .collect::<Vec<_>>()
                .into(),
            Agent::Automata { strategies, .. } => strategies
                .iter()
                .map(|st| st.sample(rng.random()))
                .collect::<Vec<_>>()
                .into(),
        }
    }

    fn learn(
        &mut self,
        p: &Prepared,
        s: ObservedState,
        s_next: ObservedState,
        slot: &SlotState,
    ) -> Result<()> {
        match self {
            Agent::Hierarchical(h) => h.learn(&slot.assignment, &slot.rates, &slot.active_mask),
            Agent::QLearning { tables, .. } => {
                for (n, table) in tables.iter_mut().enumerate() {
                    if slot.active_mask[n] {
                        table.update(s, slot.assignment[n], slot.rates[n], s_next);
                    }
                }
                Ok(())
            }
            Agent::Baseline(_) => Ok(()),
            Agent::Automata {
                strategies,
                strong_only,
                step,
            } => {
                let graph = if *strong_only {
                    p.strong_graph.as_ref()
                } else {
                    p.hypergraph.as_ref()
                }
                .expect("hypergraph scenario");
                let jammed: ChannelSet = slot.jammed_channels();
                let choices = slot.assignment.as_slice();
                for (n, st) in strategies.iter_mut().enumerate() {
                    if !slot.active_mask[n] {
                        continue;
                    }
                    let marginal =
                        graph.marginal_interference(n, choices, &slot.active_mask, jammed);
                    let reward = 1.0 - marginal as f64 / graph.marginal_bound(n) as f64;
                    st.update(choices[n], reward, *step)?;
                }
                Ok(())
            }
        }
    }
}

/// Per-slot series of one online algorithm, `[trial][metric][slot]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmSeries {
    pub algorithm: Algorithm,
    pub trials: Vec<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub metric: String,
    pub mean: f64,
    pub ci_half_width: f64,
    pub trials: usize,
    /// Per-trial tail means (or equilibrium values for the bounds).
    pub samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub scenario: String,
    pub r_max: f64,
    pub rows: Vec<SummaryRow>,
    /// Equilibrium bounds when requested (Stackelberg only).
    pub bounds: Option<NeBounds>,
}

impl RunSummary {
    pub fn row(&self, algorithm: Algorithm, metric: &str) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.metric == metric)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub config: ScenarioConfig,
    pub series: Vec<AlgorithmSeries>,
    pub summary: RunSummary,
}

/// Runs every configured algorithm over all trials in memory.
pub fn simulate(config: &ScenarioConfig) -> Result<RunOutput> {
    let prepared = Prepared::new(config)?;
    let metrics = metric_names(config.scenario);
    let id = config.id().to_string();
    let mut series = Vec::new();
    let mut rows = Vec::new();
    let mut bounds_cache: Option<Option<NeBounds>> = None;

    for &algorithm in config.algorithms() {
        if algorithm.is_online() {
            let trials: Vec<Vec<Vec<f64>>> = (0..config.trials)
                .into_par_iter()
                .map(|trial| prepared.run_trial(algorithm, trial))
                .collect::<Result<_>>()?;
            for (k, metric) in metrics.iter().enumerate() {
                let samples: Vec<f64> = trials
                    .iter()
                    .map(|t| tail_mean(&t[k], config.tail_fraction))
                    .collect();
                let (mean, half) = mean_ci(&samples);
                rows.push(SummaryRow {
                    scenario: id.clone(),
                    algorithm,
                    metric: metric.to_string(),
                    mean,
                    ci_half_width: half,
                    trials: samples.len(),
                    samples,
                });
            }
            series.push(AlgorithmSeries { algorithm, trials });
        } else {
            let bounds = match &bounds_cache {
                Some(b) => b.clone(),
                None => {
                    let b = prepared.equilibrium_bounds()?;
                    bounds_cache = Some(b.clone());
                    b
                }
            };
            let b = bounds.ok_or(crate::error::Error::NoEquilibrium)?;
            let value = if algorithm == Algorithm::BestNe {
                b.best
            } else {
                b.worst
            };
            let n = config.num_users as f64;
            for (metric, v) in [
                (SUM_RATE, value),
                (MEAN_RATE, value / n),
                (NORMALIZED_CAPACITY, value / (n * prepared.r_max)),
            ] {
                rows.push(SummaryRow {
                    scenario: id.clone(),
                    algorithm,
                    metric: metric.to_string(),
                    mean: v,
                    ci_half_width: 0.0,
                    trials: b.values.len(),
                    samples: vec![v],
                });
            }
        }
    }

    Ok(RunOutput {
        config: config.clone(),
        series,
        summary: RunSummary {
            scenario: id,
            r_max: prepared.r_max,
            rows,
            bounds: bounds_cache.flatten(),
        },
    })
}
