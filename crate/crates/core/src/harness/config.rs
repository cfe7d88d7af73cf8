//! Scenario configuration: strict JSON with documented defaults.

use serde::{Deserialize, Serialize};

use crate::env::{LinkGains, NodeGeometry, Position, RadioParams, World, MAX_CHANNELS};
use crate::error::{Error, Result};
use crate::hypergraph::{InterferenceHypergraph, DEFAULT_ACTIVATION_THRESHOLD};
use crate::jammer::JammerPattern;
use crate::learning::{EpsilonSchedule, HierarchicalConfig, QParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Stackelberg,
    Markov,
    Hypergraph,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Stackelberg => "stackelberg",
            ScenarioKind::Markov => "markov",
            ScenarioKind::Hypergraph => "hypergraph",
        }
    }

    pub fn default_algorithms(self) -> Vec<Algorithm> {
        use Algorithm::*;
        match self {
            ScenarioKind::Stackelberg => vec![Hierarchical, BestNe, WorstNe, Random],
            ScenarioKind::Markov => vec![CollaborativeQ, IndependentQ, Sensing, Random],
            ScenarioKind::Hypergraph => vec![HypergraphSla, GraphSla, Random],
        }
    }

    fn supports(self, alg: Algorithm) -> bool {
        alg == Algorithm::Random || self.default_algorithms().contains(&alg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Leader Q-learning over follower automata (Stackelberg).
    Hierarchical,
    /// Best equilibrium from repeated best-response runs (Stackelberg).
    BestNe,
    /// Worst equilibrium from repeated best-response runs (Stackelberg).
    WorstNe,
    /// Uniform channel per user per slot.
    Random,
    /// Q-learning with channel claims over the control channel (Markov).
    CollaborativeQ,
    /// Uncoordinated per-user Q-learning (Markov).
    IndependentQ,
    /// Avoid the channel sensed as jammed last slot (Markov).
    Sensing,
    /// Automata rewarded by marginal hypergraph interference.
    HypergraphSla,
    /// Automata rewarded by marginal interference on strong edges only.
    GraphSla,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hierarchical => "hierarchical",
            Algorithm::BestNe => "best-ne",
            Algorithm::WorstNe => "worst-ne",
            Algorithm::Random => "random",
            Algorithm::CollaborativeQ => "collaborative-q",
            Algorithm::IndependentQ => "independent-q",
            Algorithm::Sensing => "sensing",
            Algorithm::HypergraphSla => "hypergraph-sla",
            Algorithm::GraphSla => "graph-sla",
        }
    }

    /// Whether the algorithm produces per-slot series (as opposed to a bound).
    pub fn is_online(self) -> bool {
        !matches!(self, Algorithm::BestNe | Algorithm::WorstNe)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioSettings {
    pub tx_power: f64,
    pub jam_power: f64,
    pub noise_floor: f64,
    pub pathloss_exponent: f64,
    pub min_distance: f64,
}

impl Default for RadioSettings {
    fn default() -> Self {
        let p = RadioParams::default();
        RadioSettings {
            tx_power: p.tx_power,
            jam_power: p.jam_power,
            noise_floor: p.noise_floor,
            pathloss_exponent: p.pathloss_exponent,
            min_distance: p.min_distance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LearningSettings {
    /// Q-learning λ.
    pub learning_rate: f64,
    /// Q-learning γ.
    pub discount: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Slots over which ε anneals; half the run when absent.
    pub epsilon_decay_slots: Option<u64>,
    /// Automaton step size `b`.
    pub sla_step: f64,
    /// Leader hold time `T_f` in slots.
    pub follower_window: u64,
    pub leader_learning_rate: f64,
    /// Claiming order for collaborative Q-learning; identity when absent.
    pub claim_order: Option<Vec<usize>>,
}

impl Default for LearningSettings {
    fn default() -> Self {
        LearningSettings {
            learning_rate: 0.1,
            discount: 0.9,
            epsilon_start: 0.3,
            epsilon_end: 0.01,
            epsilon_decay_slots: None,
            sla_step: 0.08,
            follower_window: 50,
            leader_learning_rate: 0.1,
            claim_order: None,
        }
    }
}

impl LearningSettings {
    pub fn q_params(&self) -> QParams {
        QParams {
            learning_rate: self.learning_rate,
            discount: self.discount,
        }
    }

    pub fn epsilon(&self) -> EpsilonSchedule {
        EpsilonSchedule {
            start: self.epsilon_start,
            end: self.epsilon_end,
            decay_slots: self.epsilon_decay_slots.unwrap_or(0),
        }
    }

    pub fn hierarchical(&self) -> HierarchicalConfig {
        HierarchicalConfig {
            follower_window: self.follower_window,
            leader_learning_rate: self.leader_learning_rate,
            leader_epsilon: self.epsilon(),
            sla_step: self.sla_step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum HypergraphSource {
    /// Built from transmitter positions.
    Geometric {
        strong_radius: f64,
        weak_radius: f64,
        #[serde(default = "default_threshold")]
        activation_threshold: usize,
    },
    /// Edge-list text (`S u v` / `W u v w ...` lines).
    Explicit {
        edges: String,
        #[serde(default = "default_threshold")]
        activation_threshold: usize,
    },
}

fn default_threshold() -> usize {
    DEFAULT_ACTIVATION_THRESHOLD
}

/// Link gains derived from the hypergraph relation instead of geometry:
/// strong neighbours couple with `strong`, co-members of a weak hyperedge with
/// `weak`, every other pair with `background`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationalGains {
    pub direct: f64,
    pub strong: f64,
    pub weak: f64,
    #[serde(default)]
    pub background: f64,
    /// Gain from every jammer to every receiver.
    pub jammer: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Label used in CSV rows and output directory names.
    #[serde(default)]
    pub id: Option<String>,
    pub num_users: usize,
    pub num_channels: usize,
    #[serde(default)]
    pub radio: RadioSettings,
    #[serde(default)]
    pub geometry: Option<NodeGeometry>,
    /// Jammer behaviors (K = length). Must be empty for Stackelberg, whose
    /// single jammer is the leader.
    #[serde(default)]
    pub jammers: Option<Vec<JammerPattern>>,
    #[serde(default)]
    pub algorithms: Option<Vec<Algorithm>>,
    #[serde(default)]
    pub learning: LearningSettings,
    #[serde(default = "default_slots")]
    pub slots: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_active_probability")]
    pub active_probability: f64,
    #[serde(default)]
    pub hypergraph: Option<HypergraphSource>,
    #[serde(default)]
    pub relational_gains: Option<RelationalGains>,
    /// Best-response restarts behind the best/worst equilibrium bounds.
    #[serde(default = "default_ne_trials")]
    pub ne_trials: usize,
    /// Fraction of final slots averaged into summary statistics.
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    #[serde(default)]
    pub output: Option<String>,
}

fn default_slots() -> u64 {
    2000
}
fn default_trials() -> usize {
    20
}
fn default_seed() -> u64 {
    1
}
fn default_active_probability() -> f64 {
    1.0
}
fn default_ne_trials() -> usize {
    200
}
fn default_tail_fraction() -> f64 {
    0.1
}

/// Parses, fills defaults and validates a JSON document.
pub fn load_config(document: &str) -> Result<ScenarioConfig> {
    parse_config(document)?.resolve()
}

/// Strict parse without resolution, for callers that adjust fields first.
pub fn parse_config(document: &str) -> Result<ScenarioConfig> {
    serde_json::from_str(document).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        reason: e.to_string(),
    })
}

/// Transmitters on a square grid 4 m apart with receivers 1 m to the east;
/// jammers spread along a line through the middle of the grid.
pub fn default_geometry(num_users: usize, num_jammers: usize) -> NodeGeometry {
    let side = (num_users as f64).sqrt().ceil().max(1.0) as usize;
    let spacing = 4.0;
    let user_pairs = (0..num_users)
        .map(|i| {
            let tx: Position = [(i % side) as f64 * spacing, (i / side) as f64 * spacing];
            [tx, [tx[0] + 1.0, tx[1]]]
        })
        .collect();
    let mid = (side as f64 - 1.0) * spacing / 2.0;
    let jammer_positions = (0..num_jammers)
        .map(|k| [mid + 0.5 + k as f64 * spacing, mid + spacing / 2.0])
        .collect();
    NodeGeometry {
        user_pairs,
        jammer_positions,
    }
}

impl ScenarioConfig {
    /// Minimal config for a scenario; everything else defaulted.
    pub fn new(scenario: ScenarioKind, num_users: usize, num_channels: usize) -> Self {
        serde_json::from_value(serde_json::json!({
            "scenario": scenario,
            "num_users": num_users,
            "num_channels": num_channels,
        }))
        .expect("minimal config deserializes")
    }

    pub fn id(&self) -> &str {
        self.id.as_deref().unwrap_or(self.scenario.name())
    }

    pub fn num_jammers(&self) -> usize {
        match self.scenario {
            ScenarioKind::Stackelberg => 1,
            _ => self.jammers.as_ref().map_or(0, Vec::len),
        }
    }

    pub fn radio_params(&self) -> RadioParams {
        let r = &self.radio;
        RadioParams {
            num_channels: self.num_channels,
            tx_power: r.tx_power,
            jam_power: r.jam_power,
            noise_floor: r.noise_floor,
            pathloss_exponent: r.pathloss_exponent,
            min_distance: r.min_distance,
        }
    }

    pub fn algorithms(&self) -> &[Algorithm] {
        self.algorithms.as_deref().unwrap_or_default()
    }

    /// Fills every defaulted field and validates the result.
    pub fn resolve(mut self) -> Result<Self> {
        if self.id.is_none() {
            self.id = Some(self.scenario.name().to_string());
        }
        if self.jammers.is_none() {
            self.jammers = Some(match self.scenario {
                ScenarioKind::Stackelberg => vec![],
                ScenarioKind::Markov => vec![JammerPattern::sweep()],
                ScenarioKind::Hypergraph => vec![JammerPattern::Fixed { channel: 0 }],
            });
        }
        if self.algorithms.is_none() {
            self.algorithms = Some(self.scenario.default_algorithms());
        }
        if self.learning.epsilon_decay_slots.is_none() {
            self.learning.epsilon_decay_slots = Some(self.slots / 2);
        }
        if self.learning.claim_order.is_none() {
            self.learning.claim_order = Some((0..self.num_users).collect());
        }
        if self.geometry.is_none() {
            self.geometry = Some(default_geometry(self.num_users, self.num_jammers()));
        }
        if self.scenario == ScenarioKind::Hypergraph && self.hypergraph.is_none() {
            self.hypergraph = Some(HypergraphSource::Geometric {
                strong_radius: 4.5,
                weak_radius: 9.0,
                activation_threshold: DEFAULT_ACTIVATION_THRESHOLD,
            });
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_users == 0 {
            return Err(Error::config("num_users", "must be at least 1"));
        }
        if self.num_channels == 0 || self.num_channels > MAX_CHANNELS {
            return Err(Error::config(
                "num_channels",
                format!("must lie in [1, {MAX_CHANNELS}]"),
            ));
        }
        self.radio_params().validate()?;
        if self.slots == 0 {
            return Err(Error::config("slots", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.ne_trials == 0 {
            return Err(Error::config("ne_trials", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.active_probability) {
            return Err(Error::config("active_probability", "must lie in [0, 1]"));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::config("tail_fraction", "must lie in (0, 1]"));
        }
        if self.id().is_empty() || self.id().contains(['/', '\\', ',', '\n']) {
            return Err(Error::config(
                "id",
                "must be non-empty without '/', '\\', ',' or newlines",
            ));
        }

        let jammers = self.jammers.as_deref().unwrap_or_default();
        if self.scenario == ScenarioKind::Stackelberg && !jammers.is_empty() {
            return Err(Error::config(
                "jammers",
                "the Stackelberg jammer is the learning leader; leave jammers empty",
            ));
        }
        for j in jammers {
            j.validate(self.num_channels)?;
        }

        if let Some(geometry) = &self.geometry {
            geometry.validate()?;
            if geometry.num_users() != self.num_users {
                return Err(Error::config(
                    "geometry.user_pairs",
                    format!(
                        "expected {} pairs, got {}",
                        self.num_users,
                        geometry.num_users()
                    ),
                ));
            }
            if geometry.jammer_positions.len() != self.num_jammers() {
                return Err(Error::config(
                    "geometry.jammer_positions",
                    format!(
                        "expected {} positions, got {}",
                        self.num_jammers(),
                        geometry.jammer_positions.len()
                    ),
                ));
            }
        }

        let algorithms = self.algorithms();
        if algorithms.is_empty() {
            return Err(Error::config(
                "algorithms",
                "must list at least one algorithm",
            ));
        }
        for (i, a) in algorithms.iter().enumerate() {
            if !self.scenario.supports(*a) {
                return Err(Error::config(
                    "algorithms",
                    format!(
                        "{} is not available in {} scenarios",
                        a.name(),
                        self.scenario.name()
                    ),
                ));
            }
            if algorithms[..i].contains(a) {
                return Err(Error::config(
                    "algorithms",
                    format!("{} listed twice", a.name()),
                ));
            }
        }

        let l = &self.learning;
        l.q_params().validate()?;
        for (name, v) in [
            ("learning.epsilon_start", l.epsilon_start),
            ("learning.epsilon_end", l.epsilon_end),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(name, "must lie in [0, 1]"));
            }
        }
        if !(l.sla_step > 0.0 && l.sla_step < 1.0) {
            return Err(Error::config("learning.sla_step", "must lie in (0, 1)"));
        }
        if l.follower_window == 0 {
            return Err(Error::config(
                "learning.follower_window",
                "must be at least 1",
            ));
        }
        if !(l.leader_learning_rate > 0.0 && l.leader_learning_rate <= 1.0) {
            return Err(Error::config(
                "learning.leader_learning_rate",
                "must lie in (0, 1]",
            ));
        }
        if let Some(order) = &l.claim_order {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..self.num_users).collect::<Vec<_>>() {
                return Err(Error::config(
                    "learning.claim_order",
                    "must be a permutation of the user indices",
                ));
            }
        }

        match (self.scenario, &self.hypergraph) {
            (ScenarioKind::Hypergraph, Some(_)) => {
                self.build_hypergraph()?;
            }
            (ScenarioKind::Hypergraph, None) => {}
            (_, Some(_)) => {
                return Err(Error::config(
                    "hypergraph",
                    "only used by hypergraph scenarios",
                ));
            }
            (_, None) => {}
        }
        if let Some(g) = &self.relational_gains {
            if self.scenario != ScenarioKind::Hypergraph {
                return Err(Error::config(
                    "relational_gains",
                    "only used by hypergraph scenarios",
                ));
            }
            let values = [g.direct, g.strong, g.weak, g.background, g.jammer];
            if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || g.direct <= 0.0 {
                return Err(Error::config(
                    "relational_gains",
                    "gains must be finite and >= 0, direct > 0",
                ));
            }
        }
        Ok(())
    }

    /// The interference hypergraph of a hypergraph scenario.
    pub fn build_hypergraph(&self) -> Result<InterferenceHypergraph> {
        match &self.hypergraph {
            Some(HypergraphSource::Geometric {
                strong_radius,
                weak_radius,
                activation_threshold,
            }) => {
                let geometry = self
                    .geometry
                    .clone()
                    .unwrap_or_else(|| default_geometry(self.num_users, self.num_jammers()));
                InterferenceHypergraph::build(
                    &geometry,
                    *strong_radius,
                    *weak_radius,
                    *activation_threshold,
                )
            }
            Some(HypergraphSource::Explicit {
                edges,
                activation_threshold,
            }) => InterferenceHypergraph::parse_edge_list(
                edges,
                self.num_users,
                *activation_threshold,
            )
            .map_err(|e| Error::config("hypergraph.edges", e.to_string())),
            None => Err(Error::config("hypergraph", "missing hypergraph source")),
        }
    }

    /// World implied by the resolved config.
    pub fn build_world(&self) -> Result<World> {
        let params = self.radio_params();
        let gains = match (&self.relational_gains, self.scenario) {
            (Some(g), ScenarioKind::Hypergraph) => {
                relational_link_gains(&self.build_hypergraph()?, g, self.num_jammers())?
            }
            _ => {
                let geometry = self
                    .geometry
                    .clone()
                    .unwrap_or_else(|| default_geometry(self.num_users, self.num_jammers()));
                LinkGains::from_geometry(&geometry, &params)
            }
        };
        World::new(gains, params, self.active_probability)
    }
}

pub fn relational_link_gains(
    graph: &InterferenceHypergraph,
    g: &RelationalGains,
    num_jammers: usize,
) -> Result<LinkGains> {
    let n = graph.num_users();
    let mut cross = vec![vec![g.background; n]; n];
    for (i, row) in cross.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for members in graph.weak_hyperedges() {
        for &a in members {
            for &b in members {
                if a != b {
                    cross[a][b] = cross[a][b].max(g.weak);
                }
            }
        }
    }
    for &[a, b] in graph.strong_edges() {
        cross[a][b] = g.strong;
        cross[b][a] = g.strong;
    }
    LinkGains::new(
        vec![g.direct; n],
        cross,
        vec![vec![g.jammer; num_jammers]; n],
    )
}
