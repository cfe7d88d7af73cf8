//! Built-in experiment presets.
//!
//! Each preset expands to one or more unresolved configs; resolve them after
//! applying any [`Overrides`].

use super::config::{HypergraphSource, RelationalGains, ScenarioConfig, ScenarioKind};
use crate::env::NodeGeometry;
use crate::jammer::JammerPattern;

pub const PRESET_NAMES: [&str; 4] = [
    "fig3-stackelberg",
    "fig4-sweep",
    "fig4-comb",
    "fig5-hypergraph",
];

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig3-stackelberg" => "jammer-led Stackelberg game: hierarchical learning vs best/worst equilibrium and random, J = 1.0 and 0.5",
        "fig4-sweep" => "Markov game under a sweep jammer: collaborative vs independent Q-learning, sensing and random",
        "fig4-comb" => "Markov game under a comb jammer: collaborative vs independent Q-learning, sensing and random",
        "fig5-hypergraph" => "hypergraph game: automata on the hypergraph vs the strong-edge graph vs random; weak-hyperedge, channel and activity sweeps",
        _ => return None,
    })
}

/// Command-line style overrides applied before resolution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub slots: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ScenarioConfig) {
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(t) = self.trials {
            config.trials = t;
        }
        if let Some(s) = self.slots {
            config.slots = s;
            config.learning.epsilon_decay_slots = None;
        }
    }
}

pub fn preset(name: &str) -> Option<Vec<ScenarioConfig>> {
    Some(match name {
        "fig3-stackelberg" => fig3(),
        "fig4-sweep" => vec![fig4("fig4-sweep", JammerPattern::sweep())],
        "fig4-comb" => vec![fig4("fig4-comb", JammerPattern::default_comb(4))],
        "fig5-hypergraph" => fig5(),
        _ => return None,
    })
}

pub const FIG3_JAM_POWERS: [f64; 2] = [1.0, 0.5];

pub fn fig3_id(jam_power: f64) -> String {
    format!("fig3-stackelberg-j{jam_power:.1}")
}

fn fig3() -> Vec<ScenarioConfig> {
    FIG3_JAM_POWERS
        .iter()
        .map(|&j| {
            let mut c = ScenarioConfig::new(ScenarioKind::Stackelberg, 4, 4);
            c.id = Some(fig3_id(j));
            c.radio.jam_power = j;
            c.geometry = Some(NodeGeometry {
                user_pairs: vec![
                    [[6.5, 5.5], [5.7, 6.1]],
                    [[7.2, 6.0], [7.2, 5.0]],
                    [[7.2, 8.0], [7.6, 8.9]],
                    [[6.6, 7.3], [6.6, 6.3]],
                ],
                jammer_positions: vec![[4.0, 4.0]],
            });
            c.slots = 20_000;
            c.trials = 50;
            c.learning.sla_step = 0.01;
            c
        })
        .collect()
}

fn fig4(id: &str, jammer: JammerPattern) -> ScenarioConfig {
    let mut c = ScenarioConfig::new(ScenarioKind::Markov, 2, 4);
    c.id = Some(id.to_string());
    c.jammers = Some(vec![jammer]);
    c.geometry = Some(NodeGeometry {
        user_pairs: vec![[[0.0, 0.0], [1.0, 0.0]], [[0.0, 3.0], [1.0, 3.0]]],
        jammer_positions: vec![[2.0, 1.5]],
    });
    c.slots = 10_000;
    c.trials = 20;
    c.learning.discount = 0.5;
    c.learning.epsilon_end = 0.05;
    c
}

/// Strong edges form an 8-cycle; weak hyperedges join same-parity users,
/// which a strong-edge-only colouring is free to put on one channel.
pub const FIG5_STRONG: [[usize; 2]; 8] = [
    [0, 1],
    [1, 2],
    [2, 3],
    [3, 4],
    [4, 5],
    [5, 6],
    [6, 7],
    [0, 7],
];
pub const FIG5_WEAK: [[usize; 3]; 5] = [[0, 2, 4], [1, 3, 5], [2, 4, 6], [3, 5, 7], [0, 2, 6]];
pub const FIG5_CHANNELS: [usize; 3] = [3, 4, 5];
pub const FIG5_ACTIVITY: [f64; 3] = [0.6, 0.8, 1.0];

pub fn fig5_edge_list(weak_count: usize) -> String {
    let mut text = String::new();
    for [u, v] in FIG5_STRONG {
        text.push_str(&format!("S {u} {v}\n"));
    }
    for [a, b, c] in FIG5_WEAK.iter().take(weak_count) {
        text.push_str(&format!("W {a} {b} {c}\n"));
    }
    text
}

pub fn fig5_hwi_id(weak_count: usize) -> String {
    format!("fig5-hwi{weak_count}")
}

pub fn fig5_channels_id(m: usize) -> String {
    format!("fig5-m{m}")
}

pub fn fig5_activity_id(p: f64) -> String {
    format!("fig5-p{p:.1}")
}

fn fig5_base(id: String, weak_count: usize, num_channels: usize, p: f64) -> ScenarioConfig {
    let mut c = ScenarioConfig::new(ScenarioKind::Hypergraph, 8, num_channels);
    c.id = Some(id);
    c.jammers = Some(vec![JammerPattern::Fixed { channel: 0 }]);
    c.hypergraph = Some(HypergraphSource::Explicit {
        edges: fig5_edge_list(weak_count),
        activation_threshold: 3,
    });
    c.relational_gains = Some(RelationalGains {
        direct: 1.0,
        strong: 0.5,
        weak: 0.05,
        background: 0.0,
        jammer: 1.0,
    });
    c.active_probability = p;
    c.slots = 12_000;
    c.trials = 20;
    c.learning.sla_step = 0.012;
    c
}

fn fig5() -> Vec<ScenarioConfig> {
    let all = FIG5_WEAK.len();
    let mut out: Vec<ScenarioConfig> = (0..=all)
        .map(|k| fig5_base(fig5_hwi_id(k), k, 4, 1.0))
        .collect();
    out.extend(
        FIG5_CHANNELS
            .iter()
            .map(|&m| fig5_base(fig5_channels_id(m), all, m, 1.0)),
    );
    out.extend(
        FIG5_ACTIVITY
            .iter()
            .map(|&p| fig5_base(fig5_activity_id(p), all, 4, p)),
    );
    out
}
