//! Online channel-selection learners and the non-learning baselines.

mod baseline;
mod hierarchical;
mod qlearn;
mod sla;

pub use baseline::{baseline_action, BaselineKind};
pub use hierarchical::{HierarchicalConfig, HierarchicalLearner};
pub use qlearn::{
    collaborative_joint_selection, independent_selection, q_update, ObservedState, QParams, QTable,
};
pub use sla::{sla_update, MixedStrategy};

use serde::{Deserialize, Serialize};

/// Linear annealing from `start` to `end` over `decay_slots`, then constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub end: f64,
    pub decay_slots: u64,
}

impl EpsilonSchedule {
    pub fn constant(epsilon: f64) -> Self {
        EpsilonSchedule {
            start: epsilon,
            end: epsilon,
            decay_slots: 0,
        }
    }

    pub fn value(&self, t: u64) -> f64 {
        if t >= self.decay_slots {
            return self.end;
        }
        let frac = t as f64 / self.decay_slots as f64;
        self.start + (self.end - self.start) * frac
    }
}
