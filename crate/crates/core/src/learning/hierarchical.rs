//! Two-timescale leader–follower learning.
//!
//! The jammer (leader) runs a single-state Q-learner over its channels and
//! holds each choice for a window of `follower_window` slots. Followers see the
//! announced leader channel and keep one stochastic automaton per leader
//! channel, updated every slot with their normalized rate. When a window closes
//! the leader is credited with `-(mean network sum rate)` over the window.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{EpsilonSchedule, MixedStrategy, ObservedState, QParams, QTable};
use crate::env::ChannelAssignment;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchicalConfig {
    /// Slots per leader decision.
    pub follower_window: u64,
    pub leader_learning_rate: f64,
    /// Leader exploration, indexed by slot.
    pub leader_epsilon: EpsilonSchedule,
    /// Follower automaton step size `b`.
    pub sla_step: f64,
}

impl Default for HierarchicalConfig {
    fn default() -> Self {
        HierarchicalConfig {
            follower_window: 50,
            leader_learning_rate: 0.1,
            leader_epsilon: EpsilonSchedule {
                start: 0.3,
                end: 0.01,
                decay_slots: 5000,
            },
            sla_step: 0.08,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HierarchicalLearner {
    config: HierarchicalConfig,
    leader: QTable,
    /// `followers[user][leader_channel]`
    followers: Vec<Vec<MixedStrategy>>,
    r_max: f64,
    slot: u64,
    leader_channel: usize,
    window_sum: f64,
    window_len: u64,
}

impl HierarchicalLearner {
    pub fn new(
        num_users: usize,
        num_channels: usize,
        r_max: f64,
        config: HierarchicalConfig,
    ) -> Result<Self> {
        if config.follower_window == 0 {
            return Err(Error::config(
                "learning.follower_window",
                "must be at least 1",
            ));
        }
        if !(config.sla_step > 0.0 && config.sla_step < 1.0) {
            return Err(Error::config("learning.sla_step", "must lie in (0, 1)"));
        }
        if r_max.is_nan() || r_max <= 0.0 {
            return Err(Error::config("r_max", "must be > 0"));
        }
        let leader = QTable::new(
            num_channels,
            QParams {
                learning_rate: config.leader_learning_rate,
                discount: 0.0,
            },
        )?;
        Ok(HierarchicalLearner {
            config,
            leader,
            followers: vec![vec![MixedStrategy::uniform(num_channels); num_channels]; num_users],
            r_max,
            slot: 0,
            leader_channel: 0,
            window_sum: 0.0,
            window_len: 0,
        })
    }

    pub fn leader_table(&self) -> &QTable {
        &self.leader
    }

    pub fn follower_strategy(&self, user: usize, leader_channel: usize) -> &MixedStrategy {
        &self.followers[user][leader_channel]
    }

    /// Picks this slot's leader channel (a fresh ε-greedy choice at each
    /// window start) and samples every follower's channel against it.
    pub fn act<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (usize, ChannelAssignment) {
        if self.window_len == 0 {
            let eps = self.config.leader_epsilon.value(self.slot);
            let explore: f64 = rng.random();
            let channel: f64 = rng.random();
            self.leader_channel =
                self.leader
                    .epsilon_greedy(ObservedState::Unknown, eps, explore, channel);
        }
        let j = self.leader_channel;
        let choices = self
            .followers
            .iter()
            .map(|per_leader| per_leader[j].sample(rng.random()))
            .collect::<Vec<_>>();
        (j, choices.into())
    }

    /// Follower reinforcement for active users, then the leader update when
    /// the window closes.
    pub fn learn(
        &mut self,
        assignment: &ChannelAssignment,
        rates: &[f64],
        active: &[bool],
    ) -> Result<()> {
        let j = self.leader_channel;
        for (n, strategies) in self.followers.iter_mut().enumerate() {
            if active[n] {
                let reward = (rates[n] / self.r_max).clamp(0.0, 1.0);
                strategies[j].update(assignment[n], reward, self.config.sla_step)?;
            }
        }
        self.window_sum += rates.iter().sum::<f64>();
        self.window_len += 1;
        self.slot += 1;
        if self.window_len == self.config.follower_window {
            let utility = -self.window_sum / self.window_len as f64;
            self.leader
                .update(ObservedState::Unknown, j, utility, ObservedState::Unknown);
            self.window_sum = 0.0;
            self.window_len = 0;
        }
        Ok(())
    }
}
