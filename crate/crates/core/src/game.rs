//! Channel-selection games and exact small-instance oracles.
//!
//! Rate games (Stackelberg, Markov) pay each user its own SINR rate. The
//! hypergraph game pays each user the negative of the generalized interference
//! it adds to the network, which makes `-I_total` an exact potential.

use rayon::prelude::*;

use crate::env::{user_rate, ChannelAssignment, Jamming, World};
use crate::error::{Error, Result};
use crate::hypergraph::InterferenceHypergraph;

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Utility gains at or below this are not improvements.
const IMPROVEMENT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameKind {
    Stackelberg,
    Markov,
    Hypergraph,
}

#[derive(Clone, Debug)]
pub enum GameSpec {
    /// One jammer (index 0) leads by choosing a single channel.
    Stackelberg(World),
    Markov(World),
    Hypergraph {
        graph: InterferenceHypergraph,
        num_channels: usize,
    },
}

impl GameSpec {
    pub fn stackelberg(world: World) -> Result<Self> {
        if world.num_jammers() != 1 {
            return Err(Error::config(
                "jammers",
                format!(
                    "a Stackelberg game has exactly one leader jammer, got {}",
                    world.num_jammers()
                ),
            ));
        }
        Ok(GameSpec::Stackelberg(world))
    }

    pub fn markov(world: World) -> Self {
        GameSpec::Markov(world)
    }

    pub fn hypergraph(graph: InterferenceHypergraph, num_channels: usize) -> Result<Self> {
        if num_channels == 0 || num_channels > crate::env::MAX_CHANNELS {
            return Err(Error::config("num_channels", "must lie in [1, 64]"));
        }
        Ok(GameSpec::Hypergraph {
            graph,
            num_channels,
        })
    }

    pub fn kind(&self) -> GameKind {
        match self {
            GameSpec::Stackelberg(_) => GameKind::Stackelberg,
            GameSpec::Markov(_) => GameKind::Markov,
            GameSpec::Hypergraph { .. } => GameKind::Hypergraph,
        }
    }

    pub fn num_users(&self) -> usize {
        match self {
            GameSpec::Stackelberg(w) | GameSpec::Markov(w) => w.num_users(),
            GameSpec::Hypergraph { graph, .. } => graph.num_users(),
        }
    }

    pub fn num_channels(&self) -> usize {
        match self {
            GameSpec::Stackelberg(w) | GameSpec::Markov(w) => w.num_channels(),
            GameSpec::Hypergraph { num_channels, .. } => *num_channels,
        }
    }

    /// Utility of user `n`; zero for inactive users.
    pub fn user_utility(
        &self,
        n: usize,
        assignment: &[usize],
        jamming: &Jamming,
        active: &[bool],
    ) -> f64 {
        if !active[n] {
            return 0.0;
        }
        match self {
            GameSpec::Stackelberg(w) | GameSpec::Markov(w) => {
                user_rate(n, assignment, jamming, active, &w.gains, &w.params)
            }
            GameSpec::Hypergraph { graph, .. } => {
                -(graph.marginal_interference(n, assignment, active, jamming.union()) as f64)
            }
        }
    }

    /// `-I_total` for the hypergraph game.
    pub fn potential_value(
        &self,
        assignment: &ChannelAssignment,
        jamming: &Jamming,
        active: &[bool],
    ) -> Result<f64> {
        match self {
            GameSpec::Hypergraph { graph, .. } => Ok(-(graph.total_generalized_interference(
                assignment,
                active,
                jamming.union(),
            ) as f64)),
            _ => Err(Error::Unsupported(
                "potential is only defined for the hypergraph game".into(),
            )),
        }
    }

    /// Network objective used to rank equilibria: the sum rate for rate games,
    /// the potential for the hypergraph game.
    pub fn network_value(
        &self,
        assignment: &ChannelAssignment,
        jamming: &Jamming,
        active: &[bool],
    ) -> f64 {
        match self {
            GameSpec::Stackelberg(w) | GameSpec::Markov(w) => {
                w.rates(assignment, jamming, active).iter().sum()
            }
            GameSpec::Hypergraph { .. } => self
                .potential_value(assignment, jamming, active)
                .expect("hypergraph game has a potential"),
        }
    }

    /// Lowest-index channel maximizing `n`'s utility with everyone else fixed.
    pub fn best_response_channel(
        &self,
        n: usize,
        assignment: &[usize],
        jamming: &Jamming,
        active: &[bool],
    ) -> usize {
        let mut probe = assignment.to_vec();
        let mut best = (0, f64::NEG_INFINITY);
        for c in 0..self.num_channels() {
            probe[n] = c;
            let u = self.user_utility(n, &probe, jamming, active);
            if u > best.1 + IMPROVEMENT_TOL {
                best = (c, u);
            }
        }
        best.0
    }

    /// Moves `n` to its best-response channel if that strictly improves its
    /// utility; an equilibrium is therefore a fixpoint.
    pub fn best_response_step(
        &self,
        assignment: &ChannelAssignment,
        n: usize,
        jamming: &Jamming,
        active: &[bool],
    ) -> ChannelAssignment {
        if !active[n] {
            return assignment.clone();
        }
        let choices = assignment.as_slice();
        let target = self.best_response_channel(n, choices, jamming, active);
        if target == choices[n] {
            return assignment.clone();
        }
        let current = self.user_utility(n, choices, jamming, active);
        let candidate = assignment.with(n, target);
        let moved = self.user_utility(n, candidate.as_slice(), jamming, active);
        if moved > current + IMPROVEMENT_TOL {
            candidate
        } else {
            assignment.clone()
        }
    }

    /// Round-robin best response until a full pass changes nothing, or
    /// `max_passes` passes have run.
    pub fn best_response_dynamics(
        &self,
        start: ChannelAssignment,
        jamming: &Jamming,
        active: &[bool],
        max_passes: usize,
    ) -> BestResponseOutcome {
        let mut current = start;
        let mut moves = 0;
        for _ in 0..max_passes {
            let mut changed = false;
            for n in 0..self.num_users() {
                let next = self.best_response_step(&current, n, jamming, active);
                if next != current {
                    current = next;
                    changed = true;
                    moves += 1;
                }
            }
            if !changed {
                return BestResponseOutcome {
                    assignment: current,
                    converged: true,
                    moves,
                };
            }
        }
        BestResponseOutcome {
            assignment: current,
            converged: false,
            moves,
        }
    }

    pub fn is_pure_nash(
        &self,
        assignment: &ChannelAssignment,
        jamming: &Jamming,
        active: &[bool],
    ) -> bool {
        let choices = assignment.as_slice();
        let mut probe = choices.to_vec();
        (0..self.num_users()).filter(|&n| active[n]).all(|n| {
            let current = self.user_utility(n, choices, jamming, active);
            let ok = (0..self.num_channels()).all(|c| {
                probe[n] = c;
                self.user_utility(n, &probe, jamming, active) <= current + IMPROVEMENT_TOL
            });
            probe[n] = choices[n];
            ok
        })
    }

    /// All pure equilibria in lexicographic order (user 0 most significant).
    pub fn enumerate_pure_nash(
        &self,
        jamming: &Jamming,
        active: &[bool],
        cap: u64,
    ) -> Result<Vec<ChannelAssignment>> {
        let profiles = profile_count(self.num_users(), self.num_channels(), cap)?;
        let m = self.num_channels();
        let mut digits = vec![0usize; self.num_users()];
        let mut found = Vec::new();
        for _ in 0..profiles {
            let a = ChannelAssignment::new(digits.clone());
            if self.is_pure_nash(&a, jamming, active) {
                found.push(a);
            }
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
        Ok(found)
    }

    /// Jammer-led Stackelberg solution with the followers playing their best
    /// (sum-rate maximizing) pure equilibrium after each leader move.
    pub fn stackelberg_solve(&self, active: &[bool], cap: u64) -> Result<StackelbergSolution> {
        let world = match self {
            GameSpec::Stackelberg(w) => w,
            _ => {
                return Err(Error::Unsupported(
                    "stackelberg_solve needs a Stackelberg game".into(),
                ))
            }
        };
        profile_count(self.num_users(), self.num_channels(), cap)?;
        let responses: Vec<Option<(ChannelAssignment, f64)>> = (0..self.num_channels())
            .into_par_iter()
            .map(|leader| {
                let jamming = Jamming::single(leader);
                let equilibria = self.enumerate_pure_nash(&jamming, active, cap)?;
                let mut best: Option<(ChannelAssignment, f64)> = None;
                for a in equilibria {
                    let total = self.network_value(&a, &jamming, active);
                    if best
                        .as_ref()
                        .is_none_or(|(_, v)| total > v + IMPROVEMENT_TOL)
                    {
                        best = Some((a, total));
                    }
                }
                Ok(best)
            })
            .collect::<Result<_>>()?;

        let mut choice: Option<(usize, f64)> = None;
        for (leader, r) in responses.iter().enumerate() {
            if let Some((_, total)) = r {
                if choice.is_none_or(|(_, v)| *total < v - IMPROVEMENT_TOL) {
                    choice = Some((leader, *total));
                }
            }
        }
        let (leader_channel, total) = choice.ok_or(Error::NoEquilibrium)?;
        let followers = responses[leader_channel]
            .as_ref()
            .expect("chosen")
            .0
            .clone();
        let follower_rates = world.rates(&followers, &Jamming::single(leader_channel), active);
        Ok(StackelbergSolution {
            leader_channel,
            followers,
            follower_rates,
            leader_utility: -total,
            follower_totals: responses.into_iter().map(|r| r.map(|(_, v)| v)).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestResponseOutcome {
    pub assignment: ChannelAssignment,
    pub converged: bool,
    pub moves: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StackelbergSolution {
    pub leader_channel: usize,
    pub followers: ChannelAssignment,
    pub follower_rates: Vec<f64>,
    /// `-(sum of follower rates)` at the solution.
    pub leader_utility: f64,
    /// Followers' best-equilibrium sum rate per leader channel; `None` where
    /// no pure follower equilibrium exists.
    pub follower_totals: Vec<Option<f64>>,
}

/// `M^N`, or an error when it exceeds `cap`.
pub fn profile_count(num_users: usize, num_channels: usize, cap: u64) -> Result<u64> {
    let too_large = || Error::InstanceTooLarge {
        profiles: format!("{num_channels}^{num_users}"),
        cap,
    };
    let exp = u32::try_from(num_users).map_err(|_| too_large())?;
    match (num_channels as u64).checked_pow(exp) {
        Some(p) if p <= cap => Ok(p),
        _ => Err(too_large()),
    }
}
