//! Random instance generators and reference computations shared by the
//! integration tests.
#![allow(dead_code)]

use antijam::env::{
    ChannelAssignment, ChannelSet, Jamming, LinkGains, NodeGeometry, RadioParams, World,
};
use antijam::game::GameSpec;
use antijam::hypergraph::InterferenceHypergraph;
use rand::seq::index::sample;
use rand::Rng;

pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize) -> InterferenceHypergraph {
    let threshold = 3;
    let mut strong = Vec::new();
    let edge_prob = rng.random_range(0.0..0.8);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_prob) {
                strong.push([u, v]);
            }
        }
    }
    let mut weak: Vec<Vec<usize>> = Vec::new();
    if n >= threshold {
        for _ in 0..rng.random_range(0..=4) {
            let size = rng.random_range(threshold..=n);
            let mut members = sample(rng, n, size).into_vec();
            members.sort_unstable();
            if !weak.contains(&members) {
                weak.push(members);
            }
        }
    }
    InterferenceHypergraph::new(n, strong, weak, threshold).unwrap()
}

pub fn random_jamming<R: Rng>(rng: &mut R, m: usize) -> Jamming {
    let set: ChannelSet = (0..m).filter(|_| rng.random_bool(0.3)).collect();
    Jamming(vec![set])
}

pub fn random_active<R: Rng>(rng: &mut R, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.random_bool(0.8)).collect()
}

pub fn random_assignment<R: Rng>(rng: &mut R, n: usize, m: usize) -> ChannelAssignment {
    ChannelAssignment::new((0..n).map(|_| rng.random_range(0..m)).collect())
}

/// Rate world from random transmitter/receiver positions in a 10 m square.
pub fn random_geometric_world<R: Rng>(rng: &mut R, n: usize, m: usize) -> World {
    let mut point = || [rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)];
    let user_pairs = (0..n).map(|_| [point(), point()]).collect();
    let geometry = NodeGeometry {
        user_pairs,
        jammer_positions: vec![point()],
    };
    let params = RadioParams {
        num_channels: m,
        ..RadioParams::default()
    };
    World::from_geometry(&geometry, params, 1.0).unwrap()
}

/// Rate world whose cross gains are symmetric, which makes the rate game an
/// exact potential game.
#[allow(clippy::needless_range_loop)]
pub fn random_symmetric_world<R: Rng>(rng: &mut R, n: usize, m: usize) -> World {
    let mut cross = vec![vec![0.0; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            let g = rng.random_range(0.0..0.5);
            cross[u][v] = g;
            cross[v][u] = g;
        }
    }
    let direct = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let jammer = (0..n).map(|_| vec![rng.random_range(0.0..1.0)]).collect();
    let params = RadioParams {
        num_channels: m,
        ..RadioParams::default()
    };
    World::new(LinkGains::new(direct, cross, jammer).unwrap(), params, 1.0).unwrap()
}

/// Direct count of the generalized interference: strong edges with both ends
/// active on one channel, (hyperedge, channel) pairs holding at least the
/// threshold of active members, and active users sitting on a jammed channel.
pub fn reference_total_interference(
    graph: &InterferenceHypergraph,
    choices: &[usize],
    active: &[bool],
    jammed: ChannelSet,
    num_channels: usize,
) -> u64 {
    let mut total = 0;
    for &[u, v] in graph.strong_edges() {
        if active[u] && active[v] && choices[u] == choices[v] {
            total += 1;
        }
    }
    for members in graph.weak_hyperedges() {
        for c in 0..num_channels {
            let on = members
                .iter()
                .filter(|&&x| active[x] && choices[x] == c)
                .count();
            if on >= graph.activation_threshold() {
                total += 1;
            }
        }
    }
    for (n, &c) in choices.iter().enumerate() {
        if active[n] && jammed.contains(c) {
            total += 1;
        }
    }
    total
}

/// Every profile of `n` users over `m` channels, user 0 most significant.
pub fn all_profiles(n: usize, m: usize) -> Vec<ChannelAssignment> {
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut digits = vec![0; n];
            for d in digits.iter_mut().rev() {
                *d = code % m;
                code /= m;
            }
            ChannelAssignment::new(digits)
        })
        .collect()
}

/// Brute-force equilibrium check against `game.user_utility`.
pub fn reference_is_nash(
    game: &GameSpec,
    a: &ChannelAssignment,
    jamming: &Jamming,
    active: &[bool],
) -> bool {
    let choices = a.as_slice();
    (0..choices.len()).filter(|&n| active[n]).all(|n| {
        let here = game.user_utility(n, choices, jamming, active);
        (0..game.num_channels()).all(|c| {
            let moved = a.with(n, c);
            game.user_utility(n, moved.as_slice(), jamming, active) <= here + 1e-12
        })
    })
}
