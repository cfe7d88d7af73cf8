//! Interference hypergraph.
//!
//! Strong edges join pairs of users that interfere whenever they share a
//! channel. Weak hyperedges group users whose individually negligible
//! interference accumulates: a hyperedge fires on channel `c` only when at
//! least `activation_threshold` of its active members are on `c`.

use std::fmt::Write as _;

use crate::env::{ChannelAssignment, ChannelSet, NodeGeometry};
use crate::error::{Error, Result};

pub const DEFAULT_ACTIVATION_THRESHOLD: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterferenceHypergraph {
    num_users: usize,
    strong_edges: Vec<[usize; 2]>,
    weak_hyperedges: Vec<Vec<usize>>,
    activation_threshold: usize,
    strong_neighbors: Vec<Vec<usize>>,
    weak_membership: Vec<Vec<usize>>,
}

/// Reference to one edge of a hypergraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRef {
    Strong(usize),
    Weak(usize),
}

impl InterferenceHypergraph {
    /// Validates and normalizes: members sorted within each edge, edges kept
    /// in the given order.
    pub fn new(
        num_users: usize,
        strong_edges: Vec<[usize; 2]>,
        weak_hyperedges: Vec<Vec<usize>>,
        activation_threshold: usize,
    ) -> Result<Self> {
        if activation_threshold < 2 {
            return Err(Error::config("activation_threshold", "must be at least 2"));
        }
        let mut strong = Vec::with_capacity(strong_edges.len());
        for [u, v] in strong_edges {
            if u >= num_users || v >= num_users {
                return Err(Error::config(
                    "hypergraph.strong",
                    format!("edge ({u}, {v}) references a user >= {num_users}"),
                ));
            }
            if u == v {
                return Err(Error::config(
                    "hypergraph.strong",
                    format!("self-loop on {u}"),
                ));
            }
            let e = [u.min(v), u.max(v)];
            if strong.contains(&e) {
                return Err(Error::config(
                    "hypergraph.strong",
                    format!("duplicate edge ({}, {})", e[0], e[1]),
                ));
            }
            strong.push(e);
        }
        let mut weak: Vec<Vec<usize>> = Vec::with_capacity(weak_hyperedges.len());
        for mut members in weak_hyperedges {
            members.sort_unstable();
            members.dedup();
            if members.len() < activation_threshold {
                return Err(Error::config(
                    "hypergraph.weak",
                    format!(
                        "hyperedge {members:?} has fewer than {activation_threshold} distinct members"
                    ),
                ));
            }
            if members.iter().any(|&m| m >= num_users) {
                return Err(Error::config(
                    "hypergraph.weak",
                    format!("hyperedge {members:?} references a user >= {num_users}"),
                ));
            }
            if weak.contains(&members) {
                return Err(Error::config(
                    "hypergraph.weak",
                    format!("duplicate hyperedge {members:?}"),
                ));
            }
            weak.push(members);
        }

        let mut strong_neighbors = vec![Vec::new(); num_users];
        for &[u, v] in &strong {
            strong_neighbors[u].push(v);
            strong_neighbors[v].push(u);
        }
        let mut weak_membership = vec![Vec::new(); num_users];
        for (i, members) in weak.iter().enumerate() {
            for &m in members {
                weak_membership[m].push(i);
            }
        }
        Ok(InterferenceHypergraph {
            num_users,
            strong_edges: strong,
            weak_hyperedges: weak,
            activation_threshold,
            strong_neighbors,
            weak_membership,
        })
    }

    pub fn empty(num_users: usize) -> Self {
        Self::new(num_users, vec![], vec![], DEFAULT_ACTIVATION_THRESHOLD)
            .expect("empty hypergraph is valid")
    }

    /// Geometric construction on transmitter positions.
    ///
    /// Pairs closer than `strong_radius` get a strong edge. Every maximal
    /// group of at least `activation_threshold` users that are mutually within
    /// `weak_radius` becomes a weak hyperedge, unless the group is already a
    /// clique of strong edges.
    pub fn build(
        geometry: &NodeGeometry,
        strong_radius: f64,
        weak_radius: f64,
        activation_threshold: usize,
    ) -> Result<Self> {
        if strong_radius.is_nan() || strong_radius <= 0.0 {
            return Err(Error::config("hypergraph.strong_radius", "must be > 0"));
        }
        if weak_radius.is_nan() || weak_radius < strong_radius {
            return Err(Error::config(
                "hypergraph.weak_radius",
                "must be >= strong_radius",
            ));
        }
        let n = geometry.num_users();
        let dist = |a: usize, b: usize| {
            let (p, q) = (geometry.user_position(a), geometry.user_position(b));
            (p[0] - q[0]).hypot(p[1] - q[1])
        };
        let mut strong = Vec::new();
        let mut weak_adj = vec![vec![false; n]; n];
        let mut strong_adj = vec![vec![false; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let d = dist(a, b);
                if d <= strong_radius {
                    strong.push([a, b]);
                    strong_adj[a][b] = true;
                    strong_adj[b][a] = true;
                }
                if d <= weak_radius {
                    weak_adj[a][b] = true;
                    weak_adj[b][a] = true;
                }
            }
        }
        let mut cliques = maximal_cliques(&weak_adj);
        cliques.retain(|c| {
            c.len() >= activation_threshold
                && !c
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| c[i + 1..].iter().all(|&b| strong_adj[a][b]))
        });
        cliques.sort();
        Self::new(n, strong, cliques, activation_threshold)
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn strong_edges(&self) -> &[[usize; 2]] {
        &self.strong_edges
    }

    pub fn weak_hyperedges(&self) -> &[Vec<usize>] {
        &self.weak_hyperedges
    }

    pub fn activation_threshold(&self) -> usize {
        self.activation_threshold
    }

    pub fn strong_neighbors(&self, n: usize) -> &[usize] {
        &self.strong_neighbors[n]
    }

    /// Indices of the weak hyperedges containing `n`.
    pub fn weak_membership(&self, n: usize) -> &[usize] {
        &self.weak_membership[n]
    }

    /// The pairwise graph model: same strong edges, no weak hyperedges.
    pub fn strong_only(&self) -> Self {
        Self::new(
            self.num_users,
            self.strong_edges.clone(),
            vec![],
            self.activation_threshold,
        )
        .expect("subgraph of a valid hypergraph")
    }

    /// Keeps only the first `count` weak hyperedges.
    pub fn truncate_weak(&self, count: usize) -> Self {
        Self::new(
            self.num_users,
            self.strong_edges.clone(),
            self.weak_hyperedges.iter().take(count).cloned().collect(),
            self.activation_threshold,
        )
        .expect("subgraph of a valid hypergraph")
    }

    /// Per-channel activity of one edge.
    pub fn edge_active(
        &self,
        edge: EdgeRef,
        assignment: &ChannelAssignment,
        active: &[bool],
        num_channels: usize,
    ) -> Vec<bool> {
        let mut out = vec![false; num_channels];
        match edge {
            EdgeRef::Strong(i) => {
                let [u, v] = self.strong_edges[i];
                if active[u] && active[v] && assignment[u] == assignment[v] {
                    out[assignment[u]] = true;
                }
            }
            EdgeRef::Weak(i) => {
                for (c, slot) in out.iter_mut().enumerate() {
                    *slot = self.count_on(i, c, assignment.as_slice(), active)
                        >= self.activation_threshold;
                }
            }
        }
        out
    }

    fn count_on(
        &self,
        hyperedge: usize,
        channel: usize,
        choices: &[usize],
        active: &[bool],
    ) -> usize {
        self.weak_hyperedges[hyperedge]
            .iter()
            .filter(|&&m| active[m] && choices[m] == channel)
            .count()
    }

    /// Active strong edges + (hyperedge, channel) activations + active users
    /// on a jammed channel.
    pub fn total_generalized_interference(
        &self,
        assignment: &ChannelAssignment,
        active: &[bool],
        jammed: ChannelSet,
    ) -> u64 {
        let choices = assignment.as_slice();
        let strong = self
            .strong_edges
            .iter()
            .filter(|&&[u, v]| active[u] && active[v] && choices[u] == choices[v])
            .count();
        let mut weak = 0;
        for (i, members) in self.weak_hyperedges.iter().enumerate() {
            let mut seen = ChannelSet::EMPTY;
            for &m in members.iter().filter(|&&m| active[m]) {
                let c = choices[m];
                if !seen.contains(c) {
                    seen.insert(c);
                    if self.count_on(i, c, choices, active) >= self.activation_threshold {
                        weak += 1;
                    }
                }
            }
        }
        let jam = (0..choices.len())
            .filter(|&n| active[n] && jammed.contains(choices[n]))
            .count();
        (strong + weak + jam) as u64
    }

    /// Interference that disappears when `n` leaves the network:
    /// `I_total(a) - I_total(a without n)`, computed from `n`'s incident edges.
    pub fn marginal_interference(
        &self,
        n: usize,
        assignment: &[usize],
        active: &[bool],
        jammed: ChannelSet,
    ) -> u64 {
        if !active[n] {
            return 0;
        }
        let c = assignment[n];
        let strong = self.strong_neighbors[n]
            .iter()
            .filter(|&&m| active[m] && assignment[m] == c)
            .count();
        let weak = self.weak_membership[n]
            .iter()
            .filter(|&&i| self.count_on(i, c, assignment, active) == self.activation_threshold)
            .count();
        (strong + weak + usize::from(jammed.contains(c))) as u64
    }

    /// Upper bound on `marginal_interference(n, ..)`.
    pub fn marginal_bound(&self, n: usize) -> u64 {
        (self.strong_neighbors[n].len() + self.weak_membership[n].len() + 1) as u64
    }

    /// Plain-text edge list: `S u v` per strong edge, `W u v w ...` per
    /// hyperedge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for [u, v] in &self.strong_edges {
            let _ = writeln!(out, "S {u} {v}");
        }
        for members in &self.weak_hyperedges {
            out.push('W');
            for m in members {
                let _ = write!(out, " {m}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the edge-list format. Blank lines and `#` comments are skipped.
    pub fn parse_edge_list(
        text: &str,
        num_users: usize,
        activation_threshold: usize,
    ) -> Result<Self> {
        let mut strong = Vec::new();
        let mut weak = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let loc = || format!("line {}", lineno + 1);
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let members = parts
                .map(|p| {
                    p.parse::<usize>().map_err(|e| Error::Parse {
                        location: loc(),
                        reason: format!("bad user index {p:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match tag {
                "S" if members.len() == 2 => strong.push([members[0], members[1]]),
                "S" => {
                    return Err(Error::Parse {
                        location: loc(),
                        reason: "strong edge needs exactly two users".into(),
                    })
                }
                "W" => weak.push(members),
                other => {
                    return Err(Error::Parse {
                        location: loc(),
                        reason: format!("unknown record {other:?}"),
                    })
                }
            }
        }
        Self::new(num_users, strong, weak, activation_threshold)
    }
}

/// Bron–Kerbosch with pivoting; cliques returned with sorted members.
fn maximal_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn expand(
        adj: &[Vec<bool>],
        r: &mut Vec<usize>,
        mut p: Vec<usize>,
        mut x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        let pivot = *p
            .iter()
            .chain(x.iter())
            .max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count())
            .expect("p or x non-empty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
            expand(adj, r, np, nx, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    expand(
        adj,
        &mut Vec::new(),
        (0..adj.len()).collect(),
        Vec::new(),
        &mut out,
    );
    out
}
