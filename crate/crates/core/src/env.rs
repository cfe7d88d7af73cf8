//! Time-slotted wireless world.
//!
//! Users are transmitter/receiver pairs sharing `M` orthogonal channels. A
//! user's achievable rate in a slot is the unit-bandwidth Shannon rate of its
//! SINR, where interference comes from other active users on the same channel
//! and from every jammer whose channel set contains that channel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planar position in meters.
pub type Position = [f64; 2];

/// Largest supported channel count (channel sets are 64-bit masks).
pub const MAX_CHANNELS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeGeometry {
    /// `(tx, rx)` per user.
    pub user_pairs: Vec<[Position; 2]>,
    pub jammer_positions: Vec<Position>,
}

impl NodeGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.user_pairs.is_empty() {
            return Err(Error::config("geometry.user_pairs", "must not be empty"));
        }
        let finite = |p: &Position| p.iter().all(|v| v.is_finite());
        if !self.user_pairs.iter().flatten().all(finite) {
            return Err(Error::config(
                "geometry.user_pairs",
                "coordinates must be finite",
            ));
        }
        if !self.jammer_positions.iter().all(finite) {
            return Err(Error::config(
                "geometry.jammer_positions",
                "coordinates must be finite",
            ));
        }
        Ok(())
    }

    pub fn num_users(&self) -> usize {
        self.user_pairs.len()
    }

    /// Location used for user-to-user proximity (the transmitter).
    pub fn user_position(&self, n: usize) -> Position {
        self.user_pairs[n][0]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioParams {
    pub num_channels: usize,
    /// Per-user transmit power (mW).
    pub tx_power: f64,
    /// Jammer power `J` (mW).
    pub jam_power: f64,
    /// Noise power (mW).
    pub noise_floor: f64,
    pub pathloss_exponent: f64,
    /// Distances below this are clamped before path loss is applied (m).
    pub min_distance: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            num_channels: 4,
            tx_power: 1.0,
            jam_power: 1.0,
            noise_floor: 0.01,
            pathloss_exponent: 2.0,
            min_distance: 1.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_channels == 0 {
            return Err(Error::config("num_channels", "must be at least 1"));
        }
        if self.num_channels > MAX_CHANNELS {
            return Err(Error::config(
                "num_channels",
                format!("at most {MAX_CHANNELS} channels are supported"),
            ));
        }
        for (name, v) in [
            ("tx_power", self.tx_power),
            ("jam_power", self.jam_power),
            ("noise_floor", self.noise_floor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, "must be a positive finite power"));
            }
        }
        if !(self.pathloss_exponent.is_finite() && self.pathloss_exponent >= 0.0) {
            return Err(Error::config("pathloss_exponent", "must be >= 0"));
        }
        if !(self.min_distance.is_finite() && self.min_distance > 0.0) {
            return Err(Error::config("min_distance", "must be > 0"));
        }
        Ok(())
    }

    /// Interference-free rate of a link with gain `direct_gain`.
    pub fn single_user_rate(&self, direct_gain: f64) -> f64 {
        (1.0 + self.tx_power * direct_gain / self.noise_floor).log2()
    }
}

/// Path-loss gain `max(d, min_distance)^-alpha`.
pub fn link_gain(from: Position, to: Position, params: &RadioParams) -> f64 {
    let d = (from[0] - to[0]).hypot(from[1] - to[1]);
    d.max(params.min_distance).powf(-params.pathloss_exponent)
}

/// A set of channel indices stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ChannelSet(u64);

impl ChannelSet {
    pub const EMPTY: ChannelSet = ChannelSet(0);

    pub fn single(channel: usize) -> Self {
        debug_assert!(channel < MAX_CHANNELS);
        ChannelSet(1 << channel)
    }

    pub fn insert(&mut self, channel: usize) {
        debug_assert!(channel < MAX_CHANNELS);
        self.0 |= 1 << channel;
    }

    pub fn contains(&self, channel: usize) -> bool {
        channel < MAX_CHANNELS && self.0 & (1 << channel) != 0
    }

    pub fn union(self, other: ChannelSet) -> ChannelSet {
        ChannelSet(self.0 | other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Lowest member, if any.
    pub fn first(&self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..MAX_CHANNELS).filter(move |c| bits & (1 << c) != 0)
    }

    /// Largest member plus one (0 for the empty set).
    pub fn bound(&self) -> usize {
        MAX_CHANNELS - self.0.leading_zeros() as usize
    }
}

impl FromIterator<usize> for ChannelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = ChannelSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl std::fmt::Debug for ChannelSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Channel sets emitted by each jammer in one slot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Jamming(pub Vec<ChannelSet>);

impl Jamming {
    pub fn none(num_jammers: usize) -> Self {
        Jamming(vec![ChannelSet::EMPTY; num_jammers])
    }

    /// One jammer on one channel.
    pub fn single(channel: usize) -> Self {
        Jamming(vec![ChannelSet::single(channel)])
    }

    pub fn union(&self) -> ChannelSet {
        self.0
            .iter()
            .fold(ChannelSet::EMPTY, |acc, s| acc.union(*s))
    }

    pub fn num_jammers(&self) -> usize {
        self.0.len()
    }
}

/// Per-user channel choice for one slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelAssignment(Vec<usize>);

impl ChannelAssignment {
    pub fn new(choices: Vec<usize>) -> Self {
        ChannelAssignment(choices)
    }

    pub fn uniform(num_users: usize, channel: usize) -> Self {
        ChannelAssignment(vec![channel; num_users])
    }

    pub fn validate(&self, num_users: usize, num_channels: usize) -> Result<()> {
        if self.0.len() != num_users {
            return Err(Error::DimensionMismatch {
                what: "user choices",
                expected: num_users,
                got: self.0.len(),
            });
        }
        if let Some(&c) = self.0.iter().find(|&&c| c >= num_channels) {
            return Err(Error::Contract(format!(
                "channel {c} outside [0, {num_channels})"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn set(&mut self, user: usize, channel: usize) {
        self.0[user] = channel;
    }

    /// Copy with one user's channel replaced.
    pub fn with(&self, user: usize, channel: usize) -> Self {
        let mut next = self.clone();
        next.0[user] = channel;
        next
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl std::ops::Index<usize> for ChannelAssignment {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl From<Vec<usize>> for ChannelAssignment {
    fn from(v: Vec<usize>) -> Self {
        ChannelAssignment(v)
    }
}

/// Precomputed link gains.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkGains {
    /// `direct[n]`: tx_n -> rx_n.
    pub direct: Vec<f64>,
    /// `cross[n][m]`: tx_m -> rx_n (diagonal unused).
    pub cross: Vec<Vec<f64>>,
    /// `jammer[n][k]`: jammer k -> rx_n.
    pub jammer: Vec<Vec<f64>>,
}

impl LinkGains {
    pub fn from_geometry(geometry: &NodeGeometry, params: &RadioParams) -> Self {
        let pairs = &geometry.user_pairs;
        let direct = pairs
            .iter()
            .map(|[tx, rx]| link_gain(*tx, *rx, params))
            .collect();
        let cross = pairs
            .iter()
            .map(|[_, rx]| {
                pairs
                    .iter()
                    .map(|[tx, _]| link_gain(*tx, *rx, params))
                    .collect()
            })
            .collect();
        let jammer = pairs
            .iter()
            .map(|[_, rx]| {
                geometry
                    .jammer_positions
                    .iter()
                    .map(|j| link_gain(*j, *rx, params))
                    .collect()
            })
            .collect();
        LinkGains {
            direct,
            cross,
            jammer,
        }
    }

    pub fn new(direct: Vec<f64>, cross: Vec<Vec<f64>>, jammer: Vec<Vec<f64>>) -> Result<Self> {
        let n = direct.len();
        if n == 0 {
            return Err(Error::config("gains", "at least one user required"));
        }
        if cross.len() != n || cross.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "cross-gain rows/columns",
                expected: n,
                got: cross.len(),
            });
        }
        if jammer.len() != n {
            return Err(Error::DimensionMismatch {
                what: "jammer-gain rows",
                expected: n,
                got: jammer.len(),
            });
        }
        let k = jammer[0].len();
        if jammer.iter().any(|row| row.len() != k) {
            return Err(Error::config("gains", "ragged jammer-gain rows"));
        }
        let all = direct
            .iter()
            .chain(cross.iter().flatten())
            .chain(jammer.iter().flatten());
        if all.clone().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::config("gains", "gains must be finite and >= 0"));
        }
        Ok(LinkGains {
            direct,
            cross,
            jammer,
        })
    }

    pub fn num_users(&self) -> usize {
        self.direct.len()
    }

    pub fn num_jammers(&self) -> usize {
        self.jammer.first().map_or(0, Vec::len)
    }

    pub fn max_direct(&self) -> f64 {
        self.direct.iter().copied().fold(0.0, f64::max)
    }
}

/// Full world state at one slot.
#[derive(Clone, Debug, PartialEq)]
pub struct SlotState {
    pub slot_index: u64,
    pub assignment: ChannelAssignment,
    pub jamming: Jamming,
    pub active_mask: Vec<bool>,
    /// bits/s/Hz per user; zero for inactive users.
    pub rates: Vec<f64>,
}

impl SlotState {
    /// State before the first slot: everyone idle on channel 0.
    pub fn initial(num_users: usize, num_jammers: usize) -> Self {
        SlotState {
            slot_index: 0,
            assignment: ChannelAssignment::uniform(num_users, 0),
            jamming: Jamming::none(num_jammers),
            active_mask: vec![false; num_users],
            rates: vec![0.0; num_users],
        }
    }

    pub fn jammed_channels(&self) -> ChannelSet {
        self.jamming.union()
    }

    pub fn num_active(&self) -> usize {
        self.active_mask.iter().filter(|&&a| a).count()
    }
}

/// Rate of user `n`, assumed active. Inactive users neither transmit nor
/// interfere.
pub fn user_rate(
    n: usize,
    assignment: &[usize],
    jamming: &Jamming,
    active: &[bool],
    gains: &LinkGains,
    params: &RadioParams,
) -> f64 {
    let channel = assignment[n];
    let mut denom = params.noise_floor;
    for (m, &c) in assignment.iter().enumerate() {
        if m != n && active[m] && c == channel {
            denom += params.tx_power * gains.cross[n][m];
        }
    }
    for (k, set) in jamming.0.iter().enumerate() {
        if set.contains(channel) {
            denom += params.jam_power * gains.jammer[n][k];
        }
    }
    (1.0 + params.tx_power * gains.direct[n] / denom).log2()
}

pub fn compute_rates(
    assignment: &ChannelAssignment,
    jamming: &Jamming,
    active: &[bool],
    gains: &LinkGains,
    params: &RadioParams,
) -> Vec<f64> {
    let choices = assignment.as_slice();
    (0..choices.len())
        .map(|n| {
            if active[n] {
                user_rate(n, choices, jamming, active, gains, params)
            } else {
                0.0
            }
        })
        .collect()
}

/// Gains, radio parameters and the per-slot activity probability.
#[derive(Clone, Debug, PartialEq)]
pub struct World {
    pub gains: LinkGains,
    pub params: RadioParams,
    pub active_probability: f64,
}

impl World {
    pub fn new(gains: LinkGains, params: RadioParams, active_probability: f64) -> Result<Self> {
        params.validate()?;
        if !(0.0..=1.0).contains(&active_probability) {
            return Err(Error::config("active_probability", "must lie in [0, 1]"));
        }
        Ok(World {
            gains,
            params,
            active_probability,
        })
    }

    pub fn from_geometry(
        geometry: &NodeGeometry,
        params: RadioParams,
        active_probability: f64,
    ) -> Result<Self> {
        geometry.validate()?;
        let gains = LinkGains::from_geometry(geometry, &params);
        World::new(gains, params, active_probability)
    }

    pub fn num_users(&self) -> usize {
        self.gains.num_users()
    }

    pub fn num_channels(&self) -> usize {
        self.params.num_channels
    }

    pub fn num_jammers(&self) -> usize {
        self.gains.num_jammers()
    }

    /// Best interference-free rate any user can reach.
    pub fn r_max(&self) -> f64 {
        self.params.single_user_rate(self.gains.max_direct())
    }

    pub fn rates(
        &self,
        assignment: &ChannelAssignment,
        jamming: &Jamming,
        active: &[bool],
    ) -> Vec<f64> {
        compute_rates(assignment, jamming, active, &self.gains, &self.params)
    }

    pub fn activity_from_draws(&self, draws: &[f64]) -> Vec<bool> {
        draws.iter().map(|&u| u < self.active_probability).collect()
    }

    /// Installs the slot's actions, draws activity and recomputes rates.
    /// `activity_draws` are uniform samples in `[0, 1)`; user `n` is active
    /// iff `activity_draws[n] < active_probability`.
    pub fn advance_slot(
        &self,
        current: &SlotState,
        jamming: Jamming,
        assignment: ChannelAssignment,
        activity_draws: &[f64],
    ) -> Result<SlotState> {
        let n = self.num_users();
        assignment.validate(n, self.num_channels())?;
        if activity_draws.len() != n {
            return Err(Error::DimensionMismatch {
                what: "activity draws",
                expected: n,
                got: activity_draws.len(),
            });
        }
        if jamming.num_jammers() != self.num_jammers() {
            return Err(Error::DimensionMismatch {
                what: "jammer actions",
                expected: self.num_jammers(),
                got: jamming.num_jammers(),
            });
        }
        if let Some(set) = jamming.0.iter().find(|s| s.bound() > self.num_channels()) {
            return Err(Error::Contract(format!(
                "jammed set {set:?} outside [0, {})",
                self.num_channels()
            )));
        }
        let active_mask = self.activity_from_draws(activity_draws);
        let rates = self.rates(&assignment, &jamming, &active_mask);
        Ok(SlotState {
            slot_index: current.slot_index + 1,
            assignment,
            jamming,
            active_mask,
            rates,
        })
    }
}
