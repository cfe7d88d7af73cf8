//! Jammer behaviors. Each pattern maps `(t, observation, draw)` to the set of
//! channels the jammer occupies in slot `t`.

use serde::{Deserialize, Serialize};

use crate::env::ChannelSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum JammerPattern {
    Fixed {
        channel: usize,
    },
    /// One uniformly drawn channel per slot.
    Random,
    /// Ascending sweep, `dwell` slots per channel.
    Sweep {
        #[serde(default)]
        start_channel: usize,
        #[serde(default = "default_dwell")]
        dwell: u64,
    },
    Comb {
        channels: Vec<usize>,
    },
    /// Jams the channel most used by users in the previous slot.
    Reactive,
}

fn default_dwell() -> u64 {
    1
}

impl JammerPattern {
    pub fn sweep() -> Self {
        JammerPattern::Sweep {
            start_channel: 0,
            dwell: 1,
        }
    }

    /// Comb over every other channel, `floor(M/2)` channels starting at 0.
    pub fn default_comb(num_channels: usize) -> Self {
        let width = (num_channels / 2).max(1);
        JammerPattern::Comb {
            channels: (0..width).map(|i| (2 * i) % num_channels).collect(),
        }
    }

    pub fn validate(&self, num_channels: usize) -> Result<()> {
        let out_of_range = |c: usize| c >= num_channels;
        match self {
            JammerPattern::Fixed { channel } if out_of_range(*channel) => {
                Err(Error::config("jammers.channel", "outside [0, M)"))
            }
            JammerPattern::Sweep { start_channel, .. } if out_of_range(*start_channel) => {
                Err(Error::config("jammers.start_channel", "outside [0, M)"))
            }
            JammerPattern::Sweep { dwell: 0, .. } => {
                Err(Error::config("jammers.dwell", "must be at least 1"))
            }
            JammerPattern::Comb { channels } if channels.is_empty() => Err(Error::config(
                "jammers.channels",
                "comb set must not be empty",
            )),
            JammerPattern::Comb { channels } if channels.iter().any(|&c| out_of_range(c)) => {
                Err(Error::config("jammers.channels", "outside [0, M)"))
            }
            _ => Ok(()),
        }
    }
}

/// Channels jammed in slot `t`.
///
/// `observed` holds the channels of the users seen transmitting in the
/// previous slot (absent before the first slot). `draw` is a uniform sample in
/// `[0, 1)`, consumed by the random pattern and by the reactive fallback.
pub fn jammer_action(
    pattern: &JammerPattern,
    t: u64,
    num_channels: usize,
    observed: Option<&[usize]>,
    draw: f64,
) -> ChannelSet {
    let uniform = || ChannelSet::single(uniform_index(draw, num_channels));
    match pattern {
        JammerPattern::Fixed { channel } => ChannelSet::single(*channel),
        JammerPattern::Random => uniform(),
        JammerPattern::Sweep {
            start_channel,
            dwell,
        } => {
            let step = (t / dwell) % num_channels as u64;
            ChannelSet::single((*start_channel + step as usize) % num_channels)
        }
        JammerPattern::Comb { channels } => channels.iter().copied().collect(),
        JammerPattern::Reactive => match observed.and_then(|obs| most_used(obs, num_channels)) {
            Some(c) => ChannelSet::single(c),
            None => uniform(),
        },
    }
}

/// Maps a uniform draw in `[0, 1)` to an index in `[0, n)`.
pub fn uniform_index(draw: f64, n: usize) -> usize {
    ((draw * n as f64) as usize).min(n - 1)
}

/// Mode of the observed channels, lowest index on ties.
fn most_used(observed: &[usize], num_channels: usize) -> Option<usize> {
    if observed.is_empty() {
        return None;
    }
    let mut counts = vec![0usize; num_channels];
    for &c in observed {
        counts[c] += 1;
    }
    let best = *counts.iter().max()?;
    counts.iter().position(|&k| k == best)
}
