//! Game-theoretic learning anti-jamming simulation.
//!
//! The crate models a time-slotted multi-channel wireless network under
//! jamming ([`env`], [`jammer`]), the interference hypergraph of dense
//! deployments ([`hypergraph`]), the channel-selection games played on top of
//! them together with exact equilibrium oracles ([`game`]), the online learners
//! that play those games ([`learning`]), and the metrics and seeded experiment
//! harness used to compare them ([`metrics`], [`harness`]).

pub mod env;
pub mod error;
pub mod game;
pub mod harness;
pub mod hypergraph;
pub mod jammer;
pub mod learning;
pub mod metrics;

pub use error::{Error, Result};
