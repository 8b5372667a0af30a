use thiserror::Error;

use crate::algebra::Site;

/// Errors raised by the algebra, distance and simulation layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MixerError {
    #[error("site arithmetic overflowed")]
    Overflow,

    #[error("transposition of a site with itself (offset 0)")]
    ZeroTransposition,

    #[error("start site {site} is not in the orbit of the cycle")]
    StartNotInOrbit { site: Site },

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("radius {radius} exceeds the BFS safety limit {limit}")]
    RadiusTooLarge { radius: u32, limit: u32 },

    #[error("BFS node budget of {budget} states exhausted at depth {depth}")]
    NodeBudgetExceeded { budget: usize, depth: u32 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = MixerError> = std::result::Result<T, E>;
