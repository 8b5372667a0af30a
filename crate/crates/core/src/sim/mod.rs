//! Seeded simulation of the mixer chain on Z and of the reference walks.

mod chain;
mod exact;
mod returns;
pub mod rng;
mod trajectory;
mod walks;

pub use chain::ChainState;
pub use exact::{exact_local_time_law, exact_visit_law, law_tails};
pub use returns::{
    first_return, return_time_samples, ReturnSample, ReturnSamples, DEFAULT_RETURN_CAP,
};
pub use rng::{derive_seed, BitSource, SeedStream};
pub use trajectory::{run_trajectory, Checkpoint, ProbeSnapshot, TrajectoryRecord};
pub use walks::{lazy_walk, simple_walk_local_times, LazyWalk, LocalTimeSnapshot, SimpleWalk};

use crate::algebra::MixerElement;
use crate::error::Result;

/// `(S, σ) ↦ (−S, σ')` with `σ'(z) = −σ(−z)`; the chain's law is invariant
/// under this map.
pub fn mirror(e: &MixerElement) -> Result<MixerElement> {
    e.try_mirror()
}
