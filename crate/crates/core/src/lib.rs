//! The mixer chain on Z: a random walk on the semidirect product Z ⋉ Σ of
//! the integers with finitely supported permutations, where a walker either
//! steps to a neighbour or swaps the tiles on its site and a neighbouring
//! site.
//!
//! * [`algebra`]: exact group arithmetic and the four generators.
//! * [`distance`]: generator-word synthesis, distance bounds and a
//!   breadth-first exact distance oracle.
//! * [`sim`]: seeded simulation of the chain and of the reference walks.
//! * [`experiments`]: Monte Carlo checks of the t^{3/4} escape law and its
//!   supporting lemmas, plus report emission.

pub mod algebra;
pub mod distance;
pub mod error;
pub mod experiments;
pub mod sim;
pub mod stats;

pub use algebra::{
    Cycle, Direction, Generator, GeneratorKind, GeneratorWord, MixerElement, Site, SitePermutation,
};
pub use error::{MixerError, Result};
