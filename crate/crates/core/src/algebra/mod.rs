//! Value-semantics algebra of the semidirect product Z ⋉ Σ.
//!
//! Σ is the group of finitely supported permutations of Z under function
//! composition, `(σ ∘ τ)(x) = σ(τ(x))`. An element `(g, σ)` is read as "the
//! mixer stands on `g` and the tile marked `x` lies on `σ(x)`".

mod element;
mod generator;
mod perm;

pub use element::MixerElement;
pub use generator::{Direction, Generator, GeneratorKind, GeneratorWord, ParseWordError};
pub use perm::{Cycle, SitePermutation};

use crate::error::{MixerError, Result};

/// A vertex of Z, also used as a tile label.
pub type Site = i64;

#[inline]
pub(crate) fn checked_add(a: Site, b: Site) -> Result<Site> {
    a.checked_add(b).ok_or(MixerError::Overflow)
}

#[inline]
pub(crate) fn checked_sub(a: Site, b: Site) -> Result<Site> {
    a.checked_sub(b).ok_or(MixerError::Overflow)
}
