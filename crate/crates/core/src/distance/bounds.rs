use serde::{Deserialize, Serialize};

use crate::algebra::{GeneratorWord, Site, SitePermutation};
use crate::error::Result;

use super::{covering_number, upper_bound_word};

/// `⌈Σ |σ(x) − x| / 2⌉`, a lower bound on the distance from `(g, σ)` to
/// `(g', id)` for every pair of positions `g, g'`: each generator changes the
/// displacement sum by at most 2.
pub fn lower_bound(sigma: &SitePermutation) -> u64 {
    sigma.displacement_sum().div_ceil(2)
}

/// `2·Cov(g, σ) + 5·Σ |σ(x) − x|`.
pub fn upper_bound(g: Site, sigma: &SitePermutation) -> u64 {
    2 * covering_number(g, sigma) + 5 * sigma.displacement_sum()
}

/// Both bounds on the distance between `(g, σ)` and `(g, id)` together with a
/// word realising the upper one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBounds {
    pub lower: u64,
    pub upper: u64,
    pub witness: GeneratorWord,
}

impl DistanceBounds {
    pub fn compute(g: Site, sigma: &SitePermutation) -> Result<Self> {
        Ok(Self {
            lower: lower_bound(sigma),
            upper: upper_bound(g, sigma),
            witness: upper_bound_word(g, sigma)?,
        })
    }
}
