use serde::{Deserialize, Serialize};

use crate::algebra::{Site, SitePermutation};

/// A nearest-neighbour path on Z. Its length is the number of steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPath {
    sites: Vec<Site>,
}

impl CoverPath {
    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn start(&self) -> Site {
        self.sites[0]
    }

    pub fn len(&self) -> u64 {
        (self.sites.len() - 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.sites.len() == 1
    }

    pub fn covers(&self, sigma: &SitePermutation) -> bool {
        sigma.support().all(|x| self.sites.contains(&x))
    }
}

/// `[a, b] = [min(supp σ ∪ {g}), max(supp σ ∪ {g})]`.
fn hull(g: Site, sigma: &SitePermutation) -> (Site, Site) {
    let a = sigma.support_min().map_or(g, |m| m.min(g));
    let b = sigma.support_max().map_or(g, |m| m.max(g));
    (a, b)
}

/// Minimal length of a path from `g` visiting every moved site of σ: sweep
/// to the nearer end of the hull, then across to the far end.
pub fn covering_number(g: Site, sigma: &SitePermutation) -> u64 {
    if sigma.is_identity() {
        return 0;
    }
    let (a, b) = hull(g, sigma);
    let width = b.abs_diff(a);
    width + g.abs_diff(a).min(b.abs_diff(g))
}

/// A covering path realising [`covering_number`]. Ties go to the left-first
/// sweep.
pub fn covering_path(g: Site, sigma: &SitePermutation) -> CoverPath {
    let mut sites = vec![g];
    if sigma.is_identity() {
        return CoverPath { sites };
    }
    let (a, b) = hull(g, sigma);
    if g.abs_diff(a) <= b.abs_diff(g) {
        sites.extend((a..g).rev());
        sites.extend(a + 1..=b);
    } else {
        sites.extend(g + 1..=b);
        sites.extend((a..b).rev());
    }
    CoverPath { sites }
}
