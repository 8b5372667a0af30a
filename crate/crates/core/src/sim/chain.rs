use std::collections::BTreeMap;

use crate::algebra::{Generator, GeneratorKind, MixerElement, Site, SitePermutation};

use super::rng::BitSource;

const INITIAL_HALF_WIDTH: i64 = 64;

/// One realisation of the mixer chain `(S_t, σ_t)` started at the identity.
///
/// The arrangement is held densely over a window of sites that always
/// contains `[m_t − 1, M_t + 1]`, the only region where tiles can have
/// moved. Both directions are stored: `site_of[x] = σ_t(x)` and
/// `tile_at[y] = σ_t⁻¹(y)`. The window doubles when the mixer reaches its
/// edge.
#[derive(Clone, Debug)]
pub struct ChainState {
    time: u64,
    position: Site,
    lo: Site,
    site_of: Vec<Site>,
    tile_at: Vec<Site>,
    displacement: u64,
    min_position: Site,
    max_position: Site,
    rng: BitSource,
}

impl ChainState {
    pub fn new(seed: u64) -> Self {
        let lo = -INITIAL_HALF_WIDTH;
        let sites: Vec<Site> = (lo..=INITIAL_HALF_WIDTH).collect();
        Self {
            time: 0,
            position: 0,
            lo,
            site_of: sites.clone(),
            tile_at: sites,
            displacement: 0,
            min_position: 0,
            max_position: 0,
            rng: BitSource::new(seed),
        }
    }

    #[inline]
    pub fn time(&self) -> u64 {
        self.time
    }

    /// `S_t`.
    #[inline]
    pub fn position(&self) -> Site {
        self.position
    }

    /// `X_t = Σ_x |σ_t(x) − x|`, maintained incrementally.
    #[inline]
    pub fn displacement(&self) -> u64 {
        self.displacement
    }

    /// `(m_t, M_t)`, the extremes of the mixer's path so far.
    #[inline]
    pub fn range(&self) -> (Site, Site) {
        (self.min_position, self.max_position)
    }

    #[inline]
    fn hi(&self) -> Site {
        self.lo + self.site_of.len() as Site - 1
    }

    #[inline]
    fn in_window(&self, x: Site) -> bool {
        x >= self.lo && x <= self.hi()
    }

    /// `σ_t(tile)`: the site the tile marked `tile` lies on.
    #[inline]
    pub fn site_of(&self, tile: Site) -> Site {
        if self.in_window(tile) {
            self.site_of[(tile - self.lo) as usize]
        } else {
            tile
        }
    }

    /// `σ_t⁻¹(site)`: the tile lying on `site`.
    #[inline]
    pub fn tile_at(&self, site: Site) -> Site {
        if self.in_window(site) {
            self.tile_at[(site - self.lo) as usize]
        } else {
            site
        }
    }

    /// The tile under the mixer.
    #[inline]
    pub fn current_tile(&self) -> Site {
        self.tile_at[(self.position - self.lo) as usize]
    }

    fn grow(&mut self) {
        let old_lo = self.lo;
        let old_len = self.site_of.len() as Site;
        let new_lo = old_lo - old_len;
        let new_hi = old_lo + 2 * old_len - 1;
        let mut site_of: Vec<Site> = (new_lo..=new_hi).collect();
        let mut tile_at = site_of.clone();
        let offset = (old_lo - new_lo) as usize;
        site_of[offset..offset + old_len as usize].copy_from_slice(&self.site_of);
        tile_at[offset..offset + old_len as usize].copy_from_slice(&self.tile_at);
        self.lo = new_lo;
        self.site_of = site_of;
        self.tile_at = tile_at;
    }

    /// Draws a generator uniformly and applies it.
    #[inline]
    pub fn step(&mut self) -> Generator {
        let u = Generator::ALL[self.rng.two_bits() as usize];
        self.apply(u);
        u
    }

    /// Applies a given generator (right multiplication).
    #[inline]
    pub fn apply(&mut self, u: Generator) {
        let step = u.direction.step();
        let target = self.position + step;
        if target <= self.lo || target >= self.hi() {
            self.grow();
        }
        match u.kind {
            GeneratorKind::Move => {
                self.position = target;
                self.min_position = self.min_position.min(target);
                self.max_position = self.max_position.max(target);
            }
            GeneratorKind::Swap => {
                let here = (self.position - self.lo) as usize;
                let there = (target - self.lo) as usize;
                let a = self.tile_at[here];
                let b = self.tile_at[there];
                self.tile_at.swap(here, there);
                self.site_of[(a - self.lo) as usize] = target;
                self.site_of[(b - self.lo) as usize] = self.position;
                // tile a: position -> target, tile b: target -> position
                let before = self.position.abs_diff(a) + target.abs_diff(b);
                let after = target.abs_diff(a) + self.position.abs_diff(b);
                self.displacement = self.displacement + after - before;
            }
        }
        self.time += 1;
    }

    /// Smallest and largest moved site, if any.
    pub fn support_bounds(&self) -> Option<(Site, Site)> {
        let (m, big_m) = self.range();
        let lo = (m - 1..=big_m + 1).find(|&x| self.site_of(x) != x)?;
        let hi = (m - 1..=big_m + 1).rev().find(|&x| self.site_of(x) != x)?;
        Some((lo, hi))
    }

    /// `Cov(S_t, σ_t)`, from the support hull.
    pub fn covering_number(&self) -> u64 {
        let Some((lo, hi)) = self.support_bounds() else {
            return 0;
        };
        let a = lo.min(self.position);
        let b = hi.max(self.position);
        b.abs_diff(a) + self.position.abs_diff(a).min(b.abs_diff(self.position))
    }

    /// `σ_t` as a sparse permutation.
    pub fn perm(&self) -> SitePermutation {
        self.collect_perm(|x| self.site_of(x))
    }

    /// `σ_t⁻¹` as a sparse permutation.
    pub fn inverse_perm(&self) -> SitePermutation {
        self.collect_perm(|y| self.tile_at(y))
    }

    fn collect_perm(&self, f: impl Fn(Site) -> Site) -> SitePermutation {
        let (m, big_m) = self.range();
        let map: BTreeMap<Site, Site> = (m - 1..=big_m + 1)
            .map(|x| (x, f(x)))
            .filter(|(x, y)| x != y)
            .collect();
        SitePermutation::from_map_unchecked(map)
    }

    /// `(S_t, σ_t)`.
    pub fn element(&self) -> MixerElement {
        MixerElement::new(self.position, self.perm())
    }

    /// Checks the dense tables against each other and against the tracked
    /// range; used by tests and debug spot checks.
    pub fn is_consistent(&self) -> bool {
        let (m, big_m) = self.range();
        for x in self.lo..=self.hi() {
            if self.tile_at(self.site_of(x)) != x {
                return false;
            }
            if (x < m - 1 || x > big_m + 1) && self.site_of(x) != x {
                return false;
            }
        }
        self.perm().displacement_sum() == self.displacement
    }
}
