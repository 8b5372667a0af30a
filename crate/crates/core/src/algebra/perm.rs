use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{checked_add, Site};
use crate::error::{MixerError, Result};

/// A bijection of Z that moves only finitely many sites.
///
/// Only moved sites are stored, so two equal functions always have equal
/// maps. Composition follows the usual function convention:
/// `a.compose(&b)` is `x ↦ a(b(x))`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SitePermutation {
    map: BTreeMap<Site, Site>,
}

impl SitePermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a permutation from `(site, image)` pairs. Fixed points are
    /// dropped; the remaining images must be a rearrangement of the keys.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Site, Site)>,
    {
        let mut map = BTreeMap::new();
        for (x, y) in pairs {
            if map.insert(x, y).is_some() {
                return Err(MixerError::InvalidPermutation(format!(
                    "site {x} listed twice"
                )));
            }
        }
        map.retain(|x, y| x != y);
        let keys: BTreeSet<Site> = map.keys().copied().collect();
        let values: BTreeSet<Site> = map.values().copied().collect();
        if keys != values || values.len() != map.len() {
            return Err(MixerError::InvalidPermutation(
                "images are not a rearrangement of the moved sites".into(),
            ));
        }
        Ok(Self { map })
    }

    /// The transposition `<a, b>`; the identity when `a == b`.
    pub fn transposition(a: Site, b: Site) -> Self {
        let mut map = BTreeMap::new();
        if a != b {
            map.insert(a, b);
            map.insert(b, a);
        }
        Self { map }
    }

    /// The cyclic permutation `<g_1, ..., g_n>` sending each site to the next.
    pub fn cyclic(orbit: &[Site]) -> Result<Self> {
        let cycle = Cycle::new(orbit.to_vec())?;
        Ok(cycle.to_permutation())
    }

    /// Builds a permutation from a map that is already known to satisfy the
    /// invariants. Only used by internal code paths that construct valid maps.
    pub(crate) fn from_map_unchecked(mut map: BTreeMap<Site, Site>) -> Self {
        map.retain(|x, y| x != y);
        Self { map }
    }

    #[inline]
    pub fn apply(&self, x: Site) -> Site {
        self.map.get(&x).copied().unwrap_or(x)
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.map.len()
    }

    /// Moved sites in increasing order.
    pub fn support(&self) -> impl Iterator<Item = Site> + '_ {
        self.map.keys().copied()
    }

    /// `(site, image)` pairs for moved sites, sorted by site.
    pub fn entries(&self) -> impl Iterator<Item = (Site, Site)> + '_ {
        self.map.iter().map(|(&x, &y)| (x, y))
    }

    pub fn support_min(&self) -> Option<Site> {
        self.map.keys().next().copied()
    }

    pub fn support_max(&self) -> Option<Site> {
        self.map.keys().next_back().copied()
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &SitePermutation) -> SitePermutation {
        let mut map = BTreeMap::new();
        for x in self.map.keys().chain(other.map.keys()) {
            let y = self.apply(other.apply(*x));
            if y != *x {
                map.insert(*x, y);
            }
        }
        SitePermutation { map }
    }

    pub fn inverse(&self) -> SitePermutation {
        SitePermutation {
            map: self.map.iter().map(|(&x, &y)| (y, x)).collect(),
        }
    }

    /// The conjugate `g σ g⁻¹` by the translation `x ↦ x + g`, which is the
    /// permutation `x ↦ g + σ(x − g)`.
    pub fn conjugate_by_translation(&self, g: Site) -> Result<SitePermutation> {
        if g == 0 {
            return Ok(self.clone());
        }
        let mut map = BTreeMap::new();
        for (&x, &y) in &self.map {
            map.insert(checked_add(x, g)?, checked_add(y, g)?);
        }
        Ok(SitePermutation { map })
    }

    /// `x ↦ -σ(-x)`, the image of σ under the reflection of Z.
    pub fn reflect(&self) -> Result<SitePermutation> {
        let mut map = BTreeMap::new();
        for (&x, &y) in &self.map {
            let nx = x.checked_neg().ok_or(MixerError::Overflow)?;
            let ny = y.checked_neg().ok_or(MixerError::Overflow)?;
            map.insert(nx, ny);
        }
        Ok(SitePermutation { map })
    }

    /// Total tile displacement `Σ_{x ∈ supp σ} |σ(x) − x|`.
    pub fn displacement_sum(&self) -> u64 {
        self.map.iter().map(|(&x, &y)| y.abs_diff(x)).sum()
    }

    /// Disjoint cycles, each listed from its smallest site, ordered by that
    /// smallest site.
    pub fn cycle_decomposition(&self) -> Vec<Cycle> {
        let mut seen = BTreeSet::new();
        let mut cycles = Vec::new();
        for &start in self.map.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut orbit = vec![start];
            seen.insert(start);
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                orbit.push(x);
                x = self.apply(x);
            }
            cycles.push(Cycle { orbit });
        }
        cycles
    }
}

impl fmt::Debug for SitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle notation, e.g. `<0,2,1><5,6>`; the identity prints as `id`.
impl fmt::Display for SitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for c in self.cycle_decomposition() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A cyclic permutation `<g_1, ..., g_n>` with `n ≥ 2` distinct sites.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    orbit: Vec<Site>,
}

impl Cycle {
    pub fn new(orbit: Vec<Site>) -> Result<Self> {
        if orbit.len() < 2 {
            return Err(MixerError::InvalidCycle(
                "a cycle needs at least two sites".into(),
            ));
        }
        let distinct: BTreeSet<Site> = orbit.iter().copied().collect();
        if distinct.len() != orbit.len() {
            return Err(MixerError::InvalidCycle(
                "orbit sites must be distinct".into(),
            ));
        }
        Ok(Self { orbit })
    }

    pub fn orbit(&self) -> &[Site] {
        &self.orbit
    }

    pub fn len(&self) -> usize {
        self.orbit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit.is_empty()
    }

    pub fn contains(&self, x: Site) -> bool {
        self.orbit.contains(&x)
    }

    /// The same cycle, listed starting from `start`.
    pub fn rotated_to(&self, start: Site) -> Option<Cycle> {
        let idx = self.orbit.iter().position(|&x| x == start)?;
        let mut orbit = self.orbit.clone();
        orbit.rotate_left(idx);
        Some(Cycle { orbit })
    }

    pub fn to_permutation(&self) -> SitePermutation {
        let n = self.orbit.len();
        let map = (0..n)
            .map(|j| (self.orbit[j], self.orbit[(j + 1) % n]))
            .collect();
        SitePermutation::from_map_unchecked(map)
    }

    /// `Σ_j |c(g_j) − g_j|`.
    pub fn displacement_sum(&self) -> u64 {
        let n = self.orbit.len();
        (0..n)
            .map(|j| self.orbit[j].abs_diff(self.orbit[(j + 1) % n]))
            .sum()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, x) in self.orbit.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: Site, b: Site) -> SitePermutation {
        SitePermutation::transposition(a, b)
    }

    fn cyc(orbit: &[Site]) -> SitePermutation {
        SitePermutation::cyclic(orbit).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = SitePermutation::identity();
        assert_eq!(id.compose(&t(0, 1)), t(0, 1));
        assert_eq!(t(0, 1).compose(&t(0, 1)), id);
        // (<1,2> ∘ <0,1>)(x): 0 -> 1 -> 2, 1 -> 0 -> 0, 2 -> 2 -> 1
        let p = t(1, 2).compose(&t(0, 1));
        assert_eq!(p.apply(0), 2);
        assert_eq!(p.apply(2), 1);
        assert_eq!(p.apply(1), 0);
        assert_eq!(p, cyc(&[0, 2, 1]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            SitePermutation::identity().inverse(),
            SitePermutation::identity()
        );
        assert_eq!(t(0, 1).inverse(), t(0, 1));
        assert_eq!(cyc(&[0, 1, 2]).inverse(), cyc(&[0, 2, 1]));
    }

    #[test]
    fn conjugation_examples() {
        let s = cyc(&[3, -1, 7]);
        assert_eq!(s.conjugate_by_translation(0).unwrap(), s);
        assert_eq!(t(0, 1).conjugate_by_translation(1).unwrap(), t(1, 2));
        assert_eq!(t(0, 3).conjugate_by_translation(-2).unwrap(), t(-2, 1));
    }

    #[test]
    fn conjugation_overflow_detected() {
        let s = t(0, 1);
        assert_eq!(
            s.conjugate_by_translation(Site::MAX),
            Err(MixerError::Overflow)
        );
    }

    #[test]
    fn displacement_examples() {
        assert_eq!(SitePermutation::identity().displacement_sum(), 0);
        assert_eq!(t(0, 1).displacement_sum(), 2);
        assert_eq!(t(0, 2).displacement_sum(), 4);
    }

    #[test]
    fn cycle_decomposition_examples() {
        assert!(SitePermutation::identity().cycle_decomposition().is_empty());
        assert_eq!(
            t(0, 1).cycle_decomposition(),
            vec![Cycle::new(vec![0, 1]).unwrap()]
        );
        let p = SitePermutation::from_pairs([(0, 2), (2, 1), (1, 0), (5, 6), (6, 5)]).unwrap();
        assert_eq!(
            p.cycle_decomposition(),
            vec![
                Cycle::new(vec![0, 2, 1]).unwrap(),
                Cycle::new(vec![5, 6]).unwrap()
            ]
        );
        assert_eq!(p.to_string(), "<0,2,1><5,6>");
    }

    #[test]
    fn from_pairs_rejects_non_bijections() {
        assert!(SitePermutation::from_pairs([(0, 1), (1, 1)]).is_err());
        assert!(SitePermutation::from_pairs([(0, 1), (0, 2)]).is_err());
        assert!(SitePermutation::from_pairs([(0, 1), (2, 0)]).is_err());
        // fixed points are normalised away
        let p = SitePermutation::from_pairs([(0, 1), (1, 0), (4, 4)]).unwrap();
        assert_eq!(p.support_len(), 2);
    }

    #[test]
    fn cycle_validation() {
        assert!(Cycle::new(vec![3]).is_err());
        assert!(Cycle::new(vec![1, 2, 1]).is_err());
        let c = Cycle::new(vec![4, 1, 9]).unwrap();
        assert_eq!(c.rotated_to(9).unwrap().orbit(), &[9, 4, 1]);
        assert!(c.rotated_to(0).is_none());
        assert_eq!(c.displacement_sum(), 3 + 8 + 5);
    }

    #[test]
    fn reflect_transposition() {
        assert_eq!(t(0, 1).reflect().unwrap(), t(0, -1));
    }
}
