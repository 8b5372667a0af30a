use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::{checked_add, Generator, Site, SitePermutation};
use crate::error::{MixerError, Result};

/// An element `(g, σ)` of the semidirect product Z ⋉ Σ: the mixer stands at
/// `position` and the tile marked `x` lies on site `perm(x)`.
///
/// Multiplication is `(g, σ)(h, τ) = (g + h, (g τ g⁻¹) ∘ σ)`, with `g τ g⁻¹`
/// the translate of τ by `g`.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MixerElement {
    pub position: Site,
    pub perm: SitePermutation,
}

impl MixerElement {
    pub fn new(position: Site, perm: SitePermutation) -> Self {
        Self { position, perm }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.position == 0 && self.perm.is_identity()
    }

    pub fn try_mul(&self, rhs: &MixerElement) -> Result<MixerElement> {
        let position = checked_add(self.position, rhs.position)?;
        let shifted = rhs.perm.conjugate_by_translation(self.position)?;
        Ok(MixerElement {
            position,
            perm: shifted.compose(&self.perm),
        })
    }

    /// `(-g, g⁻¹ σ⁻¹ g)`.
    pub fn try_inverse(&self) -> Result<MixerElement> {
        let position = self.position.checked_neg().ok_or(MixerError::Overflow)?;
        let perm = self.perm.inverse().conjugate_by_translation(position)?;
        Ok(MixerElement { position, perm })
    }

    pub fn inverse(&self) -> MixerElement {
        self.try_inverse().expect("site overflow in inverse")
    }

    /// Right multiplication by a generator, done in place of a full `mul`:
    /// a move shifts the position, a swap exchanges the tiles on
    /// `position` and `position ± 1`.
    pub fn try_apply_generator(&self, u: Generator) -> Result<MixerElement> {
        let step = u.direction.step();
        match u.kind {
            super::GeneratorKind::Move => Ok(MixerElement {
                position: checked_add(self.position, step)?,
                perm: self.perm.clone(),
            }),
            super::GeneratorKind::Swap => {
                let other = checked_add(self.position, step)?;
                let swap = SitePermutation::transposition(self.position, other);
                Ok(MixerElement {
                    position: self.position,
                    perm: swap.compose(&self.perm),
                })
            }
        }
    }

    pub fn apply_generator(&self, u: Generator) -> MixerElement {
        self.try_apply_generator(u)
            .expect("site overflow applying generator")
    }

    /// The reflected element `(-g, σ')` with `σ'(z) = -σ(-z)`.
    pub fn try_mirror(&self) -> Result<MixerElement> {
        Ok(MixerElement {
            position: self.position.checked_neg().ok_or(MixerError::Overflow)?,
            perm: self.perm.reflect()?,
        })
    }

    pub fn mirror(&self) -> MixerElement {
        self.try_mirror().expect("site overflow in mirror")
    }

    /// Injective byte encoding: position, support size, then `(site, image)`
    /// pairs sorted by site, all as big-endian `i64`.
    pub fn canonical_key(&self) -> Vec<u8> {
        let n = self.perm.support_len();
        let mut key = Vec::with_capacity(16 + 16 * n);
        key.extend_from_slice(&self.position.to_be_bytes());
        key.extend_from_slice(&(n as i64).to_be_bytes());
        for (x, y) in self.perm.entries() {
            key.extend_from_slice(&x.to_be_bytes());
            key.extend_from_slice(&y.to_be_bytes());
        }
        key
    }

    /// Inverse of [`canonical_key`](Self::canonical_key).
    pub fn from_canonical_key(key: &[u8]) -> Result<MixerElement> {
        let bad = || MixerError::InvalidPermutation("malformed canonical key".into());
        let word = |i: usize| -> Result<i64> {
            let bytes = key.get(8 * i..8 * i + 8).ok_or_else(bad)?;
            Ok(i64::from_be_bytes(bytes.try_into().map_err(|_| bad())?))
        };
        let position = word(0)?;
        let n = usize::try_from(word(1)?).map_err(|_| bad())?;
        if key.len() != 16 + 16 * n {
            return Err(bad());
        }
        let pairs = (0..n)
            .map(|j| Ok((word(2 + 2 * j)?, word(3 + 2 * j)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MixerElement::new(
            position,
            SitePermutation::from_pairs(pairs)?,
        ))
    }
}

impl Mul for &MixerElement {
    type Output = MixerElement;

    fn mul(self, rhs: &MixerElement) -> MixerElement {
        self.try_mul(rhs)
            .expect("site overflow in group multiplication")
    }
}

impl Mul for MixerElement {
    type Output = MixerElement;

    fn mul(self, rhs: MixerElement) -> MixerElement {
        &self * &rhs
    }
}

impl fmt::Debug for MixerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.position, self.perm)
    }
}

impl fmt::Display for MixerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
