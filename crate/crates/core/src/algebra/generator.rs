use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{MixerElement, Site, SitePermutation};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    #[inline]
    pub fn step(self) -> Site {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }

    pub fn of(offset: Site) -> Option<Direction> {
        match offset.signum() {
            1 => Some(Direction::Plus),
            -1 => Some(Direction::Minus),
            _ => None,
        }
    }

    pub fn reversed(self) -> Direction {
        match self {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorKind {
    /// `(±1, id)`: the mixer steps to a neighbour.
    Move,
    /// `(0, <0, ±1>)`: the mixer swaps its tile with the neighbouring tile.
    Swap,
}

/// One of the four generators of Z ⋉ Σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub direction: Direction,
}

impl Generator {
    /// Fixed order used by the chain's uniform draw: index `i` ↦ `ALL[i]`.
    pub const ALL: [Generator; 4] = [
        Generator::mov(Direction::Plus),
        Generator::mov(Direction::Minus),
        Generator::swap(Direction::Plus),
        Generator::swap(Direction::Minus),
    ];

    pub const fn mov(direction: Direction) -> Self {
        Self {
            kind: GeneratorKind::Move,
            direction,
        }
    }

    pub const fn swap(direction: Direction) -> Self {
        Self {
            kind: GeneratorKind::Swap,
            direction,
        }
    }

    pub fn index(self) -> usize {
        match (self.kind, self.direction) {
            (GeneratorKind::Move, Direction::Plus) => 0,
            (GeneratorKind::Move, Direction::Minus) => 1,
            (GeneratorKind::Swap, Direction::Plus) => 2,
            (GeneratorKind::Swap, Direction::Minus) => 3,
        }
    }

    /// The group element this generator stands for.
    pub fn element(self) -> MixerElement {
        let step = self.direction.step();
        match self.kind {
            GeneratorKind::Move => MixerElement::new(step, SitePermutation::identity()),
            GeneratorKind::Swap => MixerElement::new(0, SitePermutation::transposition(0, step)),
        }
    }

    /// Every generator is its own inverse up to flipping the direction of a
    /// move; swaps are involutions.
    pub fn inverse(self) -> Generator {
        match self.kind {
            GeneratorKind::Move => Generator::mov(self.direction.reversed()),
            GeneratorKind::Swap => self,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GeneratorKind::Move => 'M',
            GeneratorKind::Swap => 'S',
        };
        let d = match self.direction {
            Direction::Plus => '+',
            Direction::Minus => '-',
        };
        write!(f, "{k}{d}")
    }
}

/// A word over the generators, evaluated left to right by right
/// multiplication.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorWord {
    letters: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, u: Generator) {
        self.letters.push(u);
    }

    pub fn extend_from(&mut self, other: &GeneratorWord) {
        self.letters.extend_from_slice(&other.letters);
    }

    /// Appends `|offset|` moves in the direction of `offset`.
    pub fn push_moves(&mut self, offset: Site) {
        if let Some(d) = Direction::of(offset) {
            let n = offset.unsigned_abs() as usize;
            self.letters
                .extend(std::iter::repeat_n(Generator::mov(d), n));
        }
    }

    /// `start · u_1 · u_2 ⋯ u_k`.
    pub fn evaluate_from(&self, start: &MixerElement) -> Result<MixerElement> {
        self.letters
            .iter()
            .try_fold(start.clone(), |acc, &u| acc.try_apply_generator(u))
    }

    pub fn evaluate(&self) -> Result<MixerElement> {
        self.evaluate_from(&MixerElement::identity())
    }

    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord {
            letters: self.letters.iter().rev().map(|u| u.inverse()).collect(),
        }
    }
}

impl From<Vec<Generator>> for GeneratorWord {
    fn from(letters: Vec<Generator>) -> Self {
        Self { letters }
    }
}

impl FromIterator<Generator> for GeneratorWord {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        Self {
            letters: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, u) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{u}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWordError(String);

impl fmt::Display for ParseWordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown generator token `{}`", self.0)
    }
}

impl std::error::Error for ParseWordError {}

impl FromStr for GeneratorWord {
    type Err = ParseWordError;

    /// Parses whitespace-separated tokens `M+`, `M-`, `S+`, `S-`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.split_whitespace()
            .map(|tok| match tok {
                "M+" => Ok(Generator::mov(Direction::Plus)),
                "M-" => Ok(Generator::mov(Direction::Minus)),
                "S+" => Ok(Generator::swap(Direction::Plus)),
                "S-" => Ok(Generator::swap(Direction::Minus)),
                other => Err(ParseWordError(other.to_string())),
            })
            .collect()
    }
}
