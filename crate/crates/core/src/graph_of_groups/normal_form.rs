use std::fmt;

use num_bigint::BigInt;

use super::graph::Letter;
use super::lattice::{is_zero_vec, zero_vec, ZVec};

/// A residue followed by an edge letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub residue: ZVec,
    pub letter: Letter,
}

/// Reduced path word `r₀ ℓ₁ r₁ ⋯ ℓ_k z` starting at the base vertex.
///
/// Every `r_j` is the canonical residue for the lattice absorbed by the
/// following letter and no letter is followed by its inverse across a zero
/// residue, so two words are equal as groupoid elements iff their normal
/// forms are equal. Loops at the base are the group elements; paths with a
/// zero tail are the Bass–Serre tree vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    syllables: Vec<Syllable>,
    tail: ZVec,
}

impl NormalForm {
    pub fn identity(rank: usize) -> Self {
        Self {
            syllables: Vec::new(),
            tail: zero_vec(rank),
        }
    }

    pub(crate) fn from_parts(syllables: Vec<Syllable>, tail: ZVec) -> Self {
        Self { syllables, tail }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn tail(&self) -> &[BigInt] {
        &self.tail
    }

    /// Number of edge letters.
    pub fn syllable_length(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty() && is_zero_vec(&self.tail)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().map(|s| s.letter)
    }

    /// Same path with the tail dropped, the canonical representative of the
    /// coset `g·G_v` for the end vertex `v`.
    pub fn coset_rep(&self) -> NormalForm {
        Self {
            syllables: self.syllables.clone(),
            tail: zero_vec(self.tail.len()),
        }
    }

    pub fn prefix(&self, k: usize) -> NormalForm {
        Self {
            syllables: self.syllables[..k].to_vec(),
            tail: zero_vec(self.tail.len()),
        }
    }

    /// Length of the longest common syllable prefix.
    pub fn common_prefix(&self, other: &NormalForm) -> usize {
        self.syllables
            .iter()
            .zip(&other.syllables)
            .take_while(|(a, b)| a == b)
            .count()
    }
}

fn fmt_vec(f: &mut fmt::Formatter<'_>, v: &[BigInt]) -> fmt::Result {
    if v.len() == 1 {
        write!(f, "{}", v[0])
    } else {
        write!(f, "(")?;
        for (i, x) in v.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Compact text form, e.g. `0 e0+ 1 e0- 3`; edges are shown by index.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.syllables {
            fmt_vec(f, &s.residue)?;
            write!(f, " e{}{} ", s.letter.edge, if s.letter.inverse { '-' } else { '+' })?;
        }
        fmt_vec(f, &self.tail)
    }
}
