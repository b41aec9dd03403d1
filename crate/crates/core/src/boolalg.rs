//! Finite Boolean algebras as powersets of `m` atoms, encoded as bitmasks.
//!
//! Every filter of a finite Boolean algebra is principal, so a [`Filter`] is
//! stored by its generator. The improper filter (all of `B`) is the filter
//! generated by the bottom element.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ATOMS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolError {
    #[error("elements belong to different algebras ({0} vs {1} atoms)")]
    Mismatch(u32, u32),
    #[error("atom count {0} not supported (max {MAX_ATOMS})")]
    TooManyAtoms(u32),
    #[error("atom {atom} out of range for an algebra with {atoms} atoms")]
    AtomOutOfRange { atom: u32, atoms: u32 },
    #[error("cannot parse Boolean element `{0}`")]
    Parse(String),
}

fn full_mask(atoms: u32) -> u64 {
    if atoms == 64 {
        u64::MAX
    } else {
        (1u64 << atoms) - 1
    }
}

/// The powerset algebra over atoms `{0, ..., m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoolAlg {
    atoms: u32,
}

impl BoolAlg {
    pub fn new(atoms: u32) -> Result<Self, BoolError> {
        if atoms > MAX_ATOMS {
            return Err(BoolError::TooManyAtoms(atoms));
        }
        Ok(Self { atoms })
    }

    pub fn atom_count(self) -> u32 {
        self.atoms
    }

    /// Number of elements, `2^m`. Only meaningful for small `m`.
    pub fn size(self) -> u64 {
        1u64 << self.atoms
    }

    pub fn bottom(self) -> BoolElem {
        BoolElem {
            atoms: self.atoms,
            bits: 0,
        }
    }

    pub fn top(self) -> BoolElem {
        BoolElem {
            atoms: self.atoms,
            bits: full_mask(self.atoms),
        }
    }

    pub fn atom(self, i: u32) -> Result<BoolElem, BoolError> {
        if i >= self.atoms {
            return Err(BoolError::AtomOutOfRange {
                atom: i,
                atoms: self.atoms,
            });
        }
        Ok(BoolElem {
            atoms: self.atoms,
            bits: 1 << i,
        })
    }

    pub fn from_bits(self, bits: u64) -> Result<BoolElem, BoolError> {
        if bits & !full_mask(self.atoms) != 0 {
            return Err(BoolError::AtomOutOfRange {
                atom: 63 - bits.leading_zeros(),
                atoms: self.atoms,
            });
        }
        Ok(BoolElem {
            atoms: self.atoms,
            bits,
        })
    }

    pub fn from_atoms<I: IntoIterator<Item = u32>>(self, atoms: I) -> Result<BoolElem, BoolError> {
        let mut bits = 0u64;
        for a in atoms {
            bits |= self.atom(a)?.bits;
        }
        Ok(BoolElem {
            atoms: self.atoms,
            bits,
        })
    }

    /// All `2^m` elements, ordered by bitmask.
    pub fn elements(self) -> impl Iterator<Item = BoolElem> {
        let atoms = self.atoms;
        (0..1u64 << atoms).map(move |bits| BoolElem { atoms, bits })
    }

    pub fn contains(self, x: BoolElem) -> bool {
        x.atoms == self.atoms
    }

    /// The `m` ultrafilters, one generated by each atom.
    pub fn ultrafilters(self) -> Vec<Filter> {
        (0..self.atoms)
            .map(|i| Filter::new(self.atom(i).expect("atom in range")))
            .collect()
    }

    /// Parses `{0,2}` style atom lists.
    pub fn parse_elem(self, s: &str) -> Result<BoolElem, BoolError> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| BoolError::Parse(s.to_string()))?;
        let mut atoms = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            atoms.push(
                part.parse::<u32>()
                    .map_err(|_| BoolError::Parse(s.to_string()))?,
            );
        }
        self.from_atoms(atoms)
    }
}

/// An element of a finite Boolean algebra: a subset of the atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoolElem {
    atoms: u32,
    bits: u64,
}

impl BoolElem {
    pub fn algebra(self) -> BoolAlg {
        BoolAlg { atoms: self.atoms }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn has_atom(self, i: u32) -> bool {
        i < self.atoms && self.bits >> i & 1 == 1
    }

    pub fn atom_indices(self) -> impl Iterator<Item = u32> {
        let bits = self.bits;
        (0..self.atoms).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn is_top(self) -> bool {
        self.bits == full_mask(self.atoms)
    }

    pub fn is_bottom(self) -> bool {
        self.bits == 0
    }

    fn check(self, other: Self) -> Result<(), BoolError> {
        if self.atoms == other.atoms {
            Ok(())
        } else {
            Err(BoolError::Mismatch(self.atoms, other.atoms))
        }
    }

    pub fn meet(self, other: Self) -> Result<Self, BoolError> {
        self.check(other)?;
        Ok(self & other)
    }

    pub fn join(self, other: Self) -> Result<Self, BoolError> {
        self.check(other)?;
        Ok(self | other)
    }

    pub fn compl(self) -> Self {
        !self
    }

    pub fn leq(self, other: Self) -> Result<bool, BoolError> {
        self.check(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    /// `x → y = ¬x ∨ y`.
    pub fn imp(self, other: Self) -> Result<Self, BoolError> {
        self.check(other)?;
        Ok(!self | other)
    }

    /// Unchecked order test for elements already known to share an algebra.
    pub(crate) fn is_below(self, other: Self) -> bool {
        debug_assert_eq!(self.atoms, other.atoms);
        self.bits & !other.bits == 0
    }

    pub(crate) fn implies(self, other: Self) -> Self {
        !self | other
    }
}

/// Panics when the operands come from different algebras; use
/// [`BoolElem::meet`] for the checked variant.
impl BitAnd for BoolElem {
    type Output = BoolElem;
    fn bitand(self, rhs: Self) -> Self {
        assert_eq!(self.atoms, rhs.atoms, "Boolean algebra mismatch");
        BoolElem {
            atoms: self.atoms,
            bits: self.bits & rhs.bits,
        }
    }
}

impl BitOr for BoolElem {
    type Output = BoolElem;
    fn bitor(self, rhs: Self) -> Self {
        assert_eq!(self.atoms, rhs.atoms, "Boolean algebra mismatch");
        BoolElem {
            atoms: self.atoms,
            bits: self.bits | rhs.bits,
        }
    }
}

impl Not for BoolElem {
    type Output = BoolElem;
    fn not(self) -> Self {
        BoolElem {
            atoms: self.atoms,
            bits: !self.bits & full_mask(self.atoms),
        }
    }
}

impl fmt::Display for BoolElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.atom_indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// The principal filter `{x : x ≥ generator}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Filter {
    generator: BoolElem,
}

impl Filter {
    pub fn new(generator: BoolElem) -> Self {
        Self { generator }
    }

    /// The trivial filter `{1}`.
    pub fn trivial(alg: BoolAlg) -> Self {
        Self::new(alg.top())
    }

    /// The improper filter, all of `B`.
    pub fn improper(alg: BoolAlg) -> Self {
        Self::new(alg.bottom())
    }

    pub fn generator(self) -> BoolElem {
        self.generator
    }

    pub fn is_trivial(self) -> bool {
        self.generator.is_top()
    }

    pub fn is_improper(self) -> bool {
        self.generator.is_bottom()
    }

    pub fn contains(self, x: BoolElem) -> Result<bool, BoolError> {
        self.generator.leq(x)
    }

    /// Join in the lattice of filters: the filter generated by both, whose
    /// generator is the meet of the two generators.
    pub fn join(self, other: Filter) -> Result<Filter, BoolError> {
        Ok(Filter::new(self.generator.meet(other.generator)?))
    }

    /// `F ⊆ G`, i.e. `gen(G) ≤ gen(F)`.
    pub fn is_subset_of(self, other: Filter) -> Result<bool, BoolError> {
        other.generator.leq(self.generator)
    }
}

/// The Stone basis set `s(a)`: indices of the ultrafilters containing `a`.
/// Ultrafilter `i` is the one generated by atom `i`.
pub fn stone_basis(a: BoolElem) -> Vec<u32> {
    a.atom_indices().collect()
}

/// Inverse of [`stone_basis`].
pub fn from_basis(alg: BoolAlg, points: &[u32]) -> Result<BoolElem, BoolError> {
    alg.from_atoms(points.iter().copied())
}
