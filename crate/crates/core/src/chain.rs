//! Finite Łukasiewicz chains `L_{n+1} = {0, 1/n, ..., 1}`.
//!
//! Values are exact numerator/denominator pairs. Two values interoperate only
//! when they live in the same chain (equal denominators).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("incompatible chains: denominators {0} and {1}")]
    Incompatible(u32, u32),
    #[error("invalid chain value {num}/{den}")]
    OutOfRange { num: u32, den: u32 },
    #[error("sigma index {index} out of range 1..={n}")]
    SigmaIndex { index: u32, n: u32 },
    #[error("no chain embedding: {0} does not divide {1}")]
    NoEmbedding(u32, u32),
    #[error("cannot parse chain value `{0}`")]
    Parse(String),
}

/// The element `num/den` of `L_{den+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainValue {
    num: u32,
    den: u32,
}

impl ChainValue {
    pub fn new(num: u32, den: u32) -> Result<Self, ChainError> {
        if den == 0 || num > den {
            return Err(ChainError::OutOfRange { num, den });
        }
        Ok(Self { num, den })
    }

    pub fn zero(den: u32) -> Self {
        Self { num: 0, den }
    }

    pub fn one(den: u32) -> Self {
        Self { num: den, den }
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn is_boolean(self) -> bool {
        self.num == 0 || self.num == self.den
    }

    fn same_chain(self, other: Self) -> Result<u32, ChainError> {
        if self.den == other.den {
            Ok(self.den)
        } else {
            Err(ChainError::Incompatible(self.den, other.den))
        }
    }

    /// `x → y = min(1, 1 − x + y)`.
    pub fn imp(self, other: Self) -> Result<Self, ChainError> {
        let n = self.same_chain(other)?;
        Ok(Self {
            num: n.min(n - self.num + other.num),
            den: n,
        })
    }

    /// `¬x = 1 − x`.
    pub fn neg(self) -> Self {
        Self {
            num: self.den - self.num,
            den: self.den,
        }
    }

    /// Moisil operator: `σ_j(k/n) = 1` iff `j + k > n`, else `0`.
    pub fn sigma(self, j: u32) -> Result<Self, ChainError> {
        let n = self.den;
        if j == 0 || j > n {
            return Err(ChainError::SigmaIndex { index: j, n });
        }
        Ok(if j + self.num > n {
            Self::one(n)
        } else {
            Self::zero(n)
        })
    }

    /// The image of `self` under the embedding `L_{t+1} ↪ L_{n+1}`, which
    /// exists iff `t | n`.
    pub fn embed(self, n: u32) -> Result<Self, ChainError> {
        let t = self.den;
        if n == 0 || !n.is_multiple_of(t) {
            return Err(ChainError::NoEmbedding(t, n));
        }
        Ok(Self {
            num: self.num * (n / t),
            den: n,
        })
    }

    /// `x ⊙ y = max(0, x + y − 1)`.
    pub fn odot(self, other: Self) -> Result<Self, ChainError> {
        let n = self.same_chain(other)?;
        Ok(Self {
            num: (self.num + other.num).saturating_sub(n),
            den: n,
        })
    }

    /// Whether the value lies in the subchain `L_{d+1}`.
    pub fn lies_in(self, d: u32) -> bool {
        d != 0 && self.den.is_multiple_of(d) && self.num.is_multiple_of(self.den / d)
    }
}

impl fmt::Display for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ChainValue {
    type Err = ChainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| ChainError::Parse(s.to_string()))?;
        let num = num
            .trim()
            .parse()
            .map_err(|_| ChainError::Parse(s.to_string()))?;
        let den = den
            .trim()
            .parse()
            .map_err(|_| ChainError::Parse(s.to_string()))?;
        Self::new(num, den)
    }
}

/// All elements of `L_{n+1}` in increasing order.
pub fn elements(n: u32) -> impl Iterator<Item = ChainValue> {
    (0..=n).map(move |num| ChainValue { num, den: n })
}
