//! Finite `(n+1)`-valued Boolean spaces and the translation between
//! `M(B,h)` and `L_{n+1}`-valued functions on the points of `B`.
//!
//! Points are the ultrafilters of `B`, indexed by the atom generating them.
//! Everything is finite and discrete, so every subset is closed and every
//! function is continuous.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::boolalg::{from_basis, stone_basis, BoolAlg, BoolError};
use crate::chain::{ChainError, ChainValue};
use crate::pairs::{DivisorSet, FilterMap, MonotoneTuple, PairError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoneError {
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Bool(#[from] BoolError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("value {value} at point {point} is not in L_{} although the point lies in h({d})", .d + 1)]
    Invariant {
        point: u32,
        d: u32,
        value: ChainValue,
    },
    #[error("map has {found} points, space has {expected}")]
    PointCount { expected: u32, found: u32 },
    #[error("value {value} is not over n = {n}")]
    Denominator { value: ChainValue, n: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Points of a finite Boolean algebra with, for every `d | n`, the closed set
/// `h_top(d)` of ultrafilters containing `h(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedBooleanSpace {
    base: BoolAlg,
    divisors: DivisorSet,
    closed: Vec<Vec<u32>>,
}

impl ValuedBooleanSpace {
    pub fn points(&self) -> u32 {
        self.base.atom_count()
    }

    pub fn base(&self) -> BoolAlg {
        self.base
    }

    pub fn n(&self) -> u32 {
        self.divisors.n()
    }

    pub fn divisors(&self) -> &DivisorSet {
        &self.divisors
    }

    /// `h_top(d)`, sorted.
    pub fn h_top(&self, d: u32) -> Result<&[u32], StoneError> {
        let n = self.n();
        let pos = self
            .divisors
            .position(d)
            .ok_or(PairError::NotDivisor { d, n })?;
        Ok(&self.closed[pos])
    }

    /// Whether `f` sends every point of `h_top(d)` into `L_{d+1}`. Reports
    /// the first offending point.
    pub fn check(&self, f: &ValuedMap) -> Result<(), StoneError> {
        if f.len() != self.points() {
            return Err(StoneError::PointCount {
                expected: self.points(),
                found: f.len(),
            });
        }
        let n = self.n();
        if let Some(&value) = f.values.iter().find(|v| v.den() != n) {
            return Err(StoneError::Denominator { value, n });
        }
        for (d, closed) in self.divisors.iter().zip(&self.closed) {
            for &point in closed {
                let value = f.values[point as usize];
                if !value.lies_in(d) {
                    return Err(StoneError::Invariant { point, d, value });
                }
            }
        }
        Ok(())
    }

    /// Every map satisfying the invariant, in lexicographic order of values
    /// (point 0 most significant).
    pub fn valued_maps(&self) -> Vec<ValuedMap> {
        let n = self.n();
        let allowed: Vec<Vec<ChainValue>> = (0..self.points())
            .map(|p| {
                crate::chain::elements(n)
                    .filter(|v| {
                        self.divisors
                            .iter()
                            .zip(&self.closed)
                            .all(|(d, c)| !c.contains(&p) || v.lies_in(d))
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![Vec::new()];
        for choices in &allowed {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<ChainValue>| {
                    choices.iter().map(move |&v| {
                        let mut next = prefix.clone();
                        next.push(v);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(|values| ValuedMap { values }).collect()
    }
}

/// `δ`: each filter `h(d)` becomes the set of ultrafilters containing it.
pub fn space_of(pair: &FilterMap) -> Result<ValuedBooleanSpace, StoneError> {
    pair.validate()?;
    let closed = pair
        .divisors()
        .iter()
        .map(|d| pair.generator(d).map(stone_basis))
        .collect::<Result<_, _>>()?;
    Ok(ValuedBooleanSpace {
        base: pair.base(),
        divisors: pair.divisors().clone(),
        closed,
    })
}

/// A function from points to `L_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValuedMap {
    values: Vec<ChainValue>,
}

impl ValuedMap {
    pub fn new(values: Vec<ChainValue>) -> Self {
        Self { values }
    }

    pub fn constant(value: ChainValue, points: u32) -> Self {
        Self {
            values: vec![value; points as usize],
        }
    }

    pub fn values(&self) -> &[ChainValue] {
        &self.values
    }

    pub fn len(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, point: u32) -> ChainValue {
        self.values[point as usize]
    }

    /// Pointwise chain implication.
    pub fn imp(&self, other: &Self) -> Result<Self, StoneError> {
        if self.len() != other.len() {
            return Err(StoneError::PointCount {
                expected: self.len(),
                found: other.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x.imp(*y))
            .collect::<Result<_, _>>()?;
        Ok(Self { values })
    }

    /// Pointwise chain negation.
    pub fn neg(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.neg()).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ValuedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, v) in self.values.iter().enumerate() {
            writeln!(f, "{p}: {v}")?;
        }
        Ok(())
    }
}

impl FromStr for ValuedMap {
    type Err = StoneError;

    /// Reads `<point>: k/n` lines; points must appear as `0, 1, 2, ...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut values = Vec::new();
        for line in s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (p, v) = line.split_once(':').ok_or_else(|| {
                StoneError::Parse(format!("expected `<point>: k/n`, got `{line}`"))
            })?;
            let p: usize = p
                .trim()
                .parse()
                .map_err(|_| StoneError::Parse(format!("bad point `{}`", p.trim())))?;
            if p != values.len() {
                return Err(StoneError::Parse(format!("point {p} out of order")));
            }
            values.push(v.parse()?);
        }
        Ok(Self { values })
    }
}

/// `g ↦ g̃`: the value at point `p` is `1` on `S_1`, `k/n` on
/// `S_{n−k+1} ∖ S_{n−k}` and `0` off `S_n`, where `S_i = s(g(i))`.
pub fn psi(g: &MonotoneTuple, pair: &FilterMap) -> Result<ValuedMap, StoneError> {
    pair.admits(g)?;
    let space = space_of(pair)?;
    let n = g.n();
    let sets: Vec<Vec<u32>> = (1..=n).map(|i| stone_basis(g.get(i))).collect();
    let in_s = |i: u32, p: u32| i >= 1 && sets[(i - 1) as usize].binary_search(&p).is_ok();
    let values = (0..space.points())
        .map(|p| {
            if in_s(1, p) {
                return ChainValue::one(n);
            }
            if !in_s(n, p) {
                return ChainValue::zero(n);
            }
            let k = (1..n)
                .find(|&k| in_s(n - k + 1, p) && !in_s(n - k, p))
                .expect("monotone tuple has a first index containing p");
            ChainValue::new(k, n).expect("k < n")
        })
        .collect();
    let f = ValuedMap { values };
    space.check(&f)?;
    Ok(f)
}

/// `f ↦ (a_1, ..., a_n)` with `s(a_j) = f⁻¹({1, (n−1)/n, ..., (n−j+1)/n})`.
pub fn psi_inverse(f: &ValuedMap, space: &ValuedBooleanSpace) -> Result<MonotoneTuple, StoneError> {
    space.check(f)?;
    let n = space.n();
    let entries = (1..=n)
        .map(|j| {
            let points: Vec<u32> = (0..f.len()).filter(|&p| f.get(p).num() > n - j).collect();
            from_basis(space.base(), &points)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonotoneTuple::new(entries)?)
}
