//! Objects `⟨B, h⟩`, the Post algebra `B^[n]` of monotone tuples, and the
//! subalgebra `M(B, h)` cut out by the block conditions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::boolalg::{BoolAlg, BoolElem, BoolError, Filter};
use crate::wajsberg::{Elem, WajsbergAlgebra, WajsbergError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("{d} is not a divisor of {n}")]
    NotDivisor { d: u32, n: u32 },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Bool(#[from] BoolError),
    #[error(transparent)]
    Wajsberg(#[from] WajsbergError),
    #[error("invalid object: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidObject(Vec<ObjectViolation>),
    #[error("tuple is not monotone at position {0}")]
    NotMonotone(usize),
    #[error("block condition xi_{{{d},{q}}} fails")]
    BlockCondition { d: u32, q: u32 },
    #[error("M(B,h) not closed: {0}")]
    NotClosed(String),
    #[error("index {index} out of range 1..={n}")]
    Index { index: u32, n: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// The positive divisors of `n`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorSet {
    n: u32,
    divisors: Vec<u32>,
}

impl DivisorSet {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "Div(n) needs n >= 1");
        let divisors = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        Self { n, divisors }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.divisors
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.divisors.iter().copied()
    }

    pub fn contains(&self, d: u32) -> bool {
        self.position(d).is_some()
    }

    pub fn position(&self, d: u32) -> Option<usize> {
        self.divisors.binary_search(&d).ok()
    }
}

/// `q_{d,j}`: the block of size `n/d` containing position `j`, i.e. the least
/// `q` with `j ≤ q·n/d`.
pub fn q_index(d: u32, j: u32, n: u32) -> u32 {
    debug_assert!(n.is_multiple_of(d) && (1..=n).contains(&j));
    (j * d).div_ceil(n)
}

/// A monotone sequence `f(1) ≤ ... ≤ f(n)` in a finite Boolean algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneTuple {
    entries: Vec<BoolElem>,
}

impl MonotoneTuple {
    pub fn new(entries: Vec<BoolElem>) -> Result<Self, PairError> {
        let first = entries
            .first()
            .ok_or_else(|| PairError::Malformed("empty tuple".into()))?;
        for (k, w) in entries.windows(2).enumerate() {
            if !w[0].leq(w[1])? {
                return Err(PairError::NotMonotone(k + 1));
            }
        }
        let alg = first.algebra();
        debug_assert!(entries.iter().all(|e| alg.contains(*e)));
        Ok(Self { entries })
    }

    pub fn constant(value: BoolElem, n: u32) -> Self {
        Self {
            entries: vec![value; n as usize],
        }
    }

    /// The Post constant `c_k`: `c_k(i) = 1` iff `i ≥ n+1−k`.
    pub fn post_constant(alg: BoolAlg, n: u32, k: u32) -> Self {
        assert!(k <= n);
        Self {
            entries: (1..=n)
                .map(|i| if i + k > n { alg.top() } else { alg.bottom() })
                .collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn base(&self) -> BoolAlg {
        self.entries[0].algebra()
    }

    pub fn entries(&self) -> &[BoolElem] {
        &self.entries
    }

    /// `f(i)` for `1 ≤ i ≤ n`.
    pub fn get(&self, i: u32) -> BoolElem {
        self.entries[i as usize - 1]
    }

    /// `(f ⇒ g)(k) = ⋀_{i=1}^{n−k+1} (f(i) → g(i+k−1))`.
    pub fn imp(&self, other: &Self) -> Self {
        let n = self.n();
        assert_eq!(n, other.n(), "tuple length mismatch");
        let top = self.base().top();
        let entries = (1..=n)
            .map(|k| {
                (1..=n - k + 1)
                    .map(|i| self.get(i).implies(other.get(i + k - 1)))
                    .fold(top, |acc, v| acc & v)
            })
            .collect();
        Self { entries }
    }

    /// `(¬f)(k) = ¬f(n+1−k)`.
    pub fn neg(&self) -> Self {
        let n = self.n();
        Self {
            entries: (1..=n).map(|k| !self.get(n + 1 - k)).collect(),
        }
    }

    /// Applies a map of the base algebra entrywise.
    pub fn map(&self, f: impl Fn(BoolElem) -> BoolElem) -> Result<Self, PairError> {
        Self::new(self.entries.iter().map(|&e| f(e)).collect())
    }

    pub fn parse(alg: BoolAlg, s: &str) -> Result<Self, PairError> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PairError::Parse(format!("expected `[...]`, found `{s}`")))?;
        let mut entries = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let end = rest
                .find('}')
                .ok_or_else(|| PairError::Parse(format!("unterminated element in `{s}`")))?;
            entries.push(alg.parse_elem(&rest[..=end])?);
            rest = rest[end + 1..]
                .trim_start()
                .trim_start_matches(',')
                .trim_start();
        }
        Self::new(entries)
    }
}

impl fmt::Display for MonotoneTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// `ξ_{d,q}(f) = f(q·n/d) → f((q−1)·n/d + 1)`.
pub fn xi(d: u32, q: u32, f: &MonotoneTuple) -> Result<BoolElem, PairError> {
    let n = f.n();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(PairError::NotDivisor { d, n });
    }
    if q == 0 || q > d {
        return Err(PairError::Index { index: q, n: d });
    }
    let block = n / d;
    Ok(f.get(q * block).implies(f.get((q - 1) * block + 1)))
}

/// Why a map `h` fails to be an object of `B^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectViolation {
    TopNotTrivial(BoolElem),
    GcdLaw {
        d: u32,
        r: u32,
        expected: BoolElem,
        found: BoolElem,
    },
}

impl fmt::Display for ObjectViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TopNotTrivial(g) => write!(f, "h(n) generated by {g}, expected {{1}}"),
            Self::GcdLaw { d, r, expected, found } => write!(
                f,
                "h(gcd({d},{r})) generated by {found}, expected h({d}) ∨ h({r}) generated by {expected}"
            ),
        }
    }
}

/// A map from `Div(n)` to filters of `B`, each stored by its generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FilterMap {
    base: BoolAlg,
    divisors: DivisorSet,
    gens: Vec<BoolElem>,
}

impl FilterMap {
    /// Requires exactly one generator per divisor of `n`. The object laws are
    /// not checked here; see [`FilterMap::check_object`].
    pub fn new(
        base: BoolAlg,
        n: u32,
        entries: impl IntoIterator<Item = (u32, BoolElem)>,
    ) -> Result<Self, PairError> {
        if n == 0 {
            return Err(PairError::Malformed("n must be positive".into()));
        }
        let divisors = DivisorSet::new(n);
        let mut gens: Vec<Option<BoolElem>> = vec![None; divisors.len()];
        for (d, g) in entries {
            let pos = divisors.position(d).ok_or(PairError::NotDivisor { d, n })?;
            if !base.contains(g) {
                return Err(
                    BoolError::Mismatch(base.atom_count(), g.algebra().atom_count()).into(),
                );
            }
            if gens[pos].replace(g).is_some() {
                return Err(PairError::Malformed(format!("h({d}) given twice")));
            }
        }
        let gens = gens
            .into_iter()
            .zip(divisors.iter())
            .map(|(g, d)| g.ok_or_else(|| PairError::Malformed(format!("h({d}) missing"))))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            base,
            divisors,
            gens,
        })
    }

    /// The Post case: `h(d) = B` for `d ≠ n`, `h(n) = {1}`.
    pub fn post(base: BoolAlg, n: u32) -> Self {
        let divisors = DivisorSet::new(n);
        let gens = divisors
            .iter()
            .map(|d| if d == n { base.top() } else { base.bottom() })
            .collect();
        Self {
            base,
            divisors,
            gens,
        }
    }

    /// Every valid object over `base` for this `n`, in lexicographic order of
    /// generator bitmasks.
    pub fn all_valid(base: BoolAlg, n: u32) -> Vec<FilterMap> {
        let divisors = DivisorSet::new(n);
        let k = divisors.len();
        let size = base.size();
        let mut out = Vec::new();
        let mut choice = vec![0u64; k];
        loop {
            let gens = choice
                .iter()
                .map(|&b| base.from_bits(b).expect("bits within algebra"))
                .collect();
            let map = FilterMap {
                base,
                divisors: divisors.clone(),
                gens,
            };
            if map.check_object().is_empty() {
                out.push(map);
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < size {
                    break;
                }
                choice[pos] = 0;
            }
        }
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

    /// Generator of `h(d)`.
    pub fn generator(&self, d: u32) -> Result<BoolElem, PairError> {
        self.divisors
            .position(d)
            .map(|p| self.gens[p])
            .ok_or(PairError::NotDivisor { d, n: self.n() })
    }

    pub fn h(&self, d: u32) -> Result<Filter, PairError> {
        self.generator(d).map(Filter::new)
    }

    /// Lists violations of `h(n) = {1}` and `h(gcd(d,r)) = h(d) ∨ h(r)`.
    pub fn check_object(&self) -> Vec<ObjectViolation> {
        let mut out = Vec::new();
        let n = self.n();
        let top_gen = self.gens[self.divisors.len() - 1];
        if !top_gen.is_top() {
            out.push(ObjectViolation::TopNotTrivial(top_gen));
        }
        for (i, d) in self.divisors.iter().enumerate() {
            for (j, r) in self.divisors.iter().enumerate().skip(i + 1) {
                let g = d.gcd(&r);
                let found = self.gens[self
                    .divisors
                    .position(g)
                    .expect("gcd of divisors divides n")];
                let expected = self.gens[i] & self.gens[j];
                if found != expected {
                    out.push(ObjectViolation::GcdLaw {
                        d,
                        r,
                        expected,
                        found,
                    });
                }
            }
        }
        debug_assert!(self.divisors.iter().all(|d| n.is_multiple_of(d)));
        out
    }

    pub fn validate(&self) -> Result<(), PairError> {
        let violations = self.check_object();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(PairError::InvalidObject(violations))
        }
    }

    /// Checks `ξ_{d,q}(f) ∈ h(d)` for every `d` and `q`, reporting the first
    /// failing block.
    pub fn admits(&self, f: &MonotoneTuple) -> Result<(), PairError> {
        if f.n() != self.n() {
            return Err(PairError::Malformed(format!(
                "tuple of length {} for n = {}",
                f.n(),
                self.n()
            )));
        }
        if f.base() != self.base {
            return Err(BoolError::Mismatch(self.base.atom_count(), f.base().atom_count()).into());
        }
        for (pos, d) in self.divisors.iter().enumerate() {
            for q in 1..=d {
                if !self.gens[pos].is_below(xi(d, q, f)?) {
                    return Err(PairError::BlockCondition { d, q });
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("pair n={} atoms={}\n", self.n(), self.base.atom_count());
        for (d, g) in self.divisors.iter().zip(&self.gens) {
            s.push_str(&format!("h {d} = {g}\n"));
        }
        s
    }
}

impl fmt::Display for FilterMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for FilterMap {
    type Err = PairError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| PairError::Parse("empty input".into()))?
            .split_whitespace()
            .collect();
        let field = |tok: &str, key: &str| -> Result<u32, PairError> {
            tok.strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| PairError::Parse(format!("expected `{key}=<int>`, found `{tok}`")))
        };
        if header.len() != 3 || header[0] != "pair" {
            return Err(PairError::Parse("expected `pair n=<n> atoms=<m>`".into()));
        }
        let n = field(header[1], "n")?;
        let base = BoolAlg::new(field(header[2], "atoms")?)?;
        let mut entries = Vec::new();
        for line in lines {
            let rest = line.strip_prefix('h').ok_or_else(|| {
                PairError::Parse(format!("expected `h <d> = <set>`, found `{line}`"))
            })?;
            let (d, set) = rest
                .split_once('=')
                .ok_or_else(|| PairError::Parse(format!("missing `=` in `{line}`")))?;
            let d = d
                .trim()
                .parse()
                .map_err(|_| PairError::Parse(format!("bad divisor in `{line}`")))?;
            entries.push((d, base.parse_elem(set)?));
        }
        Self::new(base, n, entries)
    }
}

/// A Wajsberg algebra whose elements are monotone tuples: `B^[n]` or a
/// subalgebra `M(B,h)`.
#[derive(Debug, Clone)]
pub struct TupleAlgebra {
    base: BoolAlg,
    n: u32,
    elements: Vec<MonotoneTuple>,
    index: HashMap<MonotoneTuple, Elem>,
    algebra: WajsbergAlgebra,
}

/// Tuples of `B^[n]` in atom-wise order: atom `α` lies in `f(i)` iff
/// `i ≥ n+1−t_α`, and the thresholds `t_α ∈ 0..=n` are read as base-`(n+1)`
/// digits with atom 0 least significant.
pub fn monotone_tuples(base: BoolAlg, n: u32) -> impl Iterator<Item = MonotoneTuple> {
    let m = base.atom_count();
    let radix = n as u64 + 1;
    let count = radix.pow(m);
    (0..count).map(move |mut code| {
        let mut entries = vec![base.bottom(); n as usize];
        for alpha in 0..m {
            let t = (code % radix) as u32;
            code /= radix;
            let atom = base.atom(alpha).expect("atom in range");
            for i in (n + 1 - t)..=n {
                entries[i as usize - 1] = entries[i as usize - 1] | atom;
            }
        }
        MonotoneTuple { entries }
    })
}

impl TupleAlgebra {
    fn from_tuples(base: BoolAlg, n: u32, elements: Vec<MonotoneTuple>) -> Result<Self, PairError> {
        let index: HashMap<MonotoneTuple, Elem> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let size = elements.len();
        let lookup = |t: MonotoneTuple, what: &dyn Fn() -> String| {
            index
                .get(&t)
                .copied()
                .ok_or_else(|| PairError::NotClosed(format!("{} = {t} missing", what())))
        };
        let top = lookup(MonotoneTuple::constant(base.top(), n), &|| "1".to_string())?;
        let mut imp = Vec::with_capacity(size * size);
        for f in &elements {
            for g in &elements {
                imp.push(lookup(f.imp(g), &|| format!("{f} ⇒ {g}"))?);
            }
        }
        let neg = elements
            .iter()
            .map(|f| lookup(f.neg(), &|| format!("¬{f}")))
            .collect::<Result<Vec<_>, _>>()?;
        lookup(MonotoneTuple::constant(base.bottom(), n), &|| {
            "0".to_string()
        })?;
        let algebra = WajsbergAlgebra::new(size, imp, neg, top)?;
        Ok(Self {
            base,
            n,
            elements,
            index,
            algebra,
        })
    }

    pub fn base(&self) -> BoolAlg {
        self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn algebra(&self) -> &WajsbergAlgebra {
        &self.algebra
    }

    pub fn elements(&self) -> &[MonotoneTuple] {
        &self.elements
    }

    pub fn tuple(&self, x: Elem) -> &MonotoneTuple {
        &self.elements[x]
    }

    pub fn index_of(&self, f: &MonotoneTuple) -> Option<Elem> {
        self.index.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `B^[n]` with the implication and negation computed entrywise in `B`.
pub fn build_bn(base: BoolAlg, n: u32) -> TupleAlgebra {
    assert!(n >= 1, "B^[n] needs n >= 1");
    TupleAlgebra::from_tuples(base, n, monotone_tuples(base, n).collect())
        .expect("B^[n] is closed under its operations")
}

/// `M(B,h)`: the tuples of `B^[n]` meeting every block condition. Closure
/// under `⇒` and `¬` is re-verified. Only `c_0` and `c_n` are guaranteed
/// members; `c_k` belongs to `M(B,h)` iff `h(d) = B` for every `d` with
/// `k·d/n` not an integer.
pub fn build_m(pair: &FilterMap) -> Result<TupleAlgebra, PairError> {
    pair.validate()?;
    let tuples = monotone_tuples(pair.base(), pair.n())
        .filter(|f| pair.admits(f).is_ok())
        .collect();
    TupleAlgebra::from_tuples(pair.base(), pair.n(), tuples)
}
