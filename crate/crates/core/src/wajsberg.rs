//! Finite Wajsberg algebras given by operation tables.
//!
//! Elements are indices `0..size`. Everything else (lattice and MV operations,
//! the Boolean skeleton, implicative and prime filters, quotients, Moisil
//! operators) is derived from the implication and negation tables.
//!
//! Implicative filters of a finite algebra are principal and generated by an
//! idempotent: a finite lattice filter closed under `⊙` contains its least
//! element `g`, and `g ⊙ g ∈ F` forces `g ⊙ g = g`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use thiserror::Error;

use crate::boolalg::{BoolAlg, BoolElem};
use crate::chain::ChainValue;

pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WajsbergError {
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("idempotents do not form a Boolean algebra: {0}")]
    NotBoolean(String),
    #[error("quotient by the improper filter is trivial")]
    ImproperFilter,
    #[error("prime quotient {height_plus_one}-element chain does not embed in L_{n_plus_one}: algebra is not {n_plus_one}-valued", height_plus_one = .height + 1, n_plus_one = .n + 1)]
    NotNValued { height: u32, n: u32 },
    #[error("prime quotient is a chain but not a Łukasiewicz chain")]
    NotLukasiewicz,
    #[error("elements {0} and {1} agree in every prime quotient")]
    NotSubdirect(Elem, Elem),
    #[error("{d} is not a divisor of {n}")]
    NotDivisor { d: u32, n: u32 },
    #[error("chi_{0} is empty")]
    EmptyChi(u32),
    #[error("no element takes value (d-1)/d on chi_{0}")]
    NoWitness(u32),
    #[error("no element realizes sigma_{index}({x})")]
    NoSigma { index: u32, x: Elem },
    #[error("sigma index {index} out of range 1..={n}")]
    SigmaIndex { index: u32, n: u32 },
    #[error("element {0} out of range")]
    OutOfRange(Elem),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A finite algebra `⟨A, →, ¬, 1⟩`.
#[derive(Debug, Clone)]
pub struct WajsbergAlgebra {
    size: usize,
    imp: Vec<Elem>,
    neg: Vec<Elem>,
    top: Elem,
    primes: OnceLock<Result<Vec<PrimeQuotient>, WajsbergError>>,
}

impl PartialEq for WajsbergAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.top == other.top
            && self.neg == other.neg
            && self.imp == other.imp
    }
}

impl Eq for WajsbergAlgebra {}

/// A single failed instance of one of the four defining identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub identity: u8,
    pub witness: Vec<Elem>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z"];
        write!(
            f,
            "identity {} ({}) fails at",
            self.identity,
            identity_text(self.identity)
        )?;
        for (name, v) in names.iter().zip(&self.witness) {
            write!(f, " {name}={v}")?;
        }
        Ok(())
    }
}

pub fn identity_text(identity: u8) -> &'static str {
    match identity {
        1 => "1→x = x",
        2 => "(x→y)→((y→z)→(x→z)) = 1",
        3 => "(x→y)→y = (y→x)→x",
        4 => "(¬y→¬x)→(x→y) = 1",
        _ => "?",
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// Number of tuple evaluations performed.
    pub checked: u64,
    /// Total number of failing tuples.
    pub failures: u64,
    /// Failing tuples per identity.
    pub by_identity: [u64; 4],
    /// The first failures found, at most [`AxiomReport::KEEP`].
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub const KEEP: usize = 32;

    pub fn is_ok(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, identity: u8, witness: &[Elem]) {
        self.failures += 1;
        self.by_identity[identity as usize - 1] += 1;
        if self.violations.len() < Self::KEEP {
            self.violations.push(AxiomViolation {
                identity,
                witness: witness.to_vec(),
            });
        }
    }
}

impl WajsbergAlgebra {
    /// Builds an algebra from a row-major implication table. Only the shape
    /// of the tables is validated here; see [`WajsbergAlgebra::check_axioms`].
    pub fn new(
        size: usize,
        imp: Vec<Elem>,
        neg: Vec<Elem>,
        top: Elem,
    ) -> Result<Self, WajsbergError> {
        if size == 0 {
            return Err(WajsbergError::Malformed("empty carrier".into()));
        }
        if imp.len() != size * size {
            return Err(WajsbergError::Malformed(format!(
                "implication table has {} entries, expected {}",
                imp.len(),
                size * size
            )));
        }
        if neg.len() != size {
            return Err(WajsbergError::Malformed(format!(
                "negation table has {} entries, expected {size}",
                neg.len()
            )));
        }
        if top >= size {
            return Err(WajsbergError::Malformed(format!("top {top} out of range")));
        }
        if let Some(bad) = imp.iter().chain(&neg).find(|&&e| e >= size) {
            return Err(WajsbergError::Malformed(format!(
                "table entry {bad} out of range"
            )));
        }
        Ok(Self {
            size,
            imp,
            neg,
            top,
            primes: OnceLock::new(),
        })
    }

    pub fn from_fns(
        size: usize,
        top: Elem,
        imp: impl Fn(Elem, Elem) -> Elem,
        neg: impl Fn(Elem) -> Elem,
    ) -> Result<Self, WajsbergError> {
        let mut table = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                table.push(imp(x, y));
            }
        }
        Self::new(size, table, (0..size).map(neg).collect(), top)
    }

    /// `L_{n+1}` with element `k` standing for `k/n`.
    pub fn chain(n: u32) -> Self {
        assert!(n >= 1, "chain L_(n+1) needs n >= 1");
        let n = n as usize;
        Self::from_fns(n + 1, n, |x, y| n.min(n - x + y), |x| n - x)
            .expect("chain tables are well formed")
    }

    /// Direct product; the pair `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &Self) -> Self {
        let s = other.size;
        Self::from_fns(
            self.size * s,
            self.top * s + other.top,
            |x, y| self.imp(x / s, y / s) * s + other.imp(x % s, y % s),
            |x| self.neg(x / s) * s + other.neg(x % s),
        )
        .expect("product tables are well formed")
    }

    /// Product of chains `L_{h+1}` for the given heights.
    pub fn chain_product(heights: &[u32]) -> Self {
        let mut it = heights.iter();
        let first = Self::chain(*it.next().expect("at least one factor"));
        it.fold(first, |acc, &h| acc.product(&Self::chain(h)))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn bottom(&self) -> Elem {
        self.neg[self.top]
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    #[inline]
    pub fn imp(&self, x: Elem, y: Elem) -> Elem {
        self.imp[x * self.size + y]
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.neg[x]
    }

    /// `x ∨ y = (x→y)→y`.
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.imp(self.imp(x, y), y)
    }

    /// `x ∧ y = ¬(¬x ∨ ¬y)`.
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.neg(self.join(self.neg(x), self.neg(y)))
    }

    /// `x ⊕ y = ¬y → x`.
    pub fn oplus(&self, x: Elem, y: Elem) -> Elem {
        self.imp(self.neg(y), x)
    }

    /// `x ⊙ y = ¬(x → ¬y)`.
    pub fn odot(&self, x: Elem, y: Elem) -> Elem {
        self.neg(self.imp(x, self.neg(y)))
    }

    /// `x^0 = 1`, `x^k = x^{k-1} ⊙ x`.
    pub fn power(&self, x: Elem, k: u32) -> Elem {
        (0..k).fold(self.top, |acc, _| self.odot(acc, x))
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.imp(x, y) == self.top
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter()
            .fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    fn check_unary(&self, x: Elem, report: &mut AxiomReport) {
        report.checked += 1;
        if self.imp(self.top, x) != x {
            report.record(1, &[x]);
        }
    }

    fn check_binary(&self, x: Elem, y: Elem, report: &mut AxiomReport) {
        report.checked += 1;
        let xy = self.imp(x, y);
        if self.imp(xy, y) != self.imp(self.imp(y, x), x) {
            report.record(3, &[x, y]);
        }
        if self.imp(self.imp(self.neg(y), self.neg(x)), xy) != self.top {
            report.record(4, &[x, y]);
        }
    }

    fn check_ternary(&self, x: Elem, y: Elem, z: Elem, report: &mut AxiomReport) {
        report.checked += 1;
        let rhs = self.imp(self.imp(y, z), self.imp(x, z));
        if self.imp(self.imp(x, y), rhs) != self.top {
            report.record(2, &[x, y, z]);
        }
    }

    /// Checks the four identities on every tuple of elements.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        for x in self.elements() {
            self.check_unary(x, &mut report);
            for y in self.elements() {
                self.check_binary(x, y, &mut report);
                for z in self.elements() {
                    self.check_ternary(x, y, z, &mut report);
                }
            }
        }
        report
    }

    /// Checks the one- and two-variable identities exhaustively and the
    /// three-variable identity on `triples` uniformly random triples.
    pub fn check_axioms_sampled<R: Rng>(&self, triples: u64, rng: &mut R) -> AxiomReport {
        let mut report = AxiomReport::default();
        for x in self.elements() {
            self.check_unary(x, &mut report);
            for y in self.elements() {
                self.check_binary(x, y, &mut report);
            }
        }
        for _ in 0..triples {
            let x = rng.gen_range(0..self.size);
            let y = rng.gen_range(0..self.size);
            let z = rng.gen_range(0..self.size);
            self.check_ternary(x, y, z, &mut report);
        }
        report
    }

    pub fn is_idempotent(&self, x: Elem) -> bool {
        self.odot(x, x) == x
    }

    pub fn is_chain(&self) -> bool {
        self.elements()
            .all(|x| self.elements().all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    /// The idempotents `B(A) = {x : x ⊙ x = x}`, identified with a powerset
    /// algebra over its atoms.
    pub fn boolean_skeleton(&self) -> Result<BooleanSkeleton, WajsbergError> {
        BooleanSkeleton::new(self)
    }

    /// One filter per idempotent generator, in increasing generator order.
    pub fn implicative_filters(&self) -> Vec<ImplicativeFilter> {
        self.elements()
            .filter(|&x| self.is_idempotent(x))
            .map(|generator| ImplicativeFilter { generator })
            .collect()
    }

    /// `A/F` under `x ≡ y ⟺ x→y ∈ F and y→x ∈ F`. Classes are numbered by
    /// their least element.
    pub fn quotient(&self, filter: ImplicativeFilter) -> Result<Quotient, WajsbergError> {
        if filter.generator >= self.size {
            return Err(WajsbergError::OutOfRange(filter.generator));
        }
        if filter.is_improper(self) {
            return Err(WajsbergError::ImproperFilter);
        }
        let mut projection = vec![usize::MAX; self.size];
        let mut reps = Vec::new();
        for x in self.elements() {
            if projection[x] != usize::MAX {
                continue;
            }
            let class = reps.len();
            reps.push(x);
            for y in x..self.size {
                if filter.contains(self, self.imp(x, y)) && filter.contains(self, self.imp(y, x)) {
                    projection[y] = class;
                }
            }
        }
        let k = reps.len();
        let algebra = Self::from_fns(
            k,
            projection[self.top],
            |a, b| projection[self.imp(reps[a], reps[b])],
            |a| projection[self.neg(reps[a])],
        )?;
        for x in self.elements() {
            if algebra.neg(projection[x]) != projection[self.neg(x)] {
                return Err(WajsbergError::Malformed(format!(
                    "negation not compatible with {filter:?} at {x}"
                )));
            }
            for y in self.elements() {
                if algebra.imp(projection[x], projection[y]) != projection[self.imp(x, y)] {
                    return Err(WajsbergError::Malformed(format!(
                        "implication not compatible with {filter:?} at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(Quotient {
            algebra,
            projection,
        })
    }

    /// Proper implicative filters whose quotient is totally ordered.
    pub fn prime_filters(&self) -> Vec<ImplicativeFilter> {
        self.implicative_filters()
            .into_iter()
            .filter(|f| !f.is_improper(self))
            .filter(|&f| {
                self.quotient(f)
                    .map(|q| q.algebra.is_chain())
                    .unwrap_or(false)
            })
            .collect()
    }

    /// Prime filters with the rank identification of each quotient chain
    /// `A/P ≅ L_{c+1}`. Computed once per algebra.
    pub fn prime_quotients(&self) -> Result<&[PrimeQuotient], WajsbergError> {
        self.primes
            .get_or_init(|| self.compute_prime_quotients())
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    fn compute_prime_quotients(&self) -> Result<Vec<PrimeQuotient>, WajsbergError> {
        let mut out = Vec::new();
        for filter in self.prime_filters() {
            let q = self.quotient(filter)?;
            let chain = &q.algebra;
            // Rank of a class = number of classes strictly below it.
            let class_rank: Vec<u32> = chain
                .elements()
                .map(|c| {
                    chain
                        .elements()
                        .filter(|&d| d != c && chain.leq(d, c))
                        .count() as u32
                })
                .collect();
            let height = (chain.size() - 1) as u32;
            let as_value =
                |c: Elem| ChainValue::new(class_rank[c], height).expect("rank within height");
            for a in chain.elements() {
                if as_value(chain.neg(a)) != as_value(a).neg() {
                    return Err(WajsbergError::NotLukasiewicz);
                }
                for b in chain.elements() {
                    if Ok(as_value(chain.imp(a, b))) != as_value(a).imp(as_value(b)) {
                        return Err(WajsbergError::NotLukasiewicz);
                    }
                }
            }
            let rank = q.projection.iter().map(|&c| class_rank[c]).collect();
            out.push(PrimeQuotient {
                filter,
                height,
                rank,
            });
        }
        Ok(out)
    }

    /// Serializes to the text interchange format.
    pub fn to_text(&self) -> String {
        let mut s = format!("wajsberg size={} top={}\nneg:", self.size, self.top);
        for v in &self.neg {
            s.push_str(&format!(" {v}"));
        }
        s.push_str("\nimp:\n");
        for row in self.imp.chunks(self.size) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for WajsbergAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_kv(token: &str, key: &str) -> Result<usize, WajsbergError> {
    token
        .strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| WajsbergError::Parse(format!("expected `{key}=<int>`, found `{token}`")))
}

impl FromStr for WajsbergAlgebra {
    type Err = WajsbergError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| WajsbergError::Parse("empty input".into()))?
            .split_whitespace()
            .collect();
        if header.len() != 3 || header[0] != "wajsberg" {
            return Err(WajsbergError::Parse(
                "expected `wajsberg size=<s> top=<t>`".into(),
            ));
        }
        let size = parse_kv(header[1], "size")?;
        let top = parse_kv(header[2], "top")?;
        let ints = |text: &str| -> Result<Vec<Elem>, WajsbergError> {
            text.split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| WajsbergError::Parse(format!("bad entry `{t}`")))
                })
                .collect()
        };
        let neg_line = lines
            .next()
            .and_then(|l| l.strip_prefix("neg:"))
            .ok_or_else(|| WajsbergError::Parse("expected `neg:` line".into()))?;
        let neg = ints(neg_line)?;
        let imp_head = lines
            .next()
            .and_then(|l| l.strip_prefix("imp:"))
            .ok_or_else(|| WajsbergError::Parse("expected `imp:` line".into()))?;
        let mut imp = ints(imp_head)?;
        for line in lines {
            imp.extend(ints(line)?);
        }
        Self::new(size, imp, neg, top)
    }
}

/// The implicative filter `{x : x ≥ generator}` for an idempotent generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ImplicativeFilter {
    generator: Elem,
}

impl ImplicativeFilter {
    pub fn new(algebra: &WajsbergAlgebra, generator: Elem) -> Result<Self, WajsbergError> {
        if generator >= algebra.size() {
            return Err(WajsbergError::OutOfRange(generator));
        }
        if !algebra.is_idempotent(generator) {
            return Err(WajsbergError::Malformed(format!(
                "filter generator {generator} is not idempotent"
            )));
        }
        Ok(Self { generator })
    }

    pub fn generator(self) -> Elem {
        self.generator
    }

    pub fn contains(self, algebra: &WajsbergAlgebra, x: Elem) -> bool {
        algebra.leq(self.generator, x)
    }

    pub fn is_improper(self, algebra: &WajsbergAlgebra) -> bool {
        self.generator == algebra.bottom()
    }

    pub fn members(self, algebra: &WajsbergAlgebra) -> Vec<Elem> {
        algebra
            .elements()
            .filter(|&x| self.contains(algebra, x))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: WajsbergAlgebra,
    /// Element of `A` to class index.
    pub projection: Vec<Elem>,
}

/// A prime filter together with the identification `A/P ≅ L_{height+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeQuotient {
    filter: ImplicativeFilter,
    height: u32,
    rank: Vec<u32>,
}

impl PrimeQuotient {
    pub fn filter(&self) -> ImplicativeFilter {
        self.filter
    }

    /// `c` such that `A/P ≅ L_{c+1}`.
    pub fn height(&self) -> u32 {
        self.height
    }

    /// `[x]_P` as an element of `L_{c+1}`.
    pub fn class_value(&self, x: Elem) -> ChainValue {
        ChainValue::new(self.rank[x], self.height).expect("rank within height")
    }
}

/// `B(A)` with an explicit isomorphism onto the powerset of its atoms.
#[derive(Debug, Clone)]
pub struct BooleanSkeleton {
    alg: BoolAlg,
    atoms: Vec<Elem>,
    elements: Vec<Elem>,
    by_bits: HashMap<u64, Elem>,
    bits_of: HashMap<Elem, u64>,
}

impl BooleanSkeleton {
    fn new(a: &WajsbergAlgebra) -> Result<Self, WajsbergError> {
        let elements: Vec<Elem> = a.elements().filter(|&x| a.is_idempotent(x)).collect();
        let is_member = |x: Elem| a.is_idempotent(x);
        for &e in [a.top(), a.bottom()].iter() {
            if !is_member(e) {
                return Err(WajsbergError::NotBoolean(format!("{e} is not idempotent")));
            }
        }
        for &x in &elements {
            if !is_member(a.neg(x)) {
                return Err(WajsbergError::NotBoolean(format!("¬{x} not idempotent")));
            }
            if a.join(x, a.neg(x)) != a.top() {
                return Err(WajsbergError::NotBoolean(format!("{x} has no complement")));
            }
            for &y in &elements {
                if !is_member(a.join(x, y)) || !is_member(a.meet(x, y)) {
                    return Err(WajsbergError::NotBoolean(format!(
                        "not closed at ({x}, {y})"
                    )));
                }
            }
        }
        let bottom = a.bottom();
        let atoms: Vec<Elem> = elements
            .iter()
            .copied()
            .filter(|&x| x != bottom)
            .filter(|&x| {
                elements
                    .iter()
                    .all(|&y| y == bottom || y == x || !a.leq(y, x))
            })
            .collect();
        if atoms.len() as u32 > crate::boolalg::MAX_ATOMS {
            return Err(WajsbergError::NotBoolean("too many atoms".into()));
        }
        let alg = BoolAlg::new(atoms.len() as u32)
            .map_err(|e| WajsbergError::NotBoolean(e.to_string()))?;
        let mut by_bits = HashMap::new();
        let mut bits_of = HashMap::new();
        for &x in &elements {
            let bits = atoms
                .iter()
                .enumerate()
                .filter(|&(_, &at)| a.leq(at, x))
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            if by_bits.insert(bits, x).is_some() {
                return Err(WajsbergError::NotBoolean(format!(
                    "{x} not determined by its atoms"
                )));
            }
            bits_of.insert(x, bits);
        }
        if by_bits.len() as u64 != alg.size() {
            return Err(WajsbergError::NotBoolean(format!(
                "{} idempotents over {} atoms",
                by_bits.len(),
                atoms.len()
            )));
        }
        for &x in &elements {
            if bits_of[&a.neg(x)] != !bits_of[&x] & alg.top().bits() {
                return Err(WajsbergError::NotBoolean(format!("complement of {x}")));
            }
            for &y in &elements {
                if bits_of[&a.meet(x, y)] != bits_of[&x] & bits_of[&y]
                    || bits_of[&a.join(x, y)] != bits_of[&x] | bits_of[&y]
                {
                    return Err(WajsbergError::NotBoolean(format!(
                        "lattice operations at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(Self {
            alg,
            atoms,
            elements,
            by_bits,
            bits_of,
        })
    }

    pub fn alg(&self) -> BoolAlg {
        self.alg
    }

    /// Atom elements of `B(A)`; atom `i` of [`BooleanSkeleton::alg`] is `atoms()[i]`.
    pub fn atoms(&self) -> &[Elem] {
        &self.atoms
    }

    /// The idempotents in increasing index order.
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.bits_of.contains_key(&x)
    }

    pub fn to_bool(&self, x: Elem) -> Option<BoolElem> {
        self.bits_of
            .get(&x)
            .map(|&b| self.alg.from_bits(b).expect("bits within algebra"))
    }

    pub fn to_elem(&self, b: BoolElem) -> Option<Elem> {
        if !self.alg.contains(b) {
            return None;
        }
        self.by_bits.get(&b.bits()).copied()
    }
}

/// An algebra read as `(n+1)`-valued: every prime quotient `L_{c+1}` has
/// `c | n` and is identified with a subchain of `L_{n+1}`.
#[derive(Debug)]
pub struct NValued<'a> {
    algebra: &'a WajsbergAlgebra,
    n: u32,
    primes: &'a [PrimeQuotient],
    skeleton: BooleanSkeleton,
    profiles: HashMap<Vec<u32>, Elem>,
    y: OnceLock<Result<Vec<Elem>, WajsbergError>>,
}

impl<'a> NValued<'a> {
    pub fn new(algebra: &'a WajsbergAlgebra, n: u32) -> Result<Self, WajsbergError> {
        if n == 0 {
            return Err(WajsbergError::Malformed("n must be positive".into()));
        }
        let primes = algebra.prime_quotients()?;
        if let Some(p) = primes.iter().find(|p| !n.is_multiple_of(p.height)) {
            return Err(WajsbergError::NotNValued {
                height: p.height,
                n,
            });
        }
        let skeleton = algebra.boolean_skeleton()?;
        let mut profiles = HashMap::with_capacity(algebra.size());
        for x in algebra.elements() {
            let profile = primes.iter().map(|p| p.rank[x] * (n / p.height)).collect();
            if let Some(prev) = profiles.insert(profile, x) {
                return Err(WajsbergError::NotSubdirect(prev, x));
            }
        }
        Ok(Self {
            algebra,
            n,
            primes,
            skeleton,
            profiles,
            y: OnceLock::new(),
        })
    }

    pub fn algebra(&self) -> &'a WajsbergAlgebra {
        self.algebra
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn primes(&self) -> &'a [PrimeQuotient] {
        self.primes
    }

    pub fn skeleton(&self) -> &BooleanSkeleton {
        &self.skeleton
    }

    /// `[x]_P` in `L_{n+1}` for the prime with index `prime`.
    pub fn value(&self, prime: usize, x: Elem) -> ChainValue {
        let p = &self.primes[prime];
        p.class_value(x).embed(self.n).expect("height divides n")
    }

    /// `(x_P)_P` over all primes, numerators over `n`.
    pub fn profile(&self, x: Elem) -> Vec<u32> {
        (0..self.primes.len())
            .map(|p| self.value(p, x).num())
            .collect()
    }

    /// The element with the given profile, if any.
    pub fn from_profile(&self, profile: &[u32]) -> Option<Elem> {
        self.profiles.get(profile).copied()
    }

    fn check_divisor(&self, d: u32) -> Result<(), WajsbergError> {
        if d == 0 || !self.n.is_multiple_of(d) {
            Err(WajsbergError::NotDivisor { d, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Indices of the primes with `A/P ≅ L_{d+1}` exactly.
    pub fn chi_d(&self, d: u32) -> Result<Vec<usize>, WajsbergError> {
        self.check_divisor(d)?;
        Ok((0..self.primes.len())
            .filter(|&p| self.primes[p].height == d)
            .collect())
    }

    /// Indices of the primes with `A/P` embeddable in `L_{d+1}`.
    pub fn embeddable_in(&self, d: u32) -> Result<Vec<usize>, WajsbergError> {
        self.check_divisor(d)?;
        Ok((0..self.primes.len())
            .filter(|&p| d.is_multiple_of(self.primes[p].height))
            .collect())
    }

    /// Moisil operator `σ_i`: the element whose class in each prime quotient is
    /// `σ_i` of the class of `x`.
    pub fn sigma(&self, i: u32, x: Elem) -> Result<Elem, WajsbergError> {
        if i == 0 || i > self.n {
            return Err(WajsbergError::SigmaIndex {
                index: i,
                n: self.n,
            });
        }
        if x >= self.algebra.size() {
            return Err(WajsbergError::OutOfRange(x));
        }
        let target: Vec<u32> = (0..self.primes.len())
            .map(|p| self.value(p, x).sigma(i).expect("index checked").num())
            .collect();
        self.from_profile(&target)
            .ok_or(WajsbergError::NoSigma { index: i, x })
    }

    /// First element (by index) with class `(d-1)/d` in every prime of `χ_d(A)`.
    pub fn find_xd(&self, d: u32) -> Result<Elem, WajsbergError> {
        let chi = self.chi_d(d)?;
        if chi.is_empty() {
            return Err(WajsbergError::EmptyChi(d));
        }
        self.algebra
            .elements()
            .find(|&x| chi.iter().all(|&p| self.primes[p].rank[x] == d - 1))
            .ok_or(WajsbergError::NoWitness(d))
    }

    /// `y_d = 1` if `χ_d(A) = ∅`, else `x_d ∨ ¬x_d^{d-1}`.
    pub fn build_yd(&self, d: u32) -> Result<Elem, WajsbergError> {
        if self.chi_d(d)?.is_empty() {
            return Ok(self.algebra.top());
        }
        let a = self.algebra;
        let x = self.find_xd(d)?;
        Ok(a.join(x, a.neg(a.power(x, d - 1))))
    }

    /// `y_d` for every divisor `d` in increasing order, computed once.
    pub fn y_values(&self) -> Result<&[Elem], WajsbergError> {
        self.y
            .get_or_init(|| {
                crate::pairs::DivisorSet::new(self.n)
                    .iter()
                    .map(|d| self.build_yd(d))
                    .collect()
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }
}
