//! The nine verification criteria at desk scale, runnable from the CLI.
//!
//! Each criterion returns a [`CriterionResult`]; nothing here panics on a
//! failed check.

use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolalg::BoolAlg;
use crate::duality::{
    all_homomorphisms, chain_product_family, check_naturality, hom_count, sample_homomorphisms,
    theorem3_check, Decomposition,
};
use crate::pairs::{build_bn, build_m, FilterMap, MonotoneTuple, TupleAlgebra};
use crate::stone::{psi, psi_inverse, space_of};
use crate::wajsberg::{Elem, NValued, WajsbergAlgebra};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Upper bound on `|A|` for the chain-product family.
    pub max_size: usize,
    /// Random triples for the three-variable identity when exhaustive
    /// checking would exceed this many triples.
    pub axiom_triples: u64,
    pub hom_limit: u64,
    pub hom_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_size: 40,
            axiom_triples: 1_000_000,
            hom_limit: 10_000,
            hom_samples: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Number of individual checks performed.
    pub checked: u64,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

/// Accumulates checks and keeps the first failure.
struct Tally {
    checked: u64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checked: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn finish(self, id: u8, title: &'static str, summary: String) -> CriterionResult {
        CriterionResult {
            id,
            title,
            passed: self.failure.is_none(),
            checked: self.checked,
            detail: self.failure.unwrap_or(summary),
        }
    }
}

fn boolean(m: u32) -> BoolAlg {
    BoolAlg::new(m).expect("small atom count")
}

/// A short identifier such as `a2n6:{0}/{0,1}/{}/{0,1}` (generators in
/// increasing divisor order).
pub fn pair_id(pair: &FilterMap) -> String {
    let gens: Vec<String> = pair
        .divisors()
        .iter()
        .map(|d| pair.generator(d).expect("own divisor").to_string())
        .collect();
    format!(
        "a{}n{}:{}",
        pair.base().atom_count(),
        pair.n(),
        gens.join("/")
    )
}

/// Every valid object with `1..=max_atoms` atoms for this `n`.
pub fn pair_family(n: u32, max_atoms: u32) -> Vec<FilterMap> {
    (1..=max_atoms)
        .flat_map(|m| FilterMap::all_valid(boolean(m), n))
        .collect()
}

/// Chain products with `d_i | n` and at most `max_size` elements, followed
/// by `M(B,h)` for every valid object with at most two atoms.
pub fn algebra_family(n: u32, max_size: usize) -> Vec<(String, WajsbergAlgebra)> {
    let mut out = chain_product_family(n, max_size);
    for pair in pair_family(n, 2) {
        if let Ok(m) = build_m(&pair) {
            out.push((format!("M({})", pair_id(&pair)), m.algebra().clone()));
        }
    }
    out
}

const AXIOM_NS: [u32; 5] = [1, 2, 3, 4, 6];
const DUALITY_NS: [u32; 4] = [2, 3, 4, 6];

pub fn criterion_axioms(cfg: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sampled = 0;
    for m in 1..=3 {
        for n in AXIOM_NS {
            let bn = build_bn(boolean(m), n);
            let a = bn.algebra();
            let s = a.size() as u64;
            let report = if s * s * s <= cfg.axiom_triples {
                a.check_axioms()
            } else {
                sampled += 1;
                a.check_axioms_sampled(cfg.axiom_triples, &mut rng)
            };
            tally.checked += report.checked;
            if let Some(v) = report.violations.first() {
                tally.check(false, || format!("B^[{n}] over {m} atoms: {v}"));
            }
        }
    }
    let summary = format!(
        "15 algebras, {sampled} sampled, {} evaluations",
        tally.checked
    );
    tally.finish(1, "axioms", summary)
}

/// `t_α(f) = |{i : α ∈ f(i)}|`, the value of `f` at atom `α` times `n`.
fn atom_values(f: &MonotoneTuple) -> Vec<u32> {
    (0..f.base().atom_count())
        .map(|a| f.entries().iter().filter(|e| e.has_atom(a)).count() as u32)
        .collect()
}

pub fn criterion_atomwise(_: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    for m in 1..=3 {
        for n in 1..=6 {
            let bn = build_bn(boolean(m), n);
            let a = bn.algebra();
            let vals: Vec<Vec<u32>> = bn.elements().iter().map(atom_values).collect();
            let distinct: HashSet<&Vec<u32>> = vals.iter().collect();
            tally.check(distinct.len() == (n as usize + 1).pow(m), || {
                format!("B^[{n}] over {m} atoms: evaluation not bijective")
            });
            for x in a.elements() {
                let neg: Vec<u32> = vals[x].iter().map(|t| n - t).collect();
                tally.check(vals[a.neg(x)] == neg, || {
                    format!("¬ at element {x} of B^[{n}], m={m}")
                });
                for y in a.elements() {
                    let imp: Vec<u32> = vals[x]
                        .iter()
                        .zip(&vals[y])
                        .map(|(s, t)| n.min(n - s + t))
                        .collect();
                    tally.check(vals[a.imp(x, y)] == imp, || {
                        format!("→ at ({x}, {y}) of B^[{n}], m={m}")
                    });
                }
            }
        }
    }
    let summary = format!("m ≤ 3, n ≤ 6, {} comparisons", tally.checked);
    tally.finish(2, "atomwise", summary)
}

/// Whether `a` and `b` are isomorphic, by searching order-preserving
/// bijections that respect `→` and `¬`.
fn isomorphic(a: &WajsbergAlgebra, b: &WajsbergAlgebra, n: u32) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let (Ok(va), Ok(vb)) = (NValued::new(a, n), NValued::new(b, n)) else {
        return false;
    };
    match all_homomorphisms(&va, &vb) {
        Ok(homs) => homs.iter().any(|h| {
            let image: HashSet<Elem> = h.map().iter().copied().collect();
            image.len() == b.size()
        }),
        Err(_) => false,
    }
}

pub fn criterion_cardinality(_: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    for m in 1..=3 {
        for n in 1..=6 {
            let expected = (n as usize + 1).pow(m);
            let bn = build_bn(boolean(m), n);
            tally.check(bn.len() == expected, || {
                format!(
                    "|B^[{n}]| = {} over {m} atoms, expected {expected}",
                    bn.len()
                )
            });
            let post = build_m(&FilterMap::post(boolean(m), n));
            let size = post.as_ref().map(TupleAlgebra::len).unwrap_or(0);
            tally.check(size == expected, || {
                format!("Post |M| = {size} over {m} atoms for n={n}, expected {expected}")
            });
        }
    }
    let b = boolean(2);
    let pair = FilterMap::new(b, 2, [(1, b.atom(0).expect("atom")), (2, b.top())]).expect("valid");
    match build_m(&pair) {
        Ok(m) => {
            tally.check(m.len() == 6, || format!("|M| = {}, expected 6", m.len()));
            let target = WajsbergAlgebra::chain_product(&[1, 2]);
            tally.check(isomorphic(m.algebra(), &target, 2), || {
                "M not isomorphic to L2×L3".into()
            });
        }
        Err(e) => tally.check(false, || format!("M(B,h) for {}: {e}", pair_id(&pair))),
    }
    let summary = format!("{} cardinalities and one isomorphism", tally.checked - 1);
    tally.finish(3, "cardinality", summary)
}

pub fn criterion_phi(cfg: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    let mut algebras = 0;
    for n in DUALITY_NS {
        for (name, a) in algebra_family(n, cfg.max_size) {
            algebras += 1;
            let result = Decomposition::new(&a, n).and_then(|d| d.verify_phi());
            tally.check(result.is_ok(), || {
                format!("{name} (n={n}): {}", result.unwrap_err())
            });
        }
    }
    tally.finish(4, "phi", format!("{algebras} algebras"))
}

pub fn criterion_object(_: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    for n in DUALITY_NS {
        for pair in pair_family(n, 2) {
            let result = theorem3_check(&pair);
            tally.check(result.is_ok(), || {
                format!("{}: {}", pair_id(&pair), result.unwrap_err())
            });
        }
    }
    let summary = format!("{} objects", tally.checked);
    tally.finish(5, "mu", summary)
}

pub fn criterion_naturality(cfg: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut exhaustive, mut sampled) = (0u64, 0u64);
    for n in DUALITY_NS {
        let family = algebra_family(n, cfg.max_size);
        let decs: Vec<(&str, Decomposition)> = family
            .iter()
            .filter_map(|(name, a)| Decomposition::new(a, n).ok().map(|d| (name.as_str(), d)))
            .collect();
        tally.check(decs.len() == family.len(), || {
            format!("n={n}: family has a non-{}-valued member", n + 1)
        });
        for (n1, d1) in &decs {
            for (n2, d2) in &decs {
                let homs = if hom_count(d1.view(), d2.view()) <= cfg.hom_limit {
                    exhaustive += 1;
                    all_homomorphisms(d1.view(), d2.view())
                } else {
                    sampled += 1;
                    sample_homomorphisms(d1.view(), d2.view(), cfg.hom_samples, &mut rng)
                };
                match homs {
                    Ok(homs) => {
                        for g in &homs {
                            let r = check_naturality(g, d1, d2);
                            tally.check(r.is_ok(), || format!("{n1} → {n2}: {}", r.unwrap_err()));
                        }
                    }
                    Err(e) => tally.check(false, || format!("{n1} → {n2}: {e}")),
                }
                if tally.failed() {
                    break;
                }
            }
        }
    }
    let summary = format!(
        "{} squares; {exhaustive} hom-sets exhaustive, {sampled} sampled",
        tally.checked
    );
    tally.finish(6, "naturality", summary)
}

/// Subsets containing `1` and closed under modus ponens.
fn filters_by_subsets(a: &WajsbergAlgebra) -> Vec<Vec<Elem>> {
    let s = a.size();
    let mut out = Vec::new();
    for mask in 0u64..(1 << s) {
        let has = |x: Elem| mask >> x & 1 == 1;
        if !has(a.top()) {
            continue;
        }
        let closed = a
            .elements()
            .all(|x| !has(x) || a.elements().all(|y| !has(a.imp(x, y)) || has(y)));
        if closed {
            out.push(a.elements().filter(|&x| has(x)).collect());
        }
    }
    out.sort();
    out
}

pub fn criterion_filters(cfg: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    let mut seen: Vec<WajsbergAlgebra> = Vec::new();
    for n in AXIOM_NS {
        for (name, a) in algebra_family(n, cfg.max_size.min(8)) {
            if a.size() > 8 || seen.contains(&a) {
                continue;
            }
            let mut ours: Vec<Vec<Elem>> = a
                .implicative_filters()
                .iter()
                .map(|f| f.members(&a))
                .collect();
            ours.sort();
            let brute = filters_by_subsets(&a);
            tally.check(ours == brute, || {
                format!("{name}: filters differ from subset enumeration")
            });
            let mut primes: Vec<Vec<Elem>> =
                a.prime_filters().iter().map(|f| f.members(&a)).collect();
            primes.sort();
            let chains: Vec<Vec<Elem>> = a
                .implicative_filters()
                .into_iter()
                .filter(|f| !f.is_improper(&a))
                .filter(|f| {
                    a.quotient(*f)
                        .map(|q| q.algebra.is_chain())
                        .unwrap_or(false)
                })
                .map(|f| f.members(&a))
                .collect::<Vec<_>>();
            let mut chains = chains;
            chains.sort();
            tally.check(primes == chains, || {
                format!("{name}: primes differ from chain quotients")
            });
            seen.push(a);
        }
    }
    tally.finish(
        7,
        "filters",
        format!("{} algebras with |A| ≤ 8", seen.len()),
    )
}

pub fn criterion_stone(_: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    let mut pairs = 0;
    for n in 1..=6 {
        for pair in pair_family(n, 3) {
            pairs += 1;
            let id = pair_id(&pair);
            let (m, space) = match (build_m(&pair), space_of(&pair)) {
                (Ok(m), Ok(s)) => (m, s),
                (Err(e), _) => {
                    tally.check(false, || format!("{id}: {e}"));
                    continue;
                }
                (_, Err(e)) => {
                    tally.check(false, || format!("{id}: {e}"));
                    continue;
                }
            };
            let images = match m
                .elements()
                .iter()
                .map(|g| psi(g, &pair))
                .collect::<Result<Vec<_>, _>>()
            {
                Ok(v) => v,
                Err(e) => {
                    tally.check(false, || format!("{id}: {e}"));
                    continue;
                }
            };
            for (g, f) in m.elements().iter().zip(&images) {
                let back = psi_inverse(f, &space);
                tally.check(back.as_ref() == Ok(g), || {
                    format!("{id}: ψ⁻¹(ψ({g})) = {back:?}")
                });
            }
            let maps = space.valued_maps();
            tally.check(maps.len() == m.len(), || {
                format!("{id}: {} valued maps but |M| = {}", maps.len(), m.len())
            });
            let image_set: HashSet<_> = images.iter().collect();
            tally.check(maps.iter().all(|f| image_set.contains(f)), || {
                format!("{id}: ψ not onto")
            });
            let a = m.algebra();
            for x in a.elements() {
                tally.check(images[a.neg(x)] == images[x].neg(), || {
                    format!("{id}: ¬ at {}", m.tuple(x))
                });
                for y in a.elements() {
                    let pointwise = images[x].imp(&images[y]);
                    tally.check(pointwise.as_ref() == Ok(&images[a.imp(x, y)]), || {
                        format!("{id}: → at ({}, {})", m.tuple(x), m.tuple(y))
                    });
                }
            }
            if tally.failed() {
                break;
            }
        }
    }
    tally.finish(8, "stone", format!("{pairs} objects, m ≤ 3, n ≤ 6"))
}

pub fn criterion_sigma(_: &SuiteConfig) -> CriterionResult {
    let mut tally = Tally::new();
    for m in 1..=2 {
        for n in 1..=6 {
            let bn = build_bn(boolean(m), n);
            let view = match NValued::new(bn.algebra(), n) {
                Ok(v) => v,
                Err(e) => {
                    tally.check(false, || format!("B^[{n}], m={m}: {e}"));
                    continue;
                }
            };
            for (x, f) in bn.elements().iter().enumerate() {
                for i in 1..=n {
                    let expected = MonotoneTuple::constant(f.get(i), n);
                    let got = view.sigma(i, x).map(|s| bn.tuple(s).clone());
                    tally.check(got.as_ref() == Ok(&expected), || {
                        format!("σ_{i}({f}) = {got:?}, m={m}")
                    });
                }
            }
        }
    }
    let summary = format!("{} evaluations", tally.checked);
    tally.finish(9, "sigma", summary)
}

pub type Criterion = fn(&SuiteConfig) -> CriterionResult;

pub const CRITERIA: [Criterion; 9] = [
    criterion_axioms,
    criterion_atomwise,
    criterion_cardinality,
    criterion_phi,
    criterion_object,
    criterion_naturality,
    criterion_filters,
    criterion_stone,
    criterion_sigma,
];

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| c(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_ids() {
        let b = boolean(2);
        assert_eq!(pair_id(&FilterMap::post(b, 2)), "a2n2:{}/{0,1}");
    }

    #[test]
    fn atom_values_of_constants() {
        let b = boolean(2);
        for k in 0..=4 {
            assert_eq!(
                atom_values(&MonotoneTuple::post_constant(b, 4, k)),
                vec![k, k]
            );
        }
    }

    #[test]
    fn subset_filters_of_l3() {
        let a = WajsbergAlgebra::chain(2);
        assert_eq!(filters_by_subsets(&a), vec![vec![0, 1, 2], vec![2]]);
    }

    #[test]
    fn cheap_criteria_pass() {
        let cfg = SuiteConfig::default();
        for c in [criterion_cardinality, criterion_object, criterion_sigma] {
            let r = c(&cfg);
            assert!(r.passed, "{r}");
        }
    }
}
