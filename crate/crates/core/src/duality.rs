//! The two functors between `(n+1)`-valued Wajsberg algebras and objects
//! `⟨B, h⟩`, the isomorphism `φ: A → M(B(A), h_A)` with its explicit inverse,
//! the object isomorphism `μ: B → B(M(B,h))`, and naturality checks.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::boolalg::{BoolElem, BoolError};
use crate::pairs::{build_m, q_index, FilterMap, MonotoneTuple, PairError, TupleAlgebra};
use crate::wajsberg::{Elem, NValued, WajsbergAlgebra, WajsbergError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error(transparent)]
    Wajsberg(#[from] WajsbergError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Bool(#[from] BoolError),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("filter condition h1({d}) ⊆ θ⁻¹(h2({d})) fails")]
    FilterCondition { d: u32 },
    #[error("φ is not an isomorphism: {0}")]
    Phi(String),
    #[error("object isomorphism check failed: {0}")]
    Theorem3(String),
}

/// A map between finite Wajsberg algebras preserving `→`, `¬` and `1`.
#[derive(Debug, Clone)]
pub struct WMorphism<'a> {
    source: &'a WajsbergAlgebra,
    target: &'a WajsbergAlgebra,
    map: Vec<Elem>,
}

impl<'a> WMorphism<'a> {
    pub fn new(
        source: &'a WajsbergAlgebra,
        target: &'a WajsbergAlgebra,
        map: Vec<Elem>,
    ) -> Result<Self, DualityError> {
        if map.len() != source.size() {
            return Err(DualityError::NotHomomorphism(format!(
                "map has {} entries for {} elements",
                map.len(),
                source.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.size()) {
            return Err(DualityError::NotHomomorphism(format!(
                "image {bad} out of range"
            )));
        }
        if map[source.top()] != target.top() {
            return Err(DualityError::NotHomomorphism("top not preserved".into()));
        }
        for x in source.elements() {
            if map[source.neg(x)] != target.neg(map[x]) {
                return Err(DualityError::NotHomomorphism(format!(
                    "¬ not preserved at {x}"
                )));
            }
            for y in source.elements() {
                if map[source.imp(x, y)] != target.imp(map[x], map[y]) {
                    return Err(DualityError::NotHomomorphism(format!(
                        "→ not preserved at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(Self {
            source,
            target,
            map,
        })
    }

    pub fn identity(a: &'a WajsbergAlgebra) -> Self {
        Self {
            source: a,
            target: a,
            map: a.elements().collect(),
        }
    }

    pub fn source(&self) -> &'a WajsbergAlgebra {
        self.source
    }

    pub fn target(&self) -> &'a WajsbergAlgebra {
        self.target
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &WMorphism<'a>) -> WMorphism<'a> {
        assert!(std::ptr::eq(self.target, next.source) || self.target == next.source);
        WMorphism {
            source: self.source,
            target: next.target,
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        }
    }
}

/// A Boolean homomorphism `θ: B1 → B2` with `h1(d) ⊆ θ⁻¹(h2(d))` for all `d`.
#[derive(Debug, Clone)]
pub struct PairMorphism<'a> {
    source: &'a FilterMap,
    target: &'a FilterMap,
    /// Image of each element of `B1`, indexed by bitmask.
    table: Vec<BoolElem>,
}

impl<'a> PairMorphism<'a> {
    pub fn new(
        source: &'a FilterMap,
        target: &'a FilterMap,
        table: Vec<BoolElem>,
    ) -> Result<Self, DualityError> {
        let (b1, b2) = (source.base(), target.base());
        if source.n() != target.n() {
            return Err(DualityError::NotHomomorphism(format!(
                "objects for n = {} and n = {}",
                source.n(),
                target.n()
            )));
        }
        if table.len() as u64 != b1.size() {
            return Err(DualityError::NotHomomorphism("table size".into()));
        }
        if let Some(bad) = table.iter().find(|e| !b2.contains(**e)) {
            return Err(BoolError::Mismatch(b2.atom_count(), bad.algebra().atom_count()).into());
        }
        let at = |x: BoolElem| table[x.bits() as usize];
        if at(b1.top()) != b2.top() {
            return Err(DualityError::NotHomomorphism("top not preserved".into()));
        }
        for x in b1.elements() {
            if at(!x) != !at(x) {
                return Err(DualityError::NotHomomorphism(format!("complement at {x}")));
            }
            for y in b1.elements() {
                if at(x & y) != at(x) & at(y) {
                    return Err(DualityError::NotHomomorphism(format!("meet at ({x}, {y})")));
                }
            }
        }
        for d in source.divisors().iter() {
            if !target.generator(d)?.leq(at(source.generator(d)?))? {
                return Err(DualityError::FilterCondition { d });
            }
        }
        Ok(Self {
            source,
            target,
            table,
        })
    }

    /// The homomorphism sending atom `α` of `B1` to `images[α]`.
    pub fn from_atom_images(
        source: &'a FilterMap,
        target: &'a FilterMap,
        images: &[BoolElem],
    ) -> Result<Self, DualityError> {
        let b1 = source.base();
        if images.len() != b1.atom_count() as usize {
            return Err(DualityError::NotHomomorphism(
                "one image per atom required".into(),
            ));
        }
        let bottom = target.base().bottom();
        let mut table = Vec::with_capacity(b1.size() as usize);
        for x in b1.elements() {
            let mut img = bottom;
            for a in x.atom_indices() {
                img = img.join(images[a as usize])?;
            }
            table.push(img);
        }
        Self::new(source, target, table)
    }

    pub fn identity(p: &'a FilterMap) -> Self {
        Self {
            source: p,
            target: p,
            table: p.base().elements().collect(),
        }
    }

    pub fn source(&self) -> &'a FilterMap {
        self.source
    }

    pub fn target(&self) -> &'a FilterMap {
        self.target
    }

    pub fn apply(&self, x: BoolElem) -> BoolElem {
        self.table[x.bits() as usize]
    }

    pub fn table(&self) -> &[BoolElem] {
        &self.table
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PairMorphism<'a>) -> PairMorphism<'a> {
        PairMorphism {
            source: self.source,
            target: next.target,
            table: self.table.iter().map(|&y| next.apply(y)).collect(),
        }
    }
}

/// An `(n+1)`-valued algebra together with its image `⟨B(A), h_A⟩` under the
/// functor **B** and the isomorphism `φ`.
#[derive(Debug)]
pub struct Decomposition<'a> {
    view: NValued<'a>,
    pair: FilterMap,
    a_coeffs: OnceLock<Result<Vec<Elem>, DualityError>>,
    reconstruction: OnceLock<Result<TupleAlgebra, DualityError>>,
}

impl<'a> Decomposition<'a> {
    /// Computes `h_A(d) = P_d ∩ B(A)` with `P_d` the intersection of the
    /// primes whose quotient embeds in `L_{d+1}`.
    pub fn new(algebra: &'a WajsbergAlgebra, n: u32) -> Result<Self, DualityError> {
        let view = NValued::new(algebra, n)?;
        let pair = functor_b_obj(&view)?;
        Ok(Self {
            view,
            pair,
            a_coeffs: OnceLock::new(),
            reconstruction: OnceLock::new(),
        })
    }

    pub fn view(&self) -> &NValued<'a> {
        &self.view
    }

    pub fn algebra(&self) -> &'a WajsbergAlgebra {
        self.view.algebra()
    }

    pub fn n(&self) -> u32 {
        self.view.n()
    }

    /// `⟨B(A), h_A⟩`.
    pub fn pair(&self) -> &FilterMap {
        &self.pair
    }

    /// `φ(x)(i) = σ_i(x)`, read in the skeleton's powerset algebra.
    pub fn phi(&self, x: Elem) -> Result<MonotoneTuple, DualityError> {
        let skeleton = self.view.skeleton();
        let entries = (1..=self.n())
            .map(|i| {
                let s = self.view.sigma(i, x)?;
                skeleton
                    .to_bool(s)
                    .ok_or_else(|| DualityError::Phi(format!("σ_{i}({x}) = {s} is not idempotent")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        MonotoneTuple::new(entries)
            .map_err(|e| DualityError::Phi(format!("φ({x}) is not monotone: {e}")))
    }

    /// `a_i = ⋀_{d ∈ Div(n)} y_d^{(q_{d,i} − 1)}` for `i = 1..=n`.
    pub fn a_coefficients(&self) -> Result<&[Elem], DualityError> {
        self.a_coeffs
            .get_or_init(|| {
                let a = self.algebra();
                let n = self.n();
                let divisors = self.pair.divisors();
                let ys = self.view.y_values()?;
                Ok((1..=n)
                    .map(|i| {
                        a.meet_all(
                            divisors
                                .iter()
                                .zip(ys)
                                .map(|(d, &y)| a.power(y, q_index(d, i, n) - 1)),
                        )
                    })
                    .collect())
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// The element `z = ⋁_i (f(i) ∧ a_i)` with `φ(z) = f`.
    pub fn phi_inverse(&self, f: &MonotoneTuple) -> Result<Elem, DualityError> {
        self.pair.admits(f)?;
        let a = self.algebra();
        let skeleton = self.view.skeleton();
        let coeffs = self.a_coefficients()?;
        let mut z = a.bottom();
        for (i, &coef) in (1..=self.n()).zip(coeffs) {
            let fi = skeleton
                .to_elem(f.get(i))
                .ok_or_else(|| DualityError::Phi(format!("entry {i} of {f} outside B(A)")))?;
            z = a.join(z, a.meet(fi, coef));
        }
        Ok(z)
    }

    /// `M(B(A), h_A)`, built once.
    pub fn reconstruction(&self) -> Result<&TupleAlgebra, DualityError> {
        self.reconstruction
            .get_or_init(|| build_m(&self.pair).map_err(DualityError::from))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `φ` as a map of element indices `A → M(B(A), h_A)`.
    pub fn phi_indices(&self) -> Result<Vec<Elem>, DualityError> {
        let m = self.reconstruction()?;
        self.algebra()
            .elements()
            .map(|x| {
                let t = self.phi(x)?;
                m.index_of(&t)
                    .ok_or_else(|| DualityError::Phi(format!("φ({x}) = {t} not in M(B(A), h_A)")))
            })
            .collect()
    }

    /// Verifies that `φ` is a bijective homomorphism onto `M(B(A), h_A)` and
    /// that `phi_inverse` inverts it on both sides.
    pub fn verify_phi(&self) -> Result<(), DualityError> {
        let a = self.algebra();
        let m = self.reconstruction()?;
        let map = self.phi_indices()?;
        let phi = WMorphism::new(a, m.algebra(), map.clone())
            .map_err(|e| DualityError::Phi(e.to_string()))?;
        let distinct: HashSet<Elem> = map.iter().copied().collect();
        if distinct.len() != a.size() {
            return Err(DualityError::Phi("not injective".into()));
        }
        if a.size() != m.len() {
            return Err(DualityError::Phi(format!(
                "|A| = {} but |M| = {}",
                a.size(),
                m.len()
            )));
        }
        for x in a.elements() {
            let z = self.phi_inverse(m.tuple(phi.apply(x)))?;
            if z != x {
                return Err(DualityError::Phi(format!("φ⁻¹(φ({x})) = {z}")));
            }
        }
        for (k, f) in m.elements().iter().enumerate() {
            let z = self.phi_inverse(f)?;
            if phi.apply(z) != k {
                return Err(DualityError::Phi(format!("φ(φ⁻¹({f})) ≠ {f}")));
            }
        }
        Ok(())
    }
}

/// The functor **B** on objects: `⟨B(A), h_A⟩`.
pub fn functor_b_obj(view: &NValued<'_>) -> Result<FilterMap, DualityError> {
    let a = view.algebra();
    let skeleton = view.skeleton();
    let n = view.n();
    let mut entries = Vec::new();
    for d in crate::pairs::DivisorSet::new(n).iter() {
        // ⋂ of up-sets of idempotents is the up-set of their join; the empty
        // intersection is the improper filter.
        let primes = view.embeddable_in(d)?;
        let generator = if primes.is_empty() {
            a.bottom()
        } else {
            a.join_all(
                primes
                    .iter()
                    .map(|&p| view.primes()[p].filter().generator()),
            )
        };
        let g = skeleton.to_bool(generator).ok_or_else(|| {
            DualityError::Wajsberg(WajsbergError::NotBoolean(format!(
                "P_{d} generator {generator}"
            )))
        })?;
        entries.push((d, g));
    }
    let pair = FilterMap::new(skeleton.alg(), n, entries)?;
    pair.validate()?;
    Ok(pair)
}

/// The functor **B** on morphisms: restriction to Boolean skeletons.
pub fn functor_b_mor<'p>(
    g: &WMorphism<'_>,
    source: &'p Decomposition<'_>,
    target: &'p Decomposition<'_>,
) -> Result<PairMorphism<'p>, DualityError> {
    let s1 = source.view().skeleton();
    let s2 = target.view().skeleton();
    let table = source
        .pair()
        .base()
        .elements()
        .map(|b| {
            let e = s1.to_elem(b).expect("skeleton covers its algebra");
            let img = g.apply(e);
            s2.to_bool(img).ok_or_else(|| {
                DualityError::NotHomomorphism(format!(
                    "image {img} of idempotent {e} is not idempotent"
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    PairMorphism::new(source.pair(), target.pair(), table)
}

/// The functor **M** on objects.
pub fn functor_m_obj(pair: &FilterMap) -> Result<TupleAlgebra, DualityError> {
    Ok(build_m(pair)?)
}

/// The functor **M** on morphisms: `f ↦ θ ∘ f`, with the target block
/// conditions re-checked on every image.
pub fn functor_m_mor<'a>(
    theta: &PairMorphism<'_>,
    source: &'a TupleAlgebra,
    target: &'a TupleAlgebra,
) -> Result<WMorphism<'a>, DualityError> {
    let map = source
        .elements()
        .iter()
        .map(|f| {
            let image = f.map(|b| theta.apply(b))?;
            theta.target().admits(&image)?;
            target.index_of(&image).ok_or_else(|| {
                DualityError::NotHomomorphism(format!("{image} missing from target"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    WMorphism::new(source.algebra(), target.algebra(), map)
}

/// Witness that `⟨B, h⟩ ≅ ⟨B(M(B,h)), h_{M(B,h)}⟩`.
#[derive(Debug, Clone)]
pub struct Theorem3Witness {
    pub algebra: TupleAlgebra,
    /// `μ(a)` (the constant tuple `a`) as an element of `M(B,h)`, indexed by
    /// the bitmask of `a`.
    pub mu: Vec<Elem>,
    /// Ultrafilter at atom `i` of `B` ↦ ultrafilter index of `B(M(B,h))`.
    pub psi1: Vec<u32>,
    /// Ultrafilter index of `B(M(B,h))` ↦ index of the prime `{x : x^n ∈ Q}`.
    pub psi2: Vec<usize>,
}

/// Builds `M(B,h)` and checks that the constant-tuple map `μ` is an
/// isomorphism of objects, together with the prime correspondences
/// `ψ1: χ(B) → χ(B(A))` and `ψ2: χ(B(A)) → χ(A)`.
pub fn theorem3_check(pair: &FilterMap) -> Result<Theorem3Witness, DualityError> {
    let fail = |msg: String| DualityError::Theorem3(msg);
    let algebra = build_m(pair)?;
    let n = pair.n();
    let base = pair.base();
    let a = algebra.algebra();
    let dec = Decomposition::new(a, n)?;
    let skeleton = dec.view().skeleton();
    let sk_alg = skeleton.alg();

    let mut mu = Vec::with_capacity(base.size() as usize);
    let mut mu_bool = Vec::with_capacity(base.size() as usize);
    for b in base.elements() {
        let x = algebra
            .index_of(&MonotoneTuple::constant(b, n))
            .ok_or_else(|| fail(format!("constant {b} missing from M(B,h)")))?;
        let sb = skeleton
            .to_bool(x)
            .ok_or_else(|| fail(format!("μ({b}) is not idempotent")))?;
        mu.push(x);
        mu_bool.push(sb);
    }
    if skeleton.elements().len() != mu.len() {
        return Err(fail(format!(
            "B(M) has {} elements, B has {}",
            skeleton.elements().len(),
            mu.len()
        )));
    }
    let distinct: HashSet<Elem> = mu.iter().copied().collect();
    if distinct.len() != mu.len() {
        return Err(fail("μ not injective".into()));
    }
    let mu_of = |b: BoolElem| mu_bool[b.bits() as usize];
    for x in base.elements() {
        if mu_of(!x) != !mu_of(x) {
            return Err(fail(format!("μ does not preserve complement at {x}")));
        }
        for y in base.elements() {
            if mu_of(x & y) != mu_of(x) & mu_of(y) || mu_of(x | y) != mu_of(x) | mu_of(y) {
                return Err(fail(format!("μ not a lattice map at ({x}, {y})")));
            }
        }
    }
    for d in pair.divisors().iter() {
        let h = pair.h(d)?;
        let hm = dec.pair().h(d)?;
        for b in base.elements() {
            if h.contains(b)? != hm.contains(mu_of(b))? {
                return Err(fail(format!(
                    "μ⁻¹(h_M({d})) ≠ h({d}) at {b}: h({d}) = ↑{}, h_M({d}) = ↑{}",
                    h.generator(),
                    hm.generator()
                )));
            }
        }
    }

    let psi1 = (0..base.atom_count())
        .map(|i| {
            let img = mu_of(base.atom(i).expect("atom in range"));
            let mut atoms = img.atom_indices();
            match (atoms.next(), atoms.next()) {
                (Some(j), None) => Ok(j),
                _ => Err(fail(format!("μ(atom {i}) = {img} is not an atom"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let primes = dec.view().primes();
    let prime_sets: Vec<Vec<Elem>> = primes.iter().map(|p| p.filter().members(a)).collect();
    let mut psi2 = Vec::with_capacity(sk_alg.atom_count() as usize);
    for (j, &atom) in skeleton.atoms().iter().enumerate() {
        let members: Vec<Elem> = a
            .elements()
            .filter(|&x| a.leq(atom, a.power(x, n)))
            .collect();
        let p = prime_sets
            .iter()
            .position(|s| *s == members)
            .ok_or_else(|| fail(format!("{{x : x^n ∈ Q_{j}}} is not a prime filter")))?;
        let back: Vec<Elem> = skeleton
            .elements()
            .iter()
            .copied()
            .filter(|&e| primes[p].filter().contains(a, e))
            .collect();
        let ultra: Vec<Elem> = skeleton
            .elements()
            .iter()
            .copied()
            .filter(|&e| a.leq(atom, e))
            .collect();
        if back != ultra {
            return Err(fail(format!("P ∩ B(A) ≠ Q_{j} for prime {p}")));
        }
        psi2.push(p);
    }
    let distinct: HashSet<usize> = psi2.iter().copied().collect();
    if distinct.len() != primes.len() || psi2.len() != primes.len() {
        return Err(fail("ψ2 is not a bijection onto χ(A)".into()));
    }
    Ok(Theorem3Witness {
        algebra,
        mu,
        psi1,
        psi2,
    })
}

/// For each prime of the target, the primes of the source whose quotient
/// embeds in it. A homomorphism `A1 → A2` picks one entry per list.
pub fn hom_choices(source: &NValued<'_>, target: &NValued<'_>) -> Vec<Vec<usize>> {
    target
        .primes()
        .iter()
        .map(|p| {
            (0..source.primes().len())
                .filter(|&q| p.height() % source.primes()[q].height() == 0)
                .collect()
        })
        .collect()
}

/// Number of homomorphisms between the two algebras, saturating.
pub fn hom_count(source: &NValued<'_>, target: &NValued<'_>) -> u64 {
    hom_choices(source, target)
        .iter()
        .fold(1u64, |acc, c| acc.saturating_mul(c.len() as u64))
}

/// The homomorphism that sends `x` to the element whose class in the `k`-th
/// prime of the target is the class of `x` in the chosen source prime.
pub fn hom_from_choice<'a>(
    source: &NValued<'a>,
    target: &NValued<'a>,
    choice: &[usize],
) -> Result<WMorphism<'a>, DualityError> {
    if source.n() != target.n() {
        return Err(DualityError::NotHomomorphism("different n".into()));
    }
    let map = source
        .algebra()
        .elements()
        .map(|x| {
            let profile: Vec<u32> = choice.iter().map(|&q| source.value(q, x).num()).collect();
            target
                .from_profile(&profile)
                .ok_or_else(|| DualityError::NotHomomorphism(format!("no image for {x}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    WMorphism::new(source.algebra(), target.algebra(), map)
}

/// Every homomorphism `source → target`.
pub fn all_homomorphisms<'a>(
    source: &NValued<'a>,
    target: &NValued<'a>,
) -> Result<Vec<WMorphism<'a>>, DualityError> {
    let choices = hom_choices(source, target);
    let mut out = Vec::new();
    if choices.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut pos = vec![0usize; choices.len()];
    loop {
        let choice: Vec<usize> = pos.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        out.push(hom_from_choice(source, target, &choice)?);
        let mut k = choices.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < choices[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

/// `count` homomorphisms drawn uniformly (with replacement) from the hom-set.
pub fn sample_homomorphisms<'a, R: Rng>(
    source: &NValued<'a>,
    target: &NValued<'a>,
    count: usize,
    rng: &mut R,
) -> Result<Vec<WMorphism<'a>>, DualityError> {
    let choices = hom_choices(source, target);
    if choices.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    (0..count)
        .map(|_| {
            let choice: Vec<usize> = choices
                .iter()
                .map(|c| *c.choose(rng).expect("nonempty"))
                .collect();
            hom_from_choice(source, target, &choice)
        })
        .collect()
}

/// Checks `φ_{A2} ∘ g = M(B(g)) ∘ φ_{A1}` elementwise.
pub fn check_naturality(
    g: &WMorphism<'_>,
    source: &Decomposition<'_>,
    target: &Decomposition<'_>,
) -> Result<(), DualityError> {
    let theta = functor_b_mor(g, source, target)?;
    let m1 = source.reconstruction()?;
    let m2 = target.reconstruction()?;
    let mg = functor_m_mor(&theta, m1, m2)?;
    for x in source.algebra().elements() {
        let left = target.phi(g.apply(x))?;
        let phi_x = source.phi(x)?;
        let k = m1
            .index_of(&phi_x)
            .ok_or_else(|| DualityError::Phi(format!("φ({x}) not in M")))?;
        let right = m2.tuple(mg.apply(k));
        if &left != right {
            return Err(DualityError::NotHomomorphism(format!(
                "square fails at {x}: φ(g(x)) = {left}, M(B(g))(φ(x)) = {right}"
            )));
        }
    }
    Ok(())
}

/// One verified law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportLine {
    pub ok: bool,
    pub law: String,
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            if self.ok { "OK" } else { "FAIL" },
            self.law,
            self.id
        )?;
        if let Some(d) = &self.detail {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub lines: Vec<ReportLine>,
}

impl Report {
    pub fn push<E: fmt::Display>(&mut self, law: &str, id: &str, result: Result<(), E>) {
        self.lines.push(ReportLine {
            ok: result.is_ok(),
            law: law.to_string(),
            id: id.to_string(),
            detail: result.err().map(|e| e.to_string()),
        });
    }

    pub fn all_ok(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportLine> {
        self.lines.iter().filter(|l| !l.ok)
    }

    pub fn count(&self, law: &str) -> usize {
        self.lines.iter().filter(|l| l.law == law).count()
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Named algebras and objects for one `n`.
#[derive(Debug, Clone)]
pub struct Samples {
    pub n: u32,
    pub algebras: Vec<(String, WajsbergAlgebra)>,
    pub pairs: Vec<(String, FilterMap)>,
    /// Hom-sets up to this size are checked exhaustively.
    pub hom_limit: u64,
    /// Number of seeded samples drawn from larger hom-sets.
    pub hom_samples: usize,
    pub seed: u64,
}

impl Samples {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            algebras: Vec::new(),
            pairs: Vec::new(),
            hom_limit: 10_000,
            hom_samples: 100,
            seed: 0,
        }
    }
}

/// All products `L_{d1+1} × ... × L_{dk+1}` with `d_i | n`, `d1 ≤ ... ≤ dk`,
/// `k ≥ 1` and at most `max_size` elements.
pub fn chain_product_family(n: u32, max_size: usize) -> Vec<(String, WajsbergAlgebra)> {
    fn go(
        divs: &[u32],
        start: usize,
        size: usize,
        max: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        for i in start..divs.len() {
            let next = size * (divs[i] as usize + 1);
            if next > max {
                continue;
            }
            cur.push(divs[i]);
            out.push(cur.clone());
            go(divs, i, next, max, cur, out);
            cur.pop();
        }
    }
    let divs = crate::pairs::DivisorSet::new(n);
    let mut shapes = Vec::new();
    go(
        divs.as_slice(),
        0,
        1,
        max_size,
        &mut Vec::new(),
        &mut shapes,
    );
    shapes
        .into_iter()
        .map(|hs| {
            let name = hs
                .iter()
                .map(|h| format!("L{}", h + 1))
                .collect::<Vec<_>>()
                .join("x");
            (name, WajsbergAlgebra::chain_product(&hs))
        })
        .collect()
}

/// Runs (i) `φ: A ≅ M(B(A), h_A)` for every algebra, (ii) the object
/// isomorphism for every pair, and (iii) naturality squares for every
/// sampled homomorphism between the algebras.
pub fn equivalence_suite(samples: &Samples) -> Report {
    let mut report = Report::default();
    let n = samples.n;
    let mut decs = Vec::new();
    for (name, a) in &samples.algebras {
        match Decomposition::new(a, n) {
            Ok(dec) => {
                report.push::<DualityError>("object", name, Ok(()));
                report.push("phi-iso", name, dec.verify_phi());
                decs.push((name.as_str(), Some(dec)));
            }
            Err(e) => {
                report.push("object", name, Err(e));
                decs.push((name.as_str(), None));
            }
        }
    }
    for (name, p) in &samples.pairs {
        report.push("theorem3", name, theorem3_check(p).map(|_| ()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(samples.seed);
    for (n1, d1) in &decs {
        let Some(d1) = d1 else { continue };
        for (n2, d2) in &decs {
            let Some(d2) = d2 else { continue };
            let id = format!("{n1}->{n2}");
            let count = hom_count(d1.view(), d2.view());
            let homs = if count <= samples.hom_limit {
                all_homomorphisms(d1.view(), d2.view())
            } else {
                sample_homomorphisms(d1.view(), d2.view(), samples.hom_samples, &mut rng)
            };
            let result = homs.and_then(|homs| {
                homs.iter().enumerate().try_for_each(|(k, g)| {
                    check_naturality(g, d1, d2)
                        .map_err(|e| DualityError::NotHomomorphism(format!("morphism #{k}: {e}")))
                })
            });
            report.push("naturality", &id, result);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::BoolAlg;

    fn chain(n: u32) -> WajsbergAlgebra {
        WajsbergAlgebra::chain(n)
    }

    #[test]
    fn b_obj_on_l3() {
        let a = chain(2);
        let dec = Decomposition::new(&a, 2).unwrap();
        let p = dec.pair();
        assert!(p.h(2).unwrap().is_trivial());
        assert!(p.h(1).unwrap().is_improper());
        for n in 1..=6 {
            let a = chain(n);
            let dec = Decomposition::new(&a, n).unwrap();
            assert!(dec.pair().h(n).unwrap().is_trivial());
        }
    }

    #[test]
    fn b_obj_on_l2_times_l3() {
        let a = WajsbergAlgebra::chain_product(&[1, 2]);
        let dec = Decomposition::new(&a, 6).unwrap();
        let p = dec.pair();
        let view = dec.view();
        let small = view.primes().iter().position(|q| q.height() == 1).unwrap();
        let small_gen = view
            .skeleton()
            .to_bool(view.primes()[small].filter().generator())
            .unwrap();
        assert!(p.h(6).unwrap().is_trivial());
        assert!(p.h(2).unwrap().is_trivial());
        assert_eq!(p.h(3).unwrap().generator(), small_gen);
        assert_eq!(
            p.h(1).unwrap(),
            p.h(2).unwrap().join(p.h(3).unwrap()).unwrap()
        );
    }

    #[test]
    fn p_d_is_set_intersection() {
        for (_, a) in chain_product_family(6, 40) {
            let view = NValued::new(&a, 6).unwrap();
            let pair = functor_b_obj(&view).unwrap();
            for d in [1, 2, 3, 6] {
                let members: Vec<Elem> = a
                    .elements()
                    .filter(|&x| {
                        view.embeddable_in(d)
                            .unwrap()
                            .iter()
                            .all(|&p| view.primes()[p].filter().contains(&a, x))
                    })
                    .collect();
                let ours: Vec<Elem> = view
                    .skeleton()
                    .elements()
                    .iter()
                    .copied()
                    .filter(|&e| {
                        pair.h(d)
                            .unwrap()
                            .contains(view.skeleton().to_bool(e).unwrap())
                            .unwrap()
                    })
                    .collect();
                let expected: Vec<Elem> = members
                    .into_iter()
                    .filter(|&x| a.is_idempotent(x))
                    .collect();
                assert_eq!(ours, expected);
            }
        }
    }

    #[test]
    fn remark_four_monotonicity() {
        for (_, a) in chain_product_family(12, 30) {
            let dec = Decomposition::new(&a, 12).unwrap();
            let p = dec.pair();
            for t in p.divisors().iter() {
                for r in p.divisors().iter().filter(|r| r % t == 0) {
                    // More primes embed in the larger chain: P_r ⊆ P_t.
                    assert!(p.h(r).unwrap().is_subset_of(p.h(t).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn phi_on_l3() {
        let a = chain(2);
        let dec = Decomposition::new(&a, 2).unwrap();
        let b = dec.pair().base();
        assert_eq!(
            dec.phi(1).unwrap(),
            MonotoneTuple::new(vec![b.bottom(), b.top()]).unwrap()
        );
        assert_eq!(dec.phi(2).unwrap(), MonotoneTuple::constant(b.top(), 2));
        assert_eq!(dec.phi(0).unwrap(), MonotoneTuple::constant(b.bottom(), 2));
        let f = MonotoneTuple::new(vec![b.bottom(), b.top()]).unwrap();
        assert_eq!(dec.phi_inverse(&f).unwrap(), 1);
        assert_eq!(dec.a_coefficients().unwrap(), &[2, 1]);
        dec.verify_phi().unwrap();
    }

    #[test]
    fn phi_inverse_rejects_outside_m() {
        let a = WajsbergAlgebra::chain_product(&[1, 2]);
        let dec = Decomposition::new(&a, 2).unwrap();
        let b = dec.pair().base();
        // The atom lying under the L2 factor cannot take a middle value.
        let g = dec.pair().h(1).unwrap().generator();
        assert!(!g.is_bottom());
        let f = MonotoneTuple::new(vec![b.bottom(), g]).unwrap();
        assert_eq!(
            dec.phi_inverse(&f),
            Err(DualityError::Pair(PairError::BlockCondition { d: 1, q: 1 }))
        );
    }

    #[test]
    fn phi_fixes_idempotents() {
        let a = WajsbergAlgebra::chain_product(&[2, 3, 6]);
        let dec = Decomposition::new(&a, 6).unwrap();
        for &e in dec.view().skeleton().elements() {
            let b = dec.view().skeleton().to_bool(e).unwrap();
            let f = MonotoneTuple::constant(b, 6);
            assert_eq!(dec.phi(e).unwrap(), f);
            assert_eq!(dec.phi_inverse(&f).unwrap(), e);
        }
    }

    #[test]
    fn phi_with_larger_n() {
        // L3 is 3-valued, hence (n+1)-valued for every even n.
        let a = chain(2);
        for n in [2, 4, 6] {
            let dec = Decomposition::new(&a, n).unwrap();
            dec.verify_phi().unwrap();
        }
        assert!(Decomposition::new(&a, 3).is_err());
    }

    #[test]
    fn b_mor_examples() {
        let l2 = chain(1);
        let l3 = chain(2);
        let d2 = Decomposition::new(&l2, 2).unwrap();
        let d3 = Decomposition::new(&l3, 2).unwrap();
        let g = WMorphism::new(&l2, &l3, vec![0, 2]).unwrap();
        let theta = functor_b_mor(&g, &d2, &d3).unwrap();
        let b = d2.pair().base();
        for x in b.elements() {
            assert_eq!(theta.apply(x).bits(), x.bits());
        }
        let id = WMorphism::identity(&l3);
        let theta = functor_b_mor(&id, &d3, &d3).unwrap();
        assert_eq!(theta.table(), PairMorphism::identity(d3.pair()).table());

        let p = WajsbergAlgebra::chain_product(&[1, 2]);
        let dp = Decomposition::new(&p, 2).unwrap();
        let proj = WMorphism::new(&p, &l3, p.elements().map(|x| x % 3).collect()).unwrap();
        let theta = functor_b_mor(&proj, &dp, &d3).unwrap();
        assert_eq!(theta.apply(dp.pair().base().top()), d3.pair().base().top());
    }

    #[test]
    fn m_mor_examples() {
        let b = BoolAlg::new(2).unwrap();
        let two = BoolAlg::new(1).unwrap();
        let source = FilterMap::new(b, 3, [(1, b.atom(0).unwrap()), (3, b.top())]).unwrap();
        let target = FilterMap::post(two, 3);
        // θ(x) = [atom 0 ∈ x].
        let theta =
            PairMorphism::from_atom_images(&source, &target, &[two.top(), two.bottom()]).unwrap();
        let m1 = functor_m_obj(&source).unwrap();
        let m2 = functor_m_obj(&target).unwrap();
        let mg = functor_m_mor(&theta, &m1, &m2).unwrap();
        assert_eq!(m2.algebra(), &chain(3));
        assert!(mg.map().iter().all(|&y| y < 4));

        let id = PairMorphism::identity(&source);
        let mid = functor_m_mor(&id, &m1, &m1).unwrap();
        assert_eq!(mid.map(), WMorphism::identity(m1.algebra()).map());

        // θ' must respect h: sending atom 0 to bottom violates h(1).
        let strict = FilterMap::new(two, 3, [(1, two.top()), (3, two.top())]).unwrap();
        let bad = PairMorphism::from_atom_images(&source, &strict, &[two.bottom(), two.top()]);
        assert_eq!(bad.unwrap_err(), DualityError::FilterCondition { d: 1 });
    }

    #[test]
    fn m_functoriality() {
        let b = BoolAlg::new(2).unwrap();
        let two = BoolAlg::new(1).unwrap();
        let p1 = FilterMap::post(b, 2);
        let p2 = FilterMap::post(b, 2);
        let p3 = FilterMap::post(two, 2);
        let swap =
            PairMorphism::from_atom_images(&p1, &p2, &[b.atom(1).unwrap(), b.atom(0).unwrap()])
                .unwrap();
        let collapse =
            PairMorphism::from_atom_images(&p2, &p3, &[two.top(), two.bottom()]).unwrap();
        let (m1, m2, m3) = (
            build_m(&p1).unwrap(),
            build_m(&p2).unwrap(),
            build_m(&p3).unwrap(),
        );
        let composed = functor_m_mor(&swap.then(&collapse), &m1, &m3).unwrap();
        let stepwise = functor_m_mor(&swap, &m1, &m2)
            .unwrap()
            .then(&functor_m_mor(&collapse, &m2, &m3).unwrap());
        assert_eq!(composed.map(), stepwise.map());
    }

    #[test]
    fn theorem3_examples() {
        let two = BoolAlg::new(1).unwrap();
        for n in [1, 2, 3, 6] {
            for p in FilterMap::all_valid(two, n) {
                let w = theorem3_check(&p).unwrap();
                assert_eq!(w.mu.len(), 2);
            }
        }
        let b = BoolAlg::new(2).unwrap();
        let p = FilterMap::new(b, 2, [(1, b.atom(0).unwrap()), (2, b.top())]).unwrap();
        let w = theorem3_check(&p).unwrap();
        assert_eq!(w.algebra.len(), 6);
        assert_eq!(w.psi2.len(), 2);
    }

    #[test]
    fn homomorphism_counts() {
        let l2 = chain(1);
        let l3 = chain(2);
        let l4 = chain(3);
        let v = |a| NValued::new(a, 6).unwrap();
        assert_eq!(all_homomorphisms(&v(&l2), &v(&l3)).unwrap().len(), 1);
        assert_eq!(all_homomorphisms(&v(&l3), &v(&l2)).unwrap().len(), 0);
        assert_eq!(all_homomorphisms(&v(&l3), &v(&l4)).unwrap().len(), 0);
        let p = WajsbergAlgebra::chain_product(&[1, 2]);
        // Into L3: kernels are the two primes, both embed in L3.
        assert_eq!(all_homomorphisms(&v(&p), &v(&l3)).unwrap().len(), 2);
        assert_eq!(hom_count(&v(&p), &v(&p)), 2);
    }

    #[test]
    fn suite_small() {
        let mut s = Samples::new(6);
        s.algebras = chain_product_family(6, 12);
        let b = BoolAlg::new(2).unwrap();
        s.pairs = FilterMap::all_valid(b, 6)
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("pair{i}"), p))
            .collect();
        let report = equivalence_suite(&s);
        assert!(report.all_ok(), "{report}");
        assert!(report.count("naturality") > 0);
        assert!(report.to_string().lines().all(|l| l.starts_with("OK ")));
    }
}
