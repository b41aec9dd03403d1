//! Independent reference computations used by the integration tests. None of
//! these call into the structural machinery they are compared against.
#![allow(dead_code)]

use mvdual::boolalg::BoolAlg;
use mvdual::chain::ChainValue;
use mvdual::pairs::{DivisorSet, FilterMap, MonotoneTuple};
use mvdual::wajsberg::{Elem, WajsbergAlgebra};

/// Subsets containing `1` and closed under modus ponens, sorted.
pub fn brute_filters(a: &WajsbergAlgebra) -> Vec<Vec<Elem>> {
    let s = a.size();
    assert!(s <= 16, "subset enumeration is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1 << s) {
        let has = |x: Elem| mask >> x & 1 == 1;
        if !has(a.top()) {
            continue;
        }
        let closed = (0..s).all(|x| !has(x) || (0..s).all(|y| !has(a.imp(x, y)) || has(y)));
        if closed {
            out.push((0..s).filter(|&x| has(x)).collect());
        }
    }
    out.sort();
    out
}

/// Proper filters whose quotient is linearly ordered, i.e. for all `x, y`
/// one of `x→y`, `y→x` lies in the filter.
pub fn brute_primes(a: &WajsbergAlgebra) -> Vec<Vec<Elem>> {
    brute_filters(a)
        .into_iter()
        .filter(|f| f.len() < a.size())
        .filter(|f| {
            a.elements().all(|x| {
                a.elements()
                    .all(|y| f.contains(&a.imp(x, y)) || f.contains(&a.imp(y, x)))
            })
        })
        .collect()
}

/// `¬(x → ¬x)` read off the tables.
pub fn square(a: &WajsbergAlgebra, x: Elem) -> Elem {
    a.neg(a.imp(x, a.neg(x)))
}

pub fn idempotents(a: &WajsbergAlgebra) -> Vec<Elem> {
    a.elements().filter(|&x| square(a, x) == x).collect()
}

/// All maps `a → b` preserving `→`, `¬` and `1`, found by backtracking with
/// forward propagation of forced values.
pub fn brute_homs(a: &WajsbergAlgebra, b: &WajsbergAlgebra) -> Vec<Vec<Elem>> {
    fn assign(
        a: &WajsbergAlgebra,
        b: &WajsbergAlgebra,
        map: &mut [Option<Elem>],
        x: Elem,
        v: Elem,
        trail: &mut Vec<Elem>,
    ) -> bool {
        let mut work = vec![(x, v)];
        while let Some((x, v)) = work.pop() {
            match map[x] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {
                    map[x] = Some(v);
                    trail.push(x);
                }
            }
            work.push((a.neg(x), b.neg(v)));
            for y in a.elements() {
                if let Some(w) = map[y] {
                    work.push((a.imp(x, y), b.imp(v, w)));
                    work.push((a.imp(y, x), b.imp(w, v)));
                }
            }
        }
        true
    }

    fn go(
        a: &WajsbergAlgebra,
        b: &WajsbergAlgebra,
        map: &mut Vec<Option<Elem>>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let Some(x) = map.iter().position(Option::is_none) else {
            out.push(map.iter().map(|v| v.expect("complete")).collect());
            return;
        };
        for v in b.elements() {
            let mut trail = Vec::new();
            if assign(a, b, map, x, v, &mut trail) {
                go(a, b, map, out);
            }
            for t in trail {
                map[t] = None;
            }
        }
    }

    let mut map = vec![None; a.size()];
    let mut out = Vec::new();
    let mut trail = Vec::new();
    if assign(a, b, &mut map, a.top(), b.top(), &mut trail) {
        go(a, b, &mut map, &mut out);
    }
    out.sort();
    out
}

/// Whether some bijection `a → b` preserves `→` and `¬`.
pub fn isomorphic_by_search(a: &WajsbergAlgebra, b: &WajsbergAlgebra) -> bool {
    a.size() == b.size()
        && brute_homs(a, b).iter().any(|h| {
            let mut seen = vec![false; b.size()];
            h.iter().for_each(|&y| seen[y] = true);
            seen.iter().all(|&s| s)
        })
}

/// `min(n, n − x + y)` over numerators.
pub fn luk_imp(x: u32, y: u32, n: u32) -> u32 {
    n.min(n - x + y)
}

/// Value of a monotone tuple at atom `α`: the number of entries containing
/// `α`, over `n`.
pub fn atom_value(f: &MonotoneTuple, atom: u32) -> ChainValue {
    let k = f.entries().iter().filter(|e| e.has_atom(atom)).count() as u32;
    ChainValue::new(k, f.n()).expect("count bounded by n")
}

pub fn atom_values(f: &MonotoneTuple) -> Vec<ChainValue> {
    (0..f.base().atom_count())
        .map(|a| atom_value(f, a))
        .collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generator maps `Div(n) → B` with `h(n) = top` and the gcd law, listed by
/// direct enumeration of all generator choices.
pub fn brute_pairs(m: u32, n: u32) -> Vec<FilterMap> {
    let base = BoolAlg::new(m).unwrap();
    let divs: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let size = 1u64 << m;
    let total = size.pow(divs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let gens: Vec<u64> = (0..divs.len())
            .map(|k| code / size.pow(k as u32) % size)
            .collect();
        let at = |d: u32| gens[divs.iter().position(|&e| e == d).unwrap()];
        if at(n) != size - 1 {
            continue;
        }
        let lawful = divs
            .iter()
            .all(|&d| divs.iter().all(|&r| at(gcd(d, r)) == at(d) & at(r)));
        if lawful {
            let entries = divs.iter().map(|&d| (d, base.from_bits(at(d)).unwrap()));
            out.push(FilterMap::new(base, n, entries).unwrap());
        }
    }
    out
}

/// Chain products `L_{d1+1} × ...` with `d_i | n`, nondecreasing heights and
/// at most `max` elements.
pub fn chain_product_shapes(n: u32, max: usize) -> Vec<Vec<u32>> {
    let divs: Vec<u32> = DivisorSet::new(n).iter().collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u32>, usize)> = divs
        .iter()
        .filter(|&&d| (d as usize) < max)
        .map(|&d| (vec![d], d as usize + 1))
        .collect();
    while let Some((shape, size)) = stack.pop() {
        let last = *shape.last().unwrap();
        for &d in divs.iter().filter(|&&d| d >= last) {
            if size * (d as usize + 1) <= max {
                let mut next = shape.clone();
                next.push(d);
                stack.push((next, size * (d as usize + 1)));
            }
        }
        out.push(shape);
    }
    out.sort();
    out
}

/// Homomorphisms into `L_{n+1}` (as numerators) found by [`brute_homs`].
pub fn homs_to_chain(a: &WajsbergAlgebra, n: u32) -> Vec<Vec<u32>> {
    brute_homs(a, &chain_by_formula(n))
        .into_iter()
        .map(|h| h.into_iter().map(|v| v as u32).collect())
        .collect()
}

/// `σ_i(x)` characterised by `g(σ_i(x)) = σ_i(g(x))` for every homomorphism
/// `g: A → L_{n+1}`.
pub fn sigma_by_homs(
    a: &WajsbergAlgebra,
    homs: &[Vec<u32>],
    n: u32,
    i: u32,
    x: Elem,
) -> Option<Elem> {
    a.elements().find(|&s| {
        homs.iter()
            .all(|g| g[s] == if i + g[x] > n { n } else { 0 })
    })
}

/// `{x ∈ B(A) : g(x) = 1 for every g: A → L_{n+1} with image in L_{d+1}}`.
pub fn h_by_homs(a: &WajsbergAlgebra, homs: &[Vec<u32>], n: u32, d: u32) -> Vec<Elem> {
    let step = n / d;
    let inside: Vec<&Vec<u32>> = homs
        .iter()
        .filter(|g| g.iter().all(|v| v % step == 0))
        .collect();
    idempotents(a)
        .into_iter()
        .filter(|&x| inside.iter().all(|g| g[x] == n))
        .collect()
}

/// Lukasiewicz chain tables built from the arithmetic definition.
pub fn chain_by_formula(n: u32) -> WajsbergAlgebra {
    WajsbergAlgebra::from_fns(
        n as usize + 1,
        n as usize,
        |x, y| luk_imp(x as u32, y as u32, n) as usize,
        |x| n as usize - x,
    )
    .unwrap()
}
