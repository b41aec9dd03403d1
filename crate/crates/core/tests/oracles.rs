mod common;

use proptest::prelude::*;

use mvdual::boolalg::BoolAlg;
use mvdual::duality::{all_homomorphisms, Decomposition};
use mvdual::pairs::{FilterMap, MonotoneTuple};
use mvdual::wajsberg::{NValued, WajsbergAlgebra};

fn small_products(n: u32, max: usize) -> Vec<WajsbergAlgebra> {
    common::chain_product_shapes(n, max)
        .iter()
        .map(|s| WajsbergAlgebra::chain_product(s))
        .collect()
}

#[test]
fn chains_match_formula() {
    for n in 1..=12 {
        assert_eq!(WajsbergAlgebra::chain(n), common::chain_by_formula(n));
    }
}

#[test]
fn hom_sets_match_backtracking() {
    for n in [4, 6, 12] {
        let algs = small_products(n, 14);
        let views: Vec<NValued> = algs.iter().map(|a| NValued::new(a, n).unwrap()).collect();
        for (a1, v1) in algs.iter().zip(&views) {
            for (a2, v2) in algs.iter().zip(&views) {
                let mut ours: Vec<Vec<usize>> = all_homomorphisms(v1, v2)
                    .unwrap()
                    .iter()
                    .map(|g| g.map().to_vec())
                    .collect();
                ours.sort();
                assert_eq!(ours, common::brute_homs(a1, a2));
            }
        }
    }
}

#[test]
fn primes_match_prelinear_filters() {
    for n in [2, 3, 4, 6] {
        for a in small_products(n, 12) {
            let mut primes: Vec<Vec<usize>> =
                a.prime_filters().iter().map(|f| f.members(&a)).collect();
            primes.sort();
            assert_eq!(primes, common::brute_primes(&a));
            let mut filters: Vec<Vec<usize>> = a
                .implicative_filters()
                .iter()
                .map(|f| f.members(&a))
                .collect();
            filters.sort();
            assert_eq!(filters, common::brute_filters(&a));
        }
    }
}

#[test]
fn sigma_and_h_match_hom_characterisations() {
    for n in [2, 4, 6, 12] {
        for a in small_products(n, 24) {
            let homs = common::homs_to_chain(&a, n);
            let dec = Decomposition::new(&a, n).unwrap();
            let view = dec.view();
            for x in a.elements() {
                for i in 1..=n {
                    assert_eq!(
                        Some(view.sigma(i, x).unwrap()),
                        common::sigma_by_homs(&a, &homs, n, i, x)
                    );
                }
            }
            for d in dec.pair().divisors().iter() {
                let h = dec.pair().h(d).unwrap();
                let ours: Vec<usize> = view
                    .skeleton()
                    .elements()
                    .iter()
                    .copied()
                    .filter(|&e| h.contains(view.skeleton().to_bool(e).unwrap()).unwrap())
                    .collect();
                assert_eq!(ours, common::h_by_homs(&a, &homs, n, d), "n={n} d={d}");
            }
        }
    }
}

#[test]
fn idempotents_match_skeleton() {
    for n in [2, 3, 6] {
        for a in small_products(n, 40) {
            let skeleton = a.boolean_skeleton().unwrap();
            assert_eq!(skeleton.elements(), common::idempotents(&a).as_slice());
        }
    }
}

#[test]
fn y_values_meet_the_lower_bound() {
    // Every homomorphism onto a chain sends y_d to at least (d-1)/d.
    for n in [2, 4, 6] {
        for a in small_products(n, 24) {
            let view = NValued::new(&a, n).unwrap();
            let homs = common::homs_to_chain(&a, n);
            for (d, &y) in dec_divisors(n).iter().zip(view.y_values().unwrap()) {
                for g in &homs {
                    assert!(g[y] * d >= (d - 1) * n, "n={n} d={d}");
                }
            }
        }
    }
}

fn dec_divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn arb_tuple(m: u32, n: u32) -> impl Strategy<Value = MonotoneTuple> {
    // A monotone tuple is fixed by a threshold per atom.
    prop::collection::vec(0..=n, m as usize).prop_map(move |t| {
        let b = BoolAlg::new(m).unwrap();
        let entries = (1..=n)
            .map(|i| {
                b.from_atoms((0..m).filter(|&a| i + t[a as usize] > n))
                    .unwrap()
            })
            .collect();
        MonotoneTuple::new(entries).unwrap()
    })
}

proptest! {
    #[test]
    fn tuple_ops_are_atomwise(
        (n, f, g) in (1u32..=8).prop_flat_map(|n| (Just(n), arb_tuple(4, n), arb_tuple(4, n)))
    ) {
        let fv = common::atom_values(&f);
        let gv = common::atom_values(&g);
        let imp = common::atom_values(&f.imp(&g));
        let neg = common::atom_values(&f.neg());
        for a in 0..4 {
            prop_assert_eq!(imp[a].num(), common::luk_imp(fv[a].num(), gv[a].num(), n));
            prop_assert_eq!(neg[a].num(), n - fv[a].num());
        }
    }

    #[test]
    fn tuple_text_round_trip(f in arb_tuple(3, 5)) {
        prop_assert_eq!(MonotoneTuple::parse(f.base(), &f.to_string()).unwrap(), f);
    }

    #[test]
    fn object_check_matches_enumeration(bits in prop::collection::vec(0u64..4, 4)) {
        let b = BoolAlg::new(2).unwrap();
        let entries = [1, 2, 3, 6].into_iter().zip(&bits).map(|(d, &g)| (d, b.from_bits(g).unwrap()));
        let pair = FilterMap::new(b, 6, entries).unwrap();
        let valid = common::brute_pairs(2, 6);
        prop_assert_eq!(pair.check_object().is_empty(), valid.contains(&pair));
        prop_assert_eq!(pair.to_text().parse::<FilterMap>().unwrap(), pair);
    }
}
