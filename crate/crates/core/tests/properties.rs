use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fixcalc_core::complex::{closure_set, interior_set, Complex, SimplexSet, VertexId};
use fixcalc_core::index::{admissible, comb_index, comb_lefschetz, index_oracle};
use fixcalc_core::integral::{integrable_wrt_index, integrate_step};
use fixcalc_core::maps::{fixed_clusters, preimage_set, SimplicialMap};
use fixcalc_core::riemann::{
    is_index_strict, riemann_limit, riemann_lower, riemann_lower_from_clusters, riemann_upper, IndexStrictness,
};
use fixcalc_core::{gen, lefschetz_homology, lefschetz_hopf};

fn small_map(rng: &mut ChaCha8Rng) -> SimplicialMap {
    let x = Arc::new(gen::random_complex(rng, 7, 3, 35));
    gen::random_self_map(rng, &x)
}

/// `f` changed at random on vertices outside `Ā`, kept simplicial.
fn perturb_off(rng: &mut ChaCha8Rng, f: &SimplicialMap, a: &SimplexSet) -> SimplicialMap {
    let x = f.source();
    let closure = closure_set(a);
    let inside: Vec<VertexId> = closure.simplices().flat_map(|s| s.vertices().to_vec()).collect();
    let mut assignment: BTreeMap<VertexId, VertexId> = f.assignment().clone();
    for &v in x.vertices() {
        if inside.contains(&v) {
            continue;
        }
        let old = assignment[&v];
        assignment.insert(v, x.vertices()[rng.gen_range(0..x.vertices().len())]);
        if SimplicialMap::new(Arc::clone(x), Arc::clone(x), assignment.clone()).is_err() {
            assignment.insert(v, old);
        }
    }
    SimplicialMap::new(Arc::clone(x), Arc::clone(x), assignment).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn localization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = small_map(&mut rng);
        let a = gen::random_admissible_set(&mut rng, &f, 20);
        prop_assume!(a.is_some());
        let a = a.unwrap();
        let g = perturb_off(&mut rng, &f, &a);
        prop_assert!(admissible(&g, &a).is_admissible());
        prop_assert_eq!(comb_index(&g, &a).unwrap(), comb_index(&f, &a).unwrap());
    }

    #[test]
    fn normalization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = small_map(&mut rng);
        let whole = SimplexSet::full(f.source());
        let i = comb_index(&f, &whole).unwrap();
        prop_assert_eq!(i, lefschetz_hopf(&f));
        prop_assert_eq!(i, lefschetz_homology(&f));
    }

    #[test]
    fn commutativity_on_open_sets(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Arc::new(gen::random_complex(&mut rng, 6, 2, 25));
        let y = Arc::new(gen::random_complex(&mut rng, 6, 2, 25));
        let f = gen::random_map(&mut rng, &x, &y);
        let g = gen::random_map(&mut rng, &y, &x);
        let (gf, fg) = (g.compose(&f).unwrap(), f.compose(&g).unwrap());
        let a = interior_set(&gen::random_set(&mut rng, &x));
        let b = preimage_set(&g, &a);
        prop_assert!(b.is_open());
        prop_assume!(admissible(&gf, &a).is_admissible() && admissible(&fg, &b).is_admissible());
        prop_assert_eq!(comb_index(&gf, &a).unwrap(), comb_index(&fg, &b).unwrap());
    }

    #[test]
    fn equality_and_corollary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = gen::random_automorphism(&mut rng, 7, 3, 35);
        let a = gen::random_invariant_set(&mut rng, &f);
        prop_assume!(admissible(&f, &a).is_admissible());
        let i = comb_index(&f, &a).unwrap();
        prop_assert_eq!(comb_lefschetz(&f, &a).unwrap(), i);
        prop_assert_eq!(index_oracle(&f, &a).unwrap(), i);
        prop_assert_eq!(comb_index(&f, &interior_set(&a)).unwrap(), i);
        let closure = closure_set(&a);
        let sub = Arc::new(Complex::subcomplex(&closure).unwrap());
        if !sub.is_empty() {
            prop_assert_eq!(lefschetz_homology(&f.restrict(&sub).unwrap()), i);
        }
    }

    #[test]
    fn nonzero_index_has_an_interior_cluster(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = small_map(&mut rng);
        let a = gen::random_admissible_set(&mut rng, &f, 20);
        prop_assume!(a.is_some());
        let a = a.unwrap();
        let interior = interior_set(&a);
        let inside: i64 = fixed_clusters(&f)
            .iter()
            .filter(|c| c.indices().all(|i| interior.contains(i)))
            .map(|c| c.localized_index)
            .sum();
        prop_assert_eq!(inside, comb_index(&f, &a).unwrap());
    }

    #[test]
    fn integral_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = small_map(&mut rng);
        let h = gen::random_step_function(&mut rng, &f, 4);
        let k = gen::random_step_function(&mut rng, &f, 4);
        let sum = h.add(&k).unwrap();
        prop_assert!(integrable_wrt_index(&sum, &f).is_ok());
        prop_assert_eq!(
            integrate_step(&sum, &f).unwrap(),
            integrate_step(&h, &f).unwrap() + integrate_step(&k, &f).unwrap()
        );
    }

    #[test]
    fn riemann_sums_bracket_the_limit(seed in any::<u64>(), n in 0u32..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = small_map(&mut rng);
        let strict = is_index_strict(&f);
        prop_assume!(strict != IndexStrictness::Neither);
        let h = gen::random_value_function(&mut rng, &f);
        let (lo, up, limit) = (
            riemann_lower(&h, &f, n).unwrap(),
            riemann_upper(&h, &f, n).unwrap(),
            riemann_limit(&h, &f).unwrap(),
        );
        prop_assert_eq!(riemann_lower_from_clusters(&h, &f, n).unwrap(), lo.clone());
        match strict {
            IndexStrictness::Nonnegative => prop_assert!(lo <= limit && limit <= up),
            IndexStrictness::Nonpositive => prop_assert!(up <= limit && limit <= lo),
            _ => prop_assert!(lo == limit && up == limit),
        }
    }
}
