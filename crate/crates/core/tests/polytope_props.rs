use mb_core::lattice::{ell, permute_params, permute_vector, Permutation};
use mb_core::rational::int;
use mb_core::sample;
use mb_core::PolytopeSpec;
use num_traits::Signed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn supervertex_solves_the_fiber(m in 1usize..=5, seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let spec = PolytopeSpec::new(sample::random_b(&mut r, m)).unwrap();
        let q = spec.supervertex().unwrap().to_vector();
        prop_assert!(q.is_density());
        for i in 0..=m {
            prop_assert_eq!(ell(i, m).unwrap().dot(&q).unwrap(), spec.b_ext(i));
        }
        prop_assert!(spec.contains(&q).unwrap());
    }

    #[test]
    fn supervertex_ignores_tie_breaking(m in 2usize..=5, seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let mut b = sample::random_b(&mut r, m);
        b[1] = b[0].clone();
        let spec = PolytopeSpec::new(b).unwrap();
        let mut order = mb_core::lattice::decreasing_order(spec.b());
        let canonical = spec.supervertex_with_order(&order).unwrap().to_vector();
        // Swap the two tied entries in the arrangement.
        let a = order.iter().position(|&i| i == 1).unwrap();
        let c = order.iter().position(|&i| i == 2).unwrap();
        order.swap(a, c);
        let other = spec.supervertex_with_order(&order).unwrap().to_vector();
        prop_assert_eq!(canonical, other);
    }

    #[test]
    fn supervertex_is_equivariant(m in 1usize..=5, seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let b = sample::random_b(&mut r, m);
        let sigma: Permutation = sample::random_permutation(&mut r, m);
        let spec = PolytopeSpec::new(b.clone()).unwrap();
        let moved = PolytopeSpec::new(permute_params(&sigma, &b).unwrap()).unwrap();
        prop_assert_eq!(
            moved.supervertex().unwrap().to_vector(),
            permute_vector(&sigma, &spec.supervertex().unwrap().to_vector()).unwrap()
        );
    }

    #[test]
    fn subvertex_criterion_is_exact(m in 1usize..=5, seed in any::<u64>(), region in any::<bool>()) {
        let mut r = sample::rng(seed);
        let b = if region { sample::random_criterion_b(&mut r, m) } else { sample::random_b(&mut r, m) };
        let spec = PolytopeSpec::new(b).unwrap();
        let q = spec.subvertex().unwrap().to_vector();
        prop_assert_eq!(spec.subvertex_in_polytope().unwrap(), spec.contains(&q).unwrap());
        if spec.subvertex_in_polytope().unwrap() {
            prop_assert!(spec.is_vertex(&q).unwrap());
        }
    }

    #[test]
    fn distinct_fibers_are_disjoint(m in 1usize..=4, seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let a = PolytopeSpec::new(sample::random_b(&mut r, m)).unwrap();
        let b = PolytopeSpec::new(sample::random_b(&mut r, m)).unwrap();
        prop_assume!(a.b() != b.b());
        let x = sample::random_point(&mut r, &a).unwrap().unwrap();
        prop_assert!(a.contains(&x).unwrap());
        prop_assert!(!b.contains(&x).unwrap());
    }

    #[test]
    fn emptiness_matches_sup_norm(m in 1usize..=4, seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let b: Vec<_> = (0..m).map(|_| sample::rational_in(&mut r, -2, 2)).collect();
        let spec = PolytopeSpec::new(b.clone()).unwrap();
        prop_assert_eq!(spec.is_empty(), b.iter().any(|x| x.abs() > int(1)));
    }
}
