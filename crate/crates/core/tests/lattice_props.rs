use mb_core::lattice::{
    c_vector, ell, ell_dprime, ell_prime, mu, permute_lattice, permute_vector, LatticeElement,
};
use mb_core::rational::int;
use mb_core::sample;
use proptest::prelude::*;

proptest! {
    #[test]
    fn ell_vectors_are_orthogonal(m in 1usize..=5) {
        for i in 0..=m {
            for j in 0..=m {
                let d = ell(i, m).unwrap().dot(&ell(j, m).unwrap()).unwrap();
                let expected = if i == j { int(1 << m) } else { int(0) };
                prop_assert_eq!(d, expected);
            }
        }
    }

    #[test]
    fn c_vectors_alternate(m in 1usize..=6, seed in any::<u64>()) {
        let idx = (seed % (1 << m)) as usize;
        let c = c_vector(LatticeElement::from_index(m, idx).unwrap());
        let nz: Vec<i8> = c.into_iter().filter(|&x| x != 0).collect();
        prop_assert_eq!(nz.len() % 2, 1);
        prop_assert_eq!(nz[0], 1);
        prop_assert_eq!(*nz.last().unwrap(), 1);
        prop_assert!(nz.windows(2).all(|w| w[0] == -w[1]));
    }

    #[test]
    fn ell_prime_is_dual_to_mu(m in 1usize..=5) {
        for i in 0..=m {
            let l = ell_prime(i, m).unwrap();
            for j in 0..=m {
                let expected = if i == j { int(1) } else { int(0) };
                prop_assert_eq!(l[mu(j, m).unwrap()].clone(), expected);
            }
        }
    }

    #[test]
    fn ell_dprime_evaluates_complement(m in 1usize..=5) {
        for lambda in LatticeElement::all(m) {
            for i in 0..=m {
                let expected = int(1 - i64::from(lambda.get(i)));
                prop_assert_eq!(ell_dprime(i, m).unwrap()[lambda].clone(), expected);
            }
        }
    }

    #[test]
    fn permutations_act_on_ell(m in 1usize..=5, seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let sigma = sample::random_permutation(&mut r, m);
        for i in 0..=m {
            let moved = permute_vector(&sigma, &ell(i, m).unwrap()).unwrap();
            prop_assert_eq!(moved, ell(sigma.apply(i), m).unwrap());
        }
        let x = sample::random_density(&mut r, m);
        let y = sample::random_density(&mut r, m);
        let before = x.dot(&y).unwrap();
        let after = permute_vector(&sigma, &x).unwrap().dot(&permute_vector(&sigma, &y).unwrap()).unwrap();
        prop_assert_eq!(before, after);
        for lambda in LatticeElement::all(m) {
            let back = permute_lattice(&sigma.inverse(), permute_lattice(&sigma, lambda).unwrap()).unwrap();
            prop_assert_eq!(back, lambda);
        }
    }
}
