use proptest::prelude::*;

use pancake_core::permutations::factorial;
use pancake_core::Permutation;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    (0..factorial(n)).prop_map(move |r| Permutation::unrank(r, n).unwrap())
}

fn triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=12).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)))
}

proptest! {
    #[test]
    fn compose_is_associative((a, b, c) in triple()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_neutral_and_inverse_cancels((a, _, _) in triple()) {
        let id = Permutation::identity(a.degree());
        prop_assert_eq!(&a.compose(&id).unwrap(), &a);
        prop_assert_eq!(&id.compose(&a).unwrap(), &a);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn rank_roundtrip(n in 1usize..=20, seed in any::<u64>()) {
        let r = seed % factorial(n);
        let p = Permutation::unrank(r, n).unwrap();
        prop_assert_eq!(p.rank(), r);
    }

    #[test]
    fn reversal_is_right_multiplication((a, _, _) in triple(), j in 2usize..=12) {
        let n = a.degree();
        prop_assume!(j <= n);
        let r = pancake_core::prefix_reversal(n, j).unwrap();
        prop_assert_eq!(a.reverse_prefix(j).unwrap(), a.compose(&r).unwrap());
        prop_assert_eq!(a.reverse_prefix(j).unwrap().reverse_prefix(j).unwrap(), a);
    }
}
