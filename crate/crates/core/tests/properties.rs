//! Property tests on the algebraic building blocks.

use proptest::prelude::*;

use qk_comin::laurent::Laurent;
use qk_comin::weyl::{bruhat_leq, minrep_to_partition, partition_to_minrep, Partition, Permutation};

fn laurent(nvars: usize) -> impl Strategy<Value = Laurent> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, nvars), -5i64..=5), 0..6).prop_map(move |terms| {
        terms.into_iter().fold(Laurent::zero(nvars), |acc, (e, c)| &acc + &Laurent::monomial(nvars, &e, c))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u8).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_one_line(v).unwrap())
}

fn partition(m: usize, k: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=k as u32, m).prop_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts).unwrap()
    })
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in laurent(3), b in laurent(3), c in laurent(3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&a + &b) - &b) == a);
    }

    #[test]
    fn laurent_text_round_trip(a in laurent(4)) {
        prop_assert_eq!(Laurent::parse(&a.to_string(), 4).unwrap(), a);
    }

    #[test]
    fn division_by_one_minus_undoes_multiplication(a in laurent(3), e in prop::collection::vec(-2i32..=2, 3)) {
        prop_assume!(e.iter().any(|&x| x != 0));
        let prod = &a * &Laurent::one_minus(3, &e);
        prop_assert_eq!(prod.div_one_minus(&e).unwrap(), a);
    }

    #[test]
    fn specialization_is_a_ring_map(a in laurent(2), b in laurent(2)) {
        prop_assert_eq!((&a * &b).specialize_ones(), a.specialize_ones() * b.specialize_ones());
    }

    #[test]
    fn permutation_group_laws(u in permutation(6), v in permutation(6)) {
        let id = Permutation::identity(6);
        prop_assert_eq!(u.compose(&u.inverse()), id.clone());
        prop_assert_eq!(u.inverse().length(), u.length());
        prop_assert!(bruhat_leq(&id, &u));
        prop_assert!(bruhat_leq(&u, &Permutation::longest(6)));
        prop_assert_eq!(u.reduced_word().len(), u.length());
        let uv = u.compose(&v);
        prop_assert!(uv.length() <= u.length() + v.length());
    }

    #[test]
    fn partitions_and_indices_correspond(lambda in partition(3, 4)) {
        let w = partition_to_minrep(&lambda, 3, 7).unwrap();
        prop_assert_eq!(w.length(), lambda.size());
        prop_assert_eq!(minrep_to_partition(&w, 3).unwrap(), lambda.clone());
        prop_assert_eq!(lambda.to_string().parse::<Partition>().unwrap(), lambda);
    }
}
