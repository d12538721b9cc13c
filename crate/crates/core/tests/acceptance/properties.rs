use num_bigint::BigUint;
use proptest::prelude::*;
use sliced_core::channel::{apply_pattern, random_pattern, OpKind};
use sliced_core::del_code::{del_decode, del_decode_with, del_encode, del_params};
use sliced_core::deletion_index::{fds, fds_domain, fds_inv};
use sliced_core::hamming_index::{fhs, fhs_domain, fhs_inv};
use sliced_core::subst_code::{subst_decode, subst_encode, subst_params};
use sliced_core::{BitString, DelMode, Message};

fn message(d1_domain: &BigUint, d2_bits: usize, d1_seed: &[u8], d2_seed: &[u8]) -> Message {
    let d1 = BigUint::from_bytes_be(d1_seed) % d1_domain + 1u8;
    let d2 = BitString::new(
        (0..d2_bits)
            .map(|i| d2_seed[i % d2_seed.len()] >> (i % 8) & 1)
            .collect(),
    )
    .unwrap();
    Message { d1, d2 }
}

fn seeds() -> impl Strategy<Value = (Vec<u8>, Vec<u8>, u64)> {
    (
        prop::collection::vec(any::<u8>(), 16),
        prop::collection::vec(any::<u8>(), 1..32),
        any::<u64>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subst_round_trip_under_k_substitutions((a, b, seed) in seeds()) {
        let p = subst_params(4, 72, 1).unwrap();
        let msg = message(&p.d1_domain, p.d2_bits, &a, &b);
        let w = subst_encode(&msg, &p).unwrap();
        prop_assert_eq!(w.len(), 4);
        prop_assert!(w.strings().iter().all(|s| s.len() == 72));
        let r = apply_pattern(&w, &random_pattern(&w, 1, &[OpKind::Substitute], seed)).unwrap();
        prop_assert_eq!(r.len(), 4);
        prop_assert_eq!(subst_decode(&r, &p).unwrap(), msg);
    }

    #[test]
    fn subst_k2_keeps_strings_distinct((a, b, seed) in seeds()) {
        let p = subst_params(2, 219, 2).unwrap();
        let msg = message(&p.d1_domain, p.d2_bits, &a, &b);
        let w = subst_encode(&msg, &p).unwrap();
        let r = apply_pattern(&w, &random_pattern(&w, 2, &[OpKind::Substitute], seed)).unwrap();
        prop_assert_eq!(r.len(), 2);
        prop_assert_eq!(subst_decode(&r, &p).unwrap(), msg);
    }

    #[test]
    fn del_round_trip_under_one_deletion((a, b, seed) in seeds()) {
        let p = del_params(4, 72, 1, "vt1").unwrap();
        let msg = message(&p.d1_domain, p.d2_bits, &a, &b);
        let w = del_encode(&msg, &p).unwrap();
        let r = apply_pattern(&w, &random_pattern(&w, 1, &[OpKind::Delete], seed)).unwrap();
        prop_assert_eq!(del_decode(&r, &p).unwrap(), msg.clone());
        let r = apply_pattern(&w, &random_pattern(&w, 1, &[OpKind::Delete, OpKind::Insert], seed)).unwrap();
        prop_assert_eq!(del_decode_with(&r, &p, DelMode::Indels).unwrap(), msg);
    }

    #[test]
    fn random_patterns_respect_k_and_never_grow_words(
        (a, b, seed) in seeds(),
        k in 0usize..4,
    ) {
        let p = subst_params(4, 72, 1).unwrap();
        let w = subst_encode(&message(&p.d1_domain, p.d2_bits, &a, &b), &p).unwrap();
        let kinds = [OpKind::Substitute, OpKind::Delete, OpKind::Insert];
        let e = random_pattern(&w, k, &kinds, seed);
        prop_assert!(e.len() <= k);
        prop_assert_eq!(&e, &random_pattern(&w, k, &kinds, seed));
        prop_assert!(apply_pattern(&w, &e).unwrap().len() <= w.len());
    }

    #[test]
    fn index_maps_round_trip(seed in prop::collection::vec(any::<u8>(), 16)) {
        let v = BigUint::from_bytes_be(&seed);
        let d = &v % fhs_domain(12, 4, 1) + 1u8;
        let book = fhs(&d, 12, 4, 1).unwrap();
        book.validate().unwrap();
        prop_assert_eq!(fhs_inv(&book).unwrap(), d);
        let d = &v % fds_domain(12, 4, 1) + 1u8;
        let book = fds(&d, 12, 4, 1).unwrap();
        book.validate().unwrap();
        prop_assert_eq!(fds_inv(&book).unwrap(), d);
    }
}
