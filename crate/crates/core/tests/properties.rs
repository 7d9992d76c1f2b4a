use domino_orbits::classify::{normalize, orbit_label};
use domino_orbits::{rs, rs_inverse, DominoTableau, SignedPermutation};
use proptest::prelude::*;

fn signed_permutation(max_rank: usize) -> impl Strategy<Value = SignedPermutation> {
    (1..=max_rank)
        .prop_flat_map(|n| (Just((1..=n as i32).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n)))
        .prop_map(|(perm, signs)| {
            let images = perm.into_iter().zip(signs).map(|(v, neg)| if neg { -v } else { v }).collect();
            SignedPermutation::new(images).unwrap()
        })
}

proptest! {
    #[test]
    fn text_round_trip(w in signed_permutation(9)) {
        prop_assert_eq!(w.to_string().parse::<SignedPermutation>().unwrap(), w);
    }

    #[test]
    fn rs_round_trip(w in signed_permutation(8)) {
        let pair = rs(&w).unwrap();
        prop_assert_eq!(rs_inverse(&pair).unwrap(), w.clone());
        prop_assert_eq!(rs(&w.inverse()).unwrap(), pair.swapped());
    }

    #[test]
    fn tableau_serialization_round_trip(w in signed_permutation(8)) {
        let pair = rs(&w).unwrap();
        for t in [pair.left, pair.right] {
            prop_assert_eq!(t.serialize_inline().parse::<DominoTableau>().unwrap(), t.clone());
            let json = serde_json::to_string(&t).unwrap();
            prop_assert_eq!(serde_json::from_str::<DominoTableau>(&json).unwrap(), t);
        }
    }

    #[test]
    fn normal_forms_carry_d_labels(w in signed_permutation(6)) {
        let left = rs(&w).unwrap().left;
        let (t, trace) = normalize(&left).unwrap();
        prop_assert!(trace.is_strictly_decreasing());
        prop_assert!(orbit_label(&t).is_ok());
        prop_assert_eq!(t.rank(), w.rank());
    }
}
