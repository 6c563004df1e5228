//! Property tests over randomly generated operators and states.

use proptest::prelude::*;

use schwinger_core::{FlatPhaseState, MonomialOperator};

/// Random monomial operator: a shuffled permutation with random phases.
fn arb_operator(max_m: u64) -> impl Strategy<Value = MonomialOperator> {
    (2..=max_m).prop_flat_map(|m| {
        let perm = Just((0..m).collect::<Vec<u64>>()).prop_shuffle();
        let phases = proptest::collection::vec(0..m, m as usize);
        (perm, phases).prop_map(move |(perm, phases)| {
            MonomialOperator::from_parts(m, perm, phases).expect("valid permutation")
        })
    })
}

/// Random flat-phase state within a fixed dimension.
fn arb_state_of(m: u64) -> impl Strategy<Value = FlatPhaseState> {
    proptest::collection::btree_map(0..m, 0..m, 1..=(m as usize))
        .prop_map(move |entries| FlatPhaseState::from_parts(m, entries.into_iter().collect()).unwrap())
}

fn arb_state(max_m: u64) -> impl Strategy<Value = (u64, FlatPhaseState, FlatPhaseState)> {
    (2..=max_m).prop_flat_map(|m| (Just(m), arb_state_of(m), arb_state_of(m)))
}

proptest! {
    #[test]
    fn compose_is_associative((a, b, c) in (2u64..=24).prop_flat_map(|m| {
        let op = || {
            let perm = Just((0..m).collect::<Vec<u64>>()).prop_shuffle();
            let phases = proptest::collection::vec(0..m, m as usize);
            (perm, phases).prop_map(move |(p, ph)| MonomialOperator::from_parts(m, p, ph).unwrap())
        };
        (op(), op(), op())
    })) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_cancels(op in arb_operator(32)) {
        prop_assert!(op.compose(&op.inverse()).unwrap().is_identity());
        prop_assert!(op.inverse().compose(&op).unwrap().is_identity());
    }

    #[test]
    fn power_at_period_is_identity(op in arb_operator(16)) {
        let p = op.period();
        prop_assert!(op.power(p as i64).is_identity());
        // Minimality: no proper divisor of the period works.
        for d in 1..p {
            if p % d == 0 {
                prop_assert!(!op.power(d as i64).is_identity(), "period {p} not minimal");
            }
        }
    }

    #[test]
    fn overlap_magnitude_is_bounded((m, a, b) in arb_state(48)) {
        let _ = m;
        let ov = a.overlap(&b).unwrap();
        prop_assert!(ov.magnitude() <= 1.0 + 1e-12);
        // |<a|b>| = 1 exactly when the states agree up to a global phase.
        let full = a.overlap(&b).unwrap().magnitude_squared_ratio();
        let same_ray = a.eq_up_to_global_phase(&b);
        if let Some((num, den)) = full {
            prop_assert_eq!(num == den, same_ray);
        } else {
            prop_assert!(!same_ray);
        }
    }

    #[test]
    fn overlap_agrees_with_dense_inner_product((m, a, b) in arb_state(48)) {
        let _ = m;
        let exact = a.overlap(&b).unwrap().to_complex();
        let dense: num_complex::Complex64 =
            a.to_dense().iter().zip(b.to_dense()).map(|(x, y)| x.conj() * y).sum();
        prop_assert!((exact - dense).norm() < 1e-12);
    }

    #[test]
    fn apply_preserves_flat_form((op, s) in (2u64..=32).prop_flat_map(|m| {
        let perm = Just((0..m).collect::<Vec<u64>>()).prop_shuffle();
        let phases = proptest::collection::vec(0..m, m as usize);
        let op = (perm, phases)
            .prop_map(move |(p, ph)| MonomialOperator::from_parts(m, p, ph).unwrap());
        (op, arb_state_of(m))
    })) {
        let t = op.apply(&s).unwrap();
        prop_assert_eq!(t.support_len(), s.support_len());
        let norm = t.overlap(&t).unwrap().magnitude_squared_ratio().unwrap();
        prop_assert_eq!(norm.0, norm.1);
        // The inverse restores the state exactly.
        prop_assert_eq!(op.inverse().apply(&t).unwrap(), s);
    }

    #[test]
    fn commutation_holds_when_reported((a, b) in (2u64..=16).prop_flat_map(|m| {
        let op = || {
            let perm = Just((0..m).collect::<Vec<u64>>()).prop_shuffle();
            let phases = proptest::collection::vec(0..m, m as usize);
            (perm, phases).prop_map(move |(p, ph)| MonomialOperator::from_parts(m, p, ph).unwrap())
        };
        (op(), op())
    })) {
        // Whenever a scalar exponent is reported, A B and B A omega^c agree
        // exactly.
        if let Ok(c) = a.commutation_exponent(&b) {
            let ab = a.compose(&b).unwrap();
            let ba = b.compose(&a).unwrap();
            let m = a.dimension();
            let scaled = MonomialOperator::from_parts(
                m,
                ba.permutation().to_vec(),
                ba.phases().iter().map(|&e| (e + c.exponent()) % m).collect(),
            ).unwrap();
            prop_assert_eq!(ab, scaled);
        }
    }
}
