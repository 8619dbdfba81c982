//! Randomized property tests for invariants that hold on unrestricted
//! inputs, complementing the golden-value unit tests: exact field axioms in
//! the cyclotomic scalar, agreement between the exact and floating images,
//! printer/parser roundtrips, Weyl-orbit structure on the torus, range and
//! invariance of the character restrictions, and the corrected density
//! factorization.

use num::rational::Rational64;
use proptest::collection::vec as pvec;
use proptest::prelude::*;

use g2spectra::cyclotomic::{parse_cyclotomic, Cyclotomic};
use g2spectra::torus::{
    self, d12_orbit, domain_poly_p1, domain_poly_p2, orbit_representative, TorusPoint, WeylElement,
};

/// Orders dividing 84, so any sum or product of sampled roots stays inside
/// Q(ζ_84) — the field large enough for every bundled character value.
const ORDERS: [i64; 12] = [1, 2, 3, 4, 6, 7, 12, 14, 21, 28, 42, 84];

/// One rational multiple of a root of unity with conductor dividing 84.
fn term() -> impl Strategy<Value = Cyclotomic> {
    (0usize..ORDERS.len(), any::<i64>(), -20i64..=20, 1i64..=12).prop_map(|(oi, k, num, den)| {
        let n = ORDERS[oi];
        let root = Cyclotomic::root_of_unity(k.rem_euclid(n), n)
            .expect("sampled orders stay far under the conductor cap");
        &Cyclotomic::from_ratio(num, den) * &root
    })
}

/// A short sum of such terms: a generic element of Q(ζ_84).
fn cyclo() -> impl Strategy<Value = Cyclotomic> {
    pvec(term(), 1..=3).prop_map(|ts| ts.iter().fold(Cyclotomic::zero(), |acc, t| &acc + t))
}

/// A rational torus point with denominators up to `max_den`.
fn torus_point(max_den: i64) -> impl Strategy<Value = TorusPoint> {
    (-100i64..=100, 1i64..=max_den, -100i64..=100, 1i64..=max_den)
        .prop_map(|(n1, d1, n2, d2)| TorusPoint::from_fracs(n1, d1, n2, d2))
}

proptest! {
    #[test]
    fn addition_associates_and_multiplication_distributes(
        a in cyclo(), b in cyclo(), c in cyclo()
    ) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_values_have_exact_inverses(a in cyclo()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().expect("nonzero values are invertible");
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn float_image_respects_the_arithmetic(a in cyclo(), b in cyclo()) {
        let fa = a.to_float();
        let fb = b.to_float();
        prop_assert!(((&a + &b).to_float() - (fa + fb)).norm() <= 1e-9);
        prop_assert!(((&a * &b).to_float() - fa * fb).norm() <= 1e-9);
    }

    #[test]
    fn display_output_parses_back_to_the_same_value(a in cyclo()) {
        let printed = a.to_string();
        let reparsed =
            parse_cyclotomic(&printed).expect("printer emits the documented grammar");
        prop_assert_eq!(reparsed, a);
    }

    #[test]
    fn conjugation_is_an_involution_with_real_symmetric_combinations(a in cyclo()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert!((&a + &a.conjugate()).is_real());
        prop_assert!((&a * &a.conjugate()).is_real());
    }
}

proptest! {
    // The torus properties evaluate exact characters over whole Weyl orbits,
    // so they run with a reduced case count to keep the suite fast.
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torus_points_normalize_and_orbits_have_weyl_structure(p in torus_point(24)) {
        let zero = Rational64::new(0, 1);
        let one = Rational64::new(1, 1);
        prop_assert!(p.theta1() >= zero && p.theta1() < one);
        prop_assert!(p.theta2() >= zero && p.theta2() < one);

        let orbit = d12_orbit(&p);
        prop_assert_eq!(12 % orbit.len(), 0);
        let rep = orbit_representative(&p);
        prop_assert_eq!(Some(&rep), orbit.iter().next());
        prop_assert_eq!(orbit_representative(&rep), rep);
        if p.theta1() == p.theta2() {
            prop_assert!(orbit.len() <= 6);
        }
    }

    #[test]
    fn characters_and_density_are_weyl_invariant(p in torus_point(12)) {
        let x = torus::phi1(&p);
        let y = torus::phi2(&p);
        let dens = torus::j2(&p);
        for g in WeylElement::d12() {
            let q = g.apply(&p);
            prop_assert_eq!(torus::phi1(&q), x.clone());
            prop_assert_eq!(torus::phi2(&q), y.clone());
            prop_assert_eq!(torus::j2(&q), dens.clone());
        }
    }

    #[test]
    fn character_restrictions_stay_in_their_ranges(p in torus_point(24)) {
        let x = torus::phi1(&p);
        let y = torus::phi2(&p);
        // Some(0)/Some(1) certifies v ≥ 0 exactly; None would mean a nonzero
        // value within 1e-9 of zero, impossible on the rational-angle grid.
        let nonneg = |v: &Cyclotomic| matches!(v.real_sign(), Some(0) | Some(1));
        prop_assert!(nonneg(&(&x + &Cyclotomic::from_integer(2))));
        prop_assert!(nonneg(&(&Cyclotomic::from_integer(7) - &x)));
        prop_assert!(nonneg(&(&y + &Cyclotomic::from_integer(2))));
        prop_assert!(nonneg(&(&Cyclotomic::from_integer(14) - &y)));
    }

    #[test]
    fn density_factorization_matches_the_corrected_sign(p in torus_point(12)) {
        let x = torus::phi1(&p);
        let y = torus::phi2(&p);
        let four_j2 = &Cyclotomic::from_integer(4) * &torus::j2(&p);
        let product = &domain_poly_p1(&x, &y) * &domain_poly_p2(&x, &y);
        prop_assert_eq!(four_j2, product);
    }
}
