//! Ring laws of exact truncated series and the boundary products.

use enriques_phi::phi::{phi1_boundary, phi2_boundary};
use enriques_phi::qseries::{eta_quotient, ExactSeries, GaussInt};
use enriques_phi::theta::{theta1_series, Char1};
use proptest::prelude::*;

fn series(order: i64) -> impl Strategy<Value = ExactSeries> {
    proptest::collection::vec((-5i128..=5, -5i128..=5), order as usize).prop_map(move |cs| {
        ExactSeries::from_terms(1, order, cs.into_iter().enumerate().map(|(e, (a, b))| (e as i64, GaussInt::new(a, b)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_commutative_and_distributive(a in series(12), b in series(12), c in series(12)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_constant_term_series_invert(a in series(12)) {
        let mut a = a;
        a.set(0, GaussInt::from_int(1)).unwrap();
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(&inv).unwrap().agrees_with(&ExactSeries::one(1, 12).unwrap()));
    }

    #[test]
    fn eta_quotients_multiply(k1 in -8i64..8, k2 in -8i64..8) {
        let order = 20;
        let ab = eta_quotient(&[(1, k1), (2, k2)], order).unwrap();
        let a = eta_quotient(&[(1, k1)], order).unwrap();
        let b = eta_quotient(&[(2, k2)], order).unwrap();
        prop_assert!(a.mul(&b).unwrap().agrees_with(&ab));
    }
}

#[test]
fn jacobi_quartic_identity() {
    let f = |c| theta1_series(c, 60).unwrap().pow(4).unwrap();
    let d = f(Char1::Three).sub(&f(Char1::Two)).unwrap().sub(&f(Char1::Zero)).unwrap();
    assert!(d.is_empty());
}

#[test]
fn boundary_leading_terms() {
    let p1 = phi1_boundary(4).unwrap();
    assert_eq!(p1.coeff(0), GaussInt::from_int(1));
    assert_eq!(p1.coeff(1), GaussInt::from_int(-16));
    let p2 = phi2_boundary(6).unwrap();
    assert_eq!(p2.valuation(), Some(2));
    assert_eq!(p2.coeff(2), GaussInt::from_int(256));
}
