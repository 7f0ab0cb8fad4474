//! Invariants of the product-type (2,2,2) model at random parameters.

use enriques_phi::kummer::{delta_partition, factor_poly, m_matrix, quadric_split, norm_identity_check, Poly2, ProductPoint};
use enriques_phi::theta::{minor_table, Partition};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=7).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn split_resultants_are_fourth_powers(l1 in rational(), l2 in rational()) {
        let m = m_matrix(&l1, &l2);
        for p in Partition::admissible() {
            let (a, b) = quadric_split(p, &l1, &l2).unwrap();
            let r = a.resultant().unwrap() * b.resultant().unwrap();
            prop_assert_eq!(r, num_traits::pow(delta_partition(&m, p), 4), "{}", p);
        }
    }

    #[test]
    fn minor_table_evaluates_correctly(l1 in rational(), l2 in rational()) {
        let m = m_matrix(&l1, &l2);
        let (s1, s2) = (Poly2::lambda1(), Poly2::lambda2());
        for (p, f, g) in minor_table() {
            let d = delta_partition(&m, p);
            let want = factor_poly(f, &s1).eval(&l1, &l2) * factor_poly(g, &s2).eval(&l1, &l2);
            prop_assert_eq!(&d * &d, want, "{}", p);
        }
    }

    #[test]
    fn norm_identity_at_random_product_points(
        x1 in -0.5f64..0.5, y1 in 0.8f64..2.0, x2 in -0.5f64..0.5, y2 in 0.8f64..2.0, k in 0usize..9
    ) {
        let p = ProductPoint::new(Complex64::new(x1, y1), Complex64::new(x2, y2)).unwrap();
        let part = Partition::admissible()[k];
        let r = norm_identity_check(&p, part).unwrap();
        prop_assert!(r.residual < 1e-6, "{r:?}");
    }
}
