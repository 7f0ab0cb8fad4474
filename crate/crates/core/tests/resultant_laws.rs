//! Algebraic laws of the normalized resultant on random rational inputs.

use enriques_phi::resultant::{covariance_check, det3, macaulay_resultant, QuadricTriple, RationalTriple};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn matrix() -> impl Strategy<Value = [[BigRational; 3]; 3]> {
    proptest::collection::vec(rational(), 9).prop_map(|v| std::array::from_fn(|i| std::array::from_fn(|j| v[3 * i + j].clone())))
}

fn triple() -> impl Strategy<Value = RationalTriple> {
    proptest::collection::vec(rational(), 18).prop_map(|v| {
        let mut it = v.into_iter();
        let forms = std::array::from_fn(|_| {
            let mut s: [[BigRational; 3]; 3] = Default::default();
            for i in 0..3 {
                for j in i..3 {
                    let x = it.next().unwrap();
                    s[i][j] = x.clone();
                    s[j][i] = x;
                }
            }
            s
        });
        QuadricTriple { forms }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn covariance_under_combination_and_substitution(t in triple(), p in matrix()) {
        prop_assume!(!det3(&p).is_zero());
        let rep = covariance_check(&t, &p).unwrap();
        prop_assert!(rep.combination_law, "{rep:?}");
        prop_assert!(rep.substitution_law, "{rep:?}");
    }

    #[test]
    fn degree_four_in_each_form(t in triple(), c in rational(), i in 0usize..3) {
        let r = macaulay_resultant(&t).unwrap();
        let scaled = macaulay_resultant(&t.scale_form(i, &c)).unwrap();
        prop_assert_eq!(scaled, num_traits::pow(c, 4) * r);
    }

    #[test]
    fn diagonal_triples_give_det_to_the_fourth(a in matrix()) {
        let r = macaulay_resultant(&QuadricTriple::diagonal(&a)).unwrap();
        prop_assert_eq!(r, num_traits::pow(det3(&a), 4));
    }

    #[test]
    fn shared_zero_forces_vanishing(t in triple(), x in (1i64..4, -3i64..4, -3i64..4)) {
        // shift each form's x1² coefficient so that Q_i(x) = 0
        let x = [x.0, x.1, x.2];
        let mut t = t;
        for s in t.forms.iter_mut() {
            let mut v = BigRational::zero();
            for i in 0..3 {
                for j in 0..3 {
                    if (i, j) != (0, 0) {
                        v += &s[i][j] * BigInt::from(x[i] * x[j]);
                    }
                }
            }
            s[0][0] = -v / BigInt::from(x[0] * x[0]);
        }
        prop_assert!(macaulay_resultant(&t).unwrap().is_zero());
    }
}

#[test]
fn unit_triple_is_normalized() {
    assert_eq!(macaulay_resultant(&RationalTriple::unit()).unwrap(), q(1, 1));
}
