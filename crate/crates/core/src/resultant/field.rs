//! The two coefficient fields the resultant runs over: exact rationals and
//! double-precision complex numbers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Field operations needed by fraction-free elimination.
pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(x: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division by a nonzero element; exact in the rational case.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Pivot preference: larger is better; only compared among nonzero candidates.
    fn pivot_score(&self) -> f64;
    /// Whether a value is indistinguishable from zero next to inputs of size `scale`.
    fn negligible(&self, scale: f64) -> bool;
    /// Approximate absolute value.
    fn abs_f64(&self) -> f64;

    fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn pivot_score(&self) -> f64 {
        // exact pivots only need to be nonzero; prefer small heights for speed
        let h = self.numer().abs().bits() + self.denom().bits();
        -(h as f64)
    }
    fn negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
    fn abs_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(x: i64) -> Self {
        Complex64::new(x as f64, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }
    fn pivot_score(&self) -> f64 {
        self.norm()
    }
    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= 1e-9 * scale
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}

/// Determinant by Bareiss elimination with row pivoting.
///
/// Every intermediate entry is a minor of the input, so over the rationals the
/// divisions are exact and entries stay small.
pub fn det<T: Scalar>(m: &[Vec<T>]) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .max_by(|&i, &j| a[i][k].pivot_score().total_cmp(&a[j][k].pivot_score()).then(j.cmp(&i)));
        let Some(p) = pivot else {
            return T::zero();
        };
        if p != k {
            a.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div(&prev);
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_i64(x)
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![vec![q(2), q(-1), q(3)], vec![q(0), q(4), q(1)], vec![q(5), q(2), q(-2)]];
        // 2(-8-2) + 1(0-5) + 3(0-20)
        assert_eq!(det(&m), q(-85));
    }

    #[test]
    fn zero_first_pivot_is_swapped() {
        let m = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(det(&m), q(-1));
        let c: Vec<Vec<Complex64>> = m.iter().map(|r| r.iter().map(|_| <Complex64 as Scalar>::zero()).collect()).collect();
        assert!(Scalar::is_zero(&det(&c)));
    }
}
