//! Genus-2 Riemann theta constants `θ_{a,b}(T)` with half-integer characteristics.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{GaussInt, MultiSeries};

/// Exponent denominator of single genus-2 theta series.
pub const THETA2_DEN: i64 = 4;

/// A characteristic `(a, b)` with `a, b ∈ {0, 1/2}²`, stored as bits (1 means 1/2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Char2 {
    pub a: [u8; 2],
    pub b: [u8; 2],
}

impl Char2 {
    pub fn new(a: [u8; 2], b: [u8; 2]) -> Result<Self> {
        if a.iter().chain(&b).any(|x| *x > 1) {
            return Err(Error::InvalidArgument("characteristic bits must be 0 or 1".into()));
        }
        Ok(Char2 { a, b })
    }

    /// `4·aᵀb mod 2`.
    pub fn parity(&self) -> u8 {
        (self.a[0] * self.b[0] + self.a[1] * self.b[1]) % 2
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 0
    }

    /// All sixteen characteristics in lexicographic order.
    pub fn all() -> Vec<Char2> {
        let mut v = Vec::with_capacity(16);
        for m in 0..16u8 {
            v.push(Char2 { a: [m >> 3 & 1, m >> 2 & 1], b: [m >> 1 & 1, m & 1] });
        }
        v
    }

    /// The ten even characteristics.
    pub fn even() -> Vec<Char2> {
        Self::all().into_iter().filter(Char2::is_even).collect()
    }
}

impl fmt::Display for Char2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = |x: u8| if x == 1 { "1/2" } else { "0" };
        write!(f, "[{} {}; {} {}]", h(self.a[0]), h(self.a[1]), h(self.b[0]), h(self.b[1]))
    }
}

/// `θ_{a,b}(T)` as a series in `q_mn = e^{πiT_mn}` with denominator 4.
///
/// A term with `x = n + a` contributes `q11^{x1²} q12^{2x1x2} q22^{x2²} e^{2πi x·b}`.
pub fn theta2_series(ch: Char2, order: i64) -> Result<MultiSeries> {
    if order < 1 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let bound = order * THETA2_DEN;
    let mut s = MultiSeries::zero(THETA2_DEN, order)?;
    let xmax = (bound as f64).sqrt().ceil() as i64 + 1;
    for x1 in -xmax..=xmax {
        if (x1 - i64::from(ch.a[0])).rem_euclid(2) != 0 {
            continue;
        }
        for x2 in -xmax..=xmax {
            if (x2 - i64::from(ch.a[1])).rem_euclid(2) != 0 {
                continue;
            }
            // X = 2x; exponents over q^{1/4}
            let e = (x1 * x1, 2 * x1 * x2, x2 * x2);
            if e.0 + e.2 >= bound {
                continue;
            }
            let phase = GaussInt::i_pow(x1 * i64::from(ch.b[0]) + x2 * i64::from(ch.b[1]));
            let cur = s.coeff(e);
            s.set(e, cur.checked_add(phase)?)?;
        }
    }
    Ok(s)
}

/// `θ_{a,b}(T)^8` over `q^{1/2}`, the exponent scheme of restricted expansions.
pub fn theta2_pow8(ch: Char2, order: i64) -> Result<MultiSeries> {
    if !ch.is_even() {
        return Err(Error::InvalidArgument(format!("characteristic {ch} is odd")));
    }
    let t = theta2_series(ch, order)?;
    let t2 = t.mul(&t)?;
    let t4 = t2.mul(&t2)?;
    let t8 = t4.mul(&t4)?;
    if let Some((e, c)) = t8.terms().find(|(_, c)| c.im != 0) {
        return Err(Error::InvalidArgument(format!("θ^8 coefficient {c} at {e:?} is not rational")));
    }
    t8.with_den(2)
}

/// A point of the Siegel upper half space of degree 2.
pub type Siegel = [[Complex64; 2]; 2];

/// Smallest eigenvalue of a real symmetric 2×2 matrix.
pub(crate) fn min_eig_sym(a: f64, b: f64, d: f64) -> f64 {
    ((a + d) - ((a - d) * (a - d) + 4.0 * b * b).sqrt()) / 2.0
}

pub fn check_siegel(t: &Siegel) -> Result<f64> {
    if (t[0][1] - t[1][0]).norm() > 1e-14 * (1.0 + t[0][1].norm()) {
        return Err(Error::InvalidArgument("T must be symmetric".into()));
    }
    let mu = min_eig_sym(t[0][0].im, t[0][1].im, t[1][1].im);
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument("Im T must be positive definite".into()));
    }
    Ok(mu)
}

/// Numerical `θ_{a,b}(T)` by a box-truncated lattice sum.
pub fn theta2(ch: Char2, t: &Siegel) -> Result<Complex64> {
    let mu = check_siegel(t)?;
    // |term| ≤ e^{-π μ |x|²}; drop below 1e-18
    let r = (41.5 / (std::f64::consts::PI * mu)).sqrt() + 1.0;
    let nmax = r.ceil() as i64;
    let (a1, a2) = (f64::from(ch.a[0]) / 2.0, f64::from(ch.a[1]) / 2.0);
    let (b1, b2) = (f64::from(ch.b[0]) / 2.0, f64::from(ch.b[1]) / 2.0);
    let pi_i = Complex64::i() * std::f64::consts::PI;
    let mut sum = Complex64::new(0.0, 0.0);
    for n1 in -nmax..=nmax {
        for n2 in -nmax..=nmax {
            let x1 = n1 as f64 + a1;
            let x2 = n2 as f64 + a2;
            let quad = t[0][0] * x1 * x1 + t[0][1] * 2.0 * x1 * x2 + t[1][1] * x2 * x2;
            sum += (pi_i * (quad + 2.0 * (x1 * b1 + x2 * b2))).exp();
        }
    }
    Ok(sum)
}

/// `(det Im T)^{1/2} |θ_{a,b}(T)|²`.
pub fn theta2_petersson_sq(ch: Char2, t: &Siegel) -> Result<f64> {
    let th = theta2(ch, t)?;
    let det = t[0][0].im * t[1][1].im - t[0][1].im * t[0][1].im;
    Ok(det.sqrt() * th.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::genus1::{theta1, Char1};

    #[test]
    fn ten_even_characteristics() {
        assert_eq!(Char2::even().len(), 10);
    }

    #[test]
    fn constant_term_of_zero_characteristic() {
        let s = theta2_pow8(Char2::new([0, 0], [0, 0]).unwrap(), 3).unwrap();
        assert_eq!(s.coeff((0, 0, 0)), GaussInt::ONE);
    }

    #[test]
    fn diagonal_numeric_factors() {
        let t1 = Complex64::new(0.2, 1.1);
        let t2 = Complex64::new(-0.4, 0.9);
        let z = Complex64::new(0.0, 0.0);
        let t = [[t1, z], [z, t2]];
        let ch = Char2::new([1, 0], [0, 1]).unwrap();
        let lhs = theta2(ch, &t).unwrap();
        let rhs = theta1(Char1::Two, t1).unwrap() * theta1(Char1::Zero, t2).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
