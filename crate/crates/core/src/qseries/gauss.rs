//! Gaussian integers with overflow-checked arithmetic.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `re + i·im` of `Z[i]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub const fn from_int(re: i128) -> Self {
        GaussInt { re, im: 0 }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussInt::new(1, 0),
            1 => GaussInt::new(0, 1),
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(&self) -> bool {
        self.re.abs() + self.im.abs() == 1
    }

    pub fn conj(&self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn checked_add(self, o: Self) -> Result<Self> {
        Ok(GaussInt::new(
            self.re.checked_add(o.re).ok_or(Error::Overflow("gaussian add"))?,
            self.im.checked_add(o.im).ok_or(Error::Overflow("gaussian add"))?,
        ))
    }

    pub fn checked_sub(self, o: Self) -> Result<Self> {
        Ok(GaussInt::new(
            self.re.checked_sub(o.re).ok_or(Error::Overflow("gaussian sub"))?,
            self.im.checked_sub(o.im).ok_or(Error::Overflow("gaussian sub"))?,
        ))
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(GaussInt::new(
            self.re.checked_neg().ok_or(Error::Overflow("gaussian neg"))?,
            self.im.checked_neg().ok_or(Error::Overflow("gaussian neg"))?,
        ))
    }

    pub fn checked_mul(self, o: Self) -> Result<Self> {
        let ov = || Error::Overflow("gaussian mul");
        let rr = self.re.checked_mul(o.re).ok_or_else(ov)?;
        let ii = self.im.checked_mul(o.im).ok_or_else(ov)?;
        let ri = self.re.checked_mul(o.im).ok_or_else(ov)?;
        let ir = self.im.checked_mul(o.re).ok_or_else(ov)?;
        Ok(GaussInt::new(
            rr.checked_sub(ii).ok_or_else(ov)?,
            ri.checked_add(ir).ok_or_else(ov)?,
        ))
    }

    pub fn checked_scale(self, k: i128) -> Result<Self> {
        let ov = || Error::Overflow("gaussian scale");
        Ok(GaussInt::new(
            self.re.checked_mul(k).ok_or_else(ov)?,
            self.im.checked_mul(k).ok_or_else(ov)?,
        ))
    }

    /// Exact division by a unit (`±1`, `±i`).
    pub fn div_unit(self, u: Self) -> Result<Self> {
        if !u.is_unit() {
            return Err(Error::InvalidArgument(format!("{u} is not a unit")));
        }
        // u^{-1} = conj(u) for units
        self.checked_mul(u.conj())
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, i) => write!(f, "{i}i"),
            (r, i) if i < 0 => write!(f, "{r}-{}i", -i),
            (r, i) => write!(f, "{r}+{i}i"),
        }
    }
}

/// Generalized binomial coefficients `C(k, j)` for `j = 0..=jmax`, any integer `k`.
pub fn binomials(k: i128, jmax: usize) -> Result<Vec<i128>> {
    let mut out = Vec::with_capacity(jmax + 1);
    let mut c: i128 = 1;
    out.push(c);
    for j in 0..jmax as i128 {
        // C(k, j+1) = C(k, j) (k - j) / (j + 1), exact at every step
        let num = c
            .checked_mul(k - j)
            .ok_or(Error::Overflow("binomial"))?;
        c = num / (j + 1);
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_powers_cycle() {
        assert_eq!(GaussInt::i_pow(0), GaussInt::ONE);
        assert_eq!(GaussInt::i_pow(5), GaussInt::I);
        assert_eq!(GaussInt::i_pow(-1), GaussInt::new(0, -1));
        assert_eq!(GaussInt::i_pow(2).checked_mul(GaussInt::i_pow(2)).unwrap(), GaussInt::ONE);
    }

    #[test]
    fn overflow_is_reported() {
        let big = GaussInt::new(i128::MAX / 2 + 1, 0);
        assert!(big.checked_add(big).is_err());
        assert!(big.checked_mul(GaussInt::new(3, 0)).is_err());
    }

    #[test]
    fn binomials_negative_exponent() {
        // (1+x)^{-2} = 1 - 2x + 3x^2 - 4x^3
        assert_eq!(binomials(-2, 3).unwrap(), vec![1, -2, 3, -4]);
        assert_eq!(binomials(4, 5).unwrap(), vec![1, 4, 6, 4, 1, 0]);
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussInt::new(3, -2).to_string(), "3-2i");
        assert_eq!(GaussInt::new(0, 5).to_string(), "5i");
    }
}
