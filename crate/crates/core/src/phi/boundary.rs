//! Boundary values of `Φ_1` and `Φ_2` at the level-1 and level-2 cusps.

use crate::error::{Error, Result};
use crate::qseries::{factor_power, ExactSeries, GaussInt};

/// `∏_{n>0} ((1 - qⁿ)/(1 + qⁿ))⁸` in `q = e^{πiτ}`.
pub fn phi1_boundary(order: i64) -> Result<ExactSeries> {
    if order < 1 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let mut s = ExactSeries::one(1, order)?;
    for n in 1..order {
        s = s.mul(&factor_power(n, -1, 8, order)?)?;
        s = s.mul(&factor_power(n, 1, -8, order)?)?;
    }
    Ok(s)
}

/// `2⁸ q² ∏_{n>0} (1 - q^{2n})^{8(-1)ⁿ}` in `q = e^{πiσ}`.
pub fn phi2_boundary(order: i64) -> Result<ExactSeries> {
    if order < 2 {
        return Err(Error::InvalidArgument("order must be at least 2".into()));
    }
    let mut s = ExactSeries::one(1, order)?;
    let mut n = 1;
    while 2 * n < order {
        let k = if n % 2 == 0 { 8 } else { -8 };
        s = s.mul(&factor_power(2 * n, -1, k, order)?)?;
        n += 1;
    }
    s.scale(GaussInt::from_int(256))?.shift(2).map(|x| x.truncate(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level1_leading_terms() {
        let s = phi1_boundary(5).unwrap();
        assert_eq!(s.coeff(0), GaussInt::ONE);
        assert_eq!(s.coeff(1), GaussInt::from_int(-16));
    }

    #[test]
    fn level2_leading_terms() {
        let s = phi2_boundary(6).unwrap();
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.coeff(2), GaussInt::from_int(256));
        assert_eq!(s.coeff(4), GaussInt::from_int(2048));
    }
}
