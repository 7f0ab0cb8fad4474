//! Genus-1 theta constants `θ0, θ2, θ3` in `q = e^{πiτ}` and the modular lambda function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{factor_power, ExactSeries, GaussInt};

/// Exponent denominator of genus-1 theta series (`θ2` starts at `q^{1/4}`).
pub const THETA1_DEN: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Char1 {
    Zero,
    Two,
    Three,
}

impl Char1 {
    pub const ALL: [Char1; 3] = [Char1::Zero, Char1::Two, Char1::Three];

    pub fn kind(self) -> u8 {
        match self {
            Char1::Zero => 0,
            Char1::Two => 2,
            Char1::Three => 3,
        }
    }

    pub fn from_kind(k: u8) -> Result<Self> {
        match k {
            0 => Ok(Char1::Zero),
            2 => Ok(Char1::Two),
            3 => Ok(Char1::Three),
            _ => Err(Error::InvalidArgument(format!("theta kind {k} is not one of 0, 2, 3"))),
        }
    }
}

/// Product form, over `q^{1/4}`.
pub fn theta1_series(ch: Char1, order: i64) -> Result<ExactSeries> {
    if order < 1 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let mut acc = ExactSeries::one(1, order)?;
    for n in 1..=order {
        acc = acc.mul(&factor_power(2 * n, -1, 1, order)?)?;
        let extra = match ch {
            Char1::Zero => factor_power(2 * n - 1, -1, 2, order)?,
            Char1::Three => factor_power(2 * n - 1, 1, 2, order)?,
            Char1::Two => factor_power(2 * n, 1, 2, order)?,
        };
        acc = acc.mul(&extra)?;
    }
    let acc = acc.with_den(THETA1_DEN)?;
    match ch {
        Char1::Two => acc.shift(1)?.scale(GaussInt::from_int(2)),
        _ => Ok(acc),
    }
}

/// Sum form `Σ (±1)^n q^{(n+a)²}`, over `q^{1/4}`.
pub fn theta1_sum_series(ch: Char1, order: i64) -> Result<ExactSeries> {
    let bound = order * THETA1_DEN;
    let mut s = ExactSeries::zero(THETA1_DEN, order)?;
    let nmax = (order as f64).sqrt() as i64 + 2;
    for n in -nmax..=nmax {
        let (e, c) = match ch {
            Char1::Three => (4 * n * n, 1),
            Char1::Zero => (4 * n * n, if n % 2 == 0 { 1 } else { -1 }),
            Char1::Two => ((2 * n + 1) * (2 * n + 1), 1),
        };
        if e < bound {
            let cur = s.coeff(e);
            s.set(e, cur.checked_add(GaussInt::from_int(c))?)?;
        }
    }
    Ok(s)
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::InvalidArgument(format!("τ = {tau} is not in the upper half plane")));
    }
    Ok(())
}

/// Sum form evaluated numerically.
pub fn theta1(ch: Char1, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let a = if ch == Char1::Two { 0.5 } else { 0.0 };
    // |q^{x²}| = e^{-π Im τ x²}; stop once below 1e-18
    let xmax = (41.5 / (std::f64::consts::PI * tau.im)).sqrt() + 1.0;
    let nmax = xmax.ceil() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -nmax..=nmax {
        let x = n as f64 + a;
        let sign = if ch == Char1::Zero && n % 2 != 0 { -1.0 } else { 1.0 };
        sum += sign * (Complex64::i() * std::f64::consts::PI * tau * x * x).exp();
    }
    Ok(sum)
}

/// Product form evaluated numerically; an independent cross-check of [`theta1`].
pub fn theta1_product(ch: Char1, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let q = (Complex64::i() * std::f64::consts::PI * tau).exp();
    let mut acc = Complex64::new(1.0, 0.0);
    let mut n = 1;
    loop {
        let q2n = q.powi(2 * n);
        let q2n1 = q.powi(2 * n - 1);
        let f = match ch {
            Char1::Zero => (1.0 - q2n) * (1.0 - q2n1) * (1.0 - q2n1),
            Char1::Three => (1.0 - q2n) * (1.0 + q2n1) * (1.0 + q2n1),
            Char1::Two => (1.0 - q2n) * (1.0 + q2n) * (1.0 + q2n),
        };
        acc *= f;
        if q2n1.norm() < 1e-18 || n > 100_000 {
            break;
        }
        n += 1;
    }
    if ch == Char1::Two {
        acc *= 2.0 * (Complex64::i() * std::f64::consts::PI * tau / 4.0).exp();
    }
    Ok(acc)
}

/// `λ(τ) = θ2⁴/θ3⁴`.
pub fn lambda_eval(tau: Complex64) -> Result<Complex64> {
    Ok(theta1(Char1::Two, tau)?.powi(4) / theta1(Char1::Three, tau)?.powi(4))
}

/// `θ^8` as a series in `q` with denominator 2, the exponent scheme of restricted expansions.
pub fn theta1_pow8(ch: Char1, order: i64) -> Result<ExactSeries> {
    let t = theta1_series(ch, order)?;
    let t2 = t.mul(&t)?;
    let t4 = t2.mul(&t2)?;
    t4.mul(&t4)?.with_den(2)
}

/// Jacobi `ϑ_k(v | τ)`, `k ∈ 1..=4`, in the angle normalization `ϑ3(v) = Σ q^{n²} e^{2inv}`.
pub fn jacobi_theta(k: u8, v: Complex64, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidArgument(format!("Jacobi theta index {k} is not in 1..=4")));
    }
    let pi = std::f64::consts::PI;
    let i = Complex64::i();
    // |q^{x²} e^{2ixv}| ≤ e^{-π Im τ x² + 2|x||Im v|}; stop below 1e-18 of the peak
    let shift = v.im.abs() / (pi * tau.im);
    let xmax = shift + (41.5 / (pi * tau.im)).sqrt() + 2.0;
    let nmax = xmax.ceil() as i64;
    let half = matches!(k, 1 | 2);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -nmax..=nmax {
        let x = if half { n as f64 + 0.5 } else { n as f64 };
        let sign = if matches!(k, 1 | 4) && n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        sum += sign * (i * pi * tau * x * x + 2.0 * i * x * v).exp();
    }
    Ok(if k == 1 { -i * sum } else { sum })
}

/// Dedekind `η(τ) = q^{1/24} Π (1 - qⁿ)` with `q = e^{2πiτ}`.
pub fn eta_eval(tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let q = (two_pi_i * tau).exp();
    let mut acc = (two_pi_i * tau / 24.0).exp();
    let mut qn = q;
    for _ in 0..100_000 {
        acc *= 1.0 - qn;
        if qn.norm() < 1e-18 {
            break;
        }
        qn *= q;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta2_leading_term() {
        let t = theta1_series(Char1::Two, 4).unwrap();
        assert_eq!(t.valuation(), Some(1));
        assert_eq!(t.coeff(1), GaussInt::from_int(2));
    }

    #[test]
    fn sum_and_product_agree() {
        for ch in Char1::ALL {
            assert_eq!(theta1_series(ch, 40).unwrap(), theta1_sum_series(ch, 40).unwrap());
            let tau = Complex64::new(0.3, 0.8);
            let d = theta1(ch, tau).unwrap() - theta1_product(ch, tau).unwrap();
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn jacobi_theta_constants_match() {
        let tau = Complex64::new(-0.2, 1.1);
        let z = Complex64::new(0.0, 0.0);
        let pairs = [(2, Char1::Two), (3, Char1::Three), (4, Char1::Zero)];
        for (k, ch) in pairs {
            assert!((jacobi_theta(k, z, tau).unwrap() - theta1(ch, tau).unwrap()).norm() < 1e-13);
        }
        // Jacobi's identity ϑ1' = ϑ2ϑ3ϑ4
        let h = 1e-6;
        let d = (jacobi_theta(1, Complex64::new(h, 0.0), tau).unwrap() - jacobi_theta(1, Complex64::new(-h, 0.0), tau).unwrap()) / (2.0 * h);
        let prod: Complex64 = (2..=4).map(|k| jacobi_theta(k, z, tau).unwrap()).product();
        assert!((d - prod).norm() < 1e-8 * prod.norm());
    }

    #[test]
    fn eta_eighth_power_is_theta_product() {
        // 2η(τ)³ = θ2θ3θ0
        let tau = Complex64::new(0.35, 0.9);
        let lhs = 2.0 * eta_eval(tau).unwrap().powi(3);
        let rhs: Complex64 = Char1::ALL.iter().map(|&c| theta1(c, tau).unwrap()).product();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn lambda_at_i_is_half() {
        let l = lambda_eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((l - 0.5).norm() < 1e-13);
    }
}
