//! Periods of the holomorphic 2-form on product-type Kummer (2,2,2) models,
//! in closed form and by Monte-Carlo quadrature over the uniformizing torus.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{jacobi_theta, lambda_eval, theta1, Char1};

/// A pair of elliptic curves `C/(Z + τ_i Z)` with their Legendre parameters `λ_i = θ2⁴/θ3⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductPoint {
    pub tau1: Complex64,
    pub tau2: Complex64,
}

impl ProductPoint {
    pub fn new(tau1: Complex64, tau2: Complex64) -> Result<Self> {
        let p = ProductPoint { tau1, tau2 };
        for l in [p.lambda1()?, p.lambda2()?] {
            if !l.is_finite() || l.norm() < 1e-12 || (l - 1.0).norm() < 1e-12 {
                return Err(Error::InvalidArgument(format!("λ = {l} is degenerate")));
            }
        }
        Ok(p)
    }

    pub fn lambda1(&self) -> Result<Complex64> {
        lambda_eval(self.tau1)
    }

    pub fn lambda2(&self) -> Result<Complex64> {
        lambda_eval(self.tau2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodQuantities {
    /// `c` with `f*ω = c·dz1∧dz2`.
    pub pullback_const: Complex64,
    /// `∫_{γ3×γ4} ω`.
    pub gamma34_integral: Complex64,
    /// `|∫_X ω∧ω̄|`.
    pub integral_x: f64,
}

/// Closed forms: `c = (π²/8)θ3(τ1)²θ3(τ2)²`, `∫_{γ3×γ4} ω = 4c`, and
/// `|∫_X ω∧ω̄| = |c|²·(8 Im τ1)(8 Im τ2)/2`. Each torus `C/(2Z + 2τZ)` has area
/// `4 Im τ`, `|dz∧dz̄| = 2 dx∧dy`, and the uniformization has degree 2.
pub fn period_quantities(p: &ProductPoint) -> Result<PeriodQuantities> {
    let t = theta1(Char1::Three, p.tau1)?.powi(2) * theta1(Char1::Three, p.tau2)?.powi(2);
    let c = PI * PI / 8.0 * t;
    Ok(PeriodQuantities {
        pullback_const: c,
        gamma34_integral: PI * PI / 2.0 * t,
        integral_x: PI.powi(4) / 2.0 * t.norm_sqr() * p.tau1.im * p.tau2.im,
    })
}

/// `(sn, cn, dn)(πθ3²z)` for modulus `k² = λ(τ)`, through Jacobi thetas.
pub fn sn_cn_dn(z: Complex64, tau: Complex64) -> Result<[Complex64; 3]> {
    let v = PI * z;
    let t2 = theta1(Char1::Two, tau)?;
    let t3 = theta1(Char1::Three, tau)?;
    let t4 = theta1(Char1::Zero, tau)?;
    let j = |k: u8| jacobi_theta(k, v, tau);
    let d4 = j(4)?;
    Ok([t3 / t2 * j(1)? / d4, t4 / t2 * j(2)? / d4, t4 / t3 * j(3)? / d4])
}

/// Affine coordinates `(x1, x2, y0, y1, y2)` (with `x0 = 1`) of the image of `(z1, z2)`.
pub fn uniformize(p: &ProductPoint, z1: Complex64, z2: Complex64) -> Result<[Complex64; 5]> {
    let [s1, c1, d1] = sn_cn_dn(z1, p.tau1)?;
    let [s2, c2, d2] = sn_cn_dn(z2, p.tau2)?;
    let y0 = s1 / s2;
    Ok([c1, d1, y0, y0 * c2, y0 * d2])
}

/// Residuals of the three quadrics `Σ_j M_ij X_j²` at an affine point.
pub fn model_residuals(p: &ProductPoint, x: &[Complex64; 5]) -> Result<[Complex64; 3]> {
    let (l1, l2) = (p.lambda1()?, p.lambda2()?);
    let [x1, x2, y0, y1, y2] = x.map(|c| c * c);
    Ok([(l1 - 1.0) - l1 * x1 + x2, l2 - l2 * x1 - y0 + y2, 1.0 - x1 - y0 + y1])
}

/// Coefficient of `dz1∧dz2` in the pullback of the residue form
/// `ω = dx1∧dy0 / (8 x2 y1 y2)`, by central differences.
pub fn pullback_density(p: &ProductPoint, z1: Complex64, z2: Complex64, h: f64) -> Result<Complex64> {
    let at = |a: Complex64, b: Complex64| uniformize(p, a, b);
    let x = at(z1, z2)?;
    let d1p = at(z1 + h, z2)?;
    let d1m = at(z1 - h, z2)?;
    let d2p = at(z1, z2 + h)?;
    let d2m = at(z1, z2 - h)?;
    let dx1_1 = (d1p[0] - d1m[0]) / (2.0 * h);
    let dy0_1 = (d1p[2] - d1m[2]) / (2.0 * h);
    let dx1_2 = (d2p[0] - d2m[0]) / (2.0 * h);
    let dy0_2 = (d2p[2] - d2m[2]) / (2.0 * h);
    Ok((dx1_1 * dy0_2 - dx1_2 * dy0_1) / (8.0 * x[1] * x[3] * x[4]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub seed: u64,
    pub samples: usize,
    /// Samples discarded for lying next to a pole or zero of the coordinates.
    pub rejected: usize,
    /// Largest number of 2-torsion affine images `±z + h` sharing one point of the model.
    pub fiber_size: u32,
    pub estimate: f64,
    pub std_error: f64,
    /// Largest `|(density − c)/c|` seen, against the closed-form pullback constant.
    pub max_density_dev: f64,
}

const FIBER_PROBES: usize = 8;

/// Monte-Carlo estimate of `|∫_X ω∧ω̄|`, sampling the torus uniformly and
/// dividing by the fiber size observed among 2-torsion affine maps.
pub fn monte_carlo_integral(p: &ProductPoint, samples: usize, seed: u64) -> Result<MonteCarloReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let c = period_quantities(p)?.pullback_const;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell = |a: f64, b: f64, tau: Complex64| 2.0 * (a - 0.5) + 2.0 * (b - 0.5) * tau;
    let (mut sum, mut sum2, mut used, mut rejected) = (0.0, 0.0, 0usize, 0usize);
    let mut max_dev: f64 = 0.0;
    let mut fiber = 0u32;
    while used < samples {
        let z1 = cell(rng.gen(), rng.gen(), p.tau1);
        let z2 = cell(rng.gen(), rng.gen(), p.tau2);
        let x = uniformize(p, z1, z2)?;
        let big = x.iter().any(|v| !v.is_finite() || v.norm() > 1e3);
        if big || (x[1] * x[3] * x[4]).norm() < 1e-6 {
            rejected += 1;
            if rejected > 10 * samples {
                return Err(Error::Convergence("too many samples near singular points".into()));
            }
            continue;
        }
        let g = pullback_density(p, z1, z2, 1e-5)?;
        max_dev = max_dev.max(((g.norm() - c.norm()) / c.norm()).abs());
        let w = g.norm_sqr();
        sum += w;
        sum2 += w * w;
        if used < FIBER_PROBES {
            fiber = fiber.max(fiber_count(p, z1, z2, &x)?);
        }
        used += 1;
    }
    if fiber == 0 {
        return Err(Error::Convergence("fiber probe found no preimage".into()));
    }
    let n = used as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    let volume = 64.0 * p.tau1.im * p.tau2.im / f64::from(fiber);
    Ok(MonteCarloReport {
        seed,
        samples: used,
        rejected,
        fiber_size: fiber,
        estimate: mean * volume,
        std_error: (var / n).sqrt() * volume,
        max_density_dev: max_dev,
    })
}

fn fiber_count(p: &ProductPoint, z1: Complex64, z2: Complex64, x: &[Complex64; 5]) -> Result<u32> {
    let halves = |tau: Complex64| [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), tau, 1.0 + tau];
    let scale = x.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let mut count = 0;
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for h1 in halves(p.tau1) {
                for h2 in halves(p.tau2) {
                    let y = uniformize(p, s1 * z1 + h1, s2 * z2 + h2)?;
                    if x.iter().zip(&y).all(|(a, b)| (a - b).norm() < 1e-8 * scale) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt() -> ProductPoint {
        ProductPoint::new(Complex64::new(0.0, 1.1), Complex64::new(0.9, 1.3)).unwrap()
    }

    #[test]
    fn uniformization_lands_on_the_model() {
        let p = pt();
        for (a, b) in [(0.13, 0.41), (-0.37, 0.22), (0.71, -0.6)] {
            let z1 = Complex64::new(a, b);
            let z2 = Complex64::new(b, a);
            let x = uniformize(&p, z1, z2).unwrap();
            for r in model_residuals(&p, &x).unwrap() {
                assert!(r.norm() < 1e-10, "{r}");
            }
        }
    }

    #[test]
    fn density_is_the_pullback_constant() {
        let p = pt();
        let c = period_quantities(&p).unwrap().pullback_const;
        let g = pullback_density(&p, Complex64::new(0.31, 0.2), Complex64::new(-0.4, 0.5), 1e-5).unwrap();
        assert!((g.norm() - c.norm()).abs() < 1e-7 * c.norm());
    }

    #[test]
    fn gamma34_at_i() {
        let i = Complex64::new(0.0, 1.0);
        let q = period_quantities(&ProductPoint::new(i, i).unwrap()).unwrap();
        let t3 = crate::theta::theta1_product(Char1::Three, i).unwrap();
        assert!((q.gamma34_integral - PI * PI / 2.0 * t3.powi(4)).norm() < 1e-12);
    }
}
