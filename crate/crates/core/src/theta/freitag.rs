//! Freitag theta constants `Θ_{[a,b]}` on the type `I_{2,2}` domain, with
//! characteristics in `(Z[i]/(1+i))⁴`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::genus2::Char2;
use crate::error::{Error, Result};

/// An element of `Ev`: entries of `a`, `b` are `0` or `i` modulo `1+i` (stored as bits).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EvChar {
    pub a: [u8; 2],
    pub b: [u8; 2],
}

impl EvChar {
    /// Rejects pairs with `a·b̄ ≢ 0 mod (1+i)`.
    pub fn new(a: [u8; 2], b: [u8; 2]) -> Result<Self> {
        if a.iter().chain(&b).any(|x| *x > 1) {
            return Err(Error::InvalidArgument("Ev entries must be 0 or i".into()));
        }
        let e = EvChar { a, b };
        if !e.is_member() {
            return Err(Error::InvalidArgument(format!("{e} is not in Ev")));
        }
        Ok(e)
    }

    fn is_member(&self) -> bool {
        // i·conj(i) = 1, so a·b̄ counts the shared i-entries
        (self.a[0] * self.b[0] + self.a[1] * self.b[1]) % 2 == 0
    }

    /// The ten classes in lexicographic order.
    pub fn all() -> Vec<EvChar> {
        (0..16u8)
            .map(|m| EvChar { a: [m >> 3 & 1, m >> 2 & 1], b: [m >> 1 & 1, m & 1] })
            .filter(EvChar::is_member)
            .collect()
    }

    /// `(ℜ(a/(1+i)), ℜ(b/(1+i)))`; since `i/(1+i) = (1+i)/2`, both parts equal the bit over 2.
    pub fn real_char(&self) -> Char2 {
        Char2 { a: self.a, b: self.b }
    }

    /// `(ℑ(a/(1+i)), ℑ(b/(1+i)))`.
    pub fn imag_char(&self) -> Char2 {
        Char2 { a: self.a, b: self.b }
    }
}

impl fmt::Display for EvChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = |x: u8| if x == 1 { "i" } else { "0" };
        write!(f, "[{}{}; {}{}]", h(self.a[0]), h(self.a[1]), h(self.b[0]), h(self.b[1]))
    }
}

/// A point `Ω` of `{Ω ∈ M_2(C) : (Ω − Ω̄ᵗ)/2i > 0}`.
pub type Hermitian22 = [[Complex64; 2]; 2];

/// `H = (Ω − Ω̄ᵗ)/2i` as `(h11, h12, h22)` with `h11, h22` real.
fn imaginary_part(om: &Hermitian22) -> (f64, Complex64, f64) {
    let two_i = Complex64::new(0.0, 2.0);
    let h11 = (om[0][0] - om[0][0].conj()) / two_i;
    let h12 = (om[0][1] - om[1][0].conj()) / two_i;
    let h22 = (om[1][1] - om[1][1].conj()) / two_i;
    (h11.re, h12, h22.re)
}

fn check_domain(om: &Hermitian22) -> Result<f64> {
    let (a, b, d) = imaginary_part(om);
    let mu = ((a + d) - ((a - d) * (a - d) + 4.0 * b.norm_sqr()).sqrt()) / 2.0;
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument("(Ω − Ω̄ᵗ)/2i must be positive definite".into()));
    }
    Ok(mu)
}

/// `Θ_{[a,b]}(Ω) = Σ_{n ∈ Z[i]²} e[vΩv̄ᵗ/2 + ℜ(v·b̄'ᵗ)]`, `v = n + a/(1+i)`, `b' = b/(1+i)`.
///
/// The box radius is chosen so every dropped term is below `1e-18` in absolute value.
pub fn freitag_theta(ev: EvChar, om: &Hermitian22) -> Result<Complex64> {
    let mu = check_domain(om)?;
    let r = (41.5 / (std::f64::consts::PI * mu)).sqrt() + 1.0;
    let nmax = r.ceil() as i64;
    let half = Complex64::new(0.5, 0.5);
    let shift = [half * f64::from(ev.a[0]), half * f64::from(ev.a[1])];
    let bp = [half * f64::from(ev.b[0]), half * f64::from(ev.b[1])];
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut sum = Complex64::new(0.0, 0.0);
    for p in -nmax..=nmax {
        for q in -nmax..=nmax {
            let v0 = Complex64::new(p as f64, q as f64) + shift[0];
            for s in -nmax..=nmax {
                for t in -nmax..=nmax {
                    let v1 = Complex64::new(s as f64, t as f64) + shift[1];
                    let quad = v0 * om[0][0] * v0.conj()
                        + v0 * om[0][1] * v1.conj()
                        + v1 * om[1][0] * v0.conj()
                        + v1 * om[1][1] * v1.conj();
                    let lin = (v0 * bp[0].conj() + v1 * bp[1].conj()).re;
                    sum += (two_pi_i * (quad / 2.0 + lin)).exp();
                }
            }
        }
    }
    Ok(sum)
}

/// `det((Ω − Ω̄ᵗ)/2i)·|Θ|²`.
pub fn freitag_petersson_sq(ev: EvChar, om: &Hermitian22) -> Result<f64> {
    let (a, b, d) = imaginary_part(om);
    let th = freitag_theta(ev, om)?;
    Ok((a * d - b.norm_sqr()) * th.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::genus2::theta2;

    #[test]
    fn ten_classes() {
        assert_eq!(EvChar::all().len(), 10);
        assert!(EvChar::new([1, 0], [1, 0]).is_err());
    }

    #[test]
    fn siegel_points_give_squares() {
        let t = [
            [Complex64::new(0.1, 1.2), Complex64::new(0.3, 0.4)],
            [Complex64::new(0.3, 0.4), Complex64::new(-0.2, 1.0)],
        ];
        for ev in EvChar::all() {
            let big = freitag_theta(ev, &t).unwrap();
            let th = theta2(ev.real_char(), &t).unwrap();
            assert!((big - th * th).norm() < 1e-10 * (1.0 + big.norm()), "{ev}: {big} vs {}", th * th);
        }
    }
}
