//! Numerical evaluation of `Φ_1`, `Φ_2` on their tube domains by truncated products.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{e8_2, m_level, IntegralLattice};
use crate::qseries::CTable;

/// A point `z ∈ M_ℓ ⊗ R + i·C⁺` in `M_ℓ` coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubePoint {
    pub level: u8,
    pub z: Vec<Complex64>,
}

impl TubePoint {
    pub fn new(level: u8, z: Vec<Complex64>) -> Result<Self> {
        let m = m_level(level)?;
        if z.len() != m.rank() {
            return Err(Error::InvalidArgument(format!("tube point needs {} coordinates", m.rank())));
        }
        let p = TubePoint { level, z };
        let y = p.im();
        if m.inner_rr(&y, &y) <= 0.0 || !cone_side(&m, &y) {
            return Err(Error::InvalidArgument("Im z is not in the positive cone C⁺".into()));
        }
        Ok(p)
    }

    pub fn re(&self) -> Vec<f64> {
        self.z.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.z.iter().map(|c| c.im).collect()
    }

    /// `⟨Im z, Im z⟩`.
    pub fn im_norm(&self) -> Result<f64> {
        let m = m_level(self.level)?;
        let y = self.im();
        Ok(m.inner_rr(&y, &y))
    }

    /// `z + λ` for a lattice vector `λ`.
    pub fn translate(&self, lambda: &[i64]) -> Result<Self> {
        let z = self.z.iter().zip(lambda).map(|(a, b)| a + *b as f64).collect();
        TubePoint::new(self.level, z)
    }
}

fn cone_side(m: &IntegralLattice, y: &[f64]) -> bool {
    let mut r = vec![0.0; m.rank()];
    r[0] = 1.0;
    r[1] = 1.0;
    m.inner_rr(y, &r) > 0.0
}

fn pair(m: &IntegralLattice, l: &[i64], z: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = z.iter().map(|c| c.re).collect();
    let im: Vec<f64> = z.iter().map(|c| c.im).collect();
    Complex64::new(m.inner_real(l, &re), m.inner_real(l, &im))
}

/// A truncated product value with a heuristic estimate of the neglected tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericValue {
    pub value: Complex64,
    /// Estimated `|Φ_true/Φ_truncated - 1|`.
    pub tail_bound: f64,
    /// Lattice vectors in the truncated product.
    pub factors: usize,
}

/// Roots `r` of `M2` with `⟨r, e1⟩ < 0` and `⟨r, Y⟩ ≥ 0` for `Y` in the positive cone.
///
/// Writing `r = a·e1 + b·f1 + v`, `v² = -2 - 2ab ≤ 0` forces `a + 2b ≤ -1`; the Gram of
/// `(Y, 2e1 + f1)` bounds that pairing.
pub fn roots_behind(y: &[f64]) -> Result<Vec<Vec<i64>>> {
    let m = m_level(2)?;
    let mut y0 = vec![0.0; m.rank()];
    y0[0] = 2.0;
    y0[1] = 1.0;
    let (yy, yy0, y0y0) = (m.inner_rr(y, y), m.inner_rr(y, &y0), m.inner_rr(&y0, &y0));
    let det = yy * y0y0 - yy0 * yy0;
    if det >= -1e-12 {
        return Ok(Vec::new());
    }
    let kmax = ((2.0 * -det) / yy).sqrt().floor() as i64;
    let e8 = e8_2();
    let mut out = Vec::new();
    for k in 1..=kmax {
        let k = -k;
        // a = k - 2b and ab ≥ -1 give 2b² - kb - 1 ≤ 0
        let disc = ((k * k + 8) as f64).sqrt();
        let blo = ((k as f64 - disc) / 4.0).ceil() as i64;
        for b in blo..=-1 {
            let a = k - 2 * b;
            let need = -2 - 2 * a * b;
            if need > 0 || need % 4 != 0 {
                continue;
            }
            let vs: Vec<Vec<i64>> = if need == 0 {
                vec![vec![0; 8]]
            } else {
                let mut v = Vec::new();
                for s in e8.short_vectors(-need)? {
                    if e8.norm(&s)? == need {
                        v.push(s.iter().map(|x| -x).collect());
                        v.push(s);
                    }
                }
                v
            };
            for v in vs {
                let mut r = vec![a, b];
                r.extend(v);
                if m.inner_real(&r, y) >= 0.0 {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `Φ_ℓ(z)` from its product expansion over lattice vectors with `⟨λ, Im z⟩ ≤ cutoff`.
///
/// The tail estimate extrapolates the last unit-height shells geometrically; a
/// non-decreasing shell sequence is refused as non-convergent.
pub fn eval_numeric(p: &TubePoint, cutoff: f64) -> Result<NumericValue> {
    let m = m_level(p.level)?;
    let y = p.im();
    let yy = m.inner_rr(&y, &y);
    let min_norm = if p.level == 1 { 0 } else { -2 };
    let vectors = m.majorant_points(&y, cutoff, min_norm)?;
    let max_half = vectors.iter().map(|v| m.norm(v).map(|n| n / 2)).collect::<Result<Vec<_>>>()?;
    let ctab = CTable::new(max_half.iter().copied().max().unwrap_or(0).max(1))?;
    let shells = cutoff.ceil().max(1.0) as usize;
    let mut shell_mass = vec![0.0f64; shells + 1];
    let mut log = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    let pi_i = Complex64::new(0.0, std::f64::consts::PI);
    let mut add = |lam: &[i64], half: i64, log: &mut Complex64, count: &mut usize| -> Result<()> {
        let c = ctab.get(half)? as f64;
        if c == 0.0 {
            return Ok(());
        }
        let t = pair(&m, lam, &p.z);
        let term = if p.level == 1 {
            let x = (pi_i * t).exp();
            c * ((1.0 - x).ln() - (1.0 + x).ln())
        } else {
            let x = (2.0 * pi_i * t).exp();
            let sign = if (lam[0] - lam[1]).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            sign * c * (1.0 - x).ln()
        };
        *log += term;
        *count += 1;
        let h = t.im.max(0.0);
        let idx = (h.floor() as usize).min(shells);
        shell_mass[idx] += term.norm();
        Ok(())
    };
    for (lam, half) in vectors.iter().zip(&max_half) {
        if p.level == 2 && *half == -1 && lam[1] <= 0 {
            continue;
        }
        add(lam, *half, &mut log, &mut count)?;
    }
    if p.level == 2 {
        for r in roots_behind(&y)? {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            add(&neg, -1, &mut log, &mut count)?;
        }
    }
    let value = if p.level == 1 {
        log.exp()
    } else {
        // 2^8 e^{2πi⟨e1, w⟩}; ⟨e1, w⟩ is the f1-coordinate
        256.0 * (2.0 * pi_i * p.z[1]).exp() * log.exp()
    };
    let tail_bound = tail_estimate(&shell_mass[..shells]);
    if !tail_bound.is_finite() {
        return Err(Error::Convergence(format!(
            "shell contributions do not decay (Im z² = {yy:.3}, cutoff {cutoff}); move deeper into the cone"
        )));
    }
    Ok(NumericValue { value, tail_bound, factors: count })
}

fn tail_estimate(shells: &[f64]) -> f64 {
    let nz: Vec<f64> = shells.iter().copied().filter(|x| *x > 0.0).collect();
    match nz.len() {
        0 => 0.0,
        1 => nz[0],
        n => {
            let (prev, last) = (nz[n - 2], nz[n - 1]);
            let ratio = last / prev;
            if ratio >= 1.0 {
                f64::INFINITY
            } else {
                last * ratio / (1.0 - ratio)
            }
        }
    }
}

/// `⟨Im z, Im z⟩⁴ |Φ_ℓ(z)|²`.
pub fn petersson_sq(p: &TubePoint, cutoff: f64) -> Result<f64> {
    let v = eval_numeric(p, cutoff)?;
    Ok(p.im_norm()?.powi(4) * v.value.norm_sqr())
}

/// The level-2 point `w` with `ι_1(z)/⟨z, e2⟩ = ι_2(w)`.
pub fn level_transform(p: &TubePoint) -> Result<TubePoint> {
    if p.level != 1 {
        return Err(Error::InvalidArgument("level_transform starts from a level-1 point".into()));
    }
    let m1 = m_level(1)?;
    // ⟨z, e2⟩ = 2·(f2-coordinate)
    let tau = 2.0 * p.z[1];
    if tau.norm() == 0.0 {
        return Err(Error::InvalidArgument("⟨z, e2⟩ must be nonzero".into()));
    }
    if (-1.0 / tau).im <= 0.0 {
        return Err(Error::InvalidArgument("Im(-1/⟨z, e2⟩) must be positive".into()));
    }
    let z2 = complex_norm(&m1, &p.z);
    let mut w = vec![z2 / (2.0 * tau), -1.0 / tau];
    w.extend(p.z[2..].iter().map(|x| -x / tau));
    TubePoint::new(2, w)
}

/// `ι_ℓ(z) ∈ Λ ⊗ C` in the coordinates `[e2, f2, e1, f1, E8(2)]`.
pub fn iota(p: &TubePoint) -> Result<Vec<Complex64>> {
    let m = m_level(p.level)?;
    let (idx, e_l, f_l) = crate::lattice::level_layout(p.level)?;
    let mut out = vec![Complex64::new(0.0, 0.0); 12];
    let sgn = if p.level == 1 { 1.0 } else { -1.0 };
    for (k, i) in idx.iter().enumerate() {
        out[*i] += sgn * p.z[k];
    }
    out[e_l] += -complex_norm(&m, &p.z) / 2.0;
    out[f_l] += 1.0 / f64::from(p.level);
    Ok(out)
}

/// Bilinear `z²` for complex `z`.
pub fn complex_norm(m: &IntegralLattice, z: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (i, row) in m.gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            if *g != 0 {
                s += z[i] * z[j] * *g as f64;
            }
        }
    }
    s
}

/// Complex bilinear pairing in `Λ`.
pub fn lambda_pair(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let l = crate::lattice::lambda();
    let mut s = Complex64::new(0.0, 0.0);
    for (i, row) in l.gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            if *g != 0 {
                s += x[i] * y[j] * *g as f64;
            }
        }
    }
    s
}
