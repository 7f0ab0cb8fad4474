//! Even integral lattices of signature `(1, n)` and `(0, n)`, and exact
//! enumeration of the vectors the products range over.
//!
//! Coordinates of `Λ = U(2) ⊕ U ⊕ E8(2)` are ordered `e2, f2, e1, f1` followed
//! by the eight `E8(2)` simple roots. `M1 = U(2) ⊕ E8(2)` uses `e2, f2, E8(2)`
//! and `M2 = U ⊕ E8(2)` uses `e1, f1, E8(2)`.

mod enumerate;
pub mod linalg;

use serde::{Deserialize, Serialize};

pub use enumerate::{ellipsoid_points, ellipsoid_visit, lll_reduce};
use linalg::{bilinear, column_hnf, elementary_divisors, gcd_all, signature};

use crate::error::{Error, Result};

/// Default cap on the number of vectors a single enumeration may return.
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "ENRIQUES_PHI_BUDGET";

/// Enumeration budget from the environment, or the default.
pub fn budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Standard negative definite `E8` Gram matrix (Bourbaki numbering, diagonal `-2`).
pub const E8_GRAM: [[i64; 8]; 8] = [
    [-2, 0, 1, 0, 0, 0, 0, 0],
    [0, -2, 0, 1, 0, 0, 0, 0],
    [1, 0, -2, 1, 0, 0, 0, 0],
    [0, 1, 1, -2, 1, 0, 0, 0],
    [0, 0, 0, 1, -2, 1, 0, 0],
    [0, 0, 0, 0, 1, -2, 1, 0],
    [0, 0, 0, 0, 0, 1, -2, 1],
    [0, 0, 0, 0, 0, 0, 1, -2],
];

pub const E2: usize = 0;
pub const F2: usize = 1;
pub const E1: usize = 2;
pub const F1: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralLattice {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
}

impl IntegralLattice {
    pub fn new(name: &str, gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Lattice("Gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Lattice("Gram matrix must be symmetric".into()));
                }
            }
        }
        Ok(IntegralLattice { name: name.to_string(), gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        signature(&self.gram)
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        if x.len() != self.rank() || y.len() != self.rank() {
            return Err(Error::InvalidArgument(format!("vectors must have length {}", self.rank())));
        }
        bilinear(&self.gram, x, y)
    }

    pub fn norm(&self, x: &[i64]) -> Result<i64> {
        self.inner(x, x)
    }

    /// Row `G·x`, the functional `y ↦ ⟨x, y⟩` in coordinates.
    pub fn dual_row(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rank()).map(|j| (0..self.rank()).map(|i| x[i] * self.gram[i][j]).sum()).collect()
    }

    /// Real inner product of an integral vector with a real vector.
    pub fn inner_real(&self, x: &[i64], y: &[f64]) -> f64 {
        self.dual_row(x).iter().zip(y).map(|(a, b)| *a as f64 * b).sum()
    }

    pub fn inner_rr(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                s += x[i] * *g as f64 * y[j];
            }
        }
        s
    }

    pub fn direct_sum(name: &str, parts: &[&IntegralLattice]) -> Result<Self> {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut g = vec![vec![0i64; n]; n];
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    g[off + i][off + j] = p.gram[i][j];
                }
            }
            off += p.rank();
        }
        IntegralLattice::new(name, g)
    }

    pub fn scaled(&self, name: &str, k: i64) -> Result<Self> {
        IntegralLattice::new(name, self.gram.iter().map(|r| r.iter().map(|x| x * k).collect()).collect())
    }

    /// Is the lattice negative definite?
    pub fn is_negative_definite(&self) -> Result<bool> {
        Ok(self.signature()? == (0, self.rank()))
    }

    /// Primitive sublattice test: the span of `vectors` has trivial torsion in the quotient.
    pub fn is_primitive(&self, vectors: &[Vec<i64>]) -> Result<bool> {
        let m: Vec<Vec<i128>> = vectors.iter().map(|v| v.iter().map(|x| *x as i128).collect()).collect();
        let ed = elementary_divisors(&m)?;
        Ok(ed.len() == vectors.len() && ed.iter().all(|d| *d == 1))
    }

    /// Level of a primitive isotropic vector: the positive generator of `⟨v, Λ⟩`.
    pub fn level_of_isotropic(&self, v: &[i64]) -> Result<i64> {
        if self.norm(v)? != 0 {
            return Err(Error::Lattice("vector is not isotropic".into()));
        }
        if gcd_all(v.iter().map(|x| *x as i128)) != 1 {
            return Err(Error::Lattice("vector is not primitive".into()));
        }
        Ok(gcd_all(self.dual_row(v).into_iter().map(i128::from)) as i64)
    }

    /// Vectors of a definite lattice with `0 < |x²| ≤ bound`, one per `±` pair.
    ///
    /// The representative has its first nonzero coordinate positive; output is
    /// sorted by `|x²|` and then lexicographically.
    pub fn short_vectors(&self, bound: i64) -> Result<Vec<Vec<i64>>> {
        let (p, m) = self.signature()?;
        let sgn: i64 = if m == self.rank() {
            -1
        } else if p == self.rank() {
            1
        } else {
            return Err(Error::Lattice("short_vectors needs a definite lattice".into()));
        };
        let q: Vec<Vec<f64>> = self.gram.iter().map(|r| r.iter().map(|x| (sgn * x) as f64).collect()).collect();
        let center = vec![0.0; self.rank()];
        let pts = ellipsoid_points(&q, &center, bound as f64, budget())?;
        let mut out: Vec<(i64, Vec<i64>)> = Vec::new();
        for x in pts {
            let nrm = sgn * self.norm(&x)?;
            if nrm == 0 || nrm > bound {
                continue;
            }
            if x.iter().find(|c| **c != 0).copied().unwrap_or(0) > 0 {
                out.push((nrm, x));
            }
        }
        out.sort();
        Ok(out.into_iter().map(|(_, x)| x).collect())
    }

    /// All `λ` with `⟨λ, v_i⟩ = t_i` for each constraint and `λ² ≥ min_norm`.
    ///
    /// The orthogonal complement of the constraint vectors must be negative definite.
    pub fn affine_slice(&self, constraints: &[(Vec<i64>, i64)], min_norm: i64) -> Result<Vec<Vec<i64>>> {
        let Some(slice) = self.slice(constraints)? else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        let cap = budget();
        slice.visit(min_norm, &mut |k, _| {
            out.push(slice.point(k));
            if out.len() > cap {
                return Err(Error::Budget(cap));
            }
            Ok(())
        })?;
        out.sort();
        Ok(out)
    }

    /// The affine sublattice cut out by `⟨λ, v_i⟩ = t_i`, or `None` if it is empty.
    pub fn slice(&self, constraints: &[(Vec<i64>, i64)]) -> Result<Option<AffineSlice>> {
        let n = self.rank();
        let rows: Vec<Vec<i128>> = constraints
            .iter()
            .map(|(v, _)| self.dual_row(v).into_iter().map(i128::from).collect())
            .collect();
        let (h, u) = column_hnf(&rows)?;
        // solve the lower echelon system H y = t on the pivot columns
        let mut y = vec![0i128; n];
        let mut col = 0usize;
        for (r, (_, t)) in constraints.iter().enumerate() {
            let mut rhs = *t as i128;
            for (c, yc) in y.iter().enumerate().take(col) {
                rhs -= h[r][c] * yc;
            }
            if col < n && h[r][col] != 0 {
                if rhs % h[r][col] != 0 {
                    return Ok(None);
                }
                y[col] = rhs / h[r][col];
                col += 1;
            } else if rhs != 0 {
                return Ok(None);
            }
        }
        let lambda0: Vec<i64> = (0..n).map(|i| (0..n).map(|j| u[i][j] * y[j]).sum::<i128>() as i64).collect();
        let kernel: Vec<Vec<i64>> = (col..n).map(|j| (0..n).map(|i| u[i][j] as i64).collect()).collect();
        AffineSlice::new(self, lambda0, kernel).map(Some)
    }

    /// Slice `{λ : ⟨λ,B⟩ = m, ⟨λ,D⟩ = n, λ² ≥ min_norm}` for isotropic `B, D` with `⟨B,D⟩ > 0`.
    pub fn slice_vectors(&self, b: &[i64], d: &[i64], m: i64, n: i64, min_norm: i64) -> Result<Vec<Vec<i64>>> {
        if self.inner(b, d)? <= 0 {
            return Err(Error::InvalidArgument("slice needs ⟨B, D⟩ > 0".into()));
        }
        self.affine_slice(&[(b.to_vec(), m), (d.to_vec(), n)], min_norm)
    }

    /// Vectors with `0 < ⟨λ, Y⟩ ≤ h_max` and `λ² ≥ min_norm` for a real `Y` with `Y² > 0`.
    ///
    /// Uses the positive definite majorant `2⟨λ,Y⟩²/Y² - λ²`.
    pub fn majorant_points(&self, y: &[f64], h_max: f64, min_norm: i64) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        let yy = self.inner_rr(y, y);
        if yy <= 0.0 {
            return Err(Error::InvalidArgument("majorant needs Y² > 0".into()));
        }
        let gy: Vec<f64> = (0..n).map(|i| (0..n).map(|j| self.gram[i][j] as f64 * y[j]).sum()).collect();
        let q: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| 2.0 * gy[i] * gy[j] / yy - self.gram[i][j] as f64).collect())
            .collect();
        let ident: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let basis = lll_reduce(&q, &ident);
        let qb: Vec<Vec<f64>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| quad(&q, a, b)).collect())
            .collect();
        let bound = 2.0 * h_max * h_max / yy - min_norm as f64;
        let pts = ellipsoid_points(&qb, &vec![0.0; n], bound, budget())?;
        let mut out = Vec::new();
        for k in pts {
            let v: Vec<i64> = (0..n).map(|t| (0..n).map(|j| k[j] * basis[j][t]).sum()).collect();
            let h = self.inner_real(&v, y);
            if h > 0.0 && h <= h_max && self.norm(&v)? >= min_norm {
                out.push(v);
            }
        }
        out.sort();
        Ok(out)
    }
}

/// `λ0 + Σ k_j b_j` over a negative definite sublattice spanned by LLL-reduced `b_j`.
///
/// Norms and pairings are evaluated in the kernel coordinates `k` with exact
/// integer arithmetic, so visiting millions of points stays cheap.
#[derive(Clone, Debug)]
pub struct AffineSlice {
    pub lambda0: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
    gram: Vec<Vec<i64>>,
    lin: Vec<i64>,
    c0: i64,
}

impl AffineSlice {
    fn new(l: &IntegralLattice, lambda0: Vec<i64>, kernel: Vec<Vec<i64>>) -> Result<Self> {
        let d = kernel.len();
        let neg: Vec<Vec<f64>> = kernel
            .iter()
            .map(|a| kernel.iter().map(|b| l.inner(a, b).map(|x| -(x as f64))).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        let ident: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        let reduced = lll_reduce(&neg, &ident);
        let basis: Vec<Vec<i64>> = reduced
            .iter()
            .map(|coef| (0..l.rank()).map(|t| (0..d).map(|j| coef[j] * kernel[j][t]).sum()).collect())
            .collect();
        let gram = basis
            .iter()
            .map(|a| basis.iter().map(|b| l.inner(a, b)).collect::<Result<Vec<i64>>>())
            .collect::<Result<_>>()?;
        let lin = basis.iter().map(|b| l.inner(&lambda0, b)).collect::<Result<_>>()?;
        let c0 = l.norm(&lambda0)?;
        Ok(AffineSlice { lambda0, basis, gram, lin, c0 })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn point(&self, k: &[i64]) -> Vec<i64> {
        (0..self.lambda0.len())
            .map(|t| self.lambda0[t] + k.iter().zip(&self.basis).map(|(c, b)| c * b[t]).sum::<i64>())
            .collect()
    }

    /// `λ²` at kernel coordinates `k`.
    pub fn norm_at(&self, k: &[i64]) -> i64 {
        let mut s = self.c0;
        for i in 0..k.len() {
            if k[i] == 0 {
                continue;
            }
            s += 2 * k[i] * self.lin[i];
            let mut t = 0;
            for j in 0..k.len() {
                t += self.gram[i][j] * k[j];
            }
            s += k[i] * t;
        }
        s
    }

    /// The functional `λ ↦ ⟨λ, w⟩` as `(value at λ0, values on the basis)`.
    pub fn functional(&self, l: &IntegralLattice, w: &[i64]) -> Result<LinearForm> {
        Ok(LinearForm {
            base: l.inner(&self.lambda0, w)?,
            coef: self.basis.iter().map(|b| l.inner(b, w)).collect::<Result<_>>()?,
        })
    }

    /// Visits every point with `λ² ≥ min_norm`, passing kernel coordinates and the norm.
    pub fn visit(&self, min_norm: i64, f: &mut dyn FnMut(&[i64], i64) -> Result<()>) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return if self.c0 >= min_norm { f(&[], self.c0) } else { Ok(()) };
        }
        let q: Vec<Vec<f64>> = self.gram.iter().map(|r| r.iter().map(|x| -(*x as f64)).collect()).collect();
        // λ² = c0 + 2 bᵀk - kᵀQk peaks at k* = Q⁻¹ b
        let b: Vec<f64> = self.lin.iter().map(|x| *x as f64).collect();
        let kstar = solve_spd(&q, &b)?;
        let peak = self.c0 as f64 + b.iter().zip(&kstar).map(|(x, y)| x * y).sum::<f64>();
        let cap = budget();
        let mut seen = 0usize;
        ellipsoid_visit(&q, &kstar, peak - min_norm as f64, &mut |k| {
            seen += 1;
            if seen > cap {
                return Err(Error::Budget(cap));
            }
            let nrm = self.norm_at(k);
            if nrm >= min_norm {
                f(k, nrm)?;
            }
            Ok(())
        })
    }
}

/// A linear functional restricted to an affine slice.
#[derive(Clone, Debug)]
pub struct LinearForm {
    pub base: i64,
    pub coef: Vec<i64>,
}

impl LinearForm {
    pub fn at(&self, k: &[i64]) -> i64 {
        self.base + self.coef.iter().zip(k).map(|(a, b)| a * b).sum::<i64>()
    }
}

fn quad(q: &[Vec<f64>], a: &[i64], b: &[i64]) -> f64 {
    let mut s = 0.0;
    for (i, row) in q.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            s += a[i] as f64 * g * b[j] as f64;
        }
    }
    s
}

fn solve_spd(q: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = q.len();
    let mut m: Vec<Vec<f64>> = q.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(*x);
        r
    }).collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .ok_or_else(|| Error::Singular("spd solve".into()))?;
        m.swap(p, c);
        if m[c][c].abs() < 1e-300 {
            return Err(Error::Singular("spd solve".into()));
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..=n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    Ok((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

pub fn hyperbolic(scale: i64) -> IntegralLattice {
    let name = if scale == 1 { "U".to_string() } else { format!("U({scale})") };
    IntegralLattice { name, gram: vec![vec![0, scale], vec![scale, 0]] }
}

pub fn e8() -> IntegralLattice {
    IntegralLattice { name: "E8".into(), gram: E8_GRAM.iter().map(|r| r.to_vec()).collect() }
}

pub fn e8_2() -> IntegralLattice {
    e8().scaled("E8(2)", 2).expect("scaling a valid Gram matrix")
}

/// `Λ = U(2) ⊕ U ⊕ E8(2)`.
pub fn lambda() -> IntegralLattice {
    IntegralLattice::direct_sum("Lambda", &[&hyperbolic(2), &hyperbolic(1), &e8_2()]).expect("valid blocks")
}

/// `M1 = U(2) ⊕ E8(2)`, the orthogonal complement of the level-1 hyperbolic plane.
pub fn m1() -> IntegralLattice {
    IntegralLattice::direct_sum("M1", &[&hyperbolic(2), &e8_2()]).expect("valid blocks")
}

/// `M2 = U ⊕ E8(2)`, the orthogonal complement of the level-2 hyperbolic plane.
pub fn m2() -> IntegralLattice {
    IntegralLattice::direct_sum("M2", &[&hyperbolic(1), &e8_2()]).expect("valid blocks")
}

/// Unit vector of length `n` at index `i`.
pub fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|j| i64::from(i == j)).collect()
}

/// Indices of `Λ` coordinates making up `M_ℓ`, and the pair `(e_ℓ, f_ℓ)`.
pub fn level_layout(level: u8) -> Result<(Vec<usize>, usize, usize)> {
    let e8_part = 4..12;
    match level {
        1 => Ok(([E2, F2].into_iter().chain(e8_part).collect(), E1, F1)),
        2 => Ok(([E1, F1].into_iter().chain(e8_part).collect(), E2, F2)),
        _ => Err(Error::InvalidArgument(format!("level must be 1 or 2, got {level}"))),
    }
}

/// The lattice `M_ℓ` for `ℓ ∈ {1, 2}`.
pub fn m_level(level: u8) -> Result<IntegralLattice> {
    match level {
        1 => Ok(m1()),
        2 => Ok(m2()),
        _ => Err(Error::InvalidArgument(format!("level must be 1 or 2, got {level}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures_of_standard_lattices() {
        assert_eq!(e8().signature().unwrap(), (0, 8));
        assert_eq!(lambda().signature().unwrap(), (2, 10));
        assert_eq!(m1().signature().unwrap(), (1, 9));
        assert_eq!(m2().signature().unwrap(), (1, 9));
    }

    #[test]
    fn slice_keeps_isotropic_points_at_the_peak() {
        // the peak norm of this slice is exactly 0, reached at 5D
        let m = m1();
        let b = vec![1, 1, 0, 0, 0, 0, -1, 0, 0, 0];
        let d = vec![1, 1, 0, 0, 1, 1, 0, 0, 0, 0];
        let five_d: Vec<i64> = d.iter().map(|x| 5 * x).collect();
        let pts = m.slice_vectors(&b, &d, 10, 0, 0).unwrap();
        assert_eq!(pts, vec![five_d]);
    }

    #[test]
    fn e8_2_root_count() {
        let l = e8_2();
        assert_eq!(l.short_vectors(4).unwrap().len(), 120);
        assert!(l.short_vectors(2).unwrap().is_empty());
    }

    #[test]
    fn levels_of_hyperbolic_generators() {
        let l = lambda();
        assert_eq!(l.level_of_isotropic(&unit(12, E1)).unwrap(), 1);
        assert_eq!(l.level_of_isotropic(&unit(12, E2)).unwrap(), 2);
        let mut twice = unit(12, E1);
        twice[E1] = 2;
        assert!(l.level_of_isotropic(&twice).is_err());
    }

    #[test]
    fn slice_of_m2_near_the_cusp() {
        // λ = a e1 + b f1 + v with ⟨λ,e1⟩ = 1, ⟨λ,f1⟩ = 0 gives λ = f1 + v
        let m = m2();
        let b = unit(10, 0);
        let d = unit(10, 1);
        let s = m.slice_vectors(&b, &d, 1, 0, 0).unwrap();
        assert_eq!(s, vec![unit(10, 1)]);
        let s = m.slice_vectors(&b, &d, 1, 1, -4).unwrap();
        // v = 0 (norm 2) plus the 240 vectors of norm -4 shifted: 2 - 4 = -2 >= -4
        assert_eq!(s.len(), 241);
    }
}
