//! Does a rank-`r` sublattice `K ⊂ Λ` of signature `(2, r-2)` keep its period
//! domain away from every mirror `d^⊥`, `d² = -2`?
//!
//! A mirror meets the domain of `K` exactly when the projection `d_K` has
//! negative norm, and contains it when `d_K = 0`. Writing
//! `Λ = ⋃_g g + (K ⊕ K^⊥)` over glue representatives `g`, the projection
//! `d_⊥` ranges over finitely many short vectors, and for each the question
//! reduces to representing `-2 - d_⊥²` on a coset of `K`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::linalg::{column_hnf, inverse_q, Q};
use crate::lattice::{ellipsoid_points, IntegralLattice};

/// Radius of the box searched when representing a norm on a coset of `K`.
const COSET_RADIUS: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MirrorStatus {
    /// No mirror meets the period domain of `K`.
    Clear,
    /// A root of `Λ` orthogonal to all of `K`.
    RootInComplement(Vec<i64>),
    /// A root whose mirror crosses the period domain of `K`.
    Crossing(Vec<i64>),
}

fn mat_q(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|x| Q::from_integer(*x as i128)).collect()).collect()
}

/// Basis of the orthogonal complement `K^⊥` in `Λ`.
pub fn orthogonal_complement(l: &IntegralLattice, k: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = l.rank();
    let rows: Vec<Vec<i128>> = k.iter().map(|v| l.dual_row(v).into_iter().map(i128::from).collect()).collect();
    let (h, u) = column_hnf(&rows)?;
    let rank = (0..n).filter(|&c| h.iter().any(|r| r[c] != 0)).count();
    Ok((rank..n).map(|j| (0..n).map(|i| u[i][j] as i64).collect()).collect())
}

/// Which mirror crossings a family may have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingPolicy {
    /// No mirror may meet the domain of `K`.
    Forbid,
    /// Only mirrors cutting out the diagonal Humbert locus: `d_K` is proportional to a
    /// primitive vector of norm `-4` of `K`, i.e. `d_K` has norm `-1` in an order-2 class
    /// or norm `-1/4` in an order-4 class of `K^*/K`.
    DiagonalHumbert,
}

impl CrossingPolicy {
    fn allows(self, class_order: i128, target: Q) -> bool {
        match self {
            CrossingPolicy::Forbid => false,
            CrossingPolicy::DiagonalHumbert => {
                (class_order == 2 && target == Q::from_integer(-1)) || (class_order == 4 && target == Q::new(-1, 4))
            }
        }
    }
}

/// Classify `K` against the mirrors of `Λ`, allowing no crossings.
pub fn mirror_status(l: &IntegralLattice, k: &[Vec<i64>]) -> Result<MirrorStatus> {
    Ok(mirror_scan(l, k, CrossingPolicy::Forbid, 0)?.status)
}

/// Classify `K` against the mirrors of `Λ`; `Clear` means every crossing is allowed by `policy`.
pub fn mirror_status_with(l: &IntegralLattice, k: &[Vec<i64>], policy: CrossingPolicy) -> Result<MirrorStatus> {
    Ok(mirror_scan(l, k, policy, 0)?.status)
}

/// Result of [`mirror_scan`].
#[derive(Clone, Debug)]
pub struct MirrorScan {
    pub status: MirrorStatus,
    /// Projections `d_K`, in coordinates of the basis of `K`, of allowed crossing roots
    /// found in the search box; at most `keep` of them.
    pub allowed: Vec<Vec<Q>>,
}

/// Walks the glue classes of `Λ / (K ⊕ K^⊥)` and the short vectors of each `K^⊥`
/// coset, stopping at the first forbidden mirror.
pub fn mirror_scan(l: &IntegralLattice, k: &[Vec<i64>], policy: CrossingPolicy, keep: usize) -> Result<MirrorScan> {
    let n = l.rank();
    let r = k.len();
    let perp = orthogonal_complement(l, k)?;
    let gk: Vec<Vec<i64>> = k.iter().map(|a| k.iter().map(|b| l.inner(a, b)).collect()).collect::<Result<_>>()?;
    let gp: Vec<Vec<i64>> = perp.iter().map(|a| perp.iter().map(|b| l.inner(a, b)).collect()).collect::<Result<_>>()?;
    let gk_inv = inverse_q(&mat_q(&gk))?;
    let gp_inv = inverse_q(&mat_q(&gp))?;

    // glue representatives of Λ / (K ⊕ K^⊥) from a triangular basis of the sum
    let cols: Vec<Vec<i128>> = (0..n)
        .map(|i| k.iter().chain(perp.iter()).map(|v| v[i] as i128).collect())
        .collect();
    let (h, _) = column_hnf(&cols)?;
    let diag: Vec<i128> = (0..n).map(|i| h[i][i]).collect();
    if diag.iter().any(|d| *d <= 0) {
        return Err(Error::Lattice("K ⊕ K^⊥ is not of full rank".into()));
    }
    let index: i128 = diag.iter().product();
    if index > 1_000_000 {
        return Err(Error::Lattice(format!("glue group of order {index} too large")));
    }
    let qp: Vec<Vec<f64>> = gp.iter().map(|row| row.iter().map(|x| -(*x as f64)).collect()).collect();

    let mut allowed = Vec::new();
    let mut digits = vec![0i128; n];
    loop {
        let g: Vec<i64> = digits.iter().map(|x| *x as i64).collect();
        let pk: Vec<Q> = coords(&gk_inv, k, l, &g)?;
        let pp: Vec<Q> = coords(&gp_inv, &perp, l, &g)?;
        let center: Vec<f64> = pp.iter().map(|x| -q_to_f64(x)).collect();
        for p in ellipsoid_points(&qp, &center, 2.0, 1_000_000)? {
            let u: Vec<Q> = pp.iter().zip(&p).map(|(a, b)| *a + Q::from_integer(*b as i128)).collect();
            let nu = quad_q(&gp, &u);
            let minus_two = Q::from_integer(-2);
            if nu < minus_two {
                continue;
            }
            let root = |kpart: &[Q]| -> Vec<i64> {
                // d = Σ kpart_i k_i + Σ u_j perp_j, integral by construction
                (0..n)
                    .map(|t| {
                        let mut s = Q::zero();
                        for (i, v) in k.iter().enumerate() {
                            s += kpart[i] * Q::from_integer(v[t] as i128);
                        }
                        for (j, v) in perp.iter().enumerate() {
                            s += u[j] * Q::from_integer(v[t] as i128);
                        }
                        s.to_integer() as i64
                    })
                    .collect()
            };
            if nu == minus_two {
                if pk.iter().all(|x| x.is_integer()) {
                    let status = MirrorStatus::RootInComplement(root(&vec![Q::zero(); r]));
                    return Ok(MirrorScan { status, allowed });
                }
                continue;
            }
            let target = minus_two - nu;
            let class_order = pk.iter().fold(1i128, |m, x| num_integer::lcm(m, *x.denom()));
            if policy.allows(class_order, target) {
                if allowed.len() < keep {
                    let room = keep - allowed.len();
                    allowed.extend(represent_all_on_coset(&gk, &pk, target, room));
                }
                continue;
            }
            if let Some(kpart) = represent_on_coset(&gk, &pk, target) {
                let status = MirrorStatus::Crossing(root(&kpart));
                return Ok(MirrorScan { status, allowed });
            }
        }
        // next glue representative
        let mut i = 0;
        loop {
            if i == n {
                return Ok(MirrorScan { status: MirrorStatus::Clear, allowed });
            }
            digits[i] += 1;
            if digits[i] < diag[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn q_to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Coordinates of the projection of `g` onto the span of `basis`.
fn coords(gram_inv: &[Vec<Q>], basis: &[Vec<i64>], l: &IntegralLattice, g: &[i64]) -> Result<Vec<Q>> {
    let pairings: Vec<Q> = basis.iter().map(|b| l.inner(b, g).map(|x| Q::from_integer(x as i128))).collect::<Result<_>>()?;
    Ok(gram_inv
        .iter()
        .map(|row| row.iter().zip(&pairings).fold(Q::zero(), |s, (a, b)| s + *a * *b))
        .collect())
}

fn quad_q(g: &[Vec<i64>], x: &[Q]) -> Q {
    let mut s = Q::zero();
    for (i, row) in g.iter().enumerate() {
        for (j, gij) in row.iter().enumerate() {
            if *gij != 0 {
                s += x[i] * x[j] * Q::from_integer(*gij as i128);
            }
        }
    }
    s
}

/// A vector of norm `target` in the coset `x0 + Z^r` of the lattice with Gram `g`, if any
/// lies in a box of radius [`COSET_RADIUS`] around the reduced representative.
fn represent_on_coset(g: &[Vec<i64>], x0: &[Q], target: Q) -> Option<Vec<Q>> {
    represent_all_on_coset(g, x0, target, 1).pop()
}

/// Up to `limit` vectors of norm `target` in the coset `x0 + Z^r`, searched in a box of
/// radius [`COSET_RADIUS`] around the reduced representative.
///
/// Works with `X = D·x` for the common denominator `D`, so the inner loop is integral.
fn represent_all_on_coset(g: &[Vec<i64>], x0: &[Q], target: Q, limit: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let base: Vec<Q> = x0.iter().map(|x| *x - Q::from_integer(x.floor().to_integer())).collect();
    let den = base.iter().fold(1i128, |d, b| num_integer::lcm(d, *b.denom()));
    let b: Vec<i128> = base.iter().map(|x| (*x * Q::from_integer(den)).to_integer()).collect();
    // Σ g X X · t.den = t.num · D²
    let lhs_scale = *target.denom();
    let rhs = target.numer() * den * den;
    let r = b.len();
    let mut off = vec![-COSET_RADIUS; r];
    let mut x = vec![0i128; r];
    loop {
        for i in 0..r {
            x[i] = b[i] + den * off[i] as i128;
        }
        let mut s = 0i128;
        for i in 0..r {
            let mut t = 0i128;
            for j in 0..r {
                t += g[i][j] as i128 * x[j];
            }
            s += x[i] * t;
        }
        if s * lhs_scale == rhs {
            out.push(x.iter().map(|v| Q::new(*v, den)).collect());
            if out.len() >= limit {
                return out;
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            off[i] += 1;
            if off[i] < COSET_RADIUS + 1 {
                break;
            }
            off[i] = -COSET_RADIUS;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{lambda, E1, E2, F1, F2};

    fn vec12(entries: &[(usize, i64)]) -> Vec<i64> {
        let mut v = vec![0i64; 12];
        for (i, x) in entries {
            v[*i] += x;
        }
        v
    }

    #[test]
    fn complement_of_hyperbolic_planes() {
        let l = lambda();
        let k = vec![vec12(&[(E1, 1)]), vec12(&[(F1, 1)])];
        let perp = orthogonal_complement(&l, &k).unwrap();
        assert_eq!(perp.len(), 10);
        for p in &perp {
            for v in &k {
                assert_eq!(l.inner(p, v).unwrap(), 0);
            }
        }
    }

    #[test]
    fn glue_class_of_f_prime_decides_mirrors() {
        let l = lambda();
        // f' = m e1 - 2 f1 + v0 with v0 in E8(2); isotropy forces m = v0²/4
        let make = |v0: &[i64]| {
            let mut f = vec12(&[(F1, -2)]);
            for (i, x) in v0.iter().enumerate() {
                f[4 + i] = *x;
            }
            let n = l.norm(&f).unwrap();
            f[E1] = n / 4;
            assert_eq!(l.norm(&f).unwrap(), 0);
            vec![vec12(&[(E1, 1)]), f, vec12(&[(E2, -1)]), vec12(&[(F2, 1)])]
        };
        // a simple root of E8 leaves e1 - f1 crossing the domain
        let k = make(&[1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(matches!(mirror_status(&l, &k).unwrap(), MirrorStatus::Crossing(_)));
        // a sum of two orthogonal simple roots lies in a norm-4 class and avoids every mirror
        let k = make(&[1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(mirror_status(&l, &k).unwrap(), MirrorStatus::Clear);
    }
}
