//! Fincke–Pohst enumeration of lattice points in ellipsoids, with LLL preconditioning.

use crate::error::{Error, Result};

/// Cholesky-style decomposition `Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²`.
fn decompose(q: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = q.len();
    let mut a: Vec<Vec<f64>> = q.to_vec();
    for i in 0..n {
        if a[i][i] <= 0.0 {
            return Err(Error::Lattice("quadratic form is not positive definite".into()));
        }
        for j in i + 1..n {
            a[j][i] = a[i][j];
            a[i][j] /= a[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                a[k][l] -= a[k][i] * a[i][l];
            }
        }
    }
    Ok(a)
}

/// All integer `x` with `(x - c)ᵀ Q (x - c) ≤ bound` for positive definite `Q`.
///
/// The bound is widened by a small relative margin; callers filter exactly.
pub fn ellipsoid_points(q: &[Vec<f64>], center: &[f64], bound: f64, budget: usize) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    ellipsoid_visit(q, center, bound, &mut |x| {
        out.push(x.to_vec());
        if out.len() > budget {
            return Err(Error::Budget(budget));
        }
        Ok(())
    })?;
    Ok(out)
}

/// Calls `f` on every integer point of the ellipsoid, in a fixed deterministic order.
pub fn ellipsoid_visit(
    q: &[Vec<f64>],
    center: &[f64],
    bound: f64,
    f: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    let n = q.len();
    // widen before the sign test: a peak computed as -1e-14 may be an exact 0
    let bound = bound + 1e-9 * (1.0 + bound.abs());
    if bound < 0.0 {
        return Ok(());
    }
    if n == 0 {
        return f(&[]);
    }
    let a = decompose(q)?;
    let mut x = vec![0i64; n];
    let mut rem = vec![0.0f64; n + 1];
    rem[n] = bound;
    let mut shift = vec![0.0f64; n];
    let mut upper = vec![0i64; n];
    let mut k = n - 1;
    let set_level = |k: usize, x: &mut Vec<i64>, shift: &mut Vec<f64>, upper: &mut Vec<i64>, rem: &Vec<f64>| -> bool {
        let mut c = center[k];
        for j in k + 1..n {
            c -= a[k][j] * (x[j] as f64 - center[j]);
        }
        let r = (rem[k + 1] / a[k][k]).max(0.0).sqrt();
        let lo = (c - r).ceil();
        let hi = (c + r).floor();
        shift[k] = c;
        if lo > hi {
            return false;
        }
        x[k] = lo as i64;
        upper[k] = hi as i64;
        true
    };
    if !set_level(k, &mut x, &mut shift, &mut upper, &rem) {
        return Ok(());
    }
    loop {
        if x[k] > upper[k] {
            if k == n - 1 {
                break;
            }
            k += 1;
            x[k] += 1;
            continue;
        }
        let d = x[k] as f64 - shift[k];
        rem[k] = rem[k + 1] - a[k][k] * d * d;
        if k == 0 {
            f(&x)?;
            x[0] += 1;
            continue;
        }
        k -= 1;
        if !set_level(k, &mut x, &mut shift, &mut upper, &rem) {
            k += 1;
            x[k] += 1;
        }
    }
    Ok(())
}

/// LLL-reduces the rows of `basis` with respect to the positive definite Gram `q`.
///
/// Returns the reduced basis; the transformation is unimodular.
pub fn lll_reduce(q: &[Vec<f64>], basis: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = basis.len();
    let mut b: Vec<Vec<i64>> = basis.to_vec();
    if n <= 1 {
        return b;
    }
    let form = |x: &[i64], y: &[i64]| -> f64 {
        let mut s = 0.0;
        for (i, row) in q.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let t: f64 = row.iter().zip(y).map(|(g, v)| g * *v as f64).sum();
            s += x[i] as f64 * t;
        }
        s
    };
    let mut k = 1usize;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        // Gram–Schmidt data for rows 0..=k
        let mut mu = vec![vec![0.0f64; n]; n];
        let mut bstar = vec![0.0f64; n];
        for i in 0..=k {
            let mut bi = form(&b[i], &b[i]);
            for j in 0..i {
                mu[i][j] = {
                    let mut v = form(&b[i], &b[j]);
                    for l in 0..j {
                        v -= mu[j][l] * mu[i][l] * bstar[l];
                    }
                    v / bstar[j]
                };
                bi -= mu[i][j] * mu[i][j] * bstar[j];
            }
            bstar[i] = bi;
        }
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                let ri = r as i64;
                for t in 0..b[k].len() {
                    b[k][t] -= ri * b[j][t];
                }
                for l in 0..=j {
                    mu[k][l] -= r * if l == j { 1.0 } else { mu[j][l] };
                }
            }
        }
        let lhs = bstar[k] + mu[k][k - 1] * mu[k][k - 1] * bstar[k - 1];
        if lhs >= 0.99 * bstar[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_points_in_disc() {
        let q = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let pts = ellipsoid_points(&q, &[0.0, 0.0], 2.0, 1000).unwrap();
        assert_eq!(pts.len(), 9);
        let shifted = ellipsoid_points(&q, &[0.5, 0.0], 0.25, 1000).unwrap();
        assert_eq!(shifted.len(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let q = vec![vec![1.0]];
        assert!(matches!(ellipsoid_points(&q, &[0.0], 100.0, 5), Err(Error::Budget(5))));
    }

    #[test]
    fn lll_shortens_skewed_basis() {
        let q = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let b = lll_reduce(&q, &[vec![1, 0], vec![17, 1]]);
        assert!(b.iter().all(|r| r.iter().all(|x| x.abs() <= 1)));
    }
}
