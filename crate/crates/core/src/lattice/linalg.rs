//! Small exact integer and rational matrix routines.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;
pub type IMat = Vec<Vec<i64>>;

fn ov(what: &'static str) -> Error {
    Error::Overflow(what)
}

/// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g ≥ 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Column-style Hermite reduction: returns `(H, U)` with `A·U = H`, `U` unimodular,
/// and `H` lower echelon with its nonzero columns first.
pub fn column_hnf(a: &[Vec<i128>]) -> Result<(Vec<Vec<i128>>, Vec<Vec<i128>>)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i128>>, i: usize, j: usize, a: i128, b: i128, c: i128, d: i128| -> Result<()> {
        // (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for row in m.iter_mut() {
            let (x, y) = (row[i], row[j]);
            let nx = a.checked_mul(x).and_then(|p| b.checked_mul(y).and_then(|q| p.checked_add(q))).ok_or_else(|| ov("hnf"))?;
            let ny = c.checked_mul(x).and_then(|p| d.checked_mul(y).and_then(|q| p.checked_add(q))).ok_or_else(|| ov("hnf"))?;
            row[i] = nx;
            row[j] = ny;
        }
        Ok(())
    };
    let mut piv = 0usize;
    for r in 0..rows {
        if piv >= cols {
            break;
        }
        for j in piv + 1..cols {
            if h[r][j] == 0 {
                continue;
            }
            let (x, y) = (h[r][piv], h[r][j]);
            let (g, s, t) = ext_gcd(x, y);
            let (xa, ya) = (x / g, y / g);
            col_op(&mut h, piv, j, s, t, -ya, xa)?;
            col_op(&mut u, piv, j, s, t, -ya, xa)?;
        }
        if h[r][piv] != 0 {
            if h[r][piv] < 0 {
                col_op(&mut h, piv, piv, -1, 0, -1, 0)?;
                col_op(&mut u, piv, piv, -1, 0, -1, 0)?;
            }
            // reduce earlier pivot columns modulo this pivot
            let p = h[r][piv];
            for j in 0..piv {
                let q = h[r][j].div_euclid(p);
                if q != 0 {
                    col_op(&mut h, j, piv, 1, -q, 0, 1)?;
                    col_op(&mut u, j, piv, 1, -q, 0, 1)?;
                }
            }
            piv += 1;
        }
    }
    Ok((h, u))
}

/// Elementary divisors of an integer matrix (nonzero ones only).
pub fn elementary_divisors(a: &[Vec<i128>]) -> Result<Vec<i128>> {
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // pick the smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = false;
        while !done {
            done = true;
            let p = m[t][t];
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        m[i][j] = m[i][j].checked_sub(q.checked_mul(m[t][j]).ok_or_else(|| ov("snf"))?).ok_or_else(|| ov("snf"))?;
                    }
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] = row[j].checked_sub(q.checked_mul(row[t]).ok_or_else(|| ov("snf"))?).ok_or_else(|| ov("snf"))?;
                    }
                }
            }
            // move any smaller remainder into the pivot position and repeat
            let mut swap_to: Option<(usize, usize)> = None;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    swap_to = Some((i, t));
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    swap_to = Some((t, j));
                }
            }
            if let Some((i, j)) = swap_to {
                if i != t {
                    m.swap(t, i);
                } else {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                }
                done = false;
                continue;
            }
            // pivot must divide the rest of the block
            let mut fix: Option<usize> = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if m[i][j] % p != 0 {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            if let Some(i) = fix {
                for j in t..cols {
                    m[t][j] = m[t][j].checked_add(m[i][j]).ok_or_else(|| ov("snf"))?;
                }
                done = false;
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    Ok(out)
}

/// Rank of an integer matrix.
pub fn rank(a: &[Vec<i128>]) -> Result<usize> {
    Ok(elementary_divisors(a)?.len())
}

/// Exact signature `(n_plus, n_minus)` of a symmetric integer matrix.
pub fn signature(g: &[Vec<i64>]) -> Result<(usize, usize)> {
    let n = g.len();
    let mut m: Vec<Vec<Q>> = g.iter().map(|r| r.iter().map(|x| Q::from_integer(*x as i128)).collect()).collect();
    let (mut pos, mut neg) = (0usize, 0usize);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                // all diagonal entries vanish: create one via x_i -> x_i + x_j
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                for k in 0..n {
                    let v = m[j][k];
                    m[i][k] += v;
                }
                for k in 0..n {
                    let v = m[k][j];
                    m[k][i] += v;
                }
                i
            }
        };
        let d = m[p][p];
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            let f = m[i][p] / d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = m[p][j];
                m[i][j] -= f * v;
            }
            m[i][p] = Q::zero();
        }
        for &j in &active {
            m[p][j] = Q::zero();
        }
    }
    Ok((pos, neg))
}

/// Exact determinant of a rational matrix by Gaussian elimination.
pub fn det_q(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let v = m[c][k];
                m[r][k] -= f * v;
            }
        }
    }
    det
}

/// Exact inverse of a rational matrix.
pub fn inverse_q(a: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or_else(|| Error::Singular("matrix inverse".into()))?;
        m.swap(p, c);
        let d = m[c][c];
        for k in 0..2 * n {
            m[c][k] /= d;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                for k in 0..2 * n {
                    let v = m[c][k];
                    m[r][k] -= f * v;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn gcd_all(xs: impl IntoIterator<Item = i128>) -> i128 {
    xs.into_iter().fold(0i128, |g, x| g.gcd(&x))
}

/// Integer Gram matrix `Bᵀ G B` for basis columns given as rows of `basis`.
pub fn gram_of(g: &[Vec<i64>], basis: &[Vec<i64>]) -> Result<IMat> {
    basis
        .iter()
        .map(|x| basis.iter().map(|y| bilinear(g, x, y)).collect())
        .collect()
}

pub fn bilinear(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> Result<i64> {
    let mut s: i128 = 0;
    for (i, row) in g.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        let mut t: i128 = 0;
        for (j, gij) in row.iter().enumerate() {
            t += *gij as i128 * y[j] as i128;
        }
        s = s.checked_add((x[i] as i128).checked_mul(t).ok_or_else(|| ov("pairing"))?).ok_or_else(|| ov("pairing"))?;
    }
    i64::try_from(s).map_err(|_| ov("pairing"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_solves_kernel() {
        let a = vec![vec![2i128, 4, 6, 3], vec![0, 1, 1, 5]];
        let (h, u) = column_hnf(&a).unwrap();
        // columns beyond the rank are kernel vectors
        for c in 2..4 {
            for r in 0..2 {
                let v: i128 = (0..4).map(|k| a[r][k] * u[k][c]).sum();
                assert_eq!(v, 0);
                assert_eq!(h[r][c], 0);
            }
        }
    }

    #[test]
    fn snf_detects_imprimitivity() {
        assert_eq!(elementary_divisors(&[vec![2, 4, 6]]).unwrap(), vec![2]);
        assert_eq!(elementary_divisors(&[vec![2, 3, 0], vec![0, 0, 1]]).unwrap(), vec![1, 1]);
        assert_eq!(elementary_divisors(&[vec![2, 0], vec![0, 3]]).unwrap(), vec![1, 6]);
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]).unwrap(), (1, 1));
        assert_eq!(signature(&[vec![-2, 1], vec![1, -2]]).unwrap(), (0, 2));
        assert_eq!(signature(&[vec![0, 0], vec![0, 0]]).unwrap(), (0, 0));
    }
}
