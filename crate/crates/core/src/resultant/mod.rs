//! Resultant of three ternary quadratic forms `Q(x; S) = Σ s_jk x_j x_k`.
//!
//! The Macaulay matrix at degree 4 has one row per quartic monomial `x^α`,
//! holding `x^{α - 2e_i}·Q_i` for the first variable `i` (in a chosen order)
//! with `α_i ≥ 2`. Its determinant is the resultant times the minor on the
//! three monomials divisible by two squares. The quotient is normalized so the
//! unit diagonal triple has resultant 1.

mod field;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
pub use field::{det, Scalar};

/// A symmetric 3×3 matrix.
pub type Sym3<T> = [[T; 3]; 3];

/// Three quadratic forms in `x1, x2, x3`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricTriple<T> {
    pub forms: [Sym3<T>; 3],
}

/// Exponents of the 15 quartic monomials in a fixed order.
fn quartics() -> Vec<[u8; 3]> {
    let mut out = Vec::with_capacity(15);
    for a in (0..=4u8).rev() {
        for b in (0..=4 - a).rev() {
            out.push([a, b, 4 - a - b]);
        }
    }
    out
}

/// Deterministic unimodular substitutions tried when every ordering leaves the
/// extraneous minor singular; `R(A^P) = R(A)` for `det P = 1`.
const SHEARS: [[[i64; 3]; 3]; 4] = [
    [[1, 0, 0], [1, 1, 0], [1, 1, 1]],
    [[1, 2, 0], [0, 1, 3], [0, 0, 1]],
    [[1, 0, 0], [2, 1, 0], [-1, 3, 1]],
    [[2, 1, 1], [1, 1, 0], [3, 2, 2]],
];

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

impl<T: Scalar> QuadricTriple<T> {
    pub fn new(forms: [Sym3<T>; 3]) -> Result<Self> {
        for s in &forms {
            for i in 0..3 {
                for j in 0..3 {
                    if s[i][j] != s[j][i] {
                        return Err(Error::InvalidArgument("quadric matrices must be symmetric".into()));
                    }
                }
            }
        }
        Ok(QuadricTriple { forms })
    }

    /// Diagonal forms `Q_i = Σ_j a_ij x_j²`.
    pub fn diagonal(a: &[[T; 3]; 3]) -> Self {
        let forms = std::array::from_fn(|i| {
            std::array::from_fn(|r| std::array::from_fn(|c| if r == c { a[i][r].clone() } else { T::zero() }))
        });
        QuadricTriple { forms }
    }

    pub fn unit() -> Self {
        let a = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one() } else { T::zero() }));
        Self::diagonal(&a)
    }

    /// Coefficient of `x^β` (`|β| = 2`) in `Q_i`.
    fn coeff(&self, i: usize, beta: [u8; 3]) -> T {
        let s = &self.forms[i];
        let idx: Vec<usize> = (0..3).flat_map(|v| std::iter::repeat(v).take(beta[v] as usize)).collect();
        let (j, k) = (idx[0], idx[1]);
        if j == k {
            s[j][j].clone()
        } else {
            s[j][k].add(&s[k][j])
        }
    }

    /// `A·P`: the `j`-th form becomes `Σ_i A_i p_ij`.
    pub fn combine(&self, p: &[[T; 3]; 3]) -> Self {
        let forms = std::array::from_fn(|j| {
            std::array::from_fn(|r| {
                std::array::from_fn(|c| (0..3).fold(T::zero(), |acc, i| acc.add(&self.forms[i][r][c].mul(&p[i][j]))))
            })
        });
        QuadricTriple { forms }
    }

    /// `A^P`: each form becomes `Pᵗ A_i P`, i.e. `x ↦ P x`.
    pub fn substitute(&self, p: &[[T; 3]; 3]) -> Self {
        let forms = std::array::from_fn(|i| {
            let s = &self.forms[i];
            std::array::from_fn(|r| {
                std::array::from_fn(|c| {
                    let mut acc = T::zero();
                    for a in 0..3 {
                        for b in 0..3 {
                            acc = acc.add(&p[a][r].mul(&s[a][b]).mul(&p[b][c]));
                        }
                    }
                    acc
                })
            })
        });
        QuadricTriple { forms }
    }

    /// Scales form `i` by `c`.
    pub fn scale_form(&self, i: usize, c: &T) -> Self {
        let mut out = self.clone();
        for row in out.forms[i].iter_mut() {
            for x in row.iter_mut() {
                *x = x.mul(c);
            }
        }
        out
    }

    /// `(det M, det E)` for a variable order and an assignment of forms to variables.
    fn macaulay_pair(&self, vars: [usize; 3], eqs: [usize; 3]) -> (T, T) {
        let mons = quartics();
        let col = |m: [u8; 3]| mons.iter().position(|x| *x == m).expect("quartic monomial");
        let mut mat = vec![vec![T::zero(); 15]; 15];
        let mut extraneous = Vec::new();
        for (r, alpha) in mons.iter().enumerate() {
            let squares: Vec<usize> = (0..3).filter(|&k| alpha[vars[k]] >= 2).collect();
            let k = squares[0];
            if squares.len() >= 2 {
                extraneous.push(r);
            }
            let v = vars[k];
            let mut shift = *alpha;
            shift[v] -= 2;
            for a in 0..3 {
                for b in a..3 {
                    let mut beta = [0u8; 3];
                    beta[a] += 1;
                    beta[b] += 1;
                    let c = self.coeff(eqs[k], beta);
                    if c.is_zero() {
                        continue;
                    }
                    let m = [shift[0] + beta[0], shift[1] + beta[1], shift[2] + beta[2]];
                    mat[r][col(m)] = c;
                }
            }
        }
        let e: Vec<Vec<T>> = extraneous.iter().map(|&r| extraneous.iter().map(|&c| mat[r][c].clone()).collect()).collect();
        (det(&mat), det(&e))
    }

    /// The normalized resultant `R(A)`.
    ///
    /// Tries the 36 pairings of variable order and form order, then unimodular
    /// substitutions, until the extraneous minor is nonzero (or, numerically, not
    /// negligible against the unit scale of the input).
    pub fn resultant(&self) -> Result<T> {
        let scale = self
            .forms
            .iter()
            .flat_map(|s| s.iter().flatten())
            .map(|x| x.abs_f64())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let mut candidates = vec![self.clone()];
        for p in SHEARS {
            let p: [[T; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| T::from_i64(p[i][j])));
            candidates.push(self.substitute(&p));
        }
        for cand in &candidates {
            for vars in permutations3() {
                for eqs in permutations3() {
                    let (dm, de) = cand.macaulay_pair(vars, eqs);
                    // the minor is cubic in the entries
                    if de.negligible(scale.powi(3)) {
                        continue;
                    }
                    // form eqs[k] = x_{vars[k]}², a relabeled unit triple with resultant 1
                    let mut a: [[T; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
                    for k in 0..3 {
                        a[eqs[k]][vars[k]] = T::one();
                    }
                    let (um, ue) = Self::diagonal(&a).macaulay_pair(vars, eqs);
                    let norm = um.div(&ue);
                    return Ok(dm.div(&de).div(&norm));
                }
            }
        }
        Err(Error::Singular("extraneous Macaulay minor vanishes for every ordering and substitution".into()))
    }
}

/// Exact rational triple.
pub type RationalTriple = QuadricTriple<BigRational>;
/// Complex floating-point triple.
pub type ComplexTriple = QuadricTriple<Complex64>;

/// Normalized resultant of a rational triple.
pub fn macaulay_resultant(t: &RationalTriple) -> Result<BigRational> {
    t.resultant()
}

/// Both covariance laws for one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub resultant: String,
    pub det_p: String,
    /// `R(A·P)`.
    pub combined: String,
    /// `R(A^P)`.
    pub substituted: String,
    /// `R(A·P) = det(P)⁴ R(A)`.
    pub combination_law: bool,
    /// `R(A^P) = det(P)⁸ R(A)`.
    pub substitution_law: bool,
}

pub fn det3<T: Scalar>(p: &[[T; 3]; 3]) -> T {
    let rows: Vec<Vec<T>> = p.iter().map(|r| r.to_vec()).collect();
    det(&rows)
}

/// Checks `R(A·P) = det(P)⁴R(A)` and `R(A^P) = det(P)⁸R(A)` exactly.
pub fn covariance_check(t: &RationalTriple, p: &[[BigRational; 3]; 3]) -> Result<CovarianceReport> {
    let d = det3(p);
    if Scalar::is_zero(&d) {
        return Err(Error::InvalidArgument("P must be invertible".into()));
    }
    let r = macaulay_resultant(t)?;
    let rc = macaulay_resultant(&t.combine(p))?;
    let rs = macaulay_resultant(&t.substitute(p))?;
    Ok(CovarianceReport {
        resultant: r.to_string(),
        det_p: d.to_string(),
        combined: rc.to_string(),
        substituted: rs.to_string(),
        combination_law: rc == Scalar::pow(&d, 4).mul(&r),
        substitution_law: rs == Scalar::pow(&d, 8).mul(&r),
    })
}

/// Parses a rational from a JSON integer or a `"p/q"` / `"p"` string.
pub fn parse_rational(v: &Value) -> Result<BigRational> {
    let bad = || Error::Serde(format!("not a rational: {v}"));
    match v {
        Value::Number(n) => n.as_i64().map(|x| BigRational::from_integer(BigInt::from(x))).ok_or_else(bad),
        Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let num: BigInt = num.parse().map_err(|_| bad())?;
            let den: BigInt = den.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad()),
    }
}

/// Reads `{"triple": [S1, S2, S3]}` (or a bare array) with each `S` a 3×3 array.
pub fn triple_from_json(v: &Value) -> Result<RationalTriple> {
    let arr = v.get("triple").unwrap_or(v);
    let forms = arr.as_array().filter(|a| a.len() == 3).ok_or_else(|| Error::Serde("expected three 3×3 matrices".into()))?;
    let mut out: Vec<Sym3<BigRational>> = Vec::new();
    for f in forms {
        let rows = f.as_array().filter(|a| a.len() == 3).ok_or_else(|| Error::Serde("matrix must have 3 rows".into()))?;
        let mut m: Vec<[BigRational; 3]> = Vec::new();
        for row in rows {
            let r = row.as_array().filter(|a| a.len() == 3).ok_or_else(|| Error::Serde("row must have 3 entries".into()))?;
            let vals: Vec<BigRational> = r.iter().map(parse_rational).collect::<Result<_>>()?;
            m.push([vals[0].clone(), vals[1].clone(), vals[2].clone()]);
        }
        out.push([m[0].clone(), m[1].clone(), m[2].clone()]);
    }
    QuadricTriple::new([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// JSON form of an exact rational: numerator and denominator strings.
pub fn rational_json(r: &BigRational) -> Value {
    serde_json::json!({ "numerator": r.numer().to_string(), "denominator": r.denom().to_string() })
}

/// Whether a nonzero rational is positive.
pub fn is_positive(r: &BigRational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_i64(x)
    }

    fn diag(a: [[i64; 3]; 3]) -> RationalTriple {
        QuadricTriple::diagonal(&a.map(|r| r.map(q)))
    }

    #[test]
    fn unit_triple_has_resultant_one() {
        assert_eq!(macaulay_resultant(&RationalTriple::unit()).unwrap(), q(1));
    }

    #[test]
    fn diagonal_triple_gives_fourth_power_of_det() {
        let a = [[2, 1, 0], [0, 3, -1], [1, 1, 1]];
        let d: i64 = 2 * (3 + 1) - (0 + 1);
        assert_eq!(macaulay_resultant(&diag(a)).unwrap(), q(d.pow(4)));
    }

    #[test]
    fn zero_corner_uses_another_ordering() {
        // a11 = 0 kills the extraneous minor for the default ordering
        let a = [[0, 1, 2], [1, 0, 1], [3, 1, 0]];
        let d: i64 = 0 * (0 - 1) - 1 * (0 - 3) + 2 * (1 - 0);
        assert_eq!(macaulay_resultant(&diag(a)).unwrap(), q(d.pow(4)));
    }

    #[test]
    fn common_point_gives_zero() {
        // all forms vanish at (1:0:0)
        let f = |a: i64, b: i64, c: i64| [[q(0), q(a), q(b)], [q(a), q(c), q(1)], [q(b), q(1), q(a + c)]];
        let t = QuadricTriple::new([f(1, 2, 3), f(-1, 0, 2), f(2, 1, -1)]).unwrap();
        assert_eq!(macaulay_resultant(&t).unwrap(), q(0));
    }

    #[test]
    fn scaling_p_on_unit_triple() {
        let p = [[q(2), q(0), q(0)], [q(0), q(1), q(0)], [q(0), q(0), q(1)]];
        let rep = covariance_check(&RationalTriple::unit(), &p).unwrap();
        assert_eq!(rep.combined, "16");
        assert_eq!(rep.substituted, "256");
        assert!(rep.combination_law && rep.substitution_law);
    }

    #[test]
    fn complex_unit_triple() {
        let r = ComplexTriple::unit().resultant().unwrap();
        assert!((r - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn json_triple_parses_fractions() {
        let v = serde_json::json!({"triple": [[[1,0,0],[0,0,0],[0,0,0]], [[0,0,0],[0,"1/2",0],[0,0,0]], [[0,0,0],[0,0,0],[0,0,"2"]]]});
        let t = triple_from_json(&v).unwrap();
        assert_eq!(macaulay_resultant(&t).unwrap(), q(1));
    }
}
