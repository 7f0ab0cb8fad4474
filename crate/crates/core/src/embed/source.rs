//! Source lattices spanned by classes of 2-forms on a principally polarized
//! abelian surface, with the intersection pairing computed from wedge products.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which transcendental sublattice the family is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceCase {
    /// Products of two elliptic curves: rank 4, variables `τ1, τ2`.
    Product,
    /// Jacobians of genus-2 curves: rank 5, variable a Siegel matrix `T`.
    Jacobian,
}

impl SourceCase {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(SourceCase::Product),
            "jacobian" => Ok(SourceCase::Jacobian),
            _ => Err(Error::InvalidArgument(format!("unknown source case {s}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SourceCase::Product => "product",
            SourceCase::Jacobian => "jacobian",
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            SourceCase::Product => 4,
            SourceCase::Jacobian => 5,
        }
    }
}

/// Positions of the `H¹` basis in the orientation `a1 ∧ b1 ∧ a2 ∧ b2`.
const A1: usize = 0;
const B1: usize = 1;
const A2: usize = 2;
const B2: usize = 3;

/// A 2-form as a list of `(coefficient, i, j)` meaning `coef · x_i ∧ x_j`.
type TwoForm = Vec<(i64, usize, usize)>;

/// Source labels in search order, with their 2-form representatives.
fn label_forms(case: SourceCase) -> Vec<(&'static str, TwoForm)> {
    let mut v = vec![
        ("e", vec![(1, B1, B2)]),
        ("f'", vec![(1, A1, A2)]),
        ("a", vec![(1, A2, B1)]),
        ("b", vec![(1, A1, B2)]),
    ];
    if case == SourceCase::Jacobian {
        v.push(("c", vec![(1, A1, B1), (-1, A2, B2)]));
    }
    v
}

fn perm_sign(idx: [usize; 4]) -> i64 {
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0;
            }
        }
    }
    let mut s = 1;
    let mut p = idx;
    for i in 0..4 {
        for j in 0..3 - i {
            if p[j] > p[j + 1] {
                p.swap(j, j + 1);
                s = -s;
            }
        }
    }
    s
}

/// Cup product `∫ ω ∧ η` against the orientation class.
fn cup(x: &TwoForm, y: &TwoForm) -> i64 {
    let mut s = 0;
    for (c1, i, j) in x {
        for (c2, k, l) in y {
            s += c1 * c2 * perm_sign([*i, *j, *k, *l]);
        }
    }
    s
}

/// Index of `x_i ∧ x_j`, `i < j`, in a dense 6-vector.
fn pair_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

fn dense(x: &TwoForm) -> [i64; 6] {
    let mut v = [0i64; 6];
    for (c, i, j) in x {
        let s = if i < j { 1 } else { -1 };
        v[pair_index(*i, *j)] += s * c;
    }
    v
}

fn sparse(v: &[i64; 6]) -> TwoForm {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    PAIRS.iter().zip(v).filter(|(_, c)| **c != 0).map(|((i, j), c)| (*c, *i, *j)).collect()
}

/// The class of the genus-2 theta divisor, `a1 ∧ b1 + a2 ∧ b2`.
fn polarization() -> TwoForm {
    vec![(1, A1, B1), (1, A2, B2)]
}

/// For a vector of the Jacobian source given by rational label coordinates, the splitting
/// `H¹ = W1 ⊕ W2` (mod 2) of the diagonal Humbert component it cuts out.
///
/// The primitive integral vector `x` on the line must have undoubled norm `-2` with
/// `x ≡ Θ` mod 2; then `E1 = (Θ + x)/2` and `E2 = Θ - E1` are the two elliptic factors. The
/// returned key is the smaller of their reductions mod 2 as 6-bit masks, or `None` when the
/// vector does not cut out such a component.
pub fn humbert_splitting(coords: &[num_rational::Ratio<i128>]) -> Option<u8> {
    let forms = label_forms(SourceCase::Jacobian);
    if coords.len() != forms.len() || coords.iter().all(|x| *x.numer() == 0) {
        return None;
    }
    let den = coords.iter().fold(1i128, |d, x| num_integer::lcm(d, *x.denom()));
    let ints: Vec<i128> = coords.iter().map(|x| (*x * den).to_integer()).collect();
    let g = ints.iter().fold(0i128, |g, x| num_integer::gcd(g, *x));
    let mut x = [0i64; 6];
    for (t, (_, f)) in ints.iter().zip(&forms) {
        let d = dense(f);
        for i in 0..6 {
            x[i] += (t / g) as i64 * d[i];
        }
    }
    let xs = sparse(&x);
    if cup(&xs, &xs) != -2 {
        return None;
    }
    let theta = dense(&polarization());
    let mut e1 = [0i64; 6];
    for i in 0..6 {
        let s = theta[i] + x[i];
        if s % 2 != 0 {
            return None;
        }
        e1[i] = s / 2;
    }
    let mask = |v: [i64; 6]| -> u8 { v.iter().enumerate().fold(0u8, |m, (i, c)| m | ((c.rem_euclid(2) as u8) << i)) };
    let m1 = mask(e1);
    let m2 = m1 ^ mask(theta);
    Some(m1.min(m2))
}

/// The source lattice: labels and the Gram matrix of the doubled cup product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceLattice {
    pub case: SourceCase,
    pub labels: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

/// Gram matrix of the source lattice, doubled as the pullback to the Enriques cover requires.
pub fn derive_source_gram(case: SourceCase) -> SourceLattice {
    let forms = label_forms(case);
    let gram = forms
        .iter()
        .map(|(_, x)| forms.iter().map(|(_, y)| 2 * cup(x, y)).collect())
        .collect();
    SourceLattice { case, labels: forms.iter().map(|(l, _)| l.to_string()).collect(), gram }
}

/// Period vector coefficients in the label basis at the Siegel point `T`
/// (`T12` must be zero in the product case).
pub fn period_vector(case: SourceCase, t: [[Complex64; 2]; 2]) -> Result<Vec<Complex64>> {
    if case == SourceCase::Product && t[0][1].norm() > 0.0 {
        return Err(Error::InvalidArgument("product periods need a diagonal T".into()));
    }
    let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    let mut v = vec![det, Complex64::new(1.0, 0.0), t[0][0], -t[1][1]];
    if case == SourceCase::Jacobian {
        v.push(-t[0][1]);
    }
    Ok(v)
}

/// `⟨v, w⟩` for complex coefficient vectors in the label basis.
pub fn pair_complex(gram: &[Vec<i64>], v: &[Complex64], w: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            s += v[i] * w[j] * (*g as f64);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::linalg::signature;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_vector_splits_along_the_first_pair() {
        use num_rational::Ratio;
        let q = |v: &[i128]| v.iter().map(|x| Ratio::from_integer(*x)).collect::<Vec<_>>();
        // c = a1∧b1 - a2∧b2 cuts out T12 = 0, where E1 = a1∧b1
        let key = humbert_splitting(&q(&[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(key, 1u8 << pair_index(A1, B1));
        assert_eq!(humbert_splitting(&q(&[0, 0, 0, 0, -1])), Some(key));
        // e + f' has norm -2 but is not congruent to Θ
        assert_eq!(humbert_splitting(&q(&[1, 1, 0, 0, 0])), None);
    }

    #[test]
    fn product_gram_is_two_scaled_hyperbolic_planes() {
        let s = derive_source_gram(SourceCase::Product);
        assert_eq!(
            s.gram,
            vec![vec![0, -2, 0, 0], vec![-2, 0, 0, 0], vec![0, 0, 0, -2], vec![0, 0, -2, 0]]
        );
        assert_eq!(signature(&s.gram).unwrap(), (2, 2));
    }

    #[test]
    fn jacobian_gram_adds_norm_minus_four() {
        let s = derive_source_gram(SourceCase::Jacobian);
        assert_eq!(s.gram[4], vec![0, 0, 0, 0, -4]);
        assert_eq!(signature(&s.gram).unwrap(), (2, 3));
    }

    #[test]
    fn periods_are_isotropic_and_positive() {
        for case in [SourceCase::Product, SourceCase::Jacobian] {
            let g = derive_source_gram(case).gram;
            let t12 = if case == SourceCase::Jacobian { c(0.3, 0.2) } else { c(0.0, 0.0) };
            let t = [[c(0.4, 1.3), t12], [t12, c(-0.2, 0.9)]];
            let w = period_vector(case, t).unwrap();
            assert!(pair_complex(&g, &w, &w).norm() < 1e-12);
            let wb: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
            let p = pair_complex(&g, &w, &wb);
            let dety = t[0][0].im * t[1][1].im - t[0][1].im * t[0][1].im;
            assert!((p.re - 8.0 * dety).abs() < 1e-12 && p.im.abs() < 1e-12);
        }
    }
}
