//! The 3×6 coefficient matrix `M(λ1, λ2)` of the product-type (2,2,2) model,
//! its maximal minors and the diagonal quadric triples of each partition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::resultant::QuadricTriple;
use crate::theta::{LambdaFactor, Partition};

/// Commutative ring operations used to build minors over several coefficient types.
pub trait Ring: Clone + PartialEq {
    fn int(n: i64) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
}

impl Ring for BigRational {
    fn int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
}

impl Ring for Complex64 {
    fn int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
}

/// Polynomial in `λ1, λ2` with rational coefficients, keyed by `(deg λ1, deg λ2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Poly2 {
    pub fn lambda1() -> Self {
        Self::monomial(1, 0)
    }

    pub fn lambda2() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((a, b), BigRational::one());
        Poly2 { terms }
    }

    fn insert(&mut self, k: (u32, u32), c: BigRational) {
        let v = self.terms.remove(&k).unwrap_or_else(BigRational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, l1: &BigRational, l2: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, ((a, b), c)| {
            acc + c * num_traits::pow(l1.clone(), *a as usize) * num_traits::pow(l2.clone(), *b as usize)
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }
}

impl Ring for Poly2 {
    fn int(n: i64) -> Self {
        let mut p = Poly2::default();
        p.insert((0, 0), BigRational::int(n));
        p
    }
    fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(*k, c.clone());
        }
        out
    }
    fn minus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(*k, -c.clone());
        }
        out
    }
    fn times(&self, o: &Self) -> Self {
        let mut out = Poly2::default();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.insert((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

/// `M(λ1, λ2)`; columns are the coordinates `x0, x1, x2, y0, y1, y2`, numbered 1..6.
pub fn m_matrix<T: Ring>(l1: &T, l2: &T) -> [[T; 6]; 3] {
    let z = T::int(0);
    let one = T::int(1);
    let neg = |x: &T| z.minus(x);
    [
        [l1.minus(&one), neg(l1), one.clone(), z.clone(), z.clone(), z.clone()],
        [l2.clone(), neg(l2), z.clone(), neg(&one), z.clone(), one.clone()],
        [one.clone(), neg(&one), z.clone(), neg(&one), one.clone(), z],
    ]
}

/// `Δ_{ijk}`: the minor on columns `i < j < k` (1-based).
pub fn minor<T: Ring>(m: &[[T; 6]; 3], cols: [u8; 3]) -> T {
    let c = cols.map(|x| usize::from(x) - 1);
    let e = |r: usize, k: usize| &m[r][c[k]];
    let t1 = e(0, 0).times(&e(1, 1).times(e(2, 2)).minus(&e(1, 2).times(e(2, 1))));
    let t2 = e(0, 1).times(&e(1, 0).times(e(2, 2)).minus(&e(1, 2).times(e(2, 0))));
    let t3 = e(0, 2).times(&e(1, 0).times(e(2, 1)).minus(&e(1, 1).times(e(2, 0))));
    t1.minus(&t2).plus(&t3)
}

/// All twenty maximal minors, keyed by their ascending column triple.
pub fn all_minors<T: Ring>(m: &[[T; 6]; 3]) -> Vec<([u8; 3], T)> {
    let mut out = Vec::with_capacity(20);
    for a in 1..=6u8 {
        for b in a + 1..=6 {
            for c in b + 1..=6 {
                out.push(([a, b, c], minor(m, [a, b, c])));
            }
        }
    }
    out
}

/// `Δ_⟨J⟩ = Δ_J · Δ_{J^c}`.
pub fn delta_partition<T: Ring>(m: &[[T; 6]; 3], p: Partition) -> T {
    minor(m, p.j()).times(&minor(m, p.complement()))
}

/// A table factor as a polynomial in `λ`: `1`, `λ²` or `(λ−1)²`.
pub fn factor_poly(f: LambdaFactor, lambda: &Poly2) -> Poly2 {
    match f {
        LambdaFactor::One => Poly2::int(1),
        LambdaFactor::LambdaSq => lambda.times(lambda),
        LambdaFactor::LambdaMinusOneSq => {
            let d = lambda.minus(&Poly2::int(1));
            d.times(&d)
        }
    }
}

/// Diagonal triples `(A, B)` on the `J` and `J^c` coordinates: `A_i = diag(M_{i,J})`.
pub fn quadric_split<T: Ring + crate::resultant::Scalar>(p: Partition, l1: &T, l2: &T) -> Result<(QuadricTriple<T>, QuadricTriple<T>)> {
    if p == Partition::degenerate() {
        return Err(Error::InvalidArgument(
            "⟨123/456⟩ splits M into blocks with vanishing minors Δ123 = Δ456 = 0; both triples are degenerate".into(),
        ));
    }
    let m = m_matrix(l1, l2);
    let pick = |cols: [u8; 3]| -> [[T; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|k| m[i][usize::from(cols[k]) - 1].clone()))
    };
    Ok((QuadricTriple::diagonal(&pick(p.j())), QuadricTriple::diagonal(&pick(p.complement()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::minor_table;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn blocks_of_the_degenerate_split_vanish() {
        let m = m_matrix(&Poly2::lambda1(), &Poly2::lambda2());
        assert!(minor(&m, [1, 2, 3]).is_zero());
        assert!(minor(&m, [4, 5, 6]).is_zero());
        assert_eq!(all_minors(&m).len(), 20);
    }

    #[test]
    fn squared_partition_minors_match_the_table() {
        let (l1, l2) = (Poly2::lambda1(), Poly2::lambda2());
        let m = m_matrix(&l1, &l2);
        for (p, f, g) in minor_table() {
            let d = delta_partition(&m, p);
            let want = factor_poly(f, &l1).times(&factor_poly(g, &l2));
            assert_eq!(d.times(&d), want, "{p}");
        }
    }

    #[test]
    fn symbolic_and_rational_minors_agree() {
        let (a, b) = (q(3, 7), q(-5, 2));
        let ms = m_matrix(&Poly2::lambda1(), &Poly2::lambda2());
        let mr = m_matrix(&a, &b);
        for ((c1, s), (c2, r)) in all_minors(&ms).into_iter().zip(all_minors(&mr)) {
            assert_eq!(c1, c2);
            assert_eq!(s.eval(&a, &b), r);
        }
    }

    #[test]
    fn split_resultants_are_fourth_powers_of_the_partition_minor() {
        let (a, b) = (q(2, 3), q(7, 5));
        let m = m_matrix(&a, &b);
        for p in Partition::admissible() {
            let (ta, tb) = quadric_split(p, &a, &b).unwrap();
            let r = ta.resultant().unwrap() * tb.resultant().unwrap();
            let d = delta_partition(&m, p);
            assert_eq!(r, num_traits::pow(d, 4), "{p}");
        }
        assert!(quadric_split(Partition::degenerate(), &a, &b).is_err());
    }
}
