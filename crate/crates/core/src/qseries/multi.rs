//! Truncated series in three variables `q11, q12, q22`, each raised to `e/den`.
//!
//! The truncation is on the total degree `(e11 + e22)/den` with `e11, e22 ≥ 0`;
//! the cross exponent `e12` may take either sign. Products stay finite as long
//! as each factor has finitely many terms per total degree.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::gauss::GaussInt;
use super::series::{parse_int, ExactSeries};
use crate::error::{Error, Result};

pub type Exp3 = (i64, i64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    den: i64,
    order: i64,
    terms: BTreeMap<Exp3, GaussInt>,
}

impl MultiSeries {
    pub fn zero(den: i64, order: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument(format!("denominator {den} must be positive")));
        }
        Ok(MultiSeries { den, order, terms: BTreeMap::new() })
    }

    pub fn one(den: i64, order: i64) -> Result<Self> {
        let mut s = Self::zero(den, order)?;
        s.set((0, 0, 0), GaussInt::ONE)?;
        Ok(s)
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp3, GaussInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exp3) -> GaussInt {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    /// Sets a coefficient; exponents past the truncation are ignored.
    pub fn set(&mut self, e: Exp3, c: GaussInt) -> Result<()> {
        let (a, _, d) = e;
        if a < 0 || d < 0 {
            return Err(Error::InvalidArgument(format!("exponent {e:?} has a negative diagonal part")));
        }
        if a + d >= self.order * self.den {
            return Ok(());
        }
        if c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
        Ok(())
    }

    fn add_to(&mut self, e: Exp3, c: GaussInt) -> Result<()> {
        let cur = self.coeff(e);
        self.set(e, cur.checked_add(c)?)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let bound = order * self.den;
        MultiSeries {
            den: self.den,
            order,
            terms: self
                .terms
                .iter()
                .filter(|((a, _, d), _)| a + d < bound)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.den != other.den {
            return Err(Error::DenominatorMismatch(self.den, other.den));
        }
        let mut out = Self::zero(self.den, self.order.min(other.order))?;
        for (e, c) in self.terms().chain(other.terms()) {
            out.add_to(e, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: GaussInt) -> Result<Self> {
        let mut out = Self::zero(self.den, self.order)?;
        for (e, c) in self.terms() {
            out.set(e, c.checked_mul(k)?)?;
        }
        Ok(out)
    }

    /// Product; exponents never go negative, so the order is the minimum of the two.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.den != other.den {
            return Err(Error::DenominatorMismatch(self.den, other.den));
        }
        let order = self.order.min(other.order);
        let bound = order * self.den;
        let mut by_total: BTreeMap<i64, Vec<(Exp3, GaussInt)>> = BTreeMap::new();
        for (e, c) in other.terms() {
            by_total.entry(e.0 + e.2).or_default().push((e, c));
        }
        let mut acc: BTreeMap<Exp3, GaussInt> = BTreeMap::new();
        for ((a1, b1, d1), c1) in self.terms() {
            let t1 = a1 + d1;
            for (_, group) in by_total.range(..bound - t1) {
                for ((a2, b2, d2), c2) in group {
                    let slot = acc.entry((a1 + a2, b1 + b2, d1 + d2)).or_default();
                    *slot = slot.checked_add(c1.checked_mul(*c2)?)?;
                }
            }
        }
        let mut out = Self::zero(self.den, order)?;
        for (e, c) in acc {
            out.set(e, c)?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.den, self.order)?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Re-expresses over `q^{1/new_den}` when every exponent allows it.
    pub fn with_den(&self, new_den: i64) -> Result<Self> {
        if new_den <= 0 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        let mut out = Self::zero(new_den, self.order)?;
        for ((a, b, d), c) in self.terms() {
            let conv = |x: i64| -> Result<i64> {
                let n = x * new_den;
                if n % self.den != 0 {
                    return Err(Error::InvalidArgument(format!("exponent {x}/{} not expressible over {new_den}", self.den)));
                }
                Ok(n / self.den)
            };
            out.set((conv(a)?, conv(b)?, conv(d)?), c)?;
        }
        Ok(out)
    }

    /// Outer product `f(q11)·g(q22)` of two one-variable series with nonnegative exponents.
    pub fn outer(f: &ExactSeries, g: &ExactSeries) -> Result<Self> {
        if f.den() != g.den() {
            return Err(Error::DenominatorMismatch(f.den(), g.den()));
        }
        let order = f.order().min(g.order());
        let mut out = Self::zero(f.den(), order)?;
        for (a, ca) in f.terms() {
            for (d, cd) in g.terms() {
                out.set((a, 0, d), ca.checked_mul(cd)?)?;
            }
        }
        Ok(out)
    }

    /// Smallest total degree `e11 + e22` carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().map(|(a, _, d)| a + d).min()
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.den != other.den {
            return false;
        }
        let order = self.order.min(other.order);
        self.truncate(order).terms == other.truncate(order).terms
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|((a, b, d), c)| json!([a, b, d, c.re.to_string(), c.im.to_string()]))
            .collect();
        json!({ "den": self.den, "order": self.order, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Serde(m.to_string());
        let den = v["den"].as_i64().ok_or_else(|| bad("missing den"))?;
        let order = v["order"].as_i64().ok_or_else(|| bad("missing order"))?;
        let mut s = Self::zero(den, order)?;
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let t = t.as_array().ok_or_else(|| bad("term is not an array"))?;
            if t.len() != 5 {
                return Err(bad("term must be [e11, e12, e22, re, im]"));
            }
            let e: Vec<i64> = t[..3]
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("bad exponent")))
                .collect::<Result<_>>()?;
            s.set((e[0], e[1], e[2]), GaussInt::new(parse_int(&t[3])?, parse_int(&t[4])?))?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_exponents_are_nonnegative() {
        let mut s = MultiSeries::zero(1, 5).unwrap();
        assert!(s.set((-1, 0, 1), GaussInt::ONE).is_err());
        assert!(s.set((1, -5, 1), GaussInt::ONE).is_ok());
        assert!(s.set((0, 3, 0), GaussInt::ONE).is_ok());
    }

    #[test]
    fn product_truncates_on_total_degree() {
        let mut s = MultiSeries::one(1, 3).unwrap();
        s.set((1, 1, 0), GaussInt::ONE).unwrap();
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.coeff((1, 1, 0)), GaussInt::from_int(2));
        assert_eq!(sq.coeff((2, 2, 0)), GaussInt::ONE);
        let cube = sq.mul(&s).unwrap();
        assert_eq!(cube.coeff((3, 3, 0)), GaussInt::ZERO);
    }

    #[test]
    fn json_roundtrip() {
        let mut s = MultiSeries::one(4, 2).unwrap();
        s.set((1, -1, 2), GaussInt::new(3, -7)).unwrap();
        assert_eq!(MultiSeries::from_json(&s.to_json()).unwrap(), s);
    }
}
