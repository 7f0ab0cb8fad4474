//! Truncated Laurent series in `q^{1/den}` with Gaussian-integer coefficients.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::gauss::{binomials, GaussInt};
use crate::error::{Error, Result};

/// A truncated Laurent series `Σ a_e q^{e/den}`.
///
/// Only terms with `e < order·den` are known; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSeries {
    den: i64,
    order: i64,
    terms: BTreeMap<i64, GaussInt>,
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

impl ExactSeries {
    pub fn zero(den: i64, order: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument(format!("denominator {den} must be positive")));
        }
        Ok(ExactSeries { den, order, terms: BTreeMap::new() })
    }

    /// The constant series `1 + O(q^order)`.
    pub fn one(den: i64, order: i64) -> Result<Self> {
        let mut s = Self::zero(den, order)?;
        s.set(0, GaussInt::ONE)?;
        Ok(s)
    }

    pub fn from_terms(den: i64, order: i64, terms: impl IntoIterator<Item = (i64, GaussInt)>) -> Result<Self> {
        let mut s = Self::zero(den, order)?;
        for (e, c) in terms {
            let cur = s.coeff(e);
            s.set(e, cur.checked_add(c)?)?;
        }
        Ok(s)
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    fn bound(&self) -> i64 {
        self.order * self.den
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, GaussInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> GaussInt {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    /// Sets the coefficient of `q^{e/den}`; terms beyond the truncation are dropped.
    pub fn set(&mut self, e: i64, c: GaussInt) -> Result<()> {
        if e >= self.bound() {
            return Ok(());
        }
        if c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
        Ok(())
    }

    /// Smallest exponent numerator carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Drops terms at or beyond `q^order`; never raises the order.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let bound = order * self.den;
        ExactSeries {
            den: self.den,
            order,
            terms: self.terms.range(..bound).map(|(e, c)| (*e, *c)).collect(),
        }
    }

    fn check_den(&self, other: &Self) -> Result<()> {
        if self.den != other.den {
            return Err(Error::DenominatorMismatch(self.den, other.den));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_den(other)?;
        let mut out = Self::zero(self.den, self.order.min(other.order))?;
        for (e, c) in self.terms().chain(other.terms()) {
            let cur = out.coeff(e);
            out.set(e, cur.checked_add(c)?)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<Self> {
        self.scale(GaussInt::from_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn scale(&self, k: GaussInt) -> Result<Self> {
        let mut out = Self::zero(self.den, self.order)?;
        for (e, c) in self.terms() {
            out.set(e, c.checked_mul(k)?)?;
        }
        Ok(out)
    }

    /// Product; the order is the pessimistic validity bound, floored to an integer.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_den(other)?;
        let d = self.den;
        let va = self.valuation().unwrap_or(self.bound());
        let vb = other.valuation().unwrap_or(other.bound());
        let bound = (self.bound() + vb).min(other.bound() + va);
        let order = floor_div(bound, d);
        let mut out = Self::zero(d, order)?;
        let lim = order * d;
        let mut acc: BTreeMap<i64, GaussInt> = BTreeMap::new();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms.range(..lim - ea) {
                let slot = acc.entry(ea + eb).or_default();
                *slot = slot.checked_add(ca.checked_mul(*cb)?)?;
            }
        }
        for (e, c) in acc {
            out.set(e, c)?;
        }
        Ok(out)
    }

    /// Multiplies by `q^{shift/den}`, moving the order by the same amount (floored).
    pub fn shift(&self, shift: i64) -> Result<Self> {
        let order = floor_div(self.bound() + shift, self.den);
        let mut out = Self::zero(self.den, order)?;
        for (e, c) in self.terms() {
            out.set(e + shift, c)?;
        }
        Ok(out)
    }

    /// Re-expresses the series over `q^{1/(den·k)}`.
    pub fn refine_den(&self, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::InvalidArgument("refinement factor must be positive".into()));
        }
        ExactSeries::from_terms(self.den * k, self.order, self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Re-expresses over `q^{1/new_den}` when every exponent allows it.
    pub fn with_den(&self, new_den: i64) -> Result<Self> {
        if new_den % self.den == 0 {
            return self.refine_den(new_den / self.den);
        }
        if self.den % new_den != 0 {
            return Err(Error::InvalidArgument(format!("cannot convert den {} to {new_den}", self.den)));
        }
        let k = self.den / new_den;
        if self.terms.keys().any(|e| e % k != 0) {
            return Err(Error::InvalidArgument(format!("exponents not divisible by {k}")));
        }
        ExactSeries::from_terms(new_den, self.order, self.terms().map(|(e, c)| (e / k, c)))
    }

    /// Substitutes `q ↦ q^m` (`m ≥ 1`).
    pub fn substitute(&self, m: i64) -> Result<Self> {
        if m <= 0 {
            return Err(Error::InvalidArgument("substitution power must be positive".into()));
        }
        ExactSeries::from_terms(self.den, self.order * m, self.terms().map(|(e, c)| (e * m, c)))
    }

    /// Multiplicative inverse of a series whose leading coefficient is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::InvalidArgument("cannot invert zero series".into()))?;
        let lead = self.coeff(v);
        // work with the normalized series 1 + ..., then shift back
        let prec = self.bound() - v;
        let base: Vec<(i64, GaussInt)> = self
            .terms()
            .map(|(e, c)| Ok((e - v, c.div_unit(lead)?)))
            .collect::<Result<_>>()?;
        let mut inv: BTreeMap<i64, GaussInt> = BTreeMap::new();
        inv.insert(0, GaussInt::ONE);
        for n in 1..prec {
            let mut s = GaussInt::ZERO;
            for (e, c) in base.iter().skip(1) {
                if *e > n {
                    break;
                }
                if let Some(b) = inv.get(&(n - e)) {
                    s = s.checked_add(c.checked_mul(*b)?)?;
                }
            }
            if !s.is_zero() {
                inv.insert(n, s.checked_neg()?);
            }
        }
        let order = floor_div(prec - v, self.den);
        let mut out = Self::zero(self.den, order)?;
        for (e, c) in inv {
            out.set(e - v, c.div_unit(lead)?)?;
        }
        Ok(out)
    }

    /// `self^k` for any integer `k` (negative powers need a unit leading coefficient).
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<ExactSeries> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        match acc {
            Some(a) => Ok(a),
            None => ExactSeries::one(self.den, self.order.max(0)),
        }
    }

    /// Exact equality of all known coefficients up to the smaller order.
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
            .map(|(e, c)| json!([e, c.re.to_string(), c.im.to_string()]))
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
            if t.len() != 3 {
                return Err(bad("term must be [e, re, im]"));
            }
            let e = t[0].as_i64().ok_or_else(|| bad("bad exponent"))?;
            let re = parse_int(&t[1])?;
            let im = parse_int(&t[2])?;
            s.set(e, GaussInt::new(re, im))?;
        }
        Ok(s)
    }
}

pub(crate) fn parse_int(v: &Value) -> Result<i128> {
    match v {
        Value::String(s) => s.parse().map_err(|_| Error::Serde(format!("bad integer {s}"))),
        Value::Number(n) => n.as_i64().map(i128::from).ok_or_else(|| Error::Serde("bad integer".into())),
        _ => Err(Error::Serde("expected integer".into())),
    }
}

/// `(1 + sign·q^m)^k` truncated at `q^order`, over `den = 1`.
pub fn factor_power(m: i64, sign: i64, k: i64, order: i64) -> Result<ExactSeries> {
    if m <= 0 || (sign != 1 && sign != -1) {
        return Err(Error::InvalidArgument(format!("factor_power needs m > 0, sign = ±1 (got {m}, {sign})")));
    }
    let jmax = if order <= 0 { 0 } else { ((order - 1) / m) as usize };
    let bin = binomials(k as i128, jmax)?;
    let mut s = ExactSeries::zero(1, order)?;
    for (j, b) in bin.into_iter().enumerate() {
        let c = if sign == -1 && j % 2 == 1 { -b } else { b };
        s.set(m * j as i64, GaussInt::from_int(c))?;
    }
    Ok(s)
}

/// `∏_{n ≥ 1} (1 - q^n)` by Euler's pentagonal number theorem, over `den = 1`.
pub fn euler_product(order: i64) -> Result<ExactSeries> {
    let mut s = ExactSeries::zero(1, order)?;
    s.set(0, GaussInt::ONE)?;
    let mut k: i64 = 1;
    loop {
        let p1 = k * (3 * k - 1) / 2;
        let p2 = k * (3 * k + 1) / 2;
        if p1 >= order {
            break;
        }
        let c = if k % 2 == 1 { -1 } else { 1 };
        s.set(p1, GaussInt::from_int(c))?;
        s.set(p2, GaussInt::from_int(c))?;
        k += 1;
    }
    Ok(s)
}

/// `η(mτ) = q^{m/24} ∏ (1 - q^{mn})` with `den = 24`.
pub fn eta_series(m: i64, order: i64) -> Result<ExactSeries> {
    if m <= 0 {
        return Err(Error::InvalidArgument("eta level must be positive".into()));
    }
    let base = euler_product(order)?.substitute(m)?.truncate(order);
    base.refine_den(24)?.shift(m)
}

/// The eta quotient `∏ η(m τ)^k` truncated at `q^order`, over `den = 24`.
pub fn eta_quotient(factors: &[(i64, i64)], order: i64) -> Result<ExactSeries> {
    let mut lead: i64 = 0;
    for (m, k) in factors {
        if *m <= 0 {
            return Err(Error::InvalidArgument("eta level must be positive".into()));
        }
        lead += m * k;
    }
    // the product part must be known up to order - lead/24, rounded up
    let need = order - floor_div(lead, 24);
    let mut prod = ExactSeries::one(1, need.max(0))?;
    for (m, k) in factors {
        let e = euler_product(need.max(0))?.substitute(*m)?.truncate(need.max(0));
        prod = prod.mul(&e.pow(*k)?)?;
    }
    Ok(prod.refine_den(24)?.shift(lead)?.truncate(order))
}

/// Coefficients `c(n)`, `n = -1..=max_n`, of `η(τ)^{-8} η(2τ)^8 η(4τ)^{-8}`.
pub fn c_coeffs(max_n: i64) -> Result<Vec<i128>> {
    if max_n < -1 {
        return Err(Error::InvalidArgument("max_n must be at least -1".into()));
    }
    let s = eta_quotient(&[(1, -8), (2, 8), (4, -8)], max_n + 1)?.with_den(1)?;
    Ok((-1..=max_n).map(|n| s.coeff(n).re).collect())
}

/// Lookup table for `c(n)` with `c(n) = 0` for `n < -1`.
#[derive(Clone, Debug)]
pub struct CTable {
    values: Vec<i128>,
}

impl CTable {
    pub fn new(max_n: i64) -> Result<Self> {
        Ok(CTable { values: c_coeffs(max_n)? })
    }

    pub fn max_n(&self) -> i64 {
        self.values.len() as i64 - 2
    }

    pub fn get(&self, n: i64) -> Result<i128> {
        if n < -1 {
            return Ok(0);
        }
        self.values
            .get((n + 1) as usize)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("c({n}) beyond table bound {}", self.max_n())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagonal_matches_factor_product() {
        let order = 30;
        let mut direct = ExactSeries::one(1, order).unwrap();
        for n in 1..order {
            direct = direct.mul(&factor_power(n, -1, 1, order).unwrap()).unwrap();
        }
        assert!(direct.agrees_with(&euler_product(order).unwrap()));
    }

    #[test]
    fn inverse_roundtrip() {
        let e = euler_product(20).unwrap();
        let p = e.mul(&e.inverse().unwrap()).unwrap();
        assert!(p.agrees_with(&ExactSeries::one(1, 20).unwrap()));
    }

    #[test]
    fn eta_leading_term() {
        let e = eta_series(2, 5).unwrap();
        assert_eq!(e.den(), 24);
        assert_eq!(e.valuation(), Some(2));
        assert_eq!(e.coeff(2), GaussInt::ONE);
        assert_eq!(e.coeff(2 + 48), GaussInt::from_int(-1));
    }

    #[test]
    fn c_leading_values() {
        let c = c_coeffs(4).unwrap();
        assert_eq!(c, vec![1, 8, 36, 128, 402, 1152]);
    }

    #[test]
    fn den_mismatch_rejected() {
        let a = ExactSeries::one(1, 3).unwrap();
        let b = ExactSeries::one(2, 3).unwrap();
        assert_eq!(a.mul(&b), Err(Error::DenominatorMismatch(1, 2)));
    }

    #[test]
    fn json_roundtrip() {
        let e = eta_series(1, 6).unwrap();
        let back = ExactSeries::from_json(&e.to_json()).unwrap();
        assert_eq!(e, back);
    }
}
