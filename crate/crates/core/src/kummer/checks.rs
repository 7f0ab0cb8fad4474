//! End-to-end identities: the resultant–period–theta norm identity at
//! product-type points, and theta 8th-power matches of restricted expansions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::quadric_split;
use super::periods::{period_quantities, ProductPoint};
use crate::embed::{Embedding, SourceCase};
use crate::error::{Error, Result};
use crate::phi::{restricted_expansion, ExpansionStats};
use crate::qseries::{GaussInt, MultiSeries};
use crate::theta::{eps_delta_table, ev_table, theta1, theta1_pow8, theta2_pow8, Char1, Char2, Partition};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormIdentityReport {
    pub partition: String,
    pub eps: u8,
    pub delta: u8,
    /// `|R(A)·R(B)|`, resultants of the split triples at `(λ1, λ2)`.
    pub resultant_product: f64,
    pub integral_x: f64,
    /// `((Im τ1 Im τ2)²|θ_ε(τ1)θ_δ(τ2)|⁸)²`.
    pub lhs: f64,
    /// `|R(A)R(B)|·(2π⁻⁴|∫ω∧ω̄|)⁴`.
    pub rhs: f64,
    pub residual: f64,
}

/// `(ε, δ)` attached to a partition.
pub fn eps_delta(p: Partition) -> Result<(Char1, Char1)> {
    eps_delta_table()
        .into_iter()
        .find(|(_, _, q)| *q == p)
        .map(|(e, d, _)| (e, d))
        .ok_or_else(|| Error::InvalidArgument(format!("{p} has no (ε, δ) entry")))
}

/// Compares the squared Petersson norm of `θ_ε(τ1)⁸θ_δ(τ2)⁸` with the
/// resultant-and-period side. The resultants are Macaulay evaluations in
/// double precision.
pub fn norm_identity_check(p: &ProductPoint, part: Partition) -> Result<NormIdentityReport> {
    let (e, d) = eps_delta(part)?;
    let (l1, l2) = (p.lambda1()?, p.lambda2()?);
    let (ta, tb) = quadric_split(part, &l1, &l2)?;
    let r: Complex64 = ta.resultant()? * tb.resultant()?;
    let ix = period_quantities(p)?.integral_x;
    let y = p.tau1.im * p.tau2.im;
    let th = (theta1(e, p.tau1)? * theta1(d, p.tau2)?).norm();
    let lhs = (y * y * th.powi(8)).powi(2);
    let rhs = r.norm() * (2.0 * ix / PI.powi(4)).powi(4);
    let residual = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(NormIdentityReport {
        partition: part.to_string(),
        eps: e.kind(),
        delta: d.kind(),
        resultant_product: r.norm(),
        integral_x: ix,
        lhs,
        rhs,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaMatch {
    /// `"ε,δ"` for the product case, the characteristic `[a; b]` for the Jacobian case.
    pub label: String,
    pub sign: i8,
    /// The partition the correspondence table attaches to this label.
    pub partition: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaMatchReport {
    pub case: SourceCase,
    pub level: u8,
    pub order: i64,
    pub matches: Vec<ThetaMatch>,
    pub candidates: usize,
    pub integral: bool,
    pub constant_term: i128,
    pub valuation: Option<i64>,
    pub terms: usize,
    pub stats: ExpansionStats,
}

impl ThetaMatchReport {
    /// Exactly one candidate matches, coefficients are rational integers, and the
    /// leading behaviour is constant term 1 at level 1, positive valuation at level 2.
    pub fn passes(&self) -> bool {
        let lead = match self.level {
            1 => self.constant_term == 1,
            _ => self.valuation.is_some_and(|v| v > 0),
        };
        self.matches.len() == 1 && self.integral && lead
    }
}

fn candidates(case: SourceCase, order: i64) -> Result<Vec<(String, Option<String>, MultiSeries)>> {
    match case {
        SourceCase::Product => {
            let table = eps_delta_table();
            let mut out = Vec::new();
            for e in Char1::ALL {
                for d in Char1::ALL {
                    let s = MultiSeries::outer(&theta1_pow8(e, order)?, &theta1_pow8(d, order)?)?;
                    let part = table.iter().find(|(a, b, _)| (*a, *b) == (e, d)).map(|(_, _, p)| p.to_string());
                    out.push((format!("{},{}", e.kind(), d.kind()), part, s));
                }
            }
            Ok(out)
        }
        SourceCase::Jacobian => {
            let table = ev_table();
            Char2::even()
                .into_iter()
                .map(|ch| {
                    let part = table.iter().find(|(ev, _)| ev.real_char() == ch).map(|(_, p)| p.to_string());
                    Ok((ch.to_string(), part, theta2_pow8(ch, order)?))
                })
                .collect()
        }
    }
}

/// Expands `Φ_ℓ` along the embedding's family and compares it with `±` every
/// candidate theta 8th power; an expansion matching none is an error.
pub fn theta_match_check(emb: &Embedding, order: i64) -> Result<ThetaMatchReport> {
    let pc = emb.period_coeffs()?;
    let exp = restricted_expansion(&pc, order)?;
    let series = &exp.series;
    let minus = GaussInt::from_int(-1);
    let cands = candidates(emb.case, order)?;
    let mut matches = Vec::new();
    for (label, partition, s) in &cands {
        if s.agrees_with(series) {
            matches.push(ThetaMatch { label: label.clone(), sign: 1, partition: partition.clone() });
        }
        if s.scale(minus)?.agrees_with(series) {
            matches.push(ThetaMatch { label: label.clone(), sign: -1, partition: partition.clone() });
        }
    }
    if matches.is_empty() {
        let lead: Vec<String> = series.terms().take(6).map(|(e, c)| format!("{e:?}:{c}")).collect();
        return Err(Error::NoMatch(format!(
            "{} expansion at level {} (order {order}) matches none of {} candidates; leading terms {}",
            emb.case.name(),
            emb.level,
            cands.len(),
            lead.join(" ")
        )));
    }
    let integral = series.terms().all(|(_, c)| c.im == 0);
    let report = ThetaMatchReport {
        case: emb.case,
        level: emb.level,
        order,
        matches,
        candidates: cands.len(),
        integral,
        constant_term: series.coeff((0, 0, 0)).re,
        valuation: series.valuation(),
        terms: series.len(),
        stats: exp.stats.clone(),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_identity_at_reference_points() {
        let cases = [
            ((0.0, 1.1), (0.9, 1.3), "126/345"),
            ((0.0, 2.0), (0.0, 2.0), "135/246"),
        ];
        for ((a, b), (c, d), part) in cases {
            let p = ProductPoint::new(Complex64::new(a, b), Complex64::new(c, d)).unwrap();
            let r = norm_identity_check(&p, part.parse().unwrap()).unwrap();
            assert!(r.residual < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn degenerate_partition_is_rejected() {
        let p = ProductPoint::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0)).unwrap();
        assert!(norm_identity_check(&p, Partition::degenerate()).is_err());
    }
}
