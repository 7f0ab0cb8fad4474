//! The twelve check runners. Each returns a residual, structural conditions and
//! a JSON artifact; the registry decides pass or fail against the tolerance.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{CheckConfig, Context, Outcome};
use crate::embed::{find_embeddings, in_positive_cone, PeriodCoeffs, SearchLimits, SourceCase};
use crate::error::Result;
use crate::kummer::{
    delta_partition, m_matrix, monte_carlo_integral, period_quantities, norm_identity_check, theta_match_check, Poly2, ProductPoint,
};
use crate::lattice::m2;
use crate::phi::{eval_numeric, level_transform, phi1_boundary, phi2_boundary, restricted_expansion, TubePoint};
use crate::qseries::{c_coeffs, eta_quotient, ExactSeries, GaussInt};
use crate::resultant::{det3, macaulay_resultant, covariance_check, QuadricTriple, RationalTriple};
use crate::theta::{eta_eval, freitag_theta, minor_table, theta1, theta1_series, theta2, Char1, EvChar, Siegel};

fn rng(ctx: &Context<'_>, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(ctx.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Exponents (over the common denominator) where two series differ.
fn mismatches(a: &ExactSeries, b: &ExactSeries, order: i64) -> Vec<i64> {
    let den = a.den();
    (-(order * den)..order * den).filter(|&e| a.coeff(e) != b.coeff(e)).collect()
}

fn exact_outcome(bad: usize, artifacts: Value) -> Outcome {
    Outcome { residual: bad as f64, conditions_hold: bad == 0, artifacts }
}

fn leading(s: &ExactSeries, n: usize) -> Vec<String> {
    s.terms().take(n).map(|(e, c)| format!("{}q^{e}", c.re)).collect()
}

pub fn boundary_level1(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let order = 50;
    let phi = phi1_boundary(order)?;
    let eta = eta_quotient(&[(1, 16), (2, -8)], order)?.with_den(1)?;
    let bad = mismatches(&phi, &eta, order);
    Ok(exact_outcome(bad.len(), json!({ "order": order, "leading": leading(&phi, 4), "mismatched_exponents": bad })))
}

pub fn boundary_level2(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let order = 50;
    let phi = phi2_boundary(order)?;
    let eta = eta_quotient(&[(4, 16), (2, -8)], order)?.with_den(1)?.scale(GaussInt::from_int(256))?;
    let bad = mismatches(&phi, &eta, order);
    let lead = phi.valuation().map(|v| (v, phi.coeff(v).re));
    Ok(exact_outcome(bad.len(), json!({ "order": order, "leading": lead, "constant": 256, "mismatched_exponents": bad })))
}

/// `a ← a·(1 − q^m)^{±1}` on a dense truncated series.
fn times_factor(a: &mut [i128], m: usize, inverse: bool) {
    if inverse {
        for i in m..a.len() {
            a[i] += a[i - m];
        }
    } else {
        for i in (m..a.len()).rev() {
            a[i] -= a[i - m];
        }
    }
}

pub fn c_stream(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let max_n = 30i64;
    // index k holds the coefficient of q^{k-1}
    let len = (max_n + 2) as usize;
    let mut oracle = vec![0i128; len];
    oracle[0] = 1;
    for n in 1..len {
        for _ in 0..8 {
            times_factor(&mut oracle, n, true);
            times_factor(&mut oracle, 2 * n, false);
            times_factor(&mut oracle, 4 * n, true);
        }
    }
    let got = c_coeffs(max_n)?;
    let mut bad: Vec<i64> = (0..len).filter(|&k| got[k] != oracle[k]).map(|k| k as i64 - 1).collect();
    if got[0] != 1 || got[1] != 8 {
        bad.push(i64::MIN);
    }
    let shown: Vec<String> = got.iter().take(8).map(|x| x.to_string()).collect();
    Ok(exact_outcome(bad.len(), json!({ "c": shown, "through": max_n, "mismatched_n": bad })))
}

pub fn eta_modularity(ctx: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let mut r = rng(ctx, 4);
    let mut worst: f64 = 0.0;
    let mut points = Vec::new();
    for _ in 0..5 {
        let tau = c(r.gen_range(-0.5..0.5), r.gen_range(0.5..3.0));
        let lhs = eta_eval(-1.0 / tau)?.powi(8);
        let rhs = tau.powi(4) * eta_eval(tau)?.powi(8);
        let e = rel(lhs, rhs);
        worst = worst.max(e);
        points.push(json!({ "tau": [tau.re, tau.im], "relative_error": e }));
    }
    Ok(Outcome { residual: worst, conditions_hold: true, artifacts: json!({ "points": points }) })
}

/// Imaginary parts `(y_e, y_f, y_E8[2])` and product cutoffs for level 1 and level 2.
const LEVEL_POINTS: [([f64; 3], f64, f64); 3] = [([3.5, 0.45, 0.05], 6.0, 4.0), ([3.2, 0.5, 0.1], 6.0, 4.0), ([3.0, 0.5, 0.0], 7.0, 4.0)];

pub fn level_relation(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut points = Vec::new();
    for ([ye, yf, y2], cut1, cut2) in LEVEL_POINTS {
        let mut z = vec![c(0.1, ye), c(0.05, yf)];
        for i in 0..8 {
            z.push(c(0.1 * ((i * 3 % 5) as f64 - 2.0), if i == 2 { y2 } else { 0.0 }));
        }
        let p = TubePoint::new(1, z)?;
        let v1 = eval_numeric(&p, cut1)?;
        let v2 = eval_numeric(&level_transform(&p)?, cut2)?;
        // ⟨z, e2⟩ = 2 z_f in the level-1 coordinates
        let rhs = (2.0 * p.z[1]).powi(4) * v1.value;
        let e = rel(v2.value, rhs);
        worst = worst.max(e);
        points.push(json!({
            "im": [ye, yf, y2],
            "relative_error": e,
            "tail_bound_level1": v1.tail_bound,
            "tail_bound_level2": v2.tail_bound,
        }));
    }
    Ok(Outcome { residual: worst, conditions_hold: true, artifacts: json!({ "points": points }) })
}

fn rat(r: &mut ChaCha8Rng, span: i64) -> BigRational {
    let n = r.gen_range(-span..=span);
    let d = r.gen_range(1..=span);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_matrix(r: &mut ChaCha8Rng, span: i64) -> [[BigRational; 3]; 3] {
    std::array::from_fn(|_| std::array::from_fn(|_| rat(r, span)))
}

fn random_symmetric(r: &mut ChaCha8Rng, span: i64) -> [[BigRational; 3]; 3] {
    let mut s = random_matrix(r, span);
    for i in 0..3 {
        for j in 0..i {
            s[i][j] = s[j][i].clone();
        }
    }
    s
}

fn random_triple(r: &mut ChaCha8Rng, span: i64) -> RationalTriple {
    QuadricTriple { forms: std::array::from_fn(|_| random_symmetric(r, span)) }
}

/// A triple whose three forms all vanish at one random integral point.
fn common_root_triple(r: &mut ChaCha8Rng) -> RationalTriple {
    let x: [i64; 3] = [r.gen_range(1..=4), r.gen_range(-4..=4), r.gen_range(-4..=4)];
    let forms = std::array::from_fn(|_| {
        let mut s = random_symmetric(r, 5);
        let mut v = BigRational::zero();
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) != (0, 0) {
                    v += &s[i][j] * BigInt::from(x[i] * x[j]);
                }
            }
        }
        s[0][0] = -v / BigInt::from(x[0] * x[0]);
        s
    });
    QuadricTriple { forms }
}

pub fn resultant_axioms(ctx: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let mut r = rng(ctx, 6);
    let unit_ok = macaulay_resultant(&RationalTriple::unit())? == BigRational::one();
    let mut covariance_fail = 0;
    let mut n = 0;
    while n < 20 {
        let p = random_matrix(&mut r, 4);
        if det3(&p).is_zero() {
            continue;
        }
        let rep = covariance_check(&random_triple(&mut r, 6), &p)?;
        if !(rep.combination_law && rep.substitution_law) {
            covariance_fail += 1;
        }
        n += 1;
    }
    let mut diagonal_fail = 0;
    for _ in 0..20 {
        let a = random_matrix(&mut r, 7);
        if macaulay_resultant(&QuadricTriple::diagonal(&a))? != num_traits::pow(det3(&a), 4) {
            diagonal_fail += 1;
        }
    }
    let mut root_fail = 0;
    for _ in 0..10 {
        if !macaulay_resultant(&common_root_triple(&mut r))?.is_zero() {
            root_fail += 1;
        }
    }
    let bad = usize::from(!unit_ok) + covariance_fail + diagonal_fail + root_fail;
    Ok(exact_outcome(
        bad,
        json!({
            "unit_is_one": unit_ok,
            "covariance_failures": covariance_fail,
            "diagonal_failures": diagonal_fail,
            "common_root_failures": root_fail,
        }),
    ))
}

fn siegel_points() -> [Siegel; 3] {
    [
        [[c(0.1, 1.2), c(0.3, 0.4)], [c(0.3, 0.4), c(-0.2, 1.0)]],
        [[c(-0.35, 0.9), c(0.1, -0.2)], [c(0.1, -0.2), c(0.45, 1.4)]],
        [[c(0.0, 1.0), c(0.5, 0.5)], [c(0.5, 0.5), c(0.2, 1.1)]],
    ]
}

pub fn theta_identities(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let order = 100;
    let four = |ch| theta1_series(ch, order).and_then(|s| s.pow(4));
    let jacobi = four(Char1::Three)?.sub(&four(Char1::Two)?)?.sub(&four(Char1::Zero)?)?;
    let jacobi_terms = jacobi.len();
    let mut worst: f64 = 0.0;
    for t in siegel_points() {
        for ev in EvChar::all() {
            let big = freitag_theta(ev, &t)?;
            let re = theta2(ev.real_char(), &t)?;
            let im = theta2(ev.imag_char(), &t)?;
            let scale = 1.0 + big.norm();
            worst = worst.max((big - re * re).norm() / scale).max((big - im * im).norm() / scale);
        }
    }
    Ok(Outcome {
        residual: worst,
        conditions_hold: jacobi_terms == 0,
        artifacts: json!({ "order": order, "jacobi_nonzero_terms": jacobi_terms, "siegel_points": 3, "classes": 10 }),
    })
}

pub fn minor_table_check(ctx: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let (l1, l2) = (Poly2::lambda1(), Poly2::lambda2());
    let ms = m_matrix(&l1, &l2);
    let mut symbolic_fail = Vec::new();
    for (p, f, g) in minor_table() {
        let d = delta_partition(&ms, p);
        let want = crate::kummer::factor_poly(f, &l1).times(&crate::kummer::factor_poly(g, &l2));
        if d.times(&d) != want {
            symbolic_fail.push(p.to_string());
        }
    }
    let mut r = rng(ctx, 8);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let t1 = c(r.gen_range(-0.5..0.5), r.gen_range(0.8..2.0));
        let t2 = c(r.gen_range(-0.5..0.5), r.gen_range(0.8..2.0));
        let p = ProductPoint::new(t1, t2)?;
        let m = m_matrix(&p.lambda1()?, &p.lambda2()?);
        for (part, f, g) in minor_table() {
            let d = delta_partition(&m, part);
            let q = |ch: Char1, tau| -> Result<Complex64> { Ok((theta1(ch, tau)? / theta1(Char1::Three, tau)?).powi(8)) };
            let want = q(f.theta(), t1)? * q(g.theta(), t2)?;
            worst = worst.max(rel(d * d, want));
        }
    }
    Ok(Outcome {
        residual: worst,
        conditions_hold: symbolic_fail.is_empty(),
        artifacts: json!({ "rows": 9, "symbolic_failures": symbolic_fail, "tau_pairs": 5 }),
    })
}

use crate::kummer::Ring;

pub fn embedding_existence(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let mut bad = 0;
    let mut levels = Vec::new();
    for level in [1u8, 2] {
        let found = find_embeddings(SourceCase::Product, level, 2, &SearchLimits::default())?;
        let verified = found.iter().filter(|e| e.verify().is_ok()).count();
        if found.is_empty() || verified != found.len() {
            bad += 1;
        }
        levels.push(json!({ "level": level, "found": found.len(), "verified": verified, "images": found.first().map(|e| &e.images) }));
    }
    Ok(exact_outcome(bad, json!({ "case": "product", "levels": levels })))
}

pub fn theta_restriction(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let mut bad = 0;
    let mut cases = Vec::new();
    for (case, order) in [(SourceCase::Product, 10), (SourceCase::Jacobian, 6)] {
        for level in [1u8, 2] {
            let found = find_embeddings(case, level, 2, &SearchLimits::default())?;
            if found.is_empty() {
                bad += 1;
            }
            for emb in &found {
                match theta_match_check(emb, order) {
                    Ok(rep) => {
                        if !rep.passes() {
                            bad += 1;
                        }
                        cases.push(json!({
                            "case": case.name(),
                            "level": level,
                            "passes": rep.passes(),
                            "matches": rep.matches,
                            "constant_term": rep.constant_term.to_string(),
                            "valuation": rep.valuation,
                        }));
                    }
                    Err(e) => {
                        bad += 1;
                        cases.push(json!({ "case": case.name(), "level": level, "error": e.to_string() }));
                    }
                }
            }
        }
    }
    Ok(exact_outcome(bad, json!({ "embeddings": cases })))
}

pub fn norm_identity(ctx: &Context<'_>, cfg: &CheckConfig) -> Result<Outcome> {
    let points = [(c(0.0, 1.1), c(0.9, 1.3)), (c(0.0, 2.0), c(0.0, 2.0)), (c(0.3, 1.0), c(-0.2, 1.5))];
    let parts = ["126/345", "135/246", "146/235"];
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for (t1, t2) in points {
        let p = ProductPoint::new(t1, t2)?;
        for part in parts {
            let r = norm_identity_check(&p, part.parse()?)?;
            worst = worst.max(r.residual);
            rows.push(json!({ "tau1": [t1.re, t1.im], "tau2": [t2.re, t2.im], "partition": part, "residual": r.residual }));
        }
    }
    let mc_cfg = &ctx.config.monte_carlo;
    let p = ProductPoint::new(points[0].0, points[0].1)?;
    let mc = monte_carlo_integral(&p, mc_cfg.samples, ctx.seed)?;
    let closed = period_quantities(&p)?.integral_x;
    let mc_err = (mc.estimate - closed).abs() / closed;
    let mc_tol = cfg.mc_tolerance.unwrap_or(5e-3);
    Ok(Outcome {
        residual: worst,
        conditions_hold: mc_err <= mc_tol,
        artifacts: json!({
            "identity_rows": rows,
            "monte_carlo": {
                "samples": mc.samples,
                "fiber_size": mc.fiber_size,
                "estimate": mc.estimate,
                "closed_form": closed,
                "relative_error": mc_err,
                "tolerance": mc_tol,
            },
        }),
    })
}

pub fn mirror_vanishing(_: &Context<'_>, _: &CheckConfig) -> Result<Outcome> {
    let m = m2();
    let mut b = vec![0i64; 10];
    b[..4].copy_from_slice(&[2, 2, 1, 1]);
    let mut d = vec![0i64; 10];
    d[..4].copy_from_slice(&[2, 2, -1, -1]);
    let root = {
        let mut r = vec![0i64; 10];
        r[0] = -1;
        r[1] = 1;
        r
    };
    let orthogonal = m.norm(&root)? == -2 && m.inner(&root, &b)? == 0 && m.inner(&root, &d)? == 0;
    let cone = in_positive_cone(&m, &b)?;
    let family = |a: Vec<i64>| PeriodCoeffs { level: 2, a, b: b.clone(), c: vec![0; 10], d: d.clone() };
    let order = 6;
    let zero = restricted_expansion(&family(vec![0; 10]), order)?;
    let mut a = vec![0i64; 10];
    a[0] = 1;
    let contrast = restricted_expansion(&family(a), order)?;
    let vanishes = zero.series.is_empty();
    let ok = orthogonal && cone && vanishes && !contrast.series.is_empty();
    Ok(Outcome {
        residual: zero.series.len() as f64,
        conditions_hold: ok,
        artifacts: json!({
            "root": root,
            "root_orthogonal_to_family": orthogonal,
            "b_in_positive_cone": cone,
            "order": order,
            "trivial_phase_terms": zero.series.len(),
            "shifted_phase_terms": contrast.series.len(),
        }),
    })
}
