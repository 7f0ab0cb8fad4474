//! Registry of end-to-end verification checks with a deterministic JSON report.
//!
//! Tolerances come from one TOML document; the built-in defaults can be
//! overridden key by key. Checks run in parallel and the report lists them in
//! registry order, so identical invocations give identical bytes.

mod checks;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// The built-in tolerance file.
pub const DEFAULT_CONFIG: &str = include_str!("../../config/tolerances.toml");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub tolerance: f64,
    /// Relative tolerance of a Monte-Carlo cross-check, where one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub monte_carlo: MonteCarloConfig,
    pub checks: BTreeMap<String, CheckConfig>,
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl VerifyConfig {
    pub fn default_config() -> Result<Self> {
        Self::with_overrides("")
    }

    /// Defaults with the keys of `overrides` (TOML text) replaced.
    pub fn with_overrides(overrides: &str) -> Result<Self> {
        let bad = |e: toml::de::Error| Error::Serde(e.to_string());
        let mut base: toml::Table = toml::from_str(DEFAULT_CONFIG).map_err(bad)?;
        let over: toml::Table = toml::from_str(overrides).map_err(bad)?;
        merge(&mut base, over);
        let cfg: VerifyConfig = toml::Value::Table(base).try_into().map_err(bad)?;
        for c in registry() {
            if !cfg.checks.contains_key(c.id) {
                return Err(Error::InvalidArgument(format!("configuration lacks check {}", c.id)));
            }
        }
        Ok(cfg)
    }

    pub fn check(&self, id: &str) -> Result<&CheckConfig> {
        self.checks
            .get(id)
            .ok_or_else(|| Error::InvalidArgument(format!("no configuration for check {id}")))
    }
}

/// What a check runner hands back before the status is decided.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Worst relative error, or the number of exact mismatches.
    pub residual: f64,
    /// Structural conditions beyond the residual (uniqueness, existence, signs).
    pub conditions_hold: bool,
    pub artifacts: Value,
}

pub struct Context<'a> {
    pub config: &'a VerifyConfig,
    pub seed: u64,
}

type Runner = fn(&Context<'_>, &CheckConfig) -> Result<Outcome>;

#[derive(Clone, Copy)]
pub struct VerificationCheck {
    pub id: &'static str,
    pub number: u8,
    pub description: &'static str,
    runner: Runner,
}

impl std::fmt::Debug for VerificationCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VerificationCheck").field("id", &self.id).field("number", &self.number).finish()
    }
}

/// The twelve checks, in report order.
pub fn registry() -> Vec<VerificationCheck> {
    use checks::*;
    let c = |number, id, description, runner: Runner| VerificationCheck { id, number, description, runner };
    vec![
        c(1, "boundary-level1", "Siegel restriction of Φ1 equals η(τ/2)^16/η(τ)^8, order 50, exact", boundary_level1),
        c(2, "boundary-level2", "Siegel restriction of Φ2 equals 2^8 η(2σ)^16/η(σ)^8, order 50, exact", boundary_level2),
        c(3, "c-stream", "c(-1..30) of η(τ)^-8 η(2τ)^8 η(4τ)^-8 against a factor-by-factor product", c_stream),
        c(4, "eta-modularity", "η(-1/τ)^8 = τ^4 η(τ)^8 at five seeded τ", eta_modularity),
        c(5, "level-relation", "Φ2(w(z)) = ⟨z,e2⟩^4 Φ1(z) at three tube points", level_relation),
        c(6, "resultant-axioms", "R(unit) = 1, covariance under A·P and A^P, det^4 on diagonals, 0 on common roots", resultant_axioms),
        c(7, "theta-identities", "Jacobi quartic identity to order 100; Freitag Θ = θ^2 for the ten Ev classes", theta_identities),
        c(8, "minor-table", "Δ²_⟨J⟩(M(λ1,λ2)) equals the table entry symbolically and as theta quotients", minor_table_check),
        c(9, "embedding-existence", "pinned primitive mirror-free embeddings of the product source at levels 1 and 2", embedding_existence),
        c(10, "theta-restriction", "restricted expansions equal ± exactly one even theta 8th power", theta_restriction),
        c(11, "norm-identity", "‖Φ‖² = |R(A)R(B)|(2π^-4 ∫ω∧ω̄)^4 at product points; closed form vs Monte Carlo", norm_identity),
        c(12, "mirror-vanishing", "a family containing a root with trivial phase restricts Φ2 to zero", mirror_vanishing),
    ]
}

/// Looks a check up by id or by number.
pub fn find_check(key: &str) -> Result<VerificationCheck> {
    registry()
        .into_iter()
        .find(|c| c.id == key || c.number.to_string() == key)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown check {key:?}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: f64,
    /// Wall-clock seconds; omitted unless requested so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime: Option<f64>,
    pub artifacts: Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn run_check(check: &VerificationCheck, ctx: &Context<'_>, timings: bool) -> CheckReport {
    let start = Instant::now();
    let (tolerance, result) = match ctx.config.check(check.id) {
        Ok(cc) => (cc.tolerance, (check.runner)(ctx, cc)),
        Err(e) => (f64::NAN, Err(e)),
    };
    let runtime = timings.then(|| start.elapsed().as_secs_f64());
    match result {
        Ok(o) => {
            let ok = o.conditions_hold && o.residual.is_finite() && o.residual <= tolerance;
            CheckReport {
                id: check.id.to_string(),
                status: if ok { Status::Pass } else { Status::Fail },
                residual: Some(o.residual),
                tolerance,
                runtime,
                artifacts: o.artifacts,
            }
        }
        Err(e) => CheckReport {
            id: check.id.to_string(),
            status: Status::Error,
            residual: None,
            tolerance,
            runtime,
            artifacts: json!({ "error": e.to_string() }),
        },
    }
}

/// Runs the selected checks in parallel; the result is in the order given.
pub fn run_checks(selected: &[VerificationCheck], ctx: &Context<'_>, timings: bool) -> Vec<CheckReport> {
    selected.par_iter().map(|c| run_check(c, ctx, timings)).collect()
}

pub fn report_json(reports: &[CheckReport]) -> Value {
    let passed = reports.iter().filter(|r| r.passed()).count();
    json!({
        "checks": reports,
        "passed": passed,
        "failed": reports.len() - passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_configured() {
        let cfg = VerifyConfig::default_config().unwrap();
        let checks = registry();
        let mut ids: Vec<&str> = checks.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 12);
        for c in &checks {
            assert!(cfg.check(c.id).is_ok(), "{}", c.id);
        }
        assert_eq!(find_check("7").unwrap().id, "theta-identities");
        assert!(find_check("13").is_err());
    }

    #[test]
    fn overrides_replace_only_the_given_keys() {
        let base = VerifyConfig::default_config().unwrap();
        let cfg = VerifyConfig::with_overrides("[checks.level-relation]\ntolerance = 1e-3\n[monte_carlo]\nsamples = 10\n").unwrap();
        assert_eq!(cfg.check("level-relation").unwrap().tolerance, 1e-3);
        assert_eq!(cfg.monte_carlo.samples, 10);
        assert_eq!(cfg.monte_carlo.seed, base.monte_carlo.seed);
        assert_eq!(cfg.check("norm-identity").unwrap(), base.check("norm-identity").unwrap());
        assert!(VerifyConfig::with_overrides("[monte_carlo]\nsamples = \"many\"\n").is_err());
    }

    #[test]
    fn reports_omit_runtime_unless_asked() {
        let cfg = VerifyConfig::default_config().unwrap();
        let ctx = Context { config: &cfg, seed: 3 };
        let check = find_check("c-stream").unwrap();
        let r = run_check(&check, &ctx, false);
        assert!(r.passed());
        let text = serde_json::to_string(&r).unwrap();
        assert!(!text.contains("runtime"));
        assert!(run_check(&check, &ctx, true).runtime.is_some());
    }
}
