//! The twelve acceptance criteria, one pass/fail line each, at the default
//! tolerances of `config/tolerances.toml`. Runs without the libtest harness so
//! the lines are printed whether or not the checks pass.

use enriques_phi::verify::{registry, run_checks, Context, Status, VerifyConfig};

fn main() {
    let config = VerifyConfig::default_config().unwrap();
    let ctx = Context { config: &config, seed: config.monte_carlo.seed };
    let checks = registry();
    assert_eq!(checks.len(), 12);
    let reports = run_checks(&checks, &ctx, true);
    let mut failed = Vec::new();
    for (c, r) in checks.iter().zip(&reports) {
        let tag = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let residual = r.residual.map_or("-".to_string(), |x| format!("{x:.3e}"));
        println!(
            "[{tag}] {:>2} {:<20} residual={residual} tolerance={:e} runtime={:.2}s  {}",
            c.number,
            c.id,
            r.tolerance,
            r.runtime.unwrap_or(0.0),
            c.description
        );
        if !r.passed() {
            println!("       artifacts: {}", r.artifacts);
            failed.push(c.id);
        }
    }
    let passed = reports.len() - failed.len();
    println!("acceptance: {passed}/{} criteria passed", reports.len());
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
