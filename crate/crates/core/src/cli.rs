//! Command-line front end. Every subcommand prints JSON (or a bare rational for
//! `resultant`) with sorted keys, so identical invocations give identical bytes.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage error,
//! 3 computation or I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::embed::{derive_source_gram, find_embeddings, PeriodCoeffs, SearchLimits, SourceCase};
use crate::error::{Error, Result};
use crate::kummer::{
    all_minors, m_matrix, monte_carlo_integral, period_quantities, quadric_split, norm_identity_check, theta_match_check, ProductPoint,
};
use crate::phi::{eval_numeric, phi1_boundary, phi2_boundary, restricted_expansion, TubePoint};
use crate::resultant::{macaulay_resultant, parse_rational, rational_json, triple_from_json, RationalTriple};
use crate::theta::{freitag_theta, tables_json, theta1, theta1_series, theta2, theta2_series, Char1, Char2, EvChar, Partition};
use crate::verify::{find_check, registry, report_json, run_checks, Context, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "enriques-phi", version, about = "Borcherds Φ on Enriques period domains: expansions, thetas, resultants and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary forms, restricted expansions and numeric values of Φ1, Φ2.
    #[command(subcommand)]
    Phi(PhiCmd),
    /// Theta constants of genus 1 and 2, Freitag thetas and the partition tables.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Exact resultant of three ternary quadrics.
    Resultant(ResultantArgs),
    /// Pinned primitive embeddings of source lattices into Λ.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Product-type Kummer models: minors, splits, periods and the norm identities.
    #[command(subcommand)]
    Kummer(KummerCmd),
    /// Runs the verification registry.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum PhiCmd {
    /// q-expansion of the boundary form at the level-ℓ cusp.
    Boundary {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        level: u8,
        #[arg(long)]
        order: i64,
    },
    /// Restricted expansion along `(A + B·T11 + C·T12 + D·T22)/2`.
    Expand {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        level: u8,
        /// JSON `{a, b, c, d}` in `M_ℓ` coordinates.
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        order: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated product value at a tube-domain point.
    Eval {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        level: u8,
        /// JSON array of `[re, im]` pairs.
        #[arg(long)]
        z: PathBuf,
        #[arg(long)]
        cutoff: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ThetaCmd {
    /// θ0, θ2 or θ3: a q-series with `--order`, a value with `--tau`.
    G1 {
        #[arg(long = "char", value_parser = ["0", "2", "3"])]
        ch: String,
        #[arg(long, conflicts_with = "tau", required_unless_present = "tau")]
        order: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
    },
    /// θ[a; b] of genus 2: a series with `--order`, a value with `--t`.
    G2 {
        /// Two bits, e.g. `0,1`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, conflicts_with = "t", required_unless_present = "t")]
        order: Option<i64>,
        /// JSON 2×2 matrix of `[re, im]` entries.
        #[arg(long)]
        t: Option<PathBuf>,
    },
    /// Freitag theta Θ[a, b] at a point `Ω` of the Hermitian half space.
    Freitag {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// JSON 2×2 matrix of `[re, im]` entries.
        #[arg(long)]
        omega: PathBuf,
    },
    /// Partition correspondence tables.
    Tables,
}

#[derive(Args, Debug)]
struct ResultantArgs {
    /// JSON `{"triple": [S1, S2, S3]}` with rational entries.
    #[arg(long)]
    triple: PathBuf,
    /// Print `{numerator, denominator}` instead of `p/q`.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum EmbedCmd {
    Search {
        #[arg(long, value_parser = ["product", "jacobian"])]
        case: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        level: u8,
        #[arg(long, default_value_t = 1)]
        max: usize,
        #[arg(long)]
        height: Option<i64>,
    },
}

#[derive(Args, Debug, Clone)]
struct TauPair {
    /// `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    tau1: String,
    #[arg(long, allow_hyphen_values = true)]
    tau2: String,
}

#[derive(Subcommand, Debug)]
enum KummerCmd {
    /// The twenty maximal minors of `M(λ1, λ2)` at rational `λ`.
    Minors {
        #[arg(long, allow_hyphen_values = true)]
        lambda1: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda2: String,
    },
    /// Diagonal triples of a partition and their resultants at rational `λ`.
    Split {
        #[arg(long)]
        partition: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda1: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda2: String,
    },
    /// Closed-form periods, optionally cross-checked by Monte Carlo.
    Periods {
        #[command(flatten)]
        taus: TauPair,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
    },
    /// Norm identity at a product point for one partition.
    NormIdentity {
        #[command(flatten)]
        taus: TauPair,
        #[arg(long)]
        partition: String,
    },
    /// Theta match of the restricted expansion of each found embedding.
    ThetaMatch {
        #[arg(long, value_parser = ["product", "jacobian"])]
        case: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        level: u8,
        #[arg(long)]
        order: i64,
        #[arg(long, default_value_t = 1)]
        max: usize,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all`, a check id or a check number.
    target: String,
    /// Write the full report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Master seed for pseudo-random inputs and the Monte-Carlo oracle.
    #[arg(long)]
    seed: Option<u64>,
    /// TOML file overriding the default tolerances.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall-clock runtimes (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Serde(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Serde(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidArgument(format!("expected re,im but got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_bits(s: &str) -> Result<[u8; 2]> {
    let bad = || Error::InvalidArgument(format!("expected two bits like 0,1 but got {s:?}"));
    let v: Vec<u8> = s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    v.try_into().map_err(|_| bad())
}

fn parse_q(s: &str) -> Result<BigRational> {
    parse_rational(&Value::String(s.to_string()))
}

fn complex_from(v: &Value) -> Result<Complex64> {
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Serde(format!("expected [re, im], got {v}")))?;
    let f = |x: &Value| x.as_f64().ok_or_else(|| Error::Serde(format!("not a number: {x}")));
    Ok(Complex64::new(f(&pair[0])?, f(&pair[1])?))
}

fn matrix22(v: &Value) -> Result<[[Complex64; 2]; 2]> {
    let rows = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Serde("expected a 2×2 matrix".into()))?;
    let row = |r: &Value| -> Result<[Complex64; 2]> {
        let r = r.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Serde("expected a 2×2 matrix".into()))?;
        Ok([complex_from(&r[0])?, complex_from(&r[1])?])
    };
    Ok([row(&rows[0])?, row(&rows[1])?])
}

fn product_point(t: &TauPair) -> Result<ProductPoint> {
    ProductPoint::new(parse_complex(&t.tau1)?, parse_complex(&t.tau2)?)
}

fn case_of(s: &str) -> Result<SourceCase> {
    SourceCase::parse(s)
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        r.to_string()
    }
}

/// Output text and exit code of one invocation.
type Outcome = (String, i32);

fn phi(cmd: PhiCmd) -> Result<Outcome> {
    let v = match cmd {
        PhiCmd::Boundary { level, order } => {
            let s = if level == 1 { phi1_boundary(order)? } else { phi2_boundary(order)? };
            json!({ "level": level, "series": s.to_json() })
        }
        PhiCmd::Expand { level, coeffs, order, out } => {
            let raw = read_json(&coeffs)?;
            let vec_of = |k: &str| -> Result<Vec<i64>> {
                match raw.get(k) {
                    None => Ok(Vec::new()),
                    Some(x) => Ok(serde_json::from_value(x.clone())?),
                }
            };
            let b = vec_of("b")?;
            let zeros = vec![0; b.len()];
            let or_zero = |v: Vec<i64>| if v.is_empty() { zeros.clone() } else { v };
            let pc = PeriodCoeffs { level, a: or_zero(vec_of("a")?), b, c: or_zero(vec_of("c")?), d: vec_of("d")? };
            let exp = restricted_expansion(&pc, order)?;
            let v = json!({ "level": level, "order": order, "series": exp.series.to_json(), "stats": exp.stats });
            if let Some(path) = out {
                write_file(&path, &pretty(&exp.series.to_json())?)?;
            }
            v
        }
        PhiCmd::Eval { level, z, cutoff } => {
            let raw = read_json(&z)?;
            let arr = raw.as_array().ok_or_else(|| Error::Serde("expected an array of [re, im]".into()))?;
            let z: Vec<Complex64> = arr.iter().map(complex_from).collect::<Result<_>>()?;
            let val = eval_numeric(&TubePoint::new(level, z)?, cutoff)?;
            json!({ "level": level, "cutoff": cutoff, "value": complex_json(val.value), "tail_bound": val.tail_bound, "factors": val.factors })
        }
    };
    Ok((pretty(&v)?, EXIT_OK))
}

fn theta(cmd: ThetaCmd) -> Result<Outcome> {
    let v = match cmd {
        ThetaCmd::G1 { ch, order, tau } => {
            let c = Char1::from_kind(ch.parse().map_err(|_| Error::InvalidArgument(ch.clone()))?)?;
            match (order, tau) {
                (Some(n), _) => json!({ "char": c.kind(), "series": theta1_series(c, n)?.to_json() }),
                (None, Some(t)) => json!({ "char": c.kind(), "value": complex_json(theta1(c, parse_complex(&t)?)?) }),
                (None, None) => return Err(Error::InvalidArgument("give --order or --tau".into())),
            }
        }
        ThetaCmd::G2 { a, b, order, t } => {
            let ch = Char2::new(parse_bits(&a)?, parse_bits(&b)?)?;
            match (order, t) {
                (Some(n), _) => json!({ "char": ch.to_string(), "series": theta2_series(ch, n)?.to_json() }),
                (None, Some(p)) => {
                    let m = matrix22(&read_json(&p)?)?;
                    json!({ "char": ch.to_string(), "value": complex_json(theta2(ch, &m)?) })
                }
                (None, None) => return Err(Error::InvalidArgument("give --order or --t".into())),
            }
        }
        ThetaCmd::Freitag { a, b, omega } => {
            let ev = EvChar::new(parse_bits(&a)?, parse_bits(&b)?)?;
            let om = matrix22(&read_json(&omega)?)?;
            json!({ "a": ev.a, "b": ev.b, "value": complex_json(freitag_theta(ev, &om)?) })
        }
        ThetaCmd::Tables => tables_json(),
    };
    Ok((pretty(&v)?, EXIT_OK))
}

fn resultant(args: ResultantArgs) -> Result<Outcome> {
    let t: RationalTriple = triple_from_json(&read_json(&args.triple)?)?;
    let r = macaulay_resultant(&t)?;
    let text = if args.json { pretty(&rational_json(&r))? } else { rational_string(&r) };
    Ok((text, EXIT_OK))
}

fn embed(cmd: EmbedCmd) -> Result<Outcome> {
    let EmbedCmd::Search { case, level, max, height } = cmd;
    let case = case_of(&case)?;
    let mut limits = SearchLimits::default();
    if let Some(h) = height {
        limits.height = h;
    }
    let found = find_embeddings(case, level, max, &limits)?;
    let src = derive_source_gram(case);
    let v = json!({
        "case": case.name(),
        "level": level,
        "labels": src.labels,
        "gram": src.gram,
        "pins": { "e": found.first().map(|e| e.images[0].clone()) },
        "images": found.iter().map(|e| e.images.clone()).collect::<Vec<_>>(),
    });
    Ok((pretty(&v)?, EXIT_OK))
}

fn kummer(cmd: KummerCmd) -> Result<Outcome> {
    let v = match cmd {
        KummerCmd::Minors { lambda1, lambda2 } => {
            let m = m_matrix(&parse_q(&lambda1)?, &parse_q(&lambda2)?);
            let rows: Vec<Value> = all_minors(&m)
                .into_iter()
                .map(|(c, d)| json!({ "columns": c, "minor": rational_string(&d) }))
                .collect();
            json!({ "minors": rows })
        }
        KummerCmd::Split { partition, lambda1, lambda2 } => {
            let p: Partition = partition.parse()?;
            let (ta, tb) = quadric_split(p, &parse_q(&lambda1)?, &parse_q(&lambda2)?)?;
            let forms = |t: &RationalTriple| -> Vec<Vec<String>> {
                t.forms.iter().map(|s| (0..3).map(|i| rational_string(&s[i][i])).collect()).collect()
            };
            json!({
                "partition": p.to_string(),
                "a": { "diagonals": forms(&ta), "resultant": rational_string(&macaulay_resultant(&ta)?) },
                "b": { "diagonals": forms(&tb), "resultant": rational_string(&macaulay_resultant(&tb)?) },
            })
        }
        KummerCmd::Periods { taus, samples, seed } => {
            let p = product_point(&taus)?;
            let q = period_quantities(&p)?;
            let mut v = json!({
                "pullback_const": complex_json(q.pullback_const),
                "gamma34_integral": complex_json(q.gamma34_integral),
                "integral_x": q.integral_x,
            });
            if samples > 0 {
                v["monte_carlo"] = serde_json::to_value(monte_carlo_integral(&p, samples, seed)?)?;
            }
            v
        }
        KummerCmd::NormIdentity { taus, partition } => serde_json::to_value(norm_identity_check(&product_point(&taus)?, partition.parse()?)?)?,
        KummerCmd::ThetaMatch { case, level, order, max } => {
            let found = find_embeddings(case_of(&case)?, level, max, &SearchLimits::default())?;
            let reports: Vec<Value> = found
                .iter()
                .map(|e| {
                    let r = theta_match_check(e, order)?;
                    let mut v = serde_json::to_value(&r)?;
                    v["passes"] = json!(r.passes());
                    v["constant_term"] = json!(r.constant_term.to_string());
                    Ok(v)
                })
                .collect::<Result<_>>()?;
            json!({ "reports": reports })
        }
    };
    Ok((pretty(&v)?, EXIT_OK))
}

fn verify(args: VerifyArgs) -> Result<Outcome> {
    let overrides = match &args.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Serde(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    let config = VerifyConfig::with_overrides(&overrides)?;
    let selected = if args.target == "all" {
        registry()
    } else {
        match find_check(&args.target) {
            Ok(c) => vec![c],
            Err(e) => return Ok((format!("error: {e}"), EXIT_USAGE)),
        }
    };
    let ctx = Context { config: &config, seed: args.seed.unwrap_or(config.monte_carlo.seed) };
    let reports = run_checks(&selected, &ctx, args.timings);
    if let Some(path) = &args.json {
        write_file(path, &pretty(&report_json(&reports))?)?;
    }
    let lines: Vec<String> = reports
        .iter()
        .map(|r| {
            let status = format!("{:?}", r.status).to_uppercase();
            let residual = r.residual.map_or("-".to_string(), |x| format!("{x:.3e}"));
            let mut line = format!("{status:<5} {:<20} residual={residual} tolerance={:e}", r.id, r.tolerance);
            if let Some(t) = r.runtime {
                line.push_str(&format!(" runtime={t:.3}s"));
            }
            if let Some(e) = r.artifacts.get("error") {
                line.push_str(&format!(" error={e}"));
            }
            line
        })
        .collect();
    let code = if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((lines.join("\n"), code))
}

/// Parses `argv` (program name first) and runs one subcommand, printing to
/// stdout and stderr; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Phi(c) => phi(c),
        Command::Theta(c) => theta(c),
        Command::Resultant(a) => resultant(a),
        Command::Embed(c) => embed(c),
        Command::Kummer(c) => kummer(c),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok((text, code)) if code == EXIT_USAGE => {
            eprintln!("{text}");
            code
        }
        Ok((text, code)) => {
            // a closed pipe downstream is not an error of the command
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
