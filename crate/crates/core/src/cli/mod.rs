//! The `defexp` command-line front end.
//!
//! Every subcommand loads a family from a JSON model file (`--model`), runs
//! one library operation and writes a canonical JSON (or CSV) document.
//! Exit codes: 0 success, 1 outside the polytope / infinite conjugate /
//! failed check, 2 invalid input, 3 numerical failure. Library errors are
//! reported as `{"error": {"kind", "message", "path"}}`.

pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::conjugate::{self, ConjugateOptions};
use crate::error::Error;
use crate::family::PhiExponentialFamily;
use crate::model;
use crate::oracle::{self, OracleConfig};
use crate::polytope::MembershipCertificate;
use crate::state_space::{Density, RandomVariable};
use crate::{checks, Deformation};

/// Reported by `--version`; the part after "schema" is [`model::SCHEMA_VERSION`].
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), ", schema 1");

pub const EXIT_OK: i32 = 0;
pub const EXIT_OUTSIDE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "defexp", version = VERSION, about = "Deformed exponential families on finite sample spaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a deformation pointwise.
    #[command(subcommand)]
    Deform(DeformCmd),
    /// Normalizer, densities, escorts and divergence derivatives.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Marginal polytope membership.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Convex conjugates.
    #[command(subcommand)]
    Conjugate(ConjugateCmd),
    /// Executable property groups.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Evaluate the reference oracles and emit the fixture document.
    OracleValues,
}

#[derive(Debug, Subcommand)]
enum DeformCmd {
    /// φ and ln_φ at each v, exp_φ and its derivatives at each u.
    Eval {
        #[arg(long, conflicts_with = "deformation")]
        model: Option<PathBuf>,
        /// Inline deformation JSON, e.g. '{"kind":"kaniadakis","kappa":0.5}'.
        #[arg(long)]
        deformation: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
    },
}

#[derive(Debug, Args)]
struct ModelArg {
    #[arg(long)]
    model: PathBuf,
}

/// A point of the family given either by θ or by a random variable u.
#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "u", required_unless_present = "u")]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
}

#[derive(Debug, Subcommand)]
enum FamilyCmd {
    Alpha {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    Density {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    Escort {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        point: PointArgs,
    },
    Dk {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        point: PointArgs,
        /// Index into the centered statistics, or an inline vector.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    D2k {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// K(u) = D(p‖q) for a density q, with the u it corresponds to.
    Divergence {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        q: String,
    },
}

#[derive(Debug, Subcommand)]
enum PolytopeCmd {
    Contains {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
    Interior {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
}

#[derive(Debug, Subcommand)]
enum ConjugateCmd {
    AlphaStar {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
    LegendreCheck {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    Hv {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        u_star: String,
        /// Take the supremum over all of L₀(p) instead of the model space.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    Suite {
        /// Group name or number; repeat to select several. Defaults to all.
        #[arg(long)]
        group: Vec<String>,
        /// Defaults to DEFEXP_SEED, then to the built-in seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// A successful command: the document to emit and the exit code.
struct Outcome {
    document: Value,
    code: i32,
}

impl Outcome {
    fn ok(value: impl Serialize) -> Result<Self, Error> {
        Self::with_code(value, EXIT_OK)
    }

    fn with_code(value: impl Serialize, code: i32) -> Result<Self, Error> {
        let document = serde_json::to_value(value).map_err(|e| Error::invalid("output", e.to_string()))?;
        Ok(Self { document, code })
    }
}

/// Parses `"1.0,2.0"` (brackets optional) into numbers.
fn parse_list(text: &str, at: &str) -> Result<Vec<f64>, Error> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .enumerate()
        .map(|(i, s)| {
            let x: f64 = s
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{at}[{i}]"), format!("not a number: {:?}", s.trim())))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::invalid(format!("{at}[{i}]"), "non-finite value"))
            }
        })
        .collect()
}

fn parse_vector(text: &str, at: &str, len: usize) -> Result<Vec<f64>, Error> {
    let values = parse_list(text, at)?;
    if values.len() != len {
        return Err(Error::invalid(at, format!("expected {len} values, found {}", values.len())));
    }
    Ok(values)
}

/// A single integer selects a centered statistic; anything else is an inline vector.
fn direction(fam: &PhiExponentialFamily, text: &str, at: &str) -> Result<RandomVariable, Error> {
    if let Ok(j) = text.trim().parse::<usize>() {
        return fam
            .centered_basis()
            .get(j)
            .cloned()
            .ok_or_else(|| Error::invalid(at, format!("statistic index {j} out of range (dimension {})", fam.dim())));
    }
    Ok(RandomVariable::new(parse_vector(text, at, fam.space().len())?))
}

fn point(fam: &PhiExponentialFamily, args: &PointArgs) -> Result<RandomVariable, Error> {
    match (&args.theta, &args.u) {
        (Some(theta), _) => {
            let theta = parse_vector(theta, "theta", fam.dim())?;
            Ok(fam.theta_to_u(&theta)?.0.variable().clone())
        }
        (None, Some(u)) => Ok(RandomVariable::new(parse_vector(u, "u", fam.space().len())?)),
        (None, None) => Err(Error::invalid("theta", "either --theta or --u is required")),
    }
}

fn load(arg: &ModelArg) -> Result<PhiExponentialFamily, Error> {
    model::load(&arg.model)
}

fn deform_eval(
    model_path: &Option<PathBuf>,
    inline: &Option<String>,
    v: &Option<String>,
    u: &Option<String>,
) -> Result<Outcome, Error> {
    let d: Deformation = match (model_path, inline) {
        (Some(path), _) => model::load(path)?.deformation().clone(),
        (None, Some(text)) => {
            let value: Value = serde_json::from_str(text)
                .map_err(|e| Error::invalid("deformation", format!("malformed JSON: {e}")))?;
            model::deformation(&value, "deformation")?
        }
        (None, None) => return Err(Error::invalid("deformation", "either --model or --deformation is required")),
    };
    let mut rows = Vec::new();
    for x in parse_list(v.as_deref().unwrap_or(""), "v")? {
        rows.push(json!({"v": x, "phi": d.phi(x)?, "ln_phi": d.ln_phi(x)?}));
    }
    for x in parse_list(u.as_deref().unwrap_or(""), "u")? {
        rows.push(json!({
            "u": x,
            "exp_phi": d.exp_phi(x)?,
            "exp_phi_d1": d.exp_phi_d1(x)?,
            "exp_phi_d2": d.exp_phi_d2(x)?,
            "psi": d.psi(x)?,
        }));
    }
    if rows.is_empty() {
        return Err(Error::invalid("v", "give evaluation points with --v and/or --u"));
    }
    Outcome::ok(rows)
}

fn family(cmd: &FamilyCmd) -> Result<Outcome, Error> {
    match cmd {
        FamilyCmd::Alpha { model, theta } => {
            let fam = load(model)?;
            let theta = parse_vector(theta, "theta", fam.dim())?;
            Outcome::ok(json!({"alpha": fam.alpha(&theta)?}))
        }
        FamilyCmd::Density { model, theta } => {
            let fam = load(model)?;
            let theta = parse_vector(theta, "theta", fam.dim())?;
            Outcome::ok(json!({"alpha": fam.alpha(&theta)?, "density": fam.density(&theta)?}))
        }
        FamilyCmd::Escort { model, point: p } => {
            let fam = load(model)?;
            let u = point(&fam, p)?;
            Outcome::ok(json!({"escort": fam.escort(&u)?}))
        }
        FamilyCmd::Dk { model, point: p, v } => {
            let fam = load(model)?;
            let u = point(&fam, p)?;
            let v = direction(&fam, v, "v")?;
            Outcome::ok(json!({"dk": fam.dk(&u, &v)?}))
        }
        FamilyCmd::D2k { model, point: p, v, w } => {
            let fam = load(model)?;
            let u = point(&fam, p)?;
            let v = direction(&fam, v, "v")?;
            let w = direction(&fam, w, "w")?;
            Outcome::ok(json!({"d2k": fam.d2k(&u, &v, &w)?}))
        }
        FamilyCmd::Divergence { model, q } => {
            let fam = load(model)?;
            let q = Density::new(fam.space(), parse_vector(q, "q", fam.space().len())?).map_err(|e| match e {
                Error::InvalidInput { message, .. } => Error::invalid("q", message),
                other => other,
            })?;
            Outcome::ok(json!({"divergence": fam.divergence(&q)?, "u": fam.recover_u(&q)?}))
        }
    }
}

fn polytope(cmd: &PolytopeCmd) -> Result<Outcome, Error> {
    match cmd {
        PolytopeCmd::Contains { model, eta } => {
            let fam = load(model)?;
            let eta = parse_vector(eta, "eta", fam.dim())?;
            match fam.polytope().contains(&eta)? {
                MembershipCertificate::Member { weights } => Outcome::ok(json!({"member": true, "lambda": weights})),
                MembershipCertificate::Separated(sep) => {
                    Outcome::with_code(json!({"member": false, "separator": sep}), EXIT_OUTSIDE)
                }
            }
        }
        PolytopeCmd::Interior { model, eta } => {
            let fam = load(model)?;
            let eta = parse_vector(eta, "eta", fam.dim())?;
            let report = fam.polytope().relative_interior_contains(&eta)?;
            let code = if report.inside { EXIT_OK } else { EXIT_OUTSIDE };
            Outcome::with_code(report, code)
        }
    }
}

fn conjugate_cmd(cmd: &ConjugateCmd) -> Result<Outcome, Error> {
    let opts = ConjugateOptions::default();
    let finite_code = |finite: bool| if finite { EXIT_OK } else { EXIT_OUTSIDE };
    match cmd {
        ConjugateCmd::AlphaStar { model, eta } => {
            let fam = load(model)?;
            let eta = parse_vector(eta, "eta", fam.dim())?;
            let result = conjugate::alpha_star(&fam, &eta, &opts)?;
            let code = finite_code(result.is_finite());
            Outcome::with_code(result, code)
        }
        ConjugateCmd::LegendreCheck { model, theta } => {
            let fam = load(model)?;
            let theta = parse_vector(theta, "theta", fam.dim())?;
            let report = conjugate::legendre_check(&fam, &theta, &opts)?;
            let code = if report.passed { EXIT_OK } else { EXIT_NUMERICAL };
            Outcome::with_code(report, code)
        }
        ConjugateCmd::Hv { model, u_star, full } => {
            let fam = load(model)?;
            let u_star = RandomVariable::new(parse_vector(u_star, "u_star", fam.space().len())?);
            if *full {
                let result = conjugate::h_full(&fam, &u_star, &opts)?;
                let code = finite_code(result.conjugate.result.is_finite());
                Outcome::with_code(result, code)
            } else {
                let result = conjugate::h_v(&fam, &u_star, &opts)?;
                let code = finite_code(result.result.is_finite());
                Outcome::with_code(result, code)
            }
        }
    }
}

fn dispatch(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Deform(DeformCmd::Eval { model, deformation, v, u }) => deform_eval(model, deformation, v, u),
        Command::Family(cmd) => family(cmd),
        Command::Polytope(cmd) => polytope(cmd),
        Command::Conjugate(cmd) => conjugate_cmd(cmd),
        Command::Check(CheckCmd::Suite { group, seed }) => {
            let seed = seed.unwrap_or_else(|| OracleConfig::from_env().seed);
            let report = checks::run_suite(seed, group)?;
            let code = if report.passed { EXIT_OK } else { EXIT_OUTSIDE };
            Outcome::with_code(report, code)
        }
        Command::OracleValues => Outcome::ok(oracle::derived_values()),
    }
}

fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

fn error_document(err: &Error) -> Value {
    json!({"error": {"kind": err.kind(), "message": err.to_string(), "path": err.path()}})
}

fn render(document: &Value, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => output::to_canonical_json(document).map_err(|e| Error::invalid("output", e.to_string())),
        Format::Csv => output::to_csv(document).map_err(|e| Error::invalid("output", e.to_string())),
    }
}

/// Runs the CLI with the given arguments (program name first), writing
/// results to `out` and usage errors to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let report = |out: &mut dyn Write, e: &Error| {
        let _ = out.write_all(output::to_canonical_json(&error_document(e)).unwrap_or_default().as_bytes());
        exit_code(e)
    };
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        // errors always go to standard output as JSON
        Err(e) => return report(out, &e),
    };
    let text = match render(&outcome.document, cli.format) {
        Ok(t) => t,
        Err(e) => return report(out, &e),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return report(out, &Error::invalid("out", format!("cannot write {}: {e}", path.display())));
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    outcome.code
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(argv, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("defexp").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn version_reports_schema() {
        assert!(VERSION.ends_with(&format!("schema {}", model::SCHEMA_VERSION)));
        let (code, out, _) = capture(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains(VERSION));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, out, err) = capture(&["family", "alpha", "--bogus"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.is_empty());
        assert!(err.contains("Usage"));
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("1, -2.5,3", "x").unwrap(), vec![1.0, -2.5, 3.0]);
        assert_eq!(parse_list("[0.5]", "x").unwrap(), vec![0.5]);
        assert!(parse_list("", "x").unwrap().is_empty());
        let e = parse_list("1,a", "theta").unwrap_err();
        assert_eq!(e.path(), Some("theta[1]"));
        assert!(parse_list("nan", "x").is_err());
    }

    #[test]
    fn deform_eval_inline() {
        let (code, out, _) = capture(&["deform", "eval", "--deformation", r#"{"kind":"classical"}"#, "--u", "0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["exp_phi"], json!(1.0));
        assert_eq!(v[0]["psi"], json!(1.0));
    }

    #[test]
    fn errors_are_structured() {
        let (code, out, _) = capture(&["family", "alpha", "--model", "/nonexistent/model.json", "--theta", "0"]);
        assert_eq!(code, EXIT_INPUT);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["kind"], json!("invalid_input"));
        assert!(v["error"]["message"].as_str().is_some());
    }
}
