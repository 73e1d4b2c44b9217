//! Command-line surface. JSON reports go to stdout, summaries to stderr.
//!
//! Exit codes: 0 when a verified solution exists, 2 when none does, 1 on
//! any input or usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{check, constraints, sweep, AnalysisError, AnalysisReport, Method, PolyView, SweepReport};
use crate::applications::{
    chhajlany_spec, coulomb_constraint_symbolic, coulomb_energy, coulomb_roots, coulomb_spec, davidson_eigenvalue,
    davidson_spec, hyper_build, hyper_spec_l2, hyper_verify, krylov_robnik_spec, CoulombProblem, CoulombShift,
};
use crate::batch::Execution;
use crate::criteria::{classical_polynomials, degree_condition, ClassicalEquation, EquationSpec, Scalar};
use crate::exactalg::{format_rational, parse_rational, Rational, Ring};
use crate::heun::{heun_from_json, HeunFamily};

pub const DEMOS: [&str; 9] = [
    "davidson",
    "coulomb",
    "krylov",
    "chhajlany",
    "hyper",
    "bessel",
    "heun-confluent",
    "heun-biconfluent",
    "heun-general",
];

#[derive(Debug, Parser)]
#[command(name = "polyode", version, about = "Polynomial solutions of second-order linear ODEs, in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Only print JSON; suppress the summary on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    /// Width below which root refinement stops.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tolerance: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a numeric equation has a degree-n polynomial solution.
    Check(CheckArgs),
    /// Solve for the unknown parameter values that admit a degree-n solution.
    Constraints(ConstraintArgs),
    /// Run a worked example end to end.
    Demo(DemoArgs),
    /// Analyse a Heun equation given as a JSON object of named parameters.
    Heun(HeunArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Equation JSON file; stdin when absent or "-".
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "max_n")]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Name of the unknown parameter; required when one appears.
    #[arg(long)]
    pub unknown: Option<String>,
    /// Sweep n = 0..=MAX_N instead of a single degree.
    #[arg(long)]
    pub max_n: Option<usize>,
    /// AIM iteration cap (default 2n + 4).
    #[arg(long)]
    pub aim_cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConstraintArgs {
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "max_n")]
    pub n: Option<usize>,
    #[arg(long)]
    pub unknown: Option<String>,
    #[arg(long)]
    pub max_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// One of davidson, coulomb, krylov, chhajlany, hyper, bessel,
    /// heun-confluent, heun-biconfluent, heun-general.
    pub name: String,
    /// Parameters as a JSON object; keys override the flags below.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long = "Z")]
    pub z: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
}

#[derive(Debug, Args)]
pub struct HeunArgs {
    /// confluent, biconfluent or general.
    pub family: String,
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("reading input: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("unknown demo {:?}; valid names: {}", .0, DEMOS.join(", "))]
    UnknownDemo(String),
    #[error("unknown Heun family {:?}; valid names: {}", .0, HeunFamily::NAMES.join(", "))]
    UnknownFamily(String),
}

impl From<crate::criteria::CriteriaError> for CliError {
    fn from(e: crate::criteria::CriteriaError) -> Self {
        CliError::Analysis(e.into())
    }
}

impl From<crate::applications::ApplicationError> for CliError {
    fn from(e: crate::applications::ApplicationError) -> Self {
        CliError::Analysis(e.into())
    }
}

/// What a command produced: the JSON report, a summary and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub code: i32,
}

impl Outcome {
    fn from_analysis(r: &AnalysisReport) -> Self {
        Outcome {
            report: to_value(r),
            summary: r.summary(),
            code: r.exit_code(),
        }
    }

    fn from_sweep(r: &SweepReport) -> Self {
        let degrees: Vec<String> = r.degrees.iter().map(|d| d.to_string()).collect();
        Outcome {
            report: to_value(r),
            summary: format!(
                "swept n = 0..={}; degrees with solutions: [{}]",
                r.reports.len().saturating_sub(1),
                degrees.join(", ")
            ),
            code: r.exit_code(),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn read_input(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(std::fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn parse_equation(text: &str, declared: Option<&str>) -> Result<EquationSpec, CliError> {
    let eq = EquationSpec::from_json(text)?;
    if let Some(name) = declared {
        if !eq.is_numeric() && eq.unknown() != name {
            return Err(CliError::Usage(format!(
                "--unknown {name:?} does not match the parameter {:?} in the input",
                eq.unknown()
            )));
        }
        return Ok(eq.with_unknown(name));
    }
    Ok(eq)
}

pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let tol = cli.tolerance;
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage("--tolerance must be positive".into()));
    }
    match &cli.command {
        Command::Check(a) => {
            let eq = parse_equation(&read_input(a.input.as_ref(), stdin)?, a.unknown.as_deref())?;
            let parametric = !eq.is_numeric();
            if parametric && a.unknown.is_none() {
                return Err(AnalysisError::UndeclaredUnknown(eq.unknown().to_string()).into());
            }
            if let Some(max) = a.max_n {
                return Ok(Outcome::from_sweep(&sweep(&eq, max, a.method, tol, Execution::default())?));
            }
            let n = a.n.expect("clap requires n");
            let r = if parametric {
                constraints(&eq, n, tol)?
            } else {
                check(&eq, n, a.method, a.aim_cap)?
            };
            Ok(Outcome::from_analysis(&r))
        }
        Command::Constraints(a) => {
            let eq = parse_equation(&read_input(a.input.as_ref(), stdin)?, a.unknown.as_deref())?;
            if eq.is_numeric() {
                return Err(AnalysisError::NoUnknown.into());
            }
            if let Some(max) = a.max_n {
                return Ok(Outcome::from_sweep(&sweep(&eq, max, Method::Determinant, tol, Execution::default())?));
            }
            Ok(Outcome::from_analysis(&constraints(&eq, a.n.expect("clap requires n"), tol)?))
        }
        Command::Demo(a) => demo(a, tol),
        Command::Heun(a) => {
            let family = HeunFamily::parse(&a.family).ok_or_else(|| CliError::UnknownFamily(a.family.clone()))?;
            let text = read_input(a.input.as_ref(), stdin)?;
            heun(family, &text, a.n, tol)
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the outputs. Returns the process exit code.
pub fn main_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 1;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match run(&cli, stdin) {
        Ok(out) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&out.report).expect("valid JSON"));
            if !cli.json {
                let _ = writeln!(stderr, "{}", out.summary);
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// Closed-form condition, generic analysis and whether the two conditions
/// have the same zero set.
pub fn heun(family: HeunFamily, text: &str, n: usize, tol: f64) -> Result<Outcome, CliError> {
    let (eq, closed) = heun_from_json(family, text, n)?;
    let generic = degree_condition(&eq, n);
    let matches = proportional(&closed, &generic);
    let analysis = if eq.is_numeric() {
        check(&eq, n, Method::Both, None)?
    } else {
        constraints(&eq, n, tol)?
    };
    let var = eq.unknown();
    let report = json!({
        "family": HeunFamily::NAMES[family as usize],
        "n": n,
        "closed_form_condition": to_value(&PolyView::new(closed.clone(), var)),
        "condition_matches": matches,
        "analysis": to_value(&analysis),
    });
    let summary = format!(
        "{} Heun, closed-form condition {} = 0 ({})\n{}",
        HeunFamily::NAMES[family as usize],
        closed.to_string_in(var),
        if matches { "matches the generic condition" } else { "DIFFERS from the generic condition" },
        analysis.summary()
    );
    Ok(Outcome {
        report,
        summary,
        code: analysis.exit_code(),
    })
}

/// `a` and `b` are nonzero scalar multiples of each other, or both zero.
fn proportional(a: &Scalar, b: &Scalar) -> bool {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => true,
        (false, false) => a.monic() == b.monic(),
        _ => false,
    }
}

struct DemoParams {
    values: BTreeMap<String, String>,
}

impl DemoParams {
    fn collect(a: &DemoArgs) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        let flags = [
            ("n", &a.n),
            ("mu", &a.mu),
            ("Z", &a.z),
            ("d", &a.d),
            ("l", &a.l),
            ("m", &a.m),
            ("a", &a.a),
            ("b", &a.b),
            ("alpha", &a.alpha),
            ("p", &a.p),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                values.insert(k.to_string(), v.clone());
            }
        }
        if let Some(text) = &a.params {
            if !a.name.starts_with("heun-") {
                let obj: BTreeMap<String, Value> = serde_json::from_str(text)
                    .map_err(|e| CliError::Usage(format!("--params: {e}")))?;
                for (k, v) in obj {
                    let s = match v {
                        Value::String(s) => s,
                        Value::Number(n) => n.to_string(),
                        other => return Err(CliError::Usage(format!("--params: {k} has non-scalar value {other}"))),
                    };
                    values.insert(k, s);
                }
            }
        }
        Ok(DemoParams { values })
    }

    fn rational(&self, key: &str, default: i64) -> Result<Rational, CliError> {
        match self.values.get(key) {
            None => Ok(Rational::from_int(default)),
            Some(s) => parse_rational(s).map_err(|_| CliError::Usage(format!("{key}: not a rational number: {s:?}"))),
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("{key}: not a nonnegative integer: {s:?}"))),
        }
    }

    fn echo(&self, keys: &[&str]) -> Value {
        let mut m = serde_json::Map::new();
        for k in keys {
            if let Some(v) = self.values.get(*k) {
                m.insert(k.to_string(), Value::String(v.clone()));
            }
        }
        Value::Object(m)
    }
}

fn s(v: &Rational) -> Scalar {
    Scalar::constant(v.clone())
}

fn demo_outcome(name: &str, params: Value, derived: Value, analyses: &[AnalysisReport], verified: bool) -> Outcome {
    let mut summary = format!("demo {name}");
    if let Value::Object(m) = &derived {
        for (k, v) in m {
            let text = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
            summary += &format!("\n  {k}: {text}");
        }
    }
    for a in analyses {
        summary += &format!("\n{}", a.summary());
    }
    summary += &format!("\nverified: {verified}");
    Outcome {
        report: json!({
            "demo": name,
            "parameters": params,
            "derived": derived,
            "analyses": analyses.iter().map(to_value).collect::<Vec<_>>(),
            "verified": verified,
        }),
        summary,
        code: if verified { 0 } else { 2 },
    }
}

const HEUN_DEFAULTS: [&str; 3] = [
    r#"{"alpha":"1","beta":"0","gamma":"1","mu":{"t":["0","1"]},"nu":{"t":["-1","-1"]}}"#,
    r#"{"alpha":"0","beta":"1","gamma":"4","delta":{"t":["0","1"]}}"#,
    r#"{"a":"8/5","alpha":"-1","beta":"3","gamma":"1","delta":"1","epsilon":"1","q":{"t":["0","1"]}}"#,
];

fn demo(a: &DemoArgs, tol: f64) -> Result<Outcome, CliError> {
    if !DEMOS.contains(&a.name.as_str()) {
        return Err(CliError::UnknownDemo(a.name.clone()));
    }
    let p = DemoParams::collect(a)?;
    match a.name.as_str() {
        "davidson" => {
            let (mu, n) = (p.rational("mu", 0)?, p.count("n", 1)?);
            let eps = davidson_eigenvalue(&s(&mu), n);
            let spec = davidson_spec(&s(&mu), &eps);
            let r = check(&spec, 2 * n, Method::Both, None)?;
            let derived = json!({ "epsilon": format_rational(&eps.coeff(0)), "degree": 2 * n });
            let ok = r.exists;
            Ok(demo_outcome("davidson", p.echo(&["mu", "n"]), derived, &[r], ok))
        }
        "coulomb" => {
            let (z, n) = (p.rational("Z", 1)?, p.count("n", 1)?);
            let (d, l) = (p.count("d", 3)? as u32, p.count("l", 0)? as u32);
            let problem = CoulombProblem::new(z, CoulombShift::UnknownProduct, d, l)?;
            let spec = coulomb_spec(&problem, n)?;
            let r = constraints(&spec, n, tol)?;
            let roots = coulomb_roots(&problem, n, tol)?;
            let verified = !roots.is_empty()
                && roots
                    .iter()
                    .all(|x| x.certified && x.solution.as_ref().is_none_or(|s| s.residual_is_zero()));
            let derived = json!({
                "k": format_rational(&problem.k()),
                "alpha": format_rational(&problem.alpha(n)),
                "energy": format_rational(&coulomb_energy(&problem, n)),
                "constraint_in_k": coulomb_constraint_symbolic(n).to_string_in("t", "k"),
                "roots": to_value(&roots),
            });
            Ok(demo_outcome("coulomb", p.echo(&["Z", "d", "l", "n"]), derived, &[r], verified))
        }
        "krylov" => {
            let (alpha, n) = (p.rational("alpha", 1)?, p.count("n", 1)?);
            let nn = Rational::from_int(n as i64);
            let beta = -(&nn * &nn) - (&alpha - Rational::from_int(1)) * &nn;
            let spec = krylov_robnik_spec(&s(&alpha), &s(&beta), &Scalar::x()).with_unknown("gamma");
            let r = constraints(&spec, n, tol)?;
            let ok = r.exists;
            let derived = json!({ "beta": format_rational(&beta) });
            Ok(demo_outcome("krylov", p.echo(&["alpha", "n"]), derived, &[r], ok))
        }
        "chhajlany" => {
            let (pp, n) = (p.rational("p", 2)?, p.count("n", 1)?);
            let spec = chhajlany_spec(&s(&pp), &Scalar::from_int(2 * n as i64), &Scalar::x()).with_unknown("alpha");
            let r = constraints(&spec, n, tol)?;
            let ok = r.exists;
            let derived = json!({ "delta": (2 * n).to_string() });
            Ok(demo_outcome("chhajlany", p.echo(&["p", "n"]), derived, &[r], ok))
        }
        "hyper" => {
            let (m, n, l) = (p.count("m", 1)?, p.count("n", 1)?, p.count("l", 2)?);
            let (ha, hb) = (p.rational("a", 1)?, p.rational("b", 1)?);
            let sol = hyper_build(m, n, l, &ha, &hb)?;
            let v = hyper_verify(&sol);
            let analyses = if l == 2 {
                vec![check(&hyper_spec_l2(m, n, &ha, &hb), m + n + 1, Method::Determinant, None)?]
            } else {
                Vec::new()
            };
            let coeffs: Vec<String> = sol.poly.coeffs().iter().map(format_rational).collect();
            let derived = json!({
                "polynomial": sol.poly.to_string(),
                "coefficients": coeffs,
                "verification": to_value(&v),
            });
            Ok(demo_outcome("hyper", p.echo(&["m", "n", "l", "a", "b"]), derived, &analyses, v.passed()))
        }
        "bessel" => {
            let n = p.count("n", 2)?;
            let eq = ClassicalEquation::from_ints(1, 0, 0, 2, 2);
            let from_recurrence = classical_polynomials(&eq, n)?.pop().expect("n + 1 polynomials");
            let r = check(&eq.embed_degree(n)?, n, Method::Both, None)?;
            let agrees = r.solutions.iter().any(|s| s.solution.poly() == &from_recurrence.primitive());
            let derived = json!({
                "tau": (n * (n + 1)).to_string(),
                "recurrence_polynomial": from_recurrence.to_string(),
                "recurrence_agrees": agrees,
            });
            let ok = r.exists && agrees;
            Ok(demo_outcome("bessel", p.echo(&["n"]), derived, &[r], ok))
        }
        family => {
            let fam = HeunFamily::parse(family.trim_start_matches("heun-")).expect("listed demo");
            let text = a.params.clone().unwrap_or_else(|| HEUN_DEFAULTS[fam as usize].to_string());
            let n = p.count("n", 1)?;
            heun(fam, &text, n, tol)
        }
    }
}
