//! The `framedeg` command line: problem files in, summaries and JSON reports out.
//!
//! Exit codes: 0 success, 2 hypothesis failure (or an oracle that does not
//! confirm the exact answer), 3 parse or validation error, 4 resource cap.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use framedeg::groebner::{buchberger_with, BuchbergerOptions, QuotientAlgebra, DEFAULT_MAX_SPAIRS};
use framedeg::immersion::{build_alpha, intersection_from_lambda};
use framedeg::oracle::{self, OracleOptions, DEFAULT_MERGE_TOL, DEFAULT_TOL};
use framedeg::stiefel::{
    check_hypotheses, hypersurface_regularity, lambda_from_verified, minors_ideal,
    rank_drop_diagnostic, verify_hypotheses, HypothesisReport, LambdaReport, PipelineOptions,
    RetryPolicy, StiefelProblem, DEFAULT_RETRIES,
};
use framedeg::{format_poly, Error, FormKind, MonomialOrder, ParseError};

pub mod problem;
pub mod report;

pub use problem::{parse_problem, Problem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Json(String),
    Poly {
        field: String,
        file_offset: Option<usize>,
        source: ParseError,
    },
    Usage(String),
    Validation(Error),
    Pipeline(Error),
    OracleDisagreement { exact: i64, oracle: i64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Json(_) | CliError::Poly { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::Validation(_) => EXIT_INPUT,
            CliError::Pipeline(Error::StepLimitExceeded { .. }) => EXIT_RESOURCE,
            CliError::Pipeline(e) if e.is_hypothesis_failure() => EXIT_HYPOTHESIS,
            // malformed input that slipped past validation
            CliError::Pipeline(
                Error::Parse(_)
                | Error::InvalidProblem(_)
                | Error::InvalidRing(_)
                | Error::Shape(_)
                | Error::RingMismatch
                | Error::Arity { .. }
                | Error::VariableIndex { .. }
                | Error::NonSquare { .. },
            ) => EXIT_INPUT,
            CliError::Pipeline(_) => EXIT_HYPOTHESIS,
            CliError::OracleDisagreement { .. } => EXIT_HYPOTHESIS,
        }
    }

    /// Short machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Poly { .. } => "polynomial_parse",
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::OracleDisagreement { .. } => "oracle_disagreement",
            CliError::Pipeline(e) => match e {
                Error::NotZeroDimensional | Error::ZeroIdeal => "not_zero_dimensional",
                Error::PivotMinorDegenerate { .. } => "pivot_minor_degenerate",
                Error::DegenerateForm(FormKind::ThetaDelta) => "degenerate_theta_delta",
                Error::DegenerateForm(FormKind::ThetaFDelta) => "degenerate_theta_f_delta",
                Error::StepLimitExceeded { .. } => "step_limit_exceeded",
                Error::SignTooCloseToZero { .. } => "sign_too_close_to_zero",
                Error::PointCountMismatch { .. } => "point_count_mismatch",
                Error::EigenSolver(_) => "eigen_solver",
                _ => "pipeline",
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "cannot read problem file: {m}"),
            CliError::Json(m) => write!(f, "malformed problem file: {m}"),
            CliError::Poly {
                field,
                file_offset,
                source,
            } => {
                write!(f, "{field}: {source}")?;
                if let Some(o) = file_offset {
                    write!(f, " (file offset {o})")?;
                }
                Ok(())
            }
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Validation(e) => write!(f, "{e}"),
            CliError::Pipeline(e) => write!(f, "{e}"),
            CliError::OracleDisagreement { exact, oracle } => write!(
                f,
                "oracle disagreement: exact lambda {exact}, point sum {oracle}"
            ),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Pipeline(e)
    }
}

fn parse_order(s: &str) -> Result<MonomialOrder, String> {
    s.parse::<MonomialOrder>()
        .map_err(|_| format!("unknown monomial order {s:?}; use degrevlex or lex"))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "framedeg", version, about = "Exact frame invariants and Whitney intersection numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute Λ of a frame problem (immersion files use their Jacobian frame).
    Lambda(CommonArgs),
    /// Compute the intersection number of an immersion problem.
    Intersect(CommonArgs),
    /// Locate the real points of the minors variety numerically.
    Solve(CommonArgs),
    /// Check the hypotheses without computing Λ.
    Check(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Lambda(_) => "lambda",
            Command::Intersect(_) => "intersect",
            Command::Solve(_) => "solve",
            Command::Check(_) => "check",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Lambda(a) | Command::Intersect(a) | Command::Solve(a) | Command::Check(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Problem file (JSON).
    pub path: PathBuf,
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[arg(long, default_value = "degrevlex", value_parser = parse_order)]
    pub order: MonomialOrder,
    /// Seed for row-transform retries and the oracle's random combination.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random row transforms to try after the given frame.
    #[arg(long, default_value_t = DEFAULT_RETRIES)]
    pub retries: usize,
    /// Cross-check Λ by locating real points.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle residual and sign tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
    pub tol: f64,
    /// Print only the final value.
    #[arg(long)]
    pub quiet: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_SPAIRS)]
    pub max_spairs: usize,
    /// Record wall-clock time per stage in the report (makes it nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

impl CommonArgs {
    pub fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            groebner: BuchbergerOptions {
                order: self.order,
                max_spairs: self.max_spairs,
            },
            retry: RetryPolicy {
                retries: self.retries,
                seed: self.seed,
            },
        }
    }

    pub fn oracle_options(&self) -> OracleOptions {
        OracleOptions {
            tol: self.tol,
            merge_tol: DEFAULT_MERGE_TOL,
            seed: self.seed,
        }
    }
}

/// Accumulates the report and the human summary of one command.
struct Context<'a> {
    args: &'a CommonArgs,
    report: Map<String, Value>,
    stanzas: Vec<String>,
    timings: Map<String, Value>,
}

impl<'a> Context<'a> {
    fn set(&mut self, key: &str, value: Value) {
        self.report.insert(key.into(), value);
    }

    fn stanza(&mut self, text: String) {
        self.stanzas.push(text);
    }

    fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        self.timings.insert(stage.into(), json!(ms));
        out
    }

    /// Reads the problem and its frame (the Jacobian frame for immersions).
    fn load(&mut self) -> Result<(Problem, StiefelProblem), CliError> {
        let bytes = std::fs::read(&self.args.path)
            .map_err(|e| CliError::Io(format!("{}: {e}", self.args.path.display())))?;
        self.set("input_digest", json!(format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))));
        let text = String::from_utf8(bytes).map_err(|e| CliError::Json(e.to_string()))?;
        let problem = self.timed("parse", || parse_problem(&text))?;
        let frame = build_alpha_of(&problem)?;
        let kind = match &problem {
            Problem::Stiefel(_) => "stiefel",
            Problem::Immersion(_) => "immersion",
        };
        let ring = frame.f().ring().clone();
        self.set("kind", json!(kind));
        self.set("variables", json!(ring.var_names()));
        self.stanza(format!(
            "problem: {kind}, {}x{} frame over {}\n  f = {}",
            frame.n(),
            frame.k(),
            ring.var_names().join(", "),
            format_poly(frame.f())
        ));
        Ok((problem, frame))
    }
}

fn build_alpha_of(problem: &Problem) -> Result<StiefelProblem, CliError> {
    match problem {
        Problem::Stiefel(p) => Ok(p.clone()),
        Problem::Immersion(p) => build_alpha(p).map_err(CliError::Validation),
    }
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "not checked",
    }
}

fn hypotheses_stanza(h: &HypothesisReport) -> String {
    let random = match &h.randomization_applied {
        None => "none".to_string(),
        Some(t) => format!("row transform from attempt {} (seed {})", t.attempt, t.seed),
    };
    format!(
        "hypotheses: {}\n  zero-dimensional: {}\n  pivot minor invertible: {} (norm {})\n  theta_delta nondegenerate: {}\n  theta_f_delta nondegenerate: {}\n  randomization: {random}",
        if h.all_pass() { "pass" } else { "FAIL" },
        yes_no(Some(h.zero_dimensional)),
        yes_no(Some(h.pivot_minor_invertible)),
        framedeg::parse::format_rational(&h.pivot_minor_norm),
        yes_no(h.theta_delta_nondegenerate),
        yes_no(h.theta_f_delta_nondegenerate),
    )
}

fn lambda_stanzas(ctx: &mut Context, r: &LambdaReport) {
    let ring = r.gb.ring().clone();
    let mut gb = format!(
        "groebner basis: {} polynomials, order {}",
        r.gb.generators().len(),
        r.gb.order().name()
    );
    for g in r.gb.generators() {
        gb.push_str(&format!("\n  {}", format_poly(g)));
    }
    ctx.stanza(gb);
    let basis: Vec<_> = r.basis.iter().map(|m| report::monomial(&ring, m)).collect();
    ctx.stanza(format!(
        "algebra: dim {}\n  basis: {}\n  pivot minor: {}",
        r.algebra_dim,
        if basis.is_empty() { "(none)".to_string() } else { basis.join(", ") },
        format_poly(&r.pivot_minor)
    ));
    ctx.stanza(hypotheses_stanza(&r.hypotheses));
    ctx.stanza(format!(
        "trace forms:\n  delta residue: {}\n  signatures: theta_delta = {}, theta_f_delta = {}\n  k = {}, sign factor = {}",
        format_poly(&r.delta_residue),
        r.signature_delta,
        r.signature_f_delta,
        r.k,
        r.sign_factor
    ));
}

/// Runs the exact pipeline on a frame, plus the oracle when requested.
fn exact_lambda(ctx: &mut Context, frame: &StiefelProblem) -> Result<LambdaReport, CliError> {
    let opts = ctx.args.pipeline();
    let verified = ctx.timed("hypotheses", || verify_hypotheses(frame, &opts))?;
    ctx.set("hypotheses", report::hypotheses(&verified.report));
    let for_oracle = ctx.args.oracle.then(|| verified.clone());
    let r = ctx.timed("trace_forms", || lambda_from_verified(verified))?;
    ctx.set("hypotheses", report::hypotheses(&r.hypotheses));
    lambda_stanzas(ctx, &r);
    if let Some(v) = for_oracle {
        let oopts = ctx.args.oracle_options();
        let o = ctx.timed("oracle", || oracle::lambda_by_points_verified(&v, &oopts))?;
        ctx.set("oracle", report::oracle(&o, r.lambda, oopts.tol, oopts.merge_tol));
        let mut s = format!(
            "oracle: lambda = {} from {} located points ({})",
            o.lambda,
            o.points.len(),
            if o.lambda == r.lambda { "agrees" } else { "DISAGREES" }
        );
        for p in &o.points {
            s.push_str(&format!(
                "\n  {:?} residual {:e}, f = {}, delta = {}",
                p.point.coordinates, p.point.residual, p.f, p.delta
            ));
        }
        ctx.stanza(s);
        if o.lambda != r.lambda {
            return Err(CliError::OracleDisagreement {
                exact: r.lambda,
                oracle: o.lambda,
            });
        }
    }
    Ok(r)
}

fn cmd_lambda(ctx: &mut Context) -> Result<String, CliError> {
    let (_, frame) = ctx.load()?;
    let r = exact_lambda(ctx, &frame)?;
    ctx.set("result", report::lambda(&r));
    ctx.set("lambda", json!(r.lambda));
    Ok(format!("lambda = {}", r.lambda))
}

fn cmd_intersect(ctx: &mut Context) -> Result<String, CliError> {
    let (problem, frame) = ctx.load()?;
    let Problem::Immersion(ip) = &problem else {
        return Err(CliError::Usage(
            "intersect needs an immersion problem (kind \"immersion\")".into(),
        ));
    };
    let r = exact_lambda(ctx, &frame)?;
    let i = intersection_from_lambda(&r);
    ctx.set("m", json!(ip.m()));
    ctx.set("result", report::lambda(&r));
    ctx.set("lambda", json!(r.lambda));
    ctx.set("intersection_number", json!(i));
    Ok(format!("intersection_number = {i}"))
}

fn cmd_solve(ctx: &mut Context) -> Result<String, CliError> {
    let (_, frame) = ctx.load()?;
    let opts = ctx.args.pipeline();
    let algebra = ctx.timed("groebner", || -> Result<QuotientAlgebra, Error> {
        let gb = match buchberger_with(&minors_ideal(frame.matrix())?, opts.groebner) {
            Err(Error::ZeroIdeal) => return Err(Error::NotZeroDimensional),
            other => other?,
        };
        QuotientAlgebra::new(gb)
    })?;
    ctx.set("groebner_basis", report::groebner(algebra.gb()));
    ctx.set("algebra_dim", json!(algebra.dim()));
    let oopts = ctx.args.oracle_options();
    let points = ctx.timed("oracle", || oracle::solve_real_points(&algebra, &oopts))?;
    let counted = oracle::count_real_points(&algebra)?;
    ctx.set("points", Value::Array(points.iter().map(report::point).collect()));
    ctx.set("located", json!(points.len()));
    ctx.set("counted", json!(counted));
    let mut s = format!(
        "real points: {} located, {} counted by signature (algebra dim {})",
        points.len(),
        counted,
        algebra.dim()
    );
    for p in &points {
        s.push_str(&format!("\n  {:?} residual {:e}", p.coordinates, p.residual));
    }
    ctx.stanza(s);
    if points.len() as i64 != counted {
        return Err(Error::PointCountMismatch {
            located: points.len(),
            counted,
        }
        .into());
    }
    Ok(format!("real points = {counted}"))
}

fn cmd_check(ctx: &mut Context) -> Result<String, CliError> {
    let (_, frame) = ctx.load()?;
    let opts = ctx.args.pipeline();

    // advisory diagnostics; a failure here does not decide the exit code
    let mut diag = Map::new();
    let mut lines = vec!["diagnostics:".to_string()];
    let regular = hypersurface_regularity(frame.f(), &opts);
    let rank = rank_drop_diagnostic(frame.matrix(), &opts);
    for (name, d) in [("singular_points_of_m", regular), ("rank_drop_points", rank)] {
        let v = match &d {
            Ok(d) => report::diagnostic(d),
            Err(e) => json!({"status": "error", "message": e.to_string()}),
        };
        lines.push(format!("  {name}: {}", v["status"].as_str().unwrap_or("error")));
        diag.insert(name.into(), v);
    }
    ctx.set("diagnostics", Value::Object(diag));

    let h = ctx.timed("hypotheses", || check_hypotheses(&frame, &opts))?;
    ctx.set("hypotheses", report::hypotheses(&h));
    ctx.stanza(hypotheses_stanza(&h));
    ctx.stanza(lines.join("\n"));
    if h.theta_delta_nondegenerate == Some(false) {
        return Err(Error::DegenerateForm(FormKind::ThetaDelta).into());
    }
    if h.theta_f_delta_nondegenerate == Some(false) {
        return Err(Error::DegenerateForm(FormKind::ThetaFDelta).into());
    }
    Ok("hypotheses: pass".into())
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INPUT
                }
            };
        }
    };
    execute(&cli.command, out, err)
}

pub fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = command.args();
    let mut ctx = Context {
        args,
        report: Map::new(),
        stanzas: Vec::new(),
        timings: Map::new(),
    };
    ctx.set("schema", json!(report::SCHEMA));
    ctx.set(
        "tool",
        json!({"name": "framedeg", "version": env!("CARGO_PKG_VERSION")}),
    );
    ctx.set("command", json!(command.name()));
    ctx.set(
        "options",
        json!({
            "order": args.order.name(),
            "seed": args.seed,
            "retries": args.retries,
            "max_spairs": args.max_spairs,
            "oracle": args.oracle,
            "tol": args.tol,
        }),
    );
    let outcome = match command {
        Command::Lambda(_) => cmd_lambda(&mut ctx),
        Command::Intersect(_) => cmd_intersect(&mut ctx),
        Command::Solve(_) => cmd_solve(&mut ctx),
        Command::Check(_) => cmd_check(&mut ctx),
    };
    let code = match &outcome {
        Ok(_) => EXIT_OK,
        Err(e) => e.exit_code(),
    };
    if let Err(e) = &outcome {
        ctx.set(
            "error",
            json!({"kind": e.kind(), "message": e.to_string(), "exit_code": code}),
        );
    }
    if args.timings {
        let t = std::mem::take(&mut ctx.timings);
        ctx.set("timings_ms", Value::Object(t));
    }
    ctx.set("exit_code", json!(code));

    if !args.quiet {
        for s in &ctx.stanzas {
            let _ = writeln!(out, "{s}");
        }
    }
    match &outcome {
        Ok(line) => {
            let _ = writeln!(out, "{line}");
        }
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {e}", e.kind());
        }
    }
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&Value::Object(ctx.report)).unwrap_or_default() + "\n";
        if let Err(e) = std::fs::write(path, text) {
            let _ = writeln!(err, "cannot write report {}: {e}", path.display());
            return if code == EXIT_OK { EXIT_INPUT } else { code };
        }
    }
    code
}
