//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghzsym_core::bell::{BellExpression, Builtin};
use ghzsym_core::entanglement::{cgm_unclamped, classify};
use ghzsym_core::optimizer::{seesaw, seesaw_abs, MeasurementScenario, SeesawConfig};
use ghzsym_core::region::{
    self, grid_params, l15_formula_applicable, scan_point, NonlocalityReport, ScanMode,
};
use ghzsym_core::state::{density_matrix, GhzParams};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::output::{self, fmt_num, round_sig, Metadata};
use crate::{constexpr, facet, verify};

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID_PARAMS: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    InvalidParams(String),
    #[error("{0}")]
    Facet(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{failed} of {total} criteria failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::InvalidParams(_) => "invalid-params",
            CliError::Facet(_) => "facet",
            CliError::Io(_) => "io",
            CliError::VerificationFailed { .. } => "verify",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidParams(_) => EXIT_INVALID_PARAMS,
            CliError::VerificationFailed { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ghzsym",
    version,
    about = "Entanglement and nonlocality of three-qubit GHZ-symmetric states"
)]
pub struct Cli {
    /// Omit the timestamp from the metadata block.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Write output to this file instead of standard output.
    #[arg(short, long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// p as a constant expression, e.g. `1/2` or `-1/(2*sqrt2)`.
    #[arg(short, allow_hyphen_values = true)]
    pub p: String,
    /// q as a constant expression, e.g. `sqrt3/4`.
    #[arg(short, allow_hyphen_values = true)]
    pub q: String,
}

#[derive(Debug, Args)]
pub struct SeesawArgs {
    /// Random starts per optimization.
    #[arg(long, default_value_t = 50)]
    pub starts: usize,
    /// Seed of the start generator.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Stop a start once a sweep improves by less than this.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_sweeps: usize,
}

impl SeesawArgs {
    fn config(&self) -> Result<SeesawConfig, CliError> {
        if self.starts == 0 {
            return Err(CliError::Usage("--starts must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        Ok(SeesawConfig {
            starts: self.starts,
            tol: self.tol,
            seed: self.seed,
            max_sweeps: self.max_sweeps.max(1),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Analytic,
    Numeric,
    Both,
}

impl From<Mode> for ScanMode {
    fn from(m: Mode) -> ScanMode {
        match m {
            Mode::Analytic => ScanMode::Analytic,
            Mode::Numeric => ScanMode::Numeric,
            Mode::Both => ScanMode::Both,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the state constraints (exit status 2 when violated).
    Validate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Entanglement class and genuine multipartite concurrence.
    Classify {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Full nonlocality report for one state.
    Report {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value = "both")]
        mode: Mode,
        #[command(flatten)]
        seesaw: SeesawArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Numeric maximum of one inequality, with the closed form when known.
    Maximize {
        #[command(flatten)]
        state: StateArgs,
        /// Built-in name (mermin, sliwa15, svetlichny, bancal99) or facet file path.
        #[arg(long = "ineq", value_name = "NAME|PATH")]
        inequality: String,
        /// Maximize the absolute value instead of the signed expression.
        #[arg(long)]
        abs: bool,
        #[command(flatten)]
        seesaw: SeesawArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Region data over a (p,q) grid.
    Scan {
        /// Grid size as `<p steps>x<q steps>` or a single number for both.
        #[arg(long, default_value = "50x50")]
        steps: String,
        #[arg(long, value_enum, default_value = "analytic")]
        mode: Mode,
        #[command(flatten)]
        seesaw: SeesawArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the acceptance suite (exit status 3 on failure).
    Verify {
        #[command(flatten)]
        seesaw: SeesawArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print built-in inequalities in the facet file format.
    RenderExpr {
        /// Built-in names; all four when omitted.
        names: Vec<String>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Errors are reported as one `error[code]: message` line.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let message = first.trim_start_matches("error: ");
            eprintln!("error[usage]: {message}");
            return EXIT_USAGE;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let timestamp = !cli.no_timestamp;
    let result = match &cli.command {
        Command::Validate { state, format } => cmd_validate(&mut out, state, *format, timestamp),
        Command::Classify { state, format } => cmd_classify(&mut out, state, *format, timestamp),
        Command::Report {
            state,
            mode,
            seesaw,
            format,
        } => cmd_report(
            &mut out,
            state,
            *mode,
            &seesaw.config()?,
            *format,
            timestamp,
        ),
        Command::Maximize {
            state,
            inequality,
            abs,
            seesaw,
            format,
        } => cmd_maximize(
            &mut out,
            state,
            inequality,
            *abs,
            &seesaw.config()?,
            *format,
            timestamp,
        ),
        Command::Scan {
            steps,
            mode,
            seesaw,
            format,
        } => cmd_scan(
            &mut out,
            steps,
            *mode,
            &seesaw.config()?,
            *format,
            timestamp,
        ),
        Command::Verify { seesaw, format } => {
            cmd_verify(&mut out, &seesaw.config()?, *format, timestamp)
        }
        Command::RenderExpr { names } => cmd_render(&mut out, names),
    };
    out.flush()?;
    result
}

fn parse_value(label: &str, text: &str) -> Result<f64, CliError> {
    constexpr::eval(text)
        .map_err(|e| CliError::InvalidParams(format!("cannot parse {label} `{text}`: {e}")))
}

fn parse_state(state: &StateArgs) -> Result<GhzParams, CliError> {
    Ok(GhzParams::new(
        parse_value("p", &state.p)?,
        parse_value("q", &state.q)?,
    ))
}

fn checked_state(state: &StateArgs) -> Result<GhzParams, CliError> {
    let params = parse_state(state)?;
    params
        .check()
        .map_err(|e| CliError::InvalidParams(e.to_string()))?;
    Ok(params)
}

fn invalid(e: ghzsym_core::Error) -> CliError {
    CliError::InvalidParams(e.to_string())
}

/// Writes `fields` either as `key=value` lines after a `#` metadata block or
/// as `{"metadata": …, "result": …}`.
fn emit(
    out: &mut dyn Write,
    meta: &Metadata,
    fields: Map<String, Value>,
    format: Format,
) -> Result<(), CliError> {
    match format {
        Format::Json => output::write_json(
            out,
            &json!({ "metadata": meta.to_json(), "result": fields }),
        )?,
        Format::Text | Format::Csv => {
            meta.write_comment_block(out)?;
            for (k, v) in &fields {
                writeln!(out, "{k}={}", text_value(v))?;
            }
        }
    }
    Ok(())
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), fmt_num),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

fn cmd_validate(
    out: &mut dyn Write,
    state: &StateArgs,
    format: Format,
    ts: bool,
) -> Result<(), CliError> {
    let params = parse_state(state)?;
    let meta = Metadata::new("validate").with_timestamp(ts);
    let mut fields = Map::new();
    fields.insert("p".into(), num(params.p));
    fields.insert("q".into(), num(params.q));
    let verdict = params.check();
    fields.insert("valid".into(), json!(verdict.is_ok()));
    if let Err(reason) = &verdict {
        fields.insert("reason".into(), json!(reason.to_string()));
    }
    emit(out, &meta, fields, format)?;
    verdict.map_err(|e| CliError::InvalidParams(e.to_string()))
}

fn cmd_classify(
    out: &mut dyn Write,
    state: &StateArgs,
    format: Format,
    ts: bool,
) -> Result<(), CliError> {
    let params = checked_state(state)?;
    let class = classify(params).map_err(invalid)?;
    let unclamped = cgm_unclamped(params).map_err(invalid)?;
    let mut fields = Map::new();
    fields.insert("p".into(), num(params.p));
    fields.insert("q".into(), num(params.q));
    fields.insert("ent_class".into(), json!(class.as_str()));
    fields.insert("cgm".into(), num(unclamped.max(0.0)));
    fields.insert("cgm_unclamped".into(), num(unclamped));
    emit(
        out,
        &Metadata::new("classify").with_timestamp(ts),
        fields,
        format,
    )
}

fn cmd_report(
    out: &mut dyn Write,
    state: &StateArgs,
    mode: Mode,
    config: &SeesawConfig,
    format: Format,
    ts: bool,
) -> Result<(), CliError> {
    let params = checked_state(state)?;
    let report = NonlocalityReport::new(params, mode.into(), config).map_err(invalid)?;
    let mut meta = Metadata::new("report")
        .with_seesaw(config)
        .with_timestamp(ts);
    meta.push("mode", ScanMode::from(mode).as_str());
    let Value::Object(mut fields) = output::report_json(params.p, params.q, Some(&report)) else {
        unreachable!("report_json returns an object")
    };
    if report.numeric.is_some_and(|n| !n.converged) {
        fields.insert(
            "warning".into(),
            json!("a see-saw start hit the sweep limit"),
        );
    }
    emit(out, &meta, fields, format)
}

fn load_inequality(arg: &str) -> Result<BellExpression, CliError> {
    if let Ok(b) = arg.parse::<Builtin>() {
        return Ok(b.expression());
    }
    let text = std::fs::read_to_string(arg).map_err(|e| {
        CliError::Usage(format!(
            "`{arg}` is neither a built-in inequality nor a readable file ({e})"
        ))
    })?;
    facet::parse(&text).map_err(|e| CliError::Facet(format!("{arg}: {e}")))
}

/// Closed-form maximum for a built-in, with whether it is expected to hold.
fn closed_form(expr: &BellExpression, params: GhzParams) -> Option<(f64, bool)> {
    let builtin: Builtin = expr.name().parse().ok()?;
    if !expr.same_inequality(&builtin.expression()) {
        return None;
    }
    let value = match builtin {
        Builtin::Mermin => (region::mermin_max(params).ok()?, true),
        Builtin::Svetlichny => (region::svetlichny_max(params).ok()?, true),
        Builtin::Bancal99 => (region::ns99_max(params).ok()?, true),
        Builtin::Sliwa15 => (
            region::l15_max(params).ok()?,
            l15_formula_applicable(params),
        ),
    };
    Some(value)
}

fn scenario_fields(fields: &mut Map<String, Value>, scenario: &MeasurementScenario) {
    for (label, d) in MeasurementScenario::LABELS.iter().zip(scenario.directions) {
        fields.insert(format!("{label}_theta"), num(d.theta));
        fields.insert(format!("{label}_phi"), num(d.phi));
    }
}

fn cmd_maximize(
    out: &mut dyn Write,
    state: &StateArgs,
    inequality: &str,
    abs: bool,
    config: &SeesawConfig,
    format: Format,
    ts: bool,
) -> Result<(), CliError> {
    let params = checked_state(state)?;
    let expr = load_inequality(inequality)?;
    let rho = density_matrix(params).map_err(invalid)?;
    let result = if abs {
        seesaw_abs(&rho, &expr, config)
    } else {
        seesaw(&rho, &expr, config)
    };
    let mut meta = Metadata::new("maximize")
        .with_seesaw(config)
        .with_timestamp(ts);
    meta.push("objective", if abs { "absolute" } else { "signed" });
    let mut fields = Map::new();
    fields.insert("p".into(), num(params.p));
    fields.insert("q".into(), num(params.q));
    fields.insert("inequality".into(), json!(expr.name()));
    fields.insert("polytope".into(), json!(expr.polytope().as_str()));
    fields.insert("bound".into(), num(expr.bound()));
    fields.insert("numeric".into(), num(result.value));
    match closed_form(&expr, params) {
        Some((value, applies)) => {
            fields.insert("analytic".into(), num(value));
            fields.insert("analytic_applies".into(), json!(applies));
        }
        None => {
            fields.insert("analytic".into(), Value::Null);
        }
    }
    fields.insert(
        "violated".into(),
        json!(result.value > expr.bound() + verify::VIOLATION_TOL),
    );
    fields.insert("converged".into(), json!(result.converged));
    fields.insert("starts_used".into(), json!(result.starts_used));
    if !result.converged {
        fields.insert("warning".into(), json!("best start hit the sweep limit"));
    }
    scenario_fields(&mut fields, &result.scenario);
    emit(out, &meta, fields, format)
}

fn parse_steps(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--steps expects <p>x<q> or <n> with values >= 2, got `{text}`"
        ))
    };
    let (a, b) = match text.split_once(['x', 'X']) {
        Some((a, b)) => (a, b),
        None => (text, text),
    };
    let p: usize = a.trim().parse().map_err(|_| bad())?;
    let q: usize = b.trim().parse().map_err(|_| bad())?;
    if p < 2 || q < 2 {
        return Err(bad());
    }
    Ok((p, q))
}

fn cmd_scan(
    out: &mut dyn Write,
    steps: &str,
    mode: Mode,
    config: &SeesawConfig,
    format: Format,
    ts: bool,
) -> Result<(), CliError> {
    let (p_steps, q_steps) = parse_steps(steps)?;
    let mode: ScanMode = mode.into();
    let points = (0..p_steps * q_steps)
        .into_par_iter()
        .map(|k| {
            scan_point(
                grid_params(k / p_steps, k % p_steps, p_steps, q_steps),
                mode,
                config,
            )
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(invalid)?;
    let mut meta = Metadata::new("scan").with_timestamp(ts);
    if mode != ScanMode::Analytic {
        meta = meta.with_seesaw(config);
    }
    meta.push("mode", mode.as_str());
    meta.push("grid", format!("{p_steps}x{q_steps}"));
    meta.push(
        "valid_points",
        points.iter().filter(|s| s.report.is_some()).count(),
    );
    if mode == ScanMode::Both {
        const TOL: f64 = 1e-5;
        for name in ["mermin", "sliwa15", "svetlichny", "bancal99"] {
            let count = points
                .iter()
                .filter_map(|s| s.report.as_ref())
                .filter(|r| r.discrepancies(TOL).contains(&name))
                .count();
            meta.push(&format!("discrepancies_{name}"), count);
        }
        meta.push("discrepancy_tol", fmt_num(TOL));
    }
    match format {
        Format::Json => output::write_scan_json(out, &meta, &points)?,
        Format::Csv | Format::Text => output::write_scan_csv(out, &meta, &points)?,
    }
    Ok(())
}

fn cmd_verify(
    out: &mut dyn Write,
    config: &SeesawConfig,
    format: Format,
    ts: bool,
) -> Result<(), CliError> {
    let started = Instant::now();
    let report = verify::run(config);
    let meta = Metadata::new("verify")
        .with_seesaw(config)
        .with_timestamp(ts);
    let failed = report.results.iter().filter(|r| !r.passed).count();
    match format {
        Format::Json => {
            let criteria: Vec<Value> = report
                .results
                .iter()
                .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail }))
                .collect();
            output::write_json(
                out,
                &json!({ "metadata": meta.to_json(), "criteria": criteria, "all_passed": failed == 0 }),
            )?;
        }
        Format::Text | Format::Csv => {
            meta.write_comment_block(out)?;
            for line in report.lines() {
                writeln!(out, "{line}")?;
            }
            writeln!(
                out,
                "passed {}/{}",
                report.results.len() - failed,
                report.results.len()
            )?;
        }
    }
    out.flush()?;
    eprintln!(
        "verify finished in {:.1} s",
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        return Err(CliError::VerificationFailed {
            failed,
            total: report.results.len(),
        });
    }
    Ok(())
}

fn cmd_render(out: &mut dyn Write, names: &[String]) -> Result<(), CliError> {
    let exprs = if names.is_empty() {
        Builtin::ALL.iter().map(|b| b.expression()).collect()
    } else {
        names
            .iter()
            .map(|n| n.parse::<Builtin>().map(Builtin::expression))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?
    };
    write!(out, "{}", facet::render_all(&exprs))?;
    Ok(())
}
