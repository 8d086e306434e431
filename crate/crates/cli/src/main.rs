//! `blowup`: every verification in the library as a reproducible run.
//!
//! Exit codes are part of the contract:
//!   0  success, all requested checks passed
//!   1  invalid configuration (bad flags, gamma <= alpha, malformed grid)
//!   2  numerical failure (quadrature non-convergence, ODE step failure,
//!      trajectory too shallow to fit)
//!   3  invariant or certificate violation
//!
//! Output files contain data only — run metadata (resolved parameters,
//! defaults applied) goes to a `<out>.meta.json` sidecar so identical
//! configs produce byte-identical data files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use blowup_model::coefficients::{
    crho_quad, cw_star_quad, g_of_alpha, CoeffError, CoefficientSet,
    DEFAULT_N_MODES, CSV_HEADER,
};
use blowup_model::dynamics::{
    classify_regime, expected_exponent, rate_fit, simulate, DynError, Regime, Termination,
    Trajectory, DEFAULT_FIT_WINDOW,
};
use blowup_model::exact::{
    certify_phi_bound, certify_phi_bound_tampered, g_exact, rat, to_f64, ExactError,
};
use blowup_model::profiles::{ModelParams, ParamsError};
use blowup_model::quad::QuadError;
use blowup_model::spectral::{solve_f, SpectralError};

const PHI_ENVELOPE: f64 = 6.0 / 7.0;
const CROSS_CHECK_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "blowup", version)]
#[command(about = "Verification toolkit for the linear self-similar collapse model")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coefficient table with closed-form vs quadrature cross-checks
    Coeffs {
        #[command(flatten)]
        params: ParamFlags,
        /// Evaluate on a grid instead of a single point
        #[arg(long = "alpha-grid", value_name = "MIN:MAX:STEPS")]
        alpha_grid: Option<String>,
        /// Spectral truncation for C_S*
        #[arg(long, default_value_t = DEFAULT_N_MODES)]
        modes: usize,
        #[command(flatten)]
        output: OutputFlags,
        /// Negative control: corrupt one closed form and prove the
        /// cross-checks catch it
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Exact-rational certificate for the 6/7 envelope
    Certify {
        /// Write the report here (stdout otherwise)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Negative control: flip one integer and watch the clauses fail
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Solve the angular profile by spectral projection
    SolveF {
        #[command(flatten)]
        params: ParamFlags,
        /// Number of odd modes kept
        #[arg(long, default_value_t = DEFAULT_N_MODES)]
        modes: usize,
        /// Write the solution JSON here (stdout otherwise)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Integrate the clock ODE; write the trajectory and a decay-law fit
    Simulate {
        #[command(flatten)]
        params: ParamFlags,
        /// Stop once J drops below this
        #[arg(long = "J-stop", default_value_t = 1e-4)]
        j_stop: f64,
        /// Give up at this time even if J is still above J-stop
        #[arg(long = "t-max", default_value_t = 1e3)]
        t_max: f64,
        /// Trajectory CSV path; the fit lands next to it as `<out>.fit.json`
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Re-fit a stored trajectory (params read from its sidecar)
    RateFit {
        /// Trajectory CSV produced by `simulate --out`
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        /// Fraction of the deep-collapse samples to fit
        #[arg(long, default_value_t = DEFAULT_FIT_WINDOW)]
        window: f64,
        /// Write the fit JSON here (stdout otherwise)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Scan the envelope Phi(alpha) over a grid, in parallel
    ScanPhi {
        /// Alpha grid to scan
        #[arg(long = "alpha-grid", value_name = "MIN:MAX:STEPS", default_value = "0.01:0.33:33")]
        alpha_grid: String,
        /// Fixed gamma for every point (default: alpha + 2.6 pointwise)
        #[arg(long)]
        gamma: Option<f64>,
        /// Spectral truncation for C_S*
        #[arg(long, default_value_t = DEFAULT_N_MODES)]
        modes: usize,
        /// Quadrature tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputFlags,
    },
}

/// Model parameters shared by the point-wise subcommands.
#[derive(Args)]
struct ParamFlags {
    /// Self-similarity index, decimal in (0, 1)
    #[arg(long)]
    alpha: Option<f64>,
    /// Alpha as an exact fraction; rational identities are checked exactly
    /// along the way
    #[arg(long = "alpha-exact", value_name = "P/Q", conflicts_with = "alpha")]
    alpha_exact: Option<String>,
    /// Radial decay rate; must exceed alpha (default alpha + 2.6)
    #[arg(long)]
    gamma: Option<f64>,
    /// Clock amplitude
    #[arg(long = "Gamma", default_value_t = 1.0)]
    gamma_amp: f64,
    /// Lower edge of the angular cutoff window
    #[arg(long = "sigma-cut")]
    sigma_cut: Option<f64>,
    /// Upper edge of the angular cutoff window
    #[arg(long = "sigma-max")]
    sigma_max: Option<f64>,
    /// Quadrature tolerance
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct OutputFlags {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write data here (plus a `<out>.meta.json` sidecar); stdout if absent
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

// ---------------------------------------------------------------------------
// failure -> exit code

enum Failure {
    Config(String),
    Numeric(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numeric(m) | Failure::Invariant(m) => m,
        }
    }
}

impl From<ParamsError> for Failure {
    fn from(e: ParamsError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<QuadError> for Failure {
    fn from(e: QuadError) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<CoeffError> for Failure {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::Domain { .. } => Failure::Config(e.to_string()),
            CoeffError::Quad(_) | CoeffError::Spectral(_) => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<DynError> for Failure {
    fn from(e: DynError) -> Self {
        match e {
            DynError::Coeff(inner) => inner.into(),
            DynError::InsufficientData { .. } | DynError::Indeterminate { .. } => {
                Failure::Numeric(e.to_string())
            }
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Coeffs { params, alpha_grid, modes, output, tamper } => {
            cmd_coeffs(params, alpha_grid, modes, output, tamper)
        }
        Cmd::Certify { out, tamper } => cmd_certify(out, tamper),
        Cmd::SolveF { params, modes, out } => cmd_solve_f(params, modes, out),
        Cmd::Simulate { params, j_stop, t_max, out } => cmd_simulate(params, j_stop, t_max, out),
        Cmd::RateFit { input, params, window, out } => cmd_rate_fit(input, params, window, out),
        Cmd::ScanPhi { alpha_grid, gamma, modes, tol, output } => {
            cmd_scan_phi(alpha_grid, gamma, modes, tol, output)
        }
    }
}

// ---------------------------------------------------------------------------
// parameter resolution

/// Alpha as parsed from the flags: always a float, plus the exact fraction
/// when the caller gave one.
struct AlphaSpec {
    value: f64,
    exact: Option<(i64, i64)>,
}

fn parse_alpha(flags: &ParamFlags) -> Result<AlphaSpec, Failure> {
    if let Some(a) = flags.alpha {
        return Ok(AlphaSpec { value: a, exact: None });
    }
    if let Some(spec) = &flags.alpha_exact {
        let (p, q) = spec
            .split_once('/')
            .ok_or_else(|| Failure::Config(format!("--alpha-exact wants P/Q, got `{spec}`")))?;
        let p: i64 = p
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("--alpha-exact numerator `{p}`")))?;
        let q: i64 = q
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("--alpha-exact denominator `{q}`")))?;
        if q <= 0 || p <= 0 || p >= q {
            return Err(Failure::Config(format!(
                "--alpha-exact {p}/{q} must lie strictly inside (0, 1)"
            )));
        }
        return Ok(AlphaSpec { value: to_f64(&rat(p, q)), exact: Some((p, q)) });
    }
    Err(Failure::Config(
        "one of --alpha or --alpha-exact is required".into(),
    ))
}

/// Apply flag overrides on top of the library defaults, recording which
/// fields stayed at their default for the sidecar.
fn build_params(
    alpha: f64,
    flags: &ParamFlags,
    defaults_applied: &mut Vec<&'static str>,
) -> Result<ModelParams, Failure> {
    let gamma = match flags.gamma {
        Some(g) => g,
        None => {
            defaults_applied.push("gamma");
            alpha + 2.6
        }
    };
    let mut p = ModelParams::new(alpha, gamma, flags.gamma_amp)?;
    match (flags.sigma_cut, flags.sigma_max) {
        (None, None) => {
            defaults_applied.push("sigma_cut");
            defaults_applied.push("sigma_max");
        }
        (cut, max) => {
            if cut.is_none() {
                defaults_applied.push("sigma_cut");
            }
            if max.is_none() {
                defaults_applied.push("sigma_max");
            }
            p = p.with_angles(cut.unwrap_or(p.sigma_cut), max.unwrap_or(p.sigma_max))?;
        }
    }
    match flags.tol {
        Some(t) => p = p.with_quad_tol(t)?,
        None => defaults_applied.push("quad_tol"),
    }
    Ok(p)
}

/// `MIN:MAX:STEPS` -> inclusive linspace. The envelope certification covers
/// (0, 1/3]; points beyond that still compute but draw a warning.
fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure::Config(format!("--alpha-grid `{spec}`: {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, steps] = parts[..] else {
        return Err(bad("want MIN:MAX:STEPS"));
    };
    let min: f64 = min.parse().map_err(|_| bad("MIN is not a number"))?;
    let max: f64 = max.parse().map_err(|_| bad("MAX is not a number"))?;
    let steps: usize = steps.parse().map_err(|_| bad("STEPS is not a count"))?;
    if steps < 1 {
        return Err(bad("need at least one step"));
    }
    if !(min > 0.0 && max < 1.0 && min <= max) {
        return Err(bad("grid must satisfy 0 < MIN <= MAX < 1"));
    }
    let grid: Vec<f64> = if steps == 1 {
        vec![min]
    } else {
        (0..steps)
            .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let outside = grid.iter().filter(|&&a| a > 1.0 / 3.0 + 1e-12).count();
    if outside > 0 {
        eprintln!(
            "warning: {outside} grid point(s) exceed 1/3; the envelope bound is \
             only certified on (0, 1/3], rows are reported without the check"
        );
    }
    Ok(grid)
}

// ---------------------------------------------------------------------------
// output plumbing

fn sidecar_path(data: &Path) -> PathBuf {
    let mut s = data.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Write the data file plus its metadata sidecar, or dump data to stdout.
/// Data files never carry timestamps or host information.
fn emit(out: &Option<PathBuf>, data: &str, sidecar: &serde_json::Value) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, data).map_err(|e| io_failure(path, e))?;
            let meta = sidecar_path(path);
            let body = format!("{:#}\n", sidecar);
            fs::write(&meta, body).map_err(|e| io_failure(&meta, e))?;
            Ok(())
        }
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn sidecar(command: &str, params: Option<&ModelParams>, defaults: &[&str], run: serde_json::Value) -> serde_json::Value {
    json!({
        "tool": "blowup",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
        "defaults_applied": defaults,
        "run": run,
    })
}

// ---------------------------------------------------------------------------
// coeffs

fn coefficient_row(
    alpha: f64,
    flags: &ParamFlags,
    modes: usize,
    tamper: bool,
) -> Result<CoefficientSet, Failure> {
    let mut defaults = Vec::new();
    let params = build_params(alpha, flags, &mut defaults)?;
    let set = CoefficientSet::compute(&params, modes)?;
    cross_check(&set, &params, tamper)?;
    Ok(set)
}

/// Closed forms against their defining integrals. A mismatch means the
/// library itself is inconsistent, which outranks any numeric hiccup.
fn cross_check(set: &CoefficientSet, params: &ModelParams, tamper: bool) -> Result<(), Failure> {
    let a = set.alpha;
    // the negative control corrupts the closed-form side by one part in 1e5,
    // far above the agreement tolerance
    let skew = if tamper { 1.0 + 1e-5 } else { 1.0 };
    let checks = [
        ("cw_star", set.cw_star * skew, cw_star_quad(a, params.quad_tol)?),
        ("crho1", set.crho1 * skew, crho_quad(1, a, set.gamma, params.quad_tol)?),
        ("crho2", set.crho2 * skew, crho_quad(2, a, set.gamma, params.quad_tol)?),
    ];
    for (name, closed, quad) in checks {
        let rel = (closed - quad).abs() / quad.abs().max(f64::MIN_POSITIVE);
        if rel > CROSS_CHECK_TOL {
            return Err(Failure::Invariant(format!(
                "{name} closed form disagrees with quadrature at alpha = {a}: \
                 {closed:.12e} vs {quad:.12e} (rel {rel:.2e})"
            )));
        }
    }
    if a <= 1.0 / 3.0 + 1e-12 && set.phi > PHI_ENVELOPE {
        return Err(Failure::Invariant(format!(
            "phi({a}) = {:.12} exceeds the 6/7 envelope",
            set.phi
        )));
    }
    Ok(())
}

fn render_rows(rows: &[CoefficientSet], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in rows {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
    }
}

fn cmd_coeffs(
    flags: ParamFlags,
    alpha_grid: Option<String>,
    modes: usize,
    output: OutputFlags,
    tamper: bool,
) -> Result<(), Failure> {
    let mut exact_note = serde_json::Value::Null;
    let alphas: Vec<f64> = match &alpha_grid {
        Some(spec) => {
            if flags.alpha.is_some() || flags.alpha_exact.is_some() {
                return Err(Failure::Config(
                    "--alpha-grid conflicts with --alpha/--alpha-exact".into(),
                ));
            }
            parse_grid(spec)?
        }
        None => {
            let spec = parse_alpha(&flags)?;
            if let Some((p, q)) = spec.exact {
                exact_note = exact_cross_check(p, q)?;
            }
            vec![spec.value]
        }
    };

    let mut rows = Vec::with_capacity(alphas.len());
    for &a in &alphas {
        rows.push(coefficient_row(a, &flags, modes, tamper)?);
    }

    // single-point runs pin the full resolved params; grid runs vary
    // pointwise (gamma tracks alpha), so the sidecar records the rule instead
    let mut defaults = Vec::new();
    let params_for_meta = build_params(alphas[0], &flags, &mut defaults)?;
    let meta = sidecar(
        "coeffs",
        if alpha_grid.is_none() { Some(&params_for_meta) } else { None },
        &defaults,
        json!({
            "modes": modes,
            "format": output.format.name(),
            "alpha_grid": alpha_grid,
            "gamma": flags.gamma,
            "gamma_default": if flags.gamma.is_none() { Some("alpha + 2.6 pointwise") } else { None },
            "points": alphas.len(),
            "exact": exact_note,
        }),
    );
    emit(&output.out, &render_rows(&rows, output.format), &meta)
}

/// The rational route: evaluate G exactly at p/q and insist the float
/// pipeline lands on it to a part in 1e12. Returns the sidecar fragment.
fn exact_cross_check(p: i64, q: i64) -> Result<serde_json::Value, Failure> {
    let a = rat(p, q);
    let g = g_exact(&a)?;
    let g_float = g_of_alpha(to_f64(&a));
    let g_rat = to_f64(&g);
    if (g_float - g_rat).abs() > 1e-12 * g_rat.abs().max(1e-300) {
        return Err(Failure::Invariant(format!(
            "float G({p}/{q}) = {g_float:.15e} drifts from the exact value {g}"
        )));
    }
    Ok(json!({
        "alpha": format!("{p}/{q}"),
        "G": g.to_string(),
        "G_float": g_rat,
    }))
}

// ---------------------------------------------------------------------------
// certify

fn cmd_certify(out: Option<PathBuf>, tamper: bool) -> Result<(), Failure> {
    let report = if tamper { certify_phi_bound_tampered() } else { certify_phi_bound() };
    let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
    body.push('\n');
    let meta = sidecar("certify", None, &[], json!({ "tamper": tamper }));
    emit(&out, &body, &meta)?;
    if !report.passed() {
        let failed: Vec<&str> = report
            .clauses
            .iter()
            .filter(|c| c.verdict != "pass")
            .map(|c| c.id.as_str())
            .collect();
        return Err(Failure::Invariant(format!(
            "certificate failed: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// solve-f

fn cmd_solve_f(flags: ParamFlags, modes: usize, out: Option<PathBuf>) -> Result<(), Failure> {
    let spec = parse_alpha(&flags)?;
    let mut defaults = Vec::new();
    let params = build_params(spec.value, &flags, &mut defaults)?;
    let sol = solve_f(spec.value, modes, params.quad_tol)?;
    let mut body = serde_json::to_string_pretty(&sol).expect("solution serializes");
    body.push('\n');
    let meta = sidecar(
        "solve-f",
        Some(&params),
        &defaults,
        json!({ "modes": modes }),
    );
    emit(&out, &body, &meta)
}

// ---------------------------------------------------------------------------
// simulate / rate-fit

#[derive(Serialize)]
struct FitReport {
    alpha: f64,
    gamma: f64,
    #[serde(rename = "Gamma_amp")]
    gamma_amp: f64,
    regime: Regime,
    exponent: f64,
    exponent_expected: f64,
    t_star: Option<f64>,
    r_squared: f64,
}

fn fit_report(traj: &Trajectory, window: f64) -> Result<FitReport, Failure> {
    let class = classify_regime(traj)?;
    let expected = expected_exponent(&traj.params)?;
    // for a collapse the dedicated fit refines T* over the caller's window
    let (exponent, t_star, r2) = if class.regime == Regime::FiniteTimeCollapse {
        let f = rate_fit(traj, window)?;
        (f.exponent, Some(f.t_star), f.r_squared)
    } else {
        (class.exponent, None, class.r_squared)
    };
    Ok(FitReport {
        alpha: traj.params.alpha,
        gamma: traj.params.gamma,
        gamma_amp: traj.params.gamma_amp,
        regime: class.regime,
        exponent,
        exponent_expected: expected,
        t_star,
        r_squared: r2,
    })
}

fn cmd_simulate(
    flags: ParamFlags,
    j_stop: f64,
    t_max: f64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    if !(j_stop > 0.0 && j_stop < 1.0) {
        return Err(Failure::Config(format!("--J-stop {j_stop} must lie in (0, 1)")));
    }
    if !(t_max > 0.0) {
        return Err(Failure::Config(format!("--t-max {t_max} must be positive")));
    }
    let spec = parse_alpha(&flags)?;
    let mut defaults = Vec::new();
    let params = build_params(spec.value, &flags, &mut defaults)?;
    let traj = simulate(&params, j_stop, t_max)?;
    if traj.terminated == Termination::StepFailure {
        return Err(Failure::Numeric(format!(
            "integrator stalled at t = {:.6e}, J = {:.6e}",
            traj.times.last().unwrap(),
            traj.clock.last().unwrap()
        )));
    }

    let fit = fit_report(&traj, DEFAULT_FIT_WINDOW)?;
    let mut fit_body = serde_json::to_string_pretty(&fit).expect("fit serializes");
    fit_body.push('\n');

    // stdout carries the fit; the trajectory is file-only (it is bulky and
    // would corrupt the JSON stream)
    if let Some(path) = &out {
        let meta = sidecar(
            "simulate",
            Some(&params),
            &defaults,
            json!({
                "J_stop": j_stop,
                "t_max": t_max,
                "samples": traj.len(),
                "terminated": traj.terminated,
            }),
        );
        emit(&Some(path.clone()), &traj.to_csv(), &meta)?;
        let mut fit_path = path.as_os_str().to_owned();
        fit_path.push(".fit.json");
        let fit_path = PathBuf::from(fit_path);
        fs::write(&fit_path, &fit_body).map_err(|e| io_failure(&fit_path, e))?;
    }
    print!("{fit_body}");
    Ok(())
}

fn parse_trajectory_csv(path: &Path, params: ModelParams) -> Result<Trajectory, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("t,J,W") => {}
        other => {
            return Err(Failure::Config(format!(
                "{}: expected header `t,J,W`, got {other:?}",
                path.display()
            )))
        }
    }
    let (mut times, mut clock, mut strain) = (Vec::new(), Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let mut cols = line.split(',').map(str::trim).map(str::parse::<f64>);
        let mut next = |name: &str| -> Result<f64, Failure> {
            cols.next()
                .and_then(Result::ok)
                .ok_or_else(|| {
                    Failure::Config(format!("{}:{}: bad {name}", path.display(), i + 2))
                })
        };
        times.push(next("t")?);
        clock.push(next("J")?);
        strain.push(next("W")?);
    }
    if times.len() < 2 {
        return Err(Failure::Config(format!(
            "{}: trajectory holds {} samples",
            path.display(),
            times.len()
        )));
    }
    let terminated = if *clock.last().unwrap() <= 1e-2 {
        Termination::ReachedJMin
    } else {
        Termination::ReachedTMax
    };
    Ok(Trajectory { times, clock, strain, params, terminated })
}

/// Recover the run parameters a trajectory was produced with, preferring
/// explicit flags over the sidecar.
fn params_for_input(input: &Path, flags: &ParamFlags) -> Result<ModelParams, Failure> {
    if flags.alpha.is_some() || flags.alpha_exact.is_some() {
        let spec = parse_alpha(flags)?;
        return build_params(spec.value, flags, &mut Vec::new());
    }
    let meta = sidecar_path(input);
    let text = fs::read_to_string(&meta).map_err(|_| {
        Failure::Config(format!(
            "{}: sidecar not found; pass --alpha (and --gamma/--Gamma) explicitly",
            meta.display()
        ))
    })?;
    let doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", meta.display())))?;
    serde_json::from_value(doc["params"].clone())
        .map_err(|e| Failure::Config(format!("{}: params: {e}", meta.display())))
}

fn cmd_rate_fit(
    input: PathBuf,
    flags: ParamFlags,
    window: f64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Failure::Config(format!("--window {window} must lie in (0, 1]")));
    }
    let params = params_for_input(&input, &flags)?;
    let traj = parse_trajectory_csv(&input, params)?;
    let fit = fit_report(&traj, window)?;
    let mut body = serde_json::to_string_pretty(&fit).expect("fit serializes");
    body.push('\n');
    let meta = sidecar(
        "rate-fit",
        Some(&params),
        &[],
        json!({ "input": input.display().to_string(), "window": window }),
    );
    emit(&out, &body, &meta)
}

// ---------------------------------------------------------------------------
// scan-phi

fn cmd_scan_phi(
    alpha_grid: String,
    gamma: Option<f64>,
    modes: usize,
    tol: Option<f64>,
    output: OutputFlags,
) -> Result<(), Failure> {
    let grid = parse_grid(&alpha_grid)?;

    let point = |a: f64| -> Result<CoefficientSet, Failure> {
        let mut p = ModelParams::new(a, gamma.unwrap_or(a + 2.6), 1.0)?;
        if let Some(t) = tol {
            p = p.with_quad_tol(t)?;
        }
        Ok(CoefficientSet::compute(&p, modes)?)
    };

    // pure per-point work, chunked across cores; chunk order restores the
    // grid order so output stays deterministic
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(grid.len())
        .max(1);
    let chunk_len = grid.len().div_ceil(workers);
    let results: Vec<Result<CoefficientSet, Failure>> = thread::scope(|s| {
        let handles: Vec<_> = grid
            .chunks(chunk_len)
            .map(|chunk| s.spawn(move || chunk.iter().map(|&a| point(a)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r?);
    }
    let violations: Vec<String> = rows
        .iter()
        .filter(|r| r.alpha <= 1.0 / 3.0 + 1e-12 && r.phi > PHI_ENVELOPE)
        .map(|r| format!("phi({}) = {:.12}", r.alpha, r.phi))
        .collect();

    let meta = sidecar(
        "scan-phi",
        None,
        if tol.is_none() { &["quad_tol"] } else { &[] },
        json!({
            "alpha_grid": alpha_grid,
            "gamma": gamma,
            "gamma_default": "alpha + 2.6 pointwise",
            "modes": modes,
            "quad_tol": tol,
            "points": rows.len(),
            "format": output.format.name(),
        }),
    );
    emit(&output.out, &render_rows(&rows, output.format), &meta)?;
    if !violations.is_empty() {
        return Err(Failure::Invariant(format!(
            "envelope exceeded at {} point(s): {}",
            violations.len(),
            violations.join("; ")
        )));
    }
    Ok(())
}
