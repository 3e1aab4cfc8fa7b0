//! The `vortexlab` command line.
//!
//! Each subcommand is also available as a plain function (`cmd_*`) that
//! returns its report, so the binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical or search failure.

mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{parse_a, parse_range, AValue, FileConfig, Format, RunConfig, CONFIG_ENV};
pub use report::{
    BpCheck, ClassifyReport, EmpiricalCell, IntegrateReport, ProfileRow, Report, ShootReport, SweepResult,
    VerifyBpReport, SPEC_VERSION,
};

use crate::analyze::{cumulative_energy, energy, pohozaev_residual, tail_report};
use crate::error::{Error, Result};
use crate::integrate::{integrate, IntegrateConfig};
use crate::model::{classify_params_with_tol, level, nearest_level, CaseTag, ModelParams, Parity};
use crate::shoot::{bp_exact, find_a, ShootConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

/// Scan range for `a` when none is given.
pub const DEFAULT_A_RANGE: (f64, f64) = (0.1, 10.0);

#[derive(Debug, Parser)]
#[command(name = "vortexlab", version, about = "Vortex profiles of the easy-axis Landau-Lifshitz equation")]
pub struct Cli {
    /// Output format (default: csv for integrate and sweep, json otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for scans and sweeps
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one profile from the origin
    Integrate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Level used for the Pohozaev column (default: nearest to h(r_final))
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// Integrate to r_max even after a terminal event
        #[arg(long)]
        run_to_r_max: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Search for a with h(r) -> k*pi
    Shoot {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// lo:hi (default 0.1:10)
        #[arg(long, allow_hyphen_values = true)]
        a_range: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Print the case label of (lambda, omega)
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        line_tol: f64,
    },
    /// Label an n x n grid of (lambda, omega), optionally searching each cell
    Sweep {
        #[arg(long, allow_hyphen_values = true, default_value = "-1:1")]
        lambda_range: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-1:1")]
        omega_range: String,
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Run a shooting search in every cell
        #[arg(long)]
        empirical: bool,
        /// Half-width of the lines lambda = 0, omega = 0, lambda = +-omega
        #[arg(long, default_value_t = 0.0)]
        line_tol: f64,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        a_range: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Compare integrated profiles with the closed-form instanton
    VerifyBp {
        #[arg(long = "m", value_delimiter = ',', allow_hyphen_values = true, default_value = "1,2,3")]
        ms: Vec<i32>,
        /// Initial slope (default 2·|m|!)
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, default_value_t = 1e4)]
        r_max: f64,
        /// Right end of the pointwise comparison
        #[arg(long, default_value_t = 20.0)]
        sup_r: f64,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub conv_tol: Option<f64>,
    #[arg(long)]
    pub series_tol: Option<f64>,
    #[arg(long)]
    pub shoot_tol: Option<f64>,
}

impl ModelArgs {
    fn apply(&self, c: &mut RunConfig) {
        if let Some(v) = self.lambda {
            c.lambda = v;
        }
        if let Some(v) = self.omega {
            c.omega = v;
        }
        if let Some(v) = self.m {
            c.m = v;
        }
    }
}

impl TolArgs {
    fn apply(&self, c: &mut RunConfig) {
        let pairs = [
            (self.r_max, &mut c.r_max),
            (self.rel_tol, &mut c.rel_tol),
            (self.abs_tol, &mut c.abs_tol),
            (self.conv_tol, &mut c.conv_tol),
            (self.series_tol, &mut c.series_tol),
            (self.shoot_tol, &mut c.shoot_tol),
        ];
        for (flag, slot) in pairs {
            if let Some(v) = flag {
                *slot = v;
            }
        }
    }
}

/// Exit code for an error: 2 for bad input, 3 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::InvalidConfig(_) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

/// Short machine-readable failure reason.
pub fn reason(e: &Error) -> &'static str {
    match e {
        Error::InvalidParams(_) | Error::InvalidConfig(_) => "invalid input",
        Error::NoBracketFound(_) => "no bracket",
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => "output error",
        _ => "numerical failure",
    }
}

#[derive(Serialize)]
struct Failure<'a> {
    spec_version: &'a str,
    status: &'a str,
    reason: &'a str,
    message: String,
}

/// Parse `args` (program name first), run, report errors on `stderr` and
/// return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            let failure = Failure {
                spec_version: SPEC_VERSION,
                status: "error",
                reason: reason(&e),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&failure).unwrap_or_else(|_| e.to_string()));
            exit_code(&e)
        }
    }
}

/// Run a parsed command line. Returns the exit code for runs that complete
/// but fail a check (`verify-bp`).
pub fn execute(cli: &Cli) -> Result<i32> {
    let file = FileConfig::from_env()?;
    let jobs = cli.jobs.or(file.jobs);
    match jobs {
        Some(0) => Err(Error::InvalidConfig("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(|| dispatch(cli, &file)),
        None => dispatch(cli, &file),
    }
}

fn dispatch(cli: &Cli, file: &FileConfig) -> Result<i32> {
    let mut cfg = RunConfig::from_file(file)?;
    if cli.format.is_some() {
        cfg.format = cli.format;
    }
    if cli.output.is_some() {
        cfg.output_path = cli.output.clone();
    }
    let code = match &cli.command {
        Command::Integrate {
            model,
            a,
            k,
            run_to_r_max,
            tol,
        } => {
            model.apply(&mut cfg);
            tol.apply(&mut cfg);
            if let Some(a) = a {
                cfg.a = Some(AValue::Single(*a));
            }
            if k.is_some() {
                cfg.k = *k;
            }
            let rep = cmd_integrate(&cfg, *run_to_r_max)?;
            emit(&cfg, Format::Csv, &rep)?;
            EXIT_OK
        }
        Command::Shoot { model, k, a_range, tol } => {
            model.apply(&mut cfg);
            tol.apply(&mut cfg);
            if let Some(r) = a_range {
                cfg.a = Some(parse_a(r)?);
            }
            if k.is_some() {
                cfg.k = *k;
            }
            let rep = cmd_shoot(&cfg)?;
            emit(&cfg, Format::Json, &rep)?;
            EXIT_OK
        }
        Command::Classify { lambda, omega, line_tol } => {
            let rep = cmd_classify(lambda.unwrap_or(cfg.lambda), omega.unwrap_or(cfg.omega), *line_tol)?;
            emit(&cfg, Format::Json, &rep)?;
            EXIT_OK
        }
        Command::Sweep {
            lambda_range,
            omega_range,
            n,
            empirical,
            line_tol,
            m,
            a_range,
            tol,
        } => {
            tol.apply(&mut cfg);
            if let Some(m) = m {
                cfg.m = *m;
            }
            if let Some(r) = a_range {
                cfg.a = Some(parse_a(r)?);
            }
            let spec = SweepSpec {
                lambda_range: parse_range(lambda_range)?,
                omega_range: parse_range(omega_range)?,
                n: *n,
                line_tol: *line_tol,
                empirical: *empirical,
            };
            let rep = cmd_sweep(&spec, &cfg)?;
            emit(&cfg, Format::Csv, &rep)?;
            EXIT_OK
        }
        Command::VerifyBp { ms, a, r_max, sup_r } => {
            let mut icfg = cfg.integrate_config();
            icfg.r_max = *r_max;
            let rep = cmd_verify_bp(ms, *a, *sup_r, &icfg)?;
            emit(&cfg, Format::Json, &rep)?;
            if rep.all_passed {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
    };
    Ok(code)
}

fn emit<R: report::Report>(cfg: &RunConfig, default: Format, rep: &R) -> Result<()> {
    let mut out = report::Sink::open(cfg.output_path.as_deref())?;
    match cfg.format.unwrap_or(default) {
        Format::Csv => rep.write_csv(&mut out)?,
        Format::Json => report::write_json(&mut out, rep)?,
    }
    out.finish()
}

fn model_params(cfg: &RunConfig) -> Result<ModelParams> {
    cfg.validate()?;
    ModelParams::new(cfg.lambda, cfg.omega, cfg.m)
}

/// Integrate one profile and attach cumulative energy and the Pohozaev
/// residual to every sample.
pub fn cmd_integrate(cfg: &RunConfig, run_to_r_max: bool) -> Result<IntegrateReport> {
    let p = model_params(cfg)?;
    let a = match cfg.a {
        Some(AValue::Single(a)) => a,
        Some(AValue::Range(..)) => return Err(Error::InvalidConfig("integrate takes a single a".into())),
        None => return Err(Error::InvalidConfig("a is required".into())),
    };
    let icfg = IntegrateConfig {
        run_to_r_max,
        ..cfg.integrate_config()
    };
    let prof = integrate(&p, a, &icfg)?;
    let k = cfg
        .k
        .unwrap_or_else(|| prof.last().map_or(0, |s| nearest_level(s.h)));
    let cum = cumulative_energy(&prof);
    let ledger = pohozaev_residual(&p, &prof, k);
    let rows = prof
        .samples
        .iter()
        .zip(&cum)
        .zip(&ledger.samples)
        .map(|((s, &e), pz)| ProfileRow {
            r: s.r,
            h: s.h,
            dh: s.dh,
            energy_cum: e,
            pohozaev_residual: pz.residual,
        })
        .collect();
    Ok(IntegrateReport {
        spec_version: SPEC_VERSION,
        params: p,
        a,
        k,
        r0: prof.r0(),
        terminal: prof.terminal.clone(),
        energy: cum.last().copied().unwrap_or(0.0),
        pohozaev_sup_relative_residual: ledger.sup_relative_residual,
        samples: rows,
    })
}

/// Shooting search for `h → kπ` over the configured `a` range.
pub fn cmd_shoot(cfg: &RunConfig) -> Result<ShootReport> {
    let p = model_params(cfg)?;
    let k = cfg.k.ok_or_else(|| Error::InvalidConfig("k is required".into()))?;
    let a_range = match cfg.a {
        Some(AValue::Range(lo, hi)) => (lo, hi),
        Some(AValue::Single(a)) => (a, a),
        None => DEFAULT_A_RANGE,
    };
    let label = classify_params_with_tol(p.lambda, p.omega, 0.0);
    let b = find_a(&p, k, a_range, &cfg.shoot_config())?;
    Ok(ShootReport {
        spec_version: SPEC_VERSION,
        params: p,
        k,
        a_range,
        parity_admitted: label.admissible_limit_parity.admits(k),
        a_lo: b.a_lo,
        a_hi: b.a_hi,
        a_star: b.a_star,
        residual: b.residual,
        iterations: b.iterations,
        accepted: b.accepted,
        r_closest: b.r_closest,
    })
}

pub fn cmd_classify(lambda: f64, omega: f64, line_tol: f64) -> Result<ClassifyReport> {
    if !lambda.is_finite() || !omega.is_finite() {
        return Err(Error::InvalidParams("lambda and omega must be finite".into()));
    }
    if !(line_tol >= 0.0) {
        return Err(Error::InvalidConfig("line_tol must be nonnegative".into()));
    }
    Ok(ClassifyReport {
        spec_version: SPEC_VERSION,
        lambda,
        omega,
        label: classify_params_with_tol(lambda, omega, line_tol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub lambda_range: (f64, f64),
    pub omega_range: (f64, f64),
    pub n: usize,
    pub line_tol: f64,
    pub empirical: bool,
}

fn axis(range: (f64, f64), n: usize, name: &str) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    let degenerate = || Error::InvalidConfig(format!("degenerate {name} range {lo}:{hi} for n = {n}"));
    match n {
        0 => Err(degenerate()),
        1 if lo == hi => Ok(vec![lo]),
        1 => Err(degenerate()),
        _ if lo >= hi => Err(degenerate()),
        _ => Ok((0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect()),
    }
}

/// Target level searched in a sweep cell: `π` unless only even levels are
/// admissible.
fn sweep_level(parity: Parity) -> i64 {
    if parity == Parity::Even {
        0
    } else {
        1
    }
}

/// Case labels on an `n × n` grid, row-major in `λ`, and with `empirical`
/// a shooting search per cell.
pub fn cmd_sweep(spec: &SweepSpec, cfg: &RunConfig) -> Result<SweepResult> {
    if !(spec.line_tol >= 0.0) {
        return Err(Error::InvalidConfig("line_tol must be nonnegative".into()));
    }
    let lambdas = axis(spec.lambda_range, spec.n, "lambda")?;
    let omegas = axis(spec.omega_range, spec.n, "omega")?;
    let grid: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| omegas.iter().map(move |&o| (l, o)))
        .collect();
    let labels: Vec<_> = grid
        .iter()
        .map(|&(l, o)| classify_params_with_tol(l, o, spec.line_tol))
        .collect();
    let empirical = if spec.empirical {
        cfg.validate()?;
        ModelParams::new(0.0, 0.0, cfg.m)?;
        let a_range = match cfg.a {
            Some(AValue::Range(lo, hi)) => (lo, hi),
            Some(AValue::Single(a)) => (a, a),
            None => DEFAULT_A_RANGE,
        };
        let scfg = cfg.shoot_config();
        grid.par_iter()
            .zip(labels.par_iter())
            .map(|(&(l, o), label)| empirical_cell(l, o, cfg.m, label.tag, sweep_level(label.admissible_limit_parity), a_range, &scfg))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(SweepResult {
        spec_version: SPEC_VERSION,
        m: cfg.m,
        grid,
        labels,
        empirical,
    })
}

fn empirical_cell(
    lambda: f64,
    omega: f64,
    m: i32,
    tag: CaseTag,
    k: i64,
    a_range: (f64, f64),
    cfg: &ShootConfig,
) -> Result<EmpiricalCell> {
    let p = ModelParams::new(lambda, omega, m)?;
    let (a_star, tail_rate) = match find_a(&p, k, a_range, cfg) {
        Ok(b) => {
            let rate = if p.g_prime(level(k)) > 0.0 {
                b.solution_profile(k)
                    .and_then(|prof| tail_report(&p, &prof, k).ok())
                    .map(|t| t.fitted_rate)
            } else {
                None
            };
            (Some(b.a_star), rate)
        }
        Err(Error::NoBracketFound(_)) => (None, None),
        Err(e) => return Err(e),
    };
    let bracket_found = a_star.is_some();
    Ok(EmpiricalCell {
        lambda,
        omega,
        k,
        bracket_found,
        a_star,
        tail_rate,
        consistent: !(bracket_found && tag == CaseTag::NoFiniteEnergyVortex),
    })
}

pub const BP_SUP_TOL: f64 = 1e-8;
pub const BP_ENERGY_TOL: f64 = 1e-3;

/// Integrate `λ = ω = 0` for each degree and compare with the instanton:
/// pointwise on `[r0, sup_r]` and in energy over `[0, r_max]`.
pub fn cmd_verify_bp(ms: &[i32], a: Option<f64>, sup_r: f64, cfg: &IntegrateConfig) -> Result<VerifyBpReport> {
    if ms.is_empty() {
        return Err(Error::InvalidConfig("no degrees given".into()));
    }
    if !(sup_r > 0.0) {
        return Err(Error::InvalidConfig("sup_r must be positive".into()));
    }
    let icfg = IntegrateConfig {
        run_to_r_max: true,
        ..*cfg
    };
    let checks = ms
        .iter()
        .map(|&m| {
            let p = ModelParams::conformal(m)?;
            let fact: f64 = (1..=p.degree()).map(f64::from).product();
            let a = a.unwrap_or(2.0 * fact);
            let prof = integrate(&p, a, &icfg)?;
            let sup_error = prof
                .samples
                .iter()
                .take_while(|s| s.r <= sup_r)
                .map(|s| (s.h - bp_exact(m, a, s.r)).abs())
                .fold(0.0, f64::max);
            let expected = if a == 0.0 { 0.0 } else { 4.0 * f64::from(p.degree()) };
            let j = energy(&prof);
            let energy_error = (j - expected).abs();
            Ok(BpCheck {
                m,
                a,
                sup_error,
                energy: j,
                energy_expected: expected,
                energy_error,
                passed: sup_error <= BP_SUP_TOL && energy_error <= BP_ENERGY_TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyBpReport {
        spec_version: SPEC_VERSION,
        r_max: cfg.r_max,
        sup_r,
        checks,
        all_passed,
    })
}
