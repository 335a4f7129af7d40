//! Command-line front end.
//!
//! Subcommands: `rate` (single point), `sweep` (rate curves over an SNR
//! range), `accuracy` (approximation-error report), `mmin` (minimum
//! cardinality), `allocate` (multi-stream power allocation). Structured
//! output is CSV by default, with `--format json` as an escape hatch;
//! numeric fields carry 16 significant digits and identical invocations
//! produce byte-identical output.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 solver
//! non-convergence.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::allocation::{allocate, AllocationProblem};
use crate::closed_form;
use crate::constellation::{Constellation, ModulationKind};
use crate::error::{Error, Result};
use crate::exact_mi::{self, McSpec, QuadratureSpec};
use crate::rate::{RateMethod, RateResult};
use crate::snr::Snr;

/// Hard cap on sweep grid size, to catch absurd step values early.
const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Parser)]
#[command(
    name = "modcap",
    version,
    about = "Achievable information rates of PAM/QAM constellations over the AWGN channel"
)]
struct Cli {
    /// Output format for structured results
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    format: OutputFormat,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModulationArg {
    Pam,
    Qam,
}

impl ModulationArg {
    fn kind(self) -> ModulationKind {
        match self {
            ModulationArg::Pam => ModulationKind::Pam,
            ModulationArg::Qam => ModulationKind::Qam,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Exact MI via Gauss-Hermite quadrature
    ExactGh,
    /// Exact MI via Monte-Carlo sampling
    ExactMc,
    /// Sphere-packing closed form
    Approx,
    /// Laplace-method closed form (2-PAM / 4-QAM only)
    Asymptotic,
    /// Unconstrained AWGN capacity
    Capacity,
    /// min(capacity, entropy) upper bound
    Bound,
}

impl MethodArg {
    fn method(self) -> RateMethod {
        match self {
            MethodArg::ExactGh => RateMethod::ExactGaussHermite,
            MethodArg::ExactMc => RateMethod::ExactMonteCarlo,
            MethodArg::Approx => RateMethod::ApproxSphere,
            MethodArg::Asymptotic => RateMethod::ApproxAsymptotic,
            MethodArg::Capacity => RateMethod::Capacity,
            MethodArg::Bound => RateMethod::UpperBound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ApproxArg {
    /// Sphere-packing closed form
    Sphere,
    /// Laplace-method closed form (2-PAM / 4-QAM only)
    Asymptotic,
}

#[derive(Subcommand)]
enum Command {
    /// Rates of one constellation at one SNR, one CSV row per method
    Rate(RateCmd),
    /// Rate curves over an SNR grid, sorted by (m, method, snr_db)
    Sweep(SweepCmd),
    /// Worst-case error of an approximation against the exact rate
    Accuracy(AccuracyCmd),
    /// Minimum constellation cardinality to approach capacity
    Mmin(MminCmd),
    /// Optimal multi-stream power allocation
    Allocate(AllocateCmd),
}

#[derive(Args)]
struct RateCmd {
    #[arg(long, value_enum)]
    modulation: ModulationArg,
    /// Constellation cardinality M
    #[arg(long)]
    m: usize,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: f64,
    /// Comma-separated list of methods
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    method: Vec<MethodArg>,
    #[arg(long, default_value_t = exact_mi::DEFAULT_GH_NODES)]
    gh_nodes: usize,
    #[arg(long, default_value_t = exact_mi::DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepCmd {
    #[arg(long, value_enum)]
    modulation: ModulationArg,
    /// Comma-separated list of cardinalities
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    /// Comma-separated list of methods
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    methods: Vec<MethodArg>,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    snr_db_from: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    snr_db_to: f64,
    #[arg(long, default_value_t = 0.25)]
    snr_db_step: f64,
    #[arg(long, default_value_t = exact_mi::DEFAULT_GH_NODES)]
    gh_nodes: usize,
    #[arg(long, default_value_t = exact_mi::DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AccuracyCmd {
    #[arg(long, value_enum)]
    modulation: ModulationArg,
    /// Constellation cardinality M
    #[arg(long)]
    m: usize,
    /// Which approximation to compare against the exact rate
    #[arg(long, value_enum, default_value_t = ApproxArg::Sphere)]
    approx: ApproxArg,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    snr_db_from: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    snr_db_to: f64,
    #[arg(long, default_value_t = 0.25)]
    snr_db_step: f64,
    #[arg(long, default_value_t = exact_mi::DEFAULT_GH_NODES)]
    gh_nodes: usize,
}

#[derive(Args)]
struct MminCmd {
    #[arg(long, value_enum)]
    modulation: ModulationArg,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: f64,
}

#[derive(Args)]
struct AllocateCmd {
    /// Comma-separated per-stream channel gains (linear SNR per unit power)
    #[arg(long, value_delimiter = ',', required = true)]
    gains: Vec<f64>,
    /// Comma-separated per-stream cardinalities (PAM semantics)
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    /// Total power budget
    #[arg(long)]
    budget: f64,
    /// Relative power-balance tolerance
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

/// Entry point used by the binary.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) => 3,
        Error::Convergence(_) => 4,
        _ => 2,
    }
}

fn execute(cli: Cli) -> Result<()> {
    let output = match cli.command {
        Command::Rate(cmd) => cmd_rate(&cmd, cli.format)?,
        Command::Sweep(cmd) => cmd_sweep(&cmd, cli.format)?,
        Command::Accuracy(cmd) => cmd_accuracy(&cmd, cli.format)?,
        Command::Mmin(cmd) => cmd_mmin(&cmd, cli.format)?,
        Command::Allocate(cmd) => cmd_allocate(&cmd, cli.format)?,
    };
    match cli.out {
        Some(path) => std::fs::write(&path, output)
            .map_err(|e| Error::spec(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    Ok(())
}

/// 16 significant digits, locale-independent.
fn fmt_f(x: f64) -> String {
    format!("{x:.15e}")
}

/// Inclusive dB grid from..to in the given step.
fn db_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !from.is_finite() || !to.is_finite() || from > to {
        return Err(Error::spec(format!(
            "invalid SNR range: {from} dB .. {to} dB"
        )));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::spec(format!("SNR step must be positive, got {step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    if n >= MAX_GRID_POINTS {
        return Err(Error::spec(format!(
            "SNR grid would contain {n} points; refusing more than {MAX_GRID_POINTS}"
        )));
    }
    Ok((0..=n).map(|i| from + i as f64 * step).collect())
}

struct RateRow {
    snr_db: f64,
    snr_linear: f64,
    modulation: ModulationKind,
    m: usize,
    method: RateMethod,
    rate: f64,
    std_error: Option<f64>,
}

fn eval_rate(
    modulation: ModulationKind,
    m: usize,
    snr: Snr,
    method: MethodArg,
    gh_nodes: usize,
    mc_samples: usize,
    seed: u64,
) -> Result<RateResult> {
    match (modulation, method) {
        (ModulationKind::Pam, MethodArg::ExactGh) => exact_mi::mi_pam_quadrature(
            &Constellation::pam(m)?,
            snr,
            &QuadratureSpec::new(gh_nodes)?,
        ),
        (ModulationKind::Qam, MethodArg::ExactGh) => {
            exact_mi::mi_qam(&Constellation::qam(m)?, snr, &QuadratureSpec::new(gh_nodes)?)
        }
        (ModulationKind::Pam, MethodArg::ExactMc) => exact_mi::mi_pam_montecarlo(
            &Constellation::pam(m)?,
            snr,
            &McSpec::new(mc_samples, seed)?,
        ),
        (ModulationKind::Qam, MethodArg::ExactMc) => exact_mi::mi_qam_montecarlo(
            &Constellation::qam(m)?,
            snr,
            &McSpec::new(mc_samples, seed)?,
        ),
        (ModulationKind::Pam, MethodArg::Approx) => closed_form::approx_pam(m, snr),
        (ModulationKind::Qam, MethodArg::Approx) => closed_form::approx_qam(m, snr),
        (ModulationKind::Pam, MethodArg::Asymptotic) if m == 2 => {
            Ok(closed_form::approx_asymptotic_bpsk(snr))
        }
        (ModulationKind::Qam, MethodArg::Asymptotic) if m == 4 => {
            Ok(closed_form::approx_asymptotic_qpsk(snr))
        }
        (_, MethodArg::Asymptotic) => Err(Error::spec(format!(
            "the asymptotic form covers 2-PAM and 4-QAM only, got {m}-{}",
            modulation.name().to_uppercase()
        ))),
        (_, MethodArg::Capacity) => Ok(closed_form::capacity_awgn(snr)),
        (kind, MethodArg::Bound) => {
            // validate the cardinality for the modulation before bounding
            match kind {
                ModulationKind::Pam => Constellation::pam(m)?,
                ModulationKind::Qam => Constellation::qam(m)?,
            };
            closed_form::rate_upper_bound(m, kind.dimension(), snr)
        }
    }
}

fn sorted_methods(methods: &[MethodArg]) -> Vec<MethodArg> {
    let mut out: Vec<MethodArg> = Vec::new();
    for &m in methods {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out.sort_by_key(|m| m.method().name());
    out
}

fn rate_rows_to_csv(rows: &[RateRow], with_std_error: bool) -> String {
    let mut out = String::from("snr_db,snr_linear,modulation,m,method,rate_bits_per_sym_per_dim");
    if with_std_error {
        out.push_str(",std_error");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            fmt_f(r.snr_db),
            fmt_f(r.snr_linear),
            r.modulation.name(),
            r.m,
            r.method.name(),
            fmt_f(r.rate)
        );
        if with_std_error {
            out.push(',');
            if let Some(se) = r.std_error {
                out.push_str(&fmt_f(se));
            }
        }
        out.push('\n');
    }
    out
}

fn rate_rows_to_json(rows: &[RateRow]) -> String {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let mut obj = serde_json::json!({
                "snr_db": r.snr_db,
                "snr_linear": r.snr_linear,
                "modulation": r.modulation.name(),
                "m": r.m,
                "method": r.method.name(),
                "rate_bits_per_sym_per_dim": r.rate,
            });
            if let Some(se) = r.std_error {
                obj["std_error"] = se.into();
            }
            obj
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&values).expect("serializable rows");
    s.push('\n');
    s
}

fn emit_rate_rows(rows: &[RateRow], with_std_error: bool, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => rate_rows_to_csv(rows, with_std_error),
        OutputFormat::Json => rate_rows_to_json(rows),
    }
}

fn cmd_rate(cmd: &RateCmd, format: OutputFormat) -> Result<String> {
    let snr = Snr::from_db(cmd.snr_db)?;
    let kind = cmd.modulation.kind();
    let methods = sorted_methods(&cmd.method);
    let mut rows = Vec::new();
    for method in &methods {
        let result = eval_rate(
            kind,
            cmd.m,
            snr,
            *method,
            cmd.gh_nodes,
            cmd.mc_samples,
            cmd.seed,
        )?;
        rows.push(RateRow {
            snr_db: cmd.snr_db,
            snr_linear: snr.linear(),
            modulation: kind,
            m: cmd.m,
            method: result.method(),
            rate: result.per_dimension(),
            std_error: result.std_error(),
        });
    }
    let with_se = methods.contains(&MethodArg::ExactMc);
    Ok(emit_rate_rows(&rows, with_se, format))
}

fn cmd_sweep(cmd: &SweepCmd, format: OutputFormat) -> Result<String> {
    let grid = db_grid(cmd.snr_db_from, cmd.snr_db_to, cmd.snr_db_step)?;
    let mut ms = cmd.m.clone();
    ms.sort_unstable();
    ms.dedup();
    let methods = sorted_methods(&cmd.methods);

    let mut rows = Vec::new();
    for &m in &ms {
        for method in &methods {
            for &db in &grid {
                let snr = Snr::from_db(db)?;
                let result = eval_rate(
                    cmd.modulation.kind(),
                    m,
                    snr,
                    *method,
                    cmd.gh_nodes,
                    cmd.mc_samples,
                    cmd.seed,
                )?;
                rows.push(RateRow {
                    snr_db: db,
                    snr_linear: snr.linear(),
                    modulation: cmd.modulation.kind(),
                    m,
                    method: result.method(),
                    rate: result.per_dimension(),
                    std_error: result.std_error(),
                });
            }
        }
    }
    let with_se = methods.contains(&MethodArg::ExactMc);
    Ok(emit_rate_rows(&rows, with_se, format))
}

struct AccuracyReport {
    modulation: ModulationKind,
    m: usize,
    approx: ApproxArg,
    snr_db_from: f64,
    snr_db_to: f64,
    snr_db_step: f64,
    gh_nodes: usize,
    max_abs_error: f64,
    argmax_abs_snr_db: f64,
    max_rel_entropy_error: f64,
    argmax_rel_entropy_snr_db: f64,
    max_rel_exact_error: Option<f64>,
    argmax_rel_exact_snr_db: Option<f64>,
}

fn cmd_accuracy(cmd: &AccuracyCmd, format: OutputFormat) -> Result<String> {
    let kind = cmd.modulation.kind();
    if cmd.approx == ApproxArg::Asymptotic {
        let ok = matches!(
            (kind, cmd.m),
            (ModulationKind::Pam, 2) | (ModulationKind::Qam, 4)
        );
        if !ok {
            return Err(Error::spec(format!(
                "the asymptotic form covers 2-PAM and 4-QAM only, got {}-{}",
                cmd.m,
                kind.name().to_uppercase()
            )));
        }
    }
    let constellation = match kind {
        ModulationKind::Pam => Constellation::pam(cmd.m)?,
        ModulationKind::Qam => Constellation::qam(cmd.m)?,
    };
    let quad = QuadratureSpec::new(cmd.gh_nodes)?;
    let grid = db_grid(cmd.snr_db_from, cmd.snr_db_to, cmd.snr_db_step)?;
    let entropy = constellation.entropy();

    let mut report = AccuracyReport {
        modulation: kind,
        m: cmd.m,
        approx: cmd.approx,
        snr_db_from: cmd.snr_db_from,
        snr_db_to: cmd.snr_db_to,
        snr_db_step: cmd.snr_db_step,
        gh_nodes: cmd.gh_nodes,
        max_abs_error: 0.0,
        argmax_abs_snr_db: grid[0],
        max_rel_entropy_error: 0.0,
        argmax_rel_entropy_snr_db: grid[0],
        max_rel_exact_error: None,
        argmax_rel_exact_snr_db: None,
    };
    for &db in &grid {
        let snr = Snr::from_db(db)?;
        let exact = match kind {
            ModulationKind::Pam => exact_mi::mi_pam_quadrature(&constellation, snr, &quad)?,
            ModulationKind::Qam => exact_mi::mi_qam(&constellation, snr, &quad)?,
        }
        .per_dimension();
        let approx = match (cmd.approx, kind) {
            (ApproxArg::Sphere, ModulationKind::Pam) => closed_form::approx_pam(cmd.m, snr)?,
            (ApproxArg::Sphere, ModulationKind::Qam) => closed_form::approx_qam(cmd.m, snr)?,
            (ApproxArg::Asymptotic, ModulationKind::Pam) => {
                closed_form::approx_asymptotic_bpsk(snr)
            }
            (ApproxArg::Asymptotic, ModulationKind::Qam) => {
                closed_form::approx_asymptotic_qpsk(snr)
            }
        }
        .per_dimension();

        let abs_err = (approx - exact).abs();
        if abs_err > report.max_abs_error {
            report.max_abs_error = abs_err;
            report.argmax_abs_snr_db = db;
        }
        let rel_entropy = abs_err / entropy;
        if rel_entropy > report.max_rel_entropy_error {
            report.max_rel_entropy_error = rel_entropy;
            report.argmax_rel_entropy_snr_db = db;
        }
        // skip the relative-to-exact ratio where the exact rate is
        // numerically zero
        if exact > 1e-12 {
            let rel_exact = abs_err / exact;
            if rel_exact > report.max_rel_exact_error.unwrap_or(0.0) {
                report.max_rel_exact_error = Some(rel_exact);
                report.argmax_rel_exact_snr_db = Some(db);
            }
        }
    }

    Ok(match format {
        OutputFormat::Csv => {
            let mut out = String::from(
                "modulation,m,approx,snr_db_from,snr_db_to,snr_db_step,gh_nodes,\
                 max_abs_error,argmax_abs_snr_db,max_rel_entropy_error,\
                 argmax_rel_entropy_snr_db,max_rel_exact_error,argmax_rel_exact_snr_db\n",
            );
            let approx_name = match report.approx {
                ApproxArg::Sphere => "sphere",
                ApproxArg::Asymptotic => "asymptotic",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                report.modulation.name(),
                report.m,
                approx_name,
                fmt_f(report.snr_db_from),
                fmt_f(report.snr_db_to),
                fmt_f(report.snr_db_step),
                report.gh_nodes,
                fmt_f(report.max_abs_error),
                fmt_f(report.argmax_abs_snr_db),
                fmt_f(report.max_rel_entropy_error),
                fmt_f(report.argmax_rel_entropy_snr_db),
                report.max_rel_exact_error.map(fmt_f).unwrap_or_default(),
                report
                    .argmax_rel_exact_snr_db
                    .map(fmt_f)
                    .unwrap_or_default(),
            );
            out
        }
        OutputFormat::Json => {
            let v = serde_json::json!({
                "modulation": report.modulation.name(),
                "m": report.m,
                "approx": match report.approx {
                    ApproxArg::Sphere => "sphere",
                    ApproxArg::Asymptotic => "asymptotic",
                },
                "snr_db_from": report.snr_db_from,
                "snr_db_to": report.snr_db_to,
                "snr_db_step": report.snr_db_step,
                "gh_nodes": report.gh_nodes,
                "max_abs_error": report.max_abs_error,
                "argmax_abs_snr_db": report.argmax_abs_snr_db,
                "max_rel_entropy_error": report.max_rel_entropy_error,
                "argmax_rel_entropy_snr_db": report.argmax_rel_entropy_snr_db,
                "max_rel_exact_error": report.max_rel_exact_error,
                "argmax_rel_exact_snr_db": report.argmax_rel_exact_snr_db,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable report");
            s.push('\n');
            s
        }
    })
}

fn cmd_mmin(cmd: &MminCmd, format: OutputFormat) -> Result<String> {
    let snr = Snr::from_db(cmd.snr_db)?;
    let kind = cmd.modulation.kind();
    let result = closed_form::mmin(snr, kind)?;
    Ok(match format {
        OutputFormat::Csv => {
            let mut out =
                String::from("modulation,snr_db,snr_linear,exact_value,rounded_pow2,upper_bound\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                kind.name(),
                fmt_f(cmd.snr_db),
                fmt_f(snr.linear()),
                fmt_f(result.exact_value),
                result.rounded_pow2,
                result.upper_bound.map(fmt_f).unwrap_or_default(),
            );
            out
        }
        OutputFormat::Json => {
            let v = serde_json::json!({
                "modulation": kind.name(),
                "snr_db": cmd.snr_db,
                "snr_linear": snr.linear(),
                "exact_value": result.exact_value,
                "rounded_pow2": result.rounded_pow2,
                "upper_bound": result.upper_bound,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable mmin");
            s.push('\n');
            s
        }
    })
}

fn cmd_allocate(cmd: &AllocateCmd, format: OutputFormat) -> Result<String> {
    let problem = AllocationProblem::new(cmd.gains.clone(), cmd.m.clone(), cmd.budget)?
        .with_tolerance(cmd.tolerance)?;
    let solution = allocate(&problem)?;
    Ok(match format {
        OutputFormat::Csv => {
            let mut out = String::from("stream,gain,m,power,rate\n");
            for i in 0..problem.num_streams() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    i,
                    fmt_f(problem.gains()[i]),
                    problem.cardinalities()[i],
                    fmt_f(solution.powers[i]),
                    fmt_f(solution.rates[i]),
                );
            }
            out.push_str("objective,lambda,kkt_residual\n");
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_f(solution.objective),
                fmt_f(solution.dual),
                fmt_f(solution.kkt_residual),
            );
            out
        }
        OutputFormat::Json => {
            let streams: Vec<serde_json::Value> = (0..problem.num_streams())
                .map(|i| {
                    serde_json::json!({
                        "stream": i,
                        "gain": problem.gains()[i],
                        "m": problem.cardinalities()[i],
                        "power": solution.powers[i],
                        "rate": solution.rates[i],
                    })
                })
                .collect();
            let v = serde_json::json!({
                "streams": streams,
                "objective": solution.objective,
                "lambda": solution.dual,
                "kkt_residual": solution.kkt_residual,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable allocation");
            s.push('\n');
            s
        }
    })
}
