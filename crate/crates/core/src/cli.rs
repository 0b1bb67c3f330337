// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. `run` returns the process exit code:
//! 0 when every check passes, 1 when a check fails, 2 for configuration
//! or usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{CouplingSpec, RunConfig};
use crate::device::{feasibility_report, time_budget, BudgetParams, TimeChoice};
use crate::error::{Error, Result};
use crate::hilbert::{BasisLabel, HilbertSpace, SystemState};
use crate::protocol::{extract_gate, run_schedule, step_count_comparison, Schedule, StepKind, Trajectory};
use crate::squid_spectrum::{potential_profile, profile_csv, solve_spectrum};
use crate::units::{parse_quantity, AngularRate, Dimension, Inductance, Quantity};
use crate::verify::{self, describe_state, reference_trace_report, TraceReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "squid-cphase", version, about = "SQUID-resonator multi-qubit controlled phase gate simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the gate schedule on one basis input, or on all of them.
    Simulate(SimulateArgs),
    /// Truth table, leakage and (for n = 3) the reference trace.
    Verify(VerifyArgs),
    /// Lowest SQUID levels and flux matrix elements.
    Spectrum(SpectrumArgs),
    /// Coupling, timing and crosstalk estimates with a verdict.
    Feasibility(FeasibilityArgs),
    /// Gate time against the decoherence and photon lifetimes.
    Budget(BudgetArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration; the bundled reference set when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for output files; JSON goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of SQUIDs.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Photon-number cutoff.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Load this schedule JSON instead of building one from the config.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Scale factor on the target's full exchange.
    #[arg(long)]
    pub target_scale: Option<f64>,
    /// Same coupling for every SQUID, e.g. `7.5e9rad/s`.
    #[arg(long)]
    pub g: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Input qubit bits such as `111`, or `all`.
    #[arg(long, default_value = "all")]
    pub input: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Potential shape parameter.
    #[arg(long)]
    pub beta_l: Option<f64>,
    /// Interior grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Points in the potential CSV.
    #[arg(long, default_value_t = 401)]
    pub profile_points: usize,
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Resonator quality factor.
    #[arg(long)]
    pub q: Option<f64>,
    /// Neighbouring-SQUID mutual inductance, e.g. `0.1aH` (henries if no unit).
    #[arg(long)]
    pub mutual_m: Option<String>,
    /// Same coupling for every SQUID instead of the computed ones.
    #[arg(long)]
    pub g: Option<String>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[command(flatten)]
    pub common: Common,
    /// Same coupling for every SQUID instead of the computed ones.
    #[arg(long)]
    pub g: Option<String>,
    /// Resonator quality factor.
    #[arg(long)]
    pub q: Option<f64>,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Exit code for an error that stopped a command.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) | Error::Io(_) | Error::Json(_) => EXIT_CONFIG,
        _ => EXIT_CHECK_FAILED,
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Simulate(a) => simulate(a, stdout, stderr),
        Command::Verify(a) => verify_cmd(a, stdout, stderr),
        Command::Spectrum(a) => spectrum(a, stdout, stderr),
        Command::Feasibility(a) => feasibility(a, stdout, stderr),
        Command::Budget(a) => budget(a, stdout, stderr),
    }
}

fn load_config(common: &Common, stderr: &mut dyn Write) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::table1(),
    };
    if let Some(n) = common.n {
        if let Some(note) = config.set_n(n)? {
            let _ = writeln!(stderr, "note: {note}");
        }
    }
    Ok(config)
}

/// A quantity flag; a bare number is read in SI units.
fn quantity_flag<D: Dimension>(text: &str) -> Result<f64> {
    match text.trim().parse::<f64>() {
        Ok(v) => Ok(v),
        Err(_) => parse_quantity::<D>(text),
    }
}

fn apply_schedule_flags(config: &mut RunConfig, args: &ScheduleArgs) -> Result<()> {
    if let Some(n_max) = args.n_max {
        config.n_max = n_max;
    }
    if let Some(scale) = args.target_scale {
        config.target_scale = scale;
    }
    if let Some(g) = &args.g {
        config.couplings = CouplingSpec::List(vec![Quantity::si(quantity_flag::<AngularRate>(g)?); config.n]);
    }
    config.validate()
}

fn resolve_schedule(config: &RunConfig, args: &ScheduleArgs) -> Result<Schedule> {
    match &args.schedule {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let schedule: Schedule = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("schedule {}: {e}", path.display())))?;
            Ok(schedule)
        }
        None => config.schedule(),
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn state_json(state: &SystemState) -> Value {
    let support: Vec<Value> = state
        .support(1e-12)
        .into_iter()
        .map(|(label, z)| json!({ "label": label.compact(), "amplitude": pair(z) }))
        .collect();
    json!({
        "description": describe_state(state),
        "norm": state.norm(),
        "support": support,
        "amplitudes": state.amplitudes().iter().map(|z| pair(*z)).collect::<Vec<_>>(),
    })
}

/// Trajectory as JSON: the input and the state after every step.
pub fn trajectory_json(trajectory: &Trajectory) -> Value {
    let steps: Vec<Value> = trajectory
        .after_step
        .iter()
        .zip(&trajectory.step_labels)
        .enumerate()
        .map(|(k, (state, label))| json!({ "step": k + 1, "label": label, "state": state_json(state) }))
        .collect();
    json!({
        "initial": state_json(&trajectory.initial),
        "steps": steps,
        "final": state_json(trajectory.final_state()),
    })
}

fn matrix_json(m: &ndarray::Array2<Complex64>) -> Value {
    Value::Array(
        m.rows()
            .into_iter()
            .map(|row| json!(row.iter().map(|z| pair(*z)).collect::<Vec<_>>()))
            .collect(),
    )
}

fn conventions_json(config: &RunConfig) -> Value {
    json!({
        "energy_quantum": config.conventions.energy_quantum,
        "step_counting": "one schedule entry per step; the target's full exchange counts once",
        "hadamard": "ideal Hadamard matrix on the target's qubit levels",
        "basis_order": "SQUID 1 most significant, photon number least significant",
    })
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Writes `name` into the output directory, or the text to stdout when
/// `primary` and no directory is set.
fn emit(out: Option<&Path>, name: &str, text: &str, primary: bool, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), text)?;
        }
        None if primary => stdout.write_all(text.as_bytes())?,
        None => {}
    }
    Ok(())
}

fn out_dir(common: &Common, config: &RunConfig) -> Option<PathBuf> {
    common
        .out
        .clone()
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
}

fn simulate(args: SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut config = load_config(&args.common, stderr)?;
    apply_schedule_flags(&mut config, &args.schedule)?;
    let schedule = resolve_schedule(&config, &args.schedule)?;
    let out = out_dir(&args.common, &config);
    emit(out.as_deref(), "schedule.json", &to_pretty(&schedule)?, false, stdout)?;

    if args.input == "all" {
        let report = extract_gate(&schedule, config.n_max)?;
        let check = verify::check_report(&report)?;
        let doc = json!({
            "n": report.n,
            "n_max": config.n_max,
            "target": report.target,
            "gate": matrix_json(&report.gate),
            "fidelity": report.fidelity,
            "truth_table": check,
            "vacuum_return": report.vacuum_return,
            "level_two_residual": report.level_two_residual,
            "multi_photon_peak": report.multi_photon_peak,
            "norm_drift": report.norm_drift,
            "step_count": report.step_count,
            "total_time_s": report.total_time,
            "schedule": schedule,
            "conventions": conventions_json(&config),
        });
        emit(out.as_deref(), "gate_report.json", &to_pretty(&doc)?, true, stdout)?;
        let _ = writeln!(
            stderr,
            "gate fidelity {:.12}, truth table max error {:.3e}",
            report.fidelity, check.max_error
        );
        return Ok(EXIT_PASS);
    }

    let levels: BasisLabel = args
        .input
        .parse()
        .map_err(|e| Error::Config(format!("--input {:?}: {e}", args.input)))?;
    if levels.levels.len() != schedule.n || levels.to_bits().is_none() {
        return Err(Error::Config(format!(
            "--input {:?} must be {} qubit bits or `all`",
            args.input, schedule.n
        )));
    }
    let space = HilbertSpace::new(schedule.n, config.n_max)?;
    let psi = SystemState::basis_state(space, &levels)?;
    let trajectory = run_schedule(&psi, &schedule)?;
    let mut doc = trajectory_json(&trajectory);
    doc["input"] = json!(levels.compact());
    doc["n"] = json!(schedule.n);
    doc["n_max"] = json!(config.n_max);
    doc["schedule"] = serde_json::to_value(&schedule)?;
    doc["conventions"] = conventions_json(&config);
    let name = format!("trajectory_{}.json", args.input);
    emit(out.as_deref(), &name, &to_pretty(&doc)?, true, stdout)?;
    let _ = writeln!(stderr, "final state {}", describe_state(trajectory.final_state()));
    Ok(EXIT_PASS)
}

fn trace_json(report: &TraceReport) -> Value {
    let cells: Vec<Value> = report
        .mismatches()
        .map(|c| {
            json!({
                "input": c.input.compact(),
                "step": c.step,
                "simulated": c.simulated,
                "abs_delta": c.delta,
                "oracle_delta": c.oracle_delta,
                "phase_only": c.is_phase_only_mismatch(report.tolerance),
            })
        })
        .collect();
    json!({
        "cells": report.cells.len(),
        "matched": report.matched(),
        "tolerance": report.tolerance,
        "pass": report.pass(),
        "mismatches": cells,
        "unexplained": report.unexplained().count(),
    })
}

fn verify_cmd(args: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut config = load_config(&args.common, stderr)?;
    apply_schedule_flags(&mut config, &args.schedule)?;
    let schedule = resolve_schedule(&config, &args.schedule)?;
    let out = out_dir(&args.common, &config);
    let (report, check) = verify::verify_schedule(&schedule, config.n_max)?;
    let leak_ok = report.vacuum_return < 1e-12 && report.level_two_residual < 1e-12;

    let canonical_trace = schedule.n == 3
        && schedule.steps.len() == 7
        && matches!(schedule.steps[0].kind, StepKind::MicrowavePi { .. })
        && schedule.steps[3].kind == StepKind::JcFull;
    let trace = if canonical_trace {
        Some(reference_trace_report(&schedule, config.n_max)?)
    } else {
        None
    };
    let trace_ok = trace.as_ref().is_none_or(|t| t.pass());
    let pass = check.pass && leak_ok && trace_ok;

    let doc = json!({
        "n": schedule.n,
        "target": schedule.gate,
        "pass": pass,
        "truth_table": check,
        "fidelity": report.fidelity,
        "vacuum_return": report.vacuum_return,
        "level_two_residual": report.level_two_residual,
        "norm_drift": report.norm_drift,
        "trace": trace.as_ref().map(trace_json),
        "conventions": conventions_json(&config),
    });
    emit(out.as_deref(), "verify_report.json", &to_pretty(&doc)?, true, stdout)?;
    if let Some(t) = &trace {
        emit(out.as_deref(), "trace.csv", &t.to_csv(), false, stdout)?;
        let _ = write!(stderr, "{t}");
    }
    let _ = writeln!(
        stderr,
        "{}: fidelity {:.12}, truth table max error {:.3e}",
        if pass { "PASS" } else { "FAIL" },
        report.fidelity,
        check.max_error
    );
    Ok(if pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn spectrum(args: SpectrumArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut config = load_config(&args.common, stderr)?;
    if let Some(b) = args.beta_l {
        config.device.squid.beta_l = Some(b);
    }
    if let Some(points) = args.grid {
        config.spectrum.grid_points = points;
    }
    let params = config.squid_params()?;
    let result = solve_spectrum(&params, &config.spectrum)?;
    let out = out_dir(&args.common, &config);

    let mut doc = serde_json::to_value(&result)?;
    let mut ok = true;
    if params.beta_l == 0.0 {
        let expected = params.lc_frequency();
        let worst = [result.nu_01, result.nu_12]
            .iter()
            .map(|nu| ((nu - expected) / expected).abs())
            .fold(0.0, f64::max);
        ok = worst < 1e-3;
        doc["harmonic_check"] = json!({
            "expected_hz": expected,
            "nu_01_hz": result.nu_01,
            "nu_12_hz": result.nu_12,
            "max_relative_error": worst,
            "pass": ok,
        });
    }
    emit(out.as_deref(), "spectrum.json", &to_pretty(&doc)?, true, stdout)?;
    let half = config.spectrum.extent;
    let profile = potential_profile(
        &params,
        params.flux_bias - half,
        params.flux_bias + half,
        args.profile_points,
    )?;
    emit(out.as_deref(), "potential.csv", &profile_csv(&profile), false, stdout)?;

    let _ = writeln!(
        stderr,
        "nu_02 = {:.4} GHz, nu_12 = {:.4} GHz, |phi_01| = {:.3e}, |phi_02| = {:.3e}, |phi_12| = {:.3e}",
        result.nu_02 / 1e9,
        result.nu_12 / 1e9,
        result.phi_01.abs(),
        result.phi_02.abs(),
        result.phi_12.abs()
    );
    if let Some(r) = &result.refinement {
        let _ = writeln!(
            stderr,
            "grid {} -> {} points: max relative shift {:.3e}",
            result.grid.points, r.fine_points, r.max_relative_shift
        );
    }
    Ok(if ok { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn feasibility(args: FeasibilityArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut config = load_config(&args.common, stderr)?;
    if let Some(q) = args.q {
        config.device.resonator.quality_factor = Some(q);
    }
    if let Some(m) = &args.mutual_m {
        config.device.crosstalk.mutual_inductance = Some(Quantity::si(quantity_flag::<Inductance>(m)?));
    }
    if let Some(g) = &args.g {
        config.couplings = CouplingSpec::List(vec![Quantity::si(quantity_flag::<AngularRate>(g)?); config.n]);
    }
    let report = feasibility_report(&config.device_setup()?)?;
    let out = out_dir(&args.common, &config);
    emit(out.as_deref(), "feasibility.json", &to_pretty(&report)?, true, stdout)?;
    let _ = writeln!(
        stderr,
        "{}: g = {:.3e} rad/s, tau = {:.3} ns, kappa^-1 = {:.2} ns, zeta = {:.2e}",
        if report.verdict.pass { "PASS" } else { "FAIL" },
        report.g_used_rad_s.iter().copied().fold(f64::INFINITY, f64::min),
        report.tau.total.value * 1e9,
        report.kappa_inv.value * 1e9,
        report.zeta.value
    );
    for failure in &report.verdict.failures {
        let _ = writeln!(stderr, "  {failure}");
    }
    Ok(if report.verdict.pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn budget(args: BudgetArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut config = load_config(&args.common, stderr)?;
    if let Some(g) = &args.g {
        config.couplings = CouplingSpec::List(vec![Quantity::si(quantity_flag::<AngularRate>(g)?); config.n]);
    }
    if let Some(q) = args.q {
        config.device.resonator.quality_factor = Some(q);
    }
    let setup = config.device_setup()?;
    let couplings = config.couplings()?;
    let slowest = couplings
        .iter()
        .map(|g| std::f64::consts::PI / (2.0 * g))
        .fold(0.0, f64::max);
    let resolve = |c: TimeChoice| match c {
        TimeChoice::Seconds(s) => s,
        TimeChoice::MatchTauR => slowest,
    };
    let params = BudgetParams {
        gamma2_inv: setup
            .squids
            .iter()
            .map(|s| s.gamma2_inv)
            .fold(f64::INFINITY, f64::min),
        kappa_inv: crate::device::photon_lifetime(&setup.resonator),
        tau_a: resolve(setup.tau_a),
        tau_uw: resolve(setup.tau_uw),
    };
    let result = time_budget(config.n, &couplings, &params, setup.thresholds.margin)?;
    let steps = step_count_comparison(config.n.max(3))?;
    let doc = json!({
        "n": config.n,
        "couplings_rad_s": couplings,
        "inputs": params,
        "budget": result,
        "step_counts": steps,
        "conventions": conventions_json(&config),
    });
    let out = out_dir(&args.common, &config);
    emit(out.as_deref(), "budget.json", &to_pretty(&doc)?, true, stdout)?;
    let _ = writeln!(
        stderr,
        "{}: tau = {:.3} ns, tau/gamma2^-1 = {:.2e}, tau/kappa^-1 = {:.2e}",
        if result.pass { "PASS" } else { "FAIL" },
        result.tau_total * 1e9,
        result.gamma2_margin,
        result.kappa_margin
    );
    Ok(if result.pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}
