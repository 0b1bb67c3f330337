// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pulse schedule for the n-qubit controlled phase gate and its execution.
//!
//! The schedule for `n` SQUIDs (SQUID `n` is the target) is
//!
//! ```text
//! mw pi(phi = -pi/2) on 1
//! exchange pi/2 on 1, 2, ..., n-1
//! exchange pi   on n
//! exchange pi/2 on n-1, ..., 1
//! mw pi(phi = +pi/2) on 1
//! ```
//!
//! i.e. `2n + 1` steps. A photon is emitted by SQUID 1 only when it starts
//! in `|1>`, and survives to the target only when every other control is in
//! `|1>` too; the full exchange cycle on the target then flips the sign of
//! `|0>_n|1>_c`, which after the mirrored half gives `-1` exactly on
//! `|11...1>`. Retuning gaps between steps carry no dynamics and only add
//! wall-clock time.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{apply_qubit_unitary, drive_evolve, jc_evolve, DrivePulse, JcInteraction};
use crate::error::{Error, Result};
use crate::hilbert::{BasisLabel, HilbertSpace, SquidLevel, SystemState};
use crate::verify;

/// What a schedule step does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepKind {
    /// Microwave pi pulse on `|1> <-> |2>` with the given drive phase.
    MicrowavePi { phase: f64 },
    /// Resonant exchange for `pi / (2 g)`.
    JcHalf,
    /// Resonant exchange for `pi / g` (two half pulses back to back).
    JcFull,
    /// Ideal Hadamard on the qubit levels, standing in for the pi/2 pulse on
    /// `|0> <-> |1>` that brackets the controlled phase gate in a CNOT.
    Hadamard,
}

impl StepKind {
    fn tag(&self) -> &'static str {
        match self {
            StepKind::MicrowavePi { .. } => "microwave_pi",
            StepKind::JcHalf => "jc_half",
            StepKind::JcFull => "jc_full",
            StepKind::Hadamard => "hadamard",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StepRecord", try_from = "StepRecord")]
pub struct ScheduleStep {
    pub kind: StepKind,
    /// 1-based SQUID index.
    pub squid: usize,
    /// Seconds.
    pub duration: f64,
    pub label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRecord {
    kind: String,
    squid: usize,
    duration_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase_rad: Option<f64>,
    #[serde(default)]
    label: String,
}

impl From<ScheduleStep> for StepRecord {
    fn from(step: ScheduleStep) -> Self {
        let phase_rad = match step.kind {
            StepKind::MicrowavePi { phase } => Some(phase),
            _ => None,
        };
        StepRecord {
            kind: step.kind.tag().to_string(),
            squid: step.squid,
            duration_s: step.duration,
            phase_rad,
            label: step.label,
        }
    }
}

impl TryFrom<StepRecord> for ScheduleStep {
    type Error = String;

    fn try_from(r: StepRecord) -> std::result::Result<Self, String> {
        let kind = match r.kind.as_str() {
            "microwave_pi" => StepKind::MicrowavePi {
                phase: r
                    .phase_rad
                    .ok_or_else(|| "microwave_pi step needs phase_rad".to_string())?,
            },
            "jc_half" => StepKind::JcHalf,
            "jc_full" => StepKind::JcFull,
            "hadamard" => StepKind::Hadamard,
            other => return Err(format!("unknown step kind {other:?}")),
        };
        Ok(ScheduleStep {
            kind,
            squid: r.squid,
            duration: r.duration_s,
            label: r.label,
        })
    }
}

/// Which ideal gate a schedule is meant to implement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetGate {
    ControlledPhase,
    ControlledNot,
}

impl TargetGate {
    pub fn matrix(self, n: usize) -> Array2<Complex64> {
        match self {
            TargetGate::ControlledPhase => verify::controlled_phase_matrix(n),
            TargetGate::ControlledNot => verify::controlled_not_matrix(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ScheduleRecord", try_from = "ScheduleRecord")]
pub struct Schedule {
    pub n: usize,
    pub gate: TargetGate,
    pub steps: Vec<ScheduleStep>,
    /// `g_1 .. g_n` in rad/s.
    pub couplings: Vec<f64>,
    /// Microwave Rabi frequency on SQUID 1, rad/s.
    pub rabi: f64,
    /// Dead time before each step after the first, seconds.
    pub retune_time: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleRecord {
    n: usize,
    gate: TargetGate,
    steps: Vec<ScheduleStep>,
    couplings: Vec<f64>,
    rabi_rad_s: f64,
    retune_time_s: f64,
    #[serde(default)]
    total_time_s: Option<f64>,
}

impl From<Schedule> for ScheduleRecord {
    fn from(s: Schedule) -> Self {
        let total = s.total_time();
        ScheduleRecord {
            n: s.n,
            gate: s.gate,
            steps: s.steps,
            couplings: s.couplings,
            rabi_rad_s: s.rabi,
            retune_time_s: s.retune_time,
            total_time_s: Some(total),
        }
    }
}

impl TryFrom<ScheduleRecord> for Schedule {
    type Error = String;

    fn try_from(r: ScheduleRecord) -> std::result::Result<Self, String> {
        let schedule = Schedule {
            n: r.n,
            gate: r.gate,
            steps: r.steps,
            couplings: r.couplings,
            rabi: r.rabi_rad_s,
            retune_time: r.retune_time_s,
        };
        schedule.validate().map_err(|e| e.to_string())?;
        Ok(schedule)
    }
}

impl Schedule {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Pulse time plus one retuning gap between consecutive steps.
    pub fn total_time(&self) -> f64 {
        let pulses: f64 = self.steps.iter().map(|s| s.duration).sum();
        pulses + self.retune_time * self.steps.len().saturating_sub(1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.couplings.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "{} couplings for {} SQUIDs",
                self.couplings.len(),
                self.n
            )));
        }
        if self.retune_time < 0.0 || !self.retune_time.is_finite() {
            return Err(Error::InvalidParameter("retune time must be non-negative".into()));
        }
        for step in &self.steps {
            if step.squid == 0 || step.squid > self.n {
                return Err(Error::SquidIndex {
                    index: step.squid,
                    n: self.n,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, step) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "{:>2}. {:<34} SQUID {:>2}  {:.4} ns",
                k + 1,
                step.label,
                step.squid,
                step.duration * 1e9
            )?;
        }
        write!(f, "total {:.4} ns", self.total_time() * 1e9)
    }
}

fn check_inputs(n: usize, couplings: &[f64], rabi: f64, retune_time: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "a controlled phase gate needs at least 2 SQUIDs, got {n}"
        )));
    }
    if couplings.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} couplings for {n} SQUIDs",
            couplings.len()
        )));
    }
    if let Some(g) = couplings.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::InvalidParameter(format!("coupling {g} is not positive")));
    }
    if !(rabi > 0.0 && rabi.is_finite()) {
        return Err(Error::InvalidParameter(format!("Rabi frequency {rabi} is not positive")));
    }
    if !(retune_time >= 0.0 && retune_time.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "retune time {retune_time} is negative"
        )));
    }
    Ok(())
}

fn microwave(phase: f64, rabi: f64, label: &str) -> ScheduleStep {
    ScheduleStep {
        kind: StepKind::MicrowavePi { phase },
        squid: 1,
        duration: PI / rabi,
        label: label.to_string(),
    }
}

fn exchange_half(squid: usize, g: f64) -> ScheduleStep {
    ScheduleStep {
        kind: StepKind::JcHalf,
        squid,
        duration: FRAC_PI_2 / g,
        label: format!("exchange pi/2 on SQUID {squid}"),
    }
}

/// The `2n + 1` step controlled phase schedule.
pub fn build_cphase_schedule(
    n: usize,
    couplings: &[f64],
    rabi: f64,
    retune_time: f64,
) -> Result<Schedule> {
    check_inputs(n, couplings, rabi, retune_time)?;
    let mut steps = Vec::with_capacity(2 * n + 1);
    steps.push(microwave(-FRAC_PI_2, rabi, "mw pi, phi=-pi/2: |1>->|2> on SQUID 1"));
    steps.extend((1..n).map(|l| exchange_half(l, couplings[l - 1])));
    steps.push(ScheduleStep {
        kind: StepKind::JcFull,
        squid: n,
        duration: PI / couplings[n - 1],
        label: format!("exchange pi on SQUID {n} (target)"),
    });
    steps.extend((1..n).rev().map(|l| exchange_half(l, couplings[l - 1])));
    steps.push(microwave(FRAC_PI_2, rabi, "mw pi, phi=+pi/2: |2>->|1> on SQUID 1"));
    Ok(Schedule {
        n,
        gate: TargetGate::ControlledPhase,
        steps,
        couplings: couplings.to_vec(),
        rabi,
        retune_time,
    })
}

/// Controlled phase schedule bracketed by Hadamards on the target: `2n + 3`
/// steps implementing the n-qubit CNOT (Toffoli for `n = 3`).
///
/// `hadamard_rabi` only sets the bookkeeping duration `pi / (2 * rabi)` of
/// each Hadamard; the rotation itself is applied as the exact matrix.
pub fn build_cnot_schedule(
    n: usize,
    couplings: &[f64],
    rabi: f64,
    hadamard_rabi: f64,
    retune_time: f64,
) -> Result<Schedule> {
    if !(hadamard_rabi > 0.0 && hadamard_rabi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Hadamard Rabi frequency {hadamard_rabi} is not positive"
        )));
    }
    let mut schedule = build_cphase_schedule(n, couplings, rabi, retune_time)?;
    let hadamard = ScheduleStep {
        kind: StepKind::Hadamard,
        squid: n,
        duration: FRAC_PI_2 / hadamard_rabi,
        label: format!("Hadamard on SQUID {n} (target)"),
    };
    schedule.steps.insert(0, hadamard.clone());
    schedule.steps.push(hadamard);
    schedule.gate = TargetGate::ControlledNot;
    Ok(schedule)
}

fn hadamard_matrix() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Applies one step of `schedule` to `state`.
pub fn apply_step(state: &SystemState, schedule: &Schedule, step: &ScheduleStep) -> Result<SystemState> {
    match step.kind {
        StepKind::MicrowavePi { phase } => drive_evolve(
            state,
            &DrivePulse {
                squid: step.squid,
                rabi: schedule.rabi,
                phase,
                duration: step.duration,
            },
        ),
        StepKind::JcHalf | StepKind::JcFull => {
            let g = *schedule
                .couplings
                .get(step.squid.wrapping_sub(1))
                .ok_or(Error::SquidIndex {
                    index: step.squid,
                    n: schedule.n,
                })?;
            jc_evolve(
                state,
                &JcInteraction {
                    squid: step.squid,
                    g,
                    duration: step.duration,
                },
            )
        }
        StepKind::Hadamard => apply_qubit_unitary(state, step.squid, &hadamard_matrix()),
    }
}

/// Input state and the state after every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub initial: SystemState,
    pub after_step: Vec<SystemState>,
    pub step_labels: Vec<String>,
}

impl Trajectory {
    pub fn final_state(&self) -> &SystemState {
        self.after_step.last().unwrap_or(&self.initial)
    }

    /// The first `steps` steps only.
    pub fn prefix(&self, steps: usize) -> Trajectory {
        let k = steps.min(self.after_step.len());
        Trajectory {
            initial: self.initial.clone(),
            after_step: self.after_step[..k].to_vec(),
            step_labels: self.step_labels[..k].to_vec(),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = &SystemState> {
        std::iter::once(&self.initial).chain(&self.after_step)
    }
}

pub fn run_schedule(input: &SystemState, schedule: &Schedule) -> Result<Trajectory> {
    schedule.validate()?;
    if input.space().n_qubits != schedule.n {
        return Err(Error::DimensionMismatch(format!(
            "state has {} SQUIDs, schedule has {}",
            input.space().n_qubits,
            schedule.n
        )));
    }
    let mut after_step = Vec::with_capacity(schedule.steps.len());
    let mut current = input.clone();
    for (k, step) in schedule.steps.iter().enumerate() {
        current = apply_step(&current, schedule, step).map_err(|e| Error::AtStep {
            step: k + 1,
            label: step.label.clone(),
            source: Box::new(e),
        })?;
        after_step.push(current.clone());
    }
    Ok(Trajectory {
        initial: input.clone(),
        after_step,
        step_labels: schedule.steps.iter().map(|s| s.label.clone()).collect(),
    })
}

/// Effective gate on the computational subspace plus leakage diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub n: usize,
    pub target: TargetGate,
    /// `gate[[row, col]] = <row bits, vacuum| U |col bits, vacuum>`.
    pub gate: Array2<Complex64>,
    /// Phase-insensitive fidelity against the ideal target.
    pub fidelity: f64,
    /// Largest final population with one or more photons, over all inputs.
    pub vacuum_return: f64,
    /// Largest final population of level `|2>` on any SQUID, over all inputs.
    pub level_two_residual: f64,
    /// Largest population with two or more photons at any step.
    pub multi_photon_peak: f64,
    /// Largest deviation of a state norm from 1 at any step.
    pub norm_drift: f64,
    pub step_count: usize,
    /// Seconds.
    pub total_time: f64,
}

struct ColumnRun {
    column: Vec<Complex64>,
    vacuum_loss: f64,
    level_two: f64,
    multi_photon: f64,
    norm_drift: f64,
}

/// Runs every computational basis input through `schedule` with Fock cutoff
/// `n_max` and assembles the effective gate.
pub fn extract_gate(schedule: &Schedule, n_max: usize) -> Result<GateReport> {
    let space = HilbertSpace::new(schedule.n, n_max)?;
    let n = schedule.n;
    let size = 1usize << n;
    let computational: Vec<usize> = (0..size)
        .map(|bits| space.index_of(&BasisLabel::from_bits(bits, n)))
        .collect::<Result<_>>()?;

    let runs: Vec<ColumnRun> = (0..size)
        .into_par_iter()
        .map(|bits| -> Result<ColumnRun> {
            let input = SystemState::basis_state(space, &BasisLabel::from_bits(bits, n))?;
            let trajectory = run_schedule(&input, schedule)?;
            let out = trajectory.final_state();
            let level_two = (1..=n)
                .map(|squid| out.level_population(squid, SquidLevel::L2))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let multi_photon = trajectory
                .states()
                .map(|s| s.photon_population_at_least(2))
                .fold(0.0, f64::max);
            let norm_drift = trajectory
                .states()
                .map(|s| (s.norm() - 1.0).abs())
                .fold(0.0, f64::max);
            Ok(ColumnRun {
                column: computational.iter().map(|&i| out.amplitudes()[i]).collect(),
                vacuum_loss: out.photon_population_at_least(1),
                level_two,
                multi_photon,
                norm_drift,
            })
        })
        .collect::<Result<_>>()?;

    let mut gate = Array2::zeros((size, size));
    for (col, run) in runs.iter().enumerate() {
        for (row, z) in run.column.iter().enumerate() {
            gate[[row, col]] = *z;
        }
    }
    let max_of = |f: fn(&ColumnRun) -> f64| runs.iter().map(f).fold(0.0, f64::max);
    let fidelity = verify::gate_fidelity(&gate, &schedule.gate.matrix(n))?;
    Ok(GateReport {
        n,
        target: schedule.gate,
        fidelity,
        vacuum_return: max_of(|r| r.vacuum_loss),
        level_two_residual: max_of(|r| r.level_two),
        multi_photon_peak: max_of(|r| r.multi_photon),
        norm_drift: max_of(|r| r.norm_drift),
        step_count: schedule.step_count(),
        total_time: schedule.total_time(),
        gate,
    })
}

/// Step counts for building an n-qubit CNOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounts {
    /// Controlled phase gate alone, `2n + 1`.
    pub phase_gate_steps: usize,
    /// Controlled phase plus the two target Hadamards, `2n + 3`.
    pub cnot_steps: usize,
    /// One-step-per-gate count for the textbook decomposition.
    pub conventional_steps: usize,
}

/// Steps charged to one Toffoli built from six CNOTs (each a controlled
/// phase plus two Hadamards) and ten single-qubit gates.
pub const TOFFOLI_CONVENTIONAL_STEPS: usize = 6 * 3 + 10;

/// Compares this schedule's step count with the gate-decomposition count.
///
/// For `n > 3` the conventional figure uses the ancilla-assisted chain of
/// `2n - 5` Toffolis, each charged [`TOFFOLI_CONVENTIONAL_STEPS`].
pub fn step_count_comparison(n: usize) -> Result<StepCounts> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "step comparison is defined for n >= 3, got {n}"
        )));
    }
    Ok(StepCounts {
        phase_gate_steps: 2 * n + 1,
        cnot_steps: 2 * n + 3,
        conventional_steps: TOFFOLI_CONVENTIONAL_STEPS * (2 * n - 5),
    })
}
