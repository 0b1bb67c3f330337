// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Comparisons of simulated outcomes against ideal gates and the reference
//! step-by-step trace of the three-SQUID sequence.

use std::fmt;
use std::fmt::Write as _;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{BasisLabel, HilbertSpace, SystemState};
use crate::oracle::oracle_trajectory;
use crate::protocol::{extract_gate, run_schedule, GateReport, Schedule, StepKind, Trajectory};

/// Default entry-wise tolerance of the truth-table check.
pub const TRUTH_TABLE_TOLERANCE: f64 = 1e-10;
/// Default amplitude tolerance of a reference-trace cell.
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Oracle agreement required before a mismatch is blamed on the reference.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Reference cells whose printed phase is known to be wrong, as
/// `(input, step)`. Each prints `-i` where the dynamics give `-1`; the next
/// printed cell of the same row only follows from `-1`.
pub const REFERENCE_ERRATA: [(&str, usize); 2] = [("100|0", 4), ("101|0", 4)];

const REFERENCE_TRACE: &str = include_str!("../data/cphase3_reference_trace.txt");

/// One row of the n-qubit controlled phase truth table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthTableEntry {
    /// Qubit values, SQUID 1 first.
    pub input: Vec<u8>,
    /// `-1` iff every bit is 1.
    pub expected_sign: i8,
}

pub fn truth_table(n: usize) -> Vec<TruthTableEntry> {
    (0..1usize << n)
        .map(|bits| {
            let input: Vec<u8> = (0..n).map(|k| ((bits >> (n - 1 - k)) & 1) as u8).collect();
            let expected_sign = if input.iter().all(|&b| b == 1) { -1 } else { 1 };
            TruthTableEntry {
                input,
                expected_sign,
            }
        })
        .collect()
}

/// `diag(1, ..., 1, -1)` of size `2^n`.
pub fn controlled_phase_matrix(n: usize) -> Array2<Complex64> {
    let mut m = Array2::zeros((1 << n, 1 << n));
    for (k, entry) in truth_table(n).iter().enumerate() {
        m[[k, k]] = Complex64::new(f64::from(entry.expected_sign), 0.0);
    }
    m
}

/// Flips the last qubit iff the first `n - 1` are all 1.
pub fn controlled_not_matrix(n: usize) -> Array2<Complex64> {
    let size = 1usize << n;
    let mut m = Array2::zeros((size, size));
    for col in 0..size {
        let row = if col >> 1 == (size >> 1) - 1 { col ^ 1 } else { col };
        m[[row, col]] = Complex64::new(1.0, 0.0);
    }
    m
}

/// `|Tr(target^dagger actual)| / dim`.
pub fn gate_fidelity(actual: &Array2<Complex64>, target: &Array2<Complex64>) -> Result<f64> {
    let (rows, cols) = actual.dim();
    if rows != cols || target.dim() != (rows, cols) {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {:?} against {:?}",
            actual.dim(),
            target.dim()
        )));
    }
    let overlap: Complex64 = actual
        .iter()
        .zip(target.iter())
        .map(|(a, t)| t.conj() * a)
        .sum();
    Ok(overlap.norm() / rows as f64)
}

/// Unit phase `e^{i theta}` such that `e^{i theta} * actual` best lines up
/// with `target` at the largest-magnitude entry of `actual` (ties within
/// `1e-9` go to the first entry in row-major order).
pub fn alignment_phase(actual: &Array2<Complex64>, target: &Array2<Complex64>) -> Complex64 {
    let largest = actual.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()));
    if largest == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let (pos, reference) = actual
        .indexed_iter()
        .find(|(_, z)| z.norm() >= largest - 1e-9)
        .map(|(p, z)| (p, *z))
        .expect("non-empty matrix");
    let goal = target[pos];
    let goal_phase = if goal.norm() > 0.0 {
        goal / goal.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    goal_phase * (reference / reference.norm()).conj()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruthTableCheck {
    pub pass: bool,
    /// Largest entry-wise deviation after global phase alignment.
    pub max_error: f64,
}

/// Compares `gate` with `diag((-1)^(i1 i2 ... in))` up to a global phase.
pub fn check_truth_table(gate: &Array2<Complex64>, n: usize) -> Result<TruthTableCheck> {
    check_against(gate, &controlled_phase_matrix(n), TRUTH_TABLE_TOLERANCE)
}

/// Entry-wise comparison with `target` after global phase alignment.
pub fn check_against(
    gate: &Array2<Complex64>,
    target: &Array2<Complex64>,
    tolerance: f64,
) -> Result<TruthTableCheck> {
    if gate.dim() != target.dim() {
        return Err(Error::DimensionMismatch(format!(
            "gate {:?} against target {:?}",
            gate.dim(),
            target.dim()
        )));
    }
    let phase = alignment_phase(gate, target);
    let max_error = gate
        .iter()
        .zip(target.iter())
        .map(|(a, t)| (a * phase - t).norm())
        .fold(0.0, f64::max);
    Ok(TruthTableCheck {
        pass: max_error < tolerance,
        max_error,
    })
}

/// Checks a [`GateReport`] against the gate its schedule targets.
pub fn check_report(report: &GateReport) -> Result<TruthTableCheck> {
    check_against(&report.gate, &report.target.matrix(report.n), TRUTH_TABLE_TOLERANCE)
}

/// Final population left in the resonator (one or more photons).
pub fn vacuum_return(trajectory: &Trajectory) -> f64 {
    trajectory.final_state().photon_population_at_least(1)
}

/// Expected content of one reference-trace cell: `phase * |label>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceExpectation {
    pub step: usize,
    pub label: BasisLabel,
    pub phase: Complex64,
}

fn parse_phase(token: &str) -> Option<Complex64> {
    Some(match token {
        "+1" | "1" => Complex64::new(1.0, 0.0),
        "-1" => Complex64::new(-1.0, 0.0),
        "+i" | "i" => Complex64::new(0.0, 1.0),
        "-i" => Complex64::new(0.0, -1.0),
        _ => return None,
    })
}

/// Reference cells for all eight inputs, keyed by input label.
pub fn reference_trace() -> Result<Vec<(BasisLabel, Vec<TraceExpectation>)>> {
    let mut rows = Vec::new();
    for line in REFERENCE_TRACE.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Config(format!("malformed reference trace line {line:?}"));
        let (input, cells) = line.split_once(':').ok_or_else(bad)?;
        let input: BasisLabel = input.trim().parse()?;
        let cells = cells
            .split(';')
            .enumerate()
            .map(|(k, cell)| {
                let (phase, label) = cell.trim().split_once(' ').ok_or_else(bad)?;
                Ok(TraceExpectation {
                    step: k + 1,
                    label: label.trim().parse()?,
                    phase: parse_phase(phase).ok_or_else(bad)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((input, cells));
    }
    Ok(rows)
}

/// Simulated versus reference content of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCell {
    pub input: BasisLabel,
    pub step: usize,
    pub expected: TraceExpectation,
    /// Amplitude the simulation puts on the expected label.
    pub simulated_amplitude: Complex64,
    /// The simulated state, written out as its nonzero components.
    pub simulated: String,
    /// `|| simulated - phase * |label> ||`.
    pub delta: f64,
    /// Distance between the simulated state and the dense-oracle state at
    /// this step; filled in for mismatching cells only.
    pub oracle_delta: Option<f64>,
}

impl TraceCell {
    pub fn matches(&self, tolerance: f64) -> bool {
        self.delta <= tolerance
    }

    /// True when the simulation lands on the expected label with unit
    /// weight and only the phase differs.
    pub fn is_phase_only_mismatch(&self, tolerance: f64) -> bool {
        !self.matches(tolerance) && (self.simulated_amplitude.norm() - 1.0).abs() <= tolerance
    }
}

fn format_phase(z: Complex64) -> String {
    const UNITS: [(&str, Complex64); 4] = [
        ("+1", Complex64::new(1.0, 0.0)),
        ("-1", Complex64::new(-1.0, 0.0)),
        ("+i", Complex64::new(0.0, 1.0)),
        ("-i", Complex64::new(0.0, -1.0)),
    ];
    UNITS
        .iter()
        .find(|(_, u)| (z - u).norm() < 1e-9)
        .map(|(s, _)| s.to_string())
        .unwrap_or_else(|| format!("({:+.6}{:+.6}i)", z.re, z.im))
}

/// Human form of a state, e.g. `-i|011>|1>_c`.
pub fn describe_state(state: &SystemState) -> String {
    let parts: Vec<String> = state
        .support(1e-9)
        .into_iter()
        .map(|(label, z)| format!("{}{label}", format_phase(z)))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

fn describe_expected(e: &TraceExpectation) -> String {
    format!("{}{}", format_phase(e.phase), e.label)
}

/// Compares every step of one trajectory with the reference row for its
/// input. The trajectory must come from a seven-step, three-SQUID
/// controlled phase schedule started in a computational basis state.
pub fn check_reference_trace(trajectory: &Trajectory) -> Result<Vec<TraceCell>> {
    let space = trajectory.initial.space();
    if space.n_qubits != 3 || trajectory.after_step.len() != 7 {
        return Err(Error::InvalidParameter(format!(
            "reference trace covers 3 SQUIDs and 7 steps, got {} SQUIDs and {} steps",
            space.n_qubits,
            trajectory.after_step.len()
        )));
    }
    let support = trajectory.initial.support(1e-12);
    let input = match support.as_slice() {
        [(label, z)] if (z - Complex64::new(1.0, 0.0)).norm() < 1e-12 => label.clone(),
        _ => {
            return Err(Error::InvalidParameter(
                "trajectory does not start in a single basis state".into(),
            ))
        }
    };
    let rows = reference_trace()?;
    let (_, expected) = rows
        .into_iter()
        .find(|(l, _)| *l == input)
        .ok_or_else(|| Error::InvalidParameter(format!("no reference row for input {input}")))?;

    expected
        .into_iter()
        .zip(&trajectory.after_step)
        .map(|(exp, state)| {
            let ideal = SystemState::basis_state(space, &exp.label)?;
            let simulated_amplitude = state.amplitude(&exp.label)?;
            let delta = state
                .amplitudes()
                .iter()
                .zip(ideal.amplitudes())
                .map(|(s, e)| (s - exp.phase * e).norm_sqr())
                .sum::<f64>()
                .sqrt();
            Ok(TraceCell {
                input: input.clone(),
                step: exp.step,
                simulated: describe_state(state),
                expected: exp,
                simulated_amplitude,
                delta,
                oracle_delta: None,
            })
        })
        .collect()
}

/// All 8 x 7 reference cells for `schedule`.
#[derive(Debug, Clone)]
pub struct TraceReport {
    pub cells: Vec<TraceCell>,
    pub tolerance: f64,
}

impl TraceReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &TraceCell> {
        self.cells.iter().filter(|c| !c.matches(self.tolerance))
    }

    pub fn matched(&self) -> usize {
        self.cells.len() - self.mismatches().count()
    }

    /// Mismatches that are not listed in [`REFERENCE_ERRATA`], differ by
    /// more than a phase, or are not reproduced by the dense oracle.
    pub fn unexplained(&self) -> impl Iterator<Item = &TraceCell> {
        self.mismatches().filter(|c| {
            let listed = REFERENCE_ERRATA
                .iter()
                .any(|(input, step)| c.input.compact() == *input && c.step == *step);
            let oracle_agrees = c.oracle_delta.is_some_and(|d| d <= ORACLE_TOLERANCE);
            !(listed && oracle_agrees && c.is_phase_only_mismatch(self.tolerance))
        })
    }

    /// Every cell matches or is a confirmed erratum of the reference.
    pub fn pass(&self) -> bool {
        self.unexplained().next().is_none()
    }

    /// `input,step,expected,simulated,abs_delta` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("input,step,expected,simulated,abs_delta\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.3e}",
                c.input.compact(),
                c.step,
                describe_expected(&c.expected),
                c.simulated,
                c.delta
            );
        }
        out
    }
}

impl fmt::Display for TraceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}/{} cells match within {:.0e}",
            self.matched(),
            self.cells.len(),
            self.tolerance
        )?;
        for c in self.mismatches() {
            let oracle = match c.oracle_delta {
                Some(d) => format!("oracle agrees to {d:.1e}"),
                None => "no oracle run".to_string(),
            };
            writeln!(
                f,
                "  input {} step {}: reference {}, simulated {} (|delta| = {:.3e}, {oracle})",
                c.input.compact(),
                c.step,
                describe_expected(&c.expected),
                c.simulated,
                c.delta
            )?;
        }
        Ok(())
    }
}

/// Runs the eight computational inputs through a canonical three-SQUID
/// controlled phase schedule and diffs every step against the reference.
pub fn reference_trace_report(schedule: &Schedule, n_max: usize) -> Result<TraceReport> {
    let canonical = schedule.n == 3
        && schedule.steps.len() == 7
        && matches!(schedule.steps[0].kind, StepKind::MicrowavePi { .. })
        && schedule.steps[3].kind == StepKind::JcFull;
    if !canonical {
        return Err(Error::InvalidParameter(
            "reference trace needs the 7-step three-SQUID controlled phase schedule".into(),
        ));
    }
    let space = HilbertSpace::new(3, n_max)?;
    let mut cells = Vec::with_capacity(56);
    for (input, _) in reference_trace()? {
        let psi = SystemState::basis_state(space, &input)?;
        let trajectory = run_schedule(&psi, schedule)?;
        let mut row = check_reference_trace(&trajectory)?;
        if row.iter().any(|c| !c.matches(TRACE_TOLERANCE)) {
            let oracle = oracle_trajectory(&psi, schedule)?;
            for cell in row.iter_mut().filter(|c| !c.matches(TRACE_TOLERANCE)) {
                let k = cell.step - 1;
                cell.oracle_delta = Some(state_distance(&trajectory.after_step[k], &oracle.after_step[k]));
            }
        }
        cells.extend(row);
    }
    Ok(TraceReport {
        cells,
        tolerance: TRACE_TOLERANCE,
    })
}

fn state_distance(a: &SystemState, b: &SystemState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Truth table check and phase-insensitive fidelity for one schedule.
pub fn verify_schedule(schedule: &Schedule, n_max: usize) -> Result<(GateReport, TruthTableCheck)> {
    let report = extract_gate(schedule, n_max)?;
    let check = check_against(
        &report.gate,
        &schedule.gate.matrix(schedule.n),
        TRUTH_TABLE_TOLERANCE,
    )?;
    Ok((report, check))
}
