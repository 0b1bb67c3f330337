// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over `squid-cphase`.
//!
//! Every fallible function returns an [`ScStatus`]; on failure the message
//! is available from [`sc_last_error_message`] on the same thread.
//! Handles are created by `sc_*_new`/`sc_*` constructors and released with
//! the matching `sc_*_free`. Strings returned to the caller are released
//! with [`sc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use squid_cphase::device::{self, CouplingPlacement, CrosstalkParams, EnergyQuantum, ResonatorParams};
use squid_cphase::hilbert::{BasisLabel, HilbertSpace, SystemState};
use squid_cphase::protocol::{self, GateReport, Schedule};
use squid_cphase::squid_spectrum::{self, SolverSettings, SquidParams};
use squid_cphase::{verify, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Truncation = 4,
    NotConverged = 5,
    BufferTooSmall = 6,
    Internal = 7,
    Panic = 8,
}

/// Photon energy quantum in the coupling formula.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScEnergyQuantum {
    PlanckNu = 0,
    HbarNu = 1,
}

impl From<ScEnergyQuantum> for EnergyQuantum {
    fn from(q: ScEnergyQuantum) -> Self {
        match q {
            ScEnergyQuantum::PlanckNu => EnergyQuantum::PlanckNu,
            ScEnergyQuantum::HbarNu => EnergyQuantum::HbarNu,
        }
    }
}

/// Opaque gate schedule.
pub struct ScSchedule(Schedule);

/// Opaque gate extraction result.
pub struct ScGateReport {
    report: GateReport,
    truth_pass: bool,
    truth_max_error: f64,
}

/// SQUID circuit parameters, SI units; `flux_bias` in flux quanta.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ScSquidParams {
    pub capacitance: f64,
    pub inductance: f64,
    pub beta_l: f64,
    pub flux_bias: f64,
}

/// Lowest three levels of one SQUID.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ScSpectrum {
    pub energies_j: [f64; 3],
    pub nu_01_hz: f64,
    pub nu_02_hz: f64,
    pub nu_12_hz: f64,
    pub phi_01: f64,
    pub phi_02: f64,
    pub phi_12: f64,
    /// Largest relative frequency shift under grid refinement, or -1 when
    /// refinement was not run.
    pub max_relative_shift: f64,
    pub lambda_type: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ScResonator {
    pub frequency_hz: f64,
    pub wavelength: f64,
    pub length: f64,
    pub inductance_per_length: f64,
    pub quality_factor: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ScPlacement {
    pub mutual_inductance: f64,
    pub position: f64,
    pub phi_02: f64,
    pub loop_inductance: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ScCrosstalk {
    pub mutual_inductance: f64,
    pub loop_inductance: f64,
    pub loop_inductance_next: f64,
    pub phi_max: f64,
    pub g_min: f64,
    pub rabi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ScBudgetParams {
    pub gamma2_inv: f64,
    pub kappa_inv: f64,
    pub tau_a: f64,
    pub tau_uw: f64,
}

/// Time budget summary; per-SQUID `tau_r` is not included.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ScTimeBudget {
    pub tau_total: f64,
    pub tau_total_closed_form: f64,
    pub gamma2_margin: f64,
    pub kappa_margin: f64,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> ScStatus {
    match e {
        Error::Config(_) | Error::Json(_) | Error::Io(_) => ScStatus::Config,
        Error::Truncation { .. } => ScStatus::Truncation,
        Error::NotConverged(_) => ScStatus::NotConverged,
        Error::AtStep { source, .. } => status_of(source),
        Error::DimensionMismatch(_)
        | Error::SquidIndex { .. }
        | Error::PhotonOutOfRange { .. }
        | Error::InvalidParameter(_) => ScStatus::InvalidArgument,
        Error::NotHermitian(_) => ScStatus::Internal,
    }
}

/// Runs `body`, recording errors and converting panics.
fn guard(body: impl FnOnce() -> Result<(), (ScStatus, String)>) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ScStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside squid-cphase".into());
            ScStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (ScStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (ScStatus, String) {
    (ScStatus::NullPointer, format!("{name} is null"))
}

unsafe fn slice<'a, T>(data: *const T, len: usize, name: &str) -> Result<&'a [T], (ScStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), (ScStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the `2n + 1` step controlled phase schedule.
///
/// # Safety
/// `couplings` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_cphase(
    n: usize,
    couplings: *const f64,
    rabi: f64,
    retune_time: f64,
    out: *mut *mut ScSchedule,
) -> ScStatus {
    guard(|| {
        let g = slice(couplings, n, "couplings")?;
        let s = protocol::build_cphase_schedule(n, g, rabi, retune_time).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(ScSchedule(s))), "out")
    })
}

/// Builds the `2n + 3` step CNOT schedule (Hadamards on SQUID `n`).
///
/// # Safety
/// `couplings` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_cnot(
    n: usize,
    couplings: *const f64,
    rabi: f64,
    hadamard_rabi: f64,
    retune_time: f64,
    out: *mut *mut ScSchedule,
) -> ScStatus {
    guard(|| {
        let g = slice(couplings, n, "couplings")?;
        let s = protocol::build_cnot_schedule(n, g, rabi, hadamard_rabi, retune_time).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(ScSchedule(s))), "out")
    })
}

/// Parses a schedule from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_from_json(json: *const c_char, out: *mut *mut ScSchedule) -> ScStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (ScStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let s: Schedule = serde_json::from_str(text).map_err(|e| lib_err(Error::Json(e)))?;
        write_out(out, Box::into_raw(Box::new(ScSchedule(s))), "out")
    })
}

/// JSON form of a schedule; free with [`sc_string_free`].
///
/// # Safety
/// `schedule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_to_json(schedule: *const ScSchedule, out: *mut *mut c_char) -> ScStatus {
    guard(|| {
        let s = schedule.as_ref().ok_or_else(|| null("schedule"))?;
        let text = serde_json::to_string(&s.0).map_err(|e| lib_err(Error::Json(e)))?;
        let c = CString::new(text).map_err(|e| (ScStatus::Internal, e.to_string()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// Number of steps, or 0 for NULL.
///
/// # Safety
/// `schedule` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_step_count(schedule: *const ScSchedule) -> usize {
    schedule.as_ref().map_or(0, |s| s.0.step_count())
}

/// Wall-clock duration in seconds, or NaN for NULL.
///
/// # Safety
/// `schedule` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_total_time(schedule: *const ScSchedule) -> f64 {
    schedule.as_ref().map_or(f64::NAN, |s| s.0.total_time())
}

/// # Safety
/// `schedule` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_free(schedule: *mut ScSchedule) {
    if !schedule.is_null() {
        drop(Box::from_raw(schedule));
    }
}

/// Runs computational input `bits` (SQUID 1 is the most significant bit)
/// and writes the final amplitudes, `(n_max + 1) 3^n` of them.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_run_basis_input(
    schedule: *const ScSchedule,
    n_max: usize,
    bits: u64,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> ScStatus {
    guard(|| {
        let s = &schedule.as_ref().ok_or_else(|| null("schedule"))?.0;
        let space = HilbertSpace::new(s.n, n_max).map_err(lib_err)?;
        if s.n >= 64 || bits >> s.n != 0 {
            return Err((
                ScStatus::InvalidArgument,
                format!("input {bits:#b} has more than {} bits", s.n),
            ));
        }
        if len < space.dim() {
            return Err((
                ScStatus::BufferTooSmall,
                format!("need {} amplitudes, buffer holds {len}", space.dim()),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(null("amplitude buffer"));
        }
        let psi = SystemState::basis_state(space, &BasisLabel::from_bits(bits as usize, s.n)).map_err(lib_err)?;
        let trajectory = protocol::run_schedule(&psi, s).map_err(lib_err)?;
        for (k, z) in trajectory.final_state().amplitudes().iter().enumerate() {
            re.add(k).write(z.re);
            im.add(k).write(z.im);
        }
        Ok(())
    })
}

/// Effective gate on the qubit subspace with leakage diagnostics.
///
/// # Safety
/// `schedule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_extract_gate(
    schedule: *const ScSchedule,
    n_max: usize,
    out: *mut *mut ScGateReport,
) -> ScStatus {
    guard(|| {
        let s = &schedule.as_ref().ok_or_else(|| null("schedule"))?.0;
        let report = protocol::extract_gate(s, n_max).map_err(lib_err)?;
        let check = verify::check_report(&report).map_err(lib_err)?;
        let handle = ScGateReport {
            report,
            truth_pass: check.pass,
            truth_max_error: check.max_error,
        };
        write_out(out, Box::into_raw(Box::new(handle)), "out")
    })
}

/// Side length `2^n` of the gate matrix, or 0 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_gate_report_dim(report: *const ScGateReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.gate.nrows())
}

/// One gate entry `<row|U|col>`.
///
/// # Safety
/// `report` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_gate_report_entry(
    report: *const ScGateReport,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> ScStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let z: Complex64 = *r.report.gate.get((row, col)).ok_or_else(|| {
            (
                ScStatus::InvalidArgument,
                format!("entry ({row}, {col}) outside a {0}x{0} gate", r.report.gate.nrows()),
            )
        })?;
        write_out(re, z.re, "re")?;
        write_out(im, z.im, "im")
    })
}

/// Phase-insensitive fidelity, or NaN for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_gate_report_fidelity(report: *const ScGateReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.report.fidelity)
}

/// Truth-table verdict against the schedule's target gate.
///
/// # Safety
/// `report` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_gate_report_truth_table(
    report: *const ScGateReport,
    pass: *mut bool,
    max_error: *mut f64,
) -> ScStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        write_out(pass, r.truth_pass, "pass")?;
        write_out(max_error, r.truth_max_error, "max_error")
    })
}

/// Largest final photon population and largest final `|2>` population.
///
/// # Safety
/// `report` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_gate_report_leakage(
    report: *const ScGateReport,
    vacuum_return: *mut f64,
    level_two_residual: *mut f64,
) -> ScStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        write_out(vacuum_return, r.report.vacuum_return, "vacuum_return")?;
        write_out(level_two_residual, r.report.level_two_residual, "level_two_residual")
    })
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_gate_report_free(report: *mut ScGateReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Solves the SQUID spectrum on `grid_points` interior points (0 selects
/// the default) with refinement.
///
/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_solve_spectrum(
    params: *const ScSquidParams,
    grid_points: usize,
    out: *mut ScSpectrum,
) -> ScStatus {
    guard(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        let params = SquidParams {
            capacitance: p.capacitance,
            inductance: p.inductance,
            beta_l: p.beta_l,
            flux_bias: p.flux_bias,
        };
        let mut settings = SolverSettings::default();
        if grid_points > 0 {
            settings.grid_points = grid_points;
        }
        let r = squid_spectrum::solve_spectrum(&params, &settings).map_err(lib_err)?;
        let spectrum = ScSpectrum {
            energies_j: [r.energies_j[0], r.energies_j[1], r.energies_j[2]],
            nu_01_hz: r.nu_01,
            nu_02_hz: r.nu_02,
            nu_12_hz: r.nu_12,
            phi_01: r.phi_01,
            phi_02: r.phi_02,
            phi_12: r.phi_12,
            max_relative_shift: r.refinement.as_ref().map_or(-1.0, |f| f.max_relative_shift),
            lambda_type: r.lambda_type,
        };
        write_out(out, spectrum, "out")
    })
}

fn resonator(r: &ScResonator) -> ResonatorParams {
    ResonatorParams {
        frequency_hz: r.frequency_hz,
        wavelength: r.wavelength,
        length: r.length,
        inductance_per_length: r.inductance_per_length,
        quality_factor: r.quality_factor,
        geometry: None,
    }
}

/// Magnitude of the SQUID-resonator coupling, rad/s.
///
/// # Safety
/// Pointers must be readable / writable as named.
#[no_mangle]
pub unsafe extern "C" fn sc_coupling_g(
    res: *const ScResonator,
    place: *const ScPlacement,
    quantum: ScEnergyQuantum,
    out: *mut f64,
) -> ScStatus {
    guard(|| {
        let r = res.as_ref().ok_or_else(|| null("res"))?;
        let p = place.as_ref().ok_or_else(|| null("place"))?;
        let g = device::coupling_g(
            &resonator(r),
            &CouplingPlacement {
                mutual_inductance: p.mutual_inductance,
                position: p.position,
                phi_02: p.phi_02,
                loop_inductance: p.loop_inductance,
            },
            quantum.into(),
        )
        .map_err(lib_err)?;
        write_out(out, g, "out")
    })
}

/// `Q / (2 pi nu_r)` in seconds, or NaN for NULL.
///
/// # Safety
/// `res` must be NULL or readable.
#[no_mangle]
pub unsafe extern "C" fn sc_photon_lifetime(res: *const ScResonator) -> f64 {
    res.as_ref().map_or(f64::NAN, |r| device::photon_lifetime(&resonator(r)))
}

/// Rabi frequency (rad/s) for a microwave flux amplitude (Wb).
#[no_mangle]
pub extern "C" fn sc_rabi_from_flux(loop_inductance: f64, phi_12: f64, flux_amplitude: f64) -> f64 {
    device::rabi_from_flux(loop_inductance, phi_12, flux_amplitude)
}

/// Flux amplitude (Wb) giving Rabi frequency `rabi` (rad/s).
#[no_mangle]
pub extern "C" fn sc_flux_for_rabi(loop_inductance: f64, phi_12: f64, rabi: f64) -> f64 {
    device::flux_for_rabi(loop_inductance, phi_12, rabi)
}

/// Gate time budget for `n` SQUIDs.
///
/// # Safety
/// `couplings` must point to `n` doubles; other pointers as named.
#[no_mangle]
pub unsafe extern "C" fn sc_time_budget(
    n: usize,
    couplings: *const f64,
    budget: *const ScBudgetParams,
    margin_threshold: f64,
    out: *mut ScTimeBudget,
) -> ScStatus {
    guard(|| {
        let g = slice(couplings, n, "couplings")?;
        let b = budget.as_ref().ok_or_else(|| null("budget"))?;
        let t = device::time_budget(
            n,
            g,
            &device::BudgetParams {
                gamma2_inv: b.gamma2_inv,
                kappa_inv: b.kappa_inv,
                tau_a: b.tau_a,
                tau_uw: b.tau_uw,
            },
            margin_threshold,
        )
        .map_err(lib_err)?;
        write_out(
            out,
            ScTimeBudget {
                tau_total: t.tau_total,
                tau_total_closed_form: t.tau_total_closed_form,
                gamma2_margin: t.gamma2_margin,
                kappa_margin: t.kappa_margin,
                pass: t.pass,
            },
            "out",
        )
    })
}

/// Direct-coupling figure of merit between neighbouring SQUIDs.
///
/// # Safety
/// `cross` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_zeta(cross: *const ScCrosstalk, out: *mut f64) -> ScStatus {
    guard(|| {
        let c = cross.as_ref().ok_or_else(|| null("cross"))?;
        let z = device::zeta(&CrosstalkParams {
            mutual_inductance: c.mutual_inductance,
            loop_inductance: c.loop_inductance,
            loop_inductance_next: c.loop_inductance_next,
            phi_max: c.phi_max,
            g_min: c.g_min,
            rabi: c.rabi,
            distance: None,
        })
        .map_err(lib_err)?;
        write_out(out, z, "out")
    })
}
