// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use squid_cphase::config::RunConfig;
use squid_cphase::device::{
    feasibility_report, max_phi_product, photon_lifetime, time_budget, zeta, BudgetParams, CrosstalkParams,
    ResonatorParams,
};
use squid_cphase::dynamics::{drive_evolve, excitation_number, jc_evolve, DrivePulse, JcInteraction};
use squid_cphase::hilbert::{BasisLabel, HilbertSpace, SquidLevel, SystemState};
use squid_cphase::oracle::{apply_matrix, drive_hamiltonian, exchange_hamiltonian, expm_oracle};
use squid_cphase::protocol::{
    build_cnot_schedule, build_cphase_schedule, extract_gate, run_schedule, step_count_comparison, Schedule,
};
use squid_cphase::squid_spectrum::{solve_spectrum, SolverSettings, SquidParams};
use squid_cphase::verify::{
    check_against, check_report, controlled_not_matrix, reference_trace_report, vacuum_return, REFERENCE_ERRATA,
};

use common::{distance, max_entry_diff, random_state};

const G: f64 = 7.5e9;
const GATE_TOL: f64 = 1e-10;
const CONSERVATION_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

type Criterion = fn() -> Result<Outcome, String>;

fn equal_couplings(n: usize) -> Schedule {
    build_cphase_schedule(n, &vec![G; n], 2.0 * G, 0.0).unwrap()
}

fn rel(value: f64, reference: f64) -> f64 {
    (value / reference - 1.0).abs()
}

fn gate_truth_table() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        let report = extract_gate(&equal_couplings(n), 3).map_err(|e| e.to_string())?;
        let check = check_report(&report).map_err(|e| e.to_string())?;
        worst = worst.max(check.max_error);
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        worst < GATE_TOL && secs < 5.0,
        format!("n=2..6 max entry error {worst:.2e} (tol {GATE_TOL:.0e}), {secs:.3} s (limit 5 s)"),
    ))
}

fn phase_symbol(z: Complex64) -> String {
    match (z.re.round() as i32, z.im.round() as i32) {
        (1, 0) => "+1".into(),
        (-1, 0) => "-1".into(),
        (0, 1) => "+i".into(),
        (0, -1) => "-i".into(),
        _ => format!("{z}"),
    }
}

fn reference_trace() -> Result<Outcome, String> {
    let report = reference_trace_report(&equal_couplings(3), 3).map_err(|e| e.to_string())?;
    let mismatched: Vec<String> = report
        .mismatches()
        .map(|c| {
            format!(
                "{} step {}: table {} vs simulated {} (oracle delta {:.1e})",
                c.input.compact(),
                c.step,
                phase_symbol(c.expected.phase),
                c.simulated,
                c.oracle_delta.unwrap_or(f64::NAN)
            )
        })
        .collect();
    let unexplained = report.unexplained().count();
    let pass = report.cells.len() == 56
        && unexplained == 0
        && report.mismatches().count() <= REFERENCE_ERRATA.len();
    Ok(Outcome::new(
        pass,
        format!(
            "{}/{} cells within {:.0e}; documented misprints resolved by the oracle: [{}]; unexplained: {}",
            report.matched(),
            report.cells.len(),
            report.tolerance,
            mismatched.join("; "),
            unexplained
        ),
    ))
}

fn oracle_equivalence() -> Result<Outcome, String> {
    const DRAWS: usize = 150;
    let mut rng = StdRng::seed_from_u64(0xacce_0003);
    let (mut jc_worst, mut drive_worst): (f64, f64) = (0.0, 0.0);
    for _ in 0..DRAWS {
        let space = HilbertSpace::new(rng.random_range(1..=2), rng.random_range(2..=4)).unwrap();
        let squid = rng.random_range(1..=space.n_qubits);

        let g = rng.random_range(1e8..2e10);
        let t = rng.random_range(0.0..6.0) / g;
        let psi = random_state(&mut rng, space, &[squid]);
        let fast = jc_evolve(&psi, &JcInteraction { squid, g, duration: t }).map_err(|e| e.to_string())?;
        let u = expm_oracle(&exchange_hamiltonian(space, squid, g).unwrap(), t).map_err(|e| e.to_string())?;
        jc_worst = jc_worst.max(distance(&fast, &apply_matrix(&u, &psi).unwrap()));

        let rabi = rng.random_range(1e8..3e10);
        let phase = rng.random_range(-PI..PI);
        let t = rng.random_range(0.0..8.0) / rabi;
        let psi = random_state(&mut rng, space, &[]);
        let pulse = DrivePulse {
            squid,
            rabi,
            phase,
            duration: t,
        };
        let fast = drive_evolve(&psi, &pulse).map_err(|e| e.to_string())?;
        let u = expm_oracle(&drive_hamiltonian(space, squid, rabi, phase).unwrap(), t).map_err(|e| e.to_string())?;
        drive_worst = drive_worst.max(distance(&fast, &apply_matrix(&u, &psi).unwrap()));
    }
    Ok(Outcome::new(
        jc_worst < GATE_TOL && drive_worst < GATE_TOL,
        format!("{DRAWS} draws each at n<=2: exchange {jc_worst:.2e}, drive {drive_worst:.2e} (tol {GATE_TOL:.0e})"),
    ))
}

fn conservation() -> Result<Outcome, String> {
    let mut rng = StdRng::seed_from_u64(0xacce_0004);
    let (mut norm, mut excitation): (f64, f64) = (0.0, 0.0);
    let mut spectator_exact = true;
    for _ in 0..200 {
        let n = rng.random_range(2..=3);
        let space = HilbertSpace::new(n, rng.random_range(2..=4)).unwrap();
        let squid = rng.random_range(1..=n);
        let g = rng.random_range(1e8..2e10);
        let psi = random_state(&mut rng, space, &[squid]);
        let out = jc_evolve(
            &psi,
            &JcInteraction {
                squid,
                g,
                duration: rng.random_range(0.0..5.0) / g,
            },
        )
        .map_err(|e| e.to_string())?;
        norm = norm.max((out.norm() - 1.0).abs());
        let before = excitation_number(&psi, squid).unwrap();
        excitation = excitation.max((before - excitation_number(&out, squid).unwrap()).abs());

        let rabi = rng.random_range(1e8..3e10);
        let pulse = DrivePulse {
            squid,
            rabi,
            phase: rng.random_range(-PI..PI),
            duration: rng.random_range(0.0..6.0) / rabi,
        };
        let driven = drive_evolve(&psi, &pulse).map_err(|e| e.to_string())?;
        norm = norm.max((driven.norm() - 1.0).abs());
        for i in 0..space.dim() {
            if space.level_at(i, squid) == SquidLevel::L0 && driven.amplitudes()[i] != psi.amplitudes()[i] {
                spectator_exact = false;
            }
        }

        // Basis state with arbitrary spectator levels: only the active SQUID
        // and the photon number may change, and level 1 is inert.
        let mut label = BasisLabel::from_bits(rng.random_range(0..1 << n), n);
        label.levels[rng.random_range(0..n)] = SquidLevel::L2;
        label.photon = rng.random_range(0..space.n_max);
        let basis = SystemState::basis_state(space, &label).unwrap();
        let moved = jc_evolve(&basis, &JcInteraction { squid, g, duration: 1.3 / g }).map_err(|e| e.to_string())?;
        for (i, z) in moved.amplitudes().iter().enumerate() {
            let spectator_changed = (1..=n)
                .filter(|&s| s != squid)
                .any(|s| space.level_at(i, s) != label.levels[s - 1]);
            if spectator_changed && *z != Complex64::new(0.0, 0.0) {
                spectator_exact = false;
            }
        }
        if label.levels[squid - 1] == SquidLevel::L1 && moved.amplitudes() != basis.amplitudes() {
            spectator_exact = false;
        }
    }

    let (mut vacuum, mut level_two, mut drift): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 2..=6 {
        let schedule = equal_couplings(n);
        let space = HilbertSpace::new(n, 3).unwrap();
        for bits in 0..1usize << n {
            let psi = SystemState::basis_state(space, &BasisLabel::from_bits(bits, n)).unwrap();
            let traj = run_schedule(&psi, &schedule).map_err(|e| e.to_string())?;
            vacuum = vacuum.max(vacuum_return(&traj));
        }
        let report = extract_gate(&schedule, 3).map_err(|e| e.to_string())?;
        level_two = level_two.max(report.level_two_residual);
        drift = drift.max(report.norm_drift);
    }
    norm = norm.max(drift);
    Ok(Outcome::new(
        norm < CONSERVATION_TOL
            && excitation < CONSERVATION_TOL
            && spectator_exact
            && vacuum < CONSERVATION_TOL
            && level_two < CONSERVATION_TOL,
        format!(
            "norm {norm:.1e}, excitation {excitation:.1e}, spectators exact: {spectator_exact}, \
             vacuum return {vacuum:.1e}, final |2> population {level_two:.1e} (tol {CONSERVATION_TOL:.0e})"
        ),
    ))
}

fn coupling_independence() -> Result<Outcome, String> {
    let mut rng = StdRng::seed_from_u64(0xacce_0005);
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    for n in 2..=6 {
        let reference = extract_gate(&equal_couplings(n), 3).map_err(|e| e.to_string())?.gate;
        for _ in 0..6 {
            let g: Vec<f64> = (0..n).map(|_| G * rng.random_range(0.2..4.0)).collect();
            let schedule = build_cphase_schedule(n, &g, 2.0 * G, rng.random_range(0.0..1e-9)).unwrap();
            let gate = extract_gate(&schedule, 3).map_err(|e| e.to_string())?.gate;
            worst = worst.max(max_entry_diff(&gate, &reference));
            draws += 1;
        }
    }
    Ok(Outcome::new(
        worst < GATE_TOL,
        format!("{draws} rescalings over n=2..6, max gate change {worst:.2e} (tol {GATE_TOL:.0e})"),
    ))
}

fn device_numbers() -> Result<Outcome, String> {
    let start = Instant::now();
    let config = RunConfig::table1();
    let report = feasibility_report(&config.device_setup().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let g_computed = report.g.iter().map(|e| e.g_rad_s).fold(f64::INFINITY, f64::min);
    let kappa_inv = photon_lifetime(&ResonatorParams::reference());

    // Chain from the quoted coupling with tau_uw = tau_a = tau_r.
    let tau_r = PI / (2.0 * G);
    let budget = time_budget(
        3,
        &[G; 3],
        &BudgetParams {
            gamma2_inv: 3.2e-6,
            kappa_inv,
            tau_a: tau_r,
            tau_uw: tau_r,
        },
        0.1,
    )
    .map_err(|e| e.to_string())?;
    let phi = [6.0e-3, 3.2e-2, 2.6e-2];
    let z = zeta(&CrosstalkParams {
        mutual_inductance: 0.1e-18,
        loop_inductance: 240e-12,
        loop_inductance_next: 240e-12,
        phi_max: max_phi_product(phi, phi),
        g_min: G,
        rabi: PI / tau_r,
        distance: Some(5.3e-3),
    })
    .map_err(|e| e.to_string())?;
    let ms = start.elapsed().as_secs_f64() * 1e3;

    let checks = [
        rel(g_computed, 7.5e9) < 0.10,
        rel(budget.tau_r[0], 0.2e-9) < 0.10,
        rel(budget.tau_total, 2.8e-9) < 0.10,
        rel(kappa_inv, 41.7e-9) < 0.02,
        z < 1e-8,
        ms < 100.0,
    ];
    Ok(Outcome::new(
        checks.iter().all(|c| *c),
        format!(
            "g {:.3e} rad/s ({:.1}% from 7.5e9); with g = 7.5e9: tau_r {:.4} ns ({:.1}%), tau_total {:.3} ns ({:.1}%), \
             zeta {:.2e} (< 1e-8); kappa^-1 {:.2} ns ({:.2}%); {:.1} ms. \
             Info, chained from computed g: tau_total {:.3} ns, zeta {:.2e}",
            g_computed,
            100.0 * rel(g_computed, 7.5e9),
            budget.tau_r[0] * 1e9,
            100.0 * rel(budget.tau_r[0], 0.2e-9),
            budget.tau_total * 1e9,
            100.0 * rel(budget.tau_total, 2.8e-9),
            z,
            kappa_inv * 1e9,
            100.0 * rel(kappa_inv, 41.7e-9),
            ms,
            report.tau.total.value * 1e9,
            report.zeta.value,
        ),
    ))
}

fn spectrum() -> Result<Outcome, String> {
    let start = Instant::now();
    let s = solve_spectrum(&SquidParams::reference(), &SolverSettings::default()).map_err(|e| e.to_string())?;
    let shift = s.refinement.as_ref().map_or(f64::INFINITY, |r| r.max_relative_shift);
    let harmonic = SquidParams {
        beta_l: 0.0,
        ..SquidParams::reference()
    };
    let h = solve_spectrum(&harmonic, &SolverSettings::default()).map_err(|e| e.to_string())?;
    let lc = rel(h.nu_01, harmonic.lc_frequency());
    let secs = start.elapsed().as_secs_f64();

    let phis = [
        (s.phi_01.abs(), 6.0e-3),
        (s.phi_02.abs(), 3.2e-2),
        (s.phi_12.abs(), 2.6e-2),
    ];
    let pass = rel(s.nu_02, 11.4e9) < 0.05
        && rel(s.nu_12, 5.8e9) < 0.05
        && phis.iter().all(|(v, r)| rel(*v, *r) < 0.20)
        && lc < 1e-3
        && shift < 1e-3
        && secs < 10.0;
    Ok(Outcome::new(
        pass,
        format!(
            "nu02 {:.4} GHz ({:.1}%), nu12 {:.4} GHz ({:.1}%), |phi01| {:.3e} ({:.0}%), |phi02| {:.3e} ({:.0}%), \
             |phi12| {:.3e} ({:.0}%); harmonic limit {:.3}%; refinement shift {:.1e}; {:.2} s",
            s.nu_02 * 1e-9,
            100.0 * rel(s.nu_02, 11.4e9),
            s.nu_12 * 1e-9,
            100.0 * rel(s.nu_12, 5.8e9),
            phis[0].0,
            100.0 * rel(phis[0].0, phis[0].1),
            phis[1].0,
            100.0 * rel(phis[1].0, phis[1].1),
            phis[2].0,
            100.0 * rel(phis[2].0, phis[2].1),
            100.0 * lc,
            shift,
            secs
        ),
    ))
}

fn step_counts() -> Result<Outcome, String> {
    let c = step_count_comparison(3).map_err(|e| e.to_string())?;
    let mut pass = (c.phase_gate_steps, c.cnot_steps, c.conventional_steps) == (7, 9, 28);
    for n in 2..=10 {
        let cphase = equal_couplings(n).step_count();
        let cnot = build_cnot_schedule(n, &vec![G; n], 2.0 * G, 2.0 * G, 0.0).unwrap().step_count();
        pass &= cphase == 2 * n + 1 && cnot == 2 * n + 3;
        if n >= 3 {
            let c = step_count_comparison(n).map_err(|e| e.to_string())?;
            pass &= c.phase_gate_steps == 2 * n + 1 && c.cnot_steps == 2 * n + 3;
        }
    }
    Ok(Outcome::new(
        pass,
        format!(
            "n=3: ({}, {}, {}); schedules for n=2..10 have 2n+1 / 2n+3 steps",
            c.phase_gate_steps, c.cnot_steps, c.conventional_steps
        ),
    ))
}

fn cnot_and_toffoli() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (n, name) in [(2, "CNOT"), (3, "Toffoli")] {
        let g: Vec<f64> = (0..n).map(|l| G * (1.0 + 0.3 * l as f64)).collect();
        let schedule = build_cnot_schedule(n, &g, 2.0 * G, 2.0 * G, 0.0).unwrap();
        let report = extract_gate(&schedule, 3).map_err(|e| e.to_string())?;
        let check = check_against(&report.gate, &controlled_not_matrix(n), GATE_TOL).map_err(|e| e.to_string())?;
        pass &= check.pass;
        parts.push(format!("{name} {:.2e}", check.max_error));
    }
    Ok(Outcome::new(pass, format!("{} (tol {GATE_TOL:.0e})", parts.join(", "))))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("gate truth table", gate_truth_table),
        ("three-qubit reference trace", reference_trace),
        ("oracle equivalence", oracle_equivalence),
        ("conservation and unitarity", conservation),
        ("coupling independence", coupling_independence),
        ("device numbers", device_numbers),
        ("spectrum cross-check", spectrum),
        ("step counts", step_counts),
        ("CNOT and Toffoli", cnot_and_toffoli),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        if !outcome.pass {
            failed += 1;
        }
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{verdict} [{}] {name}: {}", i + 1, outcome.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
