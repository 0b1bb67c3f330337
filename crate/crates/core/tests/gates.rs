// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use squid_cphase::hilbert::{BasisLabel, HilbertSpace, SystemState};
use squid_cphase::protocol::{
    build_cnot_schedule, build_cphase_schedule, extract_gate, run_schedule, step_count_comparison, Schedule,
};
use squid_cphase::verify::{
    check_against, check_report, controlled_not_matrix, controlled_phase_matrix, vacuum_return,
};

use common::max_entry_diff;

const G: f64 = 7.5e9;

fn equal(n: usize) -> Schedule {
    build_cphase_schedule(n, &vec![G; n], 2.0 * G, 0.0).unwrap()
}

#[test]
fn controlled_phase_for_two_to_six_qubits() {
    for n in 2..=6 {
        let report = extract_gate(&equal(n), 3).unwrap();
        let check = check_report(&report).unwrap();
        assert!(check.pass, "n = {n}: max error {:e}", check.max_error);
        assert!(report.vacuum_return < 1e-12);
        assert!(report.level_two_residual < 1e-12);
        assert!(report.norm_drift < 1e-12);
        assert_eq!(report.step_count, 2 * n + 1);
    }
}

#[test]
fn gate_ignores_per_squid_couplings() {
    let mut rng = StdRng::seed_from_u64(42);
    for n in 2..=4 {
        let reference = extract_gate(&equal(n), 3).unwrap().gate;
        for _ in 0..5 {
            let g: Vec<f64> = (0..n).map(|_| G * rng.random_range(0.3..3.0)).collect();
            let schedule = build_cphase_schedule(n, &g, 2.0 * G, rng.random_range(0.0..1e-9)).unwrap();
            let gate = extract_gate(&schedule, 3).unwrap().gate;
            assert!(max_entry_diff(&gate, &reference) < 1e-10, "n = {n}, g = {g:?}");
        }
    }
}

#[test]
fn photon_cutoff_does_not_change_the_gate() {
    let low = extract_gate(&equal(3), 2).unwrap().gate;
    let high = extract_gate(&equal(3), 5).unwrap().gate;
    assert!(max_entry_diff(&low, &high) < 1e-12);
}

#[test]
fn cnot_and_toffoli() {
    for (n, target) in [(2, controlled_not_matrix(2)), (3, controlled_not_matrix(3))] {
        let s = build_cnot_schedule(n, &vec![G; n], 2.0 * G, 2.0 * G, 0.0).unwrap();
        assert_eq!(s.step_count(), 2 * n + 3);
        let report = extract_gate(&s, 3).unwrap();
        let check = check_against(&report.gate, &target, 1e-10).unwrap();
        assert!(check.pass, "n = {n}: {:e}", check.max_error);
        assert!(check_report(&report).unwrap().pass);
    }
}

#[test]
fn every_basis_input_returns_to_vacuum() {
    let schedule = equal(3);
    let space = HilbertSpace::new(3, 3).unwrap();
    for bits in 0..8 {
        let psi = SystemState::basis_state(space, &BasisLabel::from_bits(bits, 3)).unwrap();
        let traj = run_schedule(&psi, &schedule).unwrap();
        assert!(vacuum_return(&traj) < 1e-12);
        let sign = if bits == 7 { -1.0 } else { 1.0 };
        let amp = traj.final_state().amplitude(&BasisLabel::from_bits(bits, 3)).unwrap();
        assert!((amp.re - sign).abs() < 1e-12 && amp.im.abs() < 1e-12);
    }
}

#[test]
fn broken_target_exchange_is_caught() {
    let mut schedule = equal(3);
    schedule.steps[3].duration *= 0.5;
    let report = extract_gate(&schedule, 3).unwrap();
    assert!(!check_report(&report).unwrap().pass);
    assert!(report.fidelity < 1.0 - 1e-3);
    assert!(check_against(&report.gate, &controlled_phase_matrix(3), 1e-10).unwrap().max_error > 0.1);
}

#[test]
fn step_counts() {
    let c = step_count_comparison(3).unwrap();
    assert_eq!((c.phase_gate_steps, c.cnot_steps, c.conventional_steps), (7, 9, 28));
    for n in 3..10 {
        let c = step_count_comparison(n).unwrap();
        assert_eq!(c.phase_gate_steps, 2 * n + 1);
        assert_eq!(c.cnot_steps, 2 * n + 3);
    }
    assert!(step_count_comparison(2).is_err());
}
