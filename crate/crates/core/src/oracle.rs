// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense-matrix reference path used to cross-check [`crate::dynamics`].
//!
//! Hamiltonians are assembled element by element from basis labels and
//! ladder-operator matrix elements, then exponentiated by scaling and
//! squaring of a Taylor series. Nothing here shares code with the
//! closed-form propagators.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpace, SquidLevel, SystemState};
use crate::protocol::{apply_step, Schedule, StepKind, Trajectory};

const HERMITIAN_TOLERANCE: f64 = 1e-12;

fn zeros(dim: usize) -> Array2<Complex64> {
    Array2::zeros((dim, dim))
}

/// `g (a^+ |0><2|_squid + a |2><0|_squid)` on the truncated space, in rad/s.
/// The creation operator is truncated at `n_max`.
pub fn exchange_hamiltonian(space: HilbertSpace, squid: usize, g: f64) -> Result<Array2<Complex64>> {
    space.check_squid(squid)?;
    let dim = space.dim();
    let mut h = zeros(dim);
    for col in 0..dim {
        let ket = space.label_of(col)?;
        if ket.levels[squid - 1] != SquidLevel::L2 || ket.photon == space.n_max {
            continue;
        }
        // a^+ |0><2| acting on |..2..>|m> gives sqrt(m+1) |..0..>|m+1>
        let mut bra = ket.clone();
        bra.levels[squid - 1] = SquidLevel::L0;
        bra.photon += 1;
        let row = space.index_of(&bra)?;
        let element = Complex64::new(g * ((ket.photon + 1) as f64).sqrt(), 0.0);
        h[[row, col]] += element;
        h[[col, row]] += element.conj();
    }
    Ok(h)
}

/// `(rabi / 2)(e^{i phase} |1><2|_squid + h.c.)`, in rad/s.
pub fn drive_hamiltonian(
    space: HilbertSpace,
    squid: usize,
    rabi: f64,
    phase: f64,
) -> Result<Array2<Complex64>> {
    space.check_squid(squid)?;
    let dim = space.dim();
    let mut h = zeros(dim);
    for col in 0..dim {
        let ket = space.label_of(col)?;
        if ket.levels[squid - 1] != SquidLevel::L2 {
            continue;
        }
        let mut bra = ket.clone();
        bra.levels[squid - 1] = SquidLevel::L1;
        let row = space.index_of(&bra)?;
        let element = Complex64::from_polar(0.5 * rabi, phase);
        h[[row, col]] += element;
        h[[col, row]] += element.conj();
    }
    Ok(h)
}

fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn one_norm(m: &Array2<Complex64>) -> f64 {
    m.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(-i H t)` for a Hermitian `hamiltonian` given in angular-rate units.
///
/// Rejects matrices whose anti-Hermitian part exceeds `1e-12` relative to
/// the largest entry.
pub fn expm_oracle(hamiltonian: &Array2<Complex64>, t: f64) -> Result<Array2<Complex64>> {
    let (rows, cols) = hamiltonian.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian must be square, got {rows}x{cols}"
        )));
    }
    let deviation = max_abs(&(hamiltonian - &hamiltonian.t().mapv(|z| z.conj())));
    if deviation > HERMITIAN_TOLERANCE * max_abs(hamiltonian).max(1.0) {
        return Err(Error::NotHermitian(deviation));
    }

    let generator = hamiltonian.mapv(|z| z * Complex64::new(0.0, -t));
    let norm = one_norm(&generator);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = generator.mapv(|z| z / 2f64.powi(squarings));

    // Taylor series; with ||A|| <= 1/2 the 30-term remainder is far below
    // double precision.
    let mut result = Array2::<Complex64>::eye(rows);
    let mut term = Array2::<Complex64>::eye(rows);
    for k in 1..=30 {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        result += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}

/// Applies a dense operator to a state.
pub fn apply_matrix(op: &Array2<Complex64>, state: &SystemState) -> Result<SystemState> {
    let dim = state.space().dim();
    if op.dim() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!(
            "operator {:?} applied to state of dimension {dim}",
            op.dim()
        )));
    }
    let psi = ndarray::Array1::from(state.amplitudes().to_vec());
    SystemState::from_amplitudes(state.space(), op.dot(&psi).to_vec())
}

/// Runs `schedule` with every exchange and microwave step exponentiated
/// densely. Hadamard steps are ideal matrices on both paths and are
/// delegated to [`apply_step`].
pub fn oracle_trajectory(input: &SystemState, schedule: &Schedule) -> Result<Trajectory> {
    schedule.validate()?;
    let space = input.space();
    let mut current = input.clone();
    let mut after_step = Vec::with_capacity(schedule.steps.len());
    for step in &schedule.steps {
        current = match step.kind {
            StepKind::MicrowavePi { phase } => {
                let h = drive_hamiltonian(space, step.squid, schedule.rabi, phase)?;
                apply_matrix(&expm_oracle(&h, step.duration)?, &current)?
            }
            StepKind::JcHalf | StepKind::JcFull => {
                let g = schedule.couplings[step.squid - 1];
                let h = exchange_hamiltonian(space, step.squid, g)?;
                apply_matrix(&expm_oracle(&h, step.duration)?, &current)?
            }
            StepKind::Hadamard => apply_step(&current, schedule, step)?,
        };
        after_step.push(current.clone());
    }
    Ok(Trajectory {
        initial: input.clone(),
        after_step,
        step_labels: schedule.steps.iter().map(|s| s.label.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::hilbert::BasisLabel;

    fn unitarity_error(u: &Array2<Complex64>) -> f64 {
        let prod = u.dot(&u.t().mapv(|z| z.conj()));
        max_abs(&(prod - Array2::<Complex64>::eye(u.nrows())))
    }

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let u = expm_oracle(&zeros(5), 3.0).unwrap();
        assert_eq!(u, Array2::<Complex64>::eye(5));
    }

    #[test]
    fn half_exchange_sends_two_vacuum_to_minus_i_one_photon() {
        // n_max = 1 here is below the simulator's minimum, so build the space directly.
        let space = HilbertSpace { n_qubits: 1, n_max: 1 };
        let g = 7.5e9;
        let h = exchange_hamiltonian(space, 1, g).unwrap();
        let u = expm_oracle(&h, FRAC_PI_2 / g).unwrap();
        let from = space.index_of(&"2|0".parse::<BasisLabel>().unwrap()).unwrap();
        let to = space.index_of(&"0|1".parse::<BasisLabel>().unwrap()).unwrap();
        assert!((u[[to, from]] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(u[[from, from]].norm() < 1e-12);
    }

    #[test]
    fn random_hermitian_gives_unitary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for dim in [2usize, 5, 12] {
            let mut h = zeros(dim);
            for r in 0..dim {
                for c in r..dim {
                    let z = Complex64::new(rng.random_range(-2.0..2.0), if r == c { 0.0 } else { rng.random_range(-2.0..2.0) });
                    h[[r, c]] = z;
                    h[[c, r]] = z.conj();
                }
            }
            let u = expm_oracle(&h, rng.random_range(0.0..5.0)).unwrap();
            assert!(unitarity_error(&u) < 1e-10);
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut h = zeros(2);
        h[[0, 1]] = Complex64::new(1.0, 0.0);
        assert!(matches!(expm_oracle(&h, 1.0), Err(Error::NotHermitian(_))));
        assert!(expm_oracle(&Array2::zeros((2, 3)), 1.0).is_err());
    }

    #[test]
    fn builders_are_hermitian() {
        let space = HilbertSpace::new(2, 3).unwrap();
        for h in [
            exchange_hamiltonian(space, 2, 1.3).unwrap(),
            drive_hamiltonian(space, 1, 0.8, 0.4).unwrap(),
        ] {
            assert_eq!(h, h.t().mapv(|z| z.conj()));
        }
    }
}
