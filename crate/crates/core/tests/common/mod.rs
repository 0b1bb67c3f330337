// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use squid_cphase::hilbert::{HilbertSpace, SquidLevel, SystemState};

/// Random normalized state; amplitudes on `|2>_squid |n_max>` are zeroed
/// for every SQUID listed in `clear_top`.
pub fn random_state(rng: &mut impl Rng, space: HilbertSpace, clear_top: &[usize]) -> SystemState {
    let mut amps: Vec<Complex64> = (0..space.dim())
        .map(|i| {
            let top = space.photon_at(i) == space.n_max
                && clear_top
                    .iter()
                    .any(|&s| space.level_at(i, s) == SquidLevel::L2);
            if top {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }
        })
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    SystemState::from_amplitudes(space, amps).unwrap()
}

pub fn distance(a: &SystemState, b: &SystemState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn max_entry_diff(a: &ndarray::Array2<Complex64>, b: &ndarray::Array2<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
