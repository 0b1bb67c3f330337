// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form propagators for the two interactions the gate uses.
//!
//! Both Hamiltonians split the joint space into invariant subspaces of
//! dimension at most two, so each propagator is a set of independent 2x2
//! rotations applied in place. All rates are angular (rad/s).
//!
//! * Resonant SQUID-resonator exchange `g (a^+ |0><2| + h.c.)` rotates
//!   `{|0>|m>, |2>|m-1>}` by the angle `sqrt(m) g t`.
//! * A classical drive on the `|1> <-> |2>` transition,
//!   `(Omega/2)(e^{i phi} |1><2| + h.c.)`, rotates `{|1>, |2>}` by `Omega t / 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{SquidLevel, SystemState};

/// Amplitude above which the unrepresentable `|2>|n_max>` sector counts as
/// populated.
pub const TRUNCATION_AMPLITUDE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Resonant exchange between SQUID `squid` (1-based) and the resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JcInteraction {
    pub squid: usize,
    /// Coupling `g` in rad/s.
    pub g: f64,
    /// Interaction time in seconds.
    pub duration: f64,
}

impl JcInteraction {
    fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling g must be positive and finite, got {}",
                self.g
            )));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "interaction duration must be non-negative, got {}",
                self.duration
            )));
        }
        Ok(())
    }
}

/// Classical microwave pulse resonant with `|1> <-> |2>` of one SQUID.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrivePulse {
    pub squid: usize,
    /// Rabi frequency in rad/s.
    pub rabi: f64,
    /// Drive phase in radians.
    pub phase: f64,
    /// Pulse length in seconds.
    pub duration: f64,
}

impl DrivePulse {
    fn validate(&self) -> Result<()> {
        if !(self.rabi > 0.0 && self.rabi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Rabi frequency must be positive and finite, got {}",
                self.rabi
            )));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) || !self.phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pulse duration must be non-negative and phase finite, got t = {}, phi = {}",
                self.duration, self.phase
            )));
        }
        Ok(())
    }
}

/// Applies the resonant exchange of `op` to `state`.
///
/// `|1>` amplitudes of the addressed SQUID are never touched. Fails with
/// [`Error::Truncation`] if `|2>|n_max>` of that SQUID carries amplitude,
/// since its partner `|0>|n_max + 1>` lies outside the truncated space.
pub fn jc_evolve(state: &SystemState, op: &JcInteraction) -> Result<SystemState> {
    let space = state.space();
    space.check_squid(op.squid)?;
    op.validate()?;
    let mut out = state.clone();
    if op.duration == 0.0 {
        return Ok(out);
    }

    let stride = space.squid_stride(op.squid);
    let fock = space.fock_dim();
    let amps = out.amplitudes_mut();

    let leaked: f64 = (0..amps.len())
        .filter(|&i| space.level_at(i, op.squid) == SquidLevel::L2 && space.photon_at(i) == space.n_max)
        .map(|i| amps[i].norm_sqr())
        .sum();
    if leaked.sqrt() > TRUNCATION_AMPLITUDE {
        return Err(Error::Truncation {
            squid: op.squid,
            n_max: space.n_max,
            population: leaked,
        });
    }

    let rotations: Vec<(f64, f64)> = (0..fock)
        .map(|m| {
            let angle = (m as f64).sqrt() * op.g * op.duration;
            (angle.cos(), angle.sin())
        })
        .collect();

    for zero in 0..amps.len() {
        if space.level_at(zero, op.squid) != SquidLevel::L0 {
            continue;
        }
        let m = zero % fock;
        if m == 0 {
            continue;
        }
        // |0>|m>  <->  |2>|m-1>
        let two = zero + 2 * stride - 1;
        let (c, s) = rotations[m];
        let (a0, a2) = (amps[zero], amps[two]);
        amps[zero] = a0 * c - I * s * a2;
        amps[two] = -I * s * a0 + a2 * c;
    }
    Ok(out)
}

/// Applies the microwave rotation of `op` on `span{|1>, |2>}` of one SQUID.
pub fn drive_evolve(state: &SystemState, op: &DrivePulse) -> Result<SystemState> {
    let space = state.space();
    space.check_squid(op.squid)?;
    op.validate()?;
    let mut out = state.clone();
    if op.duration == 0.0 {
        return Ok(out);
    }
    let half = 0.5 * op.rabi * op.duration;
    let (c, s) = (half.cos(), half.sin());
    let to_two = -I * s * Complex64::from_polar(1.0, -op.phase);
    let to_one = -I * s * Complex64::from_polar(1.0, op.phase);

    let stride = space.squid_stride(op.squid);
    let amps = out.amplitudes_mut();
    for one in 0..amps.len() {
        if space.level_at(one, op.squid) != SquidLevel::L1 {
            continue;
        }
        let two = one + stride;
        let (a1, a2) = (amps[one], amps[two]);
        amps[one] = a1 * c + to_one * a2;
        amps[two] = to_two * a1 + a2 * c;
    }
    Ok(out)
}

/// Applies a 2x2 unitary on the qubit levels `span{|0>, |1>}` of one SQUID,
/// leaving `|2>` and the resonator alone. `u[row][col]` in the `(|0>, |1>)`
/// basis.
pub fn apply_qubit_unitary(
    state: &SystemState,
    squid: usize,
    u: &[[Complex64; 2]; 2],
) -> Result<SystemState> {
    let space = state.space();
    space.check_squid(squid)?;
    let mut out = state.clone();
    let stride = space.squid_stride(squid);
    let amps = out.amplitudes_mut();
    for zero in 0..amps.len() {
        if space.level_at(zero, squid) != SquidLevel::L0 {
            continue;
        }
        let one = zero + stride;
        let (a0, a1) = (amps[zero], amps[one]);
        amps[zero] = u[0][0] * a0 + u[0][1] * a1;
        amps[one] = u[1][0] * a0 + u[1][1] * a1;
    }
    Ok(out)
}

/// `<a^+ a + |2><2|_squid>`, the quantity conserved by [`jc_evolve`] on
/// that SQUID.
pub fn excitation_number(state: &SystemState, squid: usize) -> Result<f64> {
    let space = state.space();
    space.check_squid(squid)?;
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let upper = usize::from(space.level_at(i, squid) == SquidLevel::L2);
            (space.photon_at(i) + upper) as f64 * a.norm_sqr()
        })
        .sum())
}
