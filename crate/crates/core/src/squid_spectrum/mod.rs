// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Level structure of a single-junction rf SQUID.
//!
//! The circuit Hamiltonian in the flux representation is
//!
//! ```text
//! H = -(hbar^2 / 2C) d^2/dPhi^2 + (Phi - Phi_x)^2 / 2L - E_J cos(2 pi Phi / Phi_0)
//! ```
//!
//! with `E_J = I_c Phi_0 / 2 pi` and the critical current taken from the
//! screening parameter as `I_c = beta_L Phi_0 / (2 pi L)`. It is discretized
//! on a uniform flux grid centred on `Phi_x` with Dirichlet walls and a
//! second-order central difference for the kinetic term, which gives a
//! symmetric tridiagonal matrix.
//!
//! Everything is SI. Reported flux matrix elements are dimensionless,
//! `<i|Phi|j> / Phi_0`, with each eigenfunction's sign fixed so its
//! largest-magnitude sample is positive.

mod tridiagonal;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use tridiagonal::SymTridiagonal;

use crate::error::{Error, Result};
use crate::units::{FLUX_QUANTUM, HBAR, PLANCK};

/// Circuit parameters of one rf SQUID.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquidParams {
    /// Junction capacitance, F.
    pub capacitance: f64,
    /// Loop inductance, H.
    pub inductance: f64,
    /// Screening parameter `2 pi L I_c / Phi_0`.
    pub beta_l: f64,
    /// Static flux bias in units of `Phi_0`.
    pub flux_bias: f64,
}

impl SquidParams {
    /// 135 fF, 240 pH, beta_L = 1.13, Phi_x = 0.4991 Phi_0.
    pub fn reference() -> Self {
        Self {
            capacitance: 135e-15,
            inductance: 240e-12,
            beta_l: 1.13,
            flux_bias: 0.4991,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.capacitance > 0.0 && self.inductance > 0.0) {
            return Err(Error::InvalidParameter(
                "SQUID capacitance and inductance must be positive".into(),
            ));
        }
        if !(self.beta_l >= 0.0 && self.beta_l.is_finite() && self.flux_bias.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta_L = {} must be non-negative and finite",
                self.beta_l
            )));
        }
        Ok(())
    }

    pub fn critical_current(&self) -> f64 {
        self.beta_l * FLUX_QUANTUM / (2.0 * PI * self.inductance)
    }

    pub fn josephson_energy(&self) -> f64 {
        self.critical_current() * FLUX_QUANTUM / (2.0 * PI)
    }

    /// `1 / (2 pi sqrt(L C))`, the level spacing when `beta_L = 0`.
    pub fn lc_frequency(&self) -> f64 {
        1.0 / (2.0 * PI * (self.inductance * self.capacitance).sqrt())
    }

    /// Potential energy (J) at flux `phi` given in units of `Phi_0`.
    pub fn potential(&self, phi: f64) -> f64 {
        let offset = (phi - self.flux_bias) * FLUX_QUANTUM;
        offset * offset / (2.0 * self.inductance) - self.josephson_energy() * (2.0 * PI * phi).cos()
    }
}

/// Grid and convergence settings for [`solve_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    /// Interior grid points.
    pub grid_points: usize,
    /// Half-width of the grid around `Phi_x`, in `Phi_0`.
    pub extent: f64,
    /// Number of levels to return (at least 3).
    pub levels: usize,
    /// Also solve with the spacing halved and report the shift.
    pub refine: bool,
    /// Largest allowed relative shift of any transition frequency under
    /// refinement before the solve counts as unconverged.
    pub tolerance: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            grid_points: 2048,
            extent: 1.0,
            levels: 3,
            refine: true,
            tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub points: usize,
    /// Flux of the first and last interior sample, `Phi_0`.
    pub flux_min: f64,
    pub flux_max: f64,
    /// Sample spacing, `Phi_0`.
    pub spacing: f64,
}

impl GridInfo {
    fn new(params: &SquidParams, points: usize, extent: f64) -> Self {
        let spacing = 2.0 * extent / (points + 1) as f64;
        Self {
            points,
            flux_min: params.flux_bias - extent + spacing,
            flux_max: params.flux_bias + extent - spacing,
            spacing,
        }
    }

    pub fn flux(&self, i: usize) -> f64 {
        self.flux_min + i as f64 * self.spacing
    }
}

/// Transition `i <-> j`: frequency and flux matrix element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub lower: usize,
    pub upper: usize,
    /// `(E_upper - E_lower) / h`, Hz.
    pub frequency_hz: f64,
    /// `<lower|Phi|upper> / Phi_0`.
    pub flux_element: f64,
}

/// Shift of the transitions when the grid spacing is halved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub fine_points: usize,
    /// Transition frequencies (0-1, 0-2, 1-2) on the fine grid, Hz.
    pub fine_frequencies_hz: [f64; 3],
    /// Largest `|nu_fine - nu_coarse| / nu_fine` over those transitions.
    pub max_relative_shift: f64,
    /// Richardson extrapolation `nu_fine + (nu_fine - nu_coarse) / 3`, Hz.
    pub extrapolated_frequencies_hz: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub params: SquidParams,
    /// Lowest levels, J, ascending.
    pub energies_j: Vec<f64>,
    /// Same levels relative to the ground state, GHz (`E / h`).
    pub energies_ghz: Vec<f64>,
    pub nu_01: f64,
    pub nu_02: f64,
    pub nu_12: f64,
    pub phi_01: f64,
    pub phi_02: f64,
    pub phi_12: f64,
    /// Dimensionless `<i|Phi|j> / Phi_0` between all returned levels.
    pub flux_matrix: Vec<Vec<f64>>,
    pub grid: GridInfo,
    pub refinement: Option<Refinement>,
    /// Whether the lowest three levels form a Lambda system, see
    /// [`is_lambda_type`].
    pub lambda_type: bool,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectrumResult {
    pub fn transitions(&self) -> [Transition; 3] {
        [
            Transition {
                lower: 0,
                upper: 1,
                frequency_hz: self.nu_01,
                flux_element: self.phi_01,
            },
            Transition {
                lower: 0,
                upper: 2,
                frequency_hz: self.nu_02,
                flux_element: self.phi_02,
            },
            Transition {
                lower: 1,
                upper: 2,
                frequency_hz: self.nu_12,
                flux_element: self.phi_12,
            },
        ]
    }

    /// Relative tunnelling suppression, see [`is_lambda_type`].
    pub fn lambda_check(&self) -> bool {
        is_lambda_type(self.phi_01, self.phi_02, self.phi_12)
    }
}

/// Both `|phi_02|` and `|phi_12|` must be at least three times `|phi_01|`:
/// the upper level couples to both qubit levels while direct `0 <-> 1`
/// coupling is suppressed.
pub fn is_lambda_type(phi_01: f64, phi_02: f64, phi_12: f64) -> bool {
    let floor = 3.0 * phi_01.abs();
    phi_02.abs() >= floor && phi_12.abs() >= floor
}

/// Discretized Hamiltonian (J) and the grid it lives on.
pub fn discretize(params: &SquidParams, points: usize, extent: f64) -> Result<(SymTridiagonal, GridInfo)> {
    params.validate()?;
    if points < 16 {
        return Err(Error::InvalidParameter(format!(
            "flux grid needs at least 16 points, got {points}"
        )));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid extent {extent} must be positive")));
    }
    let grid = GridInfo::new(params, points, extent);
    let step = grid.spacing * FLUX_QUANTUM;
    let hopping = HBAR * HBAR / (2.0 * params.capacitance * step * step);
    let diag = (0..points)
        .map(|i| 2.0 * hopping + params.potential(grid.flux(i)))
        .collect();
    let off = vec![-hopping; points - 1];
    Ok((SymTridiagonal::new(diag, off)?, grid))
}

struct RawSolve {
    energies: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    grid: GridInfo,
}

fn solve_grid(params: &SquidParams, points: usize, extent: f64, levels: usize) -> Result<RawSolve> {
    let (h, grid) = discretize(params, points, extent)?;
    let (energies, mut vectors) = h.lowest(levels)?;
    for pair in energies.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::NotConverged(format!(
                "levels not strictly ascending ({:e} J, {:e} J)",
                pair[0], pair[1]
            )));
        }
    }
    for v in &mut vectors {
        let peak = v.iter().copied().fold(0.0, |acc: f64, x| if x.abs() > acc.abs() { x } else { acc });
        if peak < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(RawSolve {
        energies,
        vectors,
        grid,
    })
}

fn transition_frequencies(energies: &[f64]) -> [f64; 3] {
    [
        (energies[1] - energies[0]) / PLANCK,
        (energies[2] - energies[0]) / PLANCK,
        (energies[2] - energies[1]) / PLANCK,
    ]
}

/// Lowest `settings.levels` levels of the SQUID with transition data for
/// the three lowest.
///
/// With `settings.refine` the problem is solved again with the spacing
/// halved; a relative shift of any transition frequency above
/// `settings.tolerance` is reported as [`Error::NotConverged`].
pub fn solve_spectrum(params: &SquidParams, settings: &SolverSettings) -> Result<SpectrumResult> {
    if settings.levels < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 levels, got {}",
            settings.levels
        )));
    }
    let coarse = solve_grid(params, settings.grid_points, settings.extent, settings.levels)?;
    let nu = transition_frequencies(&coarse.energies);

    let refinement = if settings.refine {
        // 2N + 1 interior points exactly halve the spacing on the same interval.
        let fine_points = 2 * settings.grid_points + 1;
        let fine = solve_grid(params, fine_points, settings.extent, 3)?;
        let nu_fine = transition_frequencies(&fine.energies);
        let max_relative_shift = nu
            .iter()
            .zip(&nu_fine)
            .map(|(c, f)| ((f - c) / f).abs())
            .fold(0.0, f64::max);
        if max_relative_shift > settings.tolerance {
            return Err(Error::NotConverged(format!(
                "transition frequencies moved by {:.3e} (relative) between {} and {fine_points} grid points, tolerance {:.1e}; \
                 coarse {:?} Hz, fine {:?} Hz",
                max_relative_shift, settings.grid_points, settings.tolerance, nu, nu_fine
            )));
        }
        let extrapolated = [0, 1, 2].map(|k| nu_fine[k] + (nu_fine[k] - nu[k]) / 3.0);
        Some(Refinement {
            fine_points,
            fine_frequencies_hz: nu_fine,
            max_relative_shift,
            extrapolated_frequencies_hz: extrapolated,
        })
    } else {
        None
    };

    let k = settings.levels;
    let mut flux_matrix = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            flux_matrix[i][j] = coarse.vectors[i]
                .iter()
                .zip(&coarse.vectors[j])
                .enumerate()
                .map(|(s, (a, b))| a * coarse.grid.flux(s) * b)
                .sum();
        }
    }
    let ground = coarse.energies[0];
    Ok(SpectrumResult {
        params: *params,
        energies_ghz: coarse.energies.iter().map(|e| (e - ground) / PLANCK / 1e9).collect(),
        energies_j: coarse.energies,
        nu_01: nu[0],
        nu_02: nu[1],
        nu_12: nu[2],
        phi_01: flux_matrix[0][1],
        phi_02: flux_matrix[0][2],
        phi_12: flux_matrix[1][2],
        lambda_type: is_lambda_type(flux_matrix[0][1], flux_matrix[0][2], flux_matrix[1][2]),
        flux_matrix,
        grid: coarse.grid,
        refinement,
        eigenvectors: coarse.vectors,
    })
}

/// One sample of the SQUID potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    /// Flux in `Phi_0`.
    pub flux: f64,
    /// Potential energy, J.
    pub energy_j: f64,
}

/// `points` evenly spaced samples of the potential over `[flux_min, flux_max]`
/// (units of `Phi_0`).
pub fn potential_profile(
    params: &SquidParams,
    flux_min: f64,
    flux_max: f64,
    points: usize,
) -> Result<Vec<PotentialSample>> {
    params.validate()?;
    if !(flux_max > flux_min) || points < 2 {
        return Err(Error::InvalidParameter(format!(
            "bad potential range [{flux_min}, {flux_max}] with {points} points"
        )));
    }
    let step = (flux_max - flux_min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let flux = flux_min + i as f64 * step;
            PotentialSample {
                flux,
                energy_j: params.potential(flux),
            }
        })
        .collect())
}

/// Fluxes of interior local minima, located where the forward difference
/// changes sign from negative to positive.
pub fn local_minima(profile: &[PotentialSample]) -> Vec<f64> {
    let slopes: Vec<f64> = profile
        .windows(2)
        .map(|w| w[1].energy_j - w[0].energy_j)
        .collect();
    slopes
        .windows(2)
        .enumerate()
        .filter(|(_, s)| s[0] < 0.0 && s[1] >= 0.0)
        .map(|(i, _)| profile[i + 1].flux)
        .collect()
}

/// Potential profile as `flux_phi0,energy_j,energy_ghz` CSV.
pub fn profile_csv(profile: &[PotentialSample]) -> String {
    let mut out = String::from("flux_phi0,energy_j,energy_ghz\n");
    for s in profile {
        out.push_str(&format!(
            "{:.8},{:.9e},{:.9}\n",
            s.flux,
            s.energy_j,
            s.energy_j / PLANCK / 1e9
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discretized_hamiltonian_is_exactly_symmetric() {
        let (h, _) = discretize(&SquidParams::reference(), 32, 1.0).unwrap();
        let n = h.len();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = h.diag[i];
            if i + 1 < n {
                dense[i][i + 1] = h.off[i];
                dense[i + 1][i] = h.off[i];
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(dense[i][j], dense[j][i]);
            }
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let settings = SolverSettings {
            levels: 5,
            refine: false,
            ..Default::default()
        };
        let r = solve_spectrum(&SquidParams::reference(), &settings).unwrap();
        for (i, a) in r.eigenvectors.iter().enumerate() {
            for (j, b) in r.eigenvectors.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10, "<{i}|{j}> = {dot}");
            }
        }
    }

    #[test]
    fn transition_frequencies_add_up() {
        let r = solve_spectrum(&SquidParams::reference(), &SolverSettings::default()).unwrap();
        assert!(((r.nu_01 + r.nu_12) - r.nu_02).abs() / r.nu_02 < 1e-9);
        assert!(r.energies_j.windows(2).all(|w| w[1] > w[0]));
        assert!(r.lambda_type);
    }

    #[test]
    fn harmonic_limit_matches_lc_oscillator() {
        let params = SquidParams {
            beta_l: 0.0,
            ..SquidParams::reference()
        };
        let r = solve_spectrum(&params, &SolverSettings::default()).unwrap();
        let nu = params.lc_frequency();
        assert!(((r.nu_01 - nu) / nu).abs() < 1e-3);
        assert!(((r.nu_12 - nu) / nu).abs() < 1e-3);
        assert!(r.phi_02.abs() < 1e-9);
        assert!(!r.lambda_check());
    }

    #[test]
    fn lambda_threshold_is_inclusive() {
        assert!(is_lambda_type(6.0e-3, 3.2e-2, 2.6e-2));
        assert!(!is_lambda_type(6.0e-3, 0.0, 2.6e-2));
        assert!(is_lambda_type(1.0, 3.0, 3.0));
        assert!(!is_lambda_type(1.0, 2.999, 3.0));
    }

    #[test]
    fn potential_profile_shapes() {
        let reference = SquidParams::reference();
        let profile = potential_profile(&reference, -0.5, 1.5, 20001).unwrap();
        assert_eq!(local_minima(&profile).len(), 2);

        let harmonic = SquidParams {
            beta_l: 0.0,
            ..reference
        };
        let profile = potential_profile(&harmonic, -0.5, 1.5, 20001).unwrap();
        let minima = local_minima(&profile);
        assert_eq!(minima.len(), 1);
        assert!((minima[0] - harmonic.flux_bias).abs() < 1e-4);

        let symmetric = SquidParams {
            flux_bias: 0.5,
            ..reference
        };
        for d in [0.01, 0.1, 0.37] {
            let (a, b) = (symmetric.potential(0.5 + d), symmetric.potential(0.5 - d));
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
        }
    }

    #[test]
    fn invalid_settings() {
        let p = SquidParams::reference();
        let s = SolverSettings {
            levels: 2,
            ..Default::default()
        };
        assert!(solve_spectrum(&p, &s).is_err());
        assert!(discretize(&p, 4, 1.0).is_err());
        assert!(potential_profile(&p, 1.0, 0.0, 10).is_err());
        let bad = SquidParams {
            capacitance: 0.0,
            ..p
        };
        assert!(solve_spectrum(&bad, &SolverSettings::default()).is_err());
    }

    #[test]
    fn coarse_grid_fails_convergence() {
        let settings = SolverSettings {
            grid_points: 24,
            tolerance: 1e-6,
            ..Default::default()
        };
        let err = solve_spectrum(&SquidParams::reference(), &settings).unwrap_err();
        assert!(matches!(err, Error::NotConverged(_)), "{err}");
    }
}
