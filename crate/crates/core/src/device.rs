// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Device-level estimates: SQUID-resonator coupling, drive strength, photon
//! lifetime, gate time budget and direct SQUID-SQUID crosstalk.
//!
//! Coupling of a SQUID at position `x` along a standing-wave resonator:
//!
//! ```text
//! hbar g = (M_sr / L) * sqrt(E_ph / (L_0 l)) * <0|Phi|2> * sin(2 pi x / lambda)
//! ```
//!
//! The photon energy quantum `E_ph` is `h nu_r` by default
//! ([`EnergyQuantum::PlanckNu`]); `hbar nu_r` is available as an alternative
//! reading of the same expression and is always reported alongside.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{FLUX_QUANTUM, HBAR, PLANCK};

/// Which energy quantum multiplies `nu_r` inside the coupling formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyQuantum {
    /// `h * nu_r` with `nu_r` the cyclic mode frequency.
    #[default]
    PlanckNu,
    /// `hbar * nu_r`.
    HbarNu,
}

impl EnergyQuantum {
    pub fn photon_energy(self, frequency_hz: f64) -> f64 {
        match self {
            EnergyQuantum::PlanckNu => PLANCK * frequency_hz,
            EnergyQuantum::HbarNu => HBAR * frequency_hz,
        }
    }

    pub fn other(self) -> Self {
        match self {
            EnergyQuantum::PlanckNu => EnergyQuantum::HbarNu,
            EnergyQuantum::HbarNu => EnergyQuantum::PlanckNu,
        }
    }
}

/// Coplanar-waveguide cross-section. Carried through to reports only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwGeometry {
    /// Gap, m.
    pub gap: f64,
    /// Centre conductor width, m.
    pub width: f64,
    /// Effective dielectric constant.
    pub eps_eff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorParams {
    /// Mode frequency, Hz.
    pub frequency_hz: f64,
    /// Mode wavelength, m.
    pub wavelength: f64,
    /// Resonator length, m.
    pub length: f64,
    /// Inductance per unit length, H/m.
    pub inductance_per_length: f64,
    /// Loaded quality factor.
    pub quality_factor: f64,
    pub geometry: Option<CpwGeometry>,
}

impl ResonatorParams {
    /// 11.4 GHz, lambda = 10.5 mm, l = 1.5 lambda, L_0 = 0.65 pH/um, Q = 3000.
    pub fn reference() -> Self {
        Self {
            frequency_hz: 11.4e9,
            wavelength: 10.5e-3,
            length: 1.5 * 10.5e-3,
            inductance_per_length: 0.65e-6,
            quality_factor: 3e3,
            geometry: Some(CpwGeometry {
                gap: 45e-6,
                width: 20e-6,
                eps_eff: 6.3,
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("frequency", self.frequency_hz),
            ("wavelength", self.wavelength),
            ("length", self.length),
            ("inductance per length", self.inductance_per_length),
            ("quality factor", self.quality_factor),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "resonator {name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Positions of the magnetic-field antinodes, `lambda/4 + k lambda/2`,
    /// that fit inside the resonator.
    pub fn antinodes(&self) -> Vec<f64> {
        (0..)
            .map(|k| self.wavelength * (0.25 + 0.5 * k as f64))
            .take_while(|x| *x <= self.length * (1.0 + 1e-12))
            .collect()
    }
}

/// Where and how strongly one SQUID couples to the resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingPlacement {
    /// SQUID-resonator mutual inductance, H.
    pub mutual_inductance: f64,
    /// SQUID centre along the resonator, m.
    pub position: f64,
    /// `<0|Phi|2> / Phi_0`.
    pub phi_02: f64,
    /// SQUID loop inductance, H.
    pub loop_inductance: f64,
}

/// Magnitude of the coupling `g` (rad/s). The sign of the mode profile is a
/// phase convention on `|2>` and does not enter the gate.
pub fn coupling_g(
    res: &ResonatorParams,
    place: &CouplingPlacement,
    quantum: EnergyQuantum,
) -> Result<f64> {
    res.validate()?;
    if !(place.mutual_inductance > 0.0 && place.loop_inductance > 0.0) {
        return Err(Error::InvalidParameter(
            "mutual and loop inductances must be positive".into(),
        ));
    }
    if !(0.0..=res.length).contains(&place.position) {
        return Err(Error::InvalidParameter(format!(
            "SQUID position {:.4e} m lies outside the resonator [0, {:.4e}] m",
            place.position, res.length
        )));
    }
    let zero_point_current =
        (quantum.photon_energy(res.frequency_hz) / (res.inductance_per_length * res.length)).sqrt();
    let profile = (2.0 * PI * place.position / res.wavelength).sin();
    let energy = place.mutual_inductance / place.loop_inductance
        * zero_point_current
        * place.phi_02
        * FLUX_QUANTUM
        * profile;
    Ok((energy / HBAR).abs())
}

/// Rabi frequency (rad/s) of a microwave flux of amplitude `flux_amplitude`
/// (Wb) through the loop, on a transition with element `phi_12`.
pub fn rabi_from_flux(loop_inductance: f64, phi_12: f64, flux_amplitude: f64) -> f64 {
    phi_12 * FLUX_QUANTUM * flux_amplitude / (loop_inductance * HBAR)
}

/// Inverse of [`rabi_from_flux`]: flux amplitude (Wb) giving `rabi`.
pub fn flux_for_rabi(loop_inductance: f64, phi_12: f64, rabi: f64) -> f64 {
    rabi * loop_inductance * HBAR / (phi_12 * FLUX_QUANTUM)
}

/// `kappa^-1 = Q / (2 pi nu_r)`, s.
pub fn photon_lifetime(res: &ResonatorParams) -> f64 {
    res.quality_factor / (2.0 * PI * res.frequency_hz)
}

/// Inputs to the time budget, all in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetParams {
    /// Relaxation time of level `|2>`.
    pub gamma2_inv: f64,
    /// Photon lifetime.
    pub kappa_inv: f64,
    /// Time to retune one SQUID in or out of resonance.
    pub tau_a: f64,
    /// Microwave pi-pulse length.
    pub tau_uw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeBudget {
    /// `pi / (2 g_l)` per SQUID, s.
    pub tau_r: Vec<f64>,
    /// Schedule wall-clock: two half exchanges per control, one full
    /// exchange on the target, `2n` retunings and two microwave pulses.
    pub tau_total: f64,
    /// `2n (max tau_r + tau_a) + 2 tau_uw`; equals `tau_total` for equal couplings.
    pub tau_total_closed_form: f64,
    /// `tau_total / gamma2_inv`.
    pub gamma2_margin: f64,
    /// `tau_total / kappa_inv`.
    pub kappa_margin: f64,
    pub margin_threshold: f64,
    pub pass: bool,
}

pub fn time_budget(
    n: usize,
    couplings: &[f64],
    budget: &BudgetParams,
    margin_threshold: f64,
) -> Result<TimeBudget> {
    if n < 2 || couplings.len() != n {
        return Err(Error::InvalidParameter(format!(
            "time budget needs n >= 2 and one coupling per SQUID (n = {n}, {} couplings)",
            couplings.len()
        )));
    }
    if let Some(g) = couplings.iter().find(|g| !(**g > 0.0)) {
        return Err(Error::InvalidParameter(format!("coupling {g} is not positive")));
    }
    let tau_r: Vec<f64> = couplings.iter().map(|g| PI / (2.0 * g)).collect();
    let exchange: f64 = 2.0 * tau_r.iter().sum::<f64>();
    let tau_total = exchange + 2.0 * n as f64 * budget.tau_a + 2.0 * budget.tau_uw;
    let slowest = tau_r.iter().copied().fold(0.0, f64::max);
    let tau_total_closed_form = 2.0 * n as f64 * (slowest + budget.tau_a) + 2.0 * budget.tau_uw;
    let gamma2_margin = tau_total / budget.gamma2_inv;
    let kappa_margin = tau_total / budget.kappa_inv;
    Ok(TimeBudget {
        tau_r,
        tau_total,
        tau_total_closed_form,
        gamma2_margin,
        kappa_margin,
        margin_threshold,
        pass: gamma2_margin < margin_threshold && kappa_margin < margin_threshold,
    })
}

/// Inputs of the direct-coupling figure of merit between SQUIDs `l`, `l+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrosstalkParams {
    /// Mutual inductance between neighbouring SQUIDs, H.
    pub mutual_inductance: f64,
    /// Loop inductances of the two SQUIDs, H.
    pub loop_inductance: f64,
    pub loop_inductance_next: f64,
    /// `max_ij phi_ij^(l) phi_ij^(l+1)` over `ij in {01, 02, 12}`.
    pub phi_max: f64,
    /// Smallest SQUID-resonator coupling, rad/s.
    pub g_min: f64,
    /// Microwave Rabi frequency, rad/s.
    pub rabi: f64,
    /// Neighbour spacing, m. Documentation only.
    pub distance: Option<f64>,
}

/// Largest product of corresponding flux elements of two SQUIDs.
pub fn max_phi_product(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x * y).abs())
        .fold(0.0, f64::max)
}

/// Ratio of the direct SQUID-SQUID interaction energy to the weakest
/// intended coupling, `min(hbar g, hbar Omega)`.
pub fn zeta(cross: &CrosstalkParams) -> Result<f64> {
    let weakest = HBAR * cross.g_min.min(cross.rabi);
    if !(weakest > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "crosstalk needs positive g_min and Rabi frequency (g_min = {}, rabi = {})",
            cross.g_min, cross.rabi
        )));
    }
    if !(cross.loop_inductance > 0.0 && cross.loop_inductance_next > 0.0) {
        return Err(Error::InvalidParameter("loop inductances must be positive".into()));
    }
    if cross.mutual_inductance < 0.0 {
        return Err(Error::InvalidParameter("mutual inductance must be non-negative".into()));
    }
    let interaction = cross.mutual_inductance / (cross.loop_inductance * cross.loop_inductance_next)
        * cross.phi_max
        * FLUX_QUANTUM
        * FLUX_QUANTUM;
    Ok(interaction / weakest)
}

/// A reported number with its unit and the expression that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure {
    pub value: f64,
    pub unit: String,
    pub formula: String,
}

impl Figure {
    fn new(value: f64, unit: &str, formula: &str) -> Self {
        Self {
            value,
            unit: unit.to_string(),
            formula: formula.to_string(),
        }
    }
}

/// How a budget time is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeChoice {
    Seconds(f64),
    /// Equal to the longest `pi / (2 g_l)`.
    MatchTauR,
}

impl TimeChoice {
    fn resolve(self, tau_r: f64) -> f64 {
        match self {
            TimeChoice::Seconds(s) => s,
            TimeChoice::MatchTauR => tau_r,
        }
    }
}

/// One SQUID as seen by the feasibility estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquidDevice {
    pub loop_inductance: f64,
    /// `(phi_01, phi_02, phi_12)`.
    pub phi: [f64; 3],
    /// Relaxation time of `|2>`, s.
    pub gamma2_inv: f64,
    pub mutual_inductance: f64,
    pub position: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub zeta: f64,
    pub margin: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            zeta: 1e-3,
            margin: 1e-1,
        }
    }
}

/// Everything [`feasibility_report`] needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceSetup {
    pub squids: Vec<SquidDevice>,
    pub resonator: ResonatorParams,
    pub tau_a: TimeChoice,
    pub tau_uw: TimeChoice,
    /// Neighbour mutual inductance, H.
    pub crosstalk_mutual: f64,
    pub neighbour_distance: Option<f64>,
    /// Couplings to budget with instead of the computed ones, rad/s.
    pub coupling_override: Option<Vec<f64>>,
    pub energy_quantum: EnergyQuantum,
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingEntry {
    pub squid: usize,
    pub position_m: f64,
    /// `sin(2 pi x / lambda)`.
    pub mode_profile: f64,
    pub g_rad_s: f64,
    /// Same coupling under the other energy-quantum convention.
    pub g_alternative_rad_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauSection {
    pub tau_r_s: Vec<f64>,
    pub tau_a: Figure,
    pub tau_uw: Figure,
    pub total: Figure,
    pub closed_form_total: Figure,
    pub gamma2_inv: Figure,
    pub gamma2_margin: f64,
    pub kappa_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionFlags {
    pub energy_quantum: EnergyQuantum,
    pub step_counting: String,
    pub hadamard: String,
    pub total_time: String,
    pub zeta_threshold: f64,
    pub margin_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub n: usize,
    pub g: Vec<CouplingEntry>,
    /// Couplings actually used for the budget and crosstalk, rad/s.
    pub g_used_rad_s: Vec<f64>,
    pub tau: TauSection,
    pub kappa_inv: Figure,
    pub rabi: Figure,
    /// Microwave flux through the loop needed for `rabi`.
    pub drive_flux: Figure,
    pub zeta: Figure,
    pub verdict: Verdict,
    pub convention_flags: ConventionFlags,
}

pub fn feasibility_report(setup: &DeviceSetup) -> Result<FeasibilityReport> {
    let n = setup.squids.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "feasibility needs at least 2 SQUIDs, got {n}"
        )));
    }
    let res = &setup.resonator;
    res.validate()?;

    let mut g = Vec::with_capacity(n);
    for (k, sq) in setup.squids.iter().enumerate() {
        let place = CouplingPlacement {
            mutual_inductance: sq.mutual_inductance,
            position: sq.position,
            phi_02: sq.phi[1],
            loop_inductance: sq.loop_inductance,
        };
        g.push(CouplingEntry {
            squid: k + 1,
            position_m: sq.position,
            mode_profile: (2.0 * PI * sq.position / res.wavelength).sin(),
            g_rad_s: coupling_g(res, &place, setup.energy_quantum)?,
            g_alternative_rad_s: coupling_g(res, &place, setup.energy_quantum.other())?,
        });
    }
    let g_used: Vec<f64> = match &setup.coupling_override {
        Some(list) if list.len() != n => {
            return Err(Error::Config(format!(
                "{} coupling overrides for {n} SQUIDs",
                list.len()
            )))
        }
        Some(list) => list.clone(),
        None => g.iter().map(|e| e.g_rad_s).collect(),
    };
    if let Some(entry) = g_used.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "SQUID {} has zero coupling (sits on a field node?)",
            entry + 1
        )));
    }

    let slowest = g_used.iter().map(|g| PI / (2.0 * g)).fold(0.0, f64::max);
    let tau_a = setup.tau_a.resolve(slowest);
    let tau_uw = setup.tau_uw.resolve(slowest);
    if !(tau_uw > 0.0) || tau_a < 0.0 {
        return Err(Error::InvalidParameter(
            "microwave pulse time must be positive and retune time non-negative".into(),
        ));
    }
    let kappa_inv = photon_lifetime(res);
    let gamma2_inv = setup
        .squids
        .iter()
        .map(|s| s.gamma2_inv)
        .fold(f64::INFINITY, f64::min);
    let budget = time_budget(
        n,
        &g_used,
        &BudgetParams {
            gamma2_inv,
            kappa_inv,
            tau_a,
            tau_uw,
        },
        setup.thresholds.margin,
    )?;

    let rabi = PI / tau_uw;
    let first = &setup.squids[0];
    let drive_flux = flux_for_rabi(first.loop_inductance, first.phi[2], rabi);

    let g_min = g_used.iter().copied().fold(f64::INFINITY, f64::min);
    let zeta_value = setup
        .squids
        .windows(2)
        .map(|pair| {
            zeta(&CrosstalkParams {
                mutual_inductance: setup.crosstalk_mutual,
                loop_inductance: pair[0].loop_inductance,
                loop_inductance_next: pair[1].loop_inductance,
                phi_max: max_phi_product(pair[0].phi, pair[1].phi),
                g_min,
                rabi,
                distance: setup.neighbour_distance,
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let mut failures = Vec::new();
    if budget.gamma2_margin >= setup.thresholds.margin {
        failures.push(format!(
            "tau / gamma2^-1 = {:.3e} is not below {:.1e}",
            budget.gamma2_margin, setup.thresholds.margin
        ));
    }
    if budget.kappa_margin >= setup.thresholds.margin {
        failures.push(format!(
            "tau / kappa^-1 = {:.3e} is not below {:.1e}",
            budget.kappa_margin, setup.thresholds.margin
        ));
    }
    if zeta_value >= setup.thresholds.zeta {
        failures.push(format!(
            "zeta = {:.3e} is not below {:.1e}",
            zeta_value, setup.thresholds.zeta
        ));
    }

    Ok(FeasibilityReport {
        n,
        g,
        g_used_rad_s: g_used,
        tau: TauSection {
            tau_r_s: budget.tau_r.clone(),
            tau_a: Figure::new(tau_a, "s", "retune time"),
            tau_uw: Figure::new(tau_uw, "s", "microwave pi pulse, pi / Omega_12"),
            total: Figure::new(
                budget.tau_total,
                "s",
                "sum of schedule exchanges (2 tau_r,l per control, 2 tau_r,n on target) + 2n tau_a + 2 tau_uw",
            ),
            closed_form_total: Figure::new(
                budget.tau_total_closed_form,
                "s",
                "2n (max tau_r + tau_a) + 2 tau_uw",
            ),
            gamma2_inv: Figure::new(gamma2_inv, "s", "shortest |2> relaxation time over SQUIDs"),
            gamma2_margin: budget.gamma2_margin,
            kappa_margin: budget.kappa_margin,
        },
        kappa_inv: Figure::new(kappa_inv, "s", "Q / (2 pi nu_r)"),
        rabi: Figure::new(rabi, "rad/s", "pi / tau_uw"),
        drive_flux: Figure::new(
            drive_flux,
            "Wb",
            "Omega_12 L hbar / (phi_12 Phi_0), SQUID 1",
        ),
        zeta: Figure::new(
            zeta_value,
            "1",
            "M max(phi_ij phi_ij') Phi_0^2 / (L_l L_l+1 min(hbar g, hbar Omega_12)), worst neighbour pair",
        ),
        verdict: Verdict {
            pass: failures.is_empty(),
            failures,
        },
        convention_flags: ConventionFlags {
            energy_quantum: setup.energy_quantum,
            step_counting: "one schedule entry per step; the target's full exchange counts once; retuning gaps are not steps".into(),
            hadamard: "ideal Hadamard matrix on the target's qubit levels".into(),
            total_time: "schedule sum with per-SQUID tau_r".into(),
            zeta_threshold: setup.thresholds.zeta,
            margin_threshold: setup.thresholds.margin,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn antinode_placement() -> CouplingPlacement {
        CouplingPlacement {
            mutual_inductance: 100e-12,
            position: 10.5e-3 / 4.0,
            phi_02: 3.2e-2,
            loop_inductance: 240e-12,
        }
    }

    #[test]
    fn node_gives_zero_coupling() {
        let res = ResonatorParams::reference();
        let place = CouplingPlacement {
            position: res.wavelength / 2.0,
            ..antinode_placement()
        };
        assert!(coupling_g(&res, &place, EnergyQuantum::PlanckNu).unwrap() < 1e-6);
    }

    #[test]
    fn coupling_scales_as_expected() {
        let res = ResonatorParams::reference();
        let place = antinode_placement();
        let g = coupling_g(&res, &place, EnergyQuantum::PlanckNu).unwrap();
        let doubled = CouplingPlacement {
            mutual_inductance: 2.0 * place.mutual_inductance,
            ..place
        };
        let g2 = coupling_g(&res, &doubled, EnergyQuantum::PlanckNu).unwrap();
        assert!((g2 / g - 2.0).abs() < 1e-12);

        let heavier = ResonatorParams {
            inductance_per_length: 4.0 * res.inductance_per_length,
            ..res
        };
        let g4 = coupling_g(&heavier, &place, EnergyQuantum::PlanckNu).unwrap();
        assert!((g / g4 - 2.0).abs() < 1e-12);

        let hbar = coupling_g(&res, &place, EnergyQuantum::HbarNu).unwrap();
        assert!((g / hbar - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn coupling_rejects_positions_off_the_resonator() {
        let res = ResonatorParams::reference();
        let place = CouplingPlacement {
            position: 2.0 * res.length,
            ..antinode_placement()
        };
        assert!(coupling_g(&res, &place, EnergyQuantum::PlanckNu).is_err());
        let place = CouplingPlacement {
            position: -1e-3,
            ..antinode_placement()
        };
        assert!(coupling_g(&res, &place, EnergyQuantum::PlanckNu).is_err());
    }

    #[test]
    fn rabi_is_linear_in_flux() {
        assert_eq!(rabi_from_flux(240e-12, 2.6e-2, 0.0), 0.0);
        let a = rabi_from_flux(240e-12, 2.6e-2, 1e-18);
        let b = rabi_from_flux(240e-12, 2.6e-2, 3e-18);
        assert!((b / a - 3.0).abs() < 1e-12);
        let flux = flux_for_rabi(240e-12, 2.6e-2, 1.5e10);
        assert!((rabi_from_flux(240e-12, 2.6e-2, flux) - 1.5e10).abs() < 1e-3);
    }

    #[test]
    fn photon_lifetime_scaling_and_units() {
        let res = ResonatorParams::reference();
        let doubled = ResonatorParams {
            quality_factor: 2.0 * res.quality_factor,
            ..res
        };
        assert!((photon_lifetime(&doubled) / photon_lifetime(&res) - 2.0).abs() < 1e-12);
        let unit = ResonatorParams {
            quality_factor: 2.0 * PI * res.frequency_hz,
            ..res
        };
        assert!((photon_lifetime(&unit) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_degenerate_and_equal_coupling_cases() {
        let g = 7.5e9;
        let tau_r = PI / (2.0 * g);
        let zero = BudgetParams {
            gamma2_inv: 1.0,
            kappa_inv: 1.0,
            tau_a: 0.0,
            tau_uw: 0.0,
        };
        let b = time_budget(3, &[g; 3], &zero, 0.1).unwrap();
        assert!((b.tau_total - 6.0 * tau_r).abs() < 1e-24);
        assert!((b.tau_total - b.tau_total_closed_form).abs() < 1e-24);

        let uneven = time_budget(3, &[g, 0.5 * g, g], &zero, 0.1).unwrap();
        assert!(uneven.tau_total < uneven.tau_total_closed_form);
        assert!(time_budget(1, &[g], &zero, 0.1).is_err());
        assert!(time_budget(3, &[g, g], &zero, 0.1).is_err());
    }

    #[test]
    fn zeta_cases() {
        let base = CrosstalkParams {
            mutual_inductance: 0.1e-18,
            loop_inductance: 240e-12,
            loop_inductance_next: 240e-12,
            phi_max: max_phi_product([6.0e-3, 3.2e-2, 2.6e-2], [6.0e-3, 3.2e-2, 2.6e-2]),
            g_min: 7.5e9,
            rabi: 1.5e10,
            distance: Some(5.3e-3),
        };
        let z = zeta(&base).unwrap();
        let z3 = zeta(&CrosstalkParams {
            mutual_inductance: 3.0 * base.mutual_inductance,
            ..base
        })
        .unwrap();
        assert!((z3 / z - 3.0).abs() < 1e-12);
        assert_eq!(
            zeta(&CrosstalkParams {
                mutual_inductance: 0.0,
                ..base
            })
            .unwrap(),
            0.0
        );
        assert!(zeta(&CrosstalkParams { g_min: 0.0, ..base }).is_err());
    }

    #[test]
    fn antinodes_of_reference_resonator() {
        let nodes = ResonatorParams::reference().antinodes();
        assert_eq!(nodes.len(), 3);
        assert!((nodes[1] - nodes[0] - 5.25e-3).abs() < 1e-12);
    }
}
