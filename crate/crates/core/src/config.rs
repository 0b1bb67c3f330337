// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: one JSON file, physical quantities as unit strings.
//!
//! Unknown keys are rejected. Device fields are optional at parse time so
//! that simulations can run from a partial file; [`RunConfig::device_setup`]
//! reports every missing field at once.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::device::{
    coupling_g, CouplingPlacement, CpwGeometry, DeviceSetup, EnergyQuantum, ResonatorParams,
    SquidDevice, Thresholds, TimeChoice,
};
use crate::error::{Error, Result};
use crate::protocol::{build_cnot_schedule, build_cphase_schedule, Schedule, StepKind, TargetGate};
use crate::squid_spectrum::{solve_spectrum, SolverSettings, SquidParams};
use crate::units::{
    AngularRate, Capacitance, Frequency, Inductance, InductancePerLength, Length, Quantity,
    Resistance, Time,
};

const TABLE1: &str = include_str!("../data/table1.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FromDevice {
    #[serde(rename = "from-device")]
    FromDevice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchTauR {
    #[serde(rename = "match-tau-r")]
    MatchTauR,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CouplingSpec {
    FromDevice(FromDevice),
    List(Vec<Quantity<AngularRate>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateSpec {
    /// Pi pulse as long as the slowest `pi / (2 g)`.
    MatchTauR(MatchTauR),
    Value(Quantity<AngularRate>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeSpec {
    MatchTauR(MatchTauR),
    Value(Quantity<Time>),
}

impl TimeSpec {
    fn choice(self) -> TimeChoice {
        match self {
            TimeSpec::MatchTauR(_) => TimeChoice::MatchTauR,
            TimeSpec::Value(q) => TimeChoice::Seconds(q.value()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixElementSource {
    /// Use the `phi_*` values written in the config.
    #[default]
    Table,
    /// Solve the SQUID Hamiltonian.
    Spectrum,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquidConfig {
    pub capacitance: Option<Quantity<Capacitance>>,
    pub inductance: Option<Quantity<Inductance>>,
    pub beta_l: Option<f64>,
    /// Static bias flux in units of the flux quantum.
    pub flux_bias_phi0: Option<f64>,
    pub resistance: Option<Quantity<Resistance>>,
    pub loop_width: Option<Quantity<Length>>,
    pub loop_length: Option<Quantity<Length>>,
    pub gamma2_inv: Option<Quantity<Time>>,
    pub gamma1_inv: Option<Quantity<Time>>,
    pub phi_01: Option<f64>,
    pub phi_02: Option<f64>,
    pub phi_12: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorConfig {
    pub frequency: Option<Quantity<Frequency>>,
    pub wavelength: Option<Quantity<Length>>,
    pub length_wavelengths: Option<f64>,
    pub inductance_per_length: Option<Quantity<InductancePerLength>>,
    pub quality_factor: Option<f64>,
    pub gap: Option<Quantity<Length>>,
    pub width: Option<Quantity<Length>>,
    pub eps_eff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Antinodes {
    #[serde(rename = "antinodes")]
    Antinodes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PositionSpec {
    /// SQUID `l` at the `l`-th field antinode.
    Antinodes(Antinodes),
    List(Vec<Quantity<Length>>),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub mutual_inductance: Option<Quantity<Inductance>>,
    pub positions: Option<PositionSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosstalkConfig {
    pub mutual_inductance: Option<Quantity<Inductance>>,
    pub distance: Option<Quantity<Length>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub tau_a: Option<TimeSpec>,
    pub tau_uw: Option<TimeSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    #[serde(default)]
    pub squid: SquidConfig,
    #[serde(default)]
    pub resonator: ResonatorConfig,
    #[serde(default)]
    pub coupling: CouplingConfig,
    #[serde(default)]
    pub crosstalk: CrosstalkConfig,
    #[serde(default)]
    pub budget: BudgetConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Conventions {
    pub energy_quantum: EnergyQuantum,
    pub zeta_threshold: f64,
    pub margin_threshold: f64,
}

impl Default for Conventions {
    fn default() -> Self {
        let t = Thresholds::default();
        Self {
            energy_quantum: EnergyQuantum::default(),
            zeta_threshold: t.zeta,
            margin_threshold: t.margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
}

fn default_n() -> usize {
    3
}

fn default_n_max() -> usize {
    crate::hilbert::DEFAULT_N_MAX
}

fn default_gate() -> TargetGate {
    TargetGate::ControlledPhase
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_gate")]
    pub gate: TargetGate,
    pub couplings: CouplingSpec,
    pub rabi: RateSpec,
    pub retune_time: TimeSpec,
    /// Multiplies the target's full exchange; `1` is the correct gate.
    #[serde(default = "default_scale")]
    pub target_scale: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub matrix_elements: MatrixElementSource,
    #[serde(default)]
    pub spectrum: SolverSettings,
    #[serde(default)]
    pub device: DeviceConfig,
    #[serde(default)]
    pub conventions: Conventions,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Collects dotted paths of absent fields.
struct Missing(Vec<String>);

impl Missing {
    fn take<T: Copy>(&mut self, value: Option<T>, path: &str) -> Option<T> {
        if value.is_none() {
            self.0.push(path.to_string());
        }
        value
    }

    fn finish(self) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "incomplete device configuration, missing: {}",
                self.0.join(", ")
            )))
        }
    }
}

impl RunConfig {
    /// The bundled reference parameter set.
    pub fn table1() -> Self {
        Self::from_json(TABLE1).expect("bundled table1.json parses")
    }

    pub fn table1_json() -> &'static str {
        TABLE1
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.n_max < 2 {
            return Err(Error::Config(format!("n_max must be at least 2, got {}", self.n_max)));
        }
        if !(self.target_scale > 0.0 && self.target_scale.is_finite()) {
            return Err(Error::Config(format!(
                "target_scale must be positive, got {}",
                self.target_scale
            )));
        }
        if let CouplingSpec::List(list) = &self.couplings {
            if list.len() != self.n {
                return Err(Error::Config(format!(
                    "{} couplings given for n = {}",
                    list.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Changes the qubit count. A resonator too short to put every SQUID
    /// on its own antinode is lengthened to `n lambda / 2`; an explicit
    /// coupling list must either match `n` or hold a single repeated value.
    /// Returns a note when something besides `n` changed.
    pub fn set_n(&mut self, n: usize) -> Result<Option<String>> {
        self.n = n;
        let mut note = None;
        if let CouplingSpec::List(list) = &mut self.couplings {
            if list.len() != n {
                match list.first().copied() {
                    Some(g) if list.iter().all(|q| *q == g) => *list = vec![g; n],
                    _ => {
                        return Err(Error::Config(format!(
                            "{} distinct couplings given but n = {n}",
                            list.len()
                        )))
                    }
                }
            }
        }
        let antinode_positions = matches!(self.device.coupling.positions, Some(PositionSpec::Antinodes(_)));
        if let (true, Some(length)) = (antinode_positions, self.device.resonator.length_wavelengths) {
            let needed = n as f64 / 2.0;
            if length < 0.25 * (2 * n - 1) as f64 {
                self.device.resonator.length_wavelengths = Some(needed);
                note = Some(format!(
                    "resonator lengthened from {length} to {needed} wavelengths to host {n} SQUIDs at antinodes"
                ));
            }
        }
        self.validate()?;
        Ok(note)
    }

    /// SQUID circuit parameters, or the list of what is missing.
    pub fn squid_params(&self) -> Result<SquidParams> {
        let s = &self.device.squid;
        let mut missing = Missing(Vec::new());
        let c = missing.take(s.capacitance, "device.squid.capacitance");
        let l = missing.take(s.inductance, "device.squid.inductance");
        let b = missing.take(s.beta_l, "device.squid.beta_l");
        let x = missing.take(s.flux_bias_phi0, "device.squid.flux_bias_phi0");
        missing.finish()?;
        let params = SquidParams {
            capacitance: c.unwrap().value(),
            inductance: l.unwrap().value(),
            beta_l: b.unwrap(),
            flux_bias: x.unwrap(),
        };
        params.validate()?;
        Ok(params)
    }

    /// `(phi_01, phi_02, phi_12)` from the table or from a spectrum solve.
    pub fn matrix_elements(&self) -> Result<[f64; 3]> {
        match self.matrix_elements {
            MatrixElementSource::Table => {
                let s = &self.device.squid;
                let mut missing = Missing(Vec::new());
                let a = missing.take(s.phi_01, "device.squid.phi_01");
                let b = missing.take(s.phi_02, "device.squid.phi_02");
                let c = missing.take(s.phi_12, "device.squid.phi_12");
                missing.finish()?;
                Ok([a.unwrap(), b.unwrap(), c.unwrap()])
            }
            MatrixElementSource::Spectrum => {
                let result = solve_spectrum(&self.squid_params()?, &self.spectrum)?;
                Ok([result.phi_01.abs(), result.phi_02.abs(), result.phi_12.abs()])
            }
        }
    }

    pub fn resonator(&self) -> Result<ResonatorParams> {
        let r = &self.device.resonator;
        let mut missing = Missing(Vec::new());
        let f = missing.take(r.frequency, "device.resonator.frequency");
        let w = missing.take(r.wavelength, "device.resonator.wavelength");
        let l = missing.take(r.length_wavelengths, "device.resonator.length_wavelengths");
        let l0 = missing.take(r.inductance_per_length, "device.resonator.inductance_per_length");
        let q = missing.take(r.quality_factor, "device.resonator.quality_factor");
        missing.finish()?;
        let wavelength = w.unwrap().value();
        let geometry = match (r.gap, r.width, r.eps_eff) {
            (Some(gap), Some(width), Some(eps_eff)) => Some(CpwGeometry {
                gap: gap.value(),
                width: width.value(),
                eps_eff,
            }),
            _ => None,
        };
        let res = ResonatorParams {
            frequency_hz: f.unwrap().value(),
            wavelength,
            length: l.unwrap() * wavelength,
            inductance_per_length: l0.unwrap().value(),
            quality_factor: q.unwrap(),
            geometry,
        };
        res.validate()?;
        Ok(res)
    }

    fn positions(&self, res: &ResonatorParams) -> Result<Vec<f64>> {
        match &self.device.coupling.positions {
            None => Err(Error::Config(
                "incomplete device configuration, missing: device.coupling.positions".into(),
            )),
            Some(PositionSpec::Antinodes(_)) => {
                let nodes = res.antinodes();
                if nodes.len() < self.n {
                    return Err(Error::Config(format!(
                        "a resonator of {:.3} wavelengths has {} field antinodes, fewer than n = {}",
                        res.length / res.wavelength,
                        nodes.len(),
                        self.n
                    )));
                }
                Ok(nodes[..self.n].to_vec())
            }
            Some(PositionSpec::List(list)) => {
                if list.len() != self.n {
                    return Err(Error::Config(format!(
                        "{} positions given for n = {}",
                        list.len(),
                        self.n
                    )));
                }
                Ok(list.iter().map(|q| q.value()).collect())
            }
        }
    }

    /// Everything the feasibility estimate needs.
    pub fn device_setup(&self) -> Result<DeviceSetup> {
        let mut missing = Missing(Vec::new());
        let d = &self.device;
        let l = missing.take(d.squid.inductance, "device.squid.inductance");
        let g2 = missing.take(d.squid.gamma2_inv, "device.squid.gamma2_inv");
        let msr = missing.take(d.coupling.mutual_inductance, "device.coupling.mutual_inductance");
        let m = missing.take(d.crosstalk.mutual_inductance, "device.crosstalk.mutual_inductance");
        let tau_a = missing.take(d.budget.tau_a, "device.budget.tau_a");
        let tau_uw = missing.take(d.budget.tau_uw, "device.budget.tau_uw");
        if d.coupling.positions.is_none() {
            missing.0.push("device.coupling.positions".into());
        }
        for (field, present) in [
            ("frequency", d.resonator.frequency.is_some()),
            ("wavelength", d.resonator.wavelength.is_some()),
            ("length_wavelengths", d.resonator.length_wavelengths.is_some()),
            ("inductance_per_length", d.resonator.inductance_per_length.is_some()),
            ("quality_factor", d.resonator.quality_factor.is_some()),
        ] {
            if !present {
                missing.0.push(format!("device.resonator.{field}"));
            }
        }
        if self.matrix_elements == MatrixElementSource::Table {
            for (field, present) in [
                ("phi_01", d.squid.phi_01.is_some()),
                ("phi_02", d.squid.phi_02.is_some()),
                ("phi_12", d.squid.phi_12.is_some()),
            ] {
                if !present {
                    missing.0.push(format!("device.squid.{field}"));
                }
            }
        }
        missing.finish()?;

        let resonator = self.resonator()?;
        let phi = self.matrix_elements()?;
        let positions = self.positions(&resonator)?;
        let squids = positions
            .iter()
            .map(|&position| SquidDevice {
                loop_inductance: l.unwrap().value(),
                phi,
                gamma2_inv: g2.unwrap().value(),
                mutual_inductance: msr.unwrap().value(),
                position,
            })
            .collect();
        let coupling_override = match &self.couplings {
            CouplingSpec::FromDevice(_) => None,
            CouplingSpec::List(list) => Some(list.iter().map(|q| q.value()).collect()),
        };
        Ok(DeviceSetup {
            squids,
            resonator,
            tau_a: tau_a.unwrap().choice(),
            tau_uw: tau_uw.unwrap().choice(),
            crosstalk_mutual: m.unwrap().value(),
            neighbour_distance: d.crosstalk.distance.map(|q| q.value()),
            coupling_override,
            energy_quantum: self.conventions.energy_quantum,
            thresholds: Thresholds {
                zeta: self.conventions.zeta_threshold,
                margin: self.conventions.margin_threshold,
            },
        })
    }

    /// Couplings `g_1 .. g_n` in rad/s.
    pub fn couplings(&self) -> Result<Vec<f64>> {
        match &self.couplings {
            CouplingSpec::List(list) => Ok(list.iter().map(|q| q.value()).collect()),
            CouplingSpec::FromDevice(_) => {
                let setup = self.device_setup()?;
                setup
                    .squids
                    .iter()
                    .map(|sq| {
                        coupling_g(
                            &setup.resonator,
                            &CouplingPlacement {
                                mutual_inductance: sq.mutual_inductance,
                                position: sq.position,
                                phi_02: sq.phi[1],
                                loop_inductance: sq.loop_inductance,
                            },
                            setup.energy_quantum,
                        )
                    })
                    .collect()
            }
        }
    }

    /// The gate schedule this configuration describes.
    pub fn schedule(&self) -> Result<Schedule> {
        let couplings = self.couplings()?;
        if let Some(k) = couplings.iter().position(|g| !(*g > 0.0)) {
            return Err(Error::Config(format!("SQUID {} has zero coupling", k + 1)));
        }
        let tau_r = couplings.iter().map(|g| PI / (2.0 * g)).fold(0.0, f64::max);
        let rabi = match self.rabi {
            RateSpec::MatchTauR(_) => PI / tau_r,
            RateSpec::Value(q) => q.value(),
        };
        let retune = match self.retune_time {
            TimeSpec::MatchTauR(_) => tau_r,
            TimeSpec::Value(q) => q.value(),
        };
        let mut schedule = match self.gate {
            TargetGate::ControlledPhase => build_cphase_schedule(self.n, &couplings, rabi, retune)?,
            TargetGate::ControlledNot => build_cnot_schedule(self.n, &couplings, rabi, rabi, retune)?,
        };
        if self.target_scale != 1.0 {
            for step in schedule.steps.iter_mut().filter(|s| s.kind == StepKind::JcFull) {
                step.duration *= self.target_scale;
                step.label = format!("{} x{}", step.label, self.target_scale);
            }
        }
        Ok(schedule)
    }
}
