// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Joint state space of `n` three-level SQUIDs and one truncated resonator
//! mode.
//!
//! Amplitudes are stored densely in row-major tensor order: SQUID 1 is the
//! most significant factor and the photon number the least significant, so
//!
//! ```text
//! index = ((((i1 * 3 + i2) * 3 + ...) * 3 + i_n) * (n_max + 1)) + m
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default Fock cutoff. The protocol never holds more than one photon; the
/// extra levels make leakage show up as population rather than wraparound.
pub const DEFAULT_N_MAX: usize = 3;

/// Norm tolerance every evolved state must satisfy.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// One of the three lowest SQUID levels. `L0`/`L1` carry the qubit, `L2` is
/// the auxiliary level reached through the resonator or the microwave drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquidLevel {
    L0,
    L1,
    L2,
}

impl SquidLevel {
    pub const ALL: [SquidLevel; 3] = [SquidLevel::L0, SquidLevel::L1, SquidLevel::L2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn is_qubit(self) -> bool {
        self != SquidLevel::L2
    }
}

/// A product basis ket `|i1 i2 ... i_n>|m>_c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub levels: Vec<SquidLevel>,
    pub photon: usize,
}

impl BasisLabel {
    pub fn new(levels: Vec<SquidLevel>, photon: usize) -> Self {
        Self { levels, photon }
    }

    /// Computational basis input: qubit bits (most significant = SQUID 1)
    /// with the resonator in vacuum.
    pub fn from_bits(bits: usize, n: usize) -> Self {
        let levels = (0..n)
            .map(|k| {
                if (bits >> (n - 1 - k)) & 1 == 1 {
                    SquidLevel::L1
                } else {
                    SquidLevel::L0
                }
            })
            .collect();
        Self { levels, photon: 0 }
    }

    /// Inverse of [`BasisLabel::from_bits`]; `None` if any SQUID is in `L2`.
    pub fn to_bits(&self) -> Option<usize> {
        self.levels.iter().try_fold(0usize, |acc, l| match l {
            SquidLevel::L0 => Some(acc << 1),
            SquidLevel::L1 => Some((acc << 1) | 1),
            SquidLevel::L2 => None,
        })
    }

    /// Compact text form `"011|1"` (levels, then photon number).
    pub fn compact(&self) -> String {
        let levels: String = self
            .levels
            .iter()
            .map(|l| char::from(b'0' + l.index() as u8))
            .collect();
        format!("{levels}|{}", self.photon)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for l in &self.levels {
            write!(f, "{}", l.index())?;
        }
        write!(f, ">|{}>_c", self.photon)
    }
}

/// Parses `"011"` (vacuum) or `"011|1"`.
impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (levels, photon) = match s.split_once('|') {
            Some((l, p)) => (
                l,
                p.trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad photon number in {s:?}")))?,
            ),
            None => (s, 0),
        };
        let levels = levels
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .and_then(|d| SquidLevel::from_index(d as usize))
                    .ok_or_else(|| Error::InvalidParameter(format!("bad SQUID level {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if levels.is_empty() {
            return Err(Error::InvalidParameter(format!("empty basis label {s:?}")));
        }
        Ok(Self { levels, photon })
    }
}

/// Shape of the joint space: qubit count and Fock cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertSpace {
    pub n_qubits: usize,
    pub n_max: usize,
}

impl HilbertSpace {
    pub fn new(n_qubits: usize, n_max: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter("at least one SQUID is required".into()));
        }
        if n_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_max = {n_max}: the Fock cutoff must be at least 2 so leakage is observable"
            )));
        }
        Ok(Self { n_qubits, n_max })
    }

    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        3usize.pow(self.n_qubits as u32) * self.fock_dim()
    }

    /// Stride of SQUID `squid` (1-based) in the flat amplitude vector.
    pub fn squid_stride(&self, squid: usize) -> usize {
        3usize.pow((self.n_qubits - squid) as u32) * self.fock_dim()
    }

    pub fn check_squid(&self, squid: usize) -> Result<()> {
        if squid == 0 || squid > self.n_qubits {
            return Err(Error::SquidIndex {
                index: squid,
                n: self.n_qubits,
            });
        }
        Ok(())
    }

    pub fn index_of(&self, label: &BasisLabel) -> Result<usize> {
        basis_index(label, self.n_qubits, self.n_max)
    }

    pub fn label_of(&self, index: usize) -> Result<BasisLabel> {
        if index >= self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "index {index} outside space of dimension {}",
                self.dim()
            )));
        }
        let photon = index % self.fock_dim();
        let mut rest = index / self.fock_dim();
        let mut levels = vec![SquidLevel::L0; self.n_qubits];
        for slot in levels.iter_mut().rev() {
            *slot = SquidLevel::ALL[rest % 3];
            rest /= 3;
        }
        Ok(BasisLabel { levels, photon })
    }

    /// Level of SQUID `squid` (1-based) encoded in a flat index.
    pub fn level_at(&self, index: usize, squid: usize) -> SquidLevel {
        SquidLevel::ALL[(index / self.squid_stride(squid)) % 3]
    }

    pub fn photon_at(&self, index: usize) -> usize {
        index % self.fock_dim()
    }
}

/// Flat index of `label` in the space of `n` SQUIDs with Fock cutoff `n_max`.
pub fn basis_index(label: &BasisLabel, n: usize, n_max: usize) -> Result<usize> {
    if label.levels.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "label {label} has {} SQUIDs, space has {n}",
            label.levels.len()
        )));
    }
    if label.photon > n_max {
        return Err(Error::PhotonOutOfRange {
            photon: label.photon,
            n_max,
        });
    }
    let squids = label.levels.iter().fold(0usize, |acc, l| acc * 3 + l.index());
    Ok(squids * (n_max + 1) + label.photon)
}

/// Dense amplitude vector over a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    space: HilbertSpace,
    amplitudes: Vec<Complex64>,
}

impl SystemState {
    pub fn basis_state(space: HilbertSpace, label: &BasisLabel) -> Result<Self> {
        let index = space.index_of(label)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); space.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    /// Wraps raw amplitudes. The vector is not renormalized.
    pub fn from_amplitudes(space: HilbertSpace, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Result<Complex64> {
        Ok(self.amplitudes[self.space.index_of(label)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// Total population of basis kets satisfying `pred(index)`.
    pub fn population_where(&self, pred: impl Fn(usize) -> bool) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Population with at least `min_photons` photons in the resonator.
    pub fn photon_population_at_least(&self, min_photons: usize) -> f64 {
        let space = self.space;
        self.population_where(|i| space.photon_at(i) >= min_photons)
    }

    /// Population of SQUID `squid` (1-based) in `level`.
    pub fn level_population(&self, squid: usize, level: SquidLevel) -> Result<f64> {
        self.space.check_squid(squid)?;
        let space = self.space;
        Ok(self.population_where(|i| space.level_at(i, squid) == level))
    }

    /// Nonzero components above `threshold` in magnitude, in index order.
    pub fn support(&self, threshold: f64) -> Vec<(BasisLabel, Complex64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, a)| (self.space.label_of(i).expect("index in range"), *a))
            .collect()
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &SystemState, b: &SystemState) -> Result<Complex64> {
    if a.space != b.space {
        return Err(Error::DimensionMismatch(format!(
            "inner product of states in {:?} and {:?}",
            a.space, b.space
        )));
    }
    Ok(a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}
