// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("SQUID index {index} out of range for {n} SQUIDs (indices are 1-based)")]
    SquidIndex { index: usize, n: usize },

    #[error("photon number {photon} exceeds truncation n_max = {n_max}")]
    PhotonOutOfRange { photon: usize, n_max: usize },

    #[error(
        "Fock truncation exceeded on SQUID {squid}: population {population:.3e} in |2>|n_max={n_max}> would couple above the cutoff"
    )]
    Truncation {
        squid: usize,
        n_max: usize,
        population: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:.3e})")]
    NotHermitian(f64),

    #[error("eigen-solve did not converge: {0}")]
    NotConverged(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("step {step} ({label}): {source}")]
    AtStep {
        step: usize,
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
