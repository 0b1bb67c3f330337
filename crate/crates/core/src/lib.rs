// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

// Index loops mirror the matrix formulas; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod device;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod oracle;
pub mod protocol;
pub mod squid_spectrum;
pub mod units;
pub mod verify;

pub use error::{Error, Result};
