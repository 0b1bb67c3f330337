// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical constants and unit-suffixed quantity strings.
//!
//! Configuration files write every dimensional value as a string with an
//! explicit unit, e.g. `"240pH"`, `"11.4GHz"`, `"0.65pH/um"`. [`Quantity`]
//! parses such strings into SI values and serializes back to the SI base
//! unit. Internally every rate is angular (rad/s); cyclic frequencies in Hz
//! are only converted at the edges.

use std::fmt;
use std::marker::PhantomData;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Planck constant (J s), exact SI value.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Elementary charge (C), exact SI value.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
/// Superconducting flux quantum h/2e (Wb).
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);

const PREFIXES: &[(&str, f64)] = &[
    ("a", 1e-18),
    ("f", 1e-15),
    ("p", 1e-12),
    ("n", 1e-9),
    ("u", 1e-6),
    ("µ", 1e-6),
    ("μ", 1e-6),
    ("m", 1e-3),
    ("k", 1e3),
    ("M", 1e6),
    ("G", 1e9),
    ("T", 1e12),
];

/// A physical dimension with a base SI unit symbol and accepted spellings.
pub trait Dimension {
    /// Symbol written when serializing.
    const SYMBOL: &'static str;
    /// Scale factor to SI for a unit string, if it spells this dimension.
    fn scale(unit: &str) -> Option<f64>;
}

fn prefixed(unit: &str, base: &str) -> Option<f64> {
    let prefix = unit.strip_suffix(base)?;
    if prefix.is_empty() {
        return Some(1.0);
    }
    PREFIXES
        .iter()
        .find(|(p, _)| *p == prefix)
        .map(|(_, factor)| *factor)
}

macro_rules! simple_dimension {
    ($name:ident, $symbol:literal $(, $alias:literal)*) => {
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name;
        impl Dimension for $name {
            const SYMBOL: &'static str = $symbol;
            fn scale(unit: &str) -> Option<f64> {
                prefixed(unit, $symbol)$(.or_else(|| prefixed(unit, $alias)))*
            }
        }
    };
}

simple_dimension!(Inductance, "H");
simple_dimension!(Capacitance, "F");
simple_dimension!(Frequency, "Hz");
simple_dimension!(Time, "s");
simple_dimension!(Length, "m");
simple_dimension!(MagneticFlux, "Wb");
simple_dimension!(Resistance, "Ohm", "Ω");

/// Angular rate in rad/s (`"7.5e9rad/s"`, `"7.5e9s^-1"`, `"7.5e9/s"`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularRate;
impl Dimension for AngularRate {
    const SYMBOL: &'static str = "rad/s";
    fn scale(unit: &str) -> Option<f64> {
        if let Some(p) = unit.strip_suffix("rad/s") {
            return prefixed(p, "").or_else(|| (p.is_empty()).then_some(1.0));
        }
        match unit {
            "s^-1" | "/s" | "1/s" => Some(1.0),
            _ => None,
        }
    }
}

/// Inductance per unit length (`"0.65pH/um"`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductancePerLength;
impl Dimension for InductancePerLength {
    const SYMBOL: &'static str = "H/m";
    fn scale(unit: &str) -> Option<f64> {
        let (num, den) = unit.split_once('/')?;
        Some(prefixed(num, "H")? / prefixed(den, "m")?)
    }
}

/// Splits `"240pH"` into (240.0, "pH") and resolves the unit for `D`.
pub fn parse_quantity<D: Dimension>(text: &str) -> Result<f64> {
    let text = text.trim();
    let bad = || {
        Error::Config(format!(
            "cannot read {text:?} as a quantity in {} (a number followed by a unit)",
            D::SYMBOL
        ))
    };
    // The unit starts at the first character that cannot belong to a float
    // literal, except that an 'e'/'E' only counts as exponent when a digit or
    // sign follows it.
    let bytes = text.as_bytes();
    let mut split = 0;
    while split < bytes.len() {
        let c = bytes[split] as char;
        let numeric = c.is_ascii_digit()
            || c == '.'
            || ((c == '+' || c == '-') && (split == 0 || matches!(bytes[split - 1], b'e' | b'E')))
            || ((c == 'e' || c == 'E')
                && split > 0
                && bytes
                    .get(split + 1)
                    .is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+'));
        if !numeric {
            break;
        }
        split += 1;
    }
    let value: f64 = text[..split].trim().parse().map_err(|_| bad())?;
    let unit = text[split..].trim();
    if unit.is_empty() {
        return Err(Error::Config(format!(
            "quantity {text:?} has no unit; expected something convertible to {}",
            D::SYMBOL
        )));
    }
    let scale = D::scale(unit).ok_or_else(bad)?;
    Ok(value * scale)
}

/// An SI value tagged with its dimension; (de)serializes as a unit string.
pub struct Quantity<D> {
    si: f64,
    _dim: PhantomData<D>,
}

impl<D> Quantity<D> {
    pub const fn si(si: f64) -> Self {
        Self {
            si,
            _dim: PhantomData,
        }
    }

    pub fn value(&self) -> f64 {
        self.si
    }
}

impl<D> Clone for Quantity<D> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<D> Copy for Quantity<D> {}

impl<D> PartialEq for Quantity<D> {
    fn eq(&self, other: &Self) -> bool {
        self.si == other.si
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{}", self.si, D::SYMBOL)
    }
}

impl<D: Dimension> fmt::Display for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{}", self.si, D::SYMBOL)
    }
}

impl<D: Dimension> std::str::FromStr for Quantity<D> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_quantity::<D>(s).map(Self::si)
    }
}

impl<D: Dimension> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> std::result::Result<Self, De::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        ((a - b) / b).abs() < 1e-12
    }

    #[test]
    fn parses_table_values() {
        assert!(close(parse_quantity::<Inductance>("240pH").unwrap(), 240e-12));
        assert!(close(parse_quantity::<Capacitance>("135fF").unwrap(), 135e-15));
        assert!(close(parse_quantity::<Frequency>("11.4GHz").unwrap(), 11.4e9));
        assert!(close(parse_quantity::<Length>("10.5mm").unwrap(), 10.5e-3));
        assert!(close(parse_quantity::<Length>("2 m").unwrap(), 2.0));
        assert!(close(parse_quantity::<Time>("3.2us").unwrap(), 3.2e-6));
        assert!(close(parse_quantity::<Time>("0.16ms").unwrap(), 0.16e-3));
        assert!(close(parse_quantity::<Inductance>("0.1aH").unwrap(), 1e-19));
        assert!(close(parse_quantity::<Resistance>("20MOhm").unwrap(), 20e6));
        assert!(close(
            parse_quantity::<InductancePerLength>("0.65pH/um").unwrap(),
            0.65e-6
        ));
        assert!(close(parse_quantity::<AngularRate>("7.5e9rad/s").unwrap(), 7.5e9));
        assert!(close(parse_quantity::<AngularRate>("7.5e9 s^-1").unwrap(), 7.5e9));
        assert!(close(parse_quantity::<Time>("2.1e-10s").unwrap(), 2.1e-10));
    }

    #[test]
    fn rejects_missing_or_wrong_unit() {
        assert!(parse_quantity::<Inductance>("240").is_err());
        assert!(parse_quantity::<Inductance>("240pF").is_err());
        assert!(parse_quantity::<Time>("abc s").is_err());
        assert!(parse_quantity::<Length>("3xm").is_err());
    }

    #[test]
    fn flux_quantum_value() {
        assert!((FLUX_QUANTUM - 2.067_833_848e-15).abs() < 1e-23);
    }

    #[test]
    fn quantity_serde_round_trip() {
        let q: Quantity<Inductance> = serde_json::from_str("\"240pH\"").unwrap();
        let text = serde_json::to_string(&q).unwrap();
        let back: Quantity<Inductance> = serde_json::from_str(&text).unwrap();
        assert!(close(back.value(), 240e-12));
    }
}
