use std::fmt;
use std::str::FromStr;

use rocbound_core::db_to_linear;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Db,
    Linear,
}

/// A power-like quantity written with an explicit unit: `"5 dB"` or
/// `"3.2 lin"`. Converted to linear scale once, by [`Quantity::linear`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn db(value: f64) -> Self {
        Self { value, unit: Unit::Db }
    }

    pub fn lin(value: f64) -> Self {
        Self { value, unit: Unit::Linear }
    }

    pub fn linear(&self) -> f64 {
        match self.unit {
            Unit::Db => db_to_linear(self.value),
            Unit::Linear => self.value,
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split_whitespace();
        let (Some(num), Some(unit), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("quantity {s:?} must look like \"5 dB\" or \"3.2 lin\""));
        };
        let value: f64 = num.parse().map_err(|_| format!("quantity {s:?}: {num:?} is not a number"))?;
        if !value.is_finite() {
            return Err(format!("quantity {s:?} must be finite"));
        }
        let unit = match unit {
            "dB" => Unit::Db,
            "lin" => Unit::Linear,
            other => return Err(format!("quantity {s:?}: unit {other:?} is neither \"dB\" nor \"lin\"")),
        };
        if unit == Unit::Linear && value < 0.0 {
            return Err(format!("quantity {s:?}: linear power cannot be negative"));
        }
        Ok(Self { value, unit })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.unit {
            Unit::Db => "dB",
            Unit::Linear => "lin",
        };
        write!(f, "{} {unit}", self.value)
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
