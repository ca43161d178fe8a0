use std::collections::BTreeMap;

use crate::model::{Asil, DistanceMetric};

/// Limits consulted before centralizing I/O or shifting software.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityConfig {
    /// Longest acceptable analog line per ASIL, in meters.
    pub max_analog_length_m: BTreeMap<Asil, f64>,
    /// Analog lines of ASIL C/D functions longer than this need shielding.
    pub require_shielding_beyond_m: f64,
    pub enforce_capacity: bool,
    /// Keep I/O decentralized behind a zone gateway even when direct analog
    /// wiring would be feasible.
    pub prefer_gateway: bool,
    pub distance_metric: DistanceMetric,
}

impl Default for FeasibilityConfig {
    fn default() -> Self {
        let max_analog_length_m = Asil::ALL.iter().map(|a| (*a, if *a >= Asil::C { 2.0 } else { 4.0 })).collect();
        FeasibilityConfig {
            max_analog_length_m,
            require_shielding_beyond_m: 2.0,
            enforce_capacity: true,
            prefer_gateway: false,
            distance_metric: DistanceMetric::Manhattan,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid feasibility config: {0}")]
pub struct InvalidConfig(pub String);

impl FeasibilityConfig {
    pub fn max_analog_length(&self, asil: Asil) -> f64 {
        self.max_analog_length_m.get(&asil).copied().unwrap_or(if asil >= Asil::C { 2.0 } else { 4.0 })
    }

    pub fn validate(&self) -> Result<(), InvalidConfig> {
        for (asil, len) in &self.max_analog_length_m {
            if !(len.is_finite() && *len > 0.0) {
                return Err(InvalidConfig(format!("max_analog_length.{asil} must be > 0, got {len}")));
            }
        }
        let s = self.require_shielding_beyond_m;
        if !(s.is_finite() && s > 0.0) {
            return Err(InvalidConfig(format!("require_shielding_beyond_m must be > 0, got {s}")));
        }
        Ok(())
    }
}
