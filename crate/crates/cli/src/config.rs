//! Experiment configuration: one TOML file with nested tables.
//!
//! ```toml
//! seed = 7
//!
//! [system]
//! name = "linear_horseshoe"
//! lambda = 4.0
//!
//! [potential]
//! kind = "zero"
//!
//! [orbits]
//! n_max = 10
//! method = "symbolic"
//!
//! [filter]
//! alpha = [0.9]
//! c = [1.0, 0.5, 0.1]
//!
//! [pressure]
//! window = [5, 10]
//! ```
//!
//! Every table is optional in the file; each command checks that the
//! tables it needs are present and reports the first missing field.

use serde::{Deserialize, Serialize};

use saddle_pressure::oracle::ShiftSpec;
use saddle_pressure::orbits::{KCap, NewtonSettings};
use saddle_pressure::system::catalog::CATALOG;
use saddle_pressure::{EnumerationMethod, PotentialSpec, Region, SmoothSystem, SystemSpec};

use crate::Command;

/// Potential kinds accepted in `[potential]`.
pub const POTENTIALS: [&str; 6] = [
    "zero",
    "constant",
    "coordinate",
    "cylinder",
    "sink_bump",
    "volume_unstable",
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {reason}")]
    Read { path: String, reason: String },
    #[error("config does not parse: {0}")]
    Parse(String),
    #[error("unknown system `{given}`; available: {}", CATALOG.join(", "))]
    UnknownSystem { given: String },
    #[error("unknown potential kind `{given}`; available: {}", POTENTIALS.join(", "))]
    UnknownPotential { given: String },
    #[error("missing field `{field}` required by command `{command}`")]
    Missing { field: &'static str, command: &'static str },
    #[error("invalid field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Master seed for every stochastic step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub system: SystemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    /// The neighborhood V for escape rates and survivor clouds; defaults to U.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<OrbitsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pressure: Option<PressureConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separated: Option<SeparatedConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<VolumeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub escape: Option<EscapeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boxdim: Option<BoxdimConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionConfig {
    /// The system's own neighborhood U.
    System,
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// All of phase space, sampled over the chart.
    Whole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Auto,
    Symbolic,
    Lattice,
    Newton,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitsConfig {
    pub n_max: usize,
    #[serde(default = "auto")]
    pub method: MethodName,
    /// Overrides for `method = "newton"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton: Option<NewtonSettings>,
}

fn auto() -> MethodName {
    MethodName::Auto
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub alpha: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PressureConfig {
    pub window: (usize, usize),
    /// Grid nodes per axis for min φ in empty-set rows.
    #[serde(default = "default_fallback_resolution")]
    pub fallback_resolution: usize,
    /// Slack of the P_SP ≤ P_top ledger check.
    #[serde(default = "default_pressure_slack")]
    pub slack: f64,
}

fn default_fallback_resolution() -> usize {
    64
}
fn default_pressure_slack() -> f64 {
    0.05
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparatedConfig {
    pub epsilon: Vec<f64>,
    pub grid: Vec<usize>,
    pub window: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeConfig {
    pub alpha: Vec<f64>,
    pub c: Vec<f64>,
    pub window: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EscapeConfig {
    pub n_max: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionConfig {
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    pub n_max: usize,
    /// Periodic points up to this period join the grid as anchors.
    #[serde(default)]
    pub anchor_period: usize,
}

fn default_resolution() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxdimConfig {
    #[serde(default = "default_depth")]
    pub depth: usize,
    pub population: usize,
    pub coarse: f64,
    pub fine: f64,
    pub scales: usize,
}

fn default_depth() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    #[serde(default = "default_bound_slack")]
    pub slack: f64,
}

fn default_bound_slack() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub shift: ShiftSpec,
    /// Periods for the trace table.
    #[serde(default = "default_oracle_n")]
    pub n_max: usize,
}

fn default_oracle_n() -> usize {
    20
}

impl ExperimentConfig {
    /// Parses and checks catalog names before the typed pass, so unknown
    /// names come with the list of valid ones.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        if let Some(name) = raw.get("system").and_then(|s| s.get("name")).and_then(|n| n.as_str()) {
            if !CATALOG.contains(&name) {
                return Err(ConfigError::UnknownSystem { given: name.to_string() });
            }
        }
        if let Some(kind) = raw.get("potential").and_then(|s| s.get("kind")).and_then(|n| n.as_str()) {
            if !POTENTIALS.contains(&kind) {
                return Err(ConfigError::UnknownPotential { given: kind.to_string() });
            }
        }
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<(Self, Vec<u8>), ConfigError> {
        let bytes = std::fs::read(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let text = String::from_utf8(bytes.clone()).map_err(|e| ConfigError::Parse(e.to_string()))?;
        Ok((Self::from_toml(&text)?, bytes))
    }

    /// Canonical TOML form; parses back to an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn potential_spec(&self) -> PotentialSpec {
        self.potential.clone().unwrap_or(PotentialSpec::Zero)
    }

    pub fn method(&self) -> EnumerationMethod {
        match self.orbits.as_ref() {
            None => EnumerationMethod::Auto,
            Some(o) => match o.method {
                MethodName::Auto => EnumerationMethod::Auto,
                MethodName::Symbolic => EnumerationMethod::Symbolic,
                MethodName::Lattice => EnumerationMethod::Lattice,
                MethodName::Newton => EnumerationMethod::Newton(o.newton.clone().unwrap_or_default()),
            },
        }
    }

    pub fn k_cap(&self) -> KCap {
        match self.filter.as_ref().and_then(|f| f.k_cap) {
            Some(k) => KCap::Fixed(k),
            None => KCap::Default,
        }
    }

    /// V as a core region for the given system.
    pub fn region_for(&self, system: &dyn SmoothSystem<f64>) -> Result<Region<f64>, ConfigError> {
        Ok(match self.region.as_ref().unwrap_or(&RegionConfig::System) {
            RegionConfig::System => *system.region(),
            RegionConfig::Whole => Region::whole(system.chart()),
            RegionConfig::Box { lo, hi } => {
                if lo.len() != system.dim() || hi.len() != system.dim() {
                    return Err(ConfigError::Invalid {
                        field: "region",
                        reason: format!("need {} coordinates in lo and hi", system.dim()),
                    });
                }
                if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                    return Err(ConfigError::Invalid {
                        field: "region",
                        reason: "lo must be below hi on every axis".into(),
                    });
                }
                Region::boxed(lo, hi)
            }
        })
    }

    /// Checks that `command` has every table and field it reads.
    pub fn require(&self, command: Command) -> Result<(), ConfigError> {
        let name = command.name();
        let missing = |field| ConfigError::Missing { field, command: name };
        let need_seed = || self.seed.ok_or(missing("seed")).map(|_| ());
        match command {
            Command::Orbits => {
                self.orbits.as_ref().ok_or(missing("orbits"))?;
            }
            Command::Pressure => {
                self.orbits.as_ref().ok_or(missing("orbits"))?;
                let f = self.filter.as_ref().ok_or(missing("filter"))?;
                nonempty("filter.alpha", &f.alpha)?;
                nonempty("filter.c", &f.c)?;
                self.pressure.as_ref().ok_or(missing("pressure"))?;
            }
            Command::Separated => {
                let s = self.separated.as_ref().ok_or(missing("separated"))?;
                nonempty("separated.epsilon", &s.epsilon)?;
            }
            Command::Volume => {
                self.orbits.as_ref().ok_or(missing("orbits"))?;
                let v = self.volume.as_ref().ok_or(missing("volume"))?;
                nonempty("volume.alpha", &v.alpha)?;
                nonempty("volume.c", &v.c)?;
            }
            Command::Escape => {
                self.escape.as_ref().ok_or(missing("escape"))?;
                need_seed()?;
            }
            Command::Boxdim => {
                self.boxdim.as_ref().ok_or(missing("boxdim"))?;
                need_seed()?;
            }
            Command::Bound => {
                self.escape.as_ref().ok_or(missing("escape"))?;
                self.expansion.as_ref().ok_or(missing("expansion"))?;
                self.boxdim.as_ref().ok_or(missing("boxdim"))?;
                need_seed()?;
            }
            Command::Oracle => {
                self.oracle.as_ref().ok_or(missing("oracle"))?;
            }
        }
        Ok(())
    }
}

fn nonempty(field: &'static str, values: &[f64]) -> Result<(), ConfigError> {
    if values.is_empty() {
        return Err(ConfigError::Invalid {
            field,
            reason: "must not be empty".into(),
        });
    }
    Ok(())
}
