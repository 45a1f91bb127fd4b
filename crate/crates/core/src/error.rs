use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("iteration count {k} exceeds the limit {limit}")]
    IterationLimit { k: i64, limit: i64 },

    #[error("orbit left the chart at step {step}")]
    Escaped { step: i64 },

    #[error("potential `{0}` is a volume potential and only evaluates on saddle orbits; use volume_birkhoff")]
    VolumePotential(String),

    #[error("potential `{potential}` needs a symbolic coding, which system `{system}` lacks")]
    NoCoding { potential: String, system: String },

    #[error("enumeration method `{method}` is unavailable for system `{system}`")]
    MethodUnavailable { method: String, system: String },

    #[error("periodic points of period {0} are not isolated")]
    NonIsolated(usize),

    #[error("orbit has no splitting data; classify it first")]
    Unclassified,

    #[error("orbit is not a saddle")]
    NotSaddle,

    #[error("no saddles at this alpha")]
    NoSaddles,

    #[error("missing orbit data for period {0}")]
    MissingOrbits(usize),

    #[error("window [{lo}, {hi}] has fewer than {min} usable values")]
    WindowTooSmall { lo: usize, hi: usize, min: usize },

    #[error("survivor grid is empty")]
    EmptySurvivors,

    #[error("transition matrix is reducible: symbols {unreachable:?} cannot be reached from symbol {from}")]
    Reducible { from: usize, unreachable: Vec<usize> },

    #[error("degenerate point cloud: {0}")]
    DegenerateCloud(String),

    #[error("expansion rate {0} is not positive; the dimension bound needs a positive exponent")]
    NonPositiveExpansion(f64),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn param(name: &str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
