//! Upper bound dim M + Ē(V)/s on the dimension of the survivor set.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DimensionBound {
    pub manifold_dim: usize,
    pub escape_rate: f64,
    pub expansion: f64,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub bound: f64,
    pub measured: f64,
    pub slack: f64,
    pub pass: bool,
}

impl DimensionBound {
    /// measured ≤ bound + slack.
    pub fn check(&self, measured: f64, slack: f64) -> BoundCheck {
        BoundCheck {
            bound: self.bound,
            measured,
            slack,
            pass: measured <= self.bound + slack,
        }
    }
}

impl BoundCheck {
    pub fn ledger_row(&self) -> String {
        format!(
            "dim_bound_check: {} (measured {} <= bound {} + {})",
            if self.pass { "PASS" } else { "FAIL" },
            crate::scalar::sig12(self.measured),
            crate::scalar::sig12(self.bound),
            self.slack
        )
    }
}

/// `escape_rate` is the (non-positive) upper escape rate Ē(V) and
/// `expansion` the rate s > 0.
pub fn dimension_bound(manifold_dim: usize, escape_rate: f64, expansion: f64) -> Result<DimensionBound> {
    if !(expansion > 0.0) {
        return Err(Error::NonPositiveExpansion(expansion));
    }
    if !escape_rate.is_finite() {
        return Err(Error::param("escape_rate", "must be finite"));
    }
    Ok(DimensionBound {
        manifold_dim,
        escape_rate,
        expansion,
        bound: manifold_dim as f64 + escape_rate / expansion,
    })
}
