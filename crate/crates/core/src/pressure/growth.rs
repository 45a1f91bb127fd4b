//! Exponential growth rates of partition-sum tables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pressure::PressureSeries;
use crate::scalar::Scalar;

/// Smallest number of n values a regression window may hold.
pub const MIN_WINDOW: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMethod {
    /// Least-squares slope of log Q_n against n.
    Regression,
    /// max of log Q_n / n over the window.
    TailMax,
}

/// One cell of an (α, c) schedule with its own estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScheduleCell<T> {
    pub alpha: f64,
    pub c: f64,
    pub estimate: T,
    pub stderr: T,
    /// Rows of the cell's series that used the empty-set fallback.
    pub fallback_rows: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthEstimate<T> {
    /// Primary estimate (the regression slope).
    pub estimate: T,
    pub method: GrowthMethod,
    pub tail_max: T,
    pub window: (usize, usize),
    pub slope_stderr: T,
    pub intercept: T,
    /// Largest absolute residual of the linear fit.
    pub max_deviation: T,
    pub schedule: Vec<ScheduleCell<T>>,
    /// Diagnostic flags; empty when nothing looked off.
    pub flags: Vec<String>,
}

/// Regression slope and tail max of log Q_n over `window` (inclusive).
pub fn growth_estimate<T: Scalar>(series: &PressureSeries<T>, window: (usize, usize)) -> Result<GrowthEstimate<T>> {
    let (lo, hi) = window;
    let too_small = Error::WindowTooSmall {
        lo,
        hi,
        min: MIN_WINDOW,
    };
    if hi < lo || hi + 1 - lo < MIN_WINDOW {
        return Err(too_small);
    }
    let max_n = series.rows.iter().map(|r| r.n).max().unwrap_or(0);
    if hi > max_n {
        return Err(Error::Invalid(format!("window end {hi} exceeds computed range {max_n}")));
    }
    let pts: Vec<(T, T, T)> = series
        .rows
        .iter()
        .filter(|r| r.n >= lo && r.n <= hi && r.log_q.is_finite())
        .map(|r| (T::from_usize_lossy(r.n), r.log_q, r.log_q_over_n))
        .collect();
    if pts.len() < MIN_WINDOW {
        return Err(too_small);
    }
    let m = T::from_usize_lossy(pts.len());
    let mean_x = pts.iter().map(|p| p.0).sum::<T>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<T>() / m;
    let sxx: T = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: T = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residuals: Vec<T> = pts.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    let ssr: T = residuals.iter().map(|r| *r * *r).sum();
    let stderr = (ssr / (m - T::lit(2.0)) / sxx).sqrt();
    let max_deviation = residuals.iter().fold(T::zero(), |a, r| a.max(r.abs()));
    let tail_max = pts.iter().fold(T::neg_infinity(), |a, p| a.max(p.2));
    let mut flags = Vec::new();
    if tail_max < slope - T::lit(3.0) * stderr {
        flags.push("tail_max_below_regression".to_string());
    }
    if series.rows.iter().any(|r| r.n >= lo && r.n <= hi && r.fallback) {
        flags.push("fallback_in_window".to_string());
    }
    Ok(GrowthEstimate {
        estimate: slope,
        method: GrowthMethod::Regression,
        tail_max,
        window,
        slope_stderr: stderr,
        intercept,
        max_deviation,
        schedule: Vec::new(),
        flags,
    })
}
