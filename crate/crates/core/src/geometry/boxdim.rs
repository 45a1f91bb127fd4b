//! Box-counting dimension of a point cloud.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Vector, MAX_DIM};
use crate::scalar::Scalar;

pub const MIN_POINTS: usize = 10_000;
pub const MIN_SCALES: usize = 4;
/// Required log₁₀(largest scale / smallest scale).
pub const MIN_DECADES: f64 = 1.5;

/// Where a point cloud came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CloudSource {
    SurvivorSet,
    PeriodicPoints,
    LongOrbit,
    Generated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxDimension {
    pub source: CloudSource,
    /// Least-squares slope of log N(ε) against log(1/ε).
    pub estimate: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub points: usize,
    pub flags: Vec<String>,
}

/// `count` scales spaced geometrically from `coarse` down to `fine`.
pub fn geometric_scales(coarse: f64, fine: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![coarse];
    }
    let r = (fine / coarse).powf(1.0 / (count - 1) as f64);
    (0..count).map(|k| coarse * r.powi(k as i32)).collect()
}

/// Occupied cells of the grid of side ε anchored at the origin.
pub fn box_count<T: Scalar>(points: &[Vector<T>], dim: usize, epsilon: f64) -> usize {
    let mut cells: HashSet<[i64; MAX_DIM]> = HashSet::with_capacity(points.len() / 4);
    for p in points {
        let mut key = [0i64; MAX_DIM];
        for i in 0..dim {
            key[i] = (p[i].as_f64() / epsilon).floor() as i64;
        }
        cells.insert(key);
    }
    cells.len()
}

pub fn box_dimension<T: Scalar>(
    points: &[Vector<T>],
    dim: usize,
    scales: &[f64],
    source: CloudSource,
) -> Result<BoxDimension> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::param("dim", format!("must lie in 1..={MAX_DIM}")));
    }
    if points.len() < MIN_POINTS {
        return Err(Error::param(
            "points",
            format!("need at least {MIN_POINTS}, got {}", points.len()),
        ));
    }
    if scales.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::param("scales", "must be positive"));
    }
    let mut scales = scales.to_vec();
    scales.sort_by(|a, b| b.total_cmp(a));
    scales.dedup();
    if scales.len() < MIN_SCALES {
        return Err(Error::param("scales", format!("need at least {MIN_SCALES} distinct values")));
    }
    let decades = (scales[0] / scales[scales.len() - 1]).log10();
    if decades < MIN_DECADES {
        return Err(Error::param(
            "scales",
            format!("span {decades:.3} decades, need {MIN_DECADES}"),
        ));
    }
    if points.iter().any(|p| (0..dim).any(|i| !p[i].is_finite())) {
        return Err(Error::DegenerateCloud("non-finite coordinates".into()));
    }
    let first = points[0];
    if points.iter().all(|p| (0..dim).all(|i| p[i] == first[i])) {
        return Err(Error::DegenerateCloud("all points coincide".into()));
    }
    let counts: Vec<usize> = scales.iter().map(|&e| box_count(points, dim, e)).collect();
    if counts.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::DegenerateCloud("box counts do not change with scale".into()));
    }
    let x: Vec<f64> = scales.iter().map(|e| -e.ln()).collect();
    let y: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let m = x.len() as f64;
    let xm = x.iter().sum::<f64>() / m;
    let ym = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - xm).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let raw = sxy / sxx;
    let slope = raw.clamp(0.0, dim as f64);
    let mut flags = Vec::new();
    if slope != raw {
        flags.push(format!("slope_clamped_from={raw}"));
    }
    let intercept = ym - raw * xm;
    let rss: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - raw * a).powi(2)).sum();
    let stderr = (rss / (m - 2.0) / sxx).sqrt();
    Ok(BoxDimension {
        source,
        estimate: slope,
        stderr,
        intercept,
        scales,
        counts,
        points: points.len(),
        flags,
    })
}
