//! The expansion rate s = lim (1/n)·log max‖Dfⁿ‖.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{SquareMatrix, Vector};
use crate::scalar::Scalar;
use crate::system::{step, Region, SmoothSystem};

pub const MIN_RESOLUTION: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionEstimate<T> {
    /// a_n = (1/n)·max log‖Dfⁿ(x)‖ for n = 1, 2, …
    pub rates: Vec<T>,
    /// Points that entered the maximum at each n.
    pub points: Vec<usize>,
    /// min over the window of a_n (subadditivity makes this an upper
    /// estimate of the limit).
    pub estimate: T,
    pub window: (usize, usize),
    pub resolution: usize,
    pub flags: Vec<String>,
}

/// log‖Dfⁿ(x)‖ along an orbit that keeps its first n iterates in U, with
/// the product renormalized each step.
fn log_norm_along<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    region: &Region<T>,
    x: &Vector<T>,
    n_max: usize,
) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max);
    let mut v = *x;
    let mut m = SquareMatrix::identity(system.dim());
    let mut log_scale = T::zero();
    for k in 0..n_max {
        if !region.contains(&v) {
            break;
        }
        m = system.derivative(&v) * m;
        let s = m.max_abs();
        if !(s > T::zero() && s.is_finite()) {
            break;
        }
        m = m.scale(T::one() / s);
        log_scale = log_scale + s.ln();
        out.push(m.operator_norm().ln() + log_scale);
        if k + 1 < n_max {
            match step(system, &v, true) {
                Some(next) => v = next,
                None => break,
            }
        }
    }
    out
}

/// a_n over the grid of U (`resolution` nodes per axis) and any extra
/// anchor points known to lie in Λ, such as periodic points. Each point
/// counts for the n whose first n iterates stay in U.
pub fn expansion_rate<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    resolution: usize,
    n_max: usize,
    anchors: &[Vector<T>],
) -> Result<ExpansionEstimate<T>> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::param("resolution", format!("need at least {MIN_RESOLUTION} per axis")));
    }
    if n_max == 0 {
        return Err(Error::param("n_max", "must be positive"));
    }
    let region = system.region();
    let mut pts = region.grid(&vec![resolution; system.dim()]);
    pts.extend_from_slice(anchors);
    let per_point: Vec<Vec<T>> = pts
        .par_iter()
        .map(|x| log_norm_along(system, region, x, n_max))
        .collect();
    let mut rates = Vec::new();
    let mut counts = Vec::new();
    let mut flags = Vec::new();
    for n in 1..=n_max {
        let mut best = T::neg_infinity();
        let mut count = 0;
        for row in &per_point {
            if let Some(v) = row.get(n - 1) {
                best = best.max(*v);
                count += 1;
            }
        }
        if count == 0 {
            flags.push(format!("no_orbit_stays_in_region_from_n={n}"));
            break;
        }
        rates.push(best / T::from_usize_lossy(n));
        counts.push(count);
    }
    if rates.is_empty() {
        return Err(Error::EmptySurvivors);
    }
    let estimate = rates.iter().fold(T::infinity(), |a, b| a.min(*b)).max(T::zero());
    Ok(ExpansionEstimate {
        window: (1, rates.len()),
        rates,
        points: counts,
        estimate,
        resolution,
        flags,
    })
}
