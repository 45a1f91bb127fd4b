//! Saddle-point pressure limits, Bowen periodic-point pressure and the
//! α(φ) gap proxy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::{OrbitTable, SaddleFilter};
use crate::potential::Potential;
use crate::pressure::{growth_estimate, orbit_birkhoff, saddle_series, GrowthEstimate, ScheduleCell};
use crate::scalar::Scalar;
use crate::system::SmoothSystem;

/// Non-empty, strictly decreasing, positive and at most `upper`.
pub(crate) fn check_schedule(name: &str, values: &[f64], upper: f64) -> Result<()> {
    if values.is_empty() {
        return Err(Error::param(name, "must not be empty"));
    }
    if values.iter().any(|v| !(*v > 0.0 && *v <= upper)) {
        return Err(Error::param(name, format!("values must lie in (0, {upper}]")));
    }
    if values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::param(name, "must be strictly decreasing"));
    }
    Ok(())
}

/// P_SP(φ, α, c) along a decreasing c schedule. The reported estimate is
/// the one at the smallest c; every cell is kept in `schedule`, and a drop
/// larger than twice the standard error between consecutive cells is
/// flagged.
#[allow(clippy::too_many_arguments)]
pub fn p_sp_limit<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    phi: &Potential<T>,
    alpha: f64,
    c_schedule: &[f64],
    window: (usize, usize),
    min_phi: T,
) -> Result<GrowthEstimate<T>> {
    check_schedule("c_schedule", c_schedule, 1.0)?;
    let mut cells = Vec::with_capacity(c_schedule.len());
    let mut last = None;
    let mut any_saddle = false;
    for &c in c_schedule {
        let filter = SaddleFilter::new(alpha, c);
        let series = saddle_series(system, table, phi, Some(&filter), min_phi)?;
        any_saddle |= !series.all_fallback();
        let g = growth_estimate(&series, window)?;
        cells.push(ScheduleCell {
            alpha,
            c,
            estimate: g.estimate,
            stderr: g.slope_stderr,
            fallback_rows: series.rows.iter().filter(|r| r.fallback).count(),
        });
        last = Some(g);
    }
    if !any_saddle {
        return Err(Error::NoSaddles);
    }
    let mut out = last.expect("non-empty schedule");
    for w in cells.windows(2) {
        let slack = T::lit(2.0) * w[0].stderr.max(w[1].stderr) + T::lit(1e-12);
        if w[1].estimate < w[0].estimate - slack {
            out.flags.push(format!("c_monotonicity_violation_at_c={}", w[1].c));
        }
    }
    out.schedule = cells;
    Ok(out)
}

/// P_SP(φ, [α, β], c) from the banded filtration.
#[allow(clippy::too_many_arguments)]
pub fn p_sp_banded<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    phi: &Potential<T>,
    alpha: f64,
    beta: f64,
    c: f64,
    window: (usize, usize),
    min_phi: T,
) -> Result<GrowthEstimate<T>> {
    if !(alpha < beta) {
        return Err(Error::param("beta", "must exceed alpha"));
    }
    let filter = SaddleFilter::banded(alpha, beta, c);
    let series = saddle_series(system, table, phi, Some(&filter), min_phi)?;
    let mut g = growth_estimate(&series, window)?;
    g.schedule.push(ScheduleCell {
        alpha,
        c,
        estimate: g.estimate,
        stderr: g.slope_stderr,
        fallback_rows: series.rows.iter().filter(|r| r.fallback).count(),
    });
    Ok(g)
}

/// Growth of Σ_{Fix(fⁿ)} exp S_nφ with no filter.
pub fn bowen_fixpoint_pressure<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    phi: &Potential<T>,
    window: (usize, usize),
    min_phi: T,
) -> Result<GrowthEstimate<T>> {
    let series = saddle_series(system, table, phi, None, min_phi)?;
    growth_estimate(&series, window)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapEstimate<T> {
    /// Bowen estimate of P_top(φ).
    pub p_top: GrowthEstimate<T>,
    /// max over enumerated orbits of (1/p)·S_pφ.
    pub max_average: T,
    /// p_top − max_average; over-estimates α(φ) in general.
    pub gap: T,
}

/// α(φ) proxy: Bowen pressure minus the best periodic-orbit average of φ.
/// With no periodic orbits the average falls back to min φ, matching the
/// empty-set convention of the partition sums.
pub fn gap_estimate<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    phi: &Potential<T>,
    window: (usize, usize),
    min_phi: T,
) -> Result<GapEstimate<T>> {
    let mut p_top = bowen_fixpoint_pressure(system, table, phi, window, min_phi)?;
    let mut best = T::neg_infinity();
    for orbit in &table.orbits {
        let avg = orbit_birkhoff(system, phi, orbit)? / T::from_usize_lossy(orbit.period);
        best = best.max(avg);
    }
    if table.orbits.is_empty() {
        best = min_phi;
        p_top.flags.push("no_periodic_orbits".to_string());
    }
    Ok(GapEstimate {
        gap: p_top.estimate - best,
        max_average: best,
        p_top,
    })
}
