//! Pressure estimators over enumerated periodic orbits and separated sets.

mod growth;
mod limits;
mod separated;
mod volume;

pub use growth::{growth_estimate, GrowthEstimate, GrowthMethod, ScheduleCell};
pub use limits::{bowen_fixpoint_pressure, gap_estimate, p_sp_banded, p_sp_limit, GapEstimate};
pub use separated::{separated_growth, separated_pressure, SeparatedEstimate, SeparatedSettings};
pub use volume::{symbolic_volume_shift, unstable_potential_min, volume_birkhoff, volume_pressure, VolumeReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::{filter_membership, OrbitTable, PeriodicOrbit, SaddleFilter};
use crate::potential::{Potential, PotentialKind};
use crate::scalar::Scalar;
use crate::system::SmoothSystem;

/// One n of a partition-sum table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesRow<T> {
    pub n: usize,
    pub q: T,
    pub log_q: T,
    pub log_q_over_n: T,
    /// Periodic points (not orbits) that contributed.
    pub count: usize,
    /// The filtered set was empty and `q` is the fallback exp(n·min φ).
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PressureSeries<T> {
    pub potential: String,
    /// `None` sums over all of Fix(fⁿ).
    pub filter: Option<SaddleFilter>,
    pub rows: Vec<SeriesRow<T>>,
}

impl<T: Scalar> PressureSeries<T> {
    pub fn row(&self, n: usize) -> Option<&SeriesRow<T>> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn all_fallback(&self) -> bool {
        self.rows.iter().all(|r| r.fallback)
    }

    /// Builds a series from precomputed log Q_n values (no fallback rows).
    pub fn from_log_values(potential: &str, values: &[(usize, T, usize)]) -> Self {
        Self {
            potential: potential.to_string(),
            filter: None,
            rows: values
                .iter()
                .map(|&(n, log_q, count)| make_row(n, log_q, count, false))
                .collect(),
        }
    }
}

fn make_row<T: Scalar>(n: usize, log_q: T, count: usize, fallback: bool) -> SeriesRow<T> {
    SeriesRow {
        n,
        q: log_q.exp(),
        log_q,
        log_q_over_n: log_q / T::from_usize_lossy(n),
        count,
        fallback,
    }
}

/// S_pφ over one period of the orbit, p its minimal period.
pub fn orbit_birkhoff<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    phi: &Potential<T>,
    orbit: &PeriodicOrbit<T>,
) -> Result<T> {
    if phi.kind() == PotentialKind::VolumeUnstable {
        return volume_birkhoff(orbit);
    }
    let mut acc = T::zero();
    for x in &orbit.points {
        acc = acc + phi.eval(system, &x.coords)?;
    }
    Ok(acc)
}

/// Numerically stable log Σ e^{x_i} in the given order.
pub(crate) fn log_sum_exp<T: Scalar>(terms: &[T]) -> T {
    let m = terms.iter().fold(T::neg_infinity(), |a, b| a.max(*b));
    if !m.is_finite() {
        return m;
    }
    let s: T = terms.iter().map(|t| (*t - m).exp()).sum();
    m + s.ln()
}

/// The per-point value of min φ used when the filtered set is empty.
///
/// Continuous and symbolic potentials use their minimum on the grid of U
/// at `resolution` nodes per axis; the volume potential uses the minimum of
/// φᵘ over all saddle points of the table.
pub fn fallback_minimum<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    phi: &Potential<T>,
    resolution: usize,
) -> Result<T> {
    match phi.kind() {
        PotentialKind::VolumeUnstable => unstable_potential_min(table),
        _ => phi.min_on_grid(system, resolution),
    }
}

/// Q_n for one n: Σ over accepted x ∈ Fix(fⁿ) of exp S_nφ(x). An orbit of
/// minimal period p | n contributes p points with S_nφ = (n/p)·S_pφ.
pub fn q_sp<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    phi: &Potential<T>,
    filter: Option<&SaddleFilter>,
    n: usize,
    min_phi: T,
) -> Result<SeriesRow<T>> {
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    if n > table.n_max {
        return Err(Error::MissingOrbits(n));
    }
    let mut terms = Vec::new();
    let mut count = 0;
    for orbit in table.fix(n) {
        if let Some(f) = filter {
            if !filter_membership(orbit, f) {
                continue;
            }
        }
        let s = orbit_birkhoff(system, phi, orbit)?;
        let reps = T::from_usize_lossy(n / orbit.period);
        terms.push(T::from_usize_lossy(orbit.period).ln() + reps * s);
        count += orbit.period;
    }
    let nt = T::from_usize_lossy(n);
    Ok(if terms.is_empty() {
        make_row(n, nt * min_phi, 0, true)
    } else {
        make_row(n, log_sum_exp(&terms), count, false)
    })
}

/// Q_n for n = 1..=table.n_max.
pub fn saddle_series<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    phi: &Potential<T>,
    filter: Option<&SaddleFilter>,
    min_phi: T,
) -> Result<PressureSeries<T>> {
    if let Some(f) = filter {
        f.validate()?;
    }
    let rows = (1..=table.n_max)
        .map(|n| q_sp(system, table, phi, filter, n, min_phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(PressureSeries {
        potential: phi.name().to_string(),
        filter: filter.copied(),
        rows,
    })
}
