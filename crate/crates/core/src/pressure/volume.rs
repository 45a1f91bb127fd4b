//! The unstable-volume potential φᵘ = −log|det Df|Eᵘ| and volume pressure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{transfer_pressure, WeightedShift};
use crate::orbits::{OrbitStatus, OrbitTable, PeriodicOrbit, SaddleFilter};
use crate::potential::Potential;
use crate::pressure::limits::check_schedule;
use crate::pressure::{growth_estimate, saddle_series, GrowthEstimate, ScheduleCell};
use crate::scalar::Scalar;
use crate::system::SmoothSystem;

/// S_pφᵘ over one period: −log|det Df^p|Eᵘ| from the unstable block.
pub fn volume_birkhoff<T: Scalar>(orbit: &PeriodicOrbit<T>) -> Result<T> {
    match (&orbit.status, &orbit.splitting) {
        (OrbitStatus::Saddle, Some(s)) => Ok(-s.log_unstable_volume()),
        (OrbitStatus::Unclassified, _) => Err(Error::Unclassified),
        _ => Err(Error::NotSaddle),
    }
}

/// min φᵘ over every saddle point in the table.
pub fn unstable_potential_min<T: Scalar>(table: &OrbitTable<T>) -> Result<T> {
    let mut best: Option<T> = None;
    for orbit in table.orbits.iter().filter(|o| o.is_saddle()) {
        if let Some(s) = &orbit.splitting {
            for r in &s.unstable_steps {
                let v = -r.det().abs().ln();
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
    }
    best.ok_or(Error::NoSaddles)
}

/// The shift model of φᵘ when the system is coded and φᵘ is constant on
/// each symbol's cylinder, as checked on every coded orbit of the table.
pub fn symbolic_volume_shift<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
) -> Option<WeightedShift<T>> {
    let model = system.symbolic()?;
    let s = model.symbols();
    let mut values = vec![None; s];
    for orbit in table.orbits.iter().filter(|o| o.period == 1) {
        if let Some(w) = &orbit.word {
            values[w[0]] = Some(volume_birkhoff(orbit).ok()?);
        }
    }
    let values: Vec<T> = values.into_iter().collect::<Option<Vec<_>>>()?;
    for orbit in &table.orbits {
        let Some(w) = &orbit.word else { continue };
        let exact: T = w.iter().map(|&i| values[i]).sum();
        let got = volume_birkhoff(orbit).ok()?;
        if (got - exact).abs() > T::lit(1e-9) * (T::one() + exact.abs()) {
            return None;
        }
    }
    let f64_values: Vec<f64> = values.iter().map(|v| v.as_f64()).collect();
    WeightedShift::new(model.transitions(), &f64_values).ok()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeReport<T> {
    /// Estimate at the smallest (α, c), with the whole grid in `schedule`.
    pub estimate: GrowthEstimate<T>,
    /// sup(h + ∫φᵘ) from the shift model, when there is one.
    pub oracle: Option<T>,
}

/// Nested extrapolation of P_SP(φᵘ, α, c): c → 0 inside, α → 0 outside.
/// Both schedules must be strictly decreasing; the reported value is the
/// last grid cell.
pub fn volume_pressure<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    table: &OrbitTable<T>,
    alpha_schedule: &[f64],
    c_schedule: &[f64],
    window: (usize, usize),
) -> Result<VolumeReport<T>> {
    check_schedule("alpha_schedule", alpha_schedule, f64::MAX)?;
    check_schedule("c_schedule", c_schedule, 1.0)?;
    let min_phi = unstable_potential_min(table)?;
    let phi = Potential::volume_unstable();
    let mut cells = Vec::new();
    let mut last = None;
    let mut any_saddle = false;
    for &alpha in alpha_schedule {
        for &c in c_schedule {
            let filter = SaddleFilter::new(alpha, c);
            let series = saddle_series(system, table, &phi, Some(&filter), min_phi)?;
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
    }
    if !any_saddle {
        return Err(Error::NoSaddles);
    }
    let mut estimate = last.expect("non-empty schedules");
    estimate.schedule = cells;
    let oracle = symbolic_volume_shift(system, table).and_then(|w| transfer_pressure(&w).ok());
    Ok(VolumeReport { estimate, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::EnumerationMethod;
    use crate::system::catalog::{CatMap, Henon, LinearHorseshoe, RotationCat};

    #[test]
    fn horseshoe_volume_pressure() {
        let hs = LinearHorseshoe::<f64>::standard();
        let table = OrbitTable::build(&hs, 10, &EnumerationMethod::Symbolic).unwrap();
        for o in &table.orbits {
            let v = volume_birkhoff(o).unwrap();
            assert!((v + o.period as f64 * 4f64.ln()).abs() < 1e-12);
        }
        let r = volume_pressure(&hs, &table, &[0.5, 0.25], &[0.5, 0.1], (4, 10)).unwrap();
        let expected = 2f64.ln() - 4f64.ln();
        assert!((r.estimate.estimate - expected).abs() < 1e-9);
        assert!((r.oracle.unwrap() - expected).abs() < 1e-12);
        assert_eq!(r.estimate.schedule.len(), 4);
    }

    #[test]
    fn cat_volume_pressure_vanishes() {
        let cat = CatMap::<f64>::standard();
        let table = OrbitTable::build(&cat, 12, &EnumerationMethod::Lattice).unwrap();
        let r = volume_pressure(&cat, &table, &[0.5], &[0.5], (6, 12)).unwrap();
        assert!(r.estimate.estimate.abs() < 0.01);
        assert!(r.oracle.is_none());
    }

    #[test]
    fn henon_fixed_point_volume() {
        let h = Henon::<f64>::classic();
        let table = OrbitTable::build(
            &h,
            1,
            &EnumerationMethod::Newton(crate::orbits::NewtonSettings::with_seeds(&[30, 30])),
        )
        .unwrap();
        let o = table.orbits.iter().find(|o| o.representative().coords[0] > 0.0).unwrap();
        assert!((volume_birkhoff(o).unwrap() + 1.92375f64.ln()).abs() < 1e-5);
    }

    #[test]
    fn no_saddles_without_orbits() {
        let sys = RotationCat::<f64>::standard();
        let table = OrbitTable::build(&sys, 6, &EnumerationMethod::Auto).unwrap();
        assert!(table.orbits.is_empty());
        assert_eq!(
            volume_pressure(&sys, &table, &[0.5], &[0.5], (2, 6)),
            Err(Error::NoSaddles)
        );
    }
}
