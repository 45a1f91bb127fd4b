//! Monte Carlo escape rates from a neighborhood V.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{batch_rng, uniform_in};
use crate::scalar::Scalar;
use crate::system::{step, Chart, Region, SmoothSystem};

pub const MIN_SAMPLES: usize = 10_000;
const BATCH: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeRateEstimate<T> {
    pub samples: usize,
    pub seed: u64,
    /// survivors[n − 1]: samples with f⁰x, …, fⁿ⁻¹x all in V.
    pub survivors: Vec<usize>,
    /// p_n = survivors / samples.
    pub fractions: Vec<T>,
    /// 95% binomial half-widths of p_n.
    pub half_widths: Vec<T>,
    pub volume: T,
    /// Tail regression slope of log p_n: the Ē(V) surrogate.
    pub upper_rate: T,
    /// Smallest one-step slope in the tail: the E̲(V) surrogate.
    pub lower_rate: T,
    /// Largest one-step slope in the tail.
    pub max_step_rate: T,
    pub stderr: T,
    pub window: (usize, usize),
    pub flags: Vec<String>,
}

impl<T: Scalar> EscapeRateEstimate<T> {
    pub fn n_max(&self) -> usize {
        self.survivors.len()
    }
}

/// True when V is all of phase space, so nothing can leave it.
fn is_everything<T: Scalar>(v: &Region<T>) -> bool {
    matches!(v, Region::Whole { .. } | Region::Torus { .. })
}

pub(crate) fn check_inside_chart<T: Scalar>(v: &Region<T>, chart: &Chart<T>) -> Result<()> {
    if v.dim() != chart.dim() {
        return Err(Error::param("region", "dimension does not match the system"));
    }
    if !(v.volume() > T::zero()) {
        return Err(Error::param("region", "volume must be positive"));
    }
    if let Region::Box { lo, hi, dim } = v {
        let (clo, chi) = chart.bounds();
        if (0..*dim).any(|i| lo[i] < clo[i] || hi[i] > chi[i]) {
            return Err(Error::param("region", "box must lie inside the system chart"));
        }
    }
    Ok(())
}

/// Number of leading iterates (at most `n_max`) inside V.
pub(crate) fn survival_length<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    v: &Region<T>,
    x: &crate::linalg::Vector<T>,
    n_max: usize,
) -> usize {
    if is_everything(v) {
        return n_max;
    }
    let mut p = *x;
    for k in 0..n_max {
        if !v.contains(&p) {
            return k;
        }
        if k + 1 == n_max {
            break;
        }
        match step(system, &p, true) {
            Some(next) => p = next,
            None => return k + 1,
        }
    }
    n_max
}

/// Estimates vol(∩_{k<n} f⁻ᵏV) / vol(V) by uniform sampling in V, for
/// n = 1..=n_max. V = whole space means M itself and nothing escapes.
pub fn escape_rate<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    v: &Region<T>,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<EscapeRateEstimate<T>> {
    if samples < MIN_SAMPLES {
        return Err(Error::param("samples", format!("need at least {MIN_SAMPLES}")));
    }
    if n_max < 3 {
        return Err(Error::param("n_max", "need at least 3"));
    }
    check_inside_chart(v, system.chart())?;
    let batches = samples.div_ceil(BATCH);
    let hist: Vec<Vec<usize>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(seed, b as u64);
            let count = BATCH.min(samples - b * BATCH);
            let mut h = vec![0usize; n_max + 1];
            for _ in 0..count {
                let x = uniform_in(&mut rng, v);
                h[survival_length(system, v, &x, n_max)] += 1;
            }
            h
        })
        .collect();
    let mut by_length = vec![0usize; n_max + 1];
    for h in &hist {
        for (a, b) in by_length.iter_mut().zip(h) {
            *a += b;
        }
    }
    // survivors[n-1] = #{L ≥ n}
    let mut survivors = vec![0usize; n_max];
    let mut acc = 0;
    for n in (1..=n_max).rev() {
        acc += by_length[n];
        survivors[n - 1] = acc;
    }
    let total = T::from_usize_lossy(samples);
    let fractions: Vec<T> = survivors.iter().map(|&k| T::from_usize_lossy(k) / total).collect();
    let half_widths: Vec<T> = fractions
        .iter()
        .map(|p| T::lit(1.96) * (*p * (T::one() - *p) / total).sqrt())
        .collect();

    let mut flags = Vec::new();
    let mut hi = n_max;
    if let Some(first_zero) = survivors.iter().position(|&k| k == 0) {
        hi = first_zero; // last n with survivors
        flags.push(format!("no_survivors_from_n={}", first_zero + 1));
    }
    let lo = (n_max / 2).max(1).min(hi.saturating_sub(2).max(1));
    if hi < lo + 2 {
        return Err(Error::WindowTooSmall { lo, hi, min: 3 });
    }
    let (slope, stderr) = weighted_log_slope(&survivors, &fractions, lo, hi);
    let mut lower = T::infinity();
    let mut upper_step = T::neg_infinity();
    for n in lo..hi {
        let d = fractions[n].ln() - fractions[n - 1].ln();
        lower = lower.min(d);
        upper_step = upper_step.max(d);
    }
    Ok(EscapeRateEstimate {
        samples,
        seed,
        survivors,
        fractions,
        half_widths,
        volume: v.volume(),
        upper_rate: slope,
        lower_rate: lower,
        max_step_rate: upper_step,
        stderr,
        window: (lo, hi),
        flags,
    })
}

/// Weighted least squares of log p_n on n over [lo, hi] with weights equal
/// to the survivor counts, and the slope's standard error from the
/// binomial variance (1 − p)/k of log p_n.
fn weighted_log_slope<T: Scalar>(survivors: &[usize], p: &[T], lo: usize, hi: usize) -> (T, T) {
    let idx: Vec<usize> = (lo..=hi).collect();
    let w: Vec<T> = idx.iter().map(|&n| T::from_usize_lossy(survivors[n - 1])).collect();
    let x: Vec<T> = idx.iter().map(|&n| T::from_usize_lossy(n)).collect();
    let y: Vec<T> = idx.iter().map(|&n| p[n - 1].ln()).collect();
    let sw: T = w.iter().copied().sum();
    let xm = w.iter().zip(&x).map(|(a, b)| *a * *b).sum::<T>() / sw;
    let ym = w.iter().zip(&y).map(|(a, b)| *a * *b).sum::<T>() / sw;
    let sxx: T = w.iter().zip(&x).map(|(a, b)| *a * (*b - xm) * (*b - xm)).sum();
    let sxy: T = (0..idx.len()).map(|i| w[i] * (x[i] - xm) * (y[i] - ym)).sum();
    let slope = sxy / sxx;
    let var: T = (0..idx.len())
        .map(|i| {
            let c = w[i] * (x[i] - xm) / sxx;
            let k = w[i].max(T::one());
            c * c * (T::one() - p[idx[i] - 1]) / k
        })
        .sum();
    (slope, var.sqrt())
}
