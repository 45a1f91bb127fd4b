//! Point clouds approximating the survivor set Λ(V) = ∩ₖ fᵏV.
//!
//! Plain rejection sampling is hopeless at useful depths (the acceptance
//! rate for a horseshoe at depth 20 is about 2⁻²⁰), so the cloud is grown by
//! population splitting: after each step the survivors are cloned back to
//! full size and each clone is jittered on the scale of the current
//! cylinder, e^{−kβ₀}, then re-checked from scratch.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::derivative_log_bound;
use crate::error::{Error, Result};
use crate::geometry::escape::{check_inside_chart, survival_length};
use crate::linalg::{Vector, MAX_DIM};
use crate::rng::{batch_rng, uniform_in};
use crate::scalar::Scalar;
use crate::system::{step, Region, SmoothSystem};

const CHUNK: usize = 2048;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurvivorCloud<T> {
    pub points: Vec<Vector<T>>,
    pub dim: usize,
    pub depth: usize,
    pub population: usize,
    pub seed: u64,
    /// Survivors before resampling at each step.
    pub survivors: Vec<usize>,
    pub flags: Vec<String>,
}

/// Points x with fᵏx ∈ V for k = 0..2·depth, reported as f^depth(x) so that
/// both the past and the future of each reported point stay in V for
/// `depth` steps. When V is all of phase space the cloud is a uniform
/// sample of it.
pub fn survivor_cloud<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    v: &Region<T>,
    depth: usize,
    population: usize,
    seed: u64,
) -> Result<SurvivorCloud<T>> {
    if population == 0 {
        return Err(Error::param("population", "must be positive"));
    }
    check_inside_chart(v, system.chart())?;
    let dim = system.dim();
    if matches!(v, Region::Whole { .. } | Region::Torus { .. }) {
        let points = sample_uniform(v, population, seed);
        return Ok(SurvivorCloud {
            points,
            dim,
            depth,
            population,
            seed,
            survivors: vec![population; 2 * depth],
            flags: vec!["region_is_invariant".into()],
        });
    }

    let beta0 = derivative_log_bound(system, 16).beta0.max(T::lit(1e-3));
    let (lo, hi) = v.bounds();
    let extent: Vec<T> = (0..dim).map(|i| hi[i] - lo[i]).collect();

    let mut pop = sample_uniform(v, population, seed);
    let mut survivors = Vec::with_capacity(2 * depth);
    for k in 1..=2 * depth {
        let alive: Vec<Vector<T>> = pop
            .par_iter()
            .filter(|x| survival_length(system, v, x, k + 1) > k)
            .copied()
            .collect();
        survivors.push(alive.len());
        if alive.is_empty() {
            return Err(Error::EmptySurvivors);
        }
        let width = (-T::from_usize_lossy(k) * beta0).exp();
        let chunks = population.div_ceil(CHUNK);
        pop = (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let mut rng = batch_rng(seed, ((k as u64) << 32) | c as u64);
                let count = CHUNK.min(population - c * CHUNK);
                let alive = &alive;
                let extent = &extent;
                (0..count)
                    .map(move |_| {
                        let parent = alive[rng.random_range(0..alive.len())];
                        let mut child = parent;
                        for i in 0..dim {
                            let u: f64 = rng.random_range(-1.0..1.0);
                            child[i] = child[i] + T::lit(u) * width * extent[i];
                        }
                        if survival_length(system, v, &child, k + 1) > k {
                            child
                        } else {
                            parent
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }

    let mut points: Vec<Vector<T>> = pop
        .par_iter()
        .filter_map(|x| (0..depth).try_fold(*x, |p, _| step(system, &p, true)))
        .collect();
    points.sort_by(|a, b| lex(a, b, dim));
    points.dedup();
    let mut flags = Vec::new();
    if points.len() < population / 2 {
        flags.push(format!("distinct_points={}", points.len()));
    }
    Ok(SurvivorCloud {
        points,
        dim,
        depth,
        population,
        seed,
        survivors,
        flags,
    })
}

fn lex<T: Scalar>(a: &Vector<T>, b: &Vector<T>, dim: usize) -> std::cmp::Ordering {
    for i in 0..dim {
        match a[i].partial_cmp(&b[i]) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn sample_uniform<T: Scalar>(v: &Region<T>, count: usize, seed: u64) -> Vec<Vector<T>> {
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = batch_rng(seed, c as u64);
            let n = CHUNK.min(count - c * CHUNK);
            (0..n).map(move |_| uniform_in(&mut rng, v)).collect::<Vec<_>>()
        })
        .collect()
}

/// Random points of the middle-thirds Cantor set at the given depth, on
/// the first axis.
pub fn cantor_cloud(depth: usize, count: usize, seed: u64) -> Vec<Vector<f64>> {
    let mut rng = batch_rng(seed, 0);
    (0..count)
        .map(|_| {
            let mut x = 0.0;
            let mut scale = 1.0;
            for _ in 0..depth {
                scale /= 3.0;
                if rng.random::<bool>() {
                    x += 2.0 * scale;
                }
            }
            x += scale * rng.random::<f64>();
            let mut v = [0.0; MAX_DIM];
            v[0] = x;
            v
        })
        .collect()
}

/// Uniform points in the unit cube of the given dimension.
pub fn uniform_cloud(dim: usize, count: usize, seed: u64) -> Vec<Vector<f64>> {
    sample_uniform(&Region::unit_box(dim), count, seed)
}
