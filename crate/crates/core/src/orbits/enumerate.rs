//! Enumeration of Fix(fⁿ).
//!
//! Three methods:
//! * symbolic: one orbit per primitive admissible necklace, located by
//!   contracting the branch compositions and polished by Newton;
//! * lattice: exact integer enumeration for toral automorphisms;
//! * newton: multi-start Newton on fⁿ(p) − p over a seed grid.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, SquareMatrix, Vector, MAX_DIM};
use crate::orbits::{classify_orbit, OrbitStatus, PeriodicOrbit};
use crate::scalar::Scalar;
use crate::system::{step, Chart, LatticeModel, Point, SmoothSystem, SymbolicModel};

fn default_max_iterations() -> usize {
    50
}
fn default_tolerance() -> f64 {
    1e-12
}
fn default_dedup() -> f64 {
    1e-8
}

/// Multi-start Newton configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonSettings {
    /// Seeds per axis over U; empty means 200 per axis.
    #[serde(default)]
    pub seeds_per_axis: Vec<usize>,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Convergence threshold on ‖fⁿ(p) − p‖.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Two roots closer than this (sup metric) are the same point.
    #[serde(default = "default_dedup")]
    pub dedup: f64,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self {
            seeds_per_axis: Vec::new(),
            max_iterations: default_max_iterations(),
            tolerance: default_tolerance(),
            dedup: default_dedup(),
        }
    }
}

impl NewtonSettings {
    pub fn with_seeds(seeds_per_axis: &[usize]) -> Self {
        Self {
            seeds_per_axis: seeds_per_axis.to_vec(),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum EnumerationMethod {
    /// Lattice if available, else symbolic, else Newton with defaults.
    Auto,
    Symbolic,
    Lattice,
    Newton(NewtonSettings),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EnumerationDiagnostics {
    pub method: String,
    pub seeds: usize,
    pub converged: usize,
    /// Seeds that failed to converge or escaped.
    pub dropped: usize,
    pub duplicates: usize,
    pub degenerate: usize,
}

/// All primitive periodic orbits with period ≤ `n_max`.
#[derive(Clone, Debug)]
pub struct OrbitTable<T> {
    pub n_max: usize,
    /// Sorted by (period, representative).
    pub orbits: Vec<PeriodicOrbit<T>>,
    pub diagnostics: EnumerationDiagnostics,
}

impl<T: Scalar> OrbitTable<T> {
    /// Enumerates and classifies.
    pub fn build<S: SmoothSystem<T> + ?Sized>(
        system: &S,
        n_max: usize,
        method: &EnumerationMethod,
    ) -> Result<Self> {
        let mut table = enumerate_up_to(system, n_max, method)?;
        table.classify(system)?;
        Ok(table)
    }

    pub fn classify<S: SmoothSystem<T> + ?Sized>(&mut self, system: &S) -> Result<()> {
        let done: Vec<Result<PeriodicOrbit<T>>> = self
            .orbits
            .par_iter()
            .map(|o| classify_orbit(system, o))
            .collect();
        self.orbits = done.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(())
    }

    /// Orbits whose points lie in Fix(fⁿ).
    pub fn fix(&self, n: usize) -> impl Iterator<Item = &PeriodicOrbit<T>> + '_ {
        self.orbits.iter().filter(move |o| n % o.period == 0)
    }

    /// #Fix(fⁿ).
    pub fn fix_count(&self, n: usize) -> usize {
        self.fix(n).map(|o| o.period).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point<T>> + '_ {
        self.orbits.iter().flat_map(|o| o.points.iter())
    }
}

/// Orbits in Fix(fⁿ) (minimal periods dividing n), unclassified.
pub fn enumerate_periodic<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    n: usize,
    method: &EnumerationMethod,
) -> Result<Vec<PeriodicOrbit<T>>> {
    let table = enumerate_up_to(system, n, method)?;
    Ok(table.orbits.into_iter().filter(|o| n % o.period == 0).collect())
}

pub fn enumerate_up_to<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    n_max: usize,
    method: &EnumerationMethod,
) -> Result<OrbitTable<T>> {
    if n_max == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let unavailable = |m: &str| Error::MethodUnavailable {
        method: m.to_string(),
        system: system.name().to_string(),
    };
    let (mut orbits, diagnostics) = match method {
        EnumerationMethod::Auto => {
            if let Some(l) = system.lattice() {
                lattice(system, l, n_max)?
            } else if let Some(m) = system.symbolic() {
                symbolic(system, m, n_max)
            } else {
                newton(system, n_max, &NewtonSettings::default())
            }
        }
        EnumerationMethod::Lattice => {
            let l = system.lattice().ok_or_else(|| unavailable("lattice"))?;
            lattice(system, l, n_max)?
        }
        EnumerationMethod::Symbolic => {
            let m = system.symbolic().ok_or_else(|| unavailable("symbolic"))?;
            symbolic(system, m, n_max)
        }
        EnumerationMethod::Newton(settings) => newton(system, n_max, settings),
    };
    orbits.sort_by(|a, b| {
        a.period
            .cmp(&b.period)
            .then_with(|| a.representative().lex_cmp(b.representative()))
    });
    Ok(OrbitTable {
        n_max,
        orbits,
        diagnostics,
    })
}

/// Rotates the orbit so that the lexicographically smallest point comes first.
fn canonicalize<T: Scalar>(points: &mut Vec<Point<T>>, word: &mut Option<Vec<usize>>) {
    let start = (0..points.len())
        .min_by(|&a, &b| points[a].lex_cmp(&points[b]))
        .unwrap_or(0);
    points.rotate_left(start);
    if let Some(w) = word {
        w.rotate_left(start);
    }
}

/// max_k d(f(x_k), x_{k+1}) with indices mod p.
fn one_step_defect<T: Scalar, S: SmoothSystem<T> + ?Sized>(system: &S, points: &[Point<T>]) -> T {
    let p = points.len();
    let chart = system.chart();
    let mut worst = T::zero();
    for k in 0..p {
        let img = system.map(&points[k].coords);
        let d = chart.sup_distance(&img, &points[(k + 1) % p].coords);
        worst = worst.max(if d.is_finite() { d } else { T::infinity() });
    }
    worst
}

// ---------------------------------------------------------------------------
// Symbolic

/// All Lyndon words (aperiodic necklace representatives) of length
/// ≤ `n_max` over `s` symbols, in lexicographic order.
pub fn lyndon_words(s: usize, n_max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if s == 0 || n_max == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    out.push(w.clone());
    loop {
        let m = w.len();
        while w.len() < n_max {
            let v = w[w.len() - m];
            w.push(v);
        }
        while let Some(&last) = w.last() {
            if last + 1 == s {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
        out.push(w.clone());
    }
    out
}

fn symbolic<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    model: &dyn SymbolicModel<T>,
    n_max: usize,
) -> (Vec<PeriodicOrbit<T>>, EnumerationDiagnostics) {
    let a = model.transitions();
    let words: Vec<Vec<usize>> = lyndon_words(model.symbols(), n_max)
        .into_iter()
        .filter(|w| (0..w.len()).all(|k| a[w[k]][w[(k + 1) % w.len()]] == 1))
        .collect();
    let mut orbits: Vec<PeriodicOrbit<T>> = words
        .par_iter()
        .map(|w| {
            let x0 = locate_word(system, model, w);
            let mut points = Vec::with_capacity(w.len());
            let mut x = x0;
            for &s in w {
                points.push(system.point(x));
                x = model.branch(s, &x);
            }
            let mut word = Some(w.clone());
            let residual = one_step_defect(system, &points);
            canonicalize(&mut points, &mut word);
            PeriodicOrbit::new(points, word, residual)
        })
        .collect();
    for z in model.extra_fixed_points() {
        let pt = system.point(z);
        let residual = one_step_defect(system, std::slice::from_ref(&pt));
        orbits.push(PeriodicOrbit::new(vec![pt], None, residual));
    }
    let diagnostics = EnumerationDiagnostics {
        method: "symbolic".into(),
        seeds: words.len(),
        converged: orbits.len(),
        ..Default::default()
    };
    (orbits, diagnostics)
}

fn locate_word<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    model: &dyn SymbolicModel<T>,
    w: &[usize],
) -> Vector<T> {
    let axis = model.expanding_axis();
    let dim = system.dim();
    let mut q = model.anchor();
    for _ in 0..500 {
        let mut fwd = q;
        for &s in w {
            fwd = model.branch(s, &fwd);
        }
        let mut back = q;
        for &s in w.iter().rev() {
            back = model.branch_inverse(s, &back);
        }
        let mut next = fwd;
        next[axis] = back[axis];
        let moved = (0..dim).fold(T::zero(), |m, i| m.max((next[i] - q[i]).abs()));
        q = next;
        if moved <= T::eps() {
            break;
        }
    }
    // Newton polish on the branch composite.
    for _ in 0..3 {
        let mut fwd = q;
        let mut jac = SquareMatrix::identity(dim);
        for &s in w {
            jac = model.branch_derivative(s, &fwd) * jac;
            fwd = model.branch(s, &fwd);
        }
        let mut r = [T::zero(); MAX_DIM];
        for i in 0..dim {
            r[i] = q[i] - fwd[i];
        }
        if norm(&r, dim) == T::zero() {
            break;
        }
        match jac.sub_identity(T::one()).solve(&r) {
            Some(delta) => {
                for i in 0..dim {
                    q[i] = q[i] + delta[i];
                }
            }
            None => break,
        }
    }
    q
}

// ---------------------------------------------------------------------------
// Lattice

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn mat_mul(a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Column Hermite form of a nonsingular 2×2 integer matrix: returns
/// (a, b, d) with B·ℤ² = [[a, 0], [b, d]]·ℤ², a, d > 0, 0 ≤ b < d.
fn hermite_2x2(m: [[i128; 2]; 2]) -> (i128, i128, i128) {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let (mut g, s, t) = ext_gcd(m[0][0], m[0][1]);
    let mut lower = s * m[1][0] + t * m[1][1];
    if g < 0 {
        g = -g;
        lower = -lower;
    }
    let d = (det / g).abs();
    (g, lower.rem_euclid(d), d)
}

fn lattice<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    model: LatticeModel,
    n_max: usize,
) -> Result<(Vec<PeriodicOrbit<T>>, EnumerationDiagnostics)> {
    let automorphism = match model {
        LatticeModel::Automorphism(a) => a,
        LatticeModel::RotationProduct { rotation, .. } => {
            // θ ↦ θ + ω has period n only if nω ∈ ℤ; then whole circles are fixed.
            for n in 1..=n_max {
                let x = rotation * n as f64;
                if (x - x.round()).abs() < 1e-12 {
                    return Err(Error::NonIsolated(n));
                }
            }
            let diagnostics = EnumerationDiagnostics {
                method: "lattice".into(),
                ..Default::default()
            };
            return Ok((Vec::new(), diagnostics));
        }
    };
    let a: [[i128; 2]; 2] = [
        [automorphism[0][0] as i128, automorphism[0][1] as i128],
        [automorphism[1][0] as i128, automorphism[1][1] as i128],
    ];
    let mut orbits = Vec::new();
    let mut power = [[1i128, 0], [0, 1]];
    for n in 1..=n_max {
        power = mat_mul(a, power);
        let b = [[power[0][0] - 1, power[0][1]], [power[1][0], power[1][1] - 1]];
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if det == 0 {
            return Err(Error::NonIsolated(n));
        }
        let modulus = det.abs();
        let sign = det.signum();
        let (h_a, _h_b, h_d) = hermite_2x2(b);
        let adj = [[b[1][1], -b[0][1]], [-b[1][0], b[0][0]]];
        let step_int = |x: [i128; 2]| -> [i128; 2] {
            [
                (a[0][0] * x[0] + a[0][1] * x[1]).rem_euclid(modulus),
                (a[1][0] * x[0] + a[1][1] * x[1]).rem_euclid(modulus),
            ]
        };
        let mut seen = std::collections::HashSet::new();
        for i in 0..h_a {
            for j in 0..h_d {
                let x = [
                    (sign * (adj[0][0] * i + adj[0][1] * j)).rem_euclid(modulus),
                    (sign * (adj[1][0] * i + adj[1][1] * j)).rem_euclid(modulus),
                ];
                if seen.contains(&x) {
                    continue;
                }
                let mut cycle = vec![x];
                let mut y = step_int(x);
                while y != x && cycle.len() <= n {
                    cycle.push(y);
                    y = step_int(y);
                }
                for c in &cycle {
                    seen.insert(*c);
                }
                if cycle.len() != n {
                    continue;
                }
                let start = (0..n).min_by_key(|&k| cycle[k]).unwrap_or(0);
                cycle.rotate_left(start);
                let m = T::lit(modulus as f64);
                let points: Vec<Point<T>> = cycle
                    .iter()
                    .map(|c| Point::torus(&[T::lit(c[0] as f64) / m, T::lit(c[1] as f64) / m]))
                    .collect();
                let residual = one_step_defect(system, &points);
                orbits.push(PeriodicOrbit::new(points, None, residual));
            }
        }
    }
    let diagnostics = EnumerationDiagnostics {
        method: "lattice".into(),
        converged: orbits.len(),
        ..Default::default()
    };
    Ok((orbits, diagnostics))
}

// ---------------------------------------------------------------------------
// Newton

struct Root<T> {
    point: Vector<T>,
    degenerate: bool,
}

/// fⁿ(x) − x (wrapped on the torus) and Dfⁿ(x); `None` on escape.
fn shoot<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    x: &Vector<T>,
    n: usize,
) -> Option<(Vector<T>, SquareMatrix<T>)> {
    // The map rule is followed past the chart edge: seeds near a saddle
    // of high period leave the chart long before Newton settles them.
    let chart = system.chart();
    let mut v = *x;
    let mut jac = SquareMatrix::identity(system.dim());
    for _ in 0..n {
        jac = system.derivative(&v) * jac;
        v = system.map(&v);
        if matches!(chart, Chart::Torus { .. }) {
            v = chart.point(v).coords;
        }
    }
    let r = chart.displacement(x, &v);
    (r.iter().all(|c| c.is_finite()) && jac.is_finite()).then_some((r, jac))
}

fn newton_root<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    seed: &Vector<T>,
    n: usize,
    settings: &NewtonSettings,
) -> Option<Root<T>> {
    let dim = system.dim();
    let tol = T::lit(settings.tolerance).max(T::lit(100.0) * T::eps());
    let loose = T::lit(1e-8).max(T::lit(1e4) * T::eps());
    let mut x = *seed;
    let (mut r, mut jac) = shoot(system, &x, n)?;
    let mut nr = norm(&r, dim);
    for _ in 0..settings.max_iterations {
        if nr <= tol {
            break;
        }
        let a = jac.sub_identity(T::one());
        let mut neg = r;
        for v in neg.iter_mut().take(dim) {
            *v = -*v;
        }
        let delta = a.solve(&neg)?;
        let mut t = T::one();
        let mut accepted = None;
        for _ in 0..30 {
            let mut cand = x;
            for i in 0..dim {
                cand[i] = cand[i] + t * delta[i];
            }
            if cand.iter().all(|c| c.is_finite()) {
                let cand = system.point(cand).coords;
                if let Some((r2, j2)) = shoot(system, &cand, n) {
                    let n2 = norm(&r2, dim);
                    if n2 < nr {
                        accepted = Some((cand, r2, j2, n2));
                        break;
                    }
                }
            }
            t = t / T::lit(2.0);
        }
        let step_len = norm(&delta, dim) * t;
        match accepted {
            Some((c, r2, j2, n2)) => {
                x = c;
                r = r2;
                jac = j2;
                nr = n2;
            }
            None => break,
        }
        if step_len <= T::lit(1e-13) && nr <= loose {
            break;
        }
    }
    if !(nr <= tol || nr <= loose && nr <= T::lit(1e-8).max(tol)) {
        return None;
    }
    let a = jac.sub_identity(T::one());
    let degenerate = a.det().abs() <= T::lit(1e-10) * T::one().max(jac.max_abs());
    Some(Root {
        point: x,
        degenerate,
    })
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn cell_key<T: Scalar>(v: &Vector<T>, dim: usize, h: T) -> [i64; MAX_DIM] {
    let mut k = [0i64; MAX_DIM];
    for i in 0..dim {
        k[i] = (v[i] / h).floor().to_i64().unwrap_or(i64::MAX);
    }
    k
}

struct PointIndex<T> {
    cell: T,
    map: HashMap<[i64; MAX_DIM], Vec<Vector<T>>>,
}

impl<T: Scalar> PointIndex<T> {
    fn new(cell: T) -> Self {
        Self {
            cell,
            map: HashMap::new(),
        }
    }

    fn insert(&mut self, v: Vector<T>, dim: usize) {
        self.map.entry(cell_key(&v, dim, self.cell)).or_default().push(v);
    }

    fn near(&self, v: &Vector<T>, chart: &Chart<T>, tol: T) -> bool {
        let dim = chart.dim();
        let base = cell_key(v, dim, self.cell);
        let wraps = matches!(chart, Chart::Torus { .. });
        let per = (T::one() / self.cell).ceil().to_i64().unwrap_or(1).max(1);
        let mut offsets = vec![[0i64; MAX_DIM]];
        for i in 0..dim {
            let mut next = Vec::with_capacity(offsets.len() * 3);
            for o in &offsets {
                for d in -1..=1 {
                    let mut o2 = *o;
                    o2[i] = d;
                    next.push(o2);
                }
            }
            offsets = next;
        }
        offsets.iter().any(|o| {
            let mut key = base;
            for i in 0..dim {
                key[i] += o[i];
                if wraps {
                    key[i] = key[i].rem_euclid(per);
                }
            }
            self.map
                .get(&key)
                .is_some_and(|vs| vs.iter().any(|w| chart.sup_distance(v, w) <= tol))
        })
    }
}

fn newton<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    n_max: usize,
    settings: &NewtonSettings,
) -> (Vec<PeriodicOrbit<T>>, EnumerationDiagnostics) {
    let dim = system.dim();
    let chart = *system.chart();
    let per_axis = if settings.seeds_per_axis.is_empty() {
        vec![200; dim]
    } else {
        settings.seeds_per_axis.clone()
    };
    let seeds = system.region().grid(&per_axis);
    let dedup = T::lit(settings.dedup);
    let mut index = PointIndex::new(T::lit(1e-4));
    let mut orbits = Vec::new();
    let mut diag = EnumerationDiagnostics {
        method: "newton".into(),
        ..Default::default()
    };
    for n in 1..=n_max {
        let roots: Vec<Option<Root<T>>> = seeds
            .par_iter()
            .map(|s| newton_root(system, s, n, settings))
            .collect();
        diag.seeds += seeds.len();
        for root in roots {
            let Some(root) = root else {
                diag.dropped += 1;
                continue;
            };
            diag.converged += 1;
            if index.near(&root.point, &chart, dedup) {
                diag.duplicates += 1;
                continue;
            }
            // Minimal period and orbit points.
            let mut points = vec![system.point(root.point)];
            let mut v = root.point;
            let mut escaped = false;
            let mut period = n;
            for k in 1..=n {
                match step(system, &v, true) {
                    Some(next) => v = next,
                    None => {
                        escaped = true;
                        break;
                    }
                }
                if divisors(n).contains(&k) && chart.sup_distance(&v, &root.point) <= dedup * T::lit(10.0) {
                    period = k;
                    break;
                }
                points.push(system.point(v));
            }
            if escaped {
                diag.dropped += 1;
                continue;
            }
            points.truncate(period);
            for p in &points {
                index.insert(p.coords, dim);
            }
            let residual = one_step_defect(system, &points);
            let mut word = None;
            canonicalize(&mut points, &mut word);
            let mut orbit = PeriodicOrbit::new(points, word, residual);
            if root.degenerate {
                orbit.status = OrbitStatus::Degenerate;
                diag.degenerate += 1;
            }
            orbits.push(orbit);
        }
    }
    (orbits, diag)
}
