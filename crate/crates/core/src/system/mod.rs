//! Points, charts, regions and the [`SmoothSystem`] abstraction.

pub mod catalog;

use std::fmt::Debug;

use crate::error::Error;
use crate::linalg::{SquareMatrix, Vector, MAX_DIM};
use crate::scalar::Scalar;

/// Hard cap on |k| for [`iterate`].
pub const MAX_ITERATION: i64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Torus,
    Planar,
}

/// A point of the phase space. Torus coordinates live in [0,1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<T> {
    pub coords: Vector<T>,
    pub dim: usize,
    pub chart: ChartKind,
}

impl<T: Scalar> Point<T> {
    pub fn planar(coords: &[T]) -> Self {
        let mut c = [T::zero(); MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Self {
            coords: c,
            dim: coords.len(),
            chart: ChartKind::Planar,
        }
    }

    pub fn torus(coords: &[T]) -> Self {
        let mut c = [T::zero(); MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        for x in c.iter_mut().take(coords.len()) {
            *x = wrap_unit(*x);
        }
        Self {
            coords: c,
            dim: coords.len(),
            chart: ChartKind::Torus,
        }
    }

    pub fn from_f64(chart: ChartKind, coords: &[f64]) -> Self {
        let v: Vec<T> = coords.iter().map(|&x| T::lit(x)).collect();
        match chart {
            ChartKind::Torus => Self::torus(&v),
            ChartKind::Planar => Self::planar(&v),
        }
    }

    pub fn with_coords(&self, coords: Vector<T>) -> Self {
        let mut out = Self { coords, ..*self };
        if out.chart == ChartKind::Torus {
            for x in out.coords.iter_mut().take(out.dim) {
                *x = wrap_unit(*x);
            }
        }
        out
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords[..self.dim]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.as_slice().iter().map(|x| x.as_f64()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }

    /// Lexicographic comparison of coordinates.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for i in 0..self.dim {
            match self.coords[i].partial_cmp(&other.coords[i]) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Reduces to [0,1).
#[inline]
pub fn wrap_unit<T: Scalar>(x: T) -> T {
    let r = x - x.floor();
    if r >= T::one() {
        T::zero()
    } else {
        r
    }
}

/// Reduces to [-1/2, 1/2).
#[inline]
pub fn wrap_centered<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    wrap_unit(x + half) - half
}

/// Domain chart of a system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chart<T> {
    Torus { dim: usize },
    Planar { lo: Vector<T>, hi: Vector<T>, dim: usize },
}

impl<T: Scalar> Chart<T> {
    pub fn planar_box(lo: &[f64], hi: &[f64]) -> Self {
        let (l, h) = box_corners(lo, hi);
        Self::Planar {
            lo: l,
            hi: h,
            dim: lo.len(),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Torus { dim } | Self::Planar { dim, .. } => dim,
        }
    }

    pub fn kind(&self) -> ChartKind {
        match self {
            Self::Torus { .. } => ChartKind::Torus,
            Self::Planar { .. } => ChartKind::Planar,
        }
    }

    pub fn contains(&self, v: &Vector<T>) -> bool {
        match self {
            Self::Torus { dim } => v.iter().take(*dim).all(|x| x.is_finite()),
            Self::Planar { lo, hi, dim } => (0..*dim).all(|i| v[i] >= lo[i] && v[i] <= hi[i]),
        }
    }

    pub fn point(&self, v: Vector<T>) -> Point<T> {
        let dim = self.dim();
        match self {
            Self::Torus { .. } => Point::torus(&v[..dim]),
            Self::Planar { .. } => Point::planar(&v[..dim]),
        }
    }

    /// Displacement `b − a`, wrapped to the nearest integer translate on the torus.
    pub fn displacement(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        let mut d = [T::zero(); MAX_DIM];
        for i in 0..self.dim() {
            d[i] = b[i] - a[i];
            if let Self::Torus { .. } = self {
                d[i] = wrap_centered(d[i]);
            }
        }
        d
    }

    /// Euclidean distance, minimized over integer translates on the torus.
    pub fn distance(&self, a: &Vector<T>, b: &Vector<T>) -> T {
        let d = self.displacement(a, b);
        crate::linalg::norm(&d, self.dim())
    }

    /// Max-coordinate distance (same torus convention).
    pub fn sup_distance(&self, a: &Vector<T>, b: &Vector<T>) -> T {
        let d = self.displacement(a, b);
        d.iter().take(self.dim()).fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn bounds(&self) -> (Vector<T>, Vector<T>) {
        match *self {
            Self::Torus { dim } => {
                let mut hi = [T::zero(); MAX_DIM];
                for x in hi.iter_mut().take(dim) {
                    *x = T::one();
                }
                ([T::zero(); MAX_DIM], hi)
            }
            Self::Planar { lo, hi, .. } => (lo, hi),
        }
    }
}

fn box_corners<T: Scalar>(lo: &[f64], hi: &[f64]) -> (Vector<T>, Vector<T>) {
    assert_eq!(lo.len(), hi.len());
    let mut l = [T::zero(); MAX_DIM];
    let mut h = [T::zero(); MAX_DIM];
    for i in 0..lo.len() {
        l[i] = T::lit(lo[i]);
        h[i] = T::lit(hi[i]);
    }
    (l, h)
}

/// A reference neighborhood: U of a system, or a test set V for escape rates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region<T> {
    /// Closed axis-aligned box.
    Box { lo: Vector<T>, hi: Vector<T>, dim: usize },
    /// The full torus.
    Torus { dim: usize },
    /// The whole phase space: containment always holds. Sampling uses the
    /// supplied bounds (normally the chart).
    Whole { lo: Vector<T>, hi: Vector<T>, dim: usize },
}

impl<T: Scalar> Region<T> {
    pub fn unit_box(dim: usize) -> Self {
        Self::boxed(&vec![0.0; dim], &vec![1.0; dim])
    }

    pub fn boxed(lo: &[f64], hi: &[f64]) -> Self {
        let (l, h) = box_corners(lo, hi);
        Self::Box {
            lo: l,
            hi: h,
            dim: lo.len(),
        }
    }

    pub fn whole(chart: &Chart<T>) -> Self {
        let (lo, hi) = chart.bounds();
        Self::Whole {
            lo,
            hi,
            dim: chart.dim(),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Box { dim, .. } | Self::Torus { dim } | Self::Whole { dim, .. } => dim,
        }
    }

    pub fn contains(&self, v: &Vector<T>) -> bool {
        match self {
            Self::Box { lo, hi, dim } => (0..*dim).all(|i| v[i] >= lo[i] && v[i] <= hi[i]),
            Self::Torus { .. } | Self::Whole { .. } => true,
        }
    }

    /// Sampling bounds (the box itself, or the unit cube for the torus).
    pub fn bounds(&self) -> (Vector<T>, Vector<T>) {
        match *self {
            Self::Box { lo, hi, .. } | Self::Whole { lo, hi, .. } => (lo, hi),
            Self::Torus { dim } => Chart::Torus { dim }.bounds(),
        }
    }

    pub fn volume(&self) -> T {
        let (lo, hi) = self.bounds();
        (0..self.dim()).map(|i| hi[i] - lo[i]).fold(T::one(), |a, b| a * b)
    }

    pub fn diameter(&self) -> T {
        let (lo, hi) = self.bounds();
        let d: T = (0..self.dim()).map(|i| (hi[i] - lo[i]).powi(2)).sum();
        d.sqrt()
    }

    /// Tensor grid with `per_axis[i]` nodes along axis i. Boxes include both
    /// endpoints (nodes `lo + j·(hi−lo)/(r−1)`); the torus uses `j/r`. Both
    /// families are nested under refinement `r − 1 ↦ m(r − 1)` (box) and
    /// `r ↦ m·r` (torus).
    pub fn grid(&self, per_axis: &[usize]) -> Vec<Vector<T>> {
        let dim = self.dim();
        assert_eq!(per_axis.len(), dim, "grid needs one count per axis");
        let (lo, hi) = self.bounds();
        let periodic = matches!(self, Self::Torus { .. });
        let axis = |i: usize, j: usize| -> T {
            let r = per_axis[i];
            let t = if periodic {
                T::from_usize_lossy(j) / T::from_usize_lossy(r)
            } else if r == 1 {
                T::lit(0.5)
            } else {
                T::from_usize_lossy(j) / T::from_usize_lossy(r - 1)
            };
            lo[i] + (hi[i] - lo[i]) * t
        };
        let total: usize = per_axis.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut v = [T::zero(); MAX_DIM];
            for i in 0..dim {
                v[i] = axis(i, idx[i]);
            }
            out.push(v);
            for i in (0..dim).rev() {
                idx[i] += 1;
                if idx[i] < per_axis[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
        out
    }
}

/// Shift model for systems conjugate to a subshift on a horseshoe.
///
/// Inverse branches contract the `expanding_axis` coordinate and forward
/// branches contract the others, which is what symbolic enumeration uses.
pub trait SymbolicModel<T: Scalar>: Send + Sync {
    fn symbols(&self) -> usize;

    /// 0/1 transition matrix, `symbols × symbols`.
    fn transitions(&self) -> Vec<Vec<u8>> {
        vec![vec![1; self.symbols()]; self.symbols()]
    }

    fn branch(&self, symbol: usize, p: &Vector<T>) -> Vector<T>;
    fn branch_inverse(&self, symbol: usize, p: &Vector<T>) -> Vector<T>;
    fn branch_derivative(&self, symbol: usize, p: &Vector<T>) -> SquareMatrix<T>;
    fn expanding_axis(&self) -> usize;

    /// Starting point for locating coded orbits.
    fn anchor(&self) -> Vector<T>;

    /// Periodic points outside the shift part (e.g. an attracting fixed
    /// point), given as fixed points of f.
    fn extra_fixed_points(&self) -> Vec<Vector<T>> {
        Vec::new()
    }
}

/// Integer structure for toral maps, used by exact enumeration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LatticeModel {
    Automorphism([[i64; 2]; 2]),
    /// Circle rotation times an automorphism.
    RotationProduct {
        rotation: f64,
        automorphism: [[i64; 2]; 2],
    },
}

/// An invertible smooth map on a chart, with derivative and a reference
/// neighborhood U.
pub trait SmoothSystem<T: Scalar>: Send + Sync + Debug {
    fn name(&self) -> &str;
    fn chart(&self) -> &Chart<T>;
    fn region(&self) -> &Region<T>;

    /// Forward rule. Torus outputs need not be reduced.
    fn map(&self, p: &Vector<T>) -> Vector<T>;
    fn inverse_map(&self, p: &Vector<T>) -> Vector<T>;
    fn derivative(&self, p: &Vector<T>) -> SquareMatrix<T>;

    /// Derivative of f⁻¹ at p.
    fn inverse_derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        let q = self.inverse_map(p);
        self.derivative(&q)
            .inverse()
            .unwrap_or_else(|| SquareMatrix::identity(self.dim()).scale(T::infinity()))
    }

    fn parameters(&self) -> Vec<(&'static str, f64)>;

    fn dim(&self) -> usize {
        self.chart().dim()
    }

    /// Symbol of the forward branch at p, for locally constant potentials.
    fn symbol_at(&self, _p: &Vector<T>) -> Option<usize> {
        None
    }

    fn symbolic(&self) -> Option<&dyn SymbolicModel<T>> {
        None
    }

    fn lattice(&self) -> Option<LatticeModel> {
        None
    }

    fn point(&self, v: Vector<T>) -> Point<T> {
        self.chart().point(v)
    }
}

/// Result of following an orbit inside the chart.
#[derive(Clone, Debug, PartialEq)]
pub enum Trajectory<V> {
    Inside(V),
    /// The orbit left the chart; `step` is the signed iterate that was outside.
    Escaped { step: i64 },
}

impl<V> Trajectory<V> {
    pub fn inside(self) -> Option<V> {
        match self {
            Self::Inside(v) => Some(v),
            Self::Escaped { .. } => None,
        }
    }

    pub fn is_inside(&self) -> bool {
        matches!(self, Self::Inside(_))
    }
}

/// One step forward (or backward), normalized; `None` when the image leaves the chart.
#[inline]
pub fn step<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    v: &Vector<T>,
    forward: bool,
) -> Option<Vector<T>> {
    let next = if forward { system.map(v) } else { system.inverse_map(v) };
    let chart = system.chart();
    if !chart.contains(&next) {
        return None;
    }
    Some(match chart {
        Chart::Torus { .. } => chart.point(next).coords,
        Chart::Planar { .. } => next,
    })
}

/// fᵏ(p); negative k applies the inverse rule.
pub fn iterate<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    p: &Point<T>,
    k: i64,
) -> Result<Trajectory<Point<T>>, Error> {
    if k.abs() > MAX_ITERATION {
        return Err(Error::IterationLimit {
            k,
            limit: MAX_ITERATION,
        });
    }
    let forward = k >= 0;
    let mut v = p.coords;
    for j in 1..=k.abs() {
        match step(system, &v, forward) {
            Some(next) => v = next,
            None => {
                return Ok(Trajectory::Escaped {
                    step: if forward { j } else { -j },
                })
            }
        }
    }
    Ok(Trajectory::Inside(system.point(v)))
}

/// Orbit segment p, f(p), …, fⁿ⁻¹(p).
pub fn orbit_segment<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    p: &Point<T>,
    n: usize,
) -> Trajectory<Vec<Point<T>>> {
    let mut out = Vec::with_capacity(n);
    let mut v = p.coords;
    for j in 0..n {
        out.push(system.point(v));
        if j + 1 < n {
            match step(system, &v, true) {
                Some(next) => v = next,
                None => return Trajectory::Escaped { step: j as i64 + 1 },
            }
        }
    }
    Trajectory::Inside(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleDirection {
    Forward,
    Inverse,
}

/// Dfⁿ(p) = Df(fⁿ⁻¹p)···Df(p), or Df⁻ⁿ(p) for [`CocycleDirection::Inverse`].
pub fn tangent_cocycle<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    p: &Point<T>,
    n: usize,
    direction: CocycleDirection,
) -> Result<Trajectory<SquareMatrix<T>>, Error> {
    if n as i64 > MAX_ITERATION {
        return Err(Error::IterationLimit {
            k: n as i64,
            limit: MAX_ITERATION,
        });
    }
    let forward = direction == CocycleDirection::Forward;
    let mut acc = SquareMatrix::identity(system.dim());
    let mut v = p.coords;
    for j in 0..n {
        let d = if forward {
            system.derivative(&v)
        } else {
            system.inverse_derivative(&v)
        };
        acc = d * acc;
        if j + 1 < n {
            match step(system, &v, forward) {
                Some(next) => v = next,
                None => {
                    let s = j as i64 + 1;
                    return Ok(Trajectory::Escaped {
                        step: if forward { s } else { -s },
                    });
                }
            }
        }
    }
    Ok(Trajectory::Inside(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        assert_eq!(wrap_unit(1.25f64), 0.25);
        assert_eq!(wrap_unit(-0.25f64), 0.75);
        assert_eq!(wrap_unit(-1e-20f64), 0.0);
        assert!((wrap_centered(0.9f64) + 0.1).abs() < 1e-15);
    }

    #[test]
    fn torus_metric_uses_translates() {
        let c = Chart::<f64>::Torus { dim: 2 };
        let d = c.distance(&[0.95, 0.02, 0.0], &[0.05, 0.98, 0.0]);
        assert!((d - (0.1f64.powi(2) + 0.04f64.powi(2)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn grids_are_nested() {
        let u = Region::<f64>::unit_box(2);
        let coarse = u.grid(&[3, 3]);
        let fine = u.grid(&[5, 5]);
        for p in &coarse {
            assert!(fine.iter().any(|q| q == p));
        }
        let t = Region::<f64>::Torus { dim: 2 };
        let coarse = t.grid(&[4, 4]);
        let fine = t.grid(&[8, 8]);
        for p in &coarse {
            assert!(fine.iter().any(|q| q == p));
        }
    }

    #[test]
    fn region_volume() {
        let v = Region::<f64>::boxed(&[0.0, 0.0], &[3.5, 1.0]);
        assert_eq!(v.volume(), 3.5);
        assert!(v.contains(&[3.5, 1.0, 0.0]));
        assert!(!v.contains(&[3.6, 1.0, 0.0]));
    }
}
