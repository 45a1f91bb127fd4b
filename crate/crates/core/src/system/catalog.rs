//! The fixed catalog of example systems.
//!
//! * [`CatMap`]: hyperbolic toral automorphism.
//! * [`LinearHorseshoe`]: piecewise affine horseshoe with `s` branches.
//! * [`NonlinearHorseshoe`]: smooth two-branch horseshoe with upper
//!   triangular derivative.
//! * [`Henon`]: the Hénon map on a trapping box.
//! * [`SinkHorseshoe`]: linear horseshoe next to an attracting fixed point.
//! * [`RotationCat`]: irrational circle rotation times a cat map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SquareMatrix, Vector, MAX_DIM};
use crate::scalar::{Field, Scalar};
use crate::system::{Chart, LatticeModel, Region, SmoothSystem, SymbolicModel};

fn vec2<T: Scalar>(x: T, y: T) -> Vector<T> {
    [x, y, T::zero()]
}

fn mat2<T: Scalar>(a: T, b: T, c: T, d: T) -> SquareMatrix<T> {
    SquareMatrix::from_rows(&[&[a, b], &[c, d]])
}

/// Solves `f(t) = target` for increasing `f` with `f' ≥ min_slope > 0`.
fn invert_monotone<T: Scalar>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    target: T,
    guess: T,
    min_slope: T,
) -> T {
    let r0 = f(guess) - target;
    let width = r0.abs() / min_slope * T::lit(1.01) + T::eps();
    let (mut lo, mut hi) = (guess - width, guess + width);
    let mut t = guess;
    for _ in 0..200 {
        let r = f(t) - target;
        if r == T::zero() {
            break;
        }
        if r > T::zero() {
            hi = t;
        } else {
            lo = t;
        }
        let mut next = t - r / df(t);
        if !(next > lo && next < hi) {
            next = (lo + hi) / T::lit(2.0);
        }
        let done = (next - t).abs() <= T::eps() * (T::one() + t.abs());
        t = next;
        if done {
            break;
        }
    }
    t
}

// ---------------------------------------------------------------------------

/// Toral automorphism x ↦ A x mod 1.
#[derive(Clone, Debug)]
pub struct CatMap<T> {
    matrix: [[i64; 2]; 2],
    det: i64,
    chart: Chart<T>,
    region: Region<T>,
    name: String,
}

impl<T: Scalar> CatMap<T> {
    pub fn new(matrix: [[i64; 2]; 2]) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det.abs() != 1 {
            return Err(Error::param("matrix", format!("determinant {det} is not ±1")));
        }
        let tr = matrix[0][0] + matrix[1][1];
        let disc = tr * tr - 4 * det;
        if disc <= 0 || (tr.abs() <= 2 && det == 1) {
            return Err(Error::param("matrix", "not hyperbolic"));
        }
        Ok(Self {
            matrix,
            det,
            chart: Chart::Torus { dim: 2 },
            region: Region::Torus { dim: 2 },
            name: "cat_map".into(),
        })
    }

    pub fn standard() -> Self {
        Self::new([[2, 1], [1, 1]]).expect("standard cat matrix")
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    /// Integer matrix of the inverse.
    pub fn inverse_matrix(&self) -> [[i64; 2]; 2] {
        let m = self.matrix;
        let d = self.det;
        [[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]]
    }

    /// One step of the map (or its inverse) in any ordered field, reduced mod 1.
    pub fn apply_exact<F: Field>(&self, p: &[F; 2], inverse: bool) -> [F; 2] {
        let m = if inverse { self.inverse_matrix() } else { self.matrix };
        let row = |r: [i64; 2]| {
            let v = F::from_i64(r[0]) * p[0].clone() + F::from_i64(r[1]) * p[1].clone();
            let fl = v.floor_value();
            v - fl
        };
        [row(m[0]), row(m[1])]
    }

    fn apply(&self, m: [[i64; 2]; 2], p: &Vector<T>) -> Vector<T> {
        let c = |v: i64| T::lit(v as f64);
        vec2(
            c(m[0][0]) * p[0] + c(m[0][1]) * p[1],
            c(m[1][0]) * p[0] + c(m[1][1]) * p[1],
        )
    }

    /// Unstable eigenvalue modulus.
    pub fn lambda(&self) -> f64 {
        let tr = (self.matrix[0][0] + self.matrix[1][1]) as f64;
        let disc = tr * tr - 4.0 * self.det as f64;
        (tr.abs() + disc.sqrt()) / 2.0
    }
}

impl<T: Scalar> SmoothSystem<T> for CatMap<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }
    fn region(&self) -> &Region<T> {
        &self.region
    }
    fn map(&self, p: &Vector<T>) -> Vector<T> {
        self.apply(self.matrix, p)
    }
    fn inverse_map(&self, p: &Vector<T>) -> Vector<T> {
        self.apply(self.inverse_matrix(), p)
    }
    fn derivative(&self, _p: &Vector<T>) -> SquareMatrix<T> {
        let c = |v: i64| T::lit(v as f64);
        let m = self.matrix;
        mat2(c(m[0][0]), c(m[0][1]), c(m[1][0]), c(m[1][1]))
    }
    fn inverse_derivative(&self, _p: &Vector<T>) -> SquareMatrix<T> {
        let c = |v: i64| T::lit(v as f64);
        let m = self.inverse_matrix();
        mat2(c(m[0][0]), c(m[0][1]), c(m[1][0]), c(m[1][1]))
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        let m = self.matrix;
        vec![
            ("a11", m[0][0] as f64),
            ("a12", m[0][1] as f64),
            ("a21", m[1][0] as f64),
            ("a22", m[1][1] as f64),
        ]
    }
    fn lattice(&self) -> Option<LatticeModel> {
        Some(LatticeModel::Automorphism(self.matrix))
    }
}

// ---------------------------------------------------------------------------

/// Affine horseshoe on the unit square with `s` vertical-to-horizontal
/// branches. Branch i maps the strip `y ∈ [c_i, c_i + 1/λ]` onto the
/// vertical strip `x ∈ [d_i, d_i + μ]` by `(x, y) ↦ (μx + d_i, λ(y − c_i))`.
#[derive(Clone, Debug)]
pub struct LinearHorseshoe<T> {
    branches: usize,
    lambda: T,
    mu: T,
    c: Vec<T>,
    d: Vec<T>,
    forward_cut: Vec<T>,
    inverse_cut: Vec<T>,
    chart: Chart<T>,
    region: Region<T>,
    name: String,
}

impl<T: Scalar> LinearHorseshoe<T> {
    pub fn new(branches: usize, lambda: f64, mu: f64) -> Result<Self> {
        Self::with_chart(
            branches,
            lambda,
            mu,
            Chart::planar_box(&[-0.25, -0.25], &[1.25, 1.25]),
        )
    }

    /// Standard two-branch horseshoe with λ = 4, μ = 1/4.
    pub fn standard() -> Self {
        Self::new(2, 4.0, 0.25).expect("standard horseshoe")
    }

    pub fn with_chart(branches: usize, lambda: f64, mu: f64, chart: Chart<T>) -> Result<Self> {
        let s = branches as f64;
        if branches < 2 {
            return Err(Error::param("branches", "need at least 2"));
        }
        if !(lambda > s) {
            return Err(Error::param("lambda", format!("must exceed the branch count {branches}")));
        }
        if !(mu > 0.0 && mu < 1.0 / s) {
            return Err(Error::param("mu", format!("must lie in (0, 1/{branches})")));
        }
        let c: Vec<f64> = (0..branches)
            .map(|i| i as f64 * (1.0 - 1.0 / lambda) / (s - 1.0))
            .collect();
        let d: Vec<f64> = (0..branches)
            .map(|i| i as f64 * (1.0 - mu) / (s - 1.0))
            .collect();
        let forward_cut: Vec<f64> = (0..branches - 1)
            .map(|i| (c[i] + 1.0 / lambda + c[i + 1]) / 2.0)
            .collect();
        let (lo, hi) = chart.bounds();
        let (xl, xh) = (lo[0].as_f64(), hi[0].as_f64());
        let (yl, yh) = (lo[1].as_f64(), hi[1].as_f64());
        let mut inverse_cut = Vec::new();
        for i in 0..branches - 1 {
            let top = mu * xh + d[i];
            let bottom = mu * xl + d[i + 1];
            if top >= bottom {
                return Err(Error::param("mu", "branch images overlap on the chart"));
            }
            inverse_cut.push((top + bottom) / 2.0);
        }
        // Preimages of the chart must select the branch they came from.
        for i in 0..branches {
            let (a, b) = (c[i] + yl / lambda, c[i] + yh / lambda);
            let above = if i > 0 { forward_cut[i - 1] } else { f64::NEG_INFINITY };
            let below = if i + 1 < branches { forward_cut[i] } else { f64::INFINITY };
            if !(a >= above && b < below) {
                return Err(Error::param("lambda", "chart too large for consistent branches"));
            }
        }
        let conv = |v: Vec<f64>| v.into_iter().map(T::lit).collect::<Vec<T>>();
        Ok(Self {
            branches,
            lambda: T::lit(lambda),
            mu: T::lit(mu),
            c: conv(c),
            d: conv(d),
            forward_cut: conv(forward_cut),
            inverse_cut: conv(inverse_cut),
            chart,
            region: Region::unit_box(2),
            name: "linear_horseshoe".into(),
        })
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    fn forward_branch(&self, y: T) -> usize {
        self.forward_cut
            .iter()
            .position(|&t| y < t)
            .unwrap_or(self.branches - 1)
    }

    fn inverse_branch(&self, x: T) -> usize {
        self.inverse_cut
            .iter()
            .position(|&t| x < t)
            .unwrap_or(self.branches - 1)
    }

    fn branch_map(&self, i: usize, p: &Vector<T>) -> Vector<T> {
        vec2(self.mu * p[0] + self.d[i], self.lambda * (p[1] - self.c[i]))
    }

    fn branch_inv(&self, i: usize, p: &Vector<T>) -> Vector<T> {
        vec2((p[0] - self.d[i]) / self.mu, p[1] / self.lambda + self.c[i])
    }

    fn diag(&self) -> SquareMatrix<T> {
        SquareMatrix::diagonal(&[self.mu, self.lambda])
    }
}

impl<T: Scalar> SmoothSystem<T> for LinearHorseshoe<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }
    fn region(&self) -> &Region<T> {
        &self.region
    }
    fn map(&self, p: &Vector<T>) -> Vector<T> {
        self.branch_map(self.forward_branch(p[1]), p)
    }
    fn inverse_map(&self, p: &Vector<T>) -> Vector<T> {
        self.branch_inv(self.inverse_branch(p[0]), p)
    }
    fn derivative(&self, _p: &Vector<T>) -> SquareMatrix<T> {
        self.diag()
    }
    fn inverse_derivative(&self, _p: &Vector<T>) -> SquareMatrix<T> {
        SquareMatrix::diagonal(&[T::one() / self.mu, T::one() / self.lambda])
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("branches", self.branches as f64),
            ("lambda", self.lambda.as_f64()),
            ("mu", self.mu.as_f64()),
        ]
    }
    fn symbol_at(&self, p: &Vector<T>) -> Option<usize> {
        Some(self.forward_branch(p[1]))
    }
    fn symbolic(&self) -> Option<&dyn SymbolicModel<T>> {
        Some(self)
    }
}

impl<T: Scalar> SymbolicModel<T> for LinearHorseshoe<T> {
    fn symbols(&self) -> usize {
        self.branches
    }
    fn branch(&self, symbol: usize, p: &Vector<T>) -> Vector<T> {
        self.branch_map(symbol, p)
    }
    fn branch_inverse(&self, symbol: usize, p: &Vector<T>) -> Vector<T> {
        self.branch_inv(symbol, p)
    }
    fn branch_derivative(&self, _symbol: usize, _p: &Vector<T>) -> SquareMatrix<T> {
        self.diag()
    }
    fn expanding_axis(&self) -> usize {
        1
    }
    fn anchor(&self) -> Vector<T> {
        vec2(T::lit(0.5), T::lit(0.5))
    }
}

// ---------------------------------------------------------------------------

/// Smooth two-branch horseshoe. Branch 0 is
/// `(x, y) ↦ (μx + ν·sin(2πx)/(2π) + ηy, λy + κ·sin(πy))`
/// and branch 1 is its conjugate by the half-turn `S(x, y) = (1 − x, 1 − y)`.
#[derive(Clone, Debug)]
pub struct NonlinearHorseshoe<T> {
    lambda: T,
    kappa: T,
    mu: T,
    nu: T,
    eta: T,
    chart: Chart<T>,
    region: Region<T>,
    name: String,
}

impl<T: Scalar> NonlinearHorseshoe<T> {
    pub fn new(lambda: f64, kappa: f64, mu: f64, nu: f64, eta: f64) -> Result<Self> {
        let pi = std::f64::consts::PI;
        if !(lambda - kappa.abs() * pi > 2.0) {
            return Err(Error::param("lambda", "need λ − |κ|π > 2 for a full horseshoe"));
        }
        if !(mu > nu.abs() && mu + nu.abs() < 0.5) {
            return Err(Error::param("mu", "need |ν| < μ and μ + |ν| < 1/2"));
        }
        if !(eta.abs() < 0.1) {
            return Err(Error::param("eta", "need |η| < 0.1"));
        }
        let out = Self {
            lambda: T::lit(lambda),
            kappa: T::lit(kappa),
            mu: T::lit(mu),
            nu: T::lit(nu),
            eta: T::lit(eta),
            chart: Chart::planar_box(&[-0.25, -0.25], &[1.25, 1.25]),
            region: Region::unit_box(2),
            name: "nonlinear_horseshoe".into(),
        };
        // Branch 0 images of the chart stay left of x = 1/2 and its
        // preimages below y = 1/2.
        let (lo, hi) = out.chart.bounds();
        let corner = out.branch0(&vec2(hi[0], hi[1]));
        if !(corner[0] < T::lit(0.5)) {
            return Err(Error::param("mu", "branch images overlap on the chart"));
        }
        let back = out.branch0_inv(&vec2(lo[0], hi[1]));
        if !(back[1] < T::lit(0.5)) {
            return Err(Error::param("lambda", "chart too large for consistent branches"));
        }
        Ok(out)
    }

    pub fn standard() -> Self {
        Self::new(3.0, 0.3, 0.3, 0.1, 0.05).expect("standard nonlinear horseshoe")
    }

    fn g(&self, y: T) -> T {
        self.lambda * y + self.kappa * (T::lit(std::f64::consts::PI) * y).sin()
    }
    fn dg(&self, y: T) -> T {
        let pi = T::lit(std::f64::consts::PI);
        self.lambda + self.kappa * pi * (pi * y).cos()
    }
    fn h(&self, x: T) -> T {
        let tau = T::lit(std::f64::consts::TAU);
        self.mu * x + self.nu * (tau * x).sin() / tau
    }
    fn dh(&self, x: T) -> T {
        let tau = T::lit(std::f64::consts::TAU);
        self.mu + self.nu * (tau * x).cos()
    }

    fn branch0(&self, p: &Vector<T>) -> Vector<T> {
        vec2(self.h(p[0]) + self.eta * p[1], self.g(p[1]))
    }

    fn branch0_inv(&self, p: &Vector<T>) -> Vector<T> {
        let pi = T::lit(std::f64::consts::PI);
        let y = invert_monotone(
            |t| self.g(t),
            |t| self.dg(t),
            p[1],
            p[1] / self.lambda,
            self.lambda - self.kappa.abs() * pi,
        );
        let x = invert_monotone(
            |t| self.h(t),
            |t| self.dh(t),
            p[0] - self.eta * y,
            (p[0] - self.eta * y) / self.mu,
            self.mu - self.nu.abs(),
        );
        vec2(x, y)
    }

    fn branch0_derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        mat2(self.dh(p[0]), self.eta, T::zero(), self.dg(p[1]))
    }

    fn flip(p: &Vector<T>) -> Vector<T> {
        vec2(T::one() - p[0], T::one() - p[1])
    }
}

impl<T: Scalar> SmoothSystem<T> for NonlinearHorseshoe<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }
    fn region(&self) -> &Region<T> {
        &self.region
    }
    fn map(&self, p: &Vector<T>) -> Vector<T> {
        let s = usize::from(p[1] >= T::lit(0.5));
        SymbolicModel::branch(self, s, p)
    }
    fn inverse_map(&self, p: &Vector<T>) -> Vector<T> {
        let s = usize::from(p[0] >= T::lit(0.5));
        self.branch_inverse(s, p)
    }
    fn derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        let s = usize::from(p[1] >= T::lit(0.5));
        self.branch_derivative(s, p)
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("lambda", self.lambda.as_f64()),
            ("kappa", self.kappa.as_f64()),
            ("mu", self.mu.as_f64()),
            ("nu", self.nu.as_f64()),
            ("eta", self.eta.as_f64()),
        ]
    }
    fn symbol_at(&self, p: &Vector<T>) -> Option<usize> {
        Some(usize::from(p[1] >= T::lit(0.5)))
    }
    fn symbolic(&self) -> Option<&dyn SymbolicModel<T>> {
        Some(self)
    }
}

impl<T: Scalar> SymbolicModel<T> for NonlinearHorseshoe<T> {
    fn symbols(&self) -> usize {
        2
    }
    fn branch(&self, symbol: usize, p: &Vector<T>) -> Vector<T> {
        if symbol == 0 {
            self.branch0(p)
        } else {
            Self::flip(&self.branch0(&Self::flip(p)))
        }
    }
    fn branch_inverse(&self, symbol: usize, p: &Vector<T>) -> Vector<T> {
        if symbol == 0 {
            self.branch0_inv(p)
        } else {
            Self::flip(&self.branch0_inv(&Self::flip(p)))
        }
    }
    fn branch_derivative(&self, symbol: usize, p: &Vector<T>) -> SquareMatrix<T> {
        if symbol == 0 {
            self.branch0_derivative(p)
        } else {
            // S is an involution with DS = −I, so the conjugate has the
            // same derivative evaluated at S(p).
            self.branch0_derivative(&Self::flip(p))
        }
    }
    fn expanding_axis(&self) -> usize {
        1
    }
    fn anchor(&self) -> Vector<T> {
        vec2(T::lit(0.5), T::lit(0.5))
    }
}

// ---------------------------------------------------------------------------

/// Hénon map `(x, y) ↦ (1 − a x² + y, b x)`.
#[derive(Clone, Debug)]
pub struct Henon<T> {
    a: T,
    b: T,
    chart: Chart<T>,
    region: Region<T>,
    name: String,
}

impl<T: Scalar> Henon<T> {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if b == 0.0 || !b.is_finite() {
            return Err(Error::param("b", "must be nonzero for invertibility"));
        }
        if !a.is_finite() {
            return Err(Error::param("a", "must be finite"));
        }
        Ok(Self {
            a: T::lit(a),
            b: T::lit(b),
            chart: Chart::planar_box(&[-5.0, -5.0], &[5.0, 5.0]),
            region: Region::boxed(&[-1.5, -0.4], &[1.5, 0.4]),
            name: "henon".into(),
        })
    }

    pub fn classic() -> Self {
        Self::new(1.4, 0.3).expect("classic Hénon parameters")
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }
}

impl<T: Scalar> SmoothSystem<T> for Henon<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }
    fn region(&self) -> &Region<T> {
        &self.region
    }
    fn map(&self, p: &Vector<T>) -> Vector<T> {
        vec2(T::one() - self.a * p[0] * p[0] + p[1], self.b * p[0])
    }
    fn inverse_map(&self, p: &Vector<T>) -> Vector<T> {
        let x = p[1] / self.b;
        vec2(x, p[0] - T::one() + self.a * x * x)
    }
    fn derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        mat2(-T::lit(2.0) * self.a * p[0], T::one(), self.b, T::zero())
    }
    fn inverse_derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        let x = p[1] / self.b;
        mat2(
            T::zero(),
            T::one() / self.b,
            T::one(),
            T::lit(2.0) * self.a * x / self.b,
        )
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("a", self.a.as_f64()), ("b", self.b.as_f64())]
    }
}

// ---------------------------------------------------------------------------

/// Two-branch linear horseshoe on `x < 2` plus a disjoint attracting fixed
/// point: on `x ≥ 2` the map contracts linearly towards `sink`.
#[derive(Clone, Debug)]
pub struct SinkHorseshoe<T> {
    horseshoe: LinearHorseshoe<T>,
    sink: Vector<T>,
    contraction: T,
    split: T,
    inverse_split: T,
    chart: Chart<T>,
    region: Region<T>,
    name: String,
}

impl<T: Scalar> SinkHorseshoe<T> {
    pub fn new(lambda: f64, mu: f64, sink: [f64; 2], contraction: f64) -> Result<Self> {
        let chart_lo = [-0.5, -0.5];
        let chart_hi = [5.0, 1.5];
        let split = 2.0;
        let horseshoe = LinearHorseshoe::with_chart(
            2,
            lambda,
            mu,
            Chart::planar_box(&chart_lo, &[split, chart_hi[1]]),
        )?;
        if !(contraction > 0.0 && contraction < 1.0) {
            return Err(Error::param("contraction", "must lie in (0, 1)"));
        }
        if !(sink[0] > split && sink[0] < chart_hi[0] && sink[1] > chart_lo[1] && sink[1] < chart_hi[1]) {
            return Err(Error::param("sink", "must lie in the chart with x > 2"));
        }
        // Images of the two pieces must be separated in x.
        let horseshoe_right = mu * split + (1.0 - mu);
        let sink_left = sink[0] + contraction * (split - sink[0]);
        if !(horseshoe_right < sink_left) {
            return Err(Error::param("sink", "sink basin image overlaps the horseshoe"));
        }
        Ok(Self {
            horseshoe,
            sink: vec2(T::lit(sink[0]), T::lit(sink[1])),
            contraction: T::lit(contraction),
            split: T::lit(split),
            inverse_split: T::lit((horseshoe_right + sink_left) / 2.0),
            chart: Chart::planar_box(&chart_lo, &chart_hi),
            region: Region::boxed(&[0.0, 0.0], &[3.5, 1.0]),
            name: "sink_horseshoe".into(),
        })
    }

    pub fn standard() -> Self {
        Self::new(4.0, 0.25, [3.0, 0.5], 0.5).expect("standard composite")
    }

    pub fn sink(&self) -> Vector<T> {
        self.sink
    }

    pub fn contraction(&self) -> T {
        self.contraction
    }

    pub fn horseshoe(&self) -> &LinearHorseshoe<T> {
        &self.horseshoe
    }

    fn in_sink_part(&self, p: &Vector<T>) -> bool {
        p[0] >= self.split
    }
}

impl<T: Scalar> SmoothSystem<T> for SinkHorseshoe<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }
    fn region(&self) -> &Region<T> {
        &self.region
    }
    fn map(&self, p: &Vector<T>) -> Vector<T> {
        if self.in_sink_part(p) {
            let r = self.contraction;
            vec2(
                self.sink[0] + r * (p[0] - self.sink[0]),
                self.sink[1] + r * (p[1] - self.sink[1]),
            )
        } else {
            self.horseshoe.map(p)
        }
    }
    fn inverse_map(&self, p: &Vector<T>) -> Vector<T> {
        if p[0] >= self.inverse_split {
            let r = self.contraction;
            vec2(
                self.sink[0] + (p[0] - self.sink[0]) / r,
                self.sink[1] + (p[1] - self.sink[1]) / r,
            )
        } else {
            self.horseshoe.inverse_map(p)
        }
    }
    fn derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        if self.in_sink_part(p) {
            SquareMatrix::identity(2).scale(self.contraction)
        } else {
            self.horseshoe.derivative(p)
        }
    }
    fn inverse_derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        if p[0] >= self.inverse_split {
            SquareMatrix::identity(2).scale(T::one() / self.contraction)
        } else {
            self.horseshoe.inverse_derivative(p)
        }
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("lambda", self.horseshoe.lambda.as_f64()),
            ("mu", self.horseshoe.mu.as_f64()),
            ("sink_x", self.sink[0].as_f64()),
            ("sink_y", self.sink[1].as_f64()),
            ("contraction", self.contraction.as_f64()),
        ]
    }
    fn symbol_at(&self, p: &Vector<T>) -> Option<usize> {
        if self.in_sink_part(p) {
            Some(2)
        } else {
            self.horseshoe.symbol_at(p)
        }
    }
    fn symbolic(&self) -> Option<&dyn SymbolicModel<T>> {
        Some(self)
    }
}

impl<T: Scalar> SymbolicModel<T> for SinkHorseshoe<T> {
    fn symbols(&self) -> usize {
        2
    }
    fn branch(&self, symbol: usize, p: &Vector<T>) -> Vector<T> {
        self.horseshoe.branch_map(symbol, p)
    }
    fn branch_inverse(&self, symbol: usize, p: &Vector<T>) -> Vector<T> {
        self.horseshoe.branch_inv(symbol, p)
    }
    fn branch_derivative(&self, _symbol: usize, _p: &Vector<T>) -> SquareMatrix<T> {
        self.horseshoe.diag()
    }
    fn expanding_axis(&self) -> usize {
        1
    }
    fn anchor(&self) -> Vector<T> {
        vec2(T::lit(0.5), T::lit(0.5))
    }
    fn extra_fixed_points(&self) -> Vec<Vector<T>> {
        vec![self.sink]
    }
}

// ---------------------------------------------------------------------------

/// Product of a circle rotation `θ ↦ θ + ω` with a cat map, on the 3-torus
/// with coordinates `(θ, x, y)`.
#[derive(Clone, Debug)]
pub struct RotationCat<T> {
    rotation: T,
    rotation_f64: f64,
    cat: CatMap<T>,
    chart: Chart<T>,
    region: Region<T>,
    name: String,
}

impl<T: Scalar> RotationCat<T> {
    pub fn new(rotation: f64, matrix: [[i64; 2]; 2]) -> Result<Self> {
        if !rotation.is_finite() {
            return Err(Error::param("rotation", "must be finite"));
        }
        Ok(Self {
            rotation: T::lit(rotation),
            rotation_f64: rotation,
            cat: CatMap::new(matrix)?,
            chart: Chart::Torus { dim: 3 },
            region: Region::Torus { dim: 3 },
            name: "rotation_cat".into(),
        })
    }

    /// Golden-mean rotation times the standard cat map.
    pub fn standard() -> Self {
        Self::new((5f64.sqrt() - 1.0) / 2.0, [[2, 1], [1, 1]]).expect("standard product")
    }

    pub fn cat_factor(&self) -> &CatMap<T> {
        &self.cat
    }

    pub fn rotation(&self) -> f64 {
        self.rotation_f64
    }
}

impl<T: Scalar> SmoothSystem<T> for RotationCat<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }
    fn region(&self) -> &Region<T> {
        &self.region
    }
    fn map(&self, p: &Vector<T>) -> Vector<T> {
        let q = self.cat.map(&vec2(p[1], p[2]));
        [p[0] + self.rotation, q[0], q[1]]
    }
    fn inverse_map(&self, p: &Vector<T>) -> Vector<T> {
        let q = self.cat.inverse_map(&vec2(p[1], p[2]));
        [p[0] - self.rotation, q[0], q[1]]
    }
    fn derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        embed_product(&self.cat.derivative(p))
    }
    fn inverse_derivative(&self, p: &Vector<T>) -> SquareMatrix<T> {
        embed_product(&self.cat.inverse_derivative(p))
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("rotation", self.rotation_f64)];
        out.extend(self.cat.parameters());
        out
    }
    fn lattice(&self) -> Option<LatticeModel> {
        Some(LatticeModel::RotationProduct {
            rotation: self.rotation_f64,
            automorphism: self.cat.matrix,
        })
    }
}

fn embed_product<T: Scalar>(block: &SquareMatrix<T>) -> SquareMatrix<T> {
    let mut m = SquareMatrix::zeros(MAX_DIM);
    m[(0, 0)] = T::one();
    for i in 0..2 {
        for j in 0..2 {
            m[(i + 1, j + 1)] = block[(i, j)];
        }
    }
    m
}

// ---------------------------------------------------------------------------

fn default_cat_matrix() -> [[i64; 2]; 2] {
    [[2, 1], [1, 1]]
}
fn default_branches() -> usize {
    2
}
fn default_lambda4() -> f64 {
    4.0
}
fn default_mu4() -> f64 {
    0.25
}
fn default_nl_lambda() -> f64 {
    3.0
}
fn default_nl_kappa() -> f64 {
    0.3
}
fn default_nl_mu() -> f64 {
    0.3
}
fn default_nl_nu() -> f64 {
    0.1
}
fn default_nl_eta() -> f64 {
    0.05
}
fn default_henon_a() -> f64 {
    1.4
}
fn default_henon_b() -> f64 {
    0.3
}
fn default_sink() -> [f64; 2] {
    [3.0, 0.5]
}
fn default_contraction() -> f64 {
    0.5
}
fn default_rotation() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Serializable catalog entry, as used in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    CatMap {
        #[serde(default = "default_cat_matrix")]
        matrix: [[i64; 2]; 2],
    },
    LinearHorseshoe {
        #[serde(default = "default_branches")]
        branches: usize,
        #[serde(default = "default_lambda4")]
        lambda: f64,
        #[serde(default = "default_mu4")]
        mu: f64,
    },
    NonlinearHorseshoe {
        #[serde(default = "default_nl_lambda")]
        lambda: f64,
        #[serde(default = "default_nl_kappa")]
        kappa: f64,
        #[serde(default = "default_nl_mu")]
        mu: f64,
        #[serde(default = "default_nl_nu")]
        nu: f64,
        #[serde(default = "default_nl_eta")]
        eta: f64,
    },
    Henon {
        #[serde(default = "default_henon_a")]
        a: f64,
        #[serde(default = "default_henon_b")]
        b: f64,
    },
    SinkHorseshoe {
        #[serde(default = "default_lambda4")]
        lambda: f64,
        #[serde(default = "default_mu4")]
        mu: f64,
        #[serde(default = "default_sink")]
        sink: [f64; 2],
        #[serde(default = "default_contraction")]
        contraction: f64,
    },
    RotationCat {
        #[serde(default = "default_rotation")]
        rotation: f64,
        #[serde(default = "default_cat_matrix")]
        matrix: [[i64; 2]; 2],
    },
}

/// Catalog names accepted by [`SystemSpec`].
pub const CATALOG: [&str; 6] = [
    "cat_map",
    "linear_horseshoe",
    "nonlinear_horseshoe",
    "henon",
    "sink_horseshoe",
    "rotation_cat",
];

impl SystemSpec {
    pub fn build<T: Scalar>(&self) -> Result<Box<dyn SmoothSystem<T>>> {
        Ok(match *self {
            Self::CatMap { matrix } => Box::new(CatMap::<T>::new(matrix)?),
            Self::LinearHorseshoe { branches, lambda, mu } => {
                Box::new(LinearHorseshoe::<T>::new(branches, lambda, mu)?)
            }
            Self::NonlinearHorseshoe {
                lambda,
                kappa,
                mu,
                nu,
                eta,
            } => Box::new(NonlinearHorseshoe::<T>::new(lambda, kappa, mu, nu, eta)?),
            Self::Henon { a, b } => Box::new(Henon::<T>::new(a, b)?),
            Self::SinkHorseshoe {
                lambda,
                mu,
                sink,
                contraction,
            } => Box::new(SinkHorseshoe::<T>::new(lambda, mu, sink, contraction)?),
            Self::RotationCat { rotation, matrix } => {
                Box::new(RotationCat::<T>::new(rotation, matrix)?)
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::CatMap { .. } => CATALOG[0],
            Self::LinearHorseshoe { .. } => CATALOG[1],
            Self::NonlinearHorseshoe { .. } => CATALOG[2],
            Self::Henon { .. } => CATALOG[3],
            Self::SinkHorseshoe { .. } => CATALOG[4],
            Self::RotationCat { .. } => CATALOG[5],
        }
    }

    /// Default parameters for a catalog name.
    pub fn default_for(name: &str) -> Option<Self> {
        Some(match name {
        "cat_map" => SystemSpec::CatMap {
            matrix: default_cat_matrix(),
        },
        "linear_horseshoe" => SystemSpec::LinearHorseshoe {
            branches: 2,
            lambda: 4.0,
            mu: 0.25,
        },
        "nonlinear_horseshoe" => SystemSpec::NonlinearHorseshoe {
            lambda: default_nl_lambda(),
            kappa: default_nl_kappa(),
            mu: default_nl_mu(),
            nu: default_nl_nu(),
            eta: default_nl_eta(),
        },
        "henon" => SystemSpec::Henon { a: 1.4, b: 0.3 },
        "sink_horseshoe" => SystemSpec::SinkHorseshoe {
            lambda: 4.0,
            mu: 0.25,
            sink: default_sink(),
            contraction: default_contraction(),
        },
        "rotation_cat" => SystemSpec::RotationCat {
            rotation: default_rotation(),
            matrix: default_cat_matrix(),
        },
        _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{iterate, tangent_cocycle, CocycleDirection, Point, Trajectory};

    #[test]
    fn cat_map_examples() {
        let cat = CatMap::<f64>::standard();
        let origin = Point::torus(&[0.0, 0.0]);
        assert_eq!(iterate(&cat, &origin, 7).unwrap(), Trajectory::Inside(origin));
        let p = Point::torus(&[0.5, 0.5]);
        let q = iterate(&cat, &p, 1).unwrap().inside().unwrap();
        assert_eq!(q.as_slice(), &[0.5, 0.0]);
        let m = tangent_cocycle(&cat, &p, 3, CocycleDirection::Forward)
            .unwrap()
            .inside()
            .unwrap();
        assert_eq!(m, SquareMatrix::from_f64_rows(&[&[13.0, 8.0], &[8.0, 5.0]]));
    }

    #[test]
    fn horseshoe_two_step_derivative() {
        let hs = LinearHorseshoe::<f64>::standard();
        let p = Point::planar(&[0.1, 0.05]);
        let m = tangent_cocycle(&hs, &p, 2, CocycleDirection::Forward)
            .unwrap()
            .inside()
            .unwrap();
        assert_eq!(m, SquareMatrix::diagonal(&[1.0 / 16.0, 16.0]));
    }

    #[test]
    fn horseshoe_branches_fix_corners() {
        let hs = LinearHorseshoe::<f64>::standard();
        assert_eq!(hs.map(&[0.0, 0.0, 0.0]), [0.0, 0.0, 0.0]);
        let q = hs.map(&[1.0, 1.0, 0.0]);
        assert!((q[0] - 1.0).abs() < 1e-15 && (q[1] - 1.0).abs() < 1e-15);
        let three = LinearHorseshoe::<f64>::new(3, 5.0, 0.2).unwrap();
        let q = three.map(&[0.5, 0.5, 0.0]);
        assert!((q[0] - 0.5).abs() < 1e-15 && (q[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LinearHorseshoe::<f64>::new(2, 1.5, 0.25).is_err());
        assert!(LinearHorseshoe::<f64>::new(2, 4.0, 0.6).is_err());
        assert!(CatMap::<f64>::new([[1, 1], [0, 1]]).is_err());
        assert!(Henon::<f64>::new(1.4, 0.0).is_err());
    }

    #[test]
    fn nonlinear_inverse_round_trip() {
        let nl = NonlinearHorseshoe::<f64>::standard();
        for &(x, y) in &[(0.2, 0.1), (0.7, 0.9), (0.45, 0.2), (0.9, 0.75)] {
            let p = [x, y, 0.0];
            let q = nl.inverse_map(&nl.map(&p));
            assert!((q[0] - x).abs() < 1e-13 && (q[1] - y).abs() < 1e-13, "{q:?}");
        }
    }

    #[test]
    fn composite_sink_is_fixed() {
        let sys = SinkHorseshoe::<f64>::standard();
        let z = sys.sink();
        assert_eq!(sys.map(&z), z);
        let q = sys.inverse_map(&sys.map(&[2.5, 0.2, 0.0]));
        assert!((q[0] - 2.5).abs() < 1e-14 && (q[1] - 0.2).abs() < 1e-14);
    }

    #[test]
    fn catalog_defaults_build() {
        for name in CATALOG {
            let s = SystemSpec::default_for(name).unwrap();
            assert_eq!(s.name(), name);
            assert!(s.build::<f64>().is_ok());
            assert!(s.build::<f32>().is_ok());
        }
        assert!(SystemSpec::default_for("lorenz").is_none());
    }
}
