//! Periodic orbits: enumeration, saddle classification, hyperbolicity
//! constants and the (α, c) filtrations.

mod classify;
mod enumerate;
mod filter;

pub use classify::{classify_orbit, spectrum_at, NEUTRAL_TOLERANCE};
pub use enumerate::{
    enumerate_periodic, enumerate_up_to, lyndon_words, EnumerationDiagnostics, EnumerationMethod,
    NewtonSettings, OrbitTable,
};
pub use filter::{
    banded_constant, empirical_constant, filter_membership, ConstantReport, KCap, OrbitConstants,
    SaddleFilter, Side,
};

use num_complex::Complex;

use crate::linalg::{SquareMatrix, Vector};
use crate::scalar::Scalar;
use crate::system::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitStatus {
    Unclassified,
    Saddle,
    Sink,
    Source,
    /// Some multiplier has modulus within [`NEUTRAL_TOLERANCE`] of 1.
    Neutral,
    /// Dfⁿ − I singular at the root.
    Degenerate,
}

/// Invariant splitting along an orbit, with the derivative restricted to it.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting<T> {
    pub unstable_dim: usize,
    pub stable_dim: usize,
    /// Orthonormal Eᵘ bases, `unstable_dim` vectors per orbit point, point-major.
    pub unstable: Vec<Vector<T>>,
    pub stable: Vec<Vector<T>>,
    /// Matrix of Df(x_i): Eᵘ_i → Eᵘ_{i+1} in the stored bases.
    pub unstable_steps: Vec<SquareMatrix<T>>,
    pub stable_steps: Vec<SquareMatrix<T>>,
    /// Smallest principal angle between Eˢ and Eᵘ over the orbit.
    pub min_angle: T,
}

impl<T: Scalar> Splitting<T> {
    pub fn unstable_at(&self, i: usize) -> &[Vector<T>] {
        &self.unstable[i * self.unstable_dim..(i + 1) * self.unstable_dim]
    }

    pub fn stable_at(&self, i: usize) -> &[Vector<T>] {
        &self.stable[i * self.stable_dim..(i + 1) * self.stable_dim]
    }

    /// log|det Df^p|Eᵘ| over one period.
    pub fn log_unstable_volume(&self) -> T {
        self.unstable_steps.iter().map(|r| r.det().abs().ln()).sum()
    }
}

/// A periodic orbit of minimal period `period`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicOrbit<T> {
    pub period: usize,
    /// Orbit points starting at the canonical (lexicographically smallest) one.
    pub points: Vec<Point<T>>,
    /// Symbolic itinerary aligned with `points`, when known.
    pub word: Option<Vec<usize>>,
    /// Eigenvalues of Df^period at the representative.
    pub multipliers: Vec<Complex<T>>,
    /// (1/period)·log|δ_i|, ascending.
    pub exponents: Vec<T>,
    pub status: OrbitStatus,
    pub splitting: Option<Splitting<T>>,
    /// Largest one-step defect max_k d(f(x_k), x_{k+1}) around the orbit.
    pub residual: T,
}

impl<T: Scalar> PeriodicOrbit<T> {
    pub fn new(points: Vec<Point<T>>, word: Option<Vec<usize>>, residual: T) -> Self {
        Self {
            period: points.len(),
            points,
            word,
            multipliers: Vec::new(),
            exponents: Vec::new(),
            status: OrbitStatus::Unclassified,
            splitting: None,
            residual,
        }
    }

    pub fn representative(&self) -> &Point<T> {
        &self.points[0]
    }

    pub fn is_saddle(&self) -> bool {
        self.status == OrbitStatus::Saddle
    }

    /// min |λ_i|.
    pub fn min_abs_exponent(&self) -> T {
        self.exponents
            .iter()
            .fold(T::infinity(), |m, l| m.min(l.abs()))
    }

    pub fn max_abs_exponent(&self) -> T {
        self.exponents.iter().fold(T::zero(), |m, l| m.max(l.abs()))
    }

    /// Sum of the positive exponents times the period: log|det Df^p|Eᵘ|
    /// from the spectrum.
    pub fn positive_exponent_sum(&self) -> T {
        let p = T::from_usize_lossy(self.period);
        self.exponents
            .iter()
            .filter(|l| **l > T::zero())
            .map(|l| *l * p)
            .sum()
    }
}
