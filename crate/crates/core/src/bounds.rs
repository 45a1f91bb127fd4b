//! Global derivative bound β₀.

use crate::linalg::Vector;
use crate::scalar::Scalar;
use crate::system::SmoothSystem;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemBounds<T> {
    /// max(0, max log‖Df‖, max log‖Df⁻¹‖) over the sample.
    pub beta0: T,
    /// Grid nodes per axis.
    pub resolution: usize,
    /// Number of points that entered the maximum.
    pub samples: usize,
}

fn log_norms<T: Scalar, S: SmoothSystem<T> + ?Sized>(system: &S, v: &Vector<T>) -> T {
    let f = system.derivative(v).operator_norm().ln();
    let b = system.inverse_derivative(v).operator_norm().ln();
    let mut out = T::neg_infinity();
    for x in [f, b] {
        if x.is_finite() {
            out = out.max(x);
        }
    }
    out
}

/// β₀ over a grid of U with `resolution` nodes per axis.
pub fn derivative_log_bound<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    resolution: usize,
) -> SystemBounds<T> {
    let r = resolution.max(2);
    let grid = system.region().grid(&vec![r; system.dim()]);
    let mut beta0 = T::zero();
    for v in &grid {
        beta0 = beta0.max(log_norms(system, v));
    }
    SystemBounds {
        beta0,
        resolution: r,
        samples: grid.len(),
    }
}

impl<T: Scalar> SystemBounds<T> {
    /// Raises β₀ so that it also covers the given points (typically every
    /// enumerated periodic point, which the grid may miss).
    pub fn absorb<'a, S: SmoothSystem<T> + ?Sized>(
        &mut self,
        system: &S,
        points: impl IntoIterator<Item = &'a Vector<T>>,
    ) {
        for v in points {
            self.beta0 = self.beta0.max(log_norms(system, v));
            self.samples += 1;
        }
    }
}
