//! Multipliers, exponents and the invariant splitting along an orbit.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{column_space_basis, min_principal_angle, orthonormalize, restrict, SquareMatrix, Vector};
use crate::orbits::{OrbitStatus, PeriodicOrbit, Splitting};
use crate::scalar::Scalar;
use crate::system::SmoothSystem;

/// A multiplier δ with ||δ| − 1| below this is neutral.
pub const NEUTRAL_TOLERANCE: f64 = 1e-8;

fn cyclic_product<T: Scalar>(ds: &[SquareMatrix<T>], start: usize) -> SquareMatrix<T> {
    let p = ds.len();
    let mut m = SquareMatrix::identity(ds[0].dim());
    for k in 0..p {
        m = ds[(start + k) % p] * m;
    }
    m
}

/// Eigenvalues of Df^p at the i-th orbit point.
pub fn spectrum_at<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    orbit: &PeriodicOrbit<T>,
    i: usize,
) -> Vec<Complex<T>> {
    let ds: Vec<SquareMatrix<T>> = orbit.points.iter().map(|x| system.derivative(&x.coords)).collect();
    let det = ds.iter().fold(T::one(), |acc, d| acc * d.det());
    cyclic_product(&ds, i % orbit.period).eigenvalues_with_det(det)
}

/// Product over the listed eigenvalues δ of (M − δI), pairing complex
/// conjugates into real quadratic factors. Its column space is the sum of
/// the remaining generalized eigenspaces.
fn annihilator<T: Scalar>(m: &SquareMatrix<T>, roots: &[Complex<T>]) -> SquareMatrix<T> {
    let mut out = SquareMatrix::identity(m.dim());
    let mut skip_conjugate = false;
    for r in roots {
        if r.im == T::zero() {
            out = m.sub_identity(r.re) * out;
        } else if !skip_conjugate {
            let q = (*m * *m)
                .sub(&m.scale(T::lit(2.0) * r.re))
                .sub_identity(-(r.norm_sqr()));
            out = q * out;
            skip_conjugate = true;
            continue;
        }
        skip_conjugate = false;
    }
    out
}

/// Fills multipliers, exponents, status and (for saddles) the splitting.
pub fn classify_orbit<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    orbit: &PeriodicOrbit<T>,
) -> Result<PeriodicOrbit<T>> {
    let p = orbit.period;
    if p == 0 {
        return Err(Error::Invalid("empty orbit".into()));
    }
    let dim = system.dim();
    let ds: Vec<SquareMatrix<T>> = orbit.points.iter().map(|x| system.derivative(&x.coords)).collect();
    let m = cyclic_product(&ds, 0);
    let det = ds.iter().fold(T::one(), |acc, d| acc * d.det());
    let mut multipliers = m.eigenvalues_with_det(det);
    multipliers.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal));
    let pt = T::from_usize_lossy(p);
    let exponents: Vec<T> = multipliers.iter().map(|d| d.norm().ln() / pt).collect();

    let mut out = orbit.clone();
    out.multipliers = multipliers.clone();
    out.exponents = exponents;
    out.splitting = None;

    let tol = T::lit(NEUTRAL_TOLERANCE);
    let moduli: Vec<T> = multipliers.iter().map(|d| d.norm()).collect();
    let status = if moduli.iter().any(|r| !r.is_finite()) {
        OrbitStatus::Degenerate
    } else if moduli.iter().any(|r| (*r - T::one()).abs() <= tol) {
        OrbitStatus::Neutral
    } else if moduli.iter().all(|r| *r < T::one()) {
        OrbitStatus::Sink
    } else if moduli.iter().all(|r| *r > T::one()) {
        OrbitStatus::Source
    } else {
        OrbitStatus::Saddle
    };
    out.status = if orbit.status == OrbitStatus::Degenerate {
        OrbitStatus::Degenerate
    } else {
        status
    };
    if out.status != OrbitStatus::Saddle {
        return Ok(out);
    }

    let stable_roots: Vec<Complex<T>> = multipliers.iter().copied().filter(|d| d.norm() < T::one()).collect();
    let unstable_roots: Vec<Complex<T>> = multipliers.iter().copied().filter(|d| d.norm() > T::one()).collect();
    let ku = unstable_roots.len();
    let ks = stable_roots.len();
    let eu0 = column_space_basis(&annihilator(&m, &stable_roots), ku);
    let es0 = column_space_basis(&annihilator(&m, &unstable_roots), ks);
    if eu0.len() != ku || es0.len() != ks {
        out.status = OrbitStatus::Degenerate;
        return Ok(out);
    }

    // Eᵘ forward, Eˢ backward.
    let mut unstable: Vec<Vec<Vector<T>>> = vec![eu0];
    for i in 0..p - 1 {
        let imgs: Vec<Vector<T>> = unstable[i].iter().map(|v| ds[i].mul_vec(v)).collect();
        unstable.push(orthonormalize(&imgs, dim));
    }
    let mut stable: Vec<Vec<Vector<T>>> = vec![Vec::new(); p];
    stable[0] = es0;
    for i in (1..p).rev() {
        let next = stable[(i + 1) % p].clone();
        let inv = ds[i].inverse().ok_or(Error::Invalid("singular derivative on orbit".into()))?;
        let imgs: Vec<Vector<T>> = next.iter().map(|v| inv.mul_vec(v)).collect();
        stable[i] = orthonormalize(&imgs, dim);
    }

    let mut unstable_steps = Vec::with_capacity(p);
    let mut stable_steps = Vec::with_capacity(p);
    let mut min_angle = T::lit(std::f64::consts::FRAC_PI_2);
    for i in 0..p {
        let j = (i + 1) % p;
        unstable_steps.push(restrict(&ds[i], &unstable[i], &unstable[j]));
        stable_steps.push(restrict(&ds[i], &stable[i], &stable[j]));
        min_angle = min_angle.min(min_principal_angle(&unstable[i], &stable[i], dim));
    }
    out.splitting = Some(Splitting {
        unstable_dim: ku,
        stable_dim: ks,
        unstable: unstable.concat(),
        stable: stable.concat(),
        unstable_steps,
        stable_steps,
        min_angle,
    });
    Ok(out)
}
