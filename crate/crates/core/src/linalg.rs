//! Small dense linear algebra for dimensions 1 to 3.
//!
//! Tangent maps of the catalog systems are at most 3×3, so matrices are
//! stored inline and every routine is closed form or a short fixed
//! iteration.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;

use crate::scalar::Scalar;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;

/// A tangent vector; only the first `dim` entries are meaningful.
pub type Vector<T> = [T; MAX_DIM];

pub fn dot<T: Scalar>(a: &Vector<T>, b: &Vector<T>, dim: usize) -> T {
    (0..dim).map(|i| a[i] * b[i]).sum()
}

pub fn norm<T: Scalar>(a: &Vector<T>, dim: usize) -> T {
    dot(a, a, dim).sqrt()
}

/// Square matrix of dimension 1..=3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    m: [[T; MAX_DIM]; MAX_DIM],
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        Self {
            dim,
            m: [[T::zero(); MAX_DIM]; MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.m[i][i] = T::one();
        }
        out
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut out = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            out.m[i][i] = e;
        }
        out
    }

    /// Builds a matrix from row slices; all rows must have length `rows.len()`.
    pub fn from_rows(rows: &[&[T]]) -> Self {
        let dim = rows.len();
        let mut out = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            out.m[i][..dim].copy_from_slice(row);
        }
        out
    }

    pub fn from_f64_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut out = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                out.m[i][j] = T::lit(v);
            }
        }
        out
    }

    /// Matrix whose columns are the given vectors (a `dim × cols.len()`
    /// block embedded in a square matrix of size `dim`).
    pub fn from_columns(dim: usize, cols: &[Vector<T>]) -> Self {
        let mut out = Self::zeros(dim);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..dim {
                out.m[i][j] = c[i];
            }
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        let mut v = [T::zero(); MAX_DIM];
        for (i, slot) in v.iter_mut().enumerate().take(self.dim) {
            *slot = self.m[i][j];
        }
        v
    }

    pub fn mul_vec(&self, v: &Vector<T>) -> Vector<T> {
        let mut out = [T::zero(); MAX_DIM];
        for (i, slot) in out.iter_mut().enumerate().take(self.dim) {
            *slot = (0..self.dim).map(|j| self.m[i][j] * v[j]).sum();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[j][i] = self.m[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = out.m[i][j] * s;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = out.m[i][j] - other.m[i][j];
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = out.m[i][j] + other.m[i][j];
            }
        }
        out
    }

    pub fn sub_identity(&self, s: T) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            out.m[i][i] = out.m[i][i] - s;
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.m[i][i]).sum()
    }

    pub fn det(&self) -> T {
        let m = &self.m;
        match self.dim {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }

    /// Sum of principal 2×2 minors (second characteristic coefficient).
    fn principal_minor_sum(&self) -> T {
        let m = &self.m;
        match self.dim {
            1 => T::zero(),
            2 => self.det(),
            _ => {
                (m[0][0] * m[1][1] - m[0][1] * m[1][0])
                    + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
                    + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            }
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        let m = &self.m;
        let mut out = Self::zeros(self.dim);
        match self.dim {
            1 => out.m[0][0] = T::one() / d,
            2 => {
                out.m[0][0] = m[1][1] / d;
                out.m[0][1] = -m[0][1] / d;
                out.m[1][0] = -m[1][0] / d;
                out.m[1][1] = m[0][0] / d;
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                        let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                        out.m[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
                    }
                }
            }
        }
        Some(out)
    }

    /// Solves `self * x = b`; `None` when singular.
    pub fn solve(&self, b: &Vector<T>) -> Option<Vector<T>> {
        let inv = self.inverse()?;
        let x = inv.mul_vec(b);
        x.iter().take(self.dim).all(|v| v.is_finite()).then_some(x)
    }

    pub fn max_abs(&self) -> T {
        let mut best = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                best = best.max(self.m[i][j].abs());
            }
        }
        best
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc = acc + self.m[i][j] * self.m[i][j];
            }
        }
        acc.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.m[i][j].is_finite()))
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<T> {
        // Scale first so that the Gram matrix cannot overflow.
        let s = self.max_abs();
        if s == T::zero() {
            return vec![T::zero(); self.dim];
        }
        let a = self.scale(T::one() / s);
        let gram = a.transpose() * a;
        let mut ev = symmetric_eigenvalues(&gram);
        ev.sort_by(|x, y| y.total_cmp_scalar(x));
        let mut out: Vec<T> = ev.into_iter().map(|e| e.max(T::zero()).sqrt() * s).collect();
        if self.dim == 2 {
            // The small singular value is better resolved through the determinant.
            let d = self.det().abs();
            if out[0] > T::zero() {
                out[1] = d / out[0];
            }
        }
        out
    }

    /// Operator 2-norm (largest singular value).
    pub fn operator_norm(&self) -> T {
        match self.dim {
            1 => self.m[0][0].abs(),
            _ => self.singular_values()[0],
        }
    }

    /// Complex eigenvalues, using the supplied determinant (which callers
    /// often know more accurately than the entries imply).
    pub fn eigenvalues_with_det(&self, det: T) -> Vec<Complex<T>> {
        match self.dim {
            1 => vec![Complex::new(self.m[0][0], T::zero())],
            2 => quadratic_roots(self.trace(), det).to_vec(),
            _ => cubic_roots(self.trace(), self.principal_minor_sum(), det),
        }
    }

    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        self.eigenvalues_with_det(self.det())
    }
}

impl<T: Scalar> Mul for SquareMatrix<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = (0..self.dim).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        out
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.m[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.m[i][j]
    }
}

trait TotalCmp {
    fn total_cmp_scalar(&self, other: &Self) -> std::cmp::Ordering;
}

impl<T: Scalar> TotalCmp for T {
    fn total_cmp_scalar(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other).unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Roots of `t² − tr·t + det`, larger magnitude first for real roots.
pub fn quadratic_roots<T: Scalar>(tr: T, det: T) -> [Complex<T>; 2] {
    let two = T::lit(2.0);
    let disc = tr * tr - T::lit(4.0) * det;
    if disc >= T::zero() {
        let sq = disc.sqrt();
        let q = if tr >= T::zero() { (tr + sq) / two } else { (tr - sq) / two };
        if q == T::zero() {
            return [Complex::new(T::zero(), T::zero()); 2];
        }
        [Complex::new(q, T::zero()), Complex::new(det / q, T::zero())]
    } else {
        let im = (-disc).sqrt() / two;
        [Complex::new(tr / two, im), Complex::new(tr / two, -im)]
    }
}

/// Roots of `t³ − tr·t² + c2·t − det`.
fn cubic_roots<T: Scalar>(tr: T, c2: T, det: T) -> Vec<Complex<T>> {
    let p = |t: T| ((t - tr) * t + c2) * t - det;
    let dp = |t: T| (T::lit(3.0) * t - T::lit(2.0) * tr) * t + c2;
    let bound = T::one() + tr.abs().max(c2.abs()).max(det.abs());
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if p(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::eps() * bound {
            break;
        }
    }
    let mut r = (lo + hi) / T::lit(2.0);
    for _ in 0..4 {
        let d = dp(r);
        if d == T::zero() {
            break;
        }
        let step = p(r) / d;
        if !step.is_finite() || step.abs() > (hi - lo).abs() + T::eps() * bound {
            break;
        }
        r = r - step;
    }
    // Deflate: remaining pair has sum tr − r and product det / r.
    let rest_tr = tr - r;
    let rest_det = if r != T::zero() {
        det / r
    } else {
        c2 - r * rest_tr
    };
    let [a, b] = quadratic_roots(rest_tr, rest_det);
    vec![Complex::new(r, T::zero()), a, b]
}

/// Eigenvalues of a symmetric matrix (unsorted).
pub fn symmetric_eigenvalues<T: Scalar>(a: &SquareMatrix<T>) -> Vec<T> {
    match a.dim {
        1 => vec![a.m[0][0]],
        2 => {
            let (p, q, r) = (a.m[0][0], a.m[0][1], a.m[1][1]);
            let mean = (p + r) / T::lit(2.0);
            let half = (p - r) / T::lit(2.0);
            let rad = (half * half + q * q).sqrt();
            vec![mean + rad, mean - rad]
        }
        _ => jacobi_eigenvalues(a),
    }
}

fn jacobi_eigenvalues<T: Scalar>(a: &SquareMatrix<T>) -> Vec<T> {
    let mut m = *a;
    let n = a.dim;
    for _sweep in 0..64 {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + m.m[i][j] * m.m[i][j];
            }
        }
        let scale = m.frobenius_norm();
        if off.sqrt() <= T::eps() * scale || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.m[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m.m[q][q] - m.m[p][p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m.m[k][p];
                    let mkq = m.m[k][q];
                    m.m[k][p] = c * mkp - s * mkq;
                    m.m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m.m[p][k];
                    let mqk = m.m[q][k];
                    m.m[p][k] = c * mpk - s * mqk;
                    m.m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m.m[i][i]).collect()
}

/// Orthonormal basis for the column space of `m`, assumed to have rank
/// `rank`. Gram–Schmidt with column pivoting.
pub fn column_space_basis<T: Scalar>(m: &SquareMatrix<T>, rank: usize) -> Vec<Vector<T>> {
    let dim = m.dim();
    let mut cols: Vec<Vector<T>> = (0..dim).map(|j| m.column(j)).collect();
    let mut basis: Vec<Vector<T>> = Vec::with_capacity(rank);
    for _ in 0..rank {
        let (best, _) = cols
            .iter()
            .enumerate()
            .map(|(j, c)| (j, norm(c, dim)))
            .fold((0, T::neg_infinity()), |acc, (j, n)| if n > acc.1 { (j, n) } else { acc });
        let mut v = cols.swap_remove(best);
        let n = norm(&v, dim);
        if n == T::zero() || !n.is_finite() {
            break;
        }
        for x in v.iter_mut().take(dim) {
            *x = *x / n;
        }
        for c in cols.iter_mut() {
            let proj = dot(c, &v, dim);
            for i in 0..dim {
                c[i] = c[i] - proj * v[i];
            }
        }
        basis.push(v);
    }
    basis
}

/// Re-orthonormalizes a list of vectors (modified Gram–Schmidt, in order).
pub fn orthonormalize<T: Scalar>(vs: &[Vector<T>], dim: usize) -> Vec<Vector<T>> {
    let mut out: Vec<Vector<T>> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = *v;
        for b in &out {
            let proj = dot(&w, b, dim);
            for i in 0..dim {
                w[i] = w[i] - proj * b[i];
            }
        }
        let n = norm(&w, dim);
        for x in w.iter_mut().take(dim) {
            *x = *x / n;
        }
        out.push(w);
    }
    out
}

/// Matrix of `A` restricted between subspaces with orthonormal bases:
/// `R = targetᵀ · A · source` (size `source.len()`).
pub fn restrict<T: Scalar>(
    a: &SquareMatrix<T>,
    source: &[Vector<T>],
    target: &[Vector<T>],
) -> SquareMatrix<T> {
    let k = source.len();
    let dim = a.dim();
    let mut out = SquareMatrix::zeros(k.max(1));
    for (j, s) in source.iter().enumerate() {
        let img = a.mul_vec(s);
        for (i, t) in target.iter().enumerate() {
            out[(i, j)] = dot(t, &img, dim);
        }
    }
    out
}

/// Smallest principal angle (radians) between two subspaces given by
/// orthonormal bases.
pub fn min_principal_angle<T: Scalar>(a: &[Vector<T>], b: &[Vector<T>], dim: usize) -> T {
    if a.is_empty() || b.is_empty() {
        return T::lit(std::f64::consts::FRAC_PI_2);
    }
    // Largest singular value of the cross-Gram matrix aᵀb gives cos of the
    // smallest angle.
    let k = a.len().max(b.len());
    let mut g = SquareMatrix::zeros(k);
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            g[(i, j)] = dot(u, v, dim);
        }
    }
    let cos = g.operator_norm().min(T::one());
    cos.acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cat_matrix_spectrum() {
        let a = SquareMatrix::<f64>::from_f64_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let ev = a.eigenvalues();
        let lam = (3.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(ev[0].re, lam, epsilon = 1e-14);
        assert_relative_eq!(ev[1].re, 1.0 / lam, epsilon = 1e-14);
        assert_relative_eq!(a.operator_norm(), lam, epsilon = 1e-14);
        let a3 = a * a * a;
        assert_eq!(a3, SquareMatrix::from_f64_rows(&[&[13.0, 8.0], &[8.0, 5.0]]));
    }

    #[test]
    fn inverse_round_trip_3d() {
        let a = SquareMatrix::<f64>::from_f64_rows(&[
            &[2.0, 1.0, 0.5],
            &[0.0, 1.0, -1.0],
            &[1.0, 3.0, 4.0],
        ]);
        let id = a * a.inverse().unwrap();
        assert!(id.sub(&SquareMatrix::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn cubic_spectrum_of_block_diagonal() {
        let a = SquareMatrix::<f64>::from_f64_rows(&[
            &[1.0, 0.0, 0.0],
            &[0.0, 2.0, 1.0],
            &[0.0, 1.0, 1.0],
        ]);
        let mut mods: Vec<f64> = a.eigenvalues().iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        let lam = (3.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(mods[0], 1.0 / lam, epsilon = 1e-10);
        assert_relative_eq!(mods[1], 1.0, epsilon = 1e-10);
        assert_relative_eq!(mods[2], lam, epsilon = 1e-10);
    }

    #[test]
    fn complex_pair_detected() {
        let rot = SquareMatrix::<f64>::from_f64_rows(&[&[0.0, -2.0], &[2.0, 0.0]]);
        let ev = rot.eigenvalues();
        assert_relative_eq!(ev[0].im.abs(), 2.0, epsilon = 1e-14);
        assert_relative_eq!(ev[0].norm(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn jacobi_matches_diagonal() {
        let a = SquareMatrix::<f64>::from_f64_rows(&[
            &[4.0, 1.0, 0.0],
            &[1.0, 3.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        let sv = a.singular_values();
        let top = (7.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(sv[0], top, epsilon = 1e-12);
        assert_relative_eq!(sv[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn principal_angle_of_axes() {
        let e1 = [1.0f64, 0.0, 0.0];
        let d = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0];
        assert_relative_eq!(
            min_principal_angle(&[e1], &[d], 2),
            std::f64::consts::FRAC_PI_4,
            epsilon = 1e-12
        );
    }

    #[test]
    fn works_in_single_precision() {
        let a = SquareMatrix::<f32>::from_f64_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let lam = (3.0 + 5f32.sqrt()) / 2.0;
        assert!((a.operator_norm() - lam).abs() < 1e-5);
    }
}
