//! Exact thermodynamics of subshifts of finite type with depth-1 weights.
//!
//! With M_ij = e^{φ_i}·A_ij the pressure is log ρ(M), periodic sums are
//! traces of powers of M, and the equilibrium state is the Markov chain
//! built from the leading left and right eigenvectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_SYMBOLS: usize = 64;

const POWER_TOLERANCE: f64 = 1e-12;
const POWER_MAX_ITER: usize = 1_000_000;

/// Above this n the periodic sum is computed with rescaled powers.
const LOG_DOMAIN_FROM: usize = 40;

/// Serializable shift descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    /// 0/1 rows; omitted means the full shift.
    #[serde(default)]
    pub transitions: Option<Vec<Vec<u8>>>,
    /// Potential value on each symbol's cylinder.
    pub potential: Vec<f64>,
}

impl ShiftSpec {
    pub fn build<T: Scalar>(&self) -> Result<WeightedShift<T>> {
        let s = self.potential.len();
        let a = self.transitions.clone().unwrap_or_else(|| vec![vec![1; s]; s]);
        WeightedShift::new(a, &self.potential)
    }
}

/// A subshift of finite type with a potential depending on the current
/// symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedShift<T> {
    transitions: Vec<Vec<u8>>,
    potential: Vec<T>,
}

impl<T: Scalar> WeightedShift<T> {
    pub fn new(transitions: Vec<Vec<u8>>, potential: &[f64]) -> Result<Self> {
        let s = transitions.len();
        if s == 0 || s > MAX_SYMBOLS {
            return Err(Error::param("transitions", format!("need 1..={MAX_SYMBOLS} symbols")));
        }
        if transitions.iter().any(|r| r.len() != s || r.iter().any(|&x| x > 1)) {
            return Err(Error::param("transitions", "must be a square 0/1 matrix"));
        }
        if potential.len() != s {
            return Err(Error::param("potential", "need one value per symbol"));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("potential", "must be finite"));
        }
        Ok(Self {
            transitions,
            potential: potential.iter().map(|&v| T::lit(v)).collect(),
        })
    }

    pub fn full(potential: &[f64]) -> Result<Self> {
        let s = potential.len();
        Self::new(vec![vec![1; s]; s], potential)
    }

    /// Golden-mean shift: the word 11 is forbidden.
    pub fn golden_mean(potential: &[f64; 2]) -> Self {
        Self::new(vec![vec![1, 1], vec![1, 0]], potential).expect("valid golden-mean shift")
    }

    pub fn symbols(&self) -> usize {
        self.transitions.len()
    }

    pub fn transitions(&self) -> &[Vec<u8>] {
        &self.transitions
    }

    pub fn potential(&self) -> &[T] {
        &self.potential
    }

    /// w_i = e^{φ_i}.
    pub fn weights(&self) -> Vec<T> {
        self.potential.iter().map(|p| p.exp()).collect()
    }

    /// M_ij = w_i·A_ij.
    pub fn matrix(&self) -> Vec<Vec<T>> {
        let w = self.weights();
        self.transitions
            .iter()
            .zip(&w)
            .map(|(row, wi)| row.iter().map(|&a| if a == 1 { *wi } else { T::zero() }).collect())
            .collect()
    }

    /// Errors with the first symbol that cannot reach every other one.
    pub fn check_irreducible(&self) -> Result<()> {
        let s = self.symbols();
        for from in 0..s {
            let mut seen = vec![false; s];
            let mut stack = vec![from];
            while let Some(i) = stack.pop() {
                for j in 0..s {
                    if self.transitions[i][j] == 1 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            let unreachable: Vec<usize> = (0..s).filter(|&j| !seen[j]).collect();
            if !unreachable.is_empty() {
                return Err(Error::Reducible { from, unreachable });
            }
        }
        Ok(())
    }
}

fn mat_vec<T: Scalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| *a * *b).sum()).collect()
}

fn transpose<T: Scalar>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let s = m.len();
    (0..s).map(|j| (0..s).map(|i| m[i][j]).collect()).collect()
}

/// Perron root and positive eigenvector of an irreducible nonnegative
/// matrix. Iterates with M + I (aperiodic, same eigenvector) and stops
/// when the Collatz–Wielandt bounds agree to the tolerance.
fn perron<T: Scalar>(m: &[Vec<T>]) -> (T, Vec<T>) {
    let s = m.len();
    let shifted: Vec<Vec<T>> = (0..s)
        .map(|i| (0..s).map(|j| if i == j { m[i][j] + T::one() } else { m[i][j] }).collect())
        .collect();
    let tol = T::lit(POWER_TOLERANCE).max(T::lit(4.0) * T::eps());
    let mut v = vec![T::one(); s];
    let mut rho = T::zero();
    for _ in 0..POWER_MAX_ITER {
        let w = mat_vec(&shifted, &v);
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for i in 0..s {
            let r = w[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let total: T = w.iter().copied().sum();
        v = w.iter().map(|x| *x / total).collect();
        rho = (lo + hi) / T::lit(2.0);
        if hi - lo <= tol * rho {
            break;
        }
    }
    (rho - T::one(), v)
}

/// log ρ(M).
pub fn transfer_pressure<T: Scalar>(shift: &WeightedShift<T>) -> Result<T> {
    shift.check_irreducible()?;
    Ok(perron(&shift.matrix()).0.ln())
}

fn mat_mul<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let s = a.len();
    (0..s)
        .map(|i| (0..s).map(|j| (0..s).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn max_entry<T: Scalar>(m: &[Vec<T>]) -> T {
    m.iter().flatten().fold(T::zero(), |acc, x| acc.max(*x))
}

fn rescale<T: Scalar>(m: &mut [Vec<T>], log_scale: &mut T) {
    let big = max_entry(m);
    if big > T::zero() {
        for x in m.iter_mut().flatten() {
            *x = *x / big;
        }
        *log_scale = *log_scale + big.ln();
    }
}

/// log tr(Mⁿ). Powers are kept normalized by their largest entry when n
/// exceeds the direct range.
pub fn log_trace_periodic_sum<T: Scalar>(shift: &WeightedShift<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let m = shift.matrix();
    let scaled = n > LOG_DOMAIN_FROM;
    let mut log_scale = T::zero();
    let mut acc = m.clone();
    for _ in 1..n {
        acc = mat_mul(&acc, &m);
        if scaled {
            rescale(&mut acc, &mut log_scale);
        }
    }
    let tr: T = (0..m.len()).map(|i| acc[i][i]).sum();
    Ok(tr.ln() + log_scale)
}

/// Σ_{x ∈ Fix(σⁿ)} exp S_nφ(x) = tr(Mⁿ).
pub fn trace_periodic_sum<T: Scalar>(shift: &WeightedShift<T>, n: usize) -> Result<T> {
    Ok(log_trace_periodic_sum(shift, n)?.exp())
}

/// Stationary Markov chain on an SFT.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovMeasure<T> {
    pub stationary: Vec<T>,
    pub kernel: Vec<Vec<T>>,
    /// Entropy in nats.
    pub entropy: T,
    /// ∫φ dμ.
    pub potential_integral: T,
}

impl<T: Scalar> MarkovMeasure<T> {
    /// Measure of an arbitrary kernel supported on the allowed
    /// transitions, with its stationary vector and the shift's potential.
    pub fn from_kernel(shift: &WeightedShift<T>, kernel: Vec<Vec<T>>) -> Result<Self> {
        let s = shift.symbols();
        if kernel.len() != s || kernel.iter().any(|r| r.len() != s) {
            return Err(Error::param("kernel", "shape must match the shift"));
        }
        for (i, row) in kernel.iter().enumerate() {
            let sum: T = row.iter().copied().sum();
            if (sum - T::one()).abs() > T::lit(1e-9) {
                return Err(Error::param("kernel", format!("row {i} does not sum to 1")));
            }
            for (j, p) in row.iter().enumerate() {
                if *p < T::zero() || (*p > T::zero() && shift.transitions[i][j] == 0) {
                    return Err(Error::param("kernel", format!("entry ({i},{j}) not allowed")));
                }
            }
        }
        shift.check_irreducible()?;
        // Left Perron vector of P is the stationary distribution.
        let (_, pi) = perron(&transpose(&kernel));
        Ok(Self::assemble(shift, pi, kernel))
    }

    fn assemble(shift: &WeightedShift<T>, stationary: Vec<T>, kernel: Vec<Vec<T>>) -> Self {
        let mut entropy = T::zero();
        for (pi, row) in stationary.iter().zip(&kernel) {
            for p in row {
                if *p > T::zero() {
                    entropy = entropy - *pi * *p * p.ln();
                }
            }
        }
        let potential_integral = stationary.iter().zip(&shift.potential).map(|(a, b)| *a * *b).sum();
        Self {
            stationary,
            kernel,
            entropy,
            potential_integral,
        }
    }

    /// h + ∫φ dμ.
    pub fn free_energy(&self) -> T {
        self.entropy + self.potential_integral
    }
}

/// The equilibrium state: P_ij = M_ij·v_j / (ρ·v_i), π_i ∝ u_i·v_i.
pub fn markov_equilibrium<T: Scalar>(shift: &WeightedShift<T>) -> Result<MarkovMeasure<T>> {
    shift.check_irreducible()?;
    let m = shift.matrix();
    let (rho, v) = perron(&m);
    let (_, u) = perron(&transpose(&m));
    let s = m.len();
    let kernel: Vec<Vec<T>> = (0..s)
        .map(|i| (0..s).map(|j| m[i][j] * v[j] / (rho * v[i])).collect())
        .collect();
    let norm: T = (0..s).map(|i| u[i] * v[i]).sum();
    let pi: Vec<T> = (0..s).map(|i| u[i] * v[i] / norm).collect();
    Ok(MarkovMeasure::assemble(shift, pi, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn full_shift_pressures() {
        let w = WeightedShift::<f64>::full(&[0.0, 0.0]).unwrap();
        assert_relative_eq!(transfer_pressure(&w).unwrap(), 2f64.ln(), epsilon = 1e-12);
        let w = WeightedShift::<f64>::full(&[0.0, 1.0]).unwrap();
        let expected = (1.0 + 1f64.exp()).ln();
        assert_relative_eq!(transfer_pressure(&w).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn golden_mean_trace_and_pressure() {
        let g = WeightedShift::<f64>::golden_mean(&[0.0, 0.0]);
        assert_relative_eq!(trace_periodic_sum(&g, 4).unwrap(), 7.0, epsilon = 1e-12);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(transfer_pressure(&g).unwrap(), phi.ln(), epsilon = 1e-12);
        let mu = markov_equilibrium(&g).unwrap();
        assert_relative_eq!(mu.entropy, phi.ln(), epsilon = 1e-12);
    }

    #[test]
    fn bernoulli_equilibrium() {
        let w = WeightedShift::<f64>::full(&[0.0, 1.0]).unwrap();
        let mu = markov_equilibrium(&w).unwrap();
        let p = 1f64.exp() / (1.0 + 1f64.exp());
        assert_relative_eq!(mu.stationary[1], p, epsilon = 1e-12);
        assert_relative_eq!(mu.free_energy(), (1.0 + 1f64.exp()).ln(), epsilon = 1e-12);
    }

    #[test]
    fn log_domain_matches_direct() {
        let w = WeightedShift::<f64>::full(&[0.3, -0.2, 0.1]).unwrap();
        let direct: f64 = (0.3f64.exp() + (-0.2f64).exp() + 0.1f64.exp()).ln() * 41.0;
        assert_relative_eq!(log_trace_periodic_sum(&w, 41).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn reducible_names_unreachable() {
        let w = WeightedShift::<f64>::new(vec![vec![1, 1], vec![0, 1]], &[0.0, 0.0]).unwrap();
        assert_eq!(
            transfer_pressure(&w),
            Err(Error::Reducible {
                from: 1,
                unreachable: vec![0]
            })
        );
    }
}
