//! Hyperbolicity constants and the (α, c) saddle filtrations.
//!
//! For a saddle orbit the lower constant at rate α is the largest c with
//! ‖Dfᵏv‖ ≥ c·e^{kα}‖v‖ on Eᵘ and ‖Df⁻ᵏw‖ ≥ c·e^{kα}‖w‖ on Eˢ for every
//! k ≥ 0 and every orbit point. The banded upper constant at rate β is the
//! largest c with the matching bounds ≤ c⁻¹·e^{kβ}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::orbits::{OrbitStatus, PeriodicOrbit};
use crate::scalar::Scalar;

/// Window sums within this of zero count as zero, so exact rates
/// (α = λ, β = β₀) do not lose orbits to rounding.
const SNAP: f64 = 1e-10;

/// How far k runs when computing constants.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KCap {
    /// Exact for one-dimensional blocks; otherwise 3p + ⌈40/α⌉.
    #[default]
    Default,
    Fixed(usize),
}

impl KCap {
    fn resolve(self, period: usize, rate: f64) -> usize {
        match self {
            KCap::Fixed(k) => k,
            KCap::Default => 3 * period + (40.0 / rate.max(1e-3)).ceil() as usize,
        }
    }
}

/// Membership test parameters. `beta = None` is the one-sided filter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaddleFilter {
    pub alpha: f64,
    #[serde(default)]
    pub beta: Option<f64>,
    pub c: f64,
    #[serde(default)]
    pub k_cap: KCap,
}

impl SaddleFilter {
    pub fn new(alpha: f64, c: f64) -> Self {
        Self {
            alpha,
            beta: None,
            c,
            k_cap: KCap::Default,
        }
    }

    pub fn banded(alpha: f64, beta: f64, c: f64) -> Self {
        Self {
            beta: Some(beta),
            ..Self::new(alpha, c)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::param("alpha", "must be positive"));
        }
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(Error::param("c", "must lie in (0, 1]"));
        }
        if let Some(b) = self.beta {
            if !(b.is_finite() && b >= self.alpha) {
                return Err(Error::param("beta", "must be finite and at least alpha"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Unstable,
    Stable,
}

/// Optimal constant and where the bound is tight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantReport<T> {
    pub c_max: T,
    pub argmin_k: usize,
    pub argmin_i: usize,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitConstants<T> {
    pub lower: ConstantReport<T>,
    pub upper: Option<ConstantReport<T>>,
}

impl<T: Scalar> OrbitConstants<T> {
    pub fn compute(orbit: &PeriodicOrbit<T>, filter: &SaddleFilter) -> Result<Self> {
        let lower = empirical_constant(orbit, T::lit(filter.alpha), filter.k_cap)?;
        let upper = match filter.beta {
            Some(b) => Some(banded_constant(orbit, T::lit(b), filter.k_cap)?),
            None => None,
        };
        Ok(Self { lower, upper })
    }

    pub fn admits(&self, c: f64) -> bool {
        let c = T::lit(c);
        self.lower.c_max >= c && self.upper.is_none_or(|u| u.c_max >= c)
    }
}

fn steps<T: Scalar>(orbit: &PeriodicOrbit<T>) -> Result<(&[SquareMatrix<T>], &[SquareMatrix<T>])> {
    match (&orbit.status, &orbit.splitting) {
        (OrbitStatus::Saddle, Some(s)) => Ok((&s.unstable_steps, &s.stable_steps)),
        (OrbitStatus::Unclassified, _) => Err(Error::Unclassified),
        _ => Err(Error::NotSaddle),
    }
}

/// Which quantity a window contributes.
#[derive(Clone, Copy)]
enum Bound {
    /// log of the smallest singular value of the forward window product
    /// (unstable lower bound), minus k·rate.
    UnstableLower,
    /// −log‖P‖ − k·rate: smallest stretch of Df⁻ᵏ on Eˢ.
    StableLower,
    /// k·rate − log‖P‖ on Eᵘ.
    UnstableUpper,
    /// k·rate + log conorm(P) on Eˢ.
    StableUpper,
}

#[derive(Clone, Copy)]
struct Tight<T> {
    log_c: T,
    k: usize,
    i: usize,
}

/// Per-step increments for a one-dimensional block.
fn increments<T: Scalar>(steps: &[SquareMatrix<T>], rate: T, bound: Bound) -> Vec<T> {
    steps
        .iter()
        .map(|r| {
            let l = r[(0, 0)].abs().ln();
            match bound {
                Bound::UnstableLower => l - rate,
                Bound::StableLower => -l - rate,
                Bound::UnstableUpper => rate - l,
                Bound::StableUpper => rate + l,
            }
        })
        .collect()
}

fn snap<T: Scalar>(x: T, len: usize) -> T {
    if x.abs() <= T::lit(SNAP) * T::from_usize_lossy(len + 1) {
        T::zero()
    } else {
        x
    }
}

/// Exact minimum over all k ≥ 0 for a one-dimensional block: the window
/// sums are periodic in k up to the per-period total, so windows shorter
/// than a period suffice when that total is non-negative, and the constant
/// is zero otherwise.
fn exact_1d<T: Scalar>(inc: &[T], cap: Option<usize>) -> Tight<T> {
    let p = inc.len();
    let total = snap(inc.iter().copied().sum::<T>(), p);
    let mut best = Tight {
        log_c: T::zero(),
        k: 0,
        i: 0,
    };
    if total < T::zero() && cap.is_none() {
        return Tight {
            log_c: T::neg_infinity(),
            k: usize::MAX,
            i: 0,
        };
    }
    let k_max = cap.unwrap_or(p.saturating_sub(1));
    for i in 0..p {
        let mut acc = T::zero();
        for k in 1..=k_max {
            acc = acc + inc[(i + k - 1) % p];
            let v = snap(acc, k);
            if v < best.log_c {
                best = Tight { log_c: v, k, i };
            }
        }
    }
    best
}

/// Capped search with window products for higher-dimensional blocks.
/// Unstable windows start at each point and run forward; stable windows
/// end at each point (Df⁻ᵏ from x_i lands at x_{i−k}).
fn capped<T: Scalar>(steps: &[SquareMatrix<T>], rate: T, bound: Bound, k_max: usize) -> Tight<T> {
    let p = steps.len();
    let mut best = Tight {
        log_c: T::zero(),
        k: 0,
        i: 0,
    };
    for start in 0..p {
        let mut prod = SquareMatrix::identity(steps[0].dim());
        let mut log_scale = T::zero();
        for k in 1..=k_max {
            prod = steps[(start + k - 1) % p] * prod;
            let s = prod.max_abs();
            if s > T::zero() && s.is_finite() {
                prod = prod.scale(T::one() / s);
                log_scale = log_scale + s.ln();
            }
            let sv = prod.singular_values();
            let big = sv[0].ln() + log_scale;
            let small = sv[sv.len() - 1].ln() + log_scale;
            let kt = T::from_usize_lossy(k);
            let (v, i) = match bound {
                Bound::UnstableLower => (small - kt * rate, start),
                Bound::StableLower => (-big - kt * rate, (start + k) % p),
                Bound::UnstableUpper => (kt * rate - big, start),
                Bound::StableUpper => (kt * rate + small, (start + k) % p),
            };
            let v = snap(v, k);
            if v < best.log_c {
                best = Tight { log_c: v, k, i };
            }
        }
    }
    best
}

fn side_constant<T: Scalar>(
    steps: &[SquareMatrix<T>],
    rate: T,
    bound: Bound,
    k_cap: KCap,
    period: usize,
) -> Option<Tight<T>> {
    if steps.is_empty() || steps[0].dim() == 0 {
        return None;
    }
    let one_dim = steps[0].dim() == 1;
    let t = match (one_dim, k_cap) {
        (true, KCap::Default) => exact_1d(&increments(steps, rate, bound), None),
        (true, KCap::Fixed(k)) => exact_1d(&increments(steps, rate, bound), Some(k)),
        (false, cap) => capped(steps, rate, bound, cap.resolve(period, rate.as_f64())),
    };
    // Stable windows report the point they are measured from.
    let t = match (one_dim, bound) {
        (true, Bound::StableLower | Bound::StableUpper) if t.k != usize::MAX => Tight {
            i: (t.i + t.k) % period,
            ..t
        },
        _ => t,
    };
    Some(t)
}

fn report<T: Scalar>(u: Option<Tight<T>>, s: Option<Tight<T>>) -> ConstantReport<T> {
    let mut best: Option<(Tight<T>, Side)> = None;
    for (t, side) in [(u, Side::Unstable), (s, Side::Stable)] {
        if let Some(t) = t {
            if best.is_none_or(|(b, _)| t.log_c < b.log_c) {
                best = Some((t, side));
            }
        }
    }
    let (t, side) = best.unwrap_or((
        Tight {
            log_c: T::zero(),
            k: 0,
            i: 0,
        },
        Side::Unstable,
    ));
    ConstantReport {
        c_max: t.log_c.exp().min(T::one()),
        argmin_k: t.k,
        argmin_i: t.i,
        side,
    }
}

/// Largest c for which the orbit satisfies the rate-α lower bounds.
pub fn empirical_constant<T: Scalar>(orbit: &PeriodicOrbit<T>, alpha: T, k_cap: KCap) -> Result<ConstantReport<T>> {
    let (us, ss) = steps(orbit)?;
    if alpha >= orbit.min_abs_exponent() {
        return Ok(ConstantReport {
            c_max: T::zero(),
            argmin_k: usize::MAX,
            argmin_i: 0,
            side: Side::Unstable,
        });
    }
    let u = side_constant(us, alpha, Bound::UnstableLower, k_cap, orbit.period);
    let s = side_constant(ss, alpha, Bound::StableLower, k_cap, orbit.period);
    Ok(report(u, s))
}

/// Largest c for which the orbit satisfies the rate-β upper bounds.
pub fn banded_constant<T: Scalar>(orbit: &PeriodicOrbit<T>, beta: T, k_cap: KCap) -> Result<ConstantReport<T>> {
    let (us, ss) = steps(orbit)?;
    let u = side_constant(us, beta, Bound::UnstableUpper, k_cap, orbit.period);
    let s = side_constant(ss, beta, Bound::StableUpper, k_cap, orbit.period);
    Ok(report(u, s))
}

/// Whether a classified orbit belongs to the filtered set.
pub fn filter_membership<T: Scalar>(orbit: &PeriodicOrbit<T>, filter: &SaddleFilter) -> bool {
    if !orbit.is_saddle() {
        return false;
    }
    OrbitConstants::compute(orbit, filter).is_ok_and(|c| c.admits(filter.c))
}
