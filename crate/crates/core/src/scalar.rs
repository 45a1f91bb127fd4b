//! Scalar abstractions.
//!
//! Everything numeric in this crate is written against [`Scalar`], a thin
//! extension of [`num_traits::Float`] implemented for `f32` and `f64`.
//! The affine catalog maps (cat map, linear horseshoe) additionally expose
//! their map rules over any [`Field`], which lets them run in exact rational
//! arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating point scalar used by all analysis code.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative machine epsilon.
    #[inline]
    fn eps() -> Self {
        <Self as Float>::epsilon()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `x` rounded to 12 significant digits, printed in the shortest form that
/// reads back to the rounded value.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// Ordered field with a floor; enough for affine maps on the plane or torus.
pub trait Field: Num + Clone + PartialOrd + Debug {
    fn floor_value(&self) -> Self;
    fn from_i64(v: i64) -> Self;
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            #[inline]
            fn floor_value(&self) -> Self {
                self.floor()
            }
            #[inline]
            fn from_i64(v: i64) -> Self {
                v as $t
            }
        }
    };
}

float_field!(f32);
float_field!(f64);

impl<I> Field for Ratio<I>
where
    I: Clone + Integer + FromPrimitive + Debug,
{
    fn floor_value(&self) -> Self {
        self.floor()
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer conversion"))
    }
}
