//! Saddle-point pressure numerics for concrete diffeomorphisms.
//!
//! The crate enumerates and classifies periodic orbits, filters saddles by
//! uniform hyperbolicity constants, and estimates saddle-point, Bowen,
//! separated-set and volume pressures together with escape rates,
//! expansion rates and box dimensions. A subshift-of-finite-type oracle
//! provides exact reference values.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double precision case.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod orbits;
pub mod potential;
pub mod pressure;
pub mod rng;
pub mod scalar;
pub mod system;

pub use bounds::{derivative_log_bound, SystemBounds};
pub use error::{Error, Result};
pub use geometry::{
    BoxDimension, DimensionBound, EscapeRateEstimate, ExpansionEstimate, SurvivorCloud,
};
pub use linalg::SquareMatrix;
pub use orbits::{
    EnumerationMethod, OrbitStatus, OrbitTable, PeriodicOrbit, SaddleFilter,
};
pub use oracle::{MarkovMeasure, WeightedShift};
pub use potential::{birkhoff_sum, Potential, PotentialKind, PotentialSpec};
pub use pressure::{GrowthEstimate, PressureSeries};
pub use scalar::{Field, Scalar};
pub use system::catalog::{
    CatMap, Henon, LinearHorseshoe, NonlinearHorseshoe, RotationCat, SinkHorseshoe, SystemSpec,
};
pub use system::{
    iterate, tangent_cocycle, Chart, ChartKind, CocycleDirection, Point, Region, SmoothSystem,
    Trajectory,
};

pub type Point64 = Point<f64>;
pub type SquareMatrix64 = SquareMatrix<f64>;
pub type Potential64 = Potential<f64>;
pub type Region64 = Region<f64>;
pub type SystemBounds64 = SystemBounds<f64>;
pub type PeriodicOrbit64 = PeriodicOrbit<f64>;
pub type OrbitTable64 = OrbitTable<f64>;
pub type WeightedShift64 = WeightedShift<f64>;
pub type PressureSeries64 = PressureSeries<f64>;
pub type GrowthEstimate64 = GrowthEstimate<f64>;
pub type EscapeRateEstimate64 = EscapeRateEstimate<f64>;
pub type ExpansionEstimate64 = ExpansionEstimate<f64>;
pub type SurvivorCloud64 = SurvivorCloud<f64>;
