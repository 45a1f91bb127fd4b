//! Escape rates, expansion rates, box dimensions and the dimension bound.

pub mod bound;
pub mod boxdim;
pub mod cloud;
pub mod escape;
pub mod expansion;

pub use bound::{dimension_bound, BoundCheck, DimensionBound};
pub use boxdim::{box_count, box_dimension, geometric_scales, BoxDimension, CloudSource};
pub use cloud::{cantor_cloud, survivor_cloud, uniform_cloud, SurvivorCloud};
pub use escape::{escape_rate, EscapeRateEstimate};
pub use expansion::{expansion_rate, ExpansionEstimate};
