//! Multicurve pullback combinatorics, exact annular systems and their affine
//! interval model, numerical curve lifting under post-critically finite
//! rational maps, and the combinatorial renormalization search.

pub mod annulus_engine;
pub mod coding;
pub mod curve_complex;
pub mod interval_model;
pub mod rational_dynamics;
pub mod renorm_search;
pub mod scalar;
pub mod verify;

pub use scalar::{Real, Scalar};

use num_rational::BigRational;

pub type ExactIntervalSystem = interval_model::IntervalSystem<BigRational>;
pub type IntervalSystem64 = interval_model::IntervalSystem<f64>;
pub type LogRealization64 = annulus_engine::LogRealization<f64>;
pub type Point64 = rational_dynamics::Point<f64>;
pub type CurvePolyline64 = rational_dynamics::CurvePolyline<f64>;
pub type RationalMap64 = rational_dynamics::RationalMap<f64>;
pub type ExactSystemReport64 = rational_dynamics::ExactSystemReport<f64>;
pub type WanderingRun64 = rational_dynamics::WanderingRun<f64>;
