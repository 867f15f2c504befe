//! Numerics for post-critically finite rational maps on the Riemann sphere:
//! critical orbits, path and curve lifting, homotopy tags of curves rel a
//! finite marked set, exact annular systems and wandering Jordan curves.

pub mod builtin;
mod curve;
mod exact;
mod export;
mod lift;
mod map;
mod pcf;
mod poly;
mod sphere;
mod tag;
mod wander;

use thiserror::Error;

pub use curve::{winding_number, CurvePolyline};
pub use exact::{verify_exact_system, ExactSystemInput, ExactSystemReport, SubannulusWitness};
pub use export::{curve_to_csv, render_svg, Scene};
pub use lift::{lift_curve_components, lift_path, LiftComponent, LiftOptions};
pub use map::{CriticalPoint, MapSpec, RationalMap};
pub use pcf::{post_critical, CriticalOrbit, MarkedSphere, PostCritical};
pub use poly::{cluster_roots, Poly};
pub use sphere::{sphere_samples, Chart, Point};
pub use tag::{classify_curve, CurveKind, HomotopyTag, TagMatch};
pub use wander::{
    log_model_wandering, wandering_curve, BoundaryDiagnostic, ModelRun, WanderingOptions,
    WanderingRun,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("marked points {0} and {1} coincide within tolerance")]
    MarkedTooClose(usize, usize),
    #[error("a critical orbit has more than {max_orbit} distinct points")]
    NotPcf { max_orbit: usize },
    #[error("path passes within the clearance of a critical value at t = {t}")]
    CriticalValueCollision { t: f64 },
    #[error("continuation failed at t = {t}")]
    StepFailure { t: f64 },
    #[error("seed is not a preimage of the path start")]
    SeedMismatch,
    #[error("lifting found {found} preimages, expected {expected}")]
    RootCountMismatch { found: usize, expected: usize },
    #[error("curve passes too close to marked point {marked}")]
    CurveTooClose { marked: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("needs manual review: {0}")]
    Ambiguous(String),
    #[error("branch selection failed: {0}")]
    Selection(String),
    #[error("lifting at depth {depth}, code position {position}: {cause}")]
    Lift {
        depth: usize,
        position: usize,
        cause: Box<DynamicsError>,
    },
}
