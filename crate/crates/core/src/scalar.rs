//! Scalar abstractions shared by the exact (rational) and floating-point paths.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field used by the piecewise-affine interval model.
///
/// Exact types (rationals) report a zero containment slack; floating types
/// use a small absolute slack when testing membership of a point in an
/// interval.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync
{
    fn containment_tol() -> Self;

    fn is_exact() -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer fits") / Self::from_i64(den).expect("integer fits")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn containment_tol() -> Self {
        1e-12
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f32 {
    fn containment_tol() -> Self {
        1e-6
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn containment_tol() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn is_exact() -> bool {
        true
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for Ratio<i64> {
    fn containment_tol() -> Self {
        Ratio::from_integer(0)
    }
    fn is_exact() -> bool {
        true
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

/// Real floating type used by the numerical (complex-analytic) engine.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Literal conversion; every constant used in the engine is representable.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
