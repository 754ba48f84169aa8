//! Numerical laboratory for circle-quotient spectral geometry.
//!
//! The crate bundles the fiberwise exterior/Clifford algebra, coordinate
//! charts with numerical exterior calculus, the geometry of a semi-free
//! circle action (characteristic form, mean curvature, orbit volume), the
//! induced quotient operators, exact cone-coefficient spectra, finite
//! dimensional regular-singular operator theory on the half line, and
//! Chern-Weil quadrature for characteristic integrals.
//!
//! All floating point code is generic over the scalar type through the
//! [`Real`] trait (`f32` or `f64`); the cone spectra are carried in exact
//! rational-surd arithmetic instead.

pub mod chart;
pub mod charclass;
pub mod cone;
pub mod exterior;
pub mod expr;
pub mod quad;
pub mod quotient;
pub mod radial;
pub mod report;
pub mod s1;
pub mod surd;

use num_complex::Complex;

/// Scalar abstraction for all floating point numerics in this crate.
///
/// `nalgebra::RealField` supplies the transcendental functions and makes
/// `Complex<T>` usable in matrix decompositions; the `num-traits` bounds
/// cover constants and conversions.
pub trait Real:
    nalgebra::RealField
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Copy
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`] base.
pub type C<T> = Complex<T>;

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub fn r64<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// Error type shared by the library modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("metric is not symmetric positive definite")]
    MetricNotSpd,
    #[error("evaluation outside chart domain: coordinate {coord} = {value}")]
    OutsideChart { coord: String, value: f64 },
    #[error("differentiation step underflow")]
    StepUnderflow,
    #[error("evaluation inside fixed-point guard: |V| = {norm} <= {guard}")]
    FixedPointGuard { norm: f64, guard: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("rank tolerance breach: singular value {sv} within guard band of cutoff {cutoff}")]
    RankTolerance { sv: f64, cutoff: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

// Concrete aliases for the default double precision instantiation.
pub type Form64 = exterior::Form<f64>;
pub type Space64 = exterior::Space<f64>;
pub type Endo64 = exterior::Endo<f64>;

/// Modulus of a complex scalar without the `num_traits::Float` bound.
#[inline]
pub fn cnorm<T: Real>(z: &C<T>) -> T {
    z.norm_sqr().sqrt()
}
