//! Scalar abstraction for the planar geometry layer.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar usable for edge vectors, matrices and surfaces.
///
/// Besides the arithmetic from `num_traits`, each scalar carries the
/// absolute coordinate tolerance and the angular tolerance used when
/// comparing glued edges and cone angles.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Absolute tolerance on coordinates.
    fn tol() -> Self;
    /// Tolerance on cone angles, in radians.
    fn angle_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    #[inline]
    fn tol() -> Self {
        1e-9
    }
    #[inline]
    fn angle_tol() -> Self {
        1e-7
    }
}

impl Real for f32 {
    #[inline]
    fn tol() -> Self {
        1e-4
    }
    #[inline]
    fn angle_tol() -> Self {
        1e-3
    }
}

/// Coordinate tolerance for binary64 computations.
pub const TOL: f64 = 1e-9;
/// Angular tolerance for binary64 computations.
pub const ANGLE_TOL: f64 = 1e-7;
