//! Translation surfaces: construction, `SL(2,R)` deformation, saddle
//! connections, directional flows and ergodicity diagnostics.
//!
//! The planar layer ([`geom`], [`surface`], [`modular`]) is generic over the
//! scalar type through [`Real`]; the search and dynamics layers work in
//! binary64 on the [`Surface`] alias.

// `!(x > 0.0)` is how parameters reject NaN along with the bad range
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builders;
pub mod diagnostics;
pub mod flow;
pub mod geom;
pub mod modular;
pub mod saddle;
pub mod scalar;
pub mod surface;
pub mod triangulate;

pub use scalar::Real;

/// Binary64 plane vector.
pub type Vec2 = geom::Vec2<f64>;
/// Binary64 2x2 matrix.
pub type Mat2 = geom::Mat2<f64>;
/// Binary64 triangle.
pub type Triangle = geom::Triangle<f64>;
/// Binary64 translation surface.
pub type Surface = surface::TranslationSurface<f64>;
