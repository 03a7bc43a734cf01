//! Scalar abstraction for the numerical layer.
//!
//! All dense linear algebra in this crate is generic over a real scalar
//! type. Exact combinatorial quantities (characters, hook dimensions,
//! transposition eigenvalues) are computed in integer/rational arithmetic
//! and only converted to [`Scalar`] at the boundary.

use nalgebra::RealField;
use num_rational::Ratio;

/// Real scalar usable as the base field of the numerical layer.
///
/// `f64` is the type the library is validated with; `f32` compiles and runs
/// but the default tolerances are tuned for double precision.
pub trait Scalar: RealField + Copy + num_traits::ToPrimitive {}

impl<T: RealField + Copy + num_traits::ToPrimitive> Scalar for T {}

/// Lossy rendition of a scalar as `f64` (exact for `f32`/`f64`).
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("Scalar converts to f64")
}

/// Complex number over the crate's scalar type.
pub type C<T> = num_complex::Complex<T>;

/// Converts an `f64` configuration value (tolerance, weight, coefficient)
/// to the working scalar type.
#[inline]
pub fn from_f64<T: Scalar>(x: f64) -> T {
    <T as num_traits::FromPrimitive>::from_f64(x).expect("finite f64 converts to any Scalar")
}

/// Exact-to-float conversion of a rational number.
#[inline]
pub fn from_ratio<T: Scalar>(r: Ratio<i128>) -> T {
    from_f64(*r.numer() as f64 / *r.denom() as f64)
}

/// A real number as a complex scalar.
#[inline]
pub fn c_re<T: Scalar>(x: T) -> C<T> {
    C::new(x, T::zero())
}
