//! Floating-point scalar abstraction.
//!
//! Every numerical routine in the crate is written against [`Real`] so it can
//! run in `f32` or `f64`. Exact computations (characteristic polynomials of
//! sign matrices) use [`num_bigint::BigInt`] and never go through this trait.

use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the numerical kernels are generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Default normalized-residual tolerance for the root finder.
    const ROOT_TOL: f64;
    /// Largest distance from an integer accepted when snapping interpolated
    /// symbol coefficients.
    const SNAP_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    fn root_tol() -> Self {
        Self::lit(Self::ROOT_TOL)
    }

    fn snap_tol() -> Self {
        Self::lit(Self::SNAP_TOL)
    }
}

impl Real for f64 {
    const ROOT_TOL: f64 = 1e-10;
    const SNAP_TOL: f64 = 1e-8;
}

impl Real for f32 {
    const ROOT_TOL: f64 = 1e-4;
    const SNAP_TOL: f64 = 1e-3;
}

/// `e^{i theta}`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub(crate) fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Total order on complex numbers by real part, then imaginary part.
pub(crate) fn cmp_complex<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}
