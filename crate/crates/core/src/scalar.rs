//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
///
/// Tolerances quoted throughout the crate assume `f64`; `f32` works but
/// loses roughly eight digits everywhere.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working precision.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in working precision")
}

/// Converts a count into the working precision.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in working precision")
}

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

#[inline]
pub fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// The imaginary unit.
#[inline]
pub fn i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `sin(πx)` for real `x`, exact zero at integers.
pub fn sin_pi_real<T: Real>(x: T) -> T {
    let two = lit::<T>(2.0);
    let mut r = x % two;
    if r < T::zero() {
        r += two;
    }
    // r in [0, 2)
    if r == T::zero() || r == T::one() {
        return T::zero();
    }
    if r == lit(0.5) {
        return T::one();
    }
    if r == lit(1.5) {
        return -T::one();
    }
    (T::PI() * r).sin()
}

/// `cos(πx)` for real `x`, exact zero at half-integers.
pub fn cos_pi_real<T: Real>(x: T) -> T {
    sin_pi_real(x + lit(0.5))
}

/// `sin(πz)` for complex `z`, exact zero at real integers.
pub fn sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let py = T::PI() * z.im;
    Complex::new(sin_pi_real(z.re) * py.cosh(), cos_pi_real(z.re) * py.sinh())
}

/// `cos(πz)` for complex `z`.
pub fn cos_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let py = T::PI() * z.im;
    Complex::new(cos_pi_real(z.re) * py.cosh(), -sin_pi_real(z.re) * py.sinh())
}

/// Distance from `z` to the nearest integer on the real axis (infinite if
/// `z` is off the axis by more than `tol`).
pub fn near_integer<T: Real>(z: Complex<T>, tol: T) -> Option<i64> {
    if z.im.abs() > tol {
        return None;
    }
    let k = z.re.round();
    if (z.re - k).abs() <= tol {
        k.to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -6..=6 {
            assert_eq!(sin_pi_real(k as f64), 0.0);
            assert_eq!(cos_pi_real(k as f64 + 0.5), 0.0);
        }
        let z = Complex::new(0.3, 0.7);
        let direct = (z * std::f64::consts::PI).sin();
        assert!((sin_pi(z) - direct).norm() < 1e-14);
        let direct = (z * std::f64::consts::PI).cos();
        assert!((cos_pi(z) - direct).norm() < 1e-14);
    }

    #[test]
    fn near_integer_detection() {
        assert_eq!(near_integer(Complex::new(2.0 + 1e-12, 0.0), 1e-9), Some(2));
        assert_eq!(near_integer(Complex::new(2.1, 0.0), 1e-9), None);
        assert_eq!(near_integer(Complex::new(-3.0, 1e-3), 1e-9), None);
    }
}
