//! Hermite polynomials and the normalised oscillator functions built on them.

use num_complex::Complex;

use crate::scalar::{lit, Real};

/// Physicists' Hermite polynomial `H_n(z)` by upward recurrence.
pub fn hermite<T: Real>(n: usize, z: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let mut prev = Complex::from(T::one());
    if n == 0 {
        return prev;
    }
    let mut cur = z * two;
    for k in 1..n {
        let next = z * cur * two - prev * (two * lit::<T>(k as f64));
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalised Hermite functions `h_k(z) = H_k(z) e^{-z²/2} / sqrt(2^k k! sqrt(π))`
/// for `k = 0..=n_max`, evaluated at complex `z`.
///
/// Uses the normalised three-term recurrence, so no factorial is ever formed
/// and orders well past 170 stay finite.
pub fn hermite_functions<T: Real>(n_max: usize, z: Complex<T>) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = (-(z * z) * lit::<T>(0.5)).exp() * T::PI().powf(lit(-0.25));
    out.push(h0);
    if n_max == 0 {
        return out;
    }
    out.push(z * h0 * lit::<T>(2.0).sqrt());
    for k in 1..n_max {
        let kf = lit::<T>(k as f64);
        let a = (lit::<T>(2.0) / (kf + T::one())).sqrt();
        let b = (kf / (kf + T::one())).sqrt();
        let next = z * out[k] * a - out[k - 1] * b;
        out.push(next);
    }
    out
}

/// Single normalised Hermite function `h_n(z)`.
pub fn hermite_function<T: Real>(n: usize, z: Complex<T>) -> Complex<T> {
    *hermite_functions(n, z).last().expect("non-empty")
}
