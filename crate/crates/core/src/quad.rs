//! Quadrature rules for complex-valued integrands of a real variable.
//!
//! Three rules cover everything the crate integrates: the trapezoid rule on
//! the whole line (geometric convergence for analytic, decaying integrands),
//! tanh-sinh on a finite interval (integrable endpoint singularities), and
//! composite Gauss-Legendre for smooth integrands on finite intervals.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Value of an integral together with an error estimate from the last
/// refinement step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: Complex<T>,
    pub est_abs_error: T,
}

/// Trapezoid rule on `(-inf, inf)` for integrands that decay on both sides.
///
/// The truncation range is found by stepping outward from `center` at the
/// initial spacing `h0` until the integrand stays below `1e-18` times the
/// running sum for four consecutive nodes (or `max_half_width` is reached).
/// The spacing is then halved until two successive estimates agree to
/// `rel_tol` relative (or `abs_tol` absolute, or the rounding floor set by
/// the integral of `|f|`).
pub fn trapezoid_line<T, F>(
    f: F,
    center: T,
    h0: T,
    max_half_width: T,
    rel_tol: T,
    abs_tol: T,
) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let tiny = lit::<T>(1e-18);
    let mut sum = f(center);
    let mut scale = sum.norm();
    let mut mass = sum.norm();
    let mut right = T::zero();
    let mut left = T::zero();
    for dir in [T::one(), -T::one()] {
        let mut quiet = 0;
        let mut k = 1usize;
        loop {
            let t = from_usize::<T>(k) * h0;
            if t > max_half_width {
                break;
            }
            let v = f(center + dir * t);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Quadrature("non-finite integrand on the line".into()));
            }
            sum += v;
            mass += v.norm();
            scale = scale.max(v.norm());
            if v.norm() <= tiny * scale.max(sum.norm()) {
                quiet += 1;
                if quiet >= 4 {
                    break;
                }
            } else {
                quiet = 0;
            }
            k += 1;
        }
        let reach = from_usize::<T>(k) * h0;
        if dir > T::zero() {
            right = reach;
        } else {
            left = reach;
        }
    }
    let mut h = h0;
    let mut estimate = sum * h;
    let mut err = T::infinity();
    for _level in 0..14 {
        // Add the midpoints of the current mesh.
        let mut mids = Complex::new(T::zero(), T::zero());
        let n_right = (right / h).ceil().to_usize().unwrap_or(0);
        let n_left = (left / h).ceil().to_usize().unwrap_or(0);
        for k in 0..n_right {
            let v = f(center + (from_usize::<T>(k) + lit(0.5)) * h);
            mass += v.norm();
            mids += v;
        }
        for k in 0..n_left {
            let v = f(center - (from_usize::<T>(k) + lit(0.5)) * h);
            mass += v.norm();
            mids += v;
        }
        if !(mids.re.is_finite() && mids.im.is_finite()) {
            return Err(Error::Quadrature("non-finite integrand on the line".into()));
        }
        sum += mids;
        h *= lit(0.5);
        let next = sum * h;
        err = (next - estimate).norm();
        estimate = next;
        // Cancellation floor: nothing below a few ulps of the absolute mass is resolvable.
        let floor = lit::<T>(16.0) * T::epsilon() * mass * h;
        if err <= rel_tol * estimate.norm() || err <= abs_tol || err <= floor {
            return Ok(Quadrature { value: estimate, est_abs_error: err.max(floor) });
        }
    }
    Err(Error::Quadrature(format!(
        "trapezoid rule did not converge (last change {:e})",
        err.to_f64().unwrap_or(f64::NAN)
    )))
}

/// Tanh-sinh (double exponential) rule on `[a, b]`.
///
/// The integrand receives the abscissa `x`. Abscissae are formed from the
/// distance to the nearer endpoint so that `x - a` and `b - x` keep full
/// relative precision near the ends.
pub fn tanh_sinh<T, F>(f: F, a: T, b: T, rel_tol: T, abs_tol: T) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let half_pi = T::FRAC_PI_2();
    let width = b - a;
    let t_max = lit::<T>(4.0);
    let node = |t: T| -> (T, T) {
        let s = half_pi * t.sinh();
        let cs = s.cosh();
        let w = width * lit(0.5) * half_pi * t.cosh() / (cs * cs);
        let x = if s < T::zero() {
            a + width / (T::one() + (-(s + s)).exp())
        } else {
            b - width / (T::one() + (s + s).exp())
        };
        (x, w)
    };
    let mut h = T::one();
    let mut sum = {
        let (x, w) = node(T::zero());
        f(x) * w
    };
    let mut k = 1usize;
    loop {
        let t = from_usize::<T>(k) * h;
        if t > t_max {
            break;
        }
        for tt in [t, -t] {
            let (x, w) = node(tt);
            if x > a && x < b && w > T::zero() {
                sum += f(x) * w;
            }
        }
        k += 1;
    }
    let mut estimate = sum * h;
    let mut err = T::infinity();
    for _level in 0..10 {
        h *= lit(0.5);
        let mut k = 1usize;
        loop {
            let t = from_usize::<T>(k) * h;
            if t > t_max {
                break;
            }
            for tt in [t, -t] {
                let (x, w) = node(tt);
                if x > a && x < b && w > T::zero() {
                    sum += f(x) * w;
                }
            }
            k += 2;
        }
        let next = sum * h;
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::Quadrature("non-finite tanh-sinh estimate".into()));
        }
        err = (next - estimate).norm();
        estimate = next;
        if err <= rel_tol * estimate.norm() || err <= abs_tol {
            return Ok(Quadrature { value: estimate, est_abs_error: err });
        }
    }
    Err(Error::Quadrature(format!(
        "tanh-sinh did not converge (last change {:e})",
        err.to_f64().unwrap_or(f64::NAN)
    )))
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = from_usize::<T>(n);
    for k in 0..n.div_ceil(2) {
        let mut x = (T::PI() * (from_usize::<T>(k) + lit(0.75)) / (nf + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (mut p0, mut p1) = (T::one(), x);
            for j in 2..=n {
                let jf = from_usize::<T>(j);
                let p2 = ((jf + jf - T::one()) * x * p1 - (jf - T::one()) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if n == 0 { (T::one(), T::zero()) } else { (p1, p0) };
            dp = nf * (x * p - pm1) / (x * x - T::one());
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= T::epsilon() * lit(4.0) {
                break;
            }
        }
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[k] = x;
        nodes[n - 1 - k] = -x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` points.
pub fn gauss_legendre_composite<T, F>(f: F, a: T, b: T, order: usize, panels: usize) -> Complex<T>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let (x, w) = gauss_legendre::<T>(order);
    let width = (b - a) / from_usize(panels);
    let mut sum = Complex::new(T::zero(), T::zero());
    for p in 0..panels {
        let lo = a + width * from_usize(p);
        let mid = lo + width * lit(0.5);
        for (xi, wi) in x.iter().zip(&w) {
            sum += f(mid + width * lit::<T>(0.5) * *xi) * *wi;
        }
    }
    sum * (width * lit::<T>(0.5))
}
