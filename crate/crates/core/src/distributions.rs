//! Pairings of the power distributions `u^λ_±`, `(u + i0)^λ` and `δ^{(n)}`
//! with test functions.
//!
//! Test functions are the family `P(u) e^{-σu² + bu}` with a polynomial `P`,
//! which is closed under reflection, conjugation and differentiation and has
//! Taylor coefficients available in closed form.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::Analytic;
use crate::quad::tanh_sinh;
use crate::scalar::{from_usize, i, lit, near_integer, real, Real};
use crate::specfun::rgamma;

/// How a test function decays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    /// Real Gaussian width: a Schwartz function on the real line.
    Schwartz,
    /// Complex Gaussian width with `Re σ > 0`.
    GaussianComplexWidth,
    /// `σ = 0`, `Re b < 0`: decays only as `u → +∞`; usable on the half line.
    HalfLine,
    /// No decay; only local data (derivatives at a point) are meaningful.
    Polynomial,
}

/// `φ(u) = (Σ_j p_j u^j) · exp(-σu² + bu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction<T> {
    pub poly: Vec<Complex<T>>,
    pub sigma: Complex<T>,
    pub b: Complex<T>,
}

/// A pairing value and its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingResult<T> {
    pub value: Complex<T>,
    pub est_abs_error: T,
}

/// Which half-line power family a normalised limit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfLine {
    Plus,
    Minus,
}

const TAYLOR_TERMS: usize = 90;

impl<T: Real> TestFunction<T> {
    pub fn new(poly: Vec<Complex<T>>, sigma: Complex<T>, b: Complex<T>) -> Self {
        let poly = if poly.is_empty() { vec![real(T::zero())] } else { poly };
        TestFunction { poly, sigma, b }
    }

    /// `e^{-σu²}`.
    pub fn gaussian(sigma: Complex<T>) -> Self {
        Self::new(vec![real(T::one())], sigma, real(T::zero()))
    }

    /// `u^k e^{-σu²}`.
    pub fn gaussian_moment(k: usize, sigma: Complex<T>) -> Self {
        let mut poly = vec![real(T::zero()); k + 1];
        poly[k] = real(T::one());
        Self::new(poly, sigma, real(T::zero()))
    }

    /// `e^{-σ(u - u0)²}` with complex centre.
    pub fn shifted_gaussian(sigma: Complex<T>, u0: Complex<T>) -> Self {
        // -σ(u-u0)² = -σu² + 2σu0 u - σu0²
        let c = (-sigma * u0 * u0).exp();
        Self::new(vec![c], sigma, sigma * u0 * lit::<T>(2.0))
    }

    /// `e^{-r u}`, decaying on the positive half line.
    pub fn exponential(rate: T) -> Self {
        Self::new(vec![real(T::one())], real(T::zero()), real(-rate))
    }

    /// A plain polynomial.
    pub fn polynomial(poly: Vec<Complex<T>>) -> Self {
        Self::new(poly, real(T::zero()), real(T::zero()))
    }

    pub fn decay_class(&self) -> DecayClass {
        if self.sigma.re > T::zero() {
            if self.sigma.im == T::zero() {
                DecayClass::Schwartz
            } else {
                DecayClass::GaussianComplexWidth
            }
        } else if self.sigma == real(T::zero()) && self.b.re < T::zero() {
            DecayClass::HalfLine
        } else {
            DecayClass::Polynomial
        }
    }

    /// Open interval of angles `θ` for which `φ(e^{iθ}s)` decays in both
    /// directions (`None` unless `Re σ > 0`).
    pub fn rotation_sector(&self) -> Option<(T, T)> {
        if self.sigma.re <= T::zero() {
            return None;
        }
        let alpha = self.sigma.im.atan2(self.sigma.re);
        let q = T::FRAC_PI_4();
        Some((-q - alpha * lit(0.5), q - alpha * lit(0.5)))
    }

    pub fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        let mut p = real(T::zero());
        for c in self.poly.iter().rev() {
            p = p * z + *c;
        }
        p * (-self.sigma * z * z + self.b * z).exp()
    }

    pub fn eval(&self, x: T) -> Complex<T> {
        self.eval_complex(real(x))
    }

    /// Taylor coefficients of `φ(x0 + t)` in `t`, orders `0..=k_max`.
    pub fn taylor(&self, x0: T, k_max: usize) -> Vec<Complex<T>> {
        let x0c = real(x0);
        let beta = self.b - self.sigma * x0c * lit::<T>(2.0);
        let mut e = vec![real(T::zero()); k_max + 1];
        e[0] = (-self.sigma * x0c * x0c + self.b * x0c).exp();
        if k_max >= 1 {
            e[1] = beta * e[0];
        }
        for k in 1..k_max {
            e[k + 1] = (beta * e[k] - self.sigma * e[k - 1] * lit::<T>(2.0)) / from_usize::<T>(k + 1);
        }
        // shifted polynomial coefficients
        let deg = self.poly.len() - 1;
        let mut shifted = vec![real(T::zero()); deg + 1];
        for (j, pj) in self.poly.iter().enumerate() {
            let mut binom = T::one();
            for m in 0..=j {
                if m > 0 {
                    binom = binom * from_usize::<T>(j - m + 1) / from_usize::<T>(m);
                }
                shifted[m] += *pj * binom * x0.powi((j - m) as i32);
            }
        }
        let mut out = vec![real(T::zero()); k_max + 1];
        for (m, pm) in shifted.iter().enumerate() {
            for k in 0..=k_max {
                if m + k > k_max {
                    break;
                }
                out[m + k] += *pm * e[k];
            }
        }
        out
    }

    /// `φ^{(k)}(x)`.
    pub fn derivative(&self, k: usize, x: T) -> Complex<T> {
        let mut fact = T::one();
        for j in 2..=k {
            fact *= from_usize::<T>(j);
        }
        self.taylor(x, k)[k] * fact
    }

    /// `u ↦ φ(-u)`.
    pub fn mirror(&self) -> Self {
        let poly = self
            .poly
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 1 { -*c } else { *c })
            .collect();
        Self::new(poly, self.sigma, -self.b)
    }

    /// `u ↦ conj(φ(u))` on the real line.
    pub fn conj(&self) -> Self {
        Self::new(self.poly.iter().map(|c| c.conj()).collect(), self.sigma.conj(), self.b.conj())
    }

    /// `c · φ`.
    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.poly.iter().map(|p| *p * c).collect(), self.sigma, self.b)
    }

    /// Radius beyond which `|φ| < 1e-22` times its size near the origin
    /// (only for decaying classes).
    pub fn support_radius(&self) -> T {
        let s = self.sigma.re;
        let bmag = self.b.re.abs();
        let deg = from_usize::<T>(self.poly.len());
        let budget = lit::<T>(52.0) + deg * lit(3.0);
        if s > T::zero() {
            (bmag + (bmag * bmag + lit::<T>(4.0) * s * budget).sqrt()) / (lit::<T>(2.0) * s) + T::one()
        } else if bmag > T::zero() {
            budget / bmag * lit(1.5) + T::one()
        } else {
            T::infinity()
        }
    }

    /// Handle for contour integration. Requires `Re σ > 0`.
    pub fn to_analytic(&self) -> Analytic<T> {
        let me = self.clone();
        Analytic::new("test_function", vec![self.sigma], move |z| Ok(me.eval_complex(z)))
    }
}

fn pole_error<T: Real>(lambda: Complex<T>) -> Error {
    Error::Pole { what: "power exponent", location: format!("{lambda}") }
}

/// Analytic continuation of `∫_0^∞ u^λ f(u) du` by `k`-fold Taylor subtraction.
///
/// `eval` gives `f` on `(0, ∞)`, `coeffs` its Taylor coefficients at 0.
/// Subtraction terms with an exactly vanishing coefficient are skipped, which
/// makes the finite part well defined when only those terms sit on a pole.
fn half_line_power<T: Real>(
    lambda: Complex<T>,
    eval: &dyn Fn(T) -> Complex<T>,
    coeffs: &[Complex<T>],
    k: usize,
    decays: bool,
) -> Result<PairingResult<T>> {
    if !decays {
        return Err(Error::Domain("power pairing needs a test function decaying on the half line".into()));
    }
    let one = real(T::one());
    let cut = lit::<T>(0.5);
    let tail_check = coeffs[coeffs.len() - 1].norm() * cut.powi(coeffs.len() as i32 - 1);
    if tail_check > lit(1e-30) {
        return Err(Error::Truncation("Taylor tail of the test function too large at u = 1/2".into()));
    }
    let remainder = |u: T| -> Complex<T> {
        if u < cut {
            let mut s = real(T::zero());
            for j in (k..coeffs.len()).rev() {
                s = s * u + coeffs[j];
            }
            s * u.powi(k as i32)
        } else {
            let mut p = real(T::zero());
            for j in (0..k).rev() {
                p = p * u + coeffs[j];
            }
            eval(u) - p
        }
    };
    let tol = lit::<T>(1e-13);
    let abs_tol = lit::<T>(1e-16);
    let inner = tanh_sinh(|u: T| real(u).powc(lambda) * remainder(u), T::zero(), T::one(), tol, abs_tol)?;
    let mut value = inner.value;
    let mut err = inner.est_abs_error;
    for (j, a) in coeffs.iter().enumerate().take(k) {
        if a.norm() == T::zero() {
            continue;
        }
        let d = lambda + from_usize::<T>(j) + one;
        if d.norm() == T::zero() {
            return Err(pole_error(lambda));
        }
        value += *a / d;
    }
    let outer = tanh_sinh(
        |t: T| {
            let f = eval(T::one() / t);
            if f.norm() == T::zero() {
                real(T::zero())
            } else {
                real(t).powc(-lambda - lit::<T>(2.0)) * f
            }
        },
        T::zero(),
        T::one(),
        tol,
        abs_tol,
    )?;
    value += outer.value;
    err += outer.est_abs_error;
    Ok(PairingResult { value, est_abs_error: err.max(lit::<T>(10.0) * T::epsilon() * value.norm()) })
}

fn min_subtraction<T: Real>(lambda: Complex<T>) -> usize {
    let k = (-lambda.re).ceil();
    if k <= T::zero() { 0 } else { k.to_usize().unwrap_or(0) }
}

fn is_negative_integer<T: Real>(lambda: Complex<T>) -> Option<usize> {
    match near_integer(lambda, T::zero()) {
        Some(k) if k < 0 => Some((-k) as usize),
        _ => None,
    }
}

/// `⟨u^λ_+, φ⟩` with the minimal subtraction order `max(0, ⌈-Re λ⌉)`.
pub fn pair_u_plus<T: Real>(lambda: Complex<T>, phi: &TestFunction<T>) -> Result<PairingResult<T>> {
    pair_u_plus_with_order(lambda, phi, min_subtraction(lambda))
}

/// `⟨u^λ_+, φ⟩` subtracting `k` Taylor terms (`k` at least the minimal order).
pub fn pair_u_plus_with_order<T: Real>(lambda: Complex<T>, phi: &TestFunction<T>, k: usize) -> Result<PairingResult<T>> {
    if is_negative_integer(lambda).is_some() {
        return Err(pole_error(lambda));
    }
    if k < min_subtraction(lambda) {
        return Err(Error::Domain(format!("subtraction order {k} too small for λ = {lambda}")));
    }
    let coeffs = phi.taylor(T::zero(), TAYLOR_TERMS);
    let decays = !matches!(phi.decay_class(), DecayClass::Polynomial);
    half_line_power(lambda, &|u| phi.eval(u), &coeffs, k, decays)
}

/// `⟨u^λ_-, φ⟩ = ⟨u^λ_+, φ(-·)⟩`.
pub fn pair_u_minus<T: Real>(lambda: Complex<T>, phi: &TestFunction<T>) -> Result<PairingResult<T>> {
    pair_u_plus(lambda, &phi.mirror())
}

/// `⟨(u + i0)^λ, φ⟩`, entire in `λ`.
///
/// Off the negative integers this is `⟨u^λ_+, φ⟩ + e^{iπλ}⟨u^λ_-, φ⟩`. At
/// `λ = -n` the limit `x^{-n} - iπ(-1)^{n-1}/(n-1)! δ^{(n-1)}` is used, with
/// `x^{-n}` realised as the finite part of `∫_0^∞ u^{-n}[φ(u) + (-1)^n φ(-u)] du`.
pub fn pair_u_i0<T: Real>(lambda: Complex<T>, phi: &TestFunction<T>) -> Result<PairingResult<T>> {
    if let Some(n) = is_negative_integer(lambda) {
        if matches!(phi.decay_class(), DecayClass::Polynomial | DecayClass::HalfLine) {
            return Err(Error::Domain("(u+i0)^λ pairing needs decay on both sides".into()));
        }
        let a = phi.taylor(T::zero(), TAYLOR_TERMS);
        let sign = if n % 2 == 0 { T::one() } else { -T::one() };
        let coeffs: Vec<Complex<T>> = a
            .iter()
            .enumerate()
            .map(|(j, c)| if (n + j) % 2 == 0 { *c * lit::<T>(2.0) } else { real(T::zero()) })
            .collect();
        let mirror = phi.mirror();
        let eval = |u: T| phi.eval(u) + mirror.eval(u) * sign;
        let fp = half_line_power(lambda, &eval, &coeffs, n, true)?;
        let delta = -i::<T>() * T::PI() * a[n - 1];
        return Ok(PairingResult { value: fp.value + delta, est_abs_error: fp.est_abs_error });
    }
    let p = pair_u_plus(lambda, phi)?;
    let m = pair_u_minus(lambda, phi)?;
    let phase = (i::<T>() * T::PI() * lambda).exp();
    Ok(PairingResult {
        value: p.value + phase * m.value,
        est_abs_error: p.est_abs_error + phase.norm() * m.est_abs_error,
    })
}

/// `⟨δ^{(n)}, φ⟩ = (-1)^n φ^{(n)}(0)`.
pub fn pair_delta_derivative<T: Real>(n: usize, phi: &TestFunction<T>) -> Complex<T> {
    let d = phi.derivative(n, T::zero());
    if n.is_multiple_of(2) { d } else { -d }
}

/// Numerical limit `λ → n` of `⟨ξ_±^{-λ-1} / Γ(-λ), φ⟩`, evaluated at
/// `λ = n ± h` (`h = 1e-5`, `h/2`) and Richardson-extrapolated.
pub fn normalized_power_limit<T: Real>(n: usize, phi: &TestFunction<T>, family: HalfLine) -> Result<PairingResult<T>> {
    let nn = from_usize::<T>(n);
    let one = real(T::one());
    let f = |lam: T| -> Result<Complex<T>> {
        let l = real(lam);
        let p = match family {
            HalfLine::Plus => pair_u_plus(-l - one, phi)?,
            HalfLine::Minus => pair_u_minus(-l - one, phi)?,
        };
        Ok(p.value * rgamma(-l))
    };
    let sym = |h: T| -> Result<Complex<T>> { Ok((f(nn + h)? + f(nn - h)?) * lit::<T>(0.5)) };
    let h = lit::<T>(1e-5);
    let v1 = sym(h)?;
    let v2 = sym(h * lit(0.5))?;
    let value = (v2 * lit::<T>(4.0) - v1) / lit::<T>(3.0);
    let change = (v2 - v1).norm();
    if change > lit::<T>(1e-4) * value.norm().max(T::one()) {
        return Err(Error::Extrapolation(format!("normalised power limit changed by {change} between steps")));
    }
    Ok(PairingResult { value, est_abs_error: change.max(lit::<T>(1e-12)) })
}

/// Independent oracle for `⟨(u + i0)^λ, φ⟩`: brute-force quadrature of
/// `∫ (u + iε)^λ φ(u) du` at `ε ∈ {1e-2, 1e-3, 1e-4, 1e-5}` followed by
/// polynomial extrapolation to `ε = 0`.
pub fn pair_u_i0_regularized<T: Real>(lambda: Complex<T>, phi: &TestFunction<T>) -> Result<PairingResult<T>> {
    if matches!(phi.decay_class(), DecayClass::Polynomial | DecayClass::HalfLine) {
        return Err(Error::Domain("(u+i0)^λ pairing needs decay on both sides".into()));
    }
    let big = phi.support_radius();
    let eps: Vec<T> = [1e-2, 1e-3, 1e-4, 1e-5].iter().map(|e| lit::<T>(*e)).collect();
    let mut vals = Vec::with_capacity(eps.len());
    for &e in &eps {
        let ie = Complex::new(T::zero(), e);
        let g = |u: T| (ie + u).powc(lambda) * phi.eval(u);
        let right = tanh_sinh(g, T::zero(), big, lit(1e-13), lit(1e-16))?;
        let left = tanh_sinh(g, -big, T::zero(), lit(1e-13), lit(1e-16))?;
        vals.push(right.value + left.value);
    }
    let extrapolate = |k: usize| -> Complex<T> {
        // Lagrange interpolation through the first k points, evaluated at 0.
        let mut acc = real(T::zero());
        for a in 0..k {
            let mut w = T::one();
            for b in 0..k {
                if a != b {
                    w = w * eps[b] / (eps[b] - eps[a]);
                }
            }
            acc += vals[a] * w;
        }
        acc
    };
    let full = extrapolate(eps.len());
    let partial = extrapolate(eps.len() - 1);
    Ok(PairingResult { value: full, est_abs_error: (full - partial).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn gauss() -> TestFunction<f64> {
        TestFunction::gaussian(c(1.0, 0.0))
    }

    #[test]
    fn gamma_moments() {
        let e = TestFunction::exponential(1.0);
        let v = pair_u_plus(c(1.0, 0.0), &e).unwrap();
        assert!((v.value - c(1.0, 0.0)).norm() < 1e-12);
        let v = pair_u_plus(c(0.5, 0.0), &e).unwrap();
        assert!((v.value.re - 0.886_226_925_452_758).abs() < 1e-12);
    }

    #[test]
    fn continued_gaussian_moment() {
        // ∫_0^∞ u^λ e^{-u²} du = Γ((λ+1)/2)/2, continued to λ = -1.5
        let v = pair_u_plus(c(-1.5, 0.0), &gauss()).unwrap();
        let exact = crate::specfun::gamma(c(-0.25, 0.0)).unwrap() * 0.5;
        assert!((v.value - exact).norm() < 1e-11, "{} vs {}", v.value, exact);
        let v = pair_u_plus(c(-2.7, 0.4), &gauss()).unwrap();
        let exact = crate::specfun::gamma(c(-0.85, 0.2)).unwrap() * 0.5;
        assert!((v.value - exact).norm() < 1e-11);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(pair_u_plus(c(-2.0, 0.0), &gauss()), Err(Error::Pole { .. })));
    }

    #[test]
    fn minus_family() {
        let v = pair_u_minus(c(0.0, 0.0), &gauss()).unwrap();
        assert!((v.value.re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
        let a = pair_u_minus(c(0.5, 0.0), &gauss()).unwrap();
        let b = pair_u_plus(c(0.5, 0.0), &gauss()).unwrap();
        assert!((a.value - b.value).norm() < 1e-14);
    }

    #[test]
    fn i0_examples() {
        let v = pair_u_i0(c(-1.0, 0.0), &gauss()).unwrap();
        assert!((v.value - c(0.0, -std::f64::consts::PI)).norm() < 1e-10);
        let v = pair_u_i0(c(2.0, 0.0), &gauss()).unwrap();
        assert!((v.value.re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
        // λ = -2 against the ε-regularised oracle
        let v = pair_u_i0(c(-2.0, 0.0), &gauss()).unwrap();
        let o = pair_u_i0_regularized(c(-2.0, 0.0), &gauss()).unwrap();
        assert!((v.value - o.value).norm() < 1e-7, "{} vs {}", v.value, o.value);
        // FP ∫ x^{-2} e^{-x²} = -2√π
        assert!((v.value - c(-2.0 * std::f64::consts::PI.sqrt(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn i0_is_continuous_at_negative_integers() {
        let phi = TestFunction::new(vec![c(1.0, 0.0), c(0.3, 0.1)], c(0.8, 0.0), c(0.2, 0.0));
        for n in 1..=3 {
            let at = pair_u_i0(c(-(n as f64), 0.0), &phi).unwrap().value;
            let near = pair_u_i0(c(-(n as f64) + 1e-6, 0.0), &phi).unwrap().value;
            assert!((at - near).norm() < 1e-4, "n = {n}: {at} vs {near}");
        }
    }

    #[test]
    fn delta_pairings() {
        assert_eq!(pair_delta_derivative(0, &gauss()), c(1.0, 0.0));
        let u = TestFunction::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((pair_delta_derivative(1, &u) - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((pair_delta_derivative(2, &gauss()) - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn normalised_limits() {
        let v = normalized_power_limit(0, &gauss(), HalfLine::Plus).unwrap();
        assert!((v.value - c(1.0, 0.0)).norm() < 1e-6);
        let v = normalized_power_limit(1, &gauss(), HalfLine::Plus).unwrap();
        assert!(v.value.norm() < 1e-6);
        let ug = TestFunction::gaussian_moment(1, c(1.0, 0.0));
        let v = normalized_power_limit(1, &ug, HalfLine::Plus).unwrap();
        assert!((v.value - c(-1.0, 0.0)).norm() < 1e-6, "{}", v.value);
        let v = normalized_power_limit(1, &ug, HalfLine::Minus).unwrap();
        assert!((v.value - c(1.0, 0.0)).norm() < 1e-6, "{}", v.value);
    }

    #[test]
    fn taylor_matches_derivatives() {
        let phi = TestFunction::new(vec![c(0.5, 0.0), c(0.0, 1.0), c(0.2, 0.0)], c(0.7, 0.3), c(0.1, -0.2));
        let x0 = 0.4;
        let t = phi.taylor(x0, 6);
        let h = 1e-3;
        let d1 = (phi.eval(x0 + h) - phi.eval(x0 - h)) / (2.0 * h);
        assert!((t[1] - d1).norm() < 1e-6);
        assert!((t[0] - phi.eval(x0)).norm() < 1e-15);
        let shifted = phi.mirror();
        assert!((shifted.eval(0.3) - phi.eval(-0.3)).norm() < 1e-15);
    }
}
