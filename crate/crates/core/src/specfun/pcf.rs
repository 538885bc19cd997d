//! Parabolic cylinder functions `D_ν(z)` for complex order and argument.
//!
//! Several independent evaluation paths are provided:
//!
//! * `series`: the even/odd confluent hypergeometric decomposition.
//! * `asymptotic`: the large-`|z|` Poincaré expansion, including the
//!   exponentially growing companion term beyond `|arg z| = π/4`.
//! * `ode_continuation`: high-order Taylor stepping of the defining ODE
//!   `w'' = (z²/4 - ν - ½) w` along a ray, either outward from exact values
//!   at the origin or inward from the asymptotic radius, whichever direction
//!   does not amplify the companion solution. Arguments with `|arg z| > π/2`
//!   are reduced to the right half-plane by the connection formula.
//! * `integral_plus` and `integral_fourier`: direct quadrature of the two
//!   classical integral representations, used as oracles.
//! * `hermite_reduction`: the closed form at non-negative integer order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::gamma::rgamma;
use super::hermite::hermite;
use crate::error::{Error, Result};
use crate::quad::trapezoid_line;
use crate::scalar::{cis, from_usize, i, is_finite, lit, real, Real};

/// Evaluation path used to produce a value of `D_ν(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    IntegralPlus,
    IntegralFourier,
    Asymptotic,
    HermiteReduction,
    OdeContinuation,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Series,
        Method::IntegralPlus,
        Method::IntegralFourier,
        Method::Asymptotic,
        Method::HermiteReduction,
        Method::OdeContinuation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::IntegralPlus => "integral_plus",
            Method::IntegralFourier => "integral_fourier",
            Method::Asymptotic => "asymptotic",
            Method::HermiteReduction => "hermite_reduction",
            Method::OdeContinuation => "ode_continuation",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown pcf method '{s}'")))
    }
}

/// A value of `D_ν(z)` with its error estimate and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationResult<T> {
    pub value: Complex<T>,
    pub est_abs_error: T,
    pub method: Method,
}

/// Radius beyond which the asymptotic expansion is used: `8 + 2|ν|`.
pub fn asymptotic_radius<T: Real>(nu: Complex<T>) -> T {
    lit::<T>(8.0) + lit::<T>(2.0) * nu.norm()
}

fn check_finite<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<()> {
    if is_finite(nu) && is_finite(z) {
        Ok(())
    } else {
        Err(Error::Domain("pcf: non-finite order or argument".into()))
    }
}

fn exact_nonnegative_integer<T: Real>(nu: Complex<T>) -> Option<usize> {
    if nu.im == T::zero() && nu.re >= T::zero() && nu.re == nu.re.round() {
        nu.re.to_usize()
    } else {
        None
    }
}

/// `D_ν(0)` and `D'_ν(0)`.
pub fn origin_values<T: Real>(nu: Complex<T>) -> (Complex<T>, Complex<T>) {
    let two = lit::<T>(2.0);
    let sqrt_pi = T::PI().sqrt();
    let half = lit::<T>(0.5);
    let one = real(T::one());
    let p0 = real(two).powc(nu * half);
    let p1 = real(two).powc((nu + one) * half);
    let d0 = p0 * sqrt_pi * rgamma((one - nu) * half);
    let d1 = -p1 * sqrt_pi * rgamma(-nu * half);
    (d0, d1)
}

/// Closed form at non-negative integer order:
/// `D_n(z) = 2^{-n/2} e^{-z²/4} H_n(z/√2)`.
pub fn hermite_reduction<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<EvaluationResult<T>> {
    check_finite(nu, z)?;
    let n = exact_nonnegative_integer(nu).ok_or_else(|| Error::Region {
        method: "hermite_reduction",
        reason: format!("order {nu} is not a non-negative integer"),
    })?;
    let two = lit::<T>(2.0);
    let value = (-(z * z) * lit::<T>(0.25)).exp() * hermite(n, z / two.sqrt()) * two.powf(-from_usize::<T>(n) * lit(0.5));
    Ok(EvaluationResult {
        value,
        est_abs_error: lit::<T>(10.0) * T::epsilon() * value.norm(),
        method: Method::HermiteReduction,
    })
}

/// Kummer series `M(a, b, x)` returning the sum and the sum of term moduli.
fn kummer<T: Real>(a: Complex<T>, b: T, x: Complex<T>) -> Result<(Complex<T>, T)> {
    let mut term = real(T::one());
    let mut sum = term;
    let mut abs_sum = T::one();
    let tiny = lit::<T>(1e-16);
    for k in 0..500usize {
        let kf = from_usize::<T>(k);
        term = term * (a + kf) * x / ((b + kf) * (kf + T::one()));
        sum += term;
        abs_sum += term.norm();
        if term.norm() <= tiny * sum.norm().max(tiny) && kf > a.norm() {
            return Ok((sum, abs_sum));
        }
        if term.norm() == T::zero() {
            return Ok((sum, abs_sum));
        }
    }
    Err(Error::Accuracy { tolerance: 1e-16, achieved: (term.norm() / sum.norm()).to_f64().unwrap_or(f64::NAN) })
}

/// Confluent hypergeometric series. Returns the value and an estimate of the
/// absolute error derived from the cancellation between terms.
pub fn series<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<EvaluationResult<T>> {
    check_finite(nu, z)?;
    if z.norm() > lit(10.0) {
        return Err(Error::Region { method: "series", reason: format!("|z| = {} exceeds 10", z.norm()) });
    }
    let half = lit::<T>(0.5);
    let one = real(T::one());
    let two = lit::<T>(2.0);
    let x = z * z * half;
    let (m1, s1) = kummer(-nu * half, half, x)?;
    let (m2, s2) = kummer((one - nu) * half, lit(1.5), x)?;
    let pref = real(two).powc(nu * half) * (-(z * z) * lit::<T>(0.25)).exp();
    let c1 = rgamma((one - nu) * half) * T::PI().sqrt();
    let c2 = z * rgamma(-nu * half) * (T::TAU()).sqrt();
    let value = pref * (c1 * m1 - c2 * m2);
    let mag = pref.norm() * (c1.norm() * s1 + c2.norm() * s2);
    let est = lit::<T>(10.0) * T::epsilon() * mag.max(value.norm());
    Ok(EvaluationResult { value, est_abs_error: est, method: Method::Series })
}

/// Sum of the Poincaré series `Σ c_s` where `c_{s+1}/c_s = ratio(s)`, stopped at
/// convergence or at the smallest term. Returns the sum and the last term.
fn divergent_sum<T: Real>(ratio: impl Fn(T) -> Complex<T>) -> (Complex<T>, T) {
    let mut term = real(T::one());
    let mut sum = term;
    let mut last = T::one();
    for s in 0..2000usize {
        let next = term * ratio(from_usize(s));
        if next.norm() >= last && s > 0 {
            break;
        }
        term = next;
        last = term.norm();
        sum += term;
        if last <= T::epsilon() * lit::<T>(0.01) * sum.norm() {
            break;
        }
    }
    (sum, last)
}

fn asymptotic_raw<T: Real>(nu: Complex<T>, z: Complex<T>) -> (Complex<T>, T) {
    let two = lit::<T>(2.0);
    let one = real(T::one());
    let zz2 = z * z * two;
    let quarter = lit::<T>(0.25);
    let (s1, e1) = divergent_sum(|s: T| {
        let a = -nu + s * two;
        -(a * (a + one)) / (zz2 * (s + T::one()))
    });
    let lead = (-(z * z) * quarter + nu * z.ln()).exp();
    let mut value = lead * s1;
    let mut err = lead.norm() * e1;
    // The e^{z²/4} contribution is switched on at the Stokes lines arg z = ±π/2,
    // where it is maximally subdominant. Switching it on at ±π/4, where the
    // two exponentials have equal size, is off by O(1) at moderate |z|.
    let theta = z.im.atan2(z.re);
    if theta.abs() > T::FRAC_PI_2() {
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        let (s2, e2) = divergent_sum(|s: T| {
            let a = nu + one + s * two;
            (a * (a + one)) / (zz2 * (s + T::one()))
        });
        let second = -(i::<T>() * T::PI() * nu * sign + (z * z) * quarter - (nu + one) * z.ln()).exp()
            * rgamma(-nu)
            * T::TAU().sqrt();
        value += second * s2;
        err += second.norm() * e2;
    }
    (value, err)
}

/// Large-`|z|` expansion, valid for `|z| >= 8 + 2|ν|`.
pub fn asymptotic<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<EvaluationResult<T>> {
    check_finite(nu, z)?;
    let r = asymptotic_radius(nu);
    if z.norm() < r {
        return Err(Error::Region {
            method: "asymptotic",
            reason: format!("|z| = {} below switch radius {}", z.norm(), r),
        });
    }
    let (value, err) = asymptotic_raw(nu, z);
    Ok(EvaluationResult {
        value,
        est_abs_error: err.max(lit::<T>(10.0) * T::epsilon() * value.norm()),
        method: Method::Asymptotic,
    })
}

/// One Taylor step of `w'' = (z²/4 - a) w` from `z0` by `h`.
fn taylor_step<T: Real>(a: Complex<T>, z0: Complex<T>, w: Complex<T>, dw: Complex<T>, h: Complex<T>) -> (Complex<T>, Complex<T>) {
    let quarter = lit::<T>(0.25);
    let q = z0 * z0 * quarter - a;
    let half_z0 = z0 * lit::<T>(0.5);
    let mut c = [real(T::zero()); 3]; // c_{k-2}, c_{k-1}, c_k
    let mut ck1 = dw; // c_{k+1}
    c[2] = w;
    let mut hk = real(T::one()); // h^k
    let mut val = w;
    let mut der = dw;
    let scale = w.norm() + (dw * h).norm();
    let tol = T::epsilon() * lit::<T>(0.05);
    let mut quiet = 0;
    for k in 0..120usize {
        let kf = from_usize::<T>(k);
        // c_{k+2} from c_k, c_{k-1}, c_{k-2}
        let ck2 = (q * c[2] + half_z0 * c[1] + c[0] * quarter) / ((kf + lit(2.0)) * (kf + T::one()));
        hk *= h;
        // add c_{k+1} h^{k+1} to the value and (k+1) c_{k+1} h^k to the derivative
        if k > 0 {
            let t = ck1 * hk;
            val += t;
            der += t * (kf + T::one()) / h;
            if t.norm() <= tol * scale {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        } else {
            val += ck1 * hk;
        }
        c = [c[1], c[2], ck1];
        ck1 = ck2;
    }
    (val, der)
}

fn step_length<T: Real>(a: Complex<T>, z0: Complex<T>) -> T {
    let q = (z0 * z0 * lit::<T>(0.25) - a).norm();
    let bound = T::one() / (q.sqrt() + (z0.norm() * lit(0.5)).sqrt() + lit(0.5));
    bound.min(lit(0.5))
}

/// Scaled ODE state: the true solution is `(w, dw) * exp(log_scale)`.
#[derive(Clone, Copy)]
struct State<T> {
    w: Complex<T>,
    dw: Complex<T>,
    log_scale: T,
}

impl<T: Real> State<T> {
    fn value(&self) -> Complex<T> {
        self.w * self.log_scale.exp()
    }
}

fn integrate<T: Real>(a: Complex<T>, from: Complex<T>, to: Complex<T>, mut st: State<T>) -> State<T> {
    let span = to - from;
    let len = span.norm();
    if len == T::zero() {
        return st;
    }
    let h_start = step_length(a, from).min(step_length(a, to));
    let n = (len / h_start).ceil().to_usize().unwrap_or(1).max(1);
    let h = span / from_usize::<T>(n);
    let mut z = from;
    for k in 0..n {
        let (w, dw) = taylor_step(a, z, st.w, st.dw, h);
        let s = w.norm() + dw.norm();
        if s > T::zero() && s.is_finite() {
            st = State { w: w / s, dw: dw / s, log_scale: st.log_scale + s.ln() };
        } else {
            st = State { w, dw, log_scale: st.log_scale };
        }
        z = from + h * from_usize::<T>(k + 1);
    }
    st
}

fn ode_value_on_ray_inward<T: Real>(nu: Complex<T>, dir: Complex<T>, radii: &[T]) -> Vec<Complex<T>> {
    // D_ν is recessive for |arg z| < π/4: integrate from large |z| towards 0.
    let a = nu + lit::<T>(0.5);
    let r_switch = asymptotic_radius(nu);
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&p, &q| radii[q].partial_cmp(&radii[p]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![real(T::zero()); radii.len()];
    let start = dir * r_switch;
    let (d, _) = asymptotic_raw(nu, start);
    let (d1, _) = asymptotic_raw(nu + T::one(), start);
    let dd = start * lit::<T>(0.5) * d - d1;
    let s = d.norm() + dd.norm();
    let mut st = State { w: d / s, dw: dd / s, log_scale: s.ln() };
    let mut z = start;
    for idx in order {
        let r = radii[idx];
        if r >= r_switch {
            out[idx] = asymptotic_raw(nu, dir * r).0;
            continue;
        }
        let target = dir * r;
        st = integrate(a, z, target, st);
        z = target;
        out[idx] = st.value();
    }
    out
}

fn ode_value_on_ray_outward<T: Real>(nu: Complex<T>, dir: Complex<T>, radii: &[T]) -> Vec<Complex<T>> {
    let a = nu + lit::<T>(0.5);
    let r_switch = asymptotic_radius(nu);
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&p, &q| radii[p].partial_cmp(&radii[q]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![real(T::zero()); radii.len()];
    let (d0, d1) = origin_values(nu);
    let s = d0.norm() + d1.norm();
    let mut st = State { w: d0 / s, dw: d1 / s, log_scale: s.ln() };
    let mut z = real(T::zero());
    for idx in order {
        let r = radii[idx];
        if r >= r_switch {
            out[idx] = asymptotic_raw(nu, dir * r).0;
            continue;
        }
        let target = dir * r;
        st = integrate(a, z, target, st);
        z = target;
        out[idx] = st.value();
    }
    out
}

/// Splits the radii of a ray with `|arg| <= π/2` between an outward sweep
/// from the origin and an inward sweep from the asymptotic radius.
///
/// Along the ray `log|D_ν / D_companion| ≈ Re(2ν+1) log r - r² cos(2θ)/2`;
/// errors in the companion component are amplified by the drop of this
/// quantity along the path, so each radius goes to the sweep with the
/// smaller amplification.
fn sweep_by_stability<T: Real>(nu: Complex<T>, dir: Complex<T>, radii: &[T]) -> Vec<Complex<T>> {
    let theta = dir.im.atan2(dir.re);
    let alpha = nu.re * lit(2.0) + T::one();
    let beta = (theta * lit(2.0)).cos() * lit(0.5);
    let phi = |r: T| alpha * r.max(lit(1e-3)).ln() - beta * r * r;
    let r_switch = asymptotic_radius(nu);
    let samples = 48usize;
    let worst_drop = |lo: T, hi: T, reference: T| {
        let mut worst = T::neg_infinity();
        for k in 0..=samples {
            let s = lo + (hi - lo) * from_usize::<T>(k) / from_usize::<T>(samples);
            worst = worst.max(reference - phi(s));
        }
        worst
    };
    let mut outward = Vec::new();
    let mut inward = Vec::new();
    for (idx, &r) in radii.iter().enumerate() {
        if r >= r_switch {
            inward.push(idx);
            continue;
        }
        let r0 = r.min(T::one());
        let a_out = worst_drop(r0, r, phi(r0));
        let a_in = worst_drop(r, r_switch, phi(r_switch));
        if a_out <= a_in {
            outward.push(idx);
        } else {
            inward.push(idx);
        }
    }
    let mut out = vec![real(T::zero()); radii.len()];
    for (set, outward_sweep) in [(outward, true), (inward, false)] {
        if set.is_empty() {
            continue;
        }
        let rs: Vec<T> = set.iter().map(|&k| radii[k]).collect();
        let vals = if outward_sweep {
            ode_value_on_ray_outward(nu, dir, &rs)
        } else {
            ode_value_on_ray_inward(nu, dir, &rs)
        };
        for (k, v) in set.into_iter().zip(vals) {
            out[k] = v;
        }
    }
    out
}

/// `D_ν(r·dir)` for every `r` in `radii` (all `r >= 0`, `|dir| = 1`), sharing
/// one ODE sweep along the ray.
pub fn pcf_ray<T: Real>(nu: Complex<T>, dir: Complex<T>, radii: &[T]) -> Result<Vec<Complex<T>>> {
    check_finite(nu, dir)?;
    if radii.iter().any(|r| !(r.is_finite() && *r >= T::zero())) {
        return Err(Error::Domain("pcf_ray: radii must be finite and non-negative".into()));
    }
    let dir = dir / dir.norm();
    let theta = dir.im.atan2(dir.re);
    let out = if theta.abs() <= T::FRAC_PI_2() {
        sweep_by_stability(nu, dir, radii)
    } else {
        // D_ν(z) = e^{±iπν} D_ν(-z) + √(2π)/Γ(-ν) e^{±iπ(ν+1)/2} D_{-ν-1}(∓iz)
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        let one = real(T::one());
        let first = sweep_by_stability(nu, -dir, radii);
        let mu = -nu - one;
        let second_dir = -i::<T>() * dir * sign;
        let rg = rgamma(-nu);
        let second = if rg.norm() == T::zero() {
            vec![real(T::zero()); radii.len()]
        } else {
            sweep_by_stability(mu, second_dir, radii)
        };
        let ipi = i::<T>() * T::PI() * sign;
        let c1 = (ipi * nu).exp();
        let c2 = rg * T::TAU().sqrt() * (ipi * (nu + one) * lit::<T>(0.5)).exp();
        // Direct sweeps are used where the connection formula cancels badly
        // (large |Im ν| makes e^{±iπν} huge).
        let mut direct: Option<(Vec<Complex<T>>, Vec<Complex<T>>)> = None;
        let mut out = Vec::with_capacity(radii.len());
        for (k, (f, s)) in first.into_iter().zip(second).enumerate() {
            let (t1, t2) = (c1 * f, c2 * s);
            let conn = t1 + t2;
            let kappa = (t1.norm() + t2.norm()) / conn.norm();
            if kappa <= lit(100.0) {
                out.push(conn);
                continue;
            }
            let (outward, inward) = direct.get_or_insert_with(|| {
                (ode_value_on_ray_outward(nu, dir, radii), ode_value_on_ray_inward(nu, dir, radii))
            });
            let (o, n) = (outward[k], inward[k]);
            let spread = (o - n).norm();
            let conn_err = kappa * T::epsilon() * conn.norm();
            out.push(if spread <= conn_err || !is_finite(o) { conn } else { o });
        }
        out
    };
    if out.iter().all(|v| is_finite(*v)) {
        Ok(out)
    } else {
        Err(Error::Accuracy { tolerance: 0.0, achieved: f64::INFINITY })
    }
}

/// `D_ν` at arbitrary points. Points that lie on one line through the
/// origin share two ray sweeps; anything else is evaluated pointwise.
pub fn pcf_points<T: Real>(nu: Complex<T>, points: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let dir = match points.iter().find(|p| p.norm() > T::zero()) {
        Some(p) => *p / p.norm(),
        None => return points.iter().map(|p| pcf_value(nu, *p)).collect(),
    };
    let tol = lit::<T>(1e-12);
    let collinear = points.iter().all(|p| (*p * dir.conj()).im.abs() <= tol * p.norm().max(T::one()));
    if !collinear || points.len() < 4 {
        return points.iter().map(|p| pcf_value(nu, *p)).collect();
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let s = (*p * dir.conj()).re;
        if s >= T::zero() {
            pos.push((k, s));
        } else {
            neg.push((k, -s));
        }
    }
    let mut out = vec![real(T::zero()); points.len()];
    for (set, d) in [(pos, dir), (neg, -dir)] {
        if set.is_empty() {
            continue;
        }
        let radii: Vec<T> = set.iter().map(|(_, r)| *r).collect();
        let vals = pcf_ray(nu, d, &radii)?;
        for ((k, _), v) in set.into_iter().zip(vals) {
            out[k] = v;
        }
    }
    Ok(out)
}

/// ODE continuation at a single point.
pub fn ode_continuation<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<EvaluationResult<T>> {
    check_finite(nu, z)?;
    let value = if z.norm() == T::zero() {
        origin_values(nu).0
    } else {
        pcf_ray(nu, z / z.norm(), &[z.norm()])?[0]
    };
    // Accumulated rounding along the path grows roughly with the number of steps.
    let steps = (z.norm() + asymptotic_radius(nu)) / step_length(nu + lit::<T>(0.5), z);
    Ok(EvaluationResult {
        value,
        est_abs_error: lit::<T>(10.0) * T::epsilon() * value.norm() * steps.sqrt().max(T::one()),
        method: Method::OdeContinuation,
    })
}

fn shift_down_count<T: Real>(nu: Complex<T>) -> usize {
    // smallest m with Re(ν) - m <= -1/2
    let m = (nu.re + lit(0.5)).ceil();
    if m <= T::zero() { 0 } else { m.to_usize().unwrap_or(0) }
}

/// Upward recurrence `D_{μ+1} = z D_μ - μ D_{μ-1}` from `(D_{μ0-1}, D_{μ0})` to `D_{μ0+m}`.
fn recur_up<T: Real>(mu0: Complex<T>, z: Complex<T>, lower: Complex<T>, upper: Complex<T>, m: usize) -> Complex<T> {
    let (mut dm1, mut d) = (lower, upper);
    let mut mu = mu0;
    for _ in 0..m {
        let next = z * d - mu * dm1;
        dm1 = d;
        d = next;
        mu += T::one();
    }
    d
}

fn integral_plus_direct<T: Real>(p: Complex<T>, y: Complex<T>) -> Result<(Complex<T>, T)> {
    // D_p(y) = e^{-y²/4}/Γ(-p) ∫_0^∞ ξ^{-p-1} e^{-yξ - ξ²/2} dξ with ξ = e^s
    let half = lit::<T>(0.5);
    let f = |s: T| -> Complex<T> {
        let es = s.exp();
        (-p * s - y * es - real(es * es * half)).exp()
    };
    let center = (y.norm().max(T::one())).ln() * lit(0.5);
    let q = trapezoid_line(f, center, lit(0.25), lit(400.0), lit(1e-14), T::zero())?;
    let pref = (-(y * y) * lit::<T>(0.25)).exp() * rgamma(-p);
    Ok((pref * q.value, pref.norm() * q.est_abs_error))
}

/// Quadrature of `D_p(y) = e^{-y²/4}/Γ(-p) ∫_0^∞ ξ^{-p-1} e^{-yξ-ξ²/2} dξ`.
///
/// The integral converges only for `Re p < 0`; other orders are reached by
/// upward recurrence from two orders with `Re p <= -1/2`.
pub fn integral_plus<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<EvaluationResult<T>> {
    check_finite(nu, z)?;
    if z.norm() > lit(8.0) {
        return Err(Error::Region { method: "integral_plus", reason: format!("|z| = {} exceeds 8", z.norm()) });
    }
    let m = shift_down_count(nu);
    let value;
    let mut err;
    if m == 0 {
        let (v, e) = integral_plus_direct(nu, z)?;
        value = v;
        err = e;
    } else {
        let mu = nu - from_usize::<T>(m);
        let (lo, e1) = integral_plus_direct(mu - T::one(), z)?;
        let (hi, e2) = integral_plus_direct(mu, z)?;
        value = recur_up(mu, z, lo, hi, m);
        err = (e1 + e2) * lit::<T>(4.0).powi(m as i32);
    }
    err = err.max(lit::<T>(10.0) * T::epsilon() * value.norm());
    Ok(EvaluationResult { value, est_abs_error: err, method: Method::IntegralPlus })
}

/// Quadrature of the Fourier-type representation
/// `D_λ(y) = 2^{λ+½} (-i)^λ e^{y²/4} / √π ∫ (ξ+i0)^λ e^{-2ξ² + 2iyξ} dξ`
/// on the contour `Im ξ = c > 0`.
pub fn integral_fourier<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<EvaluationResult<T>> {
    check_finite(nu, z)?;
    if z.norm() > lit(6.0) {
        return Err(Error::Region { method: "integral_fourier", reason: format!("|z| = {} exceeds 6", z.norm()) });
    }
    let two = lit::<T>(2.0);
    let c = (z.re * lit(0.5)).max(lit(0.5));
    let ic = Complex::new(T::zero(), c);
    let iy2 = i::<T>() * z * two;
    let f = |s: T| -> Complex<T> {
        let xi = ic + s;
        (nu * xi.ln() - xi * xi * two + iy2 * xi).exp()
    };
    let q = trapezoid_line(f, -z.im * lit(0.5), lit(0.25), lit(60.0), lit(1e-14), T::zero())?;
    let half = lit::<T>(0.5);
    let pref = real(two).powc(nu + half)
        * (-i::<T>() * T::FRAC_PI_2() * nu).exp()
        * (z * z * lit::<T>(0.25)).exp()
        / T::PI().sqrt();
    let value = pref * q.value;
    let err = (pref.norm() * q.est_abs_error).max(lit::<T>(10.0) * T::epsilon() * value.norm());
    Ok(EvaluationResult { value, est_abs_error: err, method: Method::IntegralFourier })
}

/// Evaluate with one specific method.
pub fn pcf_with<T: Real>(nu: Complex<T>, z: Complex<T>, method: Method) -> Result<EvaluationResult<T>> {
    match method {
        Method::Series => series(nu, z),
        Method::IntegralPlus => integral_plus(nu, z),
        Method::IntegralFourier => integral_fourier(nu, z),
        Method::Asymptotic => asymptotic(nu, z),
        Method::HermiteReduction => hermite_reduction(nu, z),
        Method::OdeContinuation => ode_continuation(nu, z),
    }
}

/// Default evaluation of `D_ν(z)` (no cross-check, cheapest reliable path).
pub fn pcf_value<T: Real>(nu: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    check_finite(nu, z)?;
    if z.norm() >= asymptotic_radius(nu) {
        return Ok(asymptotic_raw(nu, z).0);
    }
    if z.norm() <= lit(2.0) {
        if let Ok(s) = series(nu, z) {
            if s.est_abs_error <= lit::<T>(1e-13) * s.value.norm() {
                return Ok(s.value);
            }
        }
    }
    Ok(ode_continuation(nu, z)?.value)
}

/// `D_ν(z)` by the region dispatcher.
///
/// With `method = None` the primary value comes from the asymptotic
/// expansion for `|z| >= 8 + 2|ν|` and from ODE continuation otherwise; where
/// the series is also well conditioned it is evaluated too and the
/// disagreement enters `est_abs_error`. A forced method is checked against
/// its own validity region.
pub fn pcf<T: Real>(nu: Complex<T>, z: Complex<T>, method: Option<Method>) -> Result<EvaluationResult<T>> {
    if let Some(m) = method {
        return pcf_with(nu, z, m);
    }
    check_finite(nu, z)?;
    let floor = lit::<T>(10.0) * T::epsilon();
    let primary = if z.norm() >= asymptotic_radius(nu) {
        asymptotic(nu, z)?
    } else {
        ode_continuation(nu, z)?
    };
    let mut result = primary;
    let mut secondary = None;
    if exact_nonnegative_integer(nu).is_some() {
        secondary = hermite_reduction(nu, z).ok();
    } else if z.norm() <= lit(5.0) {
        secondary = series(nu, z).ok().filter(|s| s.est_abs_error <= lit::<T>(1e-10) * s.value.norm());
    }
    if let Some(s) = secondary {
        result.est_abs_error = (s.value - primary.value).norm().max(floor * primary.value.norm());
    } else {
        result.est_abs_error = result.est_abs_error.max(floor * primary.value.norm());
    }
    if !is_finite(result.value) {
        return Err(Error::Accuracy { tolerance: 0.0, achieved: f64::INFINITY });
    }
    Ok(result)
}

/// `|D''_ν(z) + (ν + ½ - z²/4) D_ν(z)|` with a five-point second difference
/// of step `h` along the real direction.
pub fn pcf_solves_ode_residual<T: Real>(nu: Complex<T>, z: Complex<T>, h: T) -> Result<T> {
    let f = |dz: T| pcf_value(nu, z + dz);
    let two = lit::<T>(2.0);
    let f0 = f(T::zero())?;
    let second = (-f(two * h)? + f(h)? * lit::<T>(16.0) - f0 * lit::<T>(30.0) + f(-h)? * lit::<T>(16.0) - f(-two * h)?)
        / (lit::<T>(12.0) * h * h);
    Ok((second + (nu + lit::<T>(0.5) - z * z * lit::<T>(0.25)) * f0).norm())
}

/// Unit direction `e^{iθ}`.
pub fn ray<T: Real>(theta: T) -> Complex<T> {
    cis(theta)
}
