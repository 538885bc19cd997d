//! Analytic function handles with a Gaussian growth model.
//!
//! Every handle evaluates an entire (or at least sector-analytic) function
//! at complex arguments and records the quadratic exponents `σ_k` such that
//! the function behaves like a sum of `poly(z) e^{-σ_k z²}` at infinity.
//! From those exponents the admissible rotation angles for contour
//! integrals follow without any further information about the function.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, from_usize, lit, Real};

type PointFn<T> = dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync;
type BatchFn<T> = dyn Fn(&[Complex<T>]) -> Result<Vec<Complex<T>>> + Send + Sync;

/// Immutable, cheaply clonable function handle.
#[derive(Clone)]
pub struct Analytic<T> {
    point: Arc<PointFn<T>>,
    batch: Option<Arc<BatchFn<T>>>,
    exponents: Vec<Complex<T>>,
    label: String,
}

impl<T: Real> std::fmt::Debug for Analytic<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Analytic").field("label", &self.label).field("exponents", &self.exponents).finish()
    }
}

impl<T: Real> Analytic<T> {
    pub fn new<F>(label: impl Into<String>, exponents: Vec<Complex<T>>, f: F) -> Self
    where
        F: Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync + 'static,
    {
        Analytic { point: Arc::new(f), batch: None, exponents, label: label.into() }
    }

    /// Attaches a vectorised evaluator used by [`Analytic::eval_many`].
    pub fn with_batch<B>(mut self, b: B) -> Self
    where
        B: Fn(&[Complex<T>]) -> Result<Vec<Complex<T>>> + Send + Sync + 'static,
    {
        self.batch = Some(Arc::new(b));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn exponents(&self) -> &[Complex<T>] {
        &self.exponents
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        (self.point)(z)
    }

    /// Value at a real point.
    pub fn at(&self, x: T) -> Result<Complex<T>> {
        (self.point)(Complex::new(x, T::zero()))
    }

    pub fn eval_many(&self, zs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        match &self.batch {
            Some(b) => b(zs),
            None => zs.iter().map(|z| (self.point)(*z)).collect(),
        }
    }

    /// Decay margin `min_k Re(σ_k e^{2iθ})` along the ray `e^{iθ} s`.
    pub fn margin(&self, theta: T) -> T {
        margin(&self.exponents, theta)
    }

    /// Schwarz reflection `z ↦ conj(f(conj z))`; equals `conj ∘ f` on the real line.
    pub fn schwarz(&self) -> Self {
        let inner = self.clone();
        let exps = self.exponents.iter().map(|s| s.conj()).collect();
        let batch_inner = self.clone();
        Analytic::new(format!("conj({})", self.label), exps, move |z: Complex<T>| Ok(inner.eval(z.conj())?.conj()))
            .with_batch(move |zs: &[Complex<T>]| {
                let c: Vec<_> = zs.iter().map(|z| z.conj()).collect();
                Ok(batch_inner.eval_many(&c)?.into_iter().map(|v| v.conj()).collect())
            })
    }

    /// `c · f`.
    pub fn scaled(&self, c: Complex<T>) -> Self {
        let inner = self.clone();
        let batch_inner = self.clone();
        Analytic::new(self.label.clone(), self.exponents.clone(), move |z| Ok(inner.eval(z)? * c))
            .with_batch(move |zs: &[Complex<T>]| Ok(batch_inner.eval_many(zs)?.into_iter().map(|v| v * c).collect()))
    }

    /// `a·f + b·g`.
    pub fn combine(a: Complex<T>, f: &Self, b: Complex<T>, g: &Self) -> Self {
        let (f1, g1, f2, g2) = (f.clone(), g.clone(), f.clone(), g.clone());
        let mut exps = f.exponents.clone();
        for s in &g.exponents {
            if !exps.contains(s) {
                exps.push(*s);
            }
        }
        Analytic::new(format!("{}+{}", f.label, g.label), exps, move |z| Ok(f1.eval(z)? * a + g1.eval(z)? * b))
            .with_batch(move |zs: &[Complex<T>]| {
                let u = f2.eval_many(zs)?;
                let v = g2.eval_many(zs)?;
                Ok(u.into_iter().zip(v).map(|(x, y)| x * a + y * b).collect())
            })
    }

    /// `z ↦ f(-z)`.
    pub fn reflected(&self) -> Self {
        let inner = self.clone();
        let batch_inner = self.clone();
        Analytic::new(format!("P{}", self.label), self.exponents.clone(), move |z: Complex<T>| inner.eval(-z))
            .with_batch(move |zs: &[Complex<T>]| {
                let m: Vec<_> = zs.iter().map(|z| -*z).collect();
                batch_inner.eval_many(&m)
            })
    }
}

/// `min_k Re(σ_k e^{2iθ})`.
pub fn margin<T: Real>(exponents: &[Complex<T>], theta: T) -> T {
    let rot = cis(theta * lit(2.0));
    exponents.iter().map(|s| (*s * rot).re).fold(T::infinity(), |a, b| a.min(b))
}

/// Growth exponents of the integrand `conj(f(conj z)) g(z)`.
pub fn pair_exponents<T: Real>(f: &Analytic<T>, g: &Analytic<T>) -> Vec<Complex<T>> {
    let mut out = Vec::new();
    for a in f.exponents() {
        for b in g.exponents() {
            out.push(a.conj() + *b);
        }
    }
    out
}

/// Angle in `(-π/2, π/2)` that maximises the decay margin, and that margin.
pub fn best_angle<T: Real>(exponents: &[Complex<T>]) -> (T, T) {
    let samples = 720usize;
    let mut best = (T::zero(), margin(exponents, T::zero()));
    for k in 0..samples {
        let theta = -T::FRAC_PI_2() + T::PI() * (from_usize::<T>(k) + lit(0.5)) / from_usize::<T>(samples);
        let m = margin(exponents, theta);
        if m > best.1 + lit(1e-12) {
            best = (theta, m);
        }
    }
    // Snap to a nearby multiple of π/8 when it is as good, for reproducible contours.
    let step = T::FRAC_PI_8();
    let snapped = (best.0 / step).round() * step;
    let ms = margin(exponents, snapped);
    if ms >= best.1 * lit(0.98) {
        (snapped, ms)
    } else {
        best
    }
}

/// Checks that the pair can be integrated along `e^{iθ} s`.
pub fn check_angle<T: Real>(exponents: &[Complex<T>], theta: T) -> Result<T> {
    let m = margin(exponents, theta);
    if m > T::zero() {
        return Ok(m);
    }
    // Report the admissible interval around the best angle.
    let (b, bm) = best_angle(exponents);
    let (mut lo, mut hi) = (b, b);
    if bm > T::zero() {
        let d = lit::<T>(1e-3);
        while lo > -T::FRAC_PI_2() && margin(exponents, lo - d) > T::zero() {
            lo -= d;
        }
        while hi < T::FRAC_PI_2() && margin(exponents, hi + d) > T::zero() {
            hi += d;
        }
    }
    Err(Error::SectorViolation {
        angle: theta.to_f64().unwrap_or(f64::NAN),
        lo: lo.to_f64().unwrap_or(f64::NAN),
        hi: hi.to_f64().unwrap_or(f64::NAN),
    })
}

/// Trapezoid rule on `(-inf, inf)` for a batched integrand that decays at
/// least like `e^{-m s²}` with `m = decay`. The range and the spacing are
/// refined until the estimate is stable to `rel_tol`.
pub fn integrate_line_batched<T, F>(f: F, decay: T, scale: T, rel_tol: T) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<Vec<Complex<T>>>,
{
    // half width where e^{-m L²} drops below 1e-22, padded for polynomial factors
    let mut half = ((lit::<T>(52.0) / decay).sqrt() + lit::<T>(2.0) * scale).max(lit(4.0));
    let h = (lit::<T>(0.35) / decay.sqrt()).min(lit(0.5)).min(scale.max(lit(0.05)));
    loop {
        let n = (half / h).ceil().to_usize().unwrap_or(1);
        let nodes: Vec<T> = (0..=2 * n).map(|k| (from_usize::<T>(k) - from_usize::<T>(n)) * h).collect();
        let vals = f(&nodes)?;
        let peak = vals.iter().map(|v| v.norm()).fold(T::zero(), |a, b| a.max(b));
        let edge = vals[0].norm().max(vals[2 * n].norm()).max(vals[1].norm()).max(vals[2 * n - 1].norm());
        if edge > lit::<T>(1e-20) * peak && half < lit(1e3) {
            half *= lit(1.5);
            continue;
        }
        let mut sum: Complex<T> = vals.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + *b);
        let mut mass: T = vals.iter().map(|v| v.norm()).fold(T::zero(), |a, b| a + b);
        let mut estimate = sum * h;
        let mut hh = h;
        for _ in 0..12 {
            let mids: Vec<T> = (0..2 * n * (h / hh).round().to_usize().unwrap_or(1))
                .map(|k| -from_usize::<T>(n) * h + (from_usize::<T>(k) + lit(0.5)) * hh)
                .collect();
            let mv = f(&mids)?;
            for v in &mv {
                sum += *v;
                mass += v.norm();
            }
            hh *= lit(0.5);
            let next = sum * hh;
            let err = (next - estimate).norm();
            estimate = next;
            // integrands built from special functions carry ~1e-13 relative
            // noise, so cancellation below ~1e-12 of the L¹ mass is not resolvable
            let floor = (lit::<T>(16.0) * T::epsilon()).max(lit(1e-12)) * mass * hh;
            if err <= rel_tol * estimate.norm() || err <= floor {
                if !(estimate.re.is_finite() && estimate.im.is_finite()) {
                    return Err(Error::Quadrature("non-finite rotated integral".into()));
                }
                return Ok(estimate);
            }
        }
        return Err(Error::Quadrature("rotated-contour trapezoid rule did not converge".into()));
    }
}

/// `⟨f|g⟩ = ∫ conj(f(x)) g(x) dx`, computed on the ray `x = e^{iθ}s`.
pub fn inner_product_at<T: Real>(f: &Analytic<T>, g: &Analytic<T>, theta: T) -> Result<Complex<T>> {
    let exps = pair_exponents(f, g);
    let m = check_angle(&exps, theta)?;
    let big = exps.iter().map(|s| s.norm()).fold(T::zero(), |a, b| a.max(b));
    let dir = cis(theta);
    let fs = f.schwarz();
    let integrand = |s: &[T]| -> Result<Vec<Complex<T>>> {
        let zs: Vec<Complex<T>> = s.iter().map(|&t| dir * t).collect();
        let a = fs.eval_many(&zs)?;
        let b = g.eval_many(&zs)?;
        Ok(a.into_iter().zip(b).map(|(x, y)| x * y * dir).collect())
    };
    integrate_line_batched(integrand, m, T::one() / big.sqrt().max(lit(1e-3)), lit(1e-13))
}

/// `⟨f|g⟩` on the ray with the largest decay margin.
pub fn inner_product<T: Real>(f: &Analytic<T>, g: &Analytic<T>) -> Result<Complex<T>> {
    let exps = pair_exponents(f, g);
    let (theta, m) = best_angle(&exps);
    if m <= T::zero() {
        return check_angle(&exps, theta).map(|_| Complex::new(T::zero(), T::zero()));
    }
    inner_product_at(f, g, theta)
}
