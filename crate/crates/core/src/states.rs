//! Eigenfunction families of the inverted oscillator and the operators
//! acting on them.
//!
//! All families are returned as [`Analytic`] handles so that they can be
//! evaluated off the real axis, which is how pairings between the resonant
//! states are computed.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::distributions::TestFunction;
use crate::error::{Error, Result};
use crate::func::Analytic;
use crate::io::atomic_write;
use crate::scalar::{cis, from_usize, i, is_finite, lit, real, Real};
use crate::specfun::{gamma, hermite_functions, pcf_points, pcf_value, rgamma};

/// Branch label of the resonant families and of the `χ`/`η` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            _ => Err(Error::Domain(format!("unknown sign '{s}'"))),
        }
    }
}

/// `(n, ±, γ)`, labelling `f̃±_n` with eigenvalue `±E_n`, `E_n = iγ(n + ½)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantIndex<T> {
    pub n: usize,
    pub sign: Sign,
    pub gamma: T,
}

impl<T: Real> ResonantIndex<T> {
    pub fn new(n: usize, sign: Sign, gamma: T) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(ResonantIndex { n, sign, gamma })
    }

    /// `E_n = iγ(n + ½)` (independent of the sign).
    pub fn energy(&self) -> Complex<T> {
        resonance_energy(self.n, self.gamma)
    }
}

/// `E_n = iγ(n + ½)`.
pub fn resonance_energy<T: Real>(n: usize, gamma: T) -> Complex<T> {
    Complex::new(T::zero(), gamma * (from_usize::<T>(n) + lit(0.5)))
}

/// An energy together with `γ`; `ν = -(iE/γ + ½)` is always recomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint<T> {
    pub energy: Complex<T>,
    pub gamma: T,
}

impl<T: Real> EnergyPoint<T> {
    pub fn new(energy: Complex<T>, gamma: T) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(EnergyPoint { energy, gamma })
    }

    pub fn nu(&self) -> Complex<T> {
        nu_of_energy(self.energy, self.gamma)
    }
}

/// `ν = -(iE/γ + ½)`.
pub fn nu_of_energy<T: Real>(energy: Complex<T>, gamma: T) -> Complex<T> {
    -(i::<T>() * energy / gamma + lit::<T>(0.5))
}

pub(crate) fn check_gamma<T: Real>(gamma: T) -> Result<()> {
    if gamma > T::zero() && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("gamma must be positive and finite, got {gamma}")))
    }
}

/// Uniform grid on `[x_min, x_max]` with `n_points >= 16` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    pub x_min: T,
    pub x_max: T,
    pub n_points: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(x_min: T, x_max: T, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::Domain("grid needs finite x_min < x_max".into()));
        }
        if n_points < 16 {
            return Err(Error::Domain(format!("grid needs at least 16 points, got {n_points}")));
        }
        Ok(Grid { x_min, x_max, n_points })
    }

    /// Parses `"x_min:x_max:n"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Domain(format!("grid '{s}' is not of the form x_min:x_max:n")));
        }
        let num = |t: &str| -> Result<T> {
            t.trim()
                .parse::<f64>()
                .ok()
                .and_then(T::from_f64)
                .ok_or_else(|| Error::Domain(format!("bad grid bound '{t}'")))
        };
        let n = parts[2].trim().parse::<usize>().map_err(|_| Error::Domain(format!("bad grid size '{}'", parts[2])))?;
        Grid::new(num(parts[0])?, num(parts[1])?, n)
    }

    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / from_usize(self.n_points - 1)
    }

    pub fn point(&self, k: usize) -> T {
        if k + 1 == self.n_points {
            return self.x_max;
        }
        self.x_min + (self.x_max - self.x_min) * from_usize(k) / from_usize(self.n_points - 1)
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n_points).map(|k| self.point(k)).collect()
    }
}

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSample<T> {
    pub grid: Grid<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> WaveSample<T> {
    pub fn new(grid: Grid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::Domain(format!("{} values for a grid of {} points", values.len(), grid.n_points)));
        }
        if !values.iter().all(|v| is_finite(*v)) {
            return Err(Error::Accuracy { tolerance: 0.0, achieved: f64::INFINITY });
        }
        Ok(WaveSample { grid, values })
    }

    /// Samples a function handle on the grid.
    pub fn from_fn(f: &Analytic<T>, grid: Grid<T>) -> Result<Self> {
        let zs: Vec<Complex<T>> = grid.points().into_iter().map(real).collect();
        WaveSample::new(grid, f.eval_many(&zs)?)
    }

    /// Trapezoid `∫ |ψ|² dx` over the grid.
    pub fn norm_sqr(&self) -> T {
        let n = self.values.len();
        let mut s = T::zero();
        for (k, v) in self.values.iter().enumerate() {
            let w = if k == 0 || k == n - 1 { lit(0.5) } else { T::one() };
            s += v.norm_sqr() * w;
        }
        s * self.grid.dx()
    }

    /// Trapezoid `∫ conj(self) other dx` over the shared grid.
    pub fn dot(&self, other: &Self) -> Complex<T> {
        let n = self.values.len();
        let mut s = real(T::zero());
        for k in 0..n {
            let w = if k == 0 || k == n - 1 { lit(0.5) } else { T::one() };
            s += self.values[k].conj() * other.values[k] * w;
        }
        s * self.grid.dx()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re,im\n");
        for (x, v) in self.grid.points().into_iter().zip(&self.values) {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e}\n",
                x.to_f64().unwrap_or(f64::NAN),
                v.re.to_f64().unwrap_or(f64::NAN),
                v.im.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }

    /// Parses the CSV produced by [`WaveSample::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for (k, line) in text.lines().enumerate() {
            if k == 0 {
                if line.trim() != "x,re,im" {
                    return Err(Error::Domain("missing x,re,im header".into()));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<f64> = line
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Domain(format!("bad CSV line {}: {e}", k + 1)))?;
            if f.len() != 3 {
                return Err(Error::Domain(format!("CSV line {} needs 3 columns", k + 1)));
            }
            xs.push(lit::<T>(f[0]));
            vals.push(Complex::new(lit::<T>(f[1]), lit::<T>(f[2])));
        }
        if xs.len() < 2 {
            return Err(Error::Domain("CSV holds fewer than two samples".into()));
        }
        let grid = Grid::new(xs[0], xs[xs.len() - 1], xs.len())?;
        WaveSample::new(grid, vals)
    }

    /// Writes `<path>` as CSV and `<path>.json` with the metadata sidecar.
    pub fn write(&self, path: &Path, meta: &serde_json::Value) -> Result<()> {
        atomic_write(path, self.to_csv().as_bytes())?;
        let mut side = meta.clone();
        if let Some(obj) = side.as_object_mut() {
            obj.insert(
                "grid".into(),
                serde_json::json!({
                    "x_min": self.grid.x_min.to_f64(),
                    "x_max": self.grid.x_max.to_f64(),
                    "n_points": self.grid.n_points,
                }),
            );
        }
        let json = serde_json::to_string_pretty(&side).map_err(|e| Error::Io(e.to_string()))?;
        let mut name = path.as_os_str().to_owned();
        name.push(".json");
        atomic_write(Path::new(&name), json.as_bytes())
    }
}

/// Harmonic-oscillator eigenfunction
/// `ψ_n(x) = N_n e^{-γx²/2} H_n(√γ x)`, `N_n = (√γ / (2^n n! √π))^{1/2}`,
/// evaluated through the normalised Hermite recurrence (no factorials).
pub fn osc_eigenstate<T: Real>(n: usize, gamma: T) -> Result<Analytic<T>> {
    check_gamma(gamma)?;
    let sg = gamma.sqrt();
    let pref = gamma.powf(lit(0.25));
    Ok(Analytic::new(format!("psi_ho_{n}"), vec![real(gamma * lit(0.5))], move |z: Complex<T>| {
        Ok(*hermite_functions(n, z * sg).last().expect("non-empty") * pref)
    }))
}

/// All oscillator eigenfunctions `ψ_0..ψ_{n_max}` at one point.
pub fn osc_eigenstates_at<T: Real>(n_max: usize, gamma: T, z: Complex<T>) -> Vec<Complex<T>> {
    let pref = gamma.powf(lit(0.25));
    hermite_functions(n_max, z * gamma.sqrt()).into_iter().map(|h| h * pref).collect()
}

/// Complex dilation `(V_λ φ)(x) = e^{-iλ/2} φ(e^{-iλ} x)`.
///
/// Rejected when the dilated function would grow along the real axis.
pub fn complex_dilation<T: Real>(lambda: T, phi: &Analytic<T>) -> Result<Analytic<T>> {
    let rot = cis(-lambda * lit(2.0));
    let exps: Vec<Complex<T>> = phi.exponents().iter().map(|s| *s * rot).collect();
    let slack = lit::<T>(1e-12);
    if exps.iter().any(|s| s.re < -slack * s.norm()) {
        let (lo, hi) = admissible_dilations(phi.exponents());
        return Err(Error::SectorViolation {
            angle: lambda.to_f64().unwrap_or(f64::NAN),
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let exps: Vec<Complex<T>> = exps
        .into_iter()
        .map(|s| if s.re.abs() <= slack * s.norm() { Complex::new(T::zero(), s.im) } else { s })
        .collect();
    let phase = cis(-lambda * lit(0.5));
    let scale = cis(-lambda);
    let inner = phi.clone();
    let batch_inner = phi.clone();
    Ok(Analytic::new(format!("V({}){}", lambda, phi.label()), exps, move |z| Ok(inner.eval(z * scale)? * phase))
        .with_batch(move |zs: &[Complex<T>]| {
            let w: Vec<_> = zs.iter().map(|z| *z * scale).collect();
            Ok(batch_inner.eval_many(&w)?.into_iter().map(|v| v * phase).collect())
        }))
}

fn admissible_dilations<T: Real>(exps: &[Complex<T>]) -> (T, T) {
    // λ with Re(σ e^{-2iλ}) >= 0 for all σ: intersect |arg σ - 2λ| <= π/2
    let mut lo = T::neg_infinity();
    let mut hi = T::infinity();
    for s in exps {
        let a = s.im.atan2(s.re);
        lo = lo.max((a - T::FRAC_PI_2()) * lit(0.5));
        hi = hi.min((a + T::FRAC_PI_2()) * lit(0.5));
    }
    (lo, hi)
}

/// Resonant state `f̃±_n(x) = e^{±iπ/8} ψ_n(e^{±iπ/4} x)`, equivalently
/// `N_n e^{±iπ/8} e^{∓iγx²/2} H_n(√(±iγ) x)`.
pub fn resonant_state<T: Real>(idx: ResonantIndex<T>) -> Analytic<T> {
    let s = idx.sign.factor::<T>();
    let phase = cis(T::FRAC_PI_8() * s);
    let rot = cis(T::FRAC_PI_4() * s) * idx.gamma.sqrt();
    let pref = idx.gamma.powf(lit(0.25));
    let n = idx.n;
    let sigma = Complex::new(T::zero(), idx.gamma * lit(0.5) * s);
    Analytic::new(format!("f_{}_{}", idx.sign, n), vec![sigma], move |z: Complex<T>| {
        Ok(*hermite_functions(n, z * rot).last().expect("non-empty") * pref * phase)
    })
}

/// `(γ / (2π²))^{1/4}`.
pub fn c0<T: Real>(gamma: T) -> T {
    (gamma / (lit::<T>(2.0) * T::PI() * T::PI())).powf(lit(0.25))
}

/// `C = e^{-iπ/8} C_0`.
pub fn transform_constant<T: Real>(gamma: T) -> Complex<T> {
    cis(-T::FRAC_PI_8()) * c0(gamma)
}

/// `(C_0/√(2πγ)) · √i^{ν+½}` with `√i^{ν+½} = exp((ν+½) iπ/4)`.
fn eigen_prefactor<T: Real>(nu: Complex<T>, gamma: T) -> Complex<T> {
    let base = c0(gamma) / (T::TAU() * gamma).sqrt();
    (i::<T>() * T::FRAC_PI_4() * (nu + lit::<T>(0.5))).exp() * base
}

fn eigen_exponents<T: Real>(gamma: T) -> Vec<Complex<T>> {
    let h = gamma * lit(0.5);
    vec![Complex::new(T::zero(), h), Complex::new(T::zero(), -h)]
}

/// Builds `x ↦ K · D_μ(c x)` as a handle with a batched evaluator.
fn pcf_handle<T: Real>(label: String, gamma: T, k: Complex<T>, mu: Complex<T>, c: Complex<T>) -> Analytic<T> {
    Analytic::new(label, eigen_exponents(gamma), move |z: Complex<T>| Ok(pcf_value(mu, c * z)? * k)).with_batch(
        move |zs: &[Complex<T>]| {
            let w: Vec<_> = zs.iter().map(|z| *z * c).collect();
            Ok(pcf_points(mu, &w)?.into_iter().map(|v| v * k).collect())
        },
    )
}

/// `χ^E_±(x) = (C_0/√(2πγ)) √i^{ν+½} Γ(ν+1) D_{-ν-1}(∓√(-2iγ) x)`.
///
/// `E` may be complex (analytic continuation); it must avoid the poles
/// `E = -E_n` of `Γ(ν+1)`.
pub fn chi_state<T: Real>(energy: Complex<T>, sign: Sign, gamma: T) -> Result<Analytic<T>> {
    check_gamma(gamma)?;
    let nu = nu_of_energy(energy, gamma);
    let one = real(T::one());
    let k = eigen_prefactor(nu, gamma) * gamma_or_pole(nu + one, "chi_state energy")?;
    let c = (Complex::new(T::zero(), -lit::<T>(2.0) * gamma)).sqrt() * (-sign.factor::<T>());
    Ok(pcf_handle(format!("chi_{sign}(E={energy})"), gamma, k, -nu - one, c))
}

/// `χ^E_±` with the `Γ(ν+1)` factor replaced by `1/rgamma`, i.e. the entire
/// function `χ^E_± / Γ(ν+1)`, useful near the poles.
pub fn chi_state_reduced<T: Real>(energy: Complex<T>, sign: Sign, gamma: T) -> Result<Analytic<T>> {
    check_gamma(gamma)?;
    let nu = nu_of_energy(energy, gamma);
    let one = real(T::one());
    let k = eigen_prefactor(nu, gamma);
    let c = (Complex::new(T::zero(), -lit::<T>(2.0) * gamma)).sqrt() * (-sign.factor::<T>());
    Ok(pcf_handle(format!("chi_reduced_{sign}(E={energy})"), gamma, k, -nu - one, c))
}

/// `η^E_±` straight from its defining formula
/// `(C_0/√(2πγ)) √i^{ν+½} Γ(-ν) D_ν(∓√(2iγ) x)`.
pub fn eta_state_direct<T: Real>(energy: Complex<T>, sign: Sign, gamma: T) -> Result<Analytic<T>> {
    check_gamma(gamma)?;
    let nu = nu_of_energy(energy, gamma);
    let k = eigen_prefactor(nu, gamma) * gamma_or_pole(-nu, "eta_state energy")?;
    let c = (Complex::new(T::zero(), lit::<T>(2.0) * gamma)).sqrt() * (-sign.factor::<T>());
    Ok(pcf_handle(format!("eta_{sign}(E={energy})"), gamma, k, nu, c))
}

/// `η^E_±`. For real `E` this is the time reverse `conj ∘ χ^E_±` (built
/// as the Schwarz reflection of the `χ` handle); complex `E` uses the
/// defining formula.
pub fn eta_state<T: Real>(energy: Complex<T>, sign: Sign, gamma: T) -> Result<Analytic<T>> {
    if energy.im == T::zero() {
        Ok(chi_state(energy, sign, gamma)?.schwarz())
    } else {
        eta_state_direct(energy, sign, gamma)
    }
}

fn gamma_or_pole<T: Real>(z: Complex<T>, what: &'static str) -> Result<Complex<T>> {
    gamma(z).map_err(|_| Error::Pole { what, location: format!("{z}") })
}

/// Definite-parity combinations `((χ_+ + χ_-)/√2, (χ_+ - χ_-)/√2)`.
pub fn parity_states<T: Real>(energy: Complex<T>, gamma: T) -> Result<(Analytic<T>, Analytic<T>)> {
    let p = chi_state(energy, Sign::Plus, gamma)?;
    let m = chi_state(energy, Sign::Minus, gamma)?;
    let r = real(T::one() / lit::<T>(2.0).sqrt());
    Ok((Analytic::combine(r, &p, r, &m), Analytic::combine(r, &p, -r, &m)))
}

/// Generating function `S(x, u) = γx²/2 - √(2γ) x u + u²/2`.
pub fn generating_phase<T: Real>(x: T, u: T, gamma: T) -> T {
    gamma * x * x * lit(0.5) - (lit::<T>(2.0) * gamma).sqrt() * x * u + u * u * lit(0.5)
}

/// Inputs accepted by [`transform_u`].
#[derive(Debug, Clone, PartialEq)]
pub enum UInput<T> {
    /// `δ^{(n)}(u)`.
    Delta(usize),
    /// `u^n`.
    Monomial(usize),
    /// `u^λ_+`.
    PowerPlus(Complex<T>),
    /// `u^λ_-`.
    PowerMinus(Complex<T>),
    /// `(u + i0)^λ`.
    PowerI0(Complex<T>),
    /// A Gaussian-type test function with `Re σ > 0`.
    Test(TestFunction<T>),
}

/// `∫ P(u) e^{-Au² + Bu} du` for `Re A > 0` via the Gaussian moment recurrence.
fn gaussian_moments_integral<T: Real>(poly: &[Complex<T>], a: Complex<T>, b: Complex<T>) -> Complex<T> {
    let two_a = a * lit::<T>(2.0);
    let m0 = (real(T::PI()) / a).sqrt() * (b * b / (a * lit::<T>(4.0))).exp();
    let mut prev = real(T::zero());
    let mut cur = m0;
    let mut sum = poly[0] * m0;
    for (j, p) in poly.iter().enumerate().skip(1) {
        let next = b / two_a * cur + prev * from_usize::<T>(j - 1) / two_a;
        prev = cur;
        cur = next;
        sum += *p * cur;
    }
    sum
}

/// `∫_0^∞ u^λ e^{-Au² + Bu} du = Γ(λ+1)(2A)^{-(λ+1)/2} e^{B²/(8A)} D_{-λ-1}(-B/√(2A))`.
fn half_line_power_gaussian<T: Real>(lambda: Complex<T>, a: Complex<T>, b: Complex<T>) -> Result<Complex<T>> {
    let one = real(T::one());
    let two_a = a * lit::<T>(2.0);
    let g = gamma_or_pole(lambda + one, "power exponent")?;
    Ok(g * two_a.powc(-(lambda + one) * lit::<T>(0.5))
        * (b * b / (a * lit::<T>(8.0))).exp()
        * pcf_value(-lambda - one, -b / two_a.sqrt())?)
}

/// Neville extrapolation to `ε = 0` of `values` sampled at `eps`; returns
/// the estimate and the change from dropping the last point.
fn extrapolate_to_zero<T: Real>(eps: &[T], values: &[Complex<T>]) -> (Complex<T>, T) {
    let lagrange = |k: usize| -> Complex<T> {
        let mut acc = real(T::zero());
        for a in 0..k {
            let mut w = T::one();
            for b in 0..k {
                if a != b {
                    w = w * eps[b] / (eps[b] - eps[a]);
                }
            }
            acc += values[a] * w;
        }
        acc
    };
    let full = lagrange(eps.len());
    let partial = lagrange(eps.len() - 1);
    (full, (full - partial).norm())
}

/// `(Uf)(x) = C ∫ f(u) e^{iS(x,u)} du` on the grid.
///
/// `δ^{(n)}` is handled exactly (derivatives of `e^{iS}` at `u = 0`),
/// Gaussian test functions by their closed-form moments, and the
/// non-decaying inputs through the regulator `e^{-εu²}` extrapolated to
/// `ε → 0`.
pub fn transform_u<T: Real>(input: &UInput<T>, grid: Grid<T>, gamma: T) -> Result<WaveSample<T>> {
    check_gamma(gamma)?;
    let cc = transform_constant(gamma);
    let sq = (lit::<T>(2.0) * gamma).sqrt();
    let half_i = Complex::new(T::zero(), lit::<T>(0.5));
    let xs = grid.points();
    let front = |x: T| cis(gamma * x * x * lit(0.5)) * cc;
    let beta = |x: T| Complex::new(T::zero(), -sq * x);
    let values: Vec<Complex<T>> = match input {
        UInput::Delta(n) => xs
            .iter()
            .map(|&x| {
                // Taylor coefficients of exp(βu + (i/2)u²)
                let b = beta(x);
                let mut g = vec![real(T::zero()); n + 1];
                g[0] = real(T::one());
                if *n >= 1 {
                    g[1] = b;
                }
                for k in 1..*n {
                    g[k + 1] = (b * g[k] + half_i * g[k - 1] * lit::<T>(2.0)) / from_usize::<T>(k + 1);
                }
                let mut fact = T::one();
                for j in 2..=*n {
                    fact *= from_usize::<T>(j);
                }
                let sign = if n % 2 == 0 { T::one() } else { -T::one() };
                front(x) * g[*n] * fact * sign
            })
            .collect(),
        UInput::Test(phi) => {
            if phi.sigma.re <= T::zero() {
                return Err(Error::Unsupported("transform of a test function without Gaussian decay".into()));
            }
            let a = phi.sigma - half_i;
            xs.iter().map(|&x| front(x) * gaussian_moments_integral(&phi.poly, a, phi.b + beta(x))).collect()
        }
        UInput::Monomial(_) | UInput::PowerPlus(_) | UInput::PowerMinus(_) | UInput::PowerI0(_) => {
            let regulated = |e: T, b: Complex<T>| -> Result<Complex<T>> {
                let a = real(e) - half_i;
                Ok(match input {
                    UInput::Monomial(n) => {
                        let mut poly = vec![real(T::zero()); n + 1];
                        poly[*n] = real(T::one());
                        gaussian_moments_integral(&poly, a, b)
                    }
                    UInput::PowerPlus(l) => half_line_power_gaussian(*l, a, b)?,
                    UInput::PowerMinus(l) => half_line_power_gaussian(*l, a, -b)?,
                    UInput::PowerI0(l) => {
                        half_line_power_gaussian(*l, a, b)?
                            + (i::<T>() * T::PI() * *l).exp() * half_line_power_gaussian(*l, a, -b)?
                    }
                    _ => unreachable!(),
                })
            };
            let eps: Vec<T> = (0..5).map(|k| lit::<T>(1e-3) / lit::<T>(2.0).powi(k)).collect();
            let mut out = Vec::with_capacity(xs.len());
            for &x in &xs {
                let b = beta(x);
                // The regulated closed forms are analytic in ε up to ε = 0,
                // so the limit is their value there; the extrapolation from
                // ε > 0 guards against evaluating on a bad branch.
                let limit = regulated(T::zero(), b)?;
                let vals = eps.iter().map(|&e| regulated(e, b)).collect::<Result<Vec<_>>>()?;
                let (extrapolated, _) = extrapolate_to_zero(&eps, &vals);
                let change = (extrapolated - limit).norm();
                if !is_finite(limit) || change > lit::<T>(1e-6) * limit.norm().max(lit(1e-12)) {
                    return Err(Error::Extrapolation(format!("ε → 0 limit unstable at x = {x} (change {change})")));
                }
                out.push(front(x) * limit);
            }
            out
        }
    };
    WaveSample::new(grid, values)
}

/// `(U ψ)(x)` for a density `ψ(u)` given only numerically, by trapezoid
/// quadrature on `[-L, L]` (used for unitarity checks with arbitrary data).
pub fn transform_u_numeric<T: Real>(psi: &dyn Fn(T) -> Complex<T>, half_width: T, nodes: usize, x: T, gamma: T) -> Complex<T> {
    let h = half_width * lit(2.0) / from_usize::<T>(nodes - 1);
    let mut s = real(T::zero());
    for k in 0..nodes {
        let u = -half_width + h * from_usize::<T>(k);
        let w = if k == 0 || k == nodes - 1 { lit(0.5) } else { T::one() };
        s += psi(u) * cis(generating_phase(x, u, gamma)) * w;
    }
    s * h * transform_constant(gamma)
}

/// `(-½ ∂²_x - ½ γ² x²) ψ` with fourth-order differences (one-sided at the edges).
pub fn hamiltonian_apply<T: Real>(psi: &WaveSample<T>, gamma: T) -> Result<WaveSample<T>> {
    check_gamma(gamma)?;
    let v = &psi.values;
    let n = v.len();
    let h = psi.grid.dx();
    let inv = T::one() / (lit::<T>(12.0) * h * h);
    let c = |k: f64| lit::<T>(k);
    let mut d2 = vec![real(T::zero()); n];
    for k in 0..n {
        d2[k] = if k >= 2 && k + 2 < n {
            (-v[k + 2] + v[k + 1] * c(16.0) - v[k] * c(30.0) + v[k - 1] * c(16.0) - v[k - 2]) * inv
        } else if k == 0 {
            (v[0] * c(45.0) - v[1] * c(154.0) + v[2] * c(214.0) - v[3] * c(156.0) + v[4] * c(61.0) - v[5] * c(10.0)) * inv
        } else if k == 1 {
            (v[0] * c(10.0) - v[1] * c(15.0) - v[2] * c(4.0) + v[3] * c(14.0) - v[4] * c(6.0) + v[5]) * inv
        } else if k == n - 1 {
            (v[n - 1] * c(45.0) - v[n - 2] * c(154.0) + v[n - 3] * c(214.0) - v[n - 4] * c(156.0) + v[n - 5] * c(61.0)
                - v[n - 6] * c(10.0))
                * inv
        } else {
            (v[n - 1] * c(10.0) - v[n - 2] * c(15.0) - v[n - 3] * c(4.0) + v[n - 4] * c(14.0) - v[n - 5] * c(6.0)
                + v[n - 6])
                * inv
        };
    }
    let xs = psi.grid.points();
    let out = (0..n)
        .map(|k| -d2[k] * lit::<T>(0.5) - v[k] * (gamma * gamma * xs[k] * xs[k] * lit(0.5)))
        .collect();
    WaveSample::new(psi.grid, out)
}

/// `1/Γ(ν+1)` at the energy, exposed for residue bookkeeping.
pub fn chi_pole_factor<T: Real>(energy: Complex<T>, gamma: T) -> Complex<T> {
    rgamma(nu_of_energy(energy, gamma) + T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{inner_product, inner_product_at};
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn oscillator_ground_state() {
        let psi = osc_eigenstate(0, 1.0_f64).unwrap();
        assert!((psi.at(0.0).unwrap().re - 0.751_125_544_464_942_5).abs() < 1e-15);
        let psi1 = osc_eigenstate(1, 1.0).unwrap();
        assert_eq!(psi1.at(0.0).unwrap(), c(0.0, 0.0));
        let psi2 = osc_eigenstate(2, 1.0).unwrap();
        let g = Grid::new(-12.0_f64, 12.0, 2001).unwrap();
        let s = WaveSample::from_fn(&psi2, g).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        assert!(osc_eigenstate(200, 1.0_f64).unwrap().at(3.0).unwrap().norm().is_finite());
    }

    #[test]
    fn dilation_gives_resonant_states() {
        for n in 0..4 {
            let psi = osc_eigenstate(n, 1.3).unwrap();
            let plus = complex_dilation(-std::f64::consts::FRAC_PI_4, &psi).unwrap();
            let minus = complex_dilation(std::f64::consts::FRAC_PI_4, &psi).unwrap();
            let fp = resonant_state(ResonantIndex::new(n, Sign::Plus, 1.3).unwrap());
            let fm = resonant_state(ResonantIndex::new(n, Sign::Minus, 1.3).unwrap());
            for x in [-2.0, -0.3, 0.0, 0.9, 3.1] {
                assert!((plus.at(x).unwrap() - fp.at(x).unwrap()).norm() < 1e-12);
                assert!((minus.at(x).unwrap() - fm.at(x).unwrap()).norm() < 1e-12);
                assert!((fp.at(x).unwrap().conj() - fm.at(x).unwrap()).norm() < 1e-14);
            }
        }
        let psi = osc_eigenstate(0, 1.0_f64).unwrap();
        assert!(matches!(complex_dilation(1.0, &psi), Err(Error::SectorViolation { .. })));
        let a = complex_dilation(0.2, &complex_dilation(-0.1, &psi).unwrap()).unwrap();
        let b = complex_dilation(0.1, &psi).unwrap();
        assert!((a.at(0.7).unwrap() - b.at(0.7).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn resonant_state_values() {
        let f = resonant_state(ResonantIndex::new(0, Sign::Plus, 1.0_f64).unwrap());
        let v = f.at(0.0).unwrap();
        assert!((v.norm() - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert!((v.arg() - std::f64::consts::FRAC_PI_8).abs() < 1e-15);
        assert!((f.at(4.0).unwrap().norm() - 0.751_125_544_464_942_5).abs() < 1e-14);
    }

    #[test]
    fn resonant_orthonormality() {
        for n in 0..4 {
            for m in 0..4 {
                let fp = resonant_state(ResonantIndex::new(n, Sign::Plus, 1.0).unwrap());
                let fm = resonant_state(ResonantIndex::new(m, Sign::Minus, 1.0).unwrap());
                let v = inner_product(&fp, &fm).unwrap();
                let expect = if n == m { 1.0 } else { 0.0 };
                assert!((v - c(expect, 0.0)).norm() < 1e-10, "<f+{n}|f-{m}> = {v}");
            }
        }
        let psi = osc_eigenstate(0, 1.0_f64).unwrap();
        assert!((inner_product_at(&psi, &psi, 0.0).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn chi_symmetries() {
        let p = chi_state(c(1.0, 0.0), Sign::Plus, 1.0).unwrap();
        let m = chi_state(c(1.0, 0.0), Sign::Minus, 1.0).unwrap();
        for x in [-3.0, -0.5, 0.2, 2.4] {
            assert!((m.at(x).unwrap() - p.at(-x).unwrap()).norm() < 1e-12);
        }
        let e = eta_state(c(1.3, 0.0), Sign::Plus, 1.0).unwrap();
        let ed = eta_state_direct(c(1.3, 0.0), Sign::Plus, 1.0).unwrap();
        let ch = chi_state(c(1.3, 0.0), Sign::Plus, 1.0).unwrap();
        for x in [-4.0, -1.0, 0.0, 0.5, 3.7] {
            assert!((e.at(x).unwrap() - ch.at(x).unwrap().conj()).norm() < 1e-15);
            assert!((ed.at(x).unwrap() - ch.at(x).unwrap().conj()).norm() < 1e-10);
        }
        let (even, odd) = parity_states(c(0.4, 0.0), 1.0).unwrap();
        assert!(odd.at(0.0).unwrap().norm() < 1e-14);
        assert!((even.at(1.2).unwrap() - even.at(-1.2).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn chi_solves_the_schrodinger_equation() {
        let e = 0.7;
        let chi = chi_state(c(e, 0.0), Sign::Plus, 1.0).unwrap();
        for x in [-2.0, 0.5, 3.0] {
            let h = 1e-3;
            let f = |t: f64| chi.at(t).unwrap();
            let d2 = (-f(x + 2.0 * h) + f(x + h) * 16.0 - f(x) * 30.0 + f(x - h) * 16.0 - f(x - 2.0 * h)) / (12.0 * h * h);
            let r = d2 + f(x) * (x * x + 2.0 * e);
            assert!(r.norm() < 1e-6, "x = {x}: {r}");
        }
    }

    #[test]
    fn generating_function_values() {
        assert_eq!(generating_phase(0.0, 0.0, 1.0), 0.0);
        assert!((generating_phase(1.0_f64, 1.0, 2.0) + 0.5).abs() < 1e-15);
        assert!((generating_phase(0.7_f64, -0.4, 1.3) - generating_phase(-0.7, 0.4, 1.3)).abs() < 1e-15);
    }

    #[test]
    fn transform_of_delta_is_chirp() {
        let g = Grid::new(-3.0, 3.0, 31).unwrap();
        let w = transform_u(&UInput::Delta(0), g, 1.0).unwrap();
        let cc = transform_constant(1.0);
        for (x, v) in g.points().into_iter().zip(&w.values) {
            assert!((v - cc * C::from_polar(1.0, x * x / 2.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn transform_matches_numeric_quadrature() {
        let phi = TestFunction::gaussian(c(0.6, 0.0));
        let g = Grid::new(-2.0, 2.0, 17).unwrap();
        let w = transform_u(&UInput::Test(phi.clone()), g, 1.0).unwrap();
        for (k, x) in g.points().into_iter().enumerate() {
            let num = transform_u_numeric(&|u| phi.eval(u), 12.0, 4001, x, 1.0);
            assert!((num - w.values[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn csv_round_trip() {
        let g = Grid::new(-1.0, 1.0, 16).unwrap();
        let psi = osc_eigenstate(1, 1.0).unwrap();
        let s = WaveSample::from_fn(&psi, g).unwrap();
        let back = WaveSample::from_csv(&s.to_csv()).unwrap();
        assert_eq!(back.grid.n_points, 16);
        for (a, b) in s.values.iter().zip(&back.values) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(Grid::<f64>::parse("-8:8:1024").is_ok());
        assert!(Grid::<f64>::parse("-8:8").is_err());
        assert!(Grid::<f64>::new(1.0, 0.0, 32).is_err());
    }
}

#[cfg(test)]
mod proposition_tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn ratio_spread(a: &[C], b: &[C]) -> (C, f64) {
        let r: Vec<C> = a.iter().zip(b).filter(|(_, d)| d.norm() > 1e-3).map(|(x, y)| x / y).collect();
        let mean = r.iter().sum::<C>() / r.len() as f64;
        let var = r.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / r.len() as f64;
        (mean, var.sqrt() / mean.norm())
    }

    #[test]
    fn transforms_are_resonant_states() {
        let g = Grid::new(-3.0, 3.0, 41).unwrap();
        for n in 0..=5 {
            let fp = WaveSample::from_fn(&resonant_state(ResonantIndex::new(n, Sign::Plus, 1.0).unwrap()), g).unwrap();
            let fm = WaveSample::from_fn(&resonant_state(ResonantIndex::new(n, Sign::Minus, 1.0).unwrap()), g).unwrap();
            let um = transform_u(&UInput::Monomial(n), g, 1.0).unwrap();
            let ud = transform_u(&UInput::Delta(n), g, 1.0).unwrap();
            let (_, s1) = ratio_spread(&um.values, &fp.values);
            let (_, s2) = ratio_spread(&ud.values, &fm.values);
            assert!(s1 < 1e-6, "n={n} monomial spread {s1}");
            assert!(s2 < 1e-6, "n={n} delta spread {s2}");
        }
    }

    #[test]
    fn eigenvalue_residual() {
        let g = Grid::new(-8.0, 8.0, 4096).unwrap();
        for n in 0..=5 {
            for sign in [Sign::Plus, Sign::Minus] {
                let idx = ResonantIndex::new(n, sign, 1.0).unwrap();
                let f = WaveSample::from_fn(&resonant_state(idx), g).unwrap();
                let hf = hamiltonian_apply(&f, 1.0).unwrap();
                let e = idx.energy() * sign.factor::<f64>();
                let (mut num, mut den) = (0.0, 0.0);
                for (k, x) in g.points().into_iter().enumerate() {
                    if x.abs() <= 4.0 {
                        num += (hf.values[k] - e * f.values[k]).norm_sqr();
                        den += (e * f.values[k]).norm_sqr();
                    }
                }
                let rel = (num / den).sqrt();
                assert!(rel < 1e-6, "n={n} {sign}: {rel}");
            }
        }
    }
}
