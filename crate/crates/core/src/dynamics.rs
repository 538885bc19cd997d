//! Semigroup evolution by truncated resonance expansions, with a unitary
//! reference propagator built from two independent oracles.
//!
//! Resonance expansions are not square integrable, so errors are measured
//! through smeared norms: the largest deviation of `⟨g_k|φ(t)⟩` over a fixed
//! set of Gaussian probes `g_k` chosen in the dual Hardy class.

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{FftNum, FftPlanner};
use serde::Serialize;

use crate::distributions::TestFunction;
use crate::error::{Error, Result};
use crate::func::inner_product;
use crate::resonance::{energy_nodes, spectral_weights, Branch};
use crate::scalar::{cis, from_usize, lit, real, Real};
use crate::states::{check_gamma, resonant_state, Grid, ResonantIndex, Sign, WaveSample};

pub const DEFAULT_TERMS: usize = 60;
pub const DEFAULT_ECUT: f64 = 25.0;
pub const MAX_TIME: f64 = 6.0;

fn ket_sign(branch: Branch) -> Sign {
    match branch {
        Branch::Minus => Sign::Minus,
        Branch::Plus => Sign::Plus,
    }
}

/// Truncated expansion `Σ_n c_n f̃∓_n` of a test function.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<T> {
    pub branch: Branch,
    pub gamma: T,
    /// Elapsed time, `≥ 0` on the minus branch and `≤ 0` on the plus branch.
    pub time: T,
    pub coefficients: Vec<Complex<T>>,
    /// Set when the last nonzero coefficients fail to decrease.
    pub tail_warning: bool,
}

/// `c_n = ⟨f̃⁺_n|φ⟩` (minus) or `⟨f̃⁻_n|φ⟩` (plus) for `n < terms`.
pub fn resonance_coefficients<T: Real>(phi: &TestFunction<T>, gamma: T, branch: Branch, terms: usize) -> Result<Vec<Complex<T>>> {
    check_gamma(gamma)?;
    let bra = ket_sign(branch).flip();
    let pa = phi.to_analytic();
    (0..terms)
        .into_par_iter()
        .map(|n| inner_product(&resonant_state(ResonantIndex { n, sign: bra, gamma }), &pa))
        .collect()
}

fn tail_grows<T: Real>(c: &[Complex<T>]) -> bool {
    let scale = c.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let tiny = scale * lit(1e-13);
    let nz: Vec<T> = c.iter().map(|v| v.norm()).filter(|v| *v > tiny).collect();
    nz.len() >= 2 && nz[nz.len() - 1] > nz[nz.len() - 2]
}

impl<T: Real> Expansion<T> {
    pub fn new(phi: &TestFunction<T>, gamma: T, branch: Branch, terms: usize) -> Result<Self> {
        let coefficients = resonance_coefficients(phi, gamma, branch, terms)?;
        let tail_warning = tail_grows(&coefficients);
        Ok(Expansion { branch, gamma, time: T::zero(), coefficients, tail_warning })
    }

    /// Applies `U(t)`: `c_n → e^{∓γ(n+½)t} c_n`. The minus semigroup only
    /// runs forward and the plus semigroup only backward.
    pub fn evolve(&self, t: T) -> Result<Self> {
        let forward = match self.branch {
            Branch::Minus => t >= T::zero(),
            Branch::Plus => t <= T::zero(),
        };
        if !forward || !t.is_finite() {
            return Err(Error::Domain(format!(
                "the {:?} semigroup is defined only for {} time",
                self.branch,
                if matches!(self.branch, Branch::Minus) { "non-negative" } else { "non-positive" }
            )));
        }
        let s = match self.branch {
            Branch::Minus => -t,
            Branch::Plus => t,
        };
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| *c * (self.gamma * (from_usize::<T>(n) + lit(0.5)) * s).exp())
            .collect();
        Ok(Expansion { time: self.time + t, coefficients, ..self.clone() })
    }

    /// Smeared value `⟨g|Σ c_n f̃_n⟩`.
    pub fn pair(&self, g: &TestFunction<T>) -> Result<Complex<T>> {
        let ga = g.to_analytic();
        let sign = ket_sign(self.branch);
        let terms: Vec<Complex<T>> = self
            .coefficients
            .par_iter()
            .enumerate()
            .map(|(n, c)| Ok(*c * inner_product(&ga, &resonant_state(ResonantIndex { n, sign, gamma: self.gamma }))?))
            .collect::<Result<_>>()?;
        Ok(terms.into_iter().sum())
    }

    pub fn sample(&self, grid: Grid<T>) -> Result<WaveSample<T>> {
        let sign = ket_sign(self.branch);
        let zs: Vec<Complex<T>> = grid.points().into_iter().map(real).collect();
        let mut acc = vec![real(T::zero()); zs.len()];
        for (n, c) in self.coefficients.iter().enumerate() {
            if *c == real(T::zero()) {
                continue;
            }
            let v = resonant_state(ResonantIndex { n, sign, gamma: self.gamma }).eval_many(&zs)?;
            for (a, b) in acc.iter_mut().zip(v) {
                *a += *c * b;
            }
        }
        WaveSample::new(grid, acc)
    }
}

/// Default sampling window for expansions, `[-8, 8]/√γ` with 1024 points.
pub fn default_grid<T: Real>(gamma: T) -> Result<Grid<T>> {
    let l = lit::<T>(8.0) / gamma.sqrt();
    Grid::new(-l, l, 1024)
}

pub fn evolve_minus<T: Real>(phi: &TestFunction<T>, gamma: T, t: T, terms: usize) -> Result<WaveSample<T>> {
    Expansion::new(phi, gamma, Branch::Minus, terms)?.evolve(t)?.sample(default_grid(gamma)?)
}

pub fn evolve_plus<T: Real>(phi: &TestFunction<T>, gamma: T, t: T, terms: usize) -> Result<WaveSample<T>> {
    Expansion::new(phi, gamma, Branch::Plus, terms)?.evolve(t)?.sample(default_grid(gamma)?)
}

/// Five shifted Gaussian probes in the class dual to the branch:
/// `e^{-σ(x - x_k)²}` with `σ = (¼ ± ½i)γ` and `√γ x_k ∈ {-1, -½, 0, ½, 1}`.
pub fn probes<T: Real>(gamma: T, branch: Branch) -> Vec<TestFunction<T>> {
    let im = match branch {
        Branch::Minus => lit::<T>(0.5),
        Branch::Plus => lit::<T>(-0.5),
    };
    let sigma = Complex::new(lit::<T>(0.25), im) * gamma;
    [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|&c| TestFunction::shifted_gaussian(sigma, real(lit::<T>(c) / gamma.sqrt())))
        .collect()
}

/// Spectral oracle: `⟨g|e^{-iĤt}φ⟩ = ∫_{|E|≤E_cut} dE e^{-iEt} Σ_± ⟨g|χ^E_±⟩⟨χ^E_±|φ⟩`.
/// The weights are time independent and computed once.
pub struct SpectralOracle<T> {
    nodes: Vec<(T, T)>,
    weights: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SpectralOracle<T> {
    pub fn new(probes: &[TestFunction<T>], phi: &TestFunction<T>, gamma: T, e_cut: T) -> Result<Self> {
        check_gamma(gamma)?;
        let panels = (e_cut / gamma * lit(2.0)).ceil().to_usize().unwrap_or(1).max(1);
        let nodes = energy_nodes(e_cut, panels, 12);
        let es: Vec<T> = nodes.iter().map(|(e, _)| *e).collect();
        let weights = probes.iter().map(|g| spectral_weights(g, phi, gamma, &es)).collect::<Result<_>>()?;
        Ok(SpectralOracle { nodes, weights })
    }

    pub fn values(&self, t: T) -> Vec<Complex<T>> {
        self.weights
            .iter()
            .map(|w| self.nodes.iter().zip(w).map(|((e, wt), s)| *s * cis(-*e * t) * *wt).sum())
            .collect()
    }
}

/// Symmetric Strang split-step propagator on a periodic grid.
pub struct SplitStep<T: FftNum> {
    pub grid: Grid<T>,
    pub gamma: T,
    pub dt: T,
}

/// Largest propagator size; bounds memory at a few tens of megabytes.
pub const MAX_POINTS: usize = 1 << 20;

impl<T: Real + FftNum> SplitStep<T> {
    /// `x ∈ [-40, 40)/√γ`, `2^14` points, `Δt = 10^{-3}/γ`.
    pub fn standard(gamma: T) -> Result<Self> {
        Self::with_window(gamma, lit::<T>(40.0) / gamma.sqrt(), 1 << 14)
    }

    pub fn with_window(gamma: T, half_width: T, n: usize) -> Result<Self> {
        check_gamma(gamma)?;
        let dx = half_width * lit(2.0) / from_usize(n);
        Ok(SplitStep { grid: Grid::new(-half_width, half_width - dx, n)?, gamma, dt: lit::<T>(1e-3) / gamma })
    }

    /// A window wide enough to hold `φ` up to `|t| ≤ t_max`. The spread is
    /// predicted from the classical flow of the second moments,
    /// `⟨x²⟩(t) = ⟨x²⟩cosh²γt + ⟨p²⟩sinh²γt/γ² + ⟨xp+px⟩ sinhγt coshγt/γ`,
    /// and the half width is seven standard deviations (at least the standard
    /// window). The point count resolves wavenumbers up to `2γL`.
    pub fn for_state(phi: &TestFunction<T>, gamma: T, t_max: T) -> Result<Self> {
        let base = Self::standard(gamma)?;
        let psi = base.initial(phi)?;
        if base.leakage(&psi) > lit(LEAKAGE_LIMIT) {
            return Err(Error::BoundaryLeakage { leakage: base.leakage(&psi).to_f64().unwrap_or(f64::NAN), limit: LEAKAGE_LIMIT });
        }
        let (x2, p2, xp) = base.moments(&psi);
        let a = gamma * t_max.abs();
        let (c, s) = (a.cosh(), a.sinh());
        let var = x2 * c * c + p2 * s * s / (gamma * gamma) + (xp * s * c / gamma).abs();
        let half_width = (var.sqrt() * lit(7.0)).max(lit::<T>(40.0) / gamma.sqrt());
        let need = (lit::<T>(8.0) * gamma * half_width * half_width / T::PI()).to_usize().unwrap_or(usize::MAX);
        let n = need.max(1 << 14).checked_next_power_of_two().unwrap_or(usize::MAX);
        if n > MAX_POINTS {
            return Err(Error::BoundaryLeakage { leakage: f64::NAN, limit: LEAKAGE_LIMIT });
        }
        Self::with_window(gamma, half_width, n)
    }

    fn wavenumbers(&self) -> Vec<T> {
        let n = self.grid.n_points;
        let dk = T::TAU() / (from_usize::<T>(n) * self.grid.dx());
        (0..n).map(|j| if j < n / 2 { from_usize::<T>(j) * dk } else { (from_usize::<T>(j) - from_usize::<T>(n)) * dk }).collect()
    }

    /// Normalized `(⟨x²⟩, ⟨p²⟩, ⟨xp + px⟩)` of a sample.
    pub fn moments(&self, psi: &WaveSample<T>) -> (T, T, T) {
        let n = self.grid.n_points;
        let xs = self.grid.points();
        let ks = self.wavenumbers();
        let mut planner = FftPlanner::<T>::new();
        let mut hat = psi.values.clone();
        planner.plan_fft_forward(n).process(&mut hat);
        let mut dpsi: Vec<Complex<T>> = hat.iter().zip(&ks).map(|(v, k)| *v * Complex::new(T::zero(), *k) / from_usize::<T>(n)).collect();
        planner.plan_fft_inverse(n).process(&mut dpsi);
        let mut norm = T::zero();
        let mut x2 = T::zero();
        let mut p2 = T::zero();
        let mut xp = T::zero();
        for k in 0..n {
            let v = psi.values[k];
            norm += v.norm_sqr();
            x2 += v.norm_sqr() * xs[k] * xs[k];
            p2 += dpsi[k].norm_sqr();
            // ⟨ψ|x(-i∂)ψ⟩ + c.c. = 2 Re(-i x conj(ψ) ψ')
            xp += (v.conj() * dpsi[k] * Complex::new(T::zero(), -xs[k])).re * lit(2.0);
        }
        if norm == T::zero() {
            return (T::zero(), T::zero(), T::zero());
        }
        (x2 / norm, p2 / norm, xp / norm)
    }

    pub fn initial(&self, phi: &TestFunction<T>) -> Result<WaveSample<T>> {
        WaveSample::from_fn(&phi.to_analytic(), self.grid)
    }

    /// Propagates by `t` (either sign) with a step no larger than `dt`.
    pub fn propagate(&self, psi: &WaveSample<T>, t: T) -> Result<WaveSample<T>> {
        if psi.grid != self.grid {
            return Err(Error::Domain("split-step input must live on the propagator grid".into()));
        }
        let steps = (t.abs() / self.dt).ceil().to_usize().unwrap_or(0);
        if steps == 0 {
            return Ok(psi.clone());
        }
        let h = t / from_usize(steps);
        let n = self.grid.n_points;
        let xs = self.grid.points();
        let half_v: Vec<Complex<T>> = xs.iter().map(|x| cis(self.gamma * self.gamma * *x * *x * h * lit(0.25))).collect();
        let inv_n = T::one() / from_usize::<T>(n);
        let kin: Vec<Complex<T>> = self.wavenumbers().into_iter().map(|k| cis(-k * k * h * lit(0.5)) * inv_n).collect();
        let mut planner = FftPlanner::<T>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
        let mut v = psi.values.clone();
        for _ in 0..steps {
            for (a, p) in v.iter_mut().zip(&half_v) {
                *a *= *p;
            }
            fwd.process_with_scratch(&mut v, &mut scratch);
            for (a, p) in v.iter_mut().zip(&kin) {
                *a *= *p;
            }
            inv.process_with_scratch(&mut v, &mut scratch);
            for (a, p) in v.iter_mut().zip(&half_v) {
                *a *= *p;
            }
        }
        WaveSample::new(self.grid, v)
    }

    /// Fraction of `‖ψ‖²` in the outer tenth of the window on each side.
    pub fn leakage(&self, psi: &WaveSample<T>) -> T {
        let n = psi.values.len();
        let edge = n / 10;
        let outer: T = psi.values[..edge].iter().chain(&psi.values[n - edge..]).map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b);
        let total: T = psi.values.iter().map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if total > T::zero() {
            outer / total
        } else {
            T::zero()
        }
    }
}

/// `∫ conj(g) ψ dx` by the rectangle rule on a periodic grid.
pub fn probe_sample<T: Real>(g: &TestFunction<T>, psi: &WaveSample<T>) -> Complex<T> {
    let dx = psi.grid.dx();
    psi.grid.points().iter().zip(&psi.values).map(|(x, v)| g.eval(*x).conj() * *v).sum::<Complex<T>>() * dx
}

/// Four-point Lagrange interpolation of a sample onto another grid.
pub fn resample<T: Real>(psi: &WaveSample<T>, grid: Grid<T>) -> Result<WaveSample<T>> {
    let src = &psi.grid;
    let dx = src.dx();
    let n = src.n_points;
    let values = grid
        .points()
        .iter()
        .map(|&x| {
            let s = (x - src.x_min) / dx;
            if s < T::zero() || s > from_usize(n - 1) {
                return Err(Error::Domain("target grid extends beyond the propagated window".into()));
            }
            let k = s.floor().to_usize().unwrap_or(0).clamp(1, n.saturating_sub(3));
            let u = s - from_usize(k);
            let nodes = [-1.0, 0.0, 1.0, 2.0].map(lit::<T>);
            let mut acc = real(T::zero());
            for (a, &na) in nodes.iter().enumerate() {
                let mut w = T::one();
                for (b, &nb) in nodes.iter().enumerate() {
                    if a != b {
                        w *= (u - nb) / (na - nb);
                    }
                }
                acc += psi.values[k + a - 1] * w;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    WaveSample::new(grid, values)
}

/// Unitary reference evolution accepted only when both oracles agree.
#[derive(Debug, Clone)]
pub struct SpectralEvolution<T> {
    pub sample: WaveSample<T>,
    /// Probe values `⟨g_k|φ(t)⟩` from the split-step oracle.
    pub probe_values: Vec<Complex<T>>,
    pub oracle_deviation: T,
    pub leakage: T,
    pub norm: T,
}

pub const ORACLE_LIMIT: f64 = 1e-5;
pub const LEAKAGE_LIMIT: f64 = 1e-6;

/// Reference oracles for one initial state and one probe set, reusable
/// across times.
pub struct Reference<T: FftNum> {
    pub gamma: T,
    pub probes: Vec<TestFunction<T>>,
    spectral: SpectralOracle<T>,
    stepper: SplitStep<T>,
    initial: WaveSample<T>,
    t_max: T,
}

impl<T: Real + FftNum> Reference<T> {
    /// Oracles for `|t| ≤ t_max`.
    pub fn new(phi: &TestFunction<T>, gamma: T, probes: Vec<TestFunction<T>>, e_cut: T, t_max: T) -> Result<Self> {
        let stepper = SplitStep::for_state(phi, gamma, t_max)?;
        let initial = stepper.initial(phi)?;
        let spectral = SpectralOracle::new(&probes, phi, gamma, e_cut * gamma)?;
        Ok(Reference { gamma, probes, spectral, stepper, initial, t_max: t_max.abs() })
    }

    pub fn at(&self, t: T) -> Result<SpectralEvolution<T>> {
        if t.abs() * self.gamma > lit(MAX_TIME) || t.abs() > self.t_max {
            return Err(Error::Domain(format!("reference evolution is limited to |t| <= min({MAX_TIME}/gamma, t_max)")));
        }
        let psi = self.stepper.propagate(&self.initial, t)?;
        let leakage = self.stepper.leakage(&psi);
        if leakage > lit(LEAKAGE_LIMIT) {
            return Err(Error::BoundaryLeakage { leakage: leakage.to_f64().unwrap_or(f64::NAN), limit: LEAKAGE_LIMIT });
        }
        let split: Vec<Complex<T>> = self.probes.iter().map(|g| probe_sample(g, &psi)).collect();
        let spec = self.spectral.values(t);
        let deviation = split.iter().zip(&spec).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max);
        if deviation > lit(ORACLE_LIMIT) {
            return Err(Error::OracleDisagreement { deviation: deviation.to_f64().unwrap_or(f64::NAN), limit: ORACLE_LIMIT });
        }
        let norm = (psi.values.iter().map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b) * psi.grid.dx()).sqrt();
        Ok(SpectralEvolution { sample: psi, probe_values: split, oracle_deviation: deviation, leakage, norm })
    }
}

/// `e^{-iĤt}φ` on `grid` (or on the propagator window when `None`).
pub fn evolve_spectral<T: Real + FftNum>(phi: &TestFunction<T>, gamma: T, t: T, grid: Option<Grid<T>>) -> Result<SpectralEvolution<T>> {
    let reference = Reference::new(phi, gamma, probes(gamma, Branch::Minus), lit(DEFAULT_ECUT), t)?;
    let mut out = reference.at(t)?;
    if let Some(g) = grid {
        out.sample = resample(&out.sample, g)?;
    }
    Ok(out)
}

/// Largest probe deviation between two probe vectors.
pub fn probe_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm()).fold(T::zero(), T::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolutionReport {
    pub branch: Branch,
    pub gamma: f64,
    pub terms: usize,
    pub times: Vec<f64>,
    /// Smeared norm `max_k |⟨g_k|φ(t)⟩|`.
    pub norms: Vec<f64>,
    /// `coefficients[i][n]` as `[re, im]` at `times[i]`.
    pub coefficients: Vec<Vec<[f64; 2]>>,
    /// Probe distance to the unitary reference; empty when not requested.
    pub reference_deviation: Vec<f64>,
    pub tail_warning: bool,
}

/// Evolves `φ` on the given branch over `times` and optionally compares
/// every time with the unitary reference.
pub fn evolution_report<T: Real + FftNum>(
    phi: &TestFunction<T>,
    gamma: T,
    branch: Branch,
    times: &[T],
    terms: usize,
    with_reference: bool,
) -> Result<(EvolutionReport, Vec<Expansion<T>>)> {
    let base = Expansion::new(phi, gamma, branch, terms)?;
    let probe_set = probes(gamma, branch);
    let t_max = times.iter().fold(T::zero(), |a, t| a.max(t.abs()));
    let reference = if with_reference { Some(Reference::new(phi, gamma, probe_set.clone(), lit(DEFAULT_ECUT), t_max)?) } else { None };
    let to = |v: T| v.to_f64().unwrap_or(f64::NAN);
    let mut report = EvolutionReport {
        branch,
        gamma: to(gamma),
        terms,
        times: Vec::new(),
        norms: Vec::new(),
        coefficients: Vec::new(),
        reference_deviation: Vec::new(),
        tail_warning: base.tail_warning,
    };
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let e = base.evolve(t)?;
        let values = probe_set.iter().map(|g| e.pair(g)).collect::<Result<Vec<_>>>()?;
        report.times.push(to(t));
        report.norms.push(to(values.iter().map(|v| v.norm()).fold(T::zero(), T::max)));
        report.coefficients.push(e.coefficients.iter().map(|c| [to(c.re), to(c.im)]).collect());
        if let Some(r) = &reference {
            let s = r.at(t)?;
            report.reference_deviation.push(to(probe_distance(&values, &s.probe_values)));
        }
        states.push(e);
    }
    Ok((report, states))
}

/// Least-squares slope of `-log(norm)` against time.
pub fn decay_rate(times: &[f64], norms: &[f64]) -> Result<f64> {
    if times.len() < 2 || times.len() != norms.len() || norms.iter().any(|v| *v <= 0.0) {
        return Err(Error::Fit("decay fit needs at least two positive norms".into()));
    }
    let n = times.len() as f64;
    let ys: Vec<f64> = norms.iter().map(|v| -v.ln()).collect();
    let mt = times.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = times.iter().zip(&ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let sxx: f64 = times.iter().map(|t| (t - mt).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn gauss() -> TestFunction<f64> {
        TestFunction::gaussian(C::new(1.0, 0.0))
    }

    #[test]
    fn parity_and_reconstruction() {
        let e = Expansion::new(&gauss(), 1.0, Branch::Minus, 40).unwrap();
        for n in (1..40).step_by(2) {
            assert!(e.coefficients[n].norm() < 1e-10);
        }
        for g in probes(1.0, Branch::Minus).iter().take(3) {
            let exact = inner_product(&g.to_analytic(), &gauss().to_analytic()).unwrap();
            let dev = (e.pair(g).unwrap() - exact).norm();
            assert!(dev < 1e-6, "{dev}");
        }
    }

    #[test]
    fn semigroup_and_domain() {
        let e = Expansion::new(&gauss(), 1.0, Branch::Minus, 20).unwrap();
        let a = e.evolve(0.7).unwrap().evolve(1.1).unwrap();
        let b = e.evolve(1.8).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((x - y).norm() <= 1e-10 * y.norm().max(1e-300));
        }
        assert!(e.evolve(-0.1).is_err());
        let p = Expansion::new(&gauss(), 1.0, Branch::Plus, 4).unwrap();
        assert!(p.evolve(0.1).is_err());
    }

    #[test]
    fn conjugation_duality() {
        let phi = TestFunction::gaussian(C::new(1.0, -0.3));
        let m = evolve_minus(&phi, 1.0, 0.8, 30).unwrap();
        let p = evolve_plus(&phi.conj(), 1.0, -0.8, 30).unwrap();
        let scale = m.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in m.values.iter().zip(&p.values) {
            assert!((a.conj() - b).norm() < 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn split_step_is_unitary_and_matches_spectral_oracle() {
        let r = Reference::new(&gauss(), 1.0, probes(1.0, Branch::Minus), DEFAULT_ECUT, 1.0).unwrap();
        let s0 = r.at(0.0).unwrap();
        let s1 = r.at(1.0).unwrap();
        assert!((s1.norm - s0.norm).abs() < 1e-6 * s0.norm);
        assert!(s1.oracle_deviation < ORACLE_LIMIT);
    }

    #[test]
    fn resampling_reproduces_smooth_data() {
        let phi = gauss();
        let s = SplitStep::standard(1.0).unwrap();
        let psi = s.initial(&phi).unwrap();
        let g = Grid::new(-3.0, 3.0, 101).unwrap();
        let r = resample(&psi, g).unwrap();
        for (x, v) in g.points().iter().zip(&r.values) {
            assert!((phi.eval(*x) - v).norm() < 1e-8);
        }
    }
}
