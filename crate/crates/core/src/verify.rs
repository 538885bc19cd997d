//! Invariant suites. Every check reports a measured deviation next to its
//! tolerance; `paper_ref` carries a one-line statement of the claim checked.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C;
use serde::Serialize;

use crate::distributions::{normalized_power_limit, pair_delta_derivative, pair_u_i0, HalfLine, TestFunction};
use crate::dynamics::{decay_rate, evolution_report, probes, Expansion};
use crate::error::{Error, Result};
use crate::func::inner_product;
use crate::resonance::{
    breit_wigner_fit, fidelity, l2_relative_deviation, projector, residue_closed_form, residue_contour, residue_state_sign,
    resolvent_pole_scan, spectral_integral, spectral_resolution_check, Branch, Family, Rect, Residue,
};
use crate::scattering::{amplitude_poles, amplitudes, asymptotic_chi_minus, resonant_asymptotics_check, Side};
use crate::specfun::{hermite, pcf_value};
use crate::states::{
    chi_state, hamiltonian_apply, resonant_state, transform_u, Grid, ResonantIndex, Sign, UInput, WaveSample,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check_id: String,
    pub paper_ref: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured ≤ tolerance` (NaN fails).
    pub fn new(id: impl Into<String>, claim: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check { check_id: id.into(), paper_ref: claim.into(), measured, tolerance, pass: measured <= tolerance }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: measured {:.3e}, tolerance {:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.measured,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Prop1,
    Prop2,
    Prop3,
    Appendix,
    Unitarity,
    Projectors,
    Dynamics,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Prop1, Suite::Prop2, Suite::Prop3, Suite::Appendix, Suite::Unitarity, Suite::Projectors, Suite::Dynamics];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Prop3 => "prop3",
            Suite::Appendix => "appendix",
            Suite::Unitarity => "unitarity",
            Suite::Projectors => "projectors",
            Suite::Dynamics => "dynamics",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}' (expected one of prop1, prop2, prop3, appendix, unitarity, projectors, dynamics)")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Prop1 => vec![conjugation(10)?, orthonormality(10)?, smeared_completeness(40)?],
        Suite::Prop2 => {
            let mut v = transform_proportionality(5)?;
            v.push(eigenvalue_identity(5)?);
            v
        }
        Suite::Prop3 => vec![energy_completeness()?, residue_deviation(5)?, residue_fidelity(5)?],
        Suite::Appendix => vec![
            pcf_integer_reduction()?,
            pcf_recurrence()?,
            pcf_entirety()?,
            normalized_power_limits()?,
            u_plus_i0_inverse()?,
        ],
        Suite::Unitarity => {
            let mut v = vec![unitarity(200)?, half_reflection()?, amplitude_pole_locations(4)?];
            v.extend(asymptotic_ratios()?);
            v.push(resonant_phase_slopes()?);
            v
        }
        Suite::Projectors => vec![resolvent_poles()?, projector_algebra(6)?, breit_wigner(0)?, breit_wigner(2)?, spectral_resolution()?],
        Suite::Dynamics => dynamics_checks()?,
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { suite, checks, pass })
}

// ---------------------------------------------------------------- specfun

/// `2^{-n/2}|e^{-z²/4}| Σ|h_k||z/√2|^k`, the magnitude scale of the Hermite
/// reduction. The absolute-coefficient sum equals `|H_n(i|y|)|`.
pub fn hermite_envelope(n: usize, z: C) -> f64 {
    let y = z.norm() / std::f64::consts::SQRT_2;
    2f64.powf(-(n as f64) / 2.0) * (-z * z / 4.0).exp().norm() * hermite(n, C::new(0.0, y)).norm()
}

pub fn pcf_integer_reduction() -> Result<Check> {
    let dirs = [C::new(1.0, 0.0), C::from_polar(1.0, std::f64::consts::FRAC_PI_4)];
    let mut worst: f64 = 0.0;
    for n in 0..=20 {
        for d in dirs {
            for k in 0..=40 {
                let z = d * (-5.0 + 0.25 * k as f64);
                let reference = 2f64.powf(-(n as f64) / 2.0) * (-z * z / 4.0).exp() * hermite(n, z / std::f64::consts::SQRT_2);
                let v = pcf_value(C::new(n as f64, 0.0), z)?;
                let scale = reference.norm().max(hermite_envelope(n, z));
                worst = worst.max((v - reference).norm() / scale);
            }
        }
    }
    Ok(Check::new("pcf.integer_reduction", "D_n(z) = 2^{-n/2} e^{-z^2/4} H_n(z/sqrt2)", worst, 1e-10))
}

pub fn pcf_recurrence() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for re in [-4.5, -2.3, -0.7, 0.0, 0.4, 1.6, 3.1] {
        for im in [-3.0, -1.0, 0.0, 1.5, 3.0] {
            let nu = C::new(re, im);
            if nu.norm() > 5.0 {
                continue;
            }
            for r in [0.5, 1.5, 2.5, 4.0] {
                for a in [0.0, 0.25, 0.5, 0.75, 1.0, -1.0 / 3.0] {
                    let z = C::from_polar(r, a * std::f64::consts::PI);
                    let up = pcf_value(nu + 1.0, z)?;
                    let mid = pcf_value(nu, z)? * z;
                    let down = pcf_value(nu - 1.0, z)? * nu;
                    let scale = up.norm().max(mid.norm()).max(down.norm());
                    worst = worst.max((up - mid + down).norm() / scale);
                }
            }
        }
    }
    Ok(Check::new("pcf.recurrence", "D_{v+1}(z) - z D_v(z) + v D_{v-1}(z) = 0", worst, 1e-9))
}

/// `|D_{n±ε} - D_n| ≤ C ε` at `ε = 1e-5`, with `C` measured at `ε = 1e-4`.
/// Reports the largest ratio of the observed change to the predicted bound.
pub fn pcf_entirety() -> Result<Check> {
    let zs = [C::new(0.7, 0.0), C::new(1.5, 0.5), C::from_polar(2.5, std::f64::consts::FRAC_PI_4), C::new(-1.2, 0.0)];
    let mut worst: f64 = 0.0;
    for n in 0..=3 {
        for z in zs {
            let base = pcf_value(C::new(n as f64, 0.0), z)?;
            for s in [1.0, -1.0] {
                let big = (pcf_value(C::new(n as f64 + s * 1e-4, 0.0), z)? - base).norm() / 1e-4;
                let small = (pcf_value(C::new(n as f64 + s * 1e-5, 0.0), z)? - base).norm();
                let bound = big * 1e-5;
                worst = worst.max(small / bound.max(1e-300));
            }
        }
    }
    Ok(Check::new("pcf.entirety", "D_v(z) is entire in v (continuity across integer orders)", worst, 1.1))
}

// ---------------------------------------------------------------- states

fn grid(a: f64, b: f64, n: usize) -> Result<Grid<f64>> {
    Grid::new(a, b, n)
}

fn state(n: usize, sign: Sign, gamma: f64) -> crate::func::Analytic<f64> {
    resonant_state(ResonantIndex { n, sign, gamma })
}

pub fn conjugation(n_max: usize) -> Result<Check> {
    let g = grid(-6.0, 6.0, 241)?;
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        let p = WaveSample::from_fn(&state(n, Sign::Plus, 1.0), g)?;
        let m = WaveSample::from_fn(&state(n, Sign::Minus, 1.0), g)?;
        let scale = p.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in p.values.iter().zip(&m.values) {
            worst = worst.max((a.conj() - b).norm() / scale);
        }
    }
    Ok(Check::new("prop1.conjugation", "conj f+_n(x) = f-_n(x)", worst, 4.0 * f64::EPSILON))
}

pub fn orthonormality(n_max: usize) -> Result<Check> {
    use rayon::prelude::*;
    let pairs: Vec<(usize, usize, Sign)> =
        (0..=n_max).flat_map(|n| (0..=n_max).flat_map(move |m| [(n, m, Sign::Plus), (n, m, Sign::Minus)])).collect();
    let devs = pairs
        .par_iter()
        .map(|&(n, m, s)| {
            let v = inner_product(&state(n, s, 1.0), &state(m, s.flip(), 1.0))?;
            Ok((v - if n == m { 1.0 } else { 0.0 }).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Check::new("prop1.orthonormality", "<f(+-)_n|f(-+)_m> = delta_nm", devs.into_iter().fold(0.0, f64::max), 1e-8))
}

/// `Σ_{n<N} ⟨g|f̃∓_n⟩⟨f̃±_n|h⟩ → ⟨g|h⟩` for three Gaussian pairs per branch.
pub fn smeared_completeness(terms: usize) -> Result<Check> {
    let kets = [
        TestFunction::gaussian(C::new(1.0, 0.0)),
        TestFunction::gaussian(C::new(0.8, -0.4)),
        TestFunction::shifted_gaussian(C::new(1.0, 0.0), C::new(0.3, 0.0)),
    ];
    let mut worst: f64 = 0.0;
    for branch in [Branch::Minus, Branch::Plus] {
        let bras = probes(1.0, branch);
        for (k, h) in kets.iter().enumerate() {
            let h = if branch == Branch::Plus { h.conj() } else { h.clone() };
            let g = &bras[k + 1];
            let e = Expansion::new(&h, 1.0, branch, terms)?;
            let exact = inner_product(&g.to_analytic(), &h.to_analytic())?;
            worst = worst.max((e.pair(g)? - exact).norm() / exact.norm());
        }
    }
    Ok(Check::new("prop1.completeness", "sum_n |f(-+)_n><f(+-)_n| = 1 on Gaussian pairs", worst, 1e-6))
}

/// Standard deviation of a pointwise ratio relative to its mean modulus,
/// over points where the denominator is not small.
pub fn ratio_spread(a: &[C], b: &[C]) -> (C, f64) {
    let r: Vec<C> = a.iter().zip(b).filter(|(_, d)| d.norm() > 1e-3).map(|(x, y)| x / y).collect();
    let mean = r.iter().sum::<C>() / r.len() as f64;
    let var = r.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / r.len() as f64;
    (mean, var.sqrt() / mean.norm())
}

pub fn transform_proportionality(n_max: usize) -> Result<Vec<Check>> {
    let g = grid(-3.0, 3.0, 41)?;
    let (mut mono, mut delta): (f64, f64) = (0.0, 0.0);
    for n in 0..=n_max {
        let fp = WaveSample::from_fn(&state(n, Sign::Plus, 1.0), g)?;
        let fm = WaveSample::from_fn(&state(n, Sign::Minus, 1.0), g)?;
        mono = mono.max(ratio_spread(&transform_u(&UInput::Monomial(n), g, 1.0)?.values, &fp.values).1);
        delta = delta.max(ratio_spread(&transform_u(&UInput::Delta(n), g, 1.0)?.values, &fm.values).1);
    }
    Ok(vec![
        Check::new("prop2.monomial", "U u^n is proportional to f+_n", mono, 1e-6),
        Check::new("prop2.delta", "U delta^(n) is proportional to f-_n", delta, 1e-6),
    ])
}

/// Relative L² residual of `Ĥf̃±_n = ±iγ(n+½)f̃±_n` on `|x| ≤ 4`.
pub fn eigenvalue_identity(n_max: usize) -> Result<Check> {
    let g = grid(-8.0, 8.0, 4096)?;
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        for sign in [Sign::Plus, Sign::Minus] {
            let idx = ResonantIndex { n, sign, gamma: 1.0 };
            let f = WaveSample::from_fn(&resonant_state(idx), g)?;
            let hf = hamiltonian_apply(&f, 1.0)?;
            let e = idx.energy() * sign.factor::<f64>();
            let (mut num, mut den) = (0.0, 0.0);
            for (k, x) in g.points().into_iter().enumerate() {
                if x.abs() <= 4.0 {
                    num += (hf.values[k] - e * f.values[k]).norm_sqr();
                    den += (e * f.values[k]).norm_sqr();
                }
            }
            worst = worst.max((num / den).sqrt());
        }
    }
    Ok(Check::new("prop2.eigenvalue", "H f(+-)_n = (+-)i gamma (n+1/2) f(+-)_n", worst, 1e-6))
}

// ---------------------------------------------------------------- resonance

pub fn energy_completeness() -> Result<Check> {
    let pairs = [
        (TestFunction::gaussian(C::new(0.5, 0.0)), TestFunction::gaussian(C::new(0.8, 0.3))),
        (TestFunction::shifted_gaussian(C::new(0.7, 0.0), C::new(0.4, 0.0)), TestFunction::gaussian(C::new(0.6, -0.2))),
    ];
    let mut worst: f64 = 0.0;
    for (g, h) in &pairs {
        let v = spectral_integral(g, h, 1.0, None, 20.0)?;
        let exact = inner_product(&g.to_analytic(), &h.to_analytic())?;
        worst = worst.max((v - exact).norm() / exact.norm());
    }
    Ok(Check::new("prop3.completeness", "sum over +- of the integral dE |chi^E><chi^E| = 1", worst, 1e-4))
}

fn residue_cases(n_max: usize) -> Result<Vec<(f64, f64)>> {
    use rayon::prelude::*;
    let grid = grid(-5.0, 5.0, 201)?;
    let cases: Vec<(Family, Sign, usize)> = (0..=n_max)
        .flat_map(|n| [(Family::Chi, Sign::Plus, n), (Family::Chi, Sign::Minus, n), (Family::Eta, Sign::Plus, n), (Family::Eta, Sign::Minus, n)])
        .collect();
    cases
        .par_iter()
        .map(|&(family, sign, n)| {
            let est = residue_contour(family, sign, n, 1.0, grid, None, 128)?;
            let Residue::Wave(w) = &est.residue else {
                return Err(Error::Domain("expected a sampled residue".into()));
            };
            let exact = residue_closed_form(family, sign, n, 1.0, grid)?;
            let f = WaveSample::from_fn(&state(n, residue_state_sign(family), 1.0), grid)?;
            Ok((l2_relative_deviation(w, &exact), 1.0 - fidelity(w, &f)))
        })
        .collect()
}

pub fn residue_deviation(n_max: usize) -> Result<Check> {
    let worst = residue_cases(n_max)?.into_iter().map(|c| c.0).fold(0.0, f64::max);
    Ok(Check::new("residues.closed_form", "contour residues of chi at -E_n and eta at +E_n equal the D_n closed forms", worst, 1e-6))
}

pub fn residue_fidelity(n_max: usize) -> Result<Check> {
    let worst = residue_cases(n_max)?.into_iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(Check::new("residues.fidelity", "residues are proportional to resonant states (1 - fidelity)", worst, 1e-8))
}

pub fn resolvent_poles() -> Result<Check> {
    let g = TestFunction::shifted_gaussian(C::new(0.5, -0.5), C::new(0.4, 0.0));
    let h = TestFunction::shifted_gaussian(C::new(0.5, 0.5), C::new(-0.3, 0.1));
    let poles = resolvent_pole_scan(&g, &h, 1.0, Branch::Plus, 40, Rect { re: (-1.0, 1.0), im: (0.0, 5.0) })?;
    let worst = if poles.len() != 5 {
        f64::INFINITY
    } else {
        poles.iter().enumerate().map(|(n, p)| (p.location - C::new(0.0, n as f64 + 0.5)).norm()).fold(0.0, f64::max)
    };
    Ok(Check::new("resolvent.poles", "resolvent poles at i gamma (n+1/2), n <= 4", worst, 1e-4))
}

pub fn projector_algebra(size: usize) -> Result<Check> {
    let grid = grid(-4.0, 4.0, 161)?;
    let ps = (0..size).map(|n| projector(n, 1.0, grid)).collect::<Result<Vec<_>>>()?;
    let phis = [
        TestFunction::gaussian(C::new(0.5, 0.0)),
        TestFunction::gaussian(C::new(0.7, -0.2)),
        TestFunction::shifted_gaussian(C::new(0.6, 0.1), C::new(0.3, 0.0)),
    ];
    let mut worst: f64 = 0.0;
    for phi in &phis {
        let a = phi.to_analytic();
        for pm in &ps {
            let pm_phi = pm.apply(&a)?;
            let cm = pm.coefficient(&a)?;
            for pn in &ps {
                let cn = pn.coefficient(&pm_phi)?;
                let expect = if pn.n == pm.n { cm } else { C::new(0.0, 0.0) };
                worst = worst.max((cn - expect).norm() / cm.norm().max(1e-300));
            }
        }
    }
    Ok(Check::new("projectors.algebra", "P_n P_m = delta_nm P_n", worst, 1e-8))
}

/// Breit-Wigner pole of the `n`-th resonance fitted from real-energy overlaps.
pub fn breit_wigner(n: usize) -> Result<Check> {
    let (half, count, tol) = if n == 0 { (1.0, 61, 1e-4) } else { (n as f64 + 1.0, 81, 1e-3) };
    let es: Vec<f64> = (0..count).map(|k| -half + 2.0 * half * k as f64 / (count - 1) as f64).collect();
    let p = breit_wigner_fit(n, 1.0, &es)?;
    let dev = (p.location - C::new(0.0, n as f64 + 0.5)).norm();
    Ok(Check::new(format!("breit_wigner.n{n}"), "overlap <chi^E|f+_n> has a pole at E_n", dev, tol))
}

pub fn spectral_resolution() -> Result<Check> {
    let g = TestFunction::gaussian(C::new(0.5, -0.5));
    let h = TestFunction::gaussian(C::new(0.5, 0.5));
    let r = spectral_resolution_check(&h, &g, 1.0, Branch::Minus, 40)?;
    Ok(Check::new("resolution.hamiltonian", "<g|H h> = sum_n (-E_n) <g|f-_n><f+_n|h>", r.deviation, 1e-6))
}

// ---------------------------------------------------------------- scattering

pub fn unitarity(count: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for k in 0..count {
        let e = -10.0 + 20.0 * k as f64 / (count - 1) as f64;
        for family in [Family::Chi, Family::Eta] {
            let a = amplitudes(e, 1.0, family)?;
            worst = worst.max((a.reflection_probability() + a.transmission_probability() - 1.0).abs());
        }
    }
    Ok(Check::new("scattering.unitarity", "|R|^2 + |T|^2 = 1", worst, 1e-12))
}

pub fn half_reflection() -> Result<Check> {
    let a = amplitudes(0.0_f64, 1.0, Family::Chi)?;
    Ok(Check::new("scattering.r0", "|R(0)|^2 = 1/2", (a.reflection_probability() - 0.5).abs(), 1e-12))
}

pub fn amplitude_pole_locations(n_max: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (family, s) in [(Family::Chi, -1.0), (Family::Eta, 1.0)] {
        for (n, p) in amplitude_poles(1.0, n_max, family)?.iter().enumerate() {
            worst = worst.max((p.location - C::new(0.0, s * (n as f64 + 0.5))).norm());
        }
    }
    Ok(Check::new("scattering.poles", "R and T have poles at -E_n (chi) and +E_n (eta)", worst, 1e-6))
}

/// `| |χ^E_-(x)/asymptotic| - 1 |` at `√γx = 20`, one check per energy.
pub fn asymptotic_ratios() -> Result<Vec<Check>> {
    [-1.0, 0.0, 1.0]
        .into_iter()
        .map(|e| {
            let x = 20.0;
            let chi = chi_state(C::new(e, 0.0), Sign::Minus, 1.0)?.at(x)?;
            let asy = asymptotic_chi_minus(e, 1.0, x, Side::PlusInf)?;
            Ok(Check::new(format!("asymptotics.ratio_e{e:+}"), "chi^E_- tends to its outgoing asymptotic form", ((chi / asy).norm() - 1.0).abs(), 1e-3))
        })
        .collect()
}

/// Counts resonant states whose phase slope has the wrong sign or is off
/// by more than 1% from `∓γx`.
pub fn resonant_phase_slopes() -> Result<Check> {
    let mut bad = 0usize;
    for n in 0..=3 {
        for (sign, out) in [(Sign::Minus, true), (Sign::Plus, false)] {
            let r = resonant_asymptotics_check(n, sign, 1.0, 15.0)?;
            if r.outgoing != out || (r.phase_slope - r.expected_slope).abs() > 0.01 * r.expected_slope.abs() {
                bad += 1;
            }
        }
    }
    Ok(Check::new("asymptotics.phase_slopes", "f-_n is outgoing and f+_n ingoing", bad as f64, 0.0))
}

// ---------------------------------------------------------------- dynamics

pub fn dynamics_checks() -> Result<Vec<Check>> {
    let phi = TestFunction::gaussian(C::new(1.0, 0.0));
    let (report, _) = evolution_report(&phi, 1.0, Branch::Minus, &[0.5, 1.0, 2.0, 3.0], 60, true)?;
    let dev = report.reference_deviation.iter().copied().fold(0.0, f64::max);
    let ts: Vec<f64> = (0..=12).map(|k| 3.0 + 0.25 * k as f64).collect();
    let (late, _) = evolution_report(&phi, 1.0, Branch::Minus, &ts, 60, false)?;
    let rate = decay_rate(&late.times, &late.norms)?;
    let base = Expansion::new(&phi, 1.0, Branch::Minus, 60)?;
    let a = base.evolve(0.7)?.evolve(1.1)?;
    let b = base.evolve(1.8)?;
    let semigroup = a
        .coefficients
        .iter()
        .zip(&b.coefficients)
        .map(|(x, y)| (x - y).norm() / y.norm().max(f64::MIN_POSITIVE))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    Ok(vec![
        Check::new("dynamics.reference", "U_-(t) expansion matches unitary evolution on probes", dev, 1e-4),
        Check::new("dynamics.decay_rate", "leading decay rate gamma/2 (relative error)", (rate / 0.5 - 1.0).abs(), 0.02),
        Check::new("dynamics.semigroup", "U_-(t1 + t2) = U_-(t2) U_-(t1)", semigroup, 1e-10),
    ])
}

// ---------------------------------------------------------------- distributions

fn appendix_functions() -> Vec<TestFunction<f64>> {
    vec![
        TestFunction::gaussian(C::new(1.0, 0.0)),
        TestFunction::gaussian_moment(1, C::new(0.7, 0.0)),
        TestFunction::shifted_gaussian(C::new(0.8, 0.0), C::new(0.3, 0.0)),
        TestFunction::new(vec![C::new(1.0, 0.0), C::new(0.5, 0.0), C::new(-0.2, 0.0)], C::new(0.6, 0.2), C::new(0.1, 0.0)),
        TestFunction::gaussian(C::new(1.5, -0.5)),
    ]
}

/// `ξ_+^{-n-1}/Γ(-n) → δ^{(n)}` and `ξ_-^{-n-1}/Γ(-n) → (-1)^n δ^{(n)}`.
pub fn normalized_power_limits() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for phi in appendix_functions() {
        for n in 0..=3 {
            let d = pair_delta_derivative(n, &phi);
            let scale = d.norm().max(1.0);
            let p = normalized_power_limit(n, &phi, HalfLine::Plus)?.value;
            let m = normalized_power_limit(n, &phi, HalfLine::Minus)?.value;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            worst = worst.max((p - d).norm() / scale).max((m - d * sign).norm() / scale);
        }
    }
    Ok(Check::new("appendix.integer_limits", "normalized powers at negative integers give delta derivatives", worst, 1e-6))
}

pub fn u_plus_i0_inverse() -> Result<Check> {
    let v = pair_u_i0(C::new(-1.0, 0.0), &TestFunction::gaussian(C::new(1.0, 0.0)))?.value;
    Ok(Check::new("appendix.u_plus_i0", "<(u+i0)^{-1}, e^{-u^2}> = -i pi", (v - C::new(0.0, -std::f64::consts::PI)).norm(), 1e-8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("unknown".parse::<Suite>().is_err());
    }

    #[test]
    fn check_pass_rule() {
        assert!(Check::new("a", "b", 1e-9, 1e-8).pass);
        assert!(!Check::new("a", "b", f64::NAN, 1e-8).pass);
        let j = serde_json::to_value(Check::new("a", "b", 0.5, 1.0)).unwrap();
        for key in ["check_id", "paper_ref", "measured", "tolerance", "pass"] {
            assert!(j.get(key).is_some());
        }
    }

    #[test]
    fn envelope_bounds_the_reduction() {
        let z = C::new(1.0, 0.0);
        let reference = 0.5 * (-z * z / 4.0).exp() * hermite(2, z / std::f64::consts::SQRT_2);
        assert!(reference.norm() < 1e-15);
        assert!(hermite_envelope(2, z) > 0.1);
    }

    #[test]
    fn appendix_checks_pass() {
        assert!(normalized_power_limits().unwrap().pass);
        assert!(u_plus_i0_inverse().unwrap().pass);
    }
}
