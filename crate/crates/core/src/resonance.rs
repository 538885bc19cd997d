//! Poles of the continued eigenfunctions and of the resolvent.
//!
//! The energy eigenfunctions continue to meromorphic functions of `E`:
//! `χ^E_±` has simple poles at `-E_n` and `η^E_±` at `+E_n`. This module
//! extracts the residues by contour integration, builds the resolvent from
//! resonance sums, locates poles by the argument principle, and fits the
//! Breit-Wigner form of the overlap `⟨χ^E_-|f̃⁺_n⟩`.

use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::TestFunction;
use crate::error::{Error, Result};
use crate::func::{inner_product, Analytic};
use crate::quad::{gauss_legendre, tanh_sinh};
use crate::rational::aaa;
use crate::scalar::{cis, from_usize, i, lit, real, Real};
use crate::specfun::{gamma, hermite, pcf_value};
use crate::states::{
    c0, check_gamma, chi_state, eta_state_direct, nu_of_energy, osc_eigenstate, resonance_energy, resonant_state,
    Grid, ResonantIndex, Sign, WaveSample,
};

/// Which eigenfunction family a residue is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Chi,
    Eta,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi" => Ok(Family::Chi),
            "eta" => Ok(Family::Eta),
            _ => Err(Error::Domain(format!("unknown family '{s}' (expected chi or eta)"))),
        }
    }
}

/// Resonance-sum branch of the resolvent: `minus` sums over `f̃⁻_n` with
/// poles at `-E_n`, `plus` over `f̃⁺_n` with poles at `+E_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Minus,
    Plus,
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(Branch::Minus),
            "plus" => Ok(Branch::Plus),
            _ => Err(Error::Domain(format!("unknown branch '{s}' (expected minus or plus)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleMethod {
    Contour,
    Fit,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Residue<T> {
    Scalar(Complex<T>),
    Wave(WaveSample<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleEstimate<T> {
    pub location: Complex<T>,
    pub residue: Residue<T>,
    pub est_error: T,
    pub method: PoleMethod,
}

/// Value of a continued eigenfunction together with a proximity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Continued<T> {
    pub value: Complex<T>,
    /// Index `n` of a pole `-E_n` closer than `1e-3 γ`, if any.
    pub near_pole: Option<usize>,
}

/// Index and distance of the pole `-E_n` of `χ` closest to `ec`.
pub fn nearest_chi_pole<T: Real>(ec: Complex<T>, gamma: T) -> (usize, T) {
    let k = (-ec.im / gamma - lit(0.5)).round().max(T::zero());
    let n = k.to_usize().unwrap_or(0);
    (n, (ec + resonance_energy(n, gamma)).norm())
}

/// `χ^{E_c}_±(x)` for complex energy, flagging proximity to a pole.
pub fn chi_continued<T: Real>(ec: Complex<T>, sign: Sign, gamma: T, x: Complex<T>) -> Result<Continued<T>> {
    let (n, dist) = nearest_chi_pole(ec, gamma);
    let value = chi_state(ec, sign, gamma)?.eval(x)?;
    let near_pole = if dist < gamma * lit(1e-3) { Some(n) } else { None };
    Ok(Continued { value, near_pole })
}

/// Closed-form residue in `E` of `χ^E_±` at `-E_n` (family chi) or of
/// `η^E_±` at `+E_n` (family eta), sampled on `grid`.
///
/// The `E`-residue carries a factor `±iγ` relative to the `ν`-residue of
/// the Gamma function: `Res_E χ^E_± = iγ (C_0/√(2πγ)) ((-1)^n/n!) √i^{-n-½}
/// D_n(∓√(-2iγ)x)` and `Res_E η^E_± = -iγ (C_0/√(2πγ)) ((-1)^n/n!)
/// √i^{n+½} D_n(∓√(2iγ)x)`.
pub fn residue_closed_form<T: Real>(family: Family, sign: Sign, n: usize, gamma: T, grid: Grid<T>) -> Result<WaveSample<T>> {
    check_gamma(gamma)?;
    let mut fact = T::one();
    for k in 2..=n {
        fact *= from_usize::<T>(k);
    }
    let alt = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    let base = c0(gamma) / (T::TAU() * gamma).sqrt() * alt / fact;
    let nh = from_usize::<T>(n) + lit(0.5);
    let (k, c) = match family {
        Family::Chi => (
            i::<T>() * gamma * cis(-nh * T::FRAC_PI_4()) * base,
            Complex::new(T::zero(), -lit::<T>(2.0) * gamma).sqrt(),
        ),
        Family::Eta => (
            -i::<T>() * gamma * cis(nh * T::FRAC_PI_4()) * base,
            Complex::new(T::zero(), lit::<T>(2.0) * gamma).sqrt(),
        ),
    };
    let c = c * (-sign.factor::<T>());
    let scale = lit::<T>(2.0).powf(-from_usize::<T>(n) * lit(0.5));
    let values = grid
        .points()
        .into_iter()
        .map(|x| {
            let z = c * x;
            k * (-(z * z) / lit::<T>(4.0)).exp() * hermite(n, z / lit::<T>(2.0).sqrt()) * scale
        })
        .collect();
    WaveSample::new(grid, values)
}

/// Resonant state proportional to the residue: `f̃⁻_n` for chi, `f̃⁺_n` for eta.
pub fn residue_state_sign(family: Family) -> Sign {
    match family {
        Family::Chi => Sign::Minus,
        Family::Eta => Sign::Plus,
    }
}

/// `(1/2πi) ∮ family dE` on the circle `|E ∓ E_n| = radius`, trapezoid rule
/// with `nodes` points; the error estimate compares against half the nodes.
pub fn residue_contour<T: Real>(
    family: Family,
    sign: Sign,
    n: usize,
    gamma: T,
    grid: Grid<T>,
    radius: Option<T>,
    nodes: usize,
) -> Result<PoleEstimate<T>> {
    check_gamma(gamma)?;
    let r = radius.unwrap_or(gamma * lit(0.25));
    if !(r > T::zero()) {
        return Err(Error::Domain("contour radius must be positive".into()));
    }
    if r >= gamma * lit(0.5) {
        return Err(Error::ContourCount { found: 2, expected: 1 });
    }
    if nodes < 8 || !nodes.is_multiple_of(2) {
        return Err(Error::Domain("contour needs an even number (>= 8) of nodes".into()));
    }
    let en = resonance_energy(n, gamma);
    let center = match family {
        Family::Chi => -en,
        Family::Eta => en,
    };
    let xs: Vec<Complex<T>> = grid.points().into_iter().map(real).collect();
    let samples: Vec<Vec<Complex<T>>> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let phase = cis(T::TAU() * from_usize::<T>(k) / from_usize::<T>(nodes));
            let e = center + phase * r;
            let f = match family {
                Family::Chi => chi_state(e, sign, gamma)?,
                Family::Eta => eta_state_direct(e, sign, gamma)?,
            };
            Ok(f.eval_many(&xs)?.into_iter().map(|v| v * phase).collect())
        })
        .collect::<Result<_>>()?;
    let combine = |stride: usize| -> Vec<Complex<T>> {
        let count = from_usize::<T>(nodes / stride);
        (0..xs.len())
            .map(|j| samples.iter().step_by(stride).map(|s| s[j]).sum::<Complex<T>>() * r / count)
            .collect()
    };
    let full = combine(1);
    let half = combine(2);
    let wave = WaveSample::new(grid, full)?;
    let coarse = WaveSample::new(grid, half)?;
    let est = l2_relative_deviation(&coarse, &wave);
    Ok(PoleEstimate { location: center, residue: Residue::Wave(wave), est_error: est, method: PoleMethod::Contour })
}

/// `‖a - b‖ / ‖b‖` in the grid L² norm.
pub fn l2_relative_deviation<T: Real>(a: &WaveSample<T>, b: &WaveSample<T>) -> T {
    let diff = WaveSample { grid: b.grid, values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect() };
    (diff.norm_sqr() / b.norm_sqr()).sqrt()
}

/// `|⟨a|b⟩| / (‖a‖ ‖b‖)` on the grid.
pub fn fidelity<T: Real>(a: &WaveSample<T>, b: &WaveSample<T>) -> T {
    a.dot(b).norm() / (a.norm_sqr() * b.norm_sqr()).sqrt()
}

/// Bra and ket resonant families of a resolvent branch.
fn branch_families(branch: Branch) -> (Sign, Sign) {
    match branch {
        Branch::Minus => (Sign::Minus, Sign::Plus),
        Branch::Plus => (Sign::Plus, Sign::Minus),
    }
}

/// Pole location of term `n` of a branch.
pub fn branch_pole<T: Real>(branch: Branch, n: usize, gamma: T) -> Complex<T> {
    match branch {
        Branch::Minus => -resonance_energy(n, gamma),
        Branch::Plus => resonance_energy(n, gamma),
    }
}

/// Precomputed numerators `a_n` of the resonance sum
/// `⟨g|R(z)h⟩ = Σ a_n / (pole_n - z)`.
#[derive(Debug, Clone)]
pub struct ResonanceSum<T> {
    pub branch: Branch,
    pub gamma: T,
    pub numerators: Vec<Complex<T>>,
}

impl<T: Real> ResonanceSum<T> {
    /// `a_n = ⟨g|f̃⁻_n⟩⟨f̃⁺_n|h⟩` (minus) or `⟨g|f̃⁺_n⟩⟨f̃⁻_n|h⟩` (plus).
    pub fn new(g: &TestFunction<T>, h: &TestFunction<T>, gamma: T, branch: Branch, terms: usize) -> Result<Self> {
        check_gamma(gamma)?;
        let (left, right) = branch_families(branch);
        let ga = g.to_analytic();
        let ha = h.to_analytic();
        let numerators = (0..terms)
            .into_par_iter()
            .map(|n| {
                let l = resonant_state(ResonantIndex { n, sign: left, gamma });
                let r = resonant_state(ResonantIndex { n, sign: right, gamma });
                Ok(inner_product(&ga, &l)? * inner_product(&r, &ha)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ResonanceSum { branch, gamma, numerators })
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.numerators
            .iter()
            .enumerate()
            .map(|(n, a)| *a / (branch_pole(self.branch, n, self.gamma) - z))
            .sum()
    }

    /// Largest of the last three terms at `z`, a proxy for the truncation error.
    pub fn tail(&self, z: Complex<T>) -> T {
        let n = self.numerators.len();
        (n.saturating_sub(3)..n)
            .map(|k| (self.numerators[k] / (branch_pole(self.branch, k, self.gamma) - z)).norm())
            .fold(T::zero(), T::max)
    }
}

/// Resolvent matrix element with its truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventValue<T> {
    pub value: Complex<T>,
    pub tail: T,
}

/// `⟨g|R(z)h⟩` by the truncated resonance sum of the chosen branch.
///
/// The minus-branch sum represents the resolvent for `Im z > 0` and the
/// plus-branch sum for `Im z < 0` (each continues it across the real axis).
pub fn resolvent_element<T: Real>(
    z: Complex<T>,
    g: &TestFunction<T>,
    h: &TestFunction<T>,
    gamma: T,
    branch: Branch,
    terms: usize,
) -> Result<ResolventValue<T>> {
    for n in 0..terms {
        if (z - branch_pole(branch, n, gamma)).norm() < gamma * lit(1e-6) {
            return Err(Error::Pole { what: "resolvent", location: format!("{z}") });
        }
    }
    let sum = ResonanceSum::new(g, h, gamma, branch, terms)?;
    let value = sum.eval(z);
    let tail = sum.tail(z);
    if tail > lit::<T>(1e-6) * value.norm().max(lit(1e-300)) {
        return Err(Error::Truncation(format!("resonance sum tail {tail} after {terms} terms")));
    }
    Ok(ResolventValue { value, tail })
}

/// Gauss-Legendre nodes and weights on `[-e_cut, e_cut]`.
pub(crate) fn energy_nodes<T: Real>(e_cut: T, panels: usize, order: usize) -> Vec<(T, T)> {
    let (x, w) = gauss_legendre::<T>(order);
    let width = e_cut * lit(2.0) / from_usize::<T>(panels);
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = -e_cut + width * (from_usize::<T>(p) + lit(0.5));
        for k in 0..order {
            out.push((mid + x[k] * width * lit(0.5), w[k] * width * lit(0.5)));
        }
    }
    out
}

/// Spectral weights `Σ_± ⟨g|χ^E_±⟩⟨χ^E_±|h⟩` at the given energies.
pub fn spectral_weights<T: Real>(g: &TestFunction<T>, h: &TestFunction<T>, gamma: T, energies: &[T]) -> Result<Vec<Complex<T>>> {
    let ga = g.to_analytic();
    let ha = h.to_analytic();
    energies
        .par_iter()
        .map(|&e| {
            let mut s = real(T::zero());
            for sign in [Sign::Plus, Sign::Minus] {
                let chi = chi_state(real(e), sign, gamma)?;
                s += inner_product(&ga, &chi)? * inner_product(&chi, &ha)?;
            }
            Ok(s)
        })
        .collect()
}

/// `∫_{|E| ≤ e_cut} dE Σ_± ⟨g|χ^E_±⟩⟨χ^E_±|h⟩ / (E - z)`; with `z = None`
/// the denominator is dropped (completeness integral).
pub fn spectral_integral<T: Real>(
    g: &TestFunction<T>,
    h: &TestFunction<T>,
    gamma: T,
    z: Option<Complex<T>>,
    e_cut: T,
) -> Result<Complex<T>> {
    check_gamma(gamma)?;
    let panels = (e_cut / gamma * lit(2.0)).ceil().to_usize().unwrap_or(1).max(1);
    let nodes = energy_nodes(e_cut, panels, 12);
    let es: Vec<T> = nodes.iter().map(|(e, _)| *e).collect();
    let w = spectral_weights(g, h, gamma, &es)?;
    Ok(nodes
        .iter()
        .zip(&w)
        .map(|((e, wt), s)| match z {
            Some(z) => *s * *wt / (real(*e) - z),
            None => *s * *wt,
        })
        .sum())
}

/// Rank-one projector `P̂_n = |f̃⁺_n⟩⟨f̃⁻_n|`.
#[derive(Clone)]
pub struct RankOneProjector<T> {
    pub n: usize,
    pub gamma: T,
    pub ket: WaveSample<T>,
    pub bra: WaveSample<T>,
    ket_fn: Analytic<T>,
    bra_fn: Analytic<T>,
}

impl<T: Real> RankOneProjector<T> {
    /// `⟨f̃⁻_n|φ⟩`.
    pub fn coefficient(&self, phi: &Analytic<T>) -> Result<Complex<T>> {
        inner_product(&self.bra_fn, phi)
    }

    /// `P̂_n φ = f̃⁺_n ⟨f̃⁻_n|φ⟩` as a function handle.
    pub fn apply(&self, phi: &Analytic<T>) -> Result<Analytic<T>> {
        Ok(self.ket_fn.scaled(self.coefficient(phi)?))
    }

    /// `P̂_n φ` sampled on the projector's grid.
    pub fn apply_sampled(&self, phi: &Analytic<T>) -> Result<WaveSample<T>> {
        let c = self.coefficient(phi)?;
        WaveSample::new(self.ket.grid, self.ket.values.iter().map(|v| *v * c).collect())
    }

    /// `⟨f̃⁻_n|f̃⁺_n⟩`, the trace of the projector.
    pub fn trace(&self) -> Result<Complex<T>> {
        inner_product(&self.bra_fn, &self.ket_fn)
    }

    pub fn ket_fn(&self) -> &Analytic<T> {
        &self.ket_fn
    }
}

pub fn projector<T: Real>(n: usize, gamma: T, grid: Grid<T>) -> Result<RankOneProjector<T>> {
    check_gamma(gamma)?;
    let ket_fn = resonant_state(ResonantIndex { n, sign: Sign::Plus, gamma });
    let bra_fn = resonant_state(ResonantIndex { n, sign: Sign::Minus, gamma });
    Ok(RankOneProjector {
        n,
        gamma,
        ket: WaveSample::from_fn(&ket_fn, grid)?,
        bra: WaveSample::from_fn(&bra_fn, grid)?,
        ket_fn,
        bra_fn,
    })
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub re: (T, T),
    pub im: (T, T),
}

fn winding_segment<T: Real>(
    f: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    a: Complex<T>,
    b: Complex<T>,
    fa: Complex<T>,
    fb: Complex<T>,
    depth: usize,
) -> Result<T> {
    let step = (fb / fa).arg();
    if step.abs() < lit::<T>(0.5) || depth == 0 {
        if depth == 0 && step.abs() >= lit::<T>(0.5) {
            return Err(Error::Quadrature("argument increment unresolved on contour edge".into()));
        }
        return Ok(step);
    }
    let m = (a + b) * lit::<T>(0.5);
    let fm = f(m)?;
    Ok(winding_segment(f, a, m, fa, fm, depth - 1)? + winding_segment(f, m, b, fm, fb, depth - 1)?)
}

/// Winding number of `f` around the rectangle boundary (zeros minus poles).
pub fn winding<T: Real>(f: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync), rect: Rect<T>) -> Result<i64> {
    let corners = [
        Complex::new(rect.re.0, rect.im.0),
        Complex::new(rect.re.1, rect.im.0),
        Complex::new(rect.re.1, rect.im.1),
        Complex::new(rect.re.0, rect.im.1),
    ];
    let mut total = T::zero();
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        // start from 16 sub-segments per edge, refined adaptively
        let mut prev = a;
        let mut fprev = f(a)?;
        for j in 1..=16 {
            let p = a + (b - a) * (from_usize::<T>(j) / lit(16.0));
            let fp = f(p)?;
            total += winding_segment(f, prev, p, fprev, fp, 24)?;
            prev = p;
            fprev = fp;
        }
    }
    Ok((total / T::TAU()).round().to_i64().unwrap_or(0))
}

/// Whether `(1/2πi)∮ f dz` around the rectangle is clearly nonzero compared
/// with the size of `f` on the boundary.
fn boundary_residue_significant<T: Real>(
    f: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    rect: Rect<T>,
) -> Result<bool> {
    let corners = [
        Complex::new(rect.re.0, rect.im.0),
        Complex::new(rect.re.1, rect.im.0),
        Complex::new(rect.re.1, rect.im.1),
        Complex::new(rect.re.0, rect.im.1),
    ];
    let (x, w) = gauss_legendre::<T>(24);
    let mut total = real(T::zero());
    let mut scale = T::zero();
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        let half = (b - a) * lit::<T>(0.5);
        for j in 0..x.len() {
            let v = f((a + b) * lit::<T>(0.5) + half * x[j])?;
            total += v * half * w[j];
            scale += v.norm() * half.norm() * w[j];
        }
    }
    Ok(total.norm() > lit::<T>(1e-6) * scale)
}

/// Contour moments `(1/2πi)∮ f dz` and `(1/2πi)∮ z f dz` on a circle.
fn circle_moments<T: Real>(
    f: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    center: Complex<T>,
    radius: T,
    nodes: usize,
) -> Result<(Complex<T>, Complex<T>)> {
    let mut m0 = real(T::zero());
    let mut m1 = real(T::zero());
    for k in 0..nodes {
        let ph = cis(T::TAU() * from_usize::<T>(k) / from_usize::<T>(nodes));
        let z = center + ph * radius;
        let v = f(z)? * ph * radius / from_usize::<T>(nodes);
        m0 += v;
        m1 += v * z;
    }
    Ok((m0, m1))
}

/// Locates the poles of a meromorphic `f` inside `rect` by the argument
/// principle: cells with negative winding are subdivided (3×3, so a pole
/// at a cell centre never lands on an edge) down to `min_size`, then each
/// pole is refined from circle moments `m1/m0`.
pub fn argument_principle_scan<T: Real>(
    f: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    rect: Rect<T>,
    cells: (usize, usize),
    min_size: T,
) -> Result<Vec<PoleEstimate<T>>> {
    let (nx, ny) = cells;
    let dx = (rect.re.1 - rect.re.0) / from_usize::<T>(nx);
    let dy = (rect.im.1 - rect.im.0) / from_usize::<T>(ny);
    let mut work: Vec<Rect<T>> = Vec::new();
    for a in 0..nx {
        for b in 0..ny {
            let x0 = rect.re.0 + dx * from_usize::<T>(a);
            let y0 = rect.im.0 + dy * from_usize::<T>(b);
            work.push(Rect { re: (x0, x0 + dx), im: (y0, y0 + dy) });
        }
    }
    let mut found: Vec<PoleEstimate<T>> = Vec::new();
    while let Some(cell) = work.pop() {
        let w = winding(f, cell)?;
        let wx = cell.re.1 - cell.re.0;
        let wy = cell.im.1 - cell.im.0;
        // A pole paired with a nearby zero leaves the winding at zero; the
        // boundary integral of f still sees the pole, so such cells are
        // refined until the two separate.
        let hidden = w == 0 && wx.max(wy) > min_size * lit(0.1) && boundary_residue_significant(f, cell)?;
        if w >= 0 && !hidden {
            continue;
        }
        if wx.max(wy) > min_size || hidden {
            let sx = wx / lit(3.0);
            let sy = wy / lit(3.0);
            for a in 0..3 {
                for b in 0..3 {
                    let x0 = cell.re.0 + sx * from_usize::<T>(a);
                    let y0 = cell.im.0 + sy * from_usize::<T>(b);
                    work.push(Rect { re: (x0, x0 + sx), im: (y0, y0 + sy) });
                }
            }
            continue;
        }
        if w != -1 {
            return Err(Error::ContourCount { found: -w, expected: 1 });
        }
        let mut center = Complex::new((cell.re.0 + cell.re.1) * lit(0.5), (cell.im.0 + cell.im.1) * lit(0.5));
        let mut radius = wx.max(wy);
        let mut residue = real(T::zero());
        let mut err = T::infinity();
        for _ in 0..6 {
            let (m0, m1) = circle_moments(f, center, radius, 64)?;
            let next = m1 / m0;
            err = (next - center).norm();
            center = next;
            residue = m0;
            radius *= lit(0.5);
            if err < lit::<T>(1e-13) * center.norm().max(T::one()) {
                break;
            }
        }
        found.push(PoleEstimate { location: center, residue: Residue::Scalar(residue), est_error: err, method: PoleMethod::Contour });
    }
    found.sort_by(|a, b| {
        (a.location.im, a.location.re).partial_cmp(&(b.location.im, b.location.re)).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(found)
}

/// Pole scan of the resolvent resonance sum for fixed test functions.
pub fn resolvent_pole_scan<T: Real>(
    g: &TestFunction<T>,
    h: &TestFunction<T>,
    gamma: T,
    branch: Branch,
    terms: usize,
    rect: Rect<T>,
) -> Result<Vec<PoleEstimate<T>>> {
    let sum = ResonanceSum::new(g, h, gamma, branch, terms)?;
    let f = move |z: Complex<T>| Ok(sum.eval(z));
    argument_principle_scan(&f, rect, (7, 15), gamma * lit(0.05))
}

/// Pole-carrying overlap `⟨χ^E_-|f̃⁺_n⟩` used for Breit-Wigner fits:
/// `K Γ(-ν) [e^{-iπν/2} + (-1)^n e^{iπν/2}] ∫_0^∞ D_ν(√(2γ) t) ψ_n(t) dt`,
/// the rotated (`x = e^{-iπ/4} t`) half-line form of
/// `Γ(-ν) ∫ D_ν(√(2iγ) x) f̃⁺_n(x) dx`, with `K` the eigenfunction prefactor.
/// Its only pole is at `E = E_n`.
pub fn breit_wigner_overlap<T: Real>(n: usize, energy: T, gamma: T) -> Result<Complex<T>> {
    check_gamma(gamma)?;
    let nu = nu_of_energy(real(energy), gamma);
    let psi = osc_eigenstate(n, gamma)?;
    let scale = (lit::<T>(2.0) * gamma).sqrt();
    let t_max = (lit::<T>(90.0) / gamma).sqrt() + (from_usize::<T>(n) / gamma).sqrt();
    let q = tanh_sinh(
        |t: T| match (pcf_value(nu, real(scale * t)), psi.at(t)) {
            (Ok(d), Ok(p)) => d * p,
            _ => Complex::new(T::nan(), T::nan()),
        },
        T::zero(),
        t_max,
        lit(1e-13),
        lit(1e-300),
    )?;
    let half = i::<T>() * T::FRAC_PI_2() * nu;
    let bracket = (-half).exp() + if n.is_multiple_of(2) { half.exp() } else { -half.exp() };
    let k = (i::<T>() * T::FRAC_PI_4() * (nu + lit::<T>(0.5))).exp() * (c0(gamma) / (T::TAU() * gamma).sqrt());
    let g = gamma_or_inf(-nu);
    Ok(k * g * bracket * q.value * cis(-T::FRAC_PI_8()))
}

fn gamma_or_inf<T: Real>(z: Complex<T>) -> Complex<T> {
    gamma(z).unwrap_or_else(|_| Complex::new(T::infinity(), T::zero()))
}

/// Breit-Wigner fit of `⟨χ^E_-|f̃⁺_n⟩` sampled at real energies.
///
/// The analytic background is absorbed by an adaptive (AAA) rational
/// approximant; the resonance is its upper-half-plane pole with the
/// largest residue whose real part lies inside the sample window.
pub fn breit_wigner_fit<T: Real>(n: usize, gamma: T, energies: &[T]) -> Result<PoleEstimate<T>> {
    check_gamma(gamma)?;
    if energies.len() < 20 {
        return Err(Error::Domain("Breit-Wigner fit needs at least 20 energies".into()));
    }
    let lo = energies.iter().copied().fold(T::infinity(), T::min);
    let hi = energies.iter().copied().fold(T::neg_infinity(), T::max);
    if !(lo < T::zero() && hi > T::zero()) {
        return Err(Error::Domain("energy samples must bracket Re E_n = 0".into()));
    }
    let data: Vec<Complex<T>> =
        energies.par_iter().map(|&e| breit_wigner_overlap(n, e, gamma)).collect::<Result<_>>()?;
    let to64 = |c: Complex<T>| Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN));
    let g64 = gamma.to_f64().unwrap_or(f64::NAN);
    let zs: Vec<Complex64> = energies.iter().map(|e| Complex64::new(e.to_f64().unwrap_or(f64::NAN) / g64, 0.0)).collect();
    let fs: Vec<Complex64> = data.iter().map(|c| to64(*c)).collect();
    let fit = aaa(&zs, &fs, 1e-12, 40)?;
    let fmax = fs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if fit.max_error > 1e-3 * fmax {
        return Err(Error::Fit(format!("rational fit residual {:.3e} exceeds 1e-3 of the data", fit.max_error / fmax)));
    }
    let (lo64, hi64) = (lo.to_f64().unwrap_or(0.0) / g64, hi.to_f64().unwrap_or(0.0) / g64);
    let pole = fit
        .poles()?
        .into_iter()
        .filter(|p| p.location.im > 0.0 && p.location.re >= lo64 && p.location.re <= hi64)
        .max_by(|a, b| a.residue.norm().partial_cmp(&b.residue.norm()).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or_else(|| Error::Fit("no resonance pole in the upper half plane".into()))?;
    // stability: refit without every other sample
    let zs2: Vec<Complex64> = zs.iter().step_by(2).copied().collect();
    let fs2: Vec<Complex64> = fs.iter().step_by(2).copied().collect();
    let est = match aaa(&zs2, &fs2, 1e-12, 40).and_then(|r| r.poles()) {
        Ok(ps) => ps.iter().map(|p| (p.location - pole.location).norm()).fold(f64::INFINITY, f64::min),
        Err(_) => f64::INFINITY,
    };
    let back = |c: Complex64| Complex::new(lit::<T>(c.re), lit::<T>(c.im));
    Ok(PoleEstimate {
        location: back(pole.location) * gamma,
        residue: Residue::Scalar(back(pole.residue) * gamma),
        est_error: lit::<T>(est) * gamma,
        method: PoleMethod::Fit,
    })
}

/// Comparison of `⟨g|Ĥh⟩` by finite differences with a resonance sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralResolutionReport {
    pub finite_difference: (f64, f64),
    pub resonance_sum: (f64, f64),
    pub deviation: f64,
}

/// `⟨g|Ĥh⟩` against `-Σ E_n⟨g|f̃⁻_n⟩⟨f̃⁺_n|h⟩` (minus) or
/// `+Σ E_n⟨g|f̃⁺_n⟩⟨f̃⁻_n|h⟩` (plus).
pub fn spectral_resolution_check<T: Real>(
    g: &TestFunction<T>,
    h: &TestFunction<T>,
    gamma: T,
    branch: Branch,
    terms: usize,
) -> Result<SpectralResolutionReport> {
    let half = g.support_radius().max(h.support_radius());
    let grid = Grid::new(-half, half, 8001)?;
    let hs = WaveSample::from_fn(&h.to_analytic(), grid)?;
    let gs = WaveSample::from_fn(&g.to_analytic(), grid)?;
    let hh = crate::states::hamiltonian_apply(&hs, gamma)?;
    let fd = gs.dot(&hh);
    let (left, right) = branch_families(branch);
    let ga = g.to_analytic();
    let ha = h.to_analytic();
    let terms_v = (0..terms)
        .into_par_iter()
        .map(|n| {
            let l = resonant_state(ResonantIndex { n, sign: left, gamma });
            let r = resonant_state(ResonantIndex { n, sign: right, gamma });
            let e = branch_pole(branch, n, gamma);
            Ok(e * inner_product(&ga, &l)? * inner_product(&r, &ha)?)
        })
        .collect::<Result<Vec<Complex<T>>>>()?;
    let sum: Complex<T> = terms_v.iter().copied().sum();
    let last = terms_v.iter().rev().take(3).map(|t| t.norm()).fold(T::zero(), T::max);
    if last > lit::<T>(1e-6) * sum.norm().max(lit(1e-300)) {
        return Err(Error::Truncation(format!("spectral resolution tail {last} after {terms} terms")));
    }
    let f = |c: Complex<T>| (c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN));
    Ok(SpectralResolutionReport {
        finite_difference: f(fd),
        resonance_sum: f(sum),
        deviation: ((fd - sum).norm() / fd.norm()).to_f64().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn continued_chi_is_analytic() {
        let x = c(0.7, 0.0);
        let a = chi_continued(c(1.1, 0.0), Sign::Plus, 1.0, x).unwrap();
        let b = chi_state(c(1.1, 0.0), Sign::Plus, 1.0).unwrap().eval(x).unwrap();
        assert_eq!(a.value, b);
        let e0 = c(0.3, 0.2);
        let h = 1e-4;
        let f = |e: C| chi_continued(e, Sign::Plus, 1.0, x).unwrap().value;
        let d_dx = (f(e0 + h) - f(e0 - h)) / (2.0 * h);
        let d_dy = (f(e0 + c(0.0, h)) - f(e0 - c(0.0, h))) / (2.0 * h);
        // ∂/∂Ē = (∂x + i∂y)/2
        assert!(((d_dx + c(0.0, 1.0) * d_dy) * 0.5).norm() < 1e-6);
        let pole = c(0.0, -0.5);
        let l1 = (f(pole + 1e-2) * 1e-2).norm();
        let l2 = (f(pole + 1e-4) * 1e-4).norm();
        assert!((l1 - l2).abs() < 2e-2 * l2);
        assert_eq!(chi_continued(pole + 1e-4, Sign::Plus, 1.0, x).unwrap().near_pole, Some(0));
    }

    #[test]
    fn contour_residues_match_closed_forms() {
        let grid = Grid::new(-5.0, 5.0, 201).unwrap();
        for (family, sign, n) in [(Family::Chi, Sign::Plus, 0), (Family::Eta, Sign::Minus, 1), (Family::Chi, Sign::Minus, 5), (Family::Eta, Sign::Plus, 3)] {
            let est = residue_contour(family, sign, n, 1.0, grid, None, 128).unwrap();
            let Residue::Wave(w) = &est.residue else { panic!() };
            let exact = residue_closed_form(family, sign, n, 1.0, grid).unwrap();
            let dev = l2_relative_deviation(w, &exact);
            let f = WaveSample::from_fn(&resonant_state(ResonantIndex { n, sign: residue_state_sign(family), gamma: 1.0 }), grid).unwrap();
            let fid = fidelity(w, &f);
            eprintln!("{family:?} {sign} {n}: dev {dev:e} est {:e} fid-1 {:e}", est.est_error, 1.0 - fid);
            assert!(dev < 1e-6);
            assert!(est.est_error < 1e-9);
            assert!(fid > 1.0 - 1e-8);
        }
        assert!(residue_contour(Family::Chi, Sign::Plus, 0, 1.0, grid, Some(0.6), 64).is_err());
    }

    fn hardy_pair() -> (TestFunction<f64>, TestFunction<f64>) {
        (TestFunction::gaussian(c(0.5, -0.5)), TestFunction::gaussian(c(0.5, 0.5)))
    }

    #[test]
    fn resolvent_branches_agree_with_spectral_integral() {
        let (g, h) = hardy_pair();
        let z = c(0.0, -10.0);
        let t = std::time::Instant::now();
        let res = resolvent_element(z, &g, &h, 1.0, Branch::Plus, 40).unwrap();
        eprintln!("sum {} tail {:e} {:?}", res.value, res.tail, t.elapsed());
        let spec = spectral_integral(&g, &h, 1.0, Some(z), 20.0).unwrap();
        eprintln!("spectral {} {:?}", spec, t.elapsed());
        assert!((res.value - spec).norm() < 1e-4 * spec.norm());
        let (g2, h2) = (h.clone(), g.clone());
        let z2 = c(0.3, 10.0);
        let res2 = resolvent_element(z2, &g2, &h2, 1.0, Branch::Minus, 40).unwrap();
        let spec2 = spectral_integral(&g2, &h2, 1.0, Some(z2), 20.0).unwrap();
        eprintln!("minus {} vs {}", res2.value, spec2);
        assert!((res2.value - spec2).norm() < 1e-4 * spec2.norm());
    }

    #[test]
    fn completeness_of_energy_eigenfunctions() {
        let g = TestFunction::gaussian(c(0.5, 0.0));
        let h = TestFunction::gaussian(c(0.8, 0.3));
        let v = spectral_integral(&g, &h, 1.0, None, 20.0).unwrap();
        let exact = inner_product(&g.to_analytic(), &h.to_analytic()).unwrap();
        eprintln!("completeness {} vs {}", v, exact);
        assert!((v - exact).norm() < 1e-4 * exact.norm());
    }

    #[test]
    fn projectors_form_an_orthogonal_family() {
        let grid = Grid::new(-4.0, 4.0, 161).unwrap();
        let ps: Vec<_> = (0..6).map(|n| projector(n, 1.0, grid).unwrap()).collect();
        let phis = [TestFunction::gaussian(c(0.5, 0.0)), TestFunction::gaussian(c(0.7, -0.2)), TestFunction::shifted_gaussian(c(0.6, 0.1), c(0.3, 0.0))];
        let mut worst: f64 = 0.0;
        for phi in &phis {
            let a = phi.to_analytic();
            for pm in &ps {
                let pm_phi = pm.apply(&a).unwrap();
                let cm = pm.coefficient(&a).unwrap();
                for pn in &ps {
                    let cn = pn.coefficient(&pm_phi).unwrap();
                    let expect = if pn.n == pm.n { cm } else { c(0.0, 0.0) };
                    worst = worst.max((cn - expect).norm() / cm.norm().max(1e-300));
                }
            }
        }
        eprintln!("projector algebra {worst:e}");
        assert!(worst < 1e-8);
        assert!((ps[2].trace().unwrap() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn plus_branch_pole_scan() {
        let g = TestFunction::shifted_gaussian(c(0.5, -0.5), c(0.4, 0.0));
        let h = TestFunction::shifted_gaussian(c(0.5, 0.5), c(-0.3, 0.1));
        let t = std::time::Instant::now();
        let poles = resolvent_pole_scan(&g, &h, 1.0, Branch::Plus, 40, Rect { re: (-1.0, 1.0), im: (0.0, 5.0) }).unwrap();
        eprintln!("{:?} {:?}", t.elapsed(), poles.iter().map(|p| p.location).collect::<Vec<_>>());
        assert_eq!(poles.len(), 5);
        for (n, p) in poles.iter().enumerate() {
            eprintln!("{} {:e}", p.location, p.est_error);
            assert!((p.location - c(0.0, n as f64 + 0.5)).norm() < 1e-4);
        }
    }

    #[test]
    fn breit_wigner_poles() {
        let es: Vec<f64> = (0..61).map(|k| -1.0 + 2.0 * k as f64 / 60.0).collect();
        let t = std::time::Instant::now();
        let p0 = breit_wigner_fit(0, 1.0, &es).unwrap();
        eprintln!("n=0 {} err {:e} {:?}", p0.location, p0.est_error, t.elapsed());
        assert!((p0.location - c(0.0, 0.5)).norm() < 1e-4);
        let es: Vec<f64> = (0..81).map(|k| -3.0 + 6.0 * k as f64 / 80.0).collect();
        let p2 = breit_wigner_fit(2, 1.0, &es).unwrap();
        eprintln!("n=2 {} err {:e}", p2.location, p2.est_error);
        assert!((p2.location - c(0.0, 2.5)).norm() < 1e-3);
    }

    #[test]
    fn spectral_resolution() {
        let (g, h) = hardy_pair();
        let r = spectral_resolution_check(&h, &g, 1.0, Branch::Minus, 40).unwrap();
        eprintln!("{r:?}");
        assert!(r.deviation < 1e-4);
    }
}
