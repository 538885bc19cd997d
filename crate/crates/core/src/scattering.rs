//! Reflection and transmission amplitudes of the parabolic barrier and the
//! asymptotic form of the scattering states.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resonance::{argument_principle_scan, Family, PoleEstimate, Rect};
use crate::scalar::{cis, from_usize, i, lit, real, Real};
use crate::specfun::{log_gamma, pcf_value};
use crate::states::{c0, check_gamma, resonance_energy, resonant_state, ResonantIndex, Sign};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes<T> {
    pub r: Complex<T>,
    pub t: Complex<T>,
    pub energy: T,
    pub gamma: T,
}

impl<T: Real> ScatteringAmplitudes<T> {
    pub fn reflection_probability(&self) -> T {
        self.r.norm_sqr()
    }

    pub fn transmission_probability(&self) -> T {
        self.t.norm_sqr()
    }
}

/// `R` and `T` of the `χ` family at complex energy:
/// `R = -(i/√(2π)) e^{-πE/2γ} Γ(½ - iE/γ)`, `T = (1/√(2π)) e^{πE/2γ} Γ(½ - iE/γ)`.
/// Evaluated through `log Γ` so that large `|E|` neither overflows nor underflows.
pub fn chi_amplitudes_complex<T: Real>(energy: Complex<T>, gamma: T) -> Result<(Complex<T>, Complex<T>)> {
    check_gamma(gamma)?;
    let arg = real::<T>(lit(0.5)) - i::<T>() * energy / gamma;
    let lg = log_gamma(arg)?;
    let half = energy * T::PI() / (gamma * lit::<T>(2.0));
    let norm = T::one() / T::TAU().sqrt();
    let r = -i::<T>() * (lg - half).exp() * norm;
    let t = (lg + half).exp() * norm;
    Ok((r, t))
}

/// Amplitudes at real energy. The `η` family returns the complex conjugates.
pub fn amplitudes<T: Real>(energy: T, gamma: T, family: Family) -> Result<ScatteringAmplitudes<T>> {
    let (r, t) = chi_amplitudes_complex(real(energy), gamma)?;
    let (r, t) = match family {
        Family::Chi => (r, t),
        Family::Eta => (r.conj(), t.conj()),
    };
    Ok(ScatteringAmplitudes { r, t, energy, gamma })
}

/// Poles of the continued reflection amplitude: `-E_n` for `χ`, `+E_n`
/// for `η` (`R(η)` continues as `conj R(χ)(conj E)`), located by the
/// argument principle and checked against the expected count.
pub fn amplitude_poles<T: Real>(gamma: T, n_max: usize, family: Family) -> Result<Vec<PoleEstimate<T>>> {
    check_gamma(gamma)?;
    if n_max > 10 {
        return Err(Error::Domain("amplitude pole search is limited to n_max <= 10".into()));
    }
    let depth = gamma * from_usize::<T>(n_max + 1);
    let f = move |e: Complex<T>| -> Result<Complex<T>> {
        match family {
            Family::Chi => Ok(chi_amplitudes_complex(e, gamma)?.0),
            Family::Eta => Ok(chi_amplitudes_complex(e.conj(), gamma)?.0.conj()),
        }
    };
    let rect = match family {
        Family::Chi => Rect { re: (-gamma, gamma), im: (-depth, T::zero()) },
        Family::Eta => Rect { re: (-gamma, gamma), im: (T::zero(), depth) },
    };
    let poles = argument_principle_scan(&f, rect, (7, 3 * (n_max + 1)), gamma * lit(0.05))?;
    if poles.len() != n_max + 1 {
        return Err(Error::ContourCount { found: poles.len() as i64, expected: (n_max + 1) as i64 });
    }
    let mut poles = poles;
    poles.sort_by(|a, b| a.location.im.abs().partial_cmp(&b.location.im.abs()).unwrap_or(std::cmp::Ordering::Equal));
    for (n, p) in poles.iter().enumerate() {
        let expect = match family {
            Family::Chi => -resonance_energy(n, gamma),
            Family::Eta => resonance_energy(n, gamma),
        };
        if (p.location - expect).norm() > gamma * lit(1e-3) {
            return Err(Error::ContourCount { found: poles.len() as i64, expected: (n_max + 1) as i64 });
        }
    }
    Ok(poles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    PlusInf,
    MinusInf,
}

/// Modulus normalization of the leading asymptotic term of `χ^E_-`:
/// `(C_0/√(2πγ)) |Γ(½ - iE/γ)| e^{πE/2γ} (2γ)^{-1/4}`.
pub fn asymptotic_normalization<T: Real>(energy: T, gamma: T) -> Result<T> {
    let lg = log_gamma(Complex::new(lit::<T>(0.5), -energy / gamma))?;
    Ok(c0(gamma) / (T::TAU() * gamma).sqrt()
        * (lg.re + T::PI() * energy / (gamma * lit(2.0))).exp()
        * (lit::<T>(2.0) * gamma).powf(lit(-0.25)))
}

/// Asymptotic form of `χ^E_-(x)` for `√γ|x| ≥ 10`, scaled by
/// [`asymptotic_normalization`].
///
/// `x → +∞`: `x^{-1/2} exp[i(γx²/2 + (E/γ) log(√(2γ)x) + πE/4γ + π/8)]`.
///
/// `x → -∞`: `i|x|^{-1/2} {(1 + e^{-2πE/γ}) e^{-i(γx²/2 + (E/γ)L - πE/4γ + 3π/8 + φ)}
/// - e^{-πE/γ} e^{i(γx²/2 - (E/γ)L - πE/4γ + π/8)}}` with `L = log(√(2γ)|x|)`
/// and `φ = arg Γ(½ - iE/γ)`.
pub fn asymptotic_chi_minus<T: Real>(energy: T, gamma: T, x: T, side: Side) -> Result<Complex<T>> {
    check_gamma(gamma)?;
    if gamma.sqrt() * x.abs() < lit(10.0) {
        return Err(Error::Region { method: "asymptotic_chi_minus", reason: "requires sqrt(gamma)|x| >= 10".into() });
    }
    match side {
        Side::PlusInf if x < T::zero() => return Err(Error::Domain("x must be positive on the +inf side".into())),
        Side::MinusInf if x > T::zero() => return Err(Error::Domain("x must be negative on the -inf side".into())),
        _ => {}
    }
    let ax = x.abs();
    let e = energy / gamma;
    let l = ((lit::<T>(2.0) * gamma).sqrt() * ax).ln();
    let q = gamma * ax * ax * lit(0.5);
    let quarter = T::FRAC_PI_4() * e;
    let norm = asymptotic_normalization(energy, gamma)? / ax.sqrt();
    let v = match side {
        Side::PlusInf => cis(q + e * l + quarter + T::FRAC_PI_8()),
        Side::MinusInf => {
            let phi = log_gamma(Complex::new(lit::<T>(0.5), -e))?.im;
            let w_in = T::one() + (-lit::<T>(2.0) * T::PI() * e).exp();
            let w_out = (-T::PI() * e).exp();
            i::<T>()
                * (cis(-(q + e * l - quarter + lit::<T>(3.0) * T::FRAC_PI_8() + phi)) * w_in
                    - cis(q - e * l - quarter + T::FRAC_PI_8()) * w_out)
        }
    };
    Ok(v * norm)
}

/// Components of `χ^E_-` on the negative axis measured from its exact
/// leading asymptotics: returns `(incoming, reflected)` moduli of the
/// `e^{-iγx²/2}` and `e^{+iγx²/2}` parts, scaled by `|x|^{1/2}`.
pub fn chi_minus_components<T: Real>(energy: T, gamma: T, x: T) -> Result<(T, T)> {
    check_gamma(gamma)?;
    // χ^E_-(x) = K Γ(ν+1) D_{-ν-1}(√(-2iγ) x); split D by the connection
    // formula into its two exponentially distinct parts.
    let nu = crate::states::nu_of_energy(real(energy), gamma);
    let mu = -nu - real(T::one());
    let z = Complex::new(T::zero(), -lit::<T>(2.0) * gamma).sqrt() * x;
    let k = (i::<T>() * T::FRAC_PI_4() * (nu + lit::<T>(0.5))).exp() * (c0(gamma) / (T::TAU() * gamma).sqrt());
    let g = crate::specfun::gamma(nu + T::one())?;
    // D_μ(z) = e^{iπμ} D_μ(-z) + (√(2π)/Γ(-μ)) e^{iπ(μ+1)/2} D_{-μ-1}(-iz)
    let reflected = k * g * (i::<T>() * T::PI() * mu).exp() * pcf_value(mu, -z)?;
    let incoming = k * g * crate::specfun::rgamma(-mu) * T::TAU().sqrt()
        * (i::<T>() * T::FRAC_PI_2() * (mu + T::one())).exp()
        * pcf_value(-mu - T::one(), -i::<T>() * z)?;
    let s = x.abs().sqrt();
    Ok((incoming.norm() * s, reflected.norm() * s))
}

/// Local wavenumber and envelope exponent of a resonant state at large `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantAsymptotics {
    pub n: usize,
    pub sign: Sign,
    pub x_probe: f64,
    pub phase_slope: f64,
    pub expected_slope: f64,
    pub envelope_exponent: f64,
    pub outgoing: bool,
}

/// Checks `d/dx arg f̃∓_n ≈ ±γx` and `|f̃∓_n| ~ x^n` at `x_probe`.
pub fn resonant_asymptotics_check<T: Real>(n: usize, sign: Sign, gamma: T, x_probe: T) -> Result<ResonantAsymptotics> {
    check_gamma(gamma)?;
    if gamma.sqrt() * x_probe.abs() < lit(10.0) {
        return Err(Error::Region { method: "resonant_asymptotics_check", reason: "requires sqrt(gamma)|x| >= 10".into() });
    }
    let f = resonant_state(ResonantIndex { n, sign, gamma });
    let h = lit::<T>(1e-5) * x_probe.abs().max(T::one());
    let a = f.at(x_probe + h)?;
    let b = f.at(x_probe - h)?;
    let slope = (a / b).arg() / (h * lit(2.0));
    // envelope exponent from |f| at x and 2x (the Gaussian factor has unit modulus)
    let x2 = x_probe * lit(2.0);
    let env = (f.at(x2)?.norm() / f.at(x_probe)?.norm()).ln() / lit::<T>(2.0).ln();
    let expected = -sign.factor::<T>() * gamma * x_probe;
    let to = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Ok(ResonantAsymptotics {
        n,
        sign,
        x_probe: to(x_probe),
        phase_slope: to(slope),
        expected_slope: to(expected),
        envelope_exponent: to(env),
        outgoing: slope * x_probe.signum() > T::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn unitarity_and_special_values() {
        let a = amplitudes(0.0_f64, 1.0, Family::Chi).unwrap();
        assert!((a.reflection_probability() - 0.5).abs() < 1e-14);
        assert!((a.transmission_probability() - 0.5).abs() < 1e-14);
        let mut worst: f64 = 0.0;
        for k in 0..200 {
            let e = -10.0 + 20.0 * k as f64 / 199.0;
            let a = amplitudes(e, 1.0, Family::Chi).unwrap();
            let b = amplitudes(e, 1.0, Family::Eta).unwrap();
            worst = worst.max((a.reflection_probability() + a.transmission_probability() - 1.0).abs());
            assert_eq!(b.r, a.r.conj());
            assert!((a.reflection_probability() - b.reflection_probability()).abs() < 1e-14);
        }
        assert!(worst < 1e-12, "{worst}");
        let hi = amplitudes(5.0_f64, 1.0, Family::Chi).unwrap();
        assert!((hi.transmission_probability() - 1.0).abs() < 1e-6);
        let lo = amplitudes(-5.0_f64, 1.0, Family::Chi).unwrap();
        assert!((lo.reflection_probability() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn amplitude_pole_locations() {
        let chi = amplitude_poles(1.0, 3, Family::Chi).unwrap();
        for (n, p) in chi.iter().enumerate() {
            assert!((p.location - C::new(0.0, -(n as f64 + 0.5))).norm() < 1e-6);
        }
        let eta = amplitude_poles(1.0, 2, Family::Eta).unwrap();
        assert!((eta[1].location - C::new(0.0, 1.5)).norm() < 1e-6);
    }

    #[test]
    fn asymptotic_form_on_the_transmitted_side() {
        for e in [-1.0, 0.0, 1.0] {
            for x in [20.0, 40.0] {
                let chi = crate::states::chi_state(C::new(e, 0.0), Sign::Minus, 1.0).unwrap().at(x).unwrap();
                let asy = asymptotic_chi_minus(e, 1.0, x, Side::PlusInf).unwrap();
                let dev = (chi / asy).norm() - 1.0;
                // the first correction term is -μ(μ-1)/(2z²), |z|² = 2γx²
                let mu = C::new(-0.5, e);
                let corr = (-(mu * (mu - 1.0)) / (2.0 * C::new(0.0, -2.0 * x * x))).re;
                assert!((dev - corr).abs() < 5e-6, "E={e} x={x}: {dev} vs {corr}");
            }
        }
        assert!(asymptotic_chi_minus(1.0, 1.0, 5.0, Side::PlusInf).is_err());
    }

    #[test]
    fn reflected_to_transmitted_ratio() {
        for e in [-1.0_f64, 0.0, 0.7] {
            let (inc, refl) = chi_minus_components(e, 1.0, -25.0).unwrap();
            let a = amplitudes(e, 1.0, Family::Chi).unwrap();
            assert!((refl / inc - a.r.norm()).abs() < 1e-3 * a.r.norm(), "E={e}");
        }
    }

    #[test]
    fn resonant_states_are_outgoing_or_ingoing() {
        let out = resonant_asymptotics_check(0, Sign::Minus, 1.0, 15.0).unwrap();
        assert!((out.phase_slope - 15.0).abs() < 0.15 && out.outgoing);
        let inc = resonant_asymptotics_check(0, Sign::Plus, 1.0, 15.0).unwrap();
        assert!((inc.phase_slope + 15.0).abs() < 0.15 && !inc.outgoing);
        let env = resonant_asymptotics_check(2, Sign::Minus, 1.0, 12.0).unwrap();
        assert!((env.envelope_exponent - 2.0).abs() < 0.01);
    }
}
