//! Complex Gamma function via the Lanczos approximation (g = 7, nine terms).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{i, lit, near_integer, sin_pi, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer<T: Real>(z: Complex<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && z.re == z.re.round()
}

fn lanczos_log_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    // log Γ(z) for Re z >= 1/2
    let z = z - T::one();
    let mut x = Complex::new(lit::<T>(LANCZOS_COEFFS[0]), T::zero());
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += Complex::new(lit::<T>(c), T::zero()) / (z + lit::<T>(k as f64));
    }
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    let half_log_two_pi = lit::<T>(0.5) * (T::TAU()).ln();
    (z + lit::<T>(0.5)) * t.ln() - t + x.ln() + half_log_two_pi
}

/// `log sin(πz)`, stable for large `|Im z|`. Defined up to `2πik`.
fn log_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let cutoff = lit::<T>(15.0);
    let two_pi_i = i::<T>() * T::TAU();
    let pi_i = i::<T>() * T::PI();
    if z.im > cutoff {
        let half_i = Complex::new(T::zero(), lit(0.5));
        half_i.ln() - pi_i * z + (Complex::from(T::one()) - (two_pi_i * z).exp()).ln()
    } else if z.im < -cutoff {
        let neg_half_i = Complex::new(T::zero(), lit(-0.5));
        neg_half_i.ln() + pi_i * z + (Complex::from(T::one()) - (-two_pi_i * z).exp()).ln()
    } else {
        sin_pi(z).ln()
    }
}

/// Logarithm of the Gamma function for complex argument.
///
/// For `Re z >= 1/2` the imaginary part is the continuous branch; on the
/// reflected half-plane it may differ from it by a multiple of `2π`, which
/// does not affect `exp(log_gamma(z))`.
pub fn log_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("log_gamma: non-finite argument".into()));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            what: "log_gamma argument",
            location: format!("{}", z.re),
        });
    }
    if z.re < lit(0.5) {
        let log_pi = Complex::from(T::PI().ln());
        Ok(log_pi - log_sin_pi(z) - lanczos_log_gamma(Complex::from(T::one()) - z))
    } else {
        Ok(lanczos_log_gamma(z))
    }
}

/// Γ(z). Poles at the non-positive integers are reported as errors.
pub fn gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if z.re < lit(0.5) && z.im.abs() < lit(15.0) {
        if is_nonpositive_integer(z) {
            return Err(Error::Pole {
                what: "gamma argument",
                location: format!("{}", z.re),
            });
        }
        // Direct reflection keeps full relative accuracy near the poles.
        let g1 = lanczos_log_gamma(Complex::from(T::one()) - z).exp();
        return Ok(Complex::from(T::PI()) / (sin_pi(z) * g1));
    }
    Ok(log_gamma(z)?.exp())
}

/// 1/Γ(z), entire; exactly zero at the non-positive integers.
pub fn rgamma<T: Real>(z: Complex<T>) -> Complex<T> {
    if is_nonpositive_integer(z) {
        return Complex::from(T::zero());
    }
    if z.re < lit(0.5) && z.im.abs() < lit(15.0) {
        let g1 = lanczos_log_gamma(Complex::from(T::one()) - z).exp();
        return sin_pi(z) * g1 / T::PI();
    }
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex::from(T::zero()),
    }
}

/// Residue of Γ at `-n`: `(-1)^n / n!`.
pub fn gamma_residue<T: Real>(n: u32) -> T {
    let mut fact = T::one();
    for k in 1..=n {
        fact *= lit::<T>(k as f64);
    }
    let sign = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    sign / fact
}

/// True when `z` is within `tol` of a pole of Γ.
pub fn near_gamma_pole<T: Real>(z: Complex<T>, tol: T) -> bool {
    matches!(near_integer(z, tol), Some(k) if k <= 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn half_and_integers() {
        let v = log_gamma(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
        let v = log_gamma(Complex64::new(5.0, 0.0)).unwrap();
        assert!((v.re - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn poles_are_errors() {
        for k in 0..5 {
            let z = Complex64::new(-(k as f64), 0.0);
            assert!(matches!(log_gamma(z), Err(Error::Pole { .. })));
            assert!(matches!(gamma(z), Err(Error::Pole { .. })));
            assert_eq!(rgamma(z), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn residue_probe_at_minus_two() {
        let eps = 1e-7;
        let v = gamma(Complex64::new(-2.0 + eps, 0.0)).unwrap() * eps;
        assert!((v.re - 0.5).abs() < 1e-6, "{v}");
        assert_eq!(gamma_residue::<f64>(2), 0.5);
        assert_eq!(gamma_residue::<f64>(3), -1.0 / 6.0);
    }

    #[test]
    fn recurrence_in_complex_plane() {
        for &(re, im) in &[(0.3, 0.7), (-2.4, 1.1), (4.2, -3.3), (0.5, -20.0), (-7.5, 0.25), (1.0, 40.0)] {
            let z = Complex64::new(re, im);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn reflection_matches_sine() {
        let z = Complex64::new(0.25, 0.4);
        let lhs = gamma(z).unwrap() * gamma(Complex64::new(1.0, 0.0) - z).unwrap();
        let rhs = std::f64::consts::PI / (z * std::f64::consts::PI).sin();
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
    }

    #[test]
    fn abs_gamma_half_plus_imaginary() {
        // |Γ(1/2 + iy)|^2 = π / cosh(πy)
        for &y in &[0.0, 0.5, 3.0, 10.0, 25.0] {
            let g = gamma(Complex64::new(0.5, y)).unwrap().norm_sqr();
            let exact = std::f64::consts::PI / (std::f64::consts::PI * y).cosh();
            assert!((g - exact).abs() < 1e-12 * exact, "y = {y}");
        }
    }

    #[test]
    fn rgamma_is_continuous_through_poles() {
        let a = rgamma(Complex64::new(-3.0 + 1e-8, 0.0));
        // d/dz 1/Γ at -3 equals (-1)^3 3! = -6
        assert!((a.re / 1e-8 + 6.0).abs() < 1e-5);
    }

    #[test]
    fn works_in_single_precision() {
        let v = gamma(Complex::<f32>::new(4.0, 0.0)).unwrap();
        assert!((v.re - 6.0).abs() < 1e-4);
    }
}
