//! Parsers for command-line literals.

use num_complex::Complex64;

/// Parses `a`, `bi`, `a+bi` or `a-bi` (whitespace allowed anywhere, `i` or
/// `j` as the imaginary unit, a bare `i` meaning `1i`).
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{s}' is not a complex literal (expected a+bi)");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return real(&t).map(|re| Complex64::new(re, 0.0)).ok_or_else(bad);
    };
    // The imaginary part starts at the last sign that is not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k]).ok_or_else(bad)?, imag(&body[k..]).ok_or_else(bad)?),
        None => (0.0, imag(body).ok_or_else(bad)?),
    };
    Ok(Complex64::new(re, im))
}

fn real(t: &str) -> Option<f64> {
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.starts_with('+') {
        return None;
    }
    let v: f64 = t.parse().ok()?;
    v.is_finite().then_some(v)
}

fn imag(t: &str) -> Option<f64> {
    match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => real(t),
    }
}

/// Initial datum for `evolve`: `gaussian:σ`, `shifted:σ:u0` or `moment:k:σ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Phi {
    Gaussian(Complex64),
    Shifted(Complex64, Complex64),
    Moment(usize, Complex64),
}

pub fn phi(s: &str) -> Result<Phi, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["gaussian", sigma] => Ok(Phi::Gaussian(complex(sigma)?)),
        ["shifted", sigma, u0] => Ok(Phi::Shifted(complex(sigma)?, complex(u0)?)),
        ["moment", k, sigma] => {
            let k = k.trim().parse().map_err(|_| format!("bad moment order '{k}'"))?;
            Ok(Phi::Moment(k, complex(sigma)?))
        }
        _ => Err(format!("'{s}' is not gaussian:σ, shifted:σ:u0 or moment:k:σ")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_usual_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(complex(" 1 - 2i ").unwrap(), c(1.0, -2.0));
        assert_eq!(complex("-0.5i").unwrap(), c(0.0, -0.5));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("3-i").unwrap(), c(3.0, -1.0));
        assert_eq!(complex("1e-3+2.5e+1i").unwrap(), c(1e-3, 25.0));
        assert_eq!(complex("-1e-3-1E2j").unwrap(), c(-1e-3, -100.0));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["bad", "", "1+", "1+2", "1+-2i", "++1", "nan", "inf", "1i2", "1+2ii"] {
            assert!(complex(s).is_err(), "{s} parsed");
        }
    }

    #[test]
    fn phi_specs() {
        assert_eq!(phi("gaussian:1").unwrap(), Phi::Gaussian(Complex64::new(1.0, 0.0)));
        assert_eq!(phi("moment:2:0.5+0.1i").unwrap(), Phi::Moment(2, Complex64::new(0.5, 0.1)));
        assert!(matches!(phi("shifted:1:0.5").unwrap(), Phi::Shifted(..)));
        assert!(phi("box:1").is_err());
    }
}
