//! AAA rational approximation of sampled data (barycentric form), used to
//! read off poles from values on the real axis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `r(z) = Σ w_j f_j/(z - z_j) / Σ w_j/(z - z_j)`.
#[derive(Debug, Clone)]
pub struct Barycentric {
    pub support: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    /// Maximum deviation from the data at the non-support samples.
    pub max_error: f64,
}

/// One pole of the approximant with its residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalPole {
    pub location: Complex64,
    pub residue: Complex64,
}

impl Barycentric {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for ((zj, fj), wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            let d = z - zj;
            if d.norm() == 0.0 {
                return *fj;
            }
            num += wj * fj / d;
            den += wj / d;
        }
        num / den
    }

    fn numerator(&self, z: Complex64) -> Complex64 {
        self.support.iter().zip(&self.values).zip(&self.weights).map(|((zj, fj), wj)| wj * fj / (z - zj)).sum()
    }

    fn denominator(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut d = Complex64::new(0.0, 0.0);
        let mut dd = Complex64::new(0.0, 0.0);
        for (zj, wj) in self.support.iter().zip(&self.weights) {
            let inv = 1.0 / (z - zj);
            d += wj * inv;
            dd -= wj * inv * inv;
        }
        (d, dd)
    }

    /// Poles (zeros of the barycentric denominator) with residues.
    pub fn poles(&self) -> Result<Vec<RationalPole>> {
        let m = self.support.len();
        if m < 2 {
            return Ok(Vec::new());
        }
        // Poles are the finite eigenvalues λ of the pencil (A, B) with
        // A = [[0, wᵀ], [1, diag(z)]], B = diag(0, 1, ..., 1). With a shift
        // `a` they are a + 1/τ for the eigenvalues τ of (A - aB)⁻¹B, and
        // poles at infinity (polynomial growth) map harmlessly to τ = 0.
        let scale = self.support.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let shift = Complex64::new(0.123_456_789, 0.987_654_321) * scale;
        let mut pencil = DMatrix::<Complex64>::zeros(m + 1, m + 1);
        let mut bmat = DMatrix::<Complex64>::zeros(m + 1, m + 1);
        for j in 0..m {
            pencil[(0, j + 1)] = self.weights[j];
            pencil[(j + 1, 0)] = Complex64::new(1.0, 0.0);
            pencil[(j + 1, j + 1)] = self.support[j] - shift;
            bmat[(j + 1, j + 1)] = Complex64::new(1.0, 0.0);
        }
        let inv_b = pencil
            .lu()
            .solve(&bmat)
            .ok_or_else(|| Error::Fit("singular pencil in pole extraction".into()))?;
        let eig = inv_b
            .schur()
            .eigenvalues()
            .ok_or_else(|| Error::Fit("eigenvalue iteration did not converge".into()))?;
        let tmax = eig.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let vals: Vec<Complex64> =
            eig.iter().filter(|t| t.norm() > 1e-10 * tmax.max(1e-300)).map(|t| shift + 1.0 / t).collect();
        let mut out = Vec::with_capacity(vals.len());
        for v in vals {
            let mut p = v;
            for _ in 0..8 {
                let (d, dd) = self.denominator(p);
                if dd.norm() == 0.0 {
                    break;
                }
                let step = d / dd;
                p -= step;
                if step.norm() <= 1e-15 * p.norm().max(1.0) {
                    break;
                }
            }
            let (_, dd) = self.denominator(p);
            out.push(RationalPole { location: p, residue: self.numerator(p) / dd });
        }
        Ok(out)
    }
}

/// Greedy AAA fit of `f` sampled at `z`, stopping when the maximum error
/// drops below `tol · max|f|` or `max_terms` support points are used.
pub fn aaa(z: &[Complex64], f: &[Complex64], tol: f64, max_terms: usize) -> Result<Barycentric> {
    let n = z.len();
    if n != f.len() || n < 4 {
        return Err(Error::Fit("AAA needs at least four matching samples".into()));
    }
    let fmax = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let max_terms = max_terms.min(n / 2);
    let mut free: Vec<usize> = (0..n).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mean: Complex64 = f.iter().sum::<Complex64>() / n as f64;
    let mut approx = vec![mean; n];
    let mut best: Option<Barycentric> = None;
    for _ in 0..max_terms {
        let (pos, _) = free
            .iter()
            .enumerate()
            .map(|(p, &k)| (p, (f[k] - approx[k]).norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        chosen.push(free.remove(pos));
        let m = chosen.len();
        let mut loewner = DMatrix::<Complex64>::zeros(free.len(), m);
        for (r, &k) in free.iter().enumerate() {
            for (c, &j) in chosen.iter().enumerate() {
                loewner[(r, c)] = (f[k] - f[j]) / (z[k] - z[j]);
            }
        }
        let svd = loewner.svd(false, true);
        let vt = svd.v_t.ok_or_else(|| Error::Fit("SVD failed".into()))?;
        let imin = (0..svd.singular_values.len())
            .min_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        let weights: Vec<Complex64> = (0..m).map(|c| vt[(imin, c)].conj()).collect();
        let r = Barycentric {
            support: chosen.iter().map(|&j| z[j]).collect(),
            values: chosen.iter().map(|&j| f[j]).collect(),
            weights,
            max_error: 0.0,
        };
        let mut err = 0.0_f64;
        for k in 0..n {
            approx[k] = if chosen.contains(&k) { f[k] } else { r.eval(z[k]) };
            err = err.max((f[k] - approx[k]).norm());
        }
        let r = Barycentric { max_error: err, ..r };
        let done = err <= tol * fmax;
        best = Some(r);
        if done {
            break;
        }
    }
    best.ok_or_else(|| Error::Fit("no AAA iteration ran".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_poles_of_a_rational_function() {
        let p1 = Complex64::new(0.3, 0.7);
        let p2 = Complex64::new(-1.0, -2.0);
        let f = |x: f64| {
            let z = Complex64::new(x, 0.0);
            2.0 / (z - p1) + Complex64::new(0.0, 1.0) / (z - p2) + z * z
        };
        let zs: Vec<Complex64> = (0..60).map(|k| Complex64::new(-2.0 + 4.0 * k as f64 / 59.0, 0.0)).collect();
        let fs: Vec<Complex64> = zs.iter().map(|z| f(z.re)).collect();
        let r = aaa(&zs, &fs, 1e-13, 20).unwrap();
        let poles = r.poles().unwrap();
        let near = poles.iter().min_by(|a, b| (a.location - p1).norm().partial_cmp(&(b.location - p1).norm()).unwrap()).unwrap();
        assert!((near.location - p1).norm() < 1e-10, "{:?}", poles);
        assert!((near.residue - 2.0).norm() < 1e-8);
    }

    #[test]
    fn entire_data_has_no_nearby_poles() {
        let zs: Vec<Complex64> = (0..40).map(|k| Complex64::new(-1.0 + 2.0 * k as f64 / 39.0, 0.0)).collect();
        let fs: Vec<Complex64> = zs.iter().map(|z| z.exp()).collect();
        let r = aaa(&zs, &fs, 1e-13, 20).unwrap();
        for p in r.poles().unwrap() {
            assert!(p.location.norm() > 2.0 || p.residue.norm() < 1e-10);
        }
    }
}
