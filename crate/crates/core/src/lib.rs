//! Numerical toolkit for the inverted harmonic oscillator `H = (p² - γ²x²)/2`.
//!
//! ```
//! use invosc::{specfun::pcf, C64};
//!
//! // D_1(2) = 2e^{-1}
//! let d = pcf(C64::new(1.0, 0.0), C64::new(2.0, 0.0), None)?;
//! assert!((d.value.re - 2.0 * (-1.0f64).exp()).abs() < 1e-12);
//!
//! let a = invosc::scattering::amplitudes(0.0_f64, 1.0, invosc::resonance::Family::Chi)?;
//! assert!((a.reflection_probability() - 0.5).abs() < 1e-12);
//! # Ok::<(), invosc::Error>(())
//! ```

pub mod distributions;
pub mod dynamics;
pub mod error;
pub mod func;
pub mod io;
pub mod quad;
pub mod rational;
pub mod resonance;
pub mod scalar;
pub mod scattering;
pub mod specfun;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;

pub type Grid64 = states::Grid<f64>;
pub type WaveSample64 = states::WaveSample<f64>;
pub type Analytic64 = func::Analytic<f64>;
pub type TestFunction64 = distributions::TestFunction<f64>;
pub type Expansion64 = dynamics::Expansion<f64>;
pub type PoleEstimate64 = resonance::PoleEstimate<f64>;
pub type EvaluationResult64 = specfun::EvaluationResult<f64>;
pub type ScatteringAmplitudes64 = scattering::ScatteringAmplitudes<f64>;
