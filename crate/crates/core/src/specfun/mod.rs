//! Special functions: Γ, Hermite polynomials and parabolic cylinder functions.

pub mod gamma;
pub mod hermite;
pub mod pcf;

pub use gamma::{gamma, gamma_residue, log_gamma, rgamma};
pub use hermite::{hermite, hermite_function, hermite_functions};
pub use pcf::{pcf, pcf_points, pcf_ray, pcf_solves_ode_residual, pcf_value, pcf_with, EvaluationResult, Method};
