use approx::assert_relative_eq;
use num_complex::Complex64 as C;
use proptest::prelude::*;

use invosc::distributions::TestFunction;
use invosc::dynamics::Expansion;
use invosc::resonance::{Branch, Family};
use invosc::scattering::amplitudes;
use invosc::specfun::{gamma, hermite, log_gamma, pcf, Method};
use invosc::states::{resonant_state, Grid, ResonantIndex, Sign, WaveSample};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resonant_pair_is_conjugate(n in 0usize..12, x in -6.0f64..6.0, g in 0.2f64..4.0) {
        let p = resonant_state(ResonantIndex::new(n, Sign::Plus, g).unwrap()).at(x).unwrap();
        let m = resonant_state(ResonantIndex::new(n, Sign::Minus, g).unwrap()).at(x).unwrap();
        prop_assert!((p.conj() - m).norm() <= 1e-14 * (1.0 + m.norm()));
    }

    #[test]
    fn scattering_is_unitary(e in -20.0f64..20.0, g in 0.1f64..5.0, eta in any::<bool>()) {
        let family = if eta { Family::Eta } else { Family::Chi };
        let a = amplitudes(e, g, family).unwrap();
        prop_assert!((a.reflection_probability() + a.transmission_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eta_amplitudes_conjugate_chi(e in -10.0f64..10.0, g in 0.2f64..3.0) {
        let c = amplitudes(e, g, Family::Chi).unwrap();
        let h = amplitudes(e, g, Family::Eta).unwrap();
        prop_assert!((c.r.conj() - h.r).norm() < 1e-14);
        prop_assert!((c.t.conj() - h.t).norm() < 1e-14);
    }

    #[test]
    fn hermite_reduction_agrees_with_dispatcher(n in 0usize..=20, r in -5.0f64..5.0, diagonal in any::<bool>()) {
        let dir = if diagonal { C::from_polar(1.0, std::f64::consts::FRAC_PI_4) } else { C::new(1.0, 0.0) };
        let z = dir * r;
        let nu = C::new(n as f64, 0.0);
        let closed = pcf(nu, z, Some(Method::HermiteReduction)).unwrap().value;
        let general = pcf(nu, z, None).unwrap().value;
        let direct = C::new(2f64.powf(-(n as f64) / 2.0), 0.0) * (-z * z / 4.0).exp() * hermite(n, z / 2f64.sqrt());
        let scale = closed.norm().max(1e-300);
        prop_assert!((closed - direct).norm() <= 1e-12 * scale.max(direct.norm()));
        // Cancellation in H_n near its zeros limits the relative comparison,
        // so measure against the magnitude of the largest term instead.
        let envelope = invosc::verify::hermite_envelope(n, z);
        prop_assert!((general - closed).norm() <= 1e-10 * envelope, "n={} z={} diff={}", n, z, (general - closed).norm());
    }

    #[test]
    fn gamma_recurrence(re in -8.0f64..8.0, im in 0.05f64..8.0) {
        let z = C::new(re, im);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
        let lg = log_gamma(z).unwrap();
        prop_assert!((lg.exp() - gamma(z).unwrap()).norm() <= 1e-12 * lg.exp().norm());
    }

    #[test]
    fn grid_spec_roundtrip(a in -50.0f64..0.0, w in 0.1f64..50.0, n in 16usize..4096) {
        let spec = format!("{a}:{}:{n}", a + w);
        let g: Grid<f64> = Grid::parse(&spec).unwrap();
        prop_assert_eq!(g.n_points, n);
        prop_assert_eq!(g.x_min, a);
        prop_assert_eq!(g.point(n - 1), a + w);
    }

    #[test]
    fn wave_sample_csv_roundtrip(values in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 16..64)) {
        let grid = Grid::new(-1.0, 2.0, values.len()).unwrap();
        let s = WaveSample::new(grid, values.iter().map(|&(a, b)| C::new(a, b)).collect()).unwrap();
        let back = WaveSample::<f64>::from_csv(&s.to_csv()).unwrap();
        prop_assert_eq!(back.values, s.values);
        prop_assert_eq!(back.grid.n_points, s.grid.n_points);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn semigroup_law(t1 in 0.0f64..2.0, t2 in 0.0f64..2.0, sr in 0.3f64..2.0, si in -0.5f64..0.5) {
        let phi = TestFunction::gaussian(C::new(sr, si));
        let base = Expansion::new(&phi, 1.0, Branch::Minus, 30).unwrap();
        let stepped = base.evolve(t1).unwrap().evolve(t2).unwrap();
        let direct = base.evolve(t1 + t2).unwrap();
        for (a, b) in stepped.coefficients.iter().zip(&direct.coefficients) {
            prop_assert!((a - b).norm() <= 1e-10 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn plus_branch_is_time_reversed_minus(t in 0.0f64..2.0, sr in 0.3f64..2.0, si in -0.5f64..0.5) {
        let phi = TestFunction::gaussian(C::new(sr, si));
        let grid = Grid::new(-4.0, 4.0, 64).unwrap();
        let minus = Expansion::new(&phi, 1.0, Branch::Minus, 30).unwrap().evolve(t).unwrap().sample(grid).unwrap();
        let plus = Expansion::new(&phi.conj(), 1.0, Branch::Plus, 30).unwrap().evolve(-t).unwrap().sample(grid).unwrap();
        for (a, b) in minus.values.iter().zip(&plus.values) {
            prop_assert!((a.conj() - b).norm() <= 1e-10 * (1.0 + a.norm()));
        }
    }
}

#[test]
fn evolution_direction_is_enforced() {
    let phi = TestFunction::gaussian(C::new(1.0, 0.0));
    let minus = Expansion::new(&phi, 1.0, Branch::Minus, 10).unwrap();
    assert!(minus.evolve(-0.1).is_err());
    let plus = Expansion::new(&phi, 1.0, Branch::Plus, 10).unwrap();
    assert!(plus.evolve(0.1).is_err());
    assert_relative_eq!(minus.evolve(0.0).unwrap().coefficients[0].re, minus.coefficients[0].re);
}
