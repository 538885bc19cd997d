//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion and
//! fails at the end if any criterion failed.

use std::time::{Duration, Instant};

use invosc::verify::{self, Check};
use invosc::Result;

struct Criterion {
    number: usize,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Result<Vec<Check>>,
}

fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion {
            number: 1,
            title: "integer-order Hermite reduction",
            budget: secs(10),
            run: || Ok(vec![verify::pcf_integer_reduction()?]),
        },
        Criterion {
            number: 2,
            title: "recurrence and entirety in the order",
            budget: secs(30),
            run: || Ok(vec![verify::pcf_recurrence()?, verify::pcf_entirety()?]),
        },
        Criterion {
            number: 3,
            title: "conjugation, biorthonormality, smeared completeness",
            budget: secs(60),
            run: || Ok(vec![verify::conjugation(10)?, verify::orthonormality(10)?, verify::smeared_completeness(40)?]),
        },
        Criterion {
            number: 4,
            title: "transform of monomials and delta derivatives",
            budget: None,
            run: || verify::transform_proportionality(5),
        },
        Criterion { number: 5, title: "eigenvalue identity", budget: None, run: || Ok(vec![verify::eigenvalue_identity(5)?]) },
        Criterion {
            number: 6,
            title: "contour residues of chi and eta",
            budget: None,
            run: || Ok(vec![verify::residue_deviation(5)?, verify::residue_fidelity(5)?]),
        },
        Criterion {
            number: 7,
            title: "resolvent poles and projector algebra",
            budget: None,
            run: || Ok(vec![verify::resolvent_poles()?, verify::projector_algebra(6)?]),
        },
        Criterion {
            number: 8,
            title: "Breit-Wigner pole fits",
            budget: None,
            run: || Ok(vec![verify::breit_wigner(0)?, verify::breit_wigner(2)?]),
        },
        Criterion {
            number: 9,
            title: "scattering unitarity and amplitude poles",
            budget: None,
            run: || Ok(vec![verify::unitarity(200)?, verify::half_reflection()?, verify::amplitude_pole_locations(4)?]),
        },
        Criterion {
            number: 10,
            title: "asymptotic form and outgoing/ingoing phase slopes",
            budget: None,
            run: || {
                let mut v = verify::asymptotic_ratios()?;
                v.push(verify::resonant_phase_slopes()?);
                Ok(v)
            },
        },
        Criterion { number: 11, title: "resonance-expansion dynamics", budget: None, run: verify::dynamics_checks },
        Criterion {
            number: 12,
            title: "normalized powers and (u+i0)^-1",
            budget: None,
            run: || Ok(vec![verify::normalized_power_limits()?, verify::u_plus_i0_inverse()?]),
        },
    ]
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match &outcome {
            Ok(checks) => {
                let within = c.budget.is_none_or(|b| elapsed <= b);
                let mut parts: Vec<String> =
                    checks.iter().map(|k| format!("{} {:.2e}/{:.1e}{}", k.check_id, k.measured, k.tolerance, if k.pass { "" } else { " (fail)" })).collect();
                if let Some(b) = c.budget {
                    parts.push(format!("runtime {:.2}s/{}s{}", elapsed.as_secs_f64(), b.as_secs(), if within { "" } else { " (fail)" }));
                }
                (within && checks.iter().all(|k| k.pass), parts.join("; "))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        println!("criterion {:>2} {}: {} [{}] ({:.1}s)", c.number, if pass { "PASS" } else { "FAIL" }, c.title, detail, elapsed.as_secs_f64());
        if !pass {
            failed.push(c.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
