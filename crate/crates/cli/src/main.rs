//! `invosc` command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or parse
//! error, 3 numerical failure.

mod literal;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use invosc::distributions::TestFunction;
use invosc::dynamics::{default_grid, evolution_report, DEFAULT_TERMS};
use invosc::io::atomic_write;
use invosc::resonance::{Branch, Family};
use invosc::scattering::{amplitude_poles, amplitudes};
use invosc::specfun::{pcf, Method};
use invosc::states::{
    chi_state, eta_state, osc_eigenstate, parity_states, resonant_state, Grid, ResonantIndex, Sign, WaveSample,
};
use invosc::verify::{run_suite, Suite};
use invosc::{Error, Grid64};

use literal::Phi;

#[derive(Parser, Debug)]
#[command(name = "invosc", version, about = "Inverted harmonic oscillator toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the parabolic cylinder function D_ν(z).
    Pcf {
        #[arg(long, value_parser = literal::complex, allow_hyphen_values = true)]
        nu: Complex64,
        #[arg(long, value_parser = literal::complex, allow_hyphen_values = true)]
        z: Complex64,
        /// Force one evaluation method instead of the region dispatcher.
        #[arg(long, value_parser = parse_method)]
        method: Option<Method>,
    },
    /// Run a named invariant suite and print its JSON report.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Reflection and transmission amplitudes on an energy grid (CSV).
    Scatter {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        emin: f64,
        #[arg(long, allow_hyphen_values = true)]
        emax: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Chi)]
        family: FamilyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pole locations of the continued R/T amplitudes (JSON).
    Poles {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Number of poles, counted from the one closest to the real axis.
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Chi)]
        family: FamilyArg,
    },
    /// Resonance-expansion time evolution with optional unitary reference.
    Evolve {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        /// Number of time intervals; `steps + 1` times are reported.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = BranchArg::Minus)]
        family: BranchArg,
        #[arg(long, value_parser = literal::phi, default_value = "gaussian:1")]
        phi: Phi,
        /// Number of resonant terms kept.
        #[arg(long = "N", default_value_t = DEFAULT_TERMS)]
        terms: usize,
        /// Sampling grid `x_min:x_max:n` (default ±8/√γ with 1024 points).
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<Grid64>,
        /// Also compare against the unitary split-step reference.
        #[arg(long)]
        reference: bool,
        /// Output directory for `report.json` and the per-time CSV files.
        #[arg(long, default_value = "evolve_out")]
        out: PathBuf,
    },
    /// Sample an eigenstate family on a grid (CSV).
    States {
        #[arg(long, value_enum)]
        family: StateFamily,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Energy for the chi, eta and parity families.
        #[arg(long, value_parser = literal::complex, allow_hyphen_values = true)]
        energy: Option<Complex64>,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-8:8:1024")]
        grid: Grid64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Chi,
    Eta,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Chi => Family::Chi,
            FamilyArg::Eta => Family::Eta,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BranchArg {
    Minus,
    Plus,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StateFamily {
    Resonant,
    Oscillator,
    Chi,
    Eta,
    Even,
    Odd,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid64, String> {
    Grid::parse(s).map_err(|e| e.to_string())
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Checks,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 3 })
        }
    }
}

/// Honours `INVOSC_THREADS` as the worker cap of the global pool.
fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("INVOSC_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| format!("INVOSC_THREADS='{v}' is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Pcf { nu, z, method } => cmd_pcf(nu, z, method),
        Command::Verify { suite } => cmd_verify(suite),
        Command::Scatter { gamma, emin, emax, n, family, out } => cmd_scatter(gamma, emin, emax, n, family.into(), out.as_deref()),
        Command::Poles { gamma, nmax, family } => cmd_poles(gamma, nmax, family.into()),
        Command::Evolve { gamma, t0, t1, steps, family, phi, terms, grid, reference, out } => {
            let branch = match family {
                BranchArg::Minus => Branch::Minus,
                BranchArg::Plus => Branch::Plus,
            };
            cmd_evolve(EvolveArgs { gamma, t0, t1, steps, branch, phi, terms, grid, reference }, &out)
        }
        Command::States { family, n, sign, gamma, energy, grid, out } => {
            cmd_states(family, n, sign.into(), gamma, energy, grid, out.as_deref())
        }
    }
}

fn print_json<S: Serialize>(value: &S) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => atomic_write(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_pcf(nu: Complex64, z: Complex64, method: Option<Method>) -> Result<(), Failure> {
    let r = pcf(nu, z, method)?;
    print_json(&json!({
        "nu": { "re": nu.re, "im": nu.im },
        "z": { "re": z.re, "im": z.im },
        "value": { "re": r.value.re, "im": r.value.im },
        "est_error": r.est_abs_error,
        "method": r.method,
    }))
}

fn cmd_verify(suite: Suite) -> Result<(), Failure> {
    let report = run_suite(suite)?;
    print_json(&report)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_scatter(gamma: f64, emin: f64, emax: f64, n: usize, family: Family, out: Option<&Path>) -> Result<(), Failure> {
    if n < 2 || !(emin < emax) {
        return Err(Error::Domain("scatter needs --n >= 2 and --emin < --emax".into()).into());
    }
    let rows = (0..n)
        .into_par_iter()
        .map(|k| {
            let e = emin + (emax - emin) * k as f64 / (n - 1) as f64;
            let a = amplitudes(e, gamma, family)?;
            Ok(format!(
                "{},{},{},{},{},{},{}\n",
                e,
                a.r.re,
                a.r.im,
                a.t.re,
                a.t.im,
                a.reflection_probability(),
                a.transmission_probability()
            ))
        })
        .collect::<Result<Vec<String>, Error>>()?;
    let mut text = String::from("E,re_R,im_R,re_T,im_T,abs2_R,abs2_T\n");
    text.extend(rows);
    emit(&text, out)
}

fn cmd_poles(gamma: f64, count: usize, family: Family) -> Result<(), Failure> {
    if count == 0 {
        return Err(Error::Domain("--nmax must be at least 1".into()).into());
    }
    let poles = amplitude_poles(gamma, count - 1, family)?;
    let list: Vec<_> = poles
        .iter()
        .enumerate()
        .map(|(n, p)| {
            json!({
                "n": n,
                "location_re": p.location.re,
                "location_im": p.location.im,
                "est_error": p.est_error,
                "method": p.method,
            })
        })
        .collect();
    print_json(&list)
}

struct EvolveArgs {
    gamma: f64,
    t0: f64,
    t1: f64,
    steps: usize,
    branch: Branch,
    phi: Phi,
    terms: usize,
    grid: Option<Grid64>,
    reference: bool,
}

fn cmd_evolve(a: EvolveArgs, out: &Path) -> Result<(), Failure> {
    let phi = match a.phi {
        Phi::Gaussian(s) => TestFunction::gaussian(s),
        Phi::Shifted(s, u0) => TestFunction::shifted_gaussian(s, u0),
        Phi::Moment(k, s) => TestFunction::gaussian_moment(k, s),
    };
    let times: Vec<f64> = if a.steps == 0 {
        vec![a.t0]
    } else {
        (0..=a.steps).map(|k| a.t0 + (a.t1 - a.t0) * k as f64 / a.steps as f64).collect()
    };
    let (report, states) = evolution_report(&phi, a.gamma, a.branch, &times, a.terms, a.reference)?;
    let grid = match a.grid {
        Some(g) => g,
        None => default_grid(a.gamma)?,
    };
    std::fs::create_dir_all(out).map_err(Error::from)?;
    let files: Vec<String> = (0..states.len()).map(|k| format!("t_{k:04}.csv")).collect();
    states
        .par_iter()
        .zip(&files)
        .zip(&times)
        .try_for_each(|((s, name), t)| -> Result<(), Error> {
            let meta = json!({ "time": t, "branch": a.branch, "gamma": a.gamma, "terms": a.terms });
            s.sample(grid)?.write(&out.join(name), &meta)
        })?;
    let mut doc = serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?;
    doc["samples"] = json!(files);
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    atomic_write(&out.join("report.json"), text.as_bytes())?;
    println!("{text}");
    Ok(())
}

fn cmd_states(
    family: StateFamily,
    n: usize,
    sign: Sign,
    gamma: f64,
    energy: Option<Complex64>,
    grid: Grid64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let need_energy = || energy.ok_or_else(|| Error::Domain("this family needs --energy".into()));
    let f = match family {
        StateFamily::Resonant => resonant_state(ResonantIndex::new(n, sign, gamma)?),
        StateFamily::Oscillator => osc_eigenstate(n, gamma)?,
        StateFamily::Chi => chi_state(need_energy()?, sign, gamma)?,
        StateFamily::Eta => eta_state(need_energy()?, sign, gamma)?,
        StateFamily::Even => parity_states(need_energy()?, gamma)?.0,
        StateFamily::Odd => parity_states(need_energy()?, gamma)?.1,
    };
    let sample = WaveSample::from_fn(&f, grid)?;
    match out {
        Some(p) => {
            let mut meta = json!({ "family": format!("{family:?}").to_lowercase(), "gamma": gamma, "label": f.label() });
            if let Some(e) = energy {
                meta["energy"] = json!({ "re": e.re, "im": e.im });
            }
            if matches!(family, StateFamily::Resonant | StateFamily::Oscillator) {
                meta["n"] = json!(n);
            }
            sample.write(p, &meta)?;
        }
        None => print!("{}", sample.to_csv()),
    }
    Ok(())
}
