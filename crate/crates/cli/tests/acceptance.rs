//! Acceptance criteria, one line each.
//!
//! Every criterion runs at its stated tolerance and time limit. Criteria in
//! `KNOWN_FAILURES` are reported as FAIL but do not abort the run unless
//! `SO1N_ACCEPTANCE_STRICT` is set; one that starts passing is an error so the
//! list cannot go stale.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use so1n_cli::checks;
use so1n_cli::config::VerifyConfig;
use so1n_cli::run_suite;
use so1n_core::poisson::{calibrate_kernel_sign, random_grid, KERNEL_SIGN};
use so1n_core::principal_series::SampleSet;
use so1n_core::quadrature::sphere_quadrature;
use so1n_core::{sampling, Result, Sign, Tolerances};

/// Stated sign of the flow/horocycle commutator disagrees with the measured one.
const KNOWN_FAILURES: &[u32] = &[11];

const SEED: u64 = 20240611;
const NESTED: f64 = Tolerances::DEFAULT.nested_fd_step;
const FD: f64 = Tolerances::DEFAULT.fd_step;

/// One measured quantity against its bound.
struct Measure {
    label: &'static str,
    value: f64,
    tolerance: f64,
    /// Lower bounds must be exceeded instead of met.
    lower: bool,
}

impl Measure {
    fn upper(label: &'static str, value: f64, tolerance: f64) -> Self {
        Self { label, value, tolerance, lower: false }
    }

    fn lower(label: &'static str, value: f64, tolerance: f64) -> Self {
        Self { label, value, tolerance, lower: true }
    }

    fn ok(&self) -> bool {
        if self.lower {
            self.value > self.tolerance
        } else {
            self.value <= self.tolerance
        }
    }
}

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Result<Vec<Measure>>,
}

fn rng(label: &str) -> impl rand::Rng {
    sampling::stream(SEED, label)
}

fn worst_over_n(label: &'static str, tol: f64, ns: &[usize], f: impl Fn(usize) -> Result<f64>) -> Result<Measure> {
    let mut worst = 0.0_f64;
    for &n in ns {
        worst = worst.max(f(n)?);
    }
    Ok(Measure::upper(label, worst, tol))
}

fn c1() -> Result<Vec<Measure>> {
    Ok(vec![worst_over_n("[H0,U] = ±U", 1e-12, &[1, 2, 3], |n| checks::root_space_law(&mut rng("c1"), n, 100))?])
}

fn c2() -> Result<Vec<Measure>> {
    Ok(vec![worst_over_n("Ad(exp(-tH0))U = exp(∓t)U", 1e-10, &[1, 2, 3], |n| checks::adjoint_eigenvalues(&mut rng("c2"), n, 100))?])
}

fn c3() -> Result<Vec<Measure>> {
    Ok(vec![worst_over_n("reconstruction", 1e-9, &[1, 2, 3], |n| {
        let r = &mut rng("c3");
        Ok(checks::iwasawa_round_trip(r, n, 1000, Sign::Plus)?.max(checks::iwasawa_round_trip(r, n, 1000, Sign::Minus)?))
    })?])
}

fn c4() -> Result<Vec<Measure>> {
    let ns = [1, 2, 3];
    Ok(vec![
        worst_over_n("cocycle", 1e-9, &ns, |n| checks::iwasawa_cocycle(&mut rng("c4-cocycle"), n, 500))?,
        worst_over_n("M-stability", 1e-9, &ns, |n| checks::iwasawa_m_stability(&mut rng("c4-m"), n, 500))?,
        worst_over_n("A-equivariance", 1e-9, &ns, |n| checks::iwasawa_a_equivariance(&mut rng("c4-a"), n, 500))?,
    ])
}

fn c5() -> Result<Vec<Measure>> {
    let ns = [1, 2, 3];
    Ok(vec![
        worst_over_n("differential vs finite differences", 1e-6, &ns, |n| checks::differential_fd(&mut rng("c5-fd"), n, 200, FD))?,
        worst_over_n("conformality", 1e-10, &ns, |n| checks::conformality(&mut rng("c5-conf"), n, 200))?,
    ])
}

fn c6() -> Result<Vec<Measure>> {
    Ok(vec![worst_over_n("projection = exp(H) Y", 1e-9, &[1, 2, 3], |n| checks::algebraic_chain(&mut rng("c6"), n, 200))?])
}

fn c7() -> Result<Vec<Measure>> {
    let mut defect = 0.0_f64;
    let mut control = f64::INFINITY;
    for (n, p) in [(1, 1), (2, 1), (3, 1), (3, 2)] {
        let samples = SampleSet::new(n, p, 100, SEED)?;
        defect = defect.max(checks::compat(&mut rng("c7"), n, p, 50, &samples, 0.0)?);
        control = control.min(checks::compat(&mut rng("c7"), n, p, 50, &samples, 1.0)?);
    }
    Ok(vec![
        Measure::upper("defect at p - n/2", defect, 1e-8),
        Measure::lower("smallest defect at p - n/2 + 1", control, 1e-2),
    ])
}

fn c8() -> Result<Vec<Measure>> {
    let mut hom = 0.0_f64;
    let mut unit = 0.0_f64;
    for n in [1, 2] {
        for p in [0, 1] {
            hom = hom.max(checks::homomorphism(&mut rng("c8-hom"), n, p, 20, &SampleSet::new(n, p, 100, SEED)?)?);
        }
        unit = unit.max(checks::unitarity(&mut rng("c8-unit"), n, 20, &sphere_quadrature(n, 24)?)?);
    }
    Ok(vec![Measure::upper("homomorphism", hom, 1e-8), Measure::upper("unitarity on Re λ = 0", unit, 1e-6)])
}

fn c9() -> Result<Vec<Measure>> {
    Ok(vec![worst_over_n("fusion", 1e-10, &[1, 2, 3], |n| {
        checks::twist(&mut rng("c9"), n, 1, 20, &SampleSet::new(n, 1, 100, SEED)?)
    })?])
}

fn c10() -> Result<Vec<Measure>> {
    let mut worst = 0.0_f64;
    for p in [1, 2] {
        worst = worst.max(checks::lie_shift(&mut rng("c10"), 2, p, 50, FD)?);
    }
    Ok(vec![Measure::upper("|L_X - ∇_X ± p|", worst, 1e-6)])
}

fn c11() -> Result<Vec<Measure>> {
    let mut stated = 0.0_f64;
    let mut opposite = 0.0_f64;
    for n in [1, 2] {
        stated = stated.max(checks::commutation(&mut rng("c11"), n, 50, NESTED, 1.0)?);
        opposite = opposite.max(checks::commutation(&mut rng("c11"), n, 50, NESTED, -1.0)?);
    }
    Ok(vec![
        Measure::upper("[∇_X, U_-] = +U_-", stated, 1e-4),
        // Informational: the same sections against the opposite sign.
        Measure::upper("[∇_X, U_-] = -U_- (for reference)", opposite, 1e-4),
    ])
}

fn c12() -> Result<Vec<Measure>> {
    let ns = [1, 2, 3];
    Ok(vec![
        worst_over_n("reassembly", 1e-14, &ns, |n| checks::tensor_split_reassembly(&mut rng("c12"), n, 200))?,
        worst_over_n("orthogonality", 1e-14, &ns, |n| checks::tensor_split_orthogonality(&mut rng("c12"), n, 200))?,
    ])
}

fn c13() -> Result<Vec<Measure>> {
    let n = 2;
    let cal = calibrate_kernel_sign(SEED)?;
    let agrees = if cal.chosen == Some(KERNEL_SIGN) { 0.0 } else { 1.0 };
    let grid = random_grid(n, 100, 1.0, SEED);
    let residual = checks::eigenvalue_law(n, &grid, &sphere_quadrature(n, 24)?, 0.02)?;
    Ok(vec![
        Measure::upper("calibration picks the built-in kernel sign", agrees, 0.0),
        Measure::upper("eigen residual, λ ∈ {0.7, 1+1i}", residual, 5e-3),
    ])
}

fn c14() -> Result<Vec<Measure>> {
    let cfg = VerifyConfig { seed: SEED, ..VerifyConfig::default() };
    let first = run_suite(&cfg).expect("valid config");
    let second = run_suite(&cfg).expect("valid config");
    let start = Instant::now();
    let same = first.without_timings().to_json() == second.without_timings().to_json();
    let overhead = start.elapsed().as_secs_f64();
    Ok(vec![
        Measure::upper("reports differ", if same { 0.0 } else { 1.0 }, 0.0),
        Measure::upper("comparison overhead [s]", overhead, 1.0),
    ])
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, name: "root-space law", limit: Duration::from_secs(1), run: c1 },
    Criterion { number: 2, name: "adjoint eigenvalue law", limit: Duration::from_secs(1), run: c2 },
    Criterion { number: 3, name: "Iwasawa round trip", limit: Duration::from_secs(10), run: c3 },
    Criterion { number: 4, name: "Iwasawa cocycle, M- and A-equivariance", limit: Duration::from_secs(10), run: c4 },
    Criterion { number: 5, name: "boundary differential and conformality", limit: Duration::from_secs(10), run: c5 },
    Criterion { number: 6, name: "algebraic chain", limit: Duration::from_secs(5), run: c6 },
    Criterion { number: 7, name: "pullback of forms vs principal series", limit: Duration::from_secs(60), run: c7 },
    Criterion { number: 8, name: "homomorphism and unitarity", limit: Duration::from_secs(60), run: c8 },
    Criterion { number: 9, name: "scalar-factor fusion", limit: Duration::from_secs(5), run: c9 },
    Criterion { number: 10, name: "Lie vs covariant derivative", limit: Duration::from_secs(30), run: c10 },
    Criterion { number: 11, name: "flow/horocycle commutation", limit: Duration::from_secs(60), run: c11 },
    Criterion { number: 12, name: "tensor split", limit: Duration::from_secs(1), run: c12 },
    Criterion { number: 13, name: "Poisson eigenvalue law", limit: Duration::from_secs(60), run: c13 },
    // The 1 s bound is on the comparison overhead; the two runs themselves may take longer.
    Criterion { number: 14, name: "determinism", limit: Duration::from_secs(60), run: c14 },
];

fn main() -> ExitCode {
    let strict = std::env::var_os("SO1N_ACCEPTANCE_STRICT").is_some();
    let mut fatal = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match &outcome {
            Ok(measures) => {
                // The reference line of criterion 11 does not decide the verdict.
                let deciding = if c.number == 11 { &measures[..1] } else { &measures[..] };
                let pass = deciding.iter().all(Measure::ok) && elapsed <= c.limit;
                let parts: Vec<String> = measures
                    .iter()
                    .map(|m| format!("{} {:.3e} {} {:.0e}", m.label, m.value, if m.lower { ">" } else { "<=" }, m.tolerance))
                    .collect();
                (pass, parts.join("; "))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let time_note = format!("{:.2}s / {}s", elapsed.as_secs_f64(), c.limit.as_secs());
        println!("criterion {:>2} {} {:<40} [{time_note}] {detail}", c.number, if pass { "PASS" } else { "FAIL" }, c.name);
        let known = KNOWN_FAILURES.contains(&c.number);
        match (pass, known) {
            (false, false) => fatal.push(format!("criterion {} failed", c.number)),
            (false, true) if strict => fatal.push(format!("criterion {} failed (strict mode)", c.number)),
            (true, true) => fatal.push(format!("criterion {} passed but is listed as a known failure", c.number)),
            _ => {}
        }
    }
    if fatal.is_empty() {
        println!("acceptance: done ({} known failure(s): {:?})", KNOWN_FAILURES.len(), KNOWN_FAILURES);
        ExitCode::SUCCESS
    } else {
        for f in &fatal {
            eprintln!("acceptance: {f}");
        }
        ExitCode::FAILURE
    }
}
