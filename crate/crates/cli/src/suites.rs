use std::collections::BTreeMap;
use std::time::Instant;

use so1n_core::poisson::{self, parse_grid, HyperbolicPoint, KERNEL_SIGN};
use so1n_core::principal_series::SampleSet;
use so1n_core::quadrature::{sphere_quadrature, SphereQuadrature};
use so1n_core::{sampling, Sign, Tolerances};

use crate::checks;
use crate::config::VerifyConfig;
use crate::error::CliError;
use crate::registry::{self, Bound, Check};
use crate::report::{CheckRecord, VerifyReport};

/// Inputs shared by the checks of one run, built lazily.
struct Context<'a> {
    config: &'a VerifyConfig,
    quad: Option<SphereQuadrature>,
    grid: Option<Vec<HyperbolicPoint>>,
    conventions: BTreeMap<String, f64>,
}

impl Context<'_> {
    fn quad(&mut self) -> so1n_core::Result<&SphereQuadrature> {
        if self.quad.is_none() {
            self.quad = Some(sphere_quadrature(self.config.n, self.config.quad_degree)?);
        }
        Ok(self.quad.as_ref().unwrap())
    }

    fn grid(&mut self) -> so1n_core::Result<Vec<HyperbolicPoint>> {
        if self.grid.is_none() {
            self.grid = Some(parse_grid(self.config.n, &self.config.grid, self.config.seed)?);
        }
        Ok(self.grid.clone().unwrap())
    }

    fn samples(&self, p: usize) -> so1n_core::Result<SampleSet> {
        SampleSet::new(self.config.n, p, 100, self.config.seed)
    }
}

fn run_check(check: &Check, ctx: &mut Context) -> so1n_core::Result<f64> {
    let cfg = ctx.config;
    let n = cfg.n;
    let step = cfg.fd_step;
    let nested = Tolerances::DEFAULT.nested_fd_step;
    let rng = &mut sampling::stream(cfg.seed, check.id);
    match check.id {
        "lie.root_space_law" => checks::root_space_law(rng, n, 100),
        "lie.adjoint_eigenvalues" => checks::adjoint_eigenvalues(rng, n, 100),
        "lie.bruhat_orthogonality" => checks::bruhat_orthogonality(rng, n, 100),
        "lie.pairing_consistency" => checks::pairing_consistency(rng, n, 100),
        "lie.nilpotent_exactness" => checks::nilpotent_exactness(rng, n, 100),
        "iwasawa.round_trip" => {
            let plus = checks::iwasawa_round_trip(rng, n, 1000, Sign::Plus)?;
            Ok(plus.max(checks::iwasawa_round_trip(rng, n, 1000, Sign::Minus)?))
        }
        "iwasawa.m_stability" => checks::iwasawa_m_stability(rng, n, 100),
        "iwasawa.a_equivariance" => checks::iwasawa_a_equivariance(rng, n, 100),
        "iwasawa.cocycle" => checks::iwasawa_cocycle(rng, n, 500),
        "boundary.lift_independence" => checks::lift_independence(rng, n, 20),
        "boundary.conformality" => checks::conformality(rng, n, 200),
        "boundary.differential_fd" => checks::differential_fd(rng, n, 200, step),
        "boundary.algebraic_chain" => checks::algebraic_chain(rng, n, 200),
        "boundary.change_of_variables" => checks::change_of_variables(rng, n, 10, ctx.quad()?),
        "boundary.kernel_cocycle" => checks::kernel_cocycle(rng, n, 100),
        "principal_series.homomorphism" => {
            let mut worst = 0.0_f64;
            for p in 0..=1 {
                worst = worst.max(checks::homomorphism(rng, n, p, 10, &ctx.samples(p)?)?);
            }
            Ok(worst)
        }
        "principal_series.unitarity" => checks::unitarity(rng, n, 10, ctx.quad()?),
        "principal_series.compat" | "principal_series.compat_shifted_parameter" => {
            let shift = if check.id == "principal_series.compat" { 0.0 } else { 1.0 };
            let mut out: Option<f64> = None;
            for p in 1..=n {
                let d = checks::compat(rng, n, p, 20, &ctx.samples(p)?, shift)?;
                out = Some(match out {
                    None => d,
                    Some(prev) if shift == 0.0 => prev.max(d),
                    Some(prev) => prev.min(d),
                });
            }
            Ok(out.unwrap_or(0.0))
        }
        "principal_series.twist" => checks::twist(rng, n, 1, 10, &ctx.samples(1)?),
        "flow.shift_exponent" => checks::shift_exponent(rng, n, 20, nested, -1.0),
        "flow.shift_exponent_mu_plus_one" => checks::shift_exponent(rng, n, 20, nested, 1.0),
        "flow.anosov_rates" => checks::anosov_rates(rng, n, 100),
        "flow.m_invariance" => checks::flow_m_invariance(rng, n, 50),
        "flow.section_equivariance" => checks::section_equivariance(rng, n, 20),
        "flow.lie_shift" => {
            let mut worst = 0.0_f64;
            for p in 0..=n {
                worst = worst.max(checks::lie_shift(rng, n, p, 10, step)?);
            }
            Ok(worst)
        }
        "flow.commutation" => checks::commutation(rng, n, 20, nested, 1.0),
        "flow.commutation_opposite_sign" => checks::commutation(rng, n, 20, nested, -1.0),
        "flow.tensor_split_reassembly" => checks::tensor_split_reassembly(rng, n, 100),
        "flow.tensor_split_orthogonality" => checks::tensor_split_orthogonality(rng, n, 100),
        "poisson.kernel_sign" => {
            let cal = poisson::calibrate_kernel_sign(cfg.seed)?;
            ctx.conventions.insert("kernel_sign_calibration.plus_residual".into(), cal.plus_residual);
            ctx.conventions.insert("kernel_sign_calibration.minus_residual".into(), cal.minus_residual);
            Ok(if KERNEL_SIGN > 0.0 { cal.plus_residual } else { cal.minus_residual })
        }
        "poisson.eigenvalue_law" => {
            let grid = ctx.grid()?;
            checks::eigenvalue_law(n, &grid, ctx.quad()?, cfg.radius)
        }
        "poisson.equivariance" => {
            let grid = ctx.grid()?;
            checks::poisson_equivariance(rng, n, 3, &grid, ctx.quad()?)
        }
        "poisson.quadrature_convergence" => {
            let grid = ctx.grid()?;
            checks::quadrature_convergence(n, &grid, ctx.quad()?)
        }
        other => unreachable!("check {other} has no implementation"),
    }
}

fn passes(residual: f64, tolerance: f64, bound: Bound) -> bool {
    match bound {
        Bound::Upper => residual <= tolerance,
        Bound::Lower => residual > tolerance,
    }
}

/// Runs the selected suites in the configured order.
pub fn run_suite(config: &VerifyConfig) -> Result<VerifyReport, CliError> {
    config.validate()?;
    let mut ctx = Context { config, quad: None, grid: None, conventions: BTreeMap::new() };
    ctx.conventions.insert("kernel_sign".into(), KERNEL_SIGN);
    let mut records = Vec::new();
    for suite in &config.suites {
        for check in registry::suite_checks(suite) {
            let tolerance = config.tolerances.get(check.id).copied().unwrap_or(check.tolerance);
            let start = Instant::now();
            let outcome = run_check(check, &mut ctx);
            let wall_time = start.elapsed().as_secs_f64();
            let (residual, error) = match outcome {
                Ok(r) => (r, None),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            let anchor = registry::invariant(check.invariant).map_or("", |i| i.anchor);
            records.push(CheckRecord {
                suite: suite.clone(),
                id: check.id.to_string(),
                anchor: anchor.to_string(),
                residual,
                tolerance,
                bound: check.bound,
                pass: error.is_none() && passes(residual, tolerance, check.bound),
                wall_time,
                error,
            });
        }
    }
    Ok(VerifyReport::new(config.clone(), ctx.conventions, records))
}
