//! The non-verification subcommands. Each returns its output as text.

use std::path::Path;

use nalgebra::DVector;

use so1n_core::boundary::{boundary_action, conformal_factor};
use so1n_core::iwasawa::iwasawa_decompose;
use so1n_core::lie::{a_element, check_group_membership};
use so1n_core::matrix_io::{parse_matrix, write_matrix};
use so1n_core::poisson::{default_directions, mean_value_laplacian, parse_grid, PoissonTransform};
use so1n_core::quadrature::sphere_quadrature;
use so1n_core::{sampling, BoundaryPoint, BoundarySection, GroupElement, Sign};

use crate::config::{OrbitConfig, PoissonEvalConfig};
use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_group_element(path: &Path) -> Result<GroupElement, CliError> {
    let (n, mat) = parse_matrix(&read(path)?).map_err(CliError::Input)?;
    check_group_membership(mat, n).map_err(CliError::Input)
}

fn format_vector(v: &DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Iwasawa factors of the matrix stored at `path`.
pub fn decompose(path: &Path, sign: Sign) -> Result<String, CliError> {
    let g = load_group_element(path)?;
    let f = iwasawa_decompose(&g, sign)?;
    let symbol = match sign {
        Sign::Plus => '+',
        Sign::Minus => '-',
    };
    let mut out = format!("sign = {symbol}\nt = {}\nv = {}\nresidual = {:e}\nk =\n", f.t, format_vector(&f.v), f.residual);
    out.push_str(&write_matrix(g.n(), f.k.mat()));
    Ok(out)
}

fn csv_text(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// CSV of `x`, `Re P_λ f`, `Im P_λ f` and the local eigen residual per grid point.
pub fn poisson_eval(cfg: &PoissonEvalConfig) -> Result<String, CliError> {
    let n = cfg.n;
    let f = BoundarySection::from_name(n, &cfg.family).map_err(CliError::Input)?;
    if f.degree() != 0 {
        return Err(CliError::Config(format!("family {:?} is not a function", cfg.family)));
    }
    let grid = parse_grid(n, &cfg.grid, cfg.seed).map_err(CliError::Input)?;
    let quad = sphere_quadrature(n, cfg.quad_degree)?;
    let directions = default_directions(n)?;
    let transform = PoissonTransform::new(cfg.lambda, &f, &quad)?;
    let eigenvalue = cfg.lambda * (n as f64 - cfg.lambda);

    let mut header: Vec<String> = (0..n + 2).map(|i| format!("x{i}")).collect();
    header.extend(["re", "im", "residual"].map(String::from));
    let mut rows = Vec::with_capacity(grid.len());
    for x in &grid {
        let value = transform.eval(x)?;
        let lap = mean_value_laplacian(|y| transform.eval_unchecked(y), x, cfg.radius, &directions)?;
        let residual = (lap - eigenvalue * value).norm() / value.norm().max(1e-8);
        let mut row: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
        row.extend([value.re.to_string(), value.im.to_string(), residual.to_string()]);
        rows.push(row);
    }
    csv_text(header, rows)
}

/// `identity`, `a:<t>`, `rotation`, `random:<scale>` or `matrix:<path>`.
pub fn parse_generator(n: usize, spec: &str, seed: u64) -> Result<GroupElement, CliError> {
    let mut rng = sampling::stream(seed, "orbit-generator");
    let spec = spec.trim();
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|e| CliError::Config(format!("generator {spec:?}: {e}")));
    let g = match kind {
        "identity" => GroupElement::identity(n),
        "a" => a_element(n, number(arg)?),
        "rotation" => sampling::k_element(&mut rng, n),
        "random" => sampling::group_element(&mut rng, n, number(arg)?),
        "matrix" => {
            let g = load_group_element(Path::new(arg))?;
            if g.n() != n {
                return Err(CliError::Config(format!("generator matrix has n = {}, config has n = {n}", g.n())));
            }
            g
        }
        _ => return Err(CliError::Config(format!("unknown generator {spec:?}"))),
    };
    Ok(g)
}

fn parse_start(n: usize, spec: &str, seed: u64) -> Result<BoundaryPoint, CliError> {
    if spec.trim() == "random" {
        return Ok(sampling::boundary_point(&mut sampling::stream(seed, "orbit-start"), n));
    }
    let coords = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("start {spec:?}: {e}")))?;
    if coords.len() != n + 1 {
        return Err(CliError::Config(format!("start needs {} coordinates", n + 1)));
    }
    BoundaryPoint::from_direction(DVector::from_vec(coords)).map_err(CliError::Input)
}

/// CSV of `b_k = g^k · b_0` with the conformal factor of `g^k` at `b_0`.
pub fn boundary_orbit(cfg: &OrbitConfig) -> Result<String, CliError> {
    let n = cfg.n;
    let g = parse_generator(n, &cfg.generator, cfg.seed)?;
    let mut b = parse_start(n, &cfg.start, cfg.seed)?;
    let mut factor = 1.0;

    let mut header = vec!["step".to_string()];
    header.extend((0..=n).map(|i| format!("b{i}")));
    header.push("factor".into());
    let row = |step: usize, b: &BoundaryPoint, factor: f64| {
        let mut r = vec![step.to_string()];
        r.extend(b.coords().iter().map(|c| c.to_string()));
        r.push(factor.to_string());
        r
    };
    let mut rows = vec![row(0, &b, factor)];
    for step in 1..=cfg.steps {
        factor *= conformal_factor(&g, &b)?;
        b = boundary_action(&g, &b)?;
        rows.push(row(step, &b, factor));
    }
    csv_text(header, rows)
}
