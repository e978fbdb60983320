//! Residual computations behind every check id.
//!
//! Each function draws its inputs from the supplied generator and returns the
//! worst residual it saw. The `verify` suites and the acceptance tests share them.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use so1n_core::boundary::{
    boundary_action, boundary_differential, conformal_factor, differential_chain, lift_boundary_point, log_conformal_factor,
    m_perp_coordinates, push_m_perp, visual_kernel,
};
use so1n_core::flow::{
    a_eigen_section, commutation_residual, covariant_derivative, flow_derivative, geodesic_flow, horocycle_invariant_section,
    horocycle_scaling_exponent, lie_derivative_x, matrix_coefficient_section, tensor_split, ScalarShape,
};
use so1n_core::iwasawa::{iwasawa_cocycle_defect, iwasawa_decompose};
use so1n_core::lie::{a_element, group_exp, n_element};
use so1n_core::numeric::{max_abs, max_abs_diff, relative_diff};
use so1n_core::poisson::{self, HyperbolicPoint};
use so1n_core::principal_series::{compat_defect_at, homomorphism_defect, twist_product_defect, unitarity_defect, SampleSet};
use so1n_core::quadrature::SphereQuadrature;
use so1n_core::{
    sampling, AlgebraElement, BoundarySection, BruhatComponents, Complex64, EquivariantSection, FlowPoint, GroupElement,
    ModelTangent, Result, SectionSpace, Sign,
};

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_complex<R: Rng>(rng: &mut R, re: f64, im: f64) -> Complex64 {
    Complex64::new(rng.random_range(-re..=re), rng.random_range(-im..=im))
}

// ---------------------------------------------------------------- lie_core

pub fn root_space_law<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let h0 = AlgebraElement::h0(n);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        for sign in SIGNS {
            let u = AlgebraElement::nilpotent(sign, &sampling::uniform_vector(rng, n, 1.0));
            let bracket = h0.bracket(&u)?;
            let d = max_abs_diff(bracket.mat(), &(u.mat() * sign.value()));
            worst = worst.max(d / max_abs(u.mat()).max(1.0));
        }
    }
    Ok(worst)
}

pub fn adjoint_eigenvalues<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let h0 = AlgebraElement::h0(n);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let t = rng.random_range(-2.0..=2.0);
        let g = group_exp(&h0.scale(-t))?;
        for sign in SIGNS {
            let u = AlgebraElement::nilpotent(sign, &sampling::uniform_vector(rng, n, 1.0));
            let want = u.mat() * (-sign.value() * t).exp();
            worst = worst.max(relative_diff(g.adjoint(&u)?.mat(), &want));
        }
    }
    Ok(worst)
}

/// Largest normalized pairing between distinct Bruhat summands.
pub fn bruhat_orthogonality<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let x = sampling::algebra_element(rng, n, 1.0);
        let parts = x.bruhat().summands();
        let scale = x.inner(&x)?.max(1.0);
        for i in 0..4 {
            for j in i + 1..4 {
                worst = worst.max(parts[i].inner(&parts[j])?.abs() / scale);
            }
        }
        let rebuilt = x.bruhat().reassemble();
        worst = worst.max(max_abs_diff(rebuilt.mat(), x.mat()) / max_abs(x.mat()).max(1.0));
    }
    Ok(worst)
}

/// `|<X, Y> + B(X, θY) / 2n|`, normalized by `|X| |Y|`.
pub fn pairing_consistency<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let x = sampling::algebra_element(rng, n, 1.0);
        let y = sampling::algebra_element(rng, n, 1.0);
        let lhs = x.inner(&y)?;
        let rhs = -x.killing(&y.cartan_involution())? / (2.0 * n as f64);
        let scale = (x.inner(&x)? * y.inner(&y)?).sqrt().max(1.0);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

/// Distance of `exp(N)` to `I + N + N²/2` and to the degree-3 truncation.
pub fn nilpotent_exactness<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let id = DMatrix::<f64>::identity(n + 2, n + 2);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        for sign in SIGNS {
            let x = AlgebraElement::nilpotent(sign, &sampling::uniform_vector(rng, n, 1.0));
            let m = x.mat();
            let m2 = m * m;
            let quadratic = &id + m + &m2 * 0.5;
            let cubic = &quadratic + (&m2 * m) / 6.0;
            let g = group_exp(&x)?;
            worst = worst.max(max_abs_diff(g.mat(), &quadratic)).max(max_abs_diff(g.mat(), &cubic));
        }
    }
    Ok(worst)
}

// ----------------------------------------------------------------- iwasawa

/// Factorizes `k a(t) n^sign(v)` built from known factors.
pub fn iwasawa_round_trip<R: Rng>(rng: &mut R, n: usize, count: usize, sign: Sign) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let (k, t, v) = sampling::iwasawa_triple(rng, n, 3.0, 2.0);
        let g = &(&k * &a_element(n, t)) * &n_element(sign, &v);
        let f = iwasawa_decompose(&g, sign)?;
        let recovered = (f.t - t).abs().max((&f.v - &v).norm()).max(relative_diff(f.k.mat(), k.mat()));
        worst = worst.max(f.residual).max(recovered);
    }
    Ok(worst)
}

/// `H(g m) = H(g)` and `k(g m) = k(g) m` for both signs.
pub fn iwasawa_m_stability<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let m = sampling::m_element(rng, n);
        for sign in SIGNS {
            let plain = iwasawa_decompose(&g, sign)?;
            let moved = iwasawa_decompose(&(&g * &m), sign)?;
            let dk = relative_diff(moved.k.mat(), (&plain.k * &m).mat());
            worst = worst.max((moved.t - plain.t).abs()).max(dk);
        }
    }
    Ok(worst)
}

pub fn iwasawa_a_equivariance<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let h0 = AlgebraElement::h0(n);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let s = rng.random_range(-2.0..=2.0);
        let shifted = &g * &group_exp(&h0.scale(s))?;
        for sign in SIGNS {
            let d = iwasawa_decompose(&shifted, sign)?.t - iwasawa_decompose(&g, sign)?.t - s;
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

pub fn iwasawa_cocycle<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g1 = sampling::group_element(rng, n, 1.0);
        let g2 = sampling::group_element(rng, n, 1.0);
        for sign in SIGNS {
            worst = worst.max(iwasawa_cocycle_defect(&g1, &g2, sign)?);
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------- boundary

/// Recomputes image, factor and differential from ten lifts `k m` of each point.
pub fn lift_independence<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let b = sampling::boundary_point(rng, n);
        let tv = sampling::tangent_frame(rng, &b, 1).remove(0);
        let image = boundary_action(&g, &b)?;
        let h = log_conformal_factor(&g, &b)?;
        let dw = boundary_differential(&g, &tv)?.w;
        let k = lift_boundary_point(&b);
        for _ in 0..10 {
            let km = &k * &sampling::m_element(rng, n);
            let f = iwasawa_decompose(&(&g * &km), Sign::Minus)?;
            let pole = f.k.mat().view((0, n), (n + 1, 1)).column(0).into_owned();
            let w = push_m_perp(&f.k, &m_perp_coordinates(&km, &tv.w)) * f.t.exp();
            let d = (pole - image.coords()).norm().max((f.t - h).abs()).max((w - &dw).norm() / dw.norm().max(1.0));
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// `| |dα_g w| - e^{H} |w| |` relative to `e^{H} |w|`.
pub fn conformality<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let b = sampling::boundary_point(rng, n);
        for tv in sampling::tangent_frame(rng, &b, n) {
            let factor = conformal_factor(&g, &b)?;
            let image = boundary_differential(&g, &tv)?;
            worst = worst.max((image.w.norm() - factor * tv.w.norm()).abs() / (factor * tv.w.norm()));
        }
    }
    Ok(worst)
}

/// Light-cone picture of the action: `g (b, -1)` is proportional to `(g·b, -1)`.
fn light_cone_image(g: &GroupElement, x: &DVector<f64>) -> DVector<f64> {
    let n = g.n();
    let mut v = DVector::zeros(n + 2);
    v.rows_mut(0, n + 1).copy_from(x);
    v[n + 1] = -1.0;
    let moved = g.apply(&v);
    moved.rows(0, n + 1) / (-moved[n + 1])
}

/// Exact differential against a central difference of the light-cone map along
/// the great circle through `b` in direction `w`.
pub fn differential_fd<R: Rng>(rng: &mut R, n: usize, count: usize, step: f64) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let b = sampling::boundary_point(rng, n);
        let tv = sampling::tangent_frame(rng, &b, 1).remove(0);
        let curve = |s: f64| b.coords() * s.cos() + &tv.w * s.sin();
        let fd = (light_cone_image(&g, &curve(step)) - light_cone_image(&g, &curve(-step))) / (2.0 * step);
        let exact = boundary_differential(&g, &tv)?;
        let image_gap = (light_cone_image(&g, b.coords()) - exact.base.coords()).norm();
        worst = worst.max((fd - &exact.w).norm() / exact.w.norm()).max(image_gap);
    }
    Ok(worst)
}

/// The `m`-complement coordinates of `pr_k^-(Ad(a n) Y)` against `e^{H} Y`.
pub fn algebraic_chain<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let b = sampling::boundary_point(rng, n);
        let y = sampling::uniform_vector(rng, n, 1.0);
        let (projected, h) = differential_chain(&g, &b, &y)?;
        let got = DVector::from_fn(n, |i, _| projected.mat()[(i, n)]);
        let want = &y * h.exp();
        worst = worst.max((got - &want).norm() / want.norm().max(1e-300));
    }
    Ok(worst)
}

/// `Σ w f(g b) e^{n H} = Σ w f(b)` for `f(b) = exp(c·b)`, relative.
pub fn change_of_variables<R: Rng>(rng: &mut R, n: usize, count: usize, quad: &SphereQuadrature) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 0.5);
        let coef = sampling::uniform_vector(rng, n + 1, 1.0);
        let f = |b: &DVector<f64>| coef.dot(b).exp();
        let mut err = None;
        let moved = quad.integrate(|b| match (boundary_action(&g, b), conformal_factor(&g, b)) {
            (Ok(image), Ok(factor)) => f(image.coords()) * factor.powi(n as i32),
            (Err(e), _) | (_, Err(e)) => {
                err.get_or_insert(e);
                0.0
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let plain = quad.integrate(|b| f(b.coords()));
        worst = worst.max((moved - plain).abs() / plain.abs());
    }
    Ok(worst)
}

pub fn kernel_cocycle<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let x = sampling::group_element(rng, n, 1.0);
        let y = sampling::group_element(rng, n, 1.0);
        let z = sampling::group_element(rng, n, 1.0);
        let b = sampling::boundary_point(rng, n);
        let lhs = visual_kernel(&x, &b, &y)? * visual_kernel(&y, &b, &z)?;
        let rhs = visual_kernel(&x, &b, &z)?;
        worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    Ok(worst)
}

// -------------------------------------------------------- principal_series

/// Polynomial `p`-form with random coefficients.
pub fn test_form<R: Rng>(rng: &mut R, n: usize, p: usize) -> BoundarySection {
    let fields = (0..p)
        .map(|_| (DMatrix::from_fn(n + 1, n + 1, |_, _| rng.random_range(-1.0..1.0)), sampling::uniform_vector(rng, n + 1, 1.0)))
        .collect();
    let phi = (1.0, sampling::uniform_vector(rng, n + 1, 0.5), sampling::uniform_vector(rng, n + 1, 0.5));
    BoundarySection::linear_test_form(n, p, phi, fields)
}

pub fn homomorphism<R: Rng>(rng: &mut R, n: usize, p: usize, count: usize, samples: &SampleSet) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let lambda = random_complex(rng, 1.0, 1.0);
        let s = test_form(rng, n, p);
        let g1 = sampling::group_element(rng, n, 0.8);
        let g2 = sampling::group_element(rng, n, 0.8);
        worst = worst.max(homomorphism_defect(lambda, &g1, &g2, &s, samples)?);
    }
    Ok(worst)
}

/// Norm change of `π^{iy}(g) f`, with `Re λ = 0`.
pub fn unitarity<R: Rng>(rng: &mut R, n: usize, count: usize, quad: &SphereQuadrature) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let lambda = Complex64::new(0.0, rng.random_range(-2.0..=2.0));
        let f = test_form(rng, n, 0);
        let g = sampling::group_element(rng, n, 0.5);
        worst = worst.max(unitarity_defect(lambda, &g, &f, quad)?);
    }
    Ok(worst)
}

/// Compatibility defect at `λ = p - n/2 + shift`. With `shift = 0` the worst
/// case is returned; otherwise the smallest defect, which must stay large.
pub fn compat<R: Rng>(rng: &mut R, n: usize, p: usize, count: usize, samples: &SampleSet, shift: f64) -> Result<f64> {
    let lambda = c(p as f64 - n as f64 / 2.0 + shift);
    let mut worst = 0.0_f64;
    let mut least = f64::INFINITY;
    for _ in 0..count {
        let s = test_form(rng, n, p);
        let g = sampling::group_element(rng, n, 1.0);
        let d = compat_defect_at(lambda, &g, &s, samples)?;
        worst = worst.max(d);
        least = least.min(d);
    }
    Ok(if shift == 0.0 { worst } else { least })
}

pub fn twist<R: Rng>(rng: &mut R, n: usize, p: usize, count: usize, samples: &SampleSet) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let (l1, l2) = (random_complex(rng, 1.0, 1.0), random_complex(rng, 1.0, 1.0));
        let f = test_form(rng, n, 0);
        let s = test_form(rng, n, p);
        let g = sampling::group_element(rng, n, 1.0);
        worst = worst.max(twist_product_defect(l1, l2, &g, &f, &s, samples)?);
    }
    Ok(worst)
}

// ----------------------------------------------------------- flow_calculus

fn random_shape<R: Rng>(rng: &mut R, n: usize) -> ScalarShape {
    ScalarShape { alpha: sampling::uniform_vector(rng, n + 2, 0.3), beta: sampling::uniform_vector(rng, n + 2, 0.3) }
}

pub fn random_section<R: Rng>(rng: &mut R, n: usize, space: SectionSpace) -> Result<EquivariantSection> {
    let coeffs = (0..space.rank()).map(|_| sampling::uniform_vector(rng, n + 2, 1.0)).collect();
    matrix_coefficient_section(n, space, random_shape(rng, n), coeffs)
}

/// Spaces a random section is drawn from, cycling with `i`.
fn space_for(n: usize, i: usize) -> SectionSpace {
    match i % 4 {
        0 => SectionSpace::Exterior(Sign::Plus, 1.min(n)),
        1 => SectionSpace::Exterior(Sign::Minus, n),
        2 => SectionSpace::PlusMinus,
        _ => SectionSpace::MinusMinus,
    }
}

/// Rate of `U_- u_μ` along `H0` against `-(μ + offset)`, for eigenfamilies with
/// `u_μ(g e^{t H0}) = e^{-μ t} u_μ(g)`.
pub fn shift_exponent<R: Rng>(rng: &mut R, n: usize, count: usize, step: f64, offset: f64) -> Result<f64> {
    let mut worst = 0.0_f64;
    for i in 0..count {
        let space = space_for(n, i);
        let a = Complex64::new(rng.random_range(0.0..1.0), rng.random_range(-0.5..0.5));
        let b = Complex64::new(rng.random_range(0.0..1.0), rng.random_range(-0.5..0.5));
        let mu = b - a;
        let coeffs = (0..space.rank()).map(|_| sampling::uniform_vector(rng, n + 2, 1.0)).collect();
        let u = a_eigen_section(n, space, a, b, rng.random_range(-0.3..0.3), coeffs)?;
        let g = sampling::group_element(rng, n, 0.8);
        let rate = horocycle_scaling_exponent(&u, &g, step)?;
        worst = worst.max((rate + mu + offset).norm());
    }
    Ok(worst)
}

pub fn anosov_rates<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let a = rng.random_range(-1.0..=1.0);
        let vp = sampling::uniform_vector(rng, n, 1.0);
        let vm = sampling::uniform_vector(rng, n, 1.0);
        let t = rng.random_range(-3.0..=3.0);
        let out = flow_derivative(t, &ModelTangent::new(g, BruhatComponents::tangent(a, vp.clone(), vm.clone()))?)?;
        let v = out.components();
        // Relative to the size of the transported vector.
        let scale = (vp.norm() * (-t).exp()).max(vm.norm() * t.exp()).max(1.0);
        let dp = (&v.nplus - &vp * (-t).exp()).norm();
        let dm = (&v.nminus - &vm * t.exp()).norm();
        worst = worst.max(dp.max(dm).max((v.a_part - a).abs()).max(max_abs(&v.m_part)) / scale);
    }
    Ok(worst)
}

/// Flow and flow derivative computed from `g` and from `g m` describe the same
/// point and tangent vector of `G/M`.
pub fn flow_m_invariance<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let g = sampling::group_element(rng, n, 1.0);
        let m = sampling::m_element(rng, n);
        let gm = &g * &m;
        let t = rng.random_range(-2.0..=2.0);
        let a = geodesic_flow(t, &FlowPoint::new(g.clone()))?;
        let b = geodesic_flow(t, &FlowPoint::new(gm.clone()))?;
        worst = worst.max(a.coset_defect(&b)).max((a.base_point() - b.base_point()).norm());

        let v = BruhatComponents::tangent(rng.random_range(-1.0..=1.0), sampling::uniform_vector(rng, n, 1.0), sampling::uniform_vector(rng, n, 1.0));
        let minv = m.inverse();
        let v_m = minv.adjoint(&v.reassemble())?.bruhat();
        let out = flow_derivative(t, &ModelTangent::new(g, v)?)?;
        let out_m = flow_derivative(t, &ModelTangent::new(gm, v_m)?)?;
        let want = minv.adjoint(&out.components().reassemble())?;
        let scale = max_abs(want.mat()).max(1.0);
        worst = worst.max(max_abs_diff(out_m.components().reassemble().mat(), want.mat()) / scale);
    }
    Ok(worst)
}

/// `u(g m) = m^{-1}·u(g)` for every section family.
pub fn section_equivariance<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for i in 0..count {
        let space = space_for(n, i);
        let coeffs = (0..space.rank()).map(|_| sampling::uniform_vector(rng, n + 2, 1.0)).collect();
        let sections = [
            random_section(rng, n, space)?,
            a_eigen_section(n, space, c(0.7), c(-0.4), 0.2, coeffs)?,
            horocycle_invariant_section(n, SectionSpace::MinusMinus, random_shape(rng, n))?,
        ];
        let g = sampling::group_element(rng, n, 1.0);
        let m = sampling::m_element(rng, n);
        for s in &sections {
            worst = worst.max(s.equivariance_defect(&g, &m) / s.eval(&g).max_abs().max(1.0));
        }
    }
    Ok(worst)
}

/// `|L_X u - ∇_X u ± p u|` for sections of `Λ^p (n^±)^*`.
pub fn lie_shift<R: Rng>(rng: &mut R, n: usize, p: usize, count: usize, step: f64) -> Result<f64> {
    let x = BruhatComponents::tangent(1.0, DVector::zeros(n), DVector::zeros(n));
    let mut worst = 0.0_f64;
    for i in 0..count {
        let sign = SIGNS[i % 2];
        let u = random_section(rng, n, SectionSpace::Exterior(sign, p))?;
        let g = sampling::group_element(rng, n, 1.0);
        let lie = lie_derivative_x(&u, &g, step)?;
        let cov = covariant_derivative(&u, &x, &g, step)?;
        let want = u.eval(&g).scale(c(-sign.value() * p as f64));
        worst = worst.max((&lie - &cov).distance(&want));
    }
    Ok(worst)
}

/// `|(∇_X U_- - U_- ∇_X - coefficient U_-) u|` by nested differences.
pub fn commutation<R: Rng>(rng: &mut R, n: usize, count: usize, step: f64, coefficient: f64) -> Result<f64> {
    let mut worst = 0.0_f64;
    for i in 0..count {
        let u = random_section(rng, n, space_for(n, i))?;
        let g = sampling::group_element(rng, n, 0.8);
        worst = worst.max(commutation_residual(&u, &g, coefficient, step)?);
    }
    Ok(worst)
}

fn random_bilinear<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| random_complex(rng, 1.0, 1.0))
}

pub fn tensor_split_reassembly<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let t = random_bilinear(rng, n);
        let split = tensor_split(&t)?;
        worst = worst.max((split.reassemble() - &t).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

pub fn tensor_split_orthogonality<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let t = random_bilinear(rng, n);
        let split = tensor_split(&t)?;
        worst = worst.max(split.cross_pairing() / t.norm_squared().max(1.0));
    }
    Ok(worst)
}

// ----------------------------------------------------------------- poisson

/// Boundary function used by the Poisson checks: `Y_1^0` where available, the
/// pole coordinate on `S^3` (the same function up to normalization).
pub fn poisson_test_function(n: usize) -> Result<BoundarySection> {
    if n <= 2 {
        BoundarySection::spherical_harmonic(n, 1, if n == 1 { 1 } else { 0 })
    } else {
        Ok(BoundarySection::scalar(n, move |b| c(b[n])))
    }
}

/// Spectral parameters exercised by the eigenvalue checks.
pub const POISSON_LAMBDAS: [Complex64; 2] = [Complex64::new(0.7, 0.0), Complex64::new(1.0, 1.0)];

pub fn eigenvalue_law(n: usize, grid: &[HyperbolicPoint], quad: &SphereQuadrature, radius: f64) -> Result<f64> {
    let f = poisson_test_function(n)?;
    let mut worst = 0.0_f64;
    for lambda in POISSON_LAMBDAS {
        worst = worst.max(poisson::eigen_residual(lambda, &f, grid, quad, radius)?);
    }
    Ok(worst)
}

pub fn poisson_equivariance<R: Rng>(rng: &mut R, n: usize, count: usize, grid: &[HyperbolicPoint], quad: &SphereQuadrature) -> Result<f64> {
    let f = poisson_test_function(n)?;
    let mut worst = 0.0_f64;
    for i in 0..count {
        let g = sampling::group_element(rng, n, 0.3);
        worst = worst.max(poisson::equivariance_defect(POISSON_LAMBDAS[i % 2], &f, &g, grid, quad)?);
    }
    Ok(worst)
}

pub fn quadrature_convergence(n: usize, grid: &[HyperbolicPoint], quad: &SphereQuadrature) -> Result<f64> {
    let f = poisson_test_function(n)?;
    let mut worst = 0.0_f64;
    for lambda in POISSON_LAMBDAS {
        worst = worst.max(poisson::quadrature_convergence(lambda, &f, grid, quad)?);
    }
    Ok(worst)
}
