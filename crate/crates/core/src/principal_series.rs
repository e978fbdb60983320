//! Principal series representations on `p`-forms of the boundary sphere.
//!
//! A section is stored as an ordinary complex `p`-form on `S^n`. Its value at
//! `k ∈ K` on `X_1, ..., X_p ∈ m^{perp k} ≅ R^n` is the form evaluated at
//! `k e_pole` on the vectors `k X_j e_pole`, so right `M`-equivariance holds
//! automatically.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::boundary::{
    boundary_action, boundary_differential, lift_boundary_point, m_perp_coordinates, push_m_perp, BoundaryPoint,
    TangentVector,
};
use crate::error::{Error, Result};
use crate::iwasawa::iwasawa_decompose;
use crate::lie::{GroupElement, Sign};
use crate::quadrature::{sphere_quadrature, SphereQuadrature};
use crate::sampling;

type FormFn = dyn Fn(&BoundaryPoint, &[DVector<f64>]) -> Result<Complex64> + Send + Sync;

/// A smooth complex `p`-form on `S^n`, given in closed form.
#[derive(Clone)]
pub struct BoundarySection {
    n: usize,
    p: usize,
    eval: Arc<FormFn>,
}

impl std::fmt::Debug for BoundarySection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundarySection").field("n", &self.n).field("p", &self.p).finish_non_exhaustive()
    }
}

impl BoundarySection {
    pub fn from_fn<F>(n: usize, p: usize, f: F) -> Self
    where
        F: Fn(&BoundaryPoint, &[DVector<f64>]) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self { n, p, eval: Arc::new(f) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn evaluate(&self, b: &BoundaryPoint, ws: &[DVector<f64>]) -> Result<Complex64> {
        if ws.len() != self.p {
            return Err(Error::InvalidArgument(format!("{}-form evaluated on {} vectors", self.p, ws.len())));
        }
        if b.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: b.n() });
        }
        (self.eval)(b, ws)
    }

    /// Function on the sphere (`p = 0`).
    pub fn scalar<F>(n: usize, f: F) -> Self
    where
        F: Fn(&DVector<f64>) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_fn(n, 0, move |b, _| Ok(f(b.coords())))
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::scalar(n, move |_| c)
    }

    /// Restriction of the ambient coordinate 1-form `dx_i`.
    pub fn coordinate_form(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(Error::InvalidArgument(format!("coordinate index {i} out of range 0..={n}")));
        }
        Ok(Self::from_fn(n, 1, move |_, ws| Ok(Complex64::new(ws[0][i], 0.0))))
    }

    /// `φ(b) · det[a_i(b) · w_j]`: restriction of an ambient `p`-form built from
    /// `p` vector fields on `R^{n+1}`.
    pub fn ambient_form<P, V>(n: usize, p: usize, phi: P, fields: V) -> Self
    where
        P: Fn(&DVector<f64>) -> Complex64 + Send + Sync + 'static,
        V: Fn(&DVector<f64>) -> Vec<DVector<f64>> + Send + Sync + 'static,
    {
        Self::from_fn(n, p, move |b, ws| {
            let a = fields(b.coords());
            let gram = DMatrix::from_fn(p, p, |i, j| a[i].dot(&ws[j]));
            let det = if p == 0 { 1.0 } else { gram.determinant() };
            Ok(phi(b.coords()) * det)
        })
    }

    /// Polynomial test form: `φ(b) = c + d·b + i e·b` and fields `a_i(b) = A_i b + c_i`.
    pub fn linear_test_form(
        n: usize,
        p: usize,
        phi: (f64, DVector<f64>, DVector<f64>),
        fields: Vec<(DMatrix<f64>, DVector<f64>)>,
    ) -> Self {
        let (c, d, e) = phi;
        Self::ambient_form(
            n,
            p,
            move |b| Complex64::new(c + d.dot(b), e.dot(b)),
            move |b| fields.iter().map(|(a, c)| a * b + c).collect(),
        )
    }

    /// Complex spherical harmonic `Y_l^m`: `e^{imφ}` on the circle (`l = |m|`),
    /// the orthonormal `Y_l^m(θ, φ)` with polar axis `e_pole` on `S^2`.
    pub fn spherical_harmonic(n: usize, l: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > l {
            return Err(Error::InvalidArgument(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        match n {
            1 => {
                if m.unsigned_abs() as usize != l {
                    return Err(Error::InvalidArgument("on the circle l must equal |m|".into()));
                }
                Ok(Self::scalar(1, move |b| Complex64::from_polar(1.0, m as f64 * b[1].atan2(b[0]))))
            }
            2 => {
                let am = m.unsigned_abs() as usize;
                let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l - am, l + am)).sqrt();
                Ok(Self::scalar(2, move |b| {
                    let plm = associated_legendre(l, am, b[2].clamp(-1.0, 1.0));
                    let phase = Complex64::from_polar(1.0, m as f64 * b[1].atan2(b[0]));
                    let y = phase * (norm * plm);
                    if m < 0 && am % 2 == 1 {
                        -y
                    } else {
                        y
                    }
                }))
            }
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    /// Smooth bump `exp(-(1 - c·b) / width^2)` centred at `c`.
    pub fn bump(center: BoundaryPoint, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidArgument("bump width must be positive".into()));
        }
        let n = center.n();
        Ok(Self::scalar(n, move |b| Complex64::new((-(1.0 - center.coords().dot(b)) / (width * width)).exp(), 0.0)))
    }

    /// Pointwise product `f · s` of a function and a form.
    pub fn times(f: &BoundarySection, s: &BoundarySection) -> Result<Self> {
        if f.p != 0 {
            return Err(Error::InvalidArgument("left factor must be a function".into()));
        }
        if f.n != s.n {
            return Err(Error::DimensionMismatch { left: f.n, right: s.n });
        }
        let (f, s) = (f.clone(), s.clone());
        Ok(Self::from_fn(s.n, s.p, move |b, ws| Ok(f.evaluate(b, &[])? * s.evaluate(b, ws)?)))
    }

    /// Named test families:
    /// `spherical-harmonic:l,m`, `coordinate-form:i`, `bump:axis,width`, `constant:c`.
    pub fn from_name(n: usize, spec: &str) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums: Vec<&str> = args.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let num = |i: usize| -> Result<f64> {
            nums.get(i)
                .ok_or_else(|| Error::Parse(format!("{spec:?}: missing argument {}", i + 1)))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{spec:?}: {e}")))
        };
        let int = |i: usize| -> Result<i64> {
            let x = num(i)?;
            if x.fract() != 0.0 {
                return Err(Error::Parse(format!("{spec:?}: argument {} must be an integer", i + 1)));
            }
            Ok(x as i64)
        };
        match name.trim() {
            "spherical-harmonic" => {
                let l = int(0)?;
                if l < 0 {
                    return Err(Error::Parse(format!("{spec:?}: l must be non-negative")));
                }
                Self::spherical_harmonic(n, l as usize, int(1)?)
            }
            "coordinate-form" => {
                let i = int(0)?;
                if i < 0 {
                    return Err(Error::Parse(format!("{spec:?}: index must be non-negative")));
                }
                Self::coordinate_form(n, i as usize)
            }
            "bump" => {
                let axis = int(0)?;
                if axis < 0 || axis as usize > n {
                    return Err(Error::Parse(format!("{spec:?}: axis out of range")));
                }
                let mut c = DVector::zeros(n + 1);
                c[axis as usize] = 1.0;
                Self::bump(BoundaryPoint::new(c)?, num(1)?)
            }
            "constant" => Ok(Self::constant(n, Complex64::new(num(0)?, 0.0))),
            other => Err(Error::Parse(format!("unknown section family {other:?}"))),
        }
    }
}

fn factorial_ratio(a: usize, b: usize) -> f64 {
    // a! / b! for a <= b
    ((a + 1)..=b).fold(1.0, |acc, k| acc / k as f64)
}

/// `P_l^m(x)` with the Condon–Shortley phase.
fn associated_legendre(l: usize, m: usize, x: f64) -> f64 {
    let mut pmm = 1.0;
    if m > 0 {
        let s = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * s;
            fact += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// `π^λ_{τ_p}(g)`: at `(b; w)` the value is
/// `e^{(λ + n/2) H^-(g^{-1}k)} s(k' e_pole; k' X_1 e_pole, ...)` with
/// `k' = k^-(g^{-1}k)` and `X_j` the `m^{perp k}`-coordinates of `w_j`.
pub fn rep_action(lambda: Complex64, g: &GroupElement, s: &BoundarySection) -> Result<BoundarySection> {
    if g.n() != s.n {
        return Err(Error::DimensionMismatch { left: g.n(), right: s.n });
    }
    let ginv = g.inverse();
    let s = s.clone();
    let shift = lambda + s.n as f64 / 2.0;
    Ok(BoundarySection::from_fn(s.n, s.p, move |b, ws| {
        let k = lift_boundary_point(b);
        let f = iwasawa_decompose(&(&ginv * &k), Sign::Minus)?;
        let moved: Vec<DVector<f64>> = ws.iter().map(|w| push_m_perp(&f.k, &m_perp_coordinates(&k, w))).collect();
        let base = BoundaryPoint::new_unchecked(f.k.mat().view((0, s.n), (s.n + 1, 1)).column(0).into_owned());
        Ok((shift * f.t).exp() * s.evaluate(&base, &moved)?)
    }))
}

/// `(g^{-1})^* s`, computed through the boundary action and its differential.
pub fn pullback_p_form(g: &GroupElement, s: &BoundarySection) -> Result<BoundarySection> {
    if g.n() != s.n {
        return Err(Error::DimensionMismatch { left: g.n(), right: s.n });
    }
    let ginv = g.inverse();
    let s = s.clone();
    Ok(BoundarySection::from_fn(s.n, s.p, move |b, ws| {
        let base = boundary_action(&ginv, b)?;
        let pushed = ws
            .iter()
            .map(|w| boundary_differential(&ginv, &TangentVector::new_unchecked(b.clone(), w.clone())).map(|tv| tv.w))
            .collect::<Result<Vec<_>>>()?;
        s.evaluate(&base, &pushed)
    }))
}

/// Boundary points with orthonormal tangent frames used to compare sections.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub points: Vec<(BoundaryPoint, Vec<DVector<f64>>)>,
}

impl SampleSet {
    /// Nodes of a low-degree quadrature plus `random` seeded uniform points, each
    /// with `p` seeded orthonormal tangent vectors.
    pub fn new(n: usize, p: usize, random: usize, seed: u64) -> Result<Self> {
        if p > n {
            return Err(Error::InvalidArgument(format!("form degree {p} exceeds n = {n}")));
        }
        let mut rng = sampling::stream(seed, "principal-series-samples");
        let mut points = Vec::new();
        let quad = sphere_quadrature(n, 3)?;
        let mut bases: Vec<BoundaryPoint> = quad.nodes().to_vec();
        bases.extend((0..random).map(|_| sampling::boundary_point(&mut rng, n)));
        for b in bases {
            let frame = sampling::tangent_frame(&mut rng, &b, p).into_iter().map(|tv| tv.w).collect();
            points.push((b, frame));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `sup |a - b|` over the samples.
    pub fn sup_difference(&self, a: &BoundarySection, b: &BoundarySection) -> Result<f64> {
        let mut sup = 0.0_f64;
        for (x, ws) in &self.points {
            let d = (a.evaluate(x, ws)? - b.evaluate(x, ws)?).norm();
            sup = sup.max(d);
        }
        Ok(sup)
    }
}

/// `sup |(g^{-1})^* s - π^λ(g) s|` over the samples, at an arbitrary `λ`.
pub fn compat_defect_at(lambda: Complex64, g: &GroupElement, s: &BoundarySection, samples: &SampleSet) -> Result<f64> {
    samples.sup_difference(&pullback_p_form(g, s)?, &rep_action(lambda, g, s)?)
}

/// Defect between the pullback action and `π^{p - n/2}_{τ_p}`.
pub fn compat_defect(g: &GroupElement, s: &BoundarySection, samples: &SampleSet) -> Result<f64> {
    let lambda = Complex64::new(s.p as f64 - s.n as f64 / 2.0, 0.0);
    compat_defect_at(lambda, g, s, samples)
}

/// `sup |π^{λ1}(g) f · π^{λ2}(g) s - π^{λ1 + λ2 + n/2}(g)(f s)|`.
pub fn twist_product_defect(
    lambda1: Complex64,
    lambda2: Complex64,
    g: &GroupElement,
    f: &BoundarySection,
    s: &BoundarySection,
    samples: &SampleSet,
) -> Result<f64> {
    if f.p != 0 {
        return Err(Error::InvalidArgument("twist factor must have degree 0".into()));
    }
    let left = BoundarySection::times(&rep_action(lambda1, g, f)?, &rep_action(lambda2, g, s)?)?;
    let fused = lambda1 + lambda2 + s.n as f64 / 2.0;
    let right = rep_action(fused, g, &BoundarySection::times(f, s)?)?;
    samples.sup_difference(&left, &right)
}

/// `sup |π^λ(g1 g2) s - π^λ(g1) π^λ(g2) s|`.
pub fn homomorphism_defect(
    lambda: Complex64,
    g1: &GroupElement,
    g2: &GroupElement,
    s: &BoundarySection,
    samples: &SampleSet,
) -> Result<f64> {
    let direct = rep_action(lambda, &(g1 * g2), s)?;
    let nested = rep_action(lambda, g1, &rep_action(lambda, g2, s)?)?;
    samples.sup_difference(&direct, &nested)
}

/// `|∫ |π^λ(g) f|^2 - ∫ |f|^2|` for a function `f`.
pub fn unitarity_defect(lambda: Complex64, g: &GroupElement, f: &BoundarySection, quad: &SphereQuadrature) -> Result<f64> {
    if f.p != 0 {
        return Err(Error::InvalidArgument("unitarity is checked on functions".into()));
    }
    let moved = rep_action(lambda, g, f)?;
    let mut err = None;
    let mut norm_sq = |s: &BoundarySection| {
        quad.integrate(|b| match s.evaluate(b, &[]) {
            Ok(z) => z.norm_sqr(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        })
    };
    let (after, before) = (norm_sq(&moved), norm_sq(f));
    if let Some(e) = err {
        return Err(e);
    }
    Ok((after - before).abs())
}
