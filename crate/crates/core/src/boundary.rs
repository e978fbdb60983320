//! The boundary sphere `K/M ≅ S^n`, identified with unit vectors via `kM ↦ k e_pole`.

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::iwasawa::{iwasawa_decompose, scale_and_pole};
use crate::lie::{AlgebraElement, GroupElement, Sign};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    b: DVector<f64>,
}

impl BoundaryPoint {
    pub fn new(b: DVector<f64>) -> Result<Self> {
        if b.len() < 2 {
            return Err(Error::Shape { expected: "vector in R^{n+1}, n >= 1".into(), got: format!("length {}", b.len()) });
        }
        let norm = b.norm();
        if (norm - 1.0).abs() > Tolerances::DEFAULT.unit {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self { b })
    }

    /// Normalizes any non-zero vector.
    pub fn from_direction(x: DVector<f64>) -> Result<Self> {
        let norm = x.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Self::new(x / norm)
    }

    pub(crate) fn new_unchecked(b: DVector<f64>) -> Self {
        Self { b }
    }

    /// The pole `e_pole = kM` for `k = I`.
    pub fn pole(n: usize) -> Self {
        let mut b = DVector::zeros(n + 1);
        b[n] = 1.0;
        Self { b }
    }

    pub fn n(&self) -> usize {
        self.b.len() - 1
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.b
    }

    /// Geodesic (angular) distance on the sphere.
    pub fn angle_to(&self, other: &BoundaryPoint) -> f64 {
        self.b.dot(&other.b).clamp(-1.0, 1.0).acos()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: BoundaryPoint,
    pub w: DVector<f64>,
}

impl TangentVector {
    pub fn new(base: BoundaryPoint, w: DVector<f64>) -> Result<Self> {
        if w.len() != base.b.len() {
            return Err(Error::Shape { expected: format!("length {}", base.b.len()), got: format!("length {}", w.len()) });
        }
        let dot = w.dot(&base.b);
        if dot.abs() > Tolerances::DEFAULT.unit * w.norm().max(1.0) {
            return Err(Error::NotTangent { dot });
        }
        Ok(Self { base, w })
    }

    pub(crate) fn new_unchecked(base: BoundaryPoint, w: DVector<f64>) -> Self {
        Self { base, w }
    }
}

/// Rotation `R ∈ SO(n+1)` with `R e_pole = b`, rotating in the plane of `e_pole`
/// and `b`. At `b = -e_pole` the plane of the first axis and the pole is used.
pub fn lift_rotation(b: &DVector<f64>) -> DMatrix<f64> {
    let dim = b.len();
    let pole = dim - 1;
    let c = b[pole];
    let mut u = b.clone();
    u[pole] = 0.0;
    let s = u.norm();
    let mut r = DMatrix::identity(dim, dim);
    if s == 0.0 {
        if c < 0.0 {
            r[(0, 0)] = -1.0;
            r[(pole, pole)] = -1.0;
        }
        return r;
    }
    u /= s;
    let mut e = DVector::zeros(dim);
    e[pole] = 1.0;
    r += (&u * e.transpose() - &e * u.transpose()) * s;
    r += (&e * e.transpose() + &u * u.transpose()) * (c - 1.0);
    r
}

/// Deterministic coset representative `k` with `k e_pole = b`.
pub fn lift_boundary_point(b: &BoundaryPoint) -> GroupElement {
    let n = b.n();
    let mut mat = DMatrix::identity(n + 2, n + 2);
    mat.view_mut((0, 0), (n + 1, n + 1)).copy_from(&lift_rotation(&b.b));
    GroupElement::from_matrix_unchecked(mat, n)
}

fn check_dims(g: &GroupElement, b: &BoundaryPoint) -> Result<()> {
    if g.n() != b.n() {
        return Err(Error::DimensionMismatch { left: g.n(), right: b.n() });
    }
    Ok(())
}

/// `(H^-(g k), k^-(g k) e_pole)` for the canonical lift `k` of `b`.
fn scale_and_image(g: &GroupElement, b: &BoundaryPoint) -> Result<(f64, BoundaryPoint)> {
    check_dims(g, b)?;
    let gk = g * &lift_boundary_point(b);
    let (t, pole) = scale_and_pole(gk.mat(), g.n(), Sign::Minus)?;
    let cap = Tolerances::DEFAULT.scale_cap;
    if t.abs() > cap {
        return Err(Error::ScaleCap { t, cap });
    }
    Ok((t, BoundaryPoint::new_unchecked(pole)))
}

/// `g · kM = k^-(g k) M`.
pub fn boundary_action(g: &GroupElement, b: &BoundaryPoint) -> Result<BoundaryPoint> {
    scale_and_image(g, b).map(|(_, image)| image)
}

/// `e^{H^-(g k)}`.
pub fn conformal_factor(g: &GroupElement, b: &BoundaryPoint) -> Result<f64> {
    scale_and_image(g, b).map(|(t, _)| t.exp())
}

/// `H^-(g k)`, the logarithm of the conformal factor.
pub fn log_conformal_factor(g: &GroupElement, b: &BoundaryPoint) -> Result<f64> {
    scale_and_image(g, b).map(|(t, _)| t)
}

/// Exact pushforward `[k, Y] ↦ [k^-(gk), e^{H^-(gk)} Y]`.
pub fn boundary_differential(g: &GroupElement, tv: &TangentVector) -> Result<TangentVector> {
    check_dims(g, &tv.base)?;
    let n = g.n();
    let k = lift_boundary_point(&tv.base);
    let y = m_perp_coordinates(&k, &tv.w);
    let f = iwasawa_decompose(&(g * &k), Sign::Minus)?;
    let w = push_m_perp(&f.k, &y) * f.t.exp();
    let base = BoundaryPoint::new_unchecked(f.k.mat().view((0, n), (n + 1, 1)).column(0).into_owned());
    Ok(TangentVector::new_unchecked(base, w))
}

/// Coordinates `Y ∈ m^{perp k} ≅ R^n` of the tangent vector `w` at `k e_pole`.
pub fn m_perp_coordinates(k: &GroupElement, w: &DVector<f64>) -> DVector<f64> {
    let n = k.n();
    let local = k.rotation_block().transpose() * w;
    local.rows(0, n).into_owned()
}

/// Tangent vector `k Y e_pole` in `R^{n+1}` for `Y ∈ m^{perp k}`.
pub fn push_m_perp(k: &GroupElement, y: &DVector<f64>) -> DVector<f64> {
    let n = k.n();
    let rot = k.rotation_block();
    rot.view((0, 0), (n + 1, n)) * y
}

/// The kernel `Q(xK, kM, yK) = e^{H^-(x^{-1} y k^-(y^{-1} k))}`.
pub fn visual_kernel(x: &GroupElement, b: &BoundaryPoint, y: &GroupElement) -> Result<f64> {
    check_dims(x, b)?;
    let k = lift_boundary_point(b);
    let ky = iwasawa_decompose(&(&y.inverse() * &k), Sign::Minus)?.k;
    let arg = &(&x.inverse() * y) * &ky;
    let (t, _) = scale_and_pole(arg.mat(), x.n(), Sign::Minus)?;
    Ok(t.exp())
}

/// `pr_k^-(Ad(a^-(gk) n^-(gk)) Y)` for the canonical lift `k` of `b`, returned
/// together with `H^-(gk)`.
pub fn differential_chain(g: &GroupElement, b: &BoundaryPoint, y: &DVector<f64>) -> Result<(AlgebraElement, f64)> {
    check_dims(g, b)?;
    let k = lift_boundary_point(b);
    let f = iwasawa_decompose(&(g * &k), Sign::Minus)?;
    let moved = f.an().adjoint(&AlgebraElement::m_perp_k(y))?;
    Ok((moved.iwasawa_project(Sign::Minus), f.t))
}
