//! Geodesic flow on `G/M`, equivariant sections and their derivatives.
//!
//! Sections of associated bundles are right-`M`-equivariant functions
//! `G -> V`, with `V` a space of multilinear forms on `n^+` / `n^-`. Forms are
//! stored by their values on the orthonormal basis `U_j^± = n^±(e_j / 2)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::lie::{a_element, group_exp, AlgebraElement, BruhatComponents, GroupElement, Sign, StandardBasis};

/// A point `gM` of `G/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowPoint {
    g: GroupElement,
}

impl FlowPoint {
    pub fn new(g: GroupElement) -> Self {
        Self { g }
    }

    pub fn group(&self) -> &GroupElement {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// Foot point `g e_time` on the hyperboloid.
    pub fn base_point(&self) -> DVector<f64> {
        self.g.hyperboloid_point()
    }

    /// Distance of `g^{-1} g'` from `M`; zero iff both represent the same coset.
    pub fn coset_defect(&self, other: &FlowPoint) -> f64 {
        let n = self.n();
        let rel = &self.g.inverse() * &other.g;
        let mat = rel.mat();
        let mut defect = 0.0_f64;
        for i in 0..n + 2 {
            for j in 0..n + 2 {
                let inside = i < n && j < n;
                let want = if inside { mat[(i, j)] } else if i == j { 1.0 } else { 0.0 };
                defect = defect.max((mat[(i, j)] - want).abs());
            }
        }
        defect
    }
}

/// Tangent vector `[g, v]` of `G/M` with `v ∈ n^+ ⊕ a ⊕ n^-`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelTangent {
    pub g: GroupElement,
    v: BruhatComponents,
}

impl ModelTangent {
    pub fn new(g: GroupElement, v: BruhatComponents) -> Result<Self> {
        check_no_m_part(&v)?;
        if v.n() != g.n() {
            return Err(Error::DimensionMismatch { left: g.n(), right: v.n() });
        }
        Ok(Self { g, v })
    }

    pub fn components(&self) -> &BruhatComponents {
        &self.v
    }
}

fn check_no_m_part(v: &BruhatComponents) -> Result<()> {
    let entry = v.m_part.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if entry > Tolerances::DEFAULT.algebra {
        return Err(Error::WrongComponent { entry });
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    let cap = Tolerances::DEFAULT.scale_cap;
    if !t.is_finite() || t.abs() > cap {
        return Err(Error::ScaleCap { t, cap });
    }
    Ok(())
}

/// `gM ↦ g e^{t H0} M`.
pub fn geodesic_flow(t: f64, x: &FlowPoint) -> Result<FlowPoint> {
    check_time(t)?;
    Ok(FlowPoint::new(&x.g * &a_element(x.n(), t)))
}

/// `[g, v] ↦ [g e^{t H0}, Ad(e^{-t H0}) v]`.
pub fn flow_derivative(t: f64, vt: &ModelTangent) -> Result<ModelTangent> {
    check_time(t)?;
    let n = vt.g.n();
    let moved = a_element(n, -t).adjoint(&vt.v.reassemble())?.bruhat();
    let v = BruhatComponents::tangent(moved.a_part, moved.nplus, moved.nminus);
    Ok(ModelTangent { g: &vt.g * &a_element(n, t), v })
}

/// Complex multilinear form on `(R^n)^rank`, stored in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    n: usize,
    rank: usize,
    data: Vec<Complex64>,
}

impl Tensor {
    pub fn zeros(n: usize, rank: usize) -> Self {
        Self { n, rank, data: vec![Complex64::new(0.0, 0.0); n.pow(rank as u32)] }
    }

    pub fn scalar(n: usize, z: Complex64) -> Self {
        Self { n, rank: 0, data: vec![z] }
    }

    pub fn from_fn<F: FnMut(&[usize]) -> Complex64>(n: usize, rank: usize, mut f: F) -> Self {
        let mut t = Self::zeros(n, rank);
        let mut idx = vec![0; rank];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            increment(&mut idx, n);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.data[self.offset(idx)]
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank, "index rank");
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self { n: self.n, rank: self.rank, data: self.data.iter().map(|x| x * z).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    pub fn distance(&self, other: &Tensor) -> f64 {
        (self - other).max_abs()
    }

    /// Frobenius pairing `Σ conj(a) b`.
    pub fn frobenius(&self, other: &Tensor) -> Complex64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// `τ(m)^{-1}` on every slot: `T'[j..] = Σ R_{ij} ... T[i..]`.
    pub fn rotate_slots(&self, r: &DMatrix<f64>) -> Tensor {
        let mut out = self.clone();
        for slot in 0..self.rank {
            out = Tensor::from_fn(self.n, self.rank, |idx| {
                let mut j = idx.to_vec();
                (0..self.n)
                    .map(|i| {
                        j[slot] = i;
                        out.get(&j) * r[(i, idx[slot])]
                    })
                    .sum()
            });
        }
        out
    }

    /// Stacks `parts[j]` along a new trailing slot.
    pub fn stack(parts: &[Tensor]) -> Tensor {
        let n = parts.len();
        let rank = parts[0].rank + 1;
        Tensor::from_fn(n, rank, |idx| parts[idx[rank - 1]].get(&idx[..rank - 1]))
    }

    /// Rank-2 tensor as an `n x n` matrix.
    pub fn as_matrix(&self) -> Option<DMatrix<Complex64>> {
        (self.rank == 2).then(|| DMatrix::from_fn(self.n, self.n, |i, j| self.get(&[i, j])))
    }
}

fn increment(idx: &mut [usize], n: usize) {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < n {
            return;
        }
        idx[i] = 0;
    }
}

impl std::ops::Add for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        assert_eq!((self.n, self.rank), (rhs.n, rhs.rank), "tensor shape");
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl std::ops::Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        assert_eq!((self.n, self.rank), (rhs.n, rhs.rank), "tensor shape");
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Fiber of the bundle a section lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionSpace {
    /// `Λ^p (n^σ)^*`.
    Exterior(Sign, usize),
    /// `(n^+)^* ⊗ (n^-)^*`.
    PlusMinus,
    /// `(n^-)^* ⊗ (n^-)^*`.
    MinusMinus,
}

impl SectionSpace {
    pub fn rank(self) -> usize {
        match self {
            SectionSpace::Exterior(_, p) => p,
            SectionSpace::PlusMinus | SectionSpace::MinusMinus => 2,
        }
    }
}

impl std::fmt::Display for SectionSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectionSpace::Exterior(s, p) => write!(f, "Λ^{p} n{s}*"),
            SectionSpace::PlusMinus => f.write_str("n+* ⊗ n-*"),
            SectionSpace::MinusMinus => f.write_str("n-* ⊗ n-*"),
        }
    }
}

type SectionFn = dyn Fn(&GroupElement) -> Tensor + Send + Sync;

/// Right-`M`-equivariant function `G -> V` given in closed form.
#[derive(Clone)]
pub struct EquivariantSection {
    n: usize,
    space: SectionSpace,
    eval: Arc<SectionFn>,
}

impl std::fmt::Debug for EquivariantSection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EquivariantSection").field("n", &self.n).field("space", &self.space).finish_non_exhaustive()
    }
}

impl EquivariantSection {
    pub fn new<F>(n: usize, space: SectionSpace, f: F) -> Result<Self>
    where
        F: Fn(&GroupElement) -> Tensor + Send + Sync + 'static,
    {
        if let SectionSpace::Exterior(_, p) = space {
            if p > n {
                return Err(Error::WrongSectionSpace(format!("{space} with n = {n}")));
            }
        }
        Ok(Self { n, space, eval: Arc::new(f) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> SectionSpace {
        self.space
    }

    pub fn eval(&self, g: &GroupElement) -> Tensor {
        (self.eval)(g)
    }

    /// `|u(g m) - τ(m)^{-1} u(g)|`.
    pub fn equivariance_defect(&self, g: &GroupElement, m: &GroupElement) -> f64 {
        let r = m.mat().view((0, 0), (self.n, self.n)).into_owned();
        self.eval(&(g * m)).distance(&self.eval(g).rotate_slots(&r))
    }

    /// Sum of two sections in the same space.
    pub fn plus(&self, other: &EquivariantSection) -> Result<Self> {
        if self.space != other.space || self.n != other.n {
            return Err(Error::WrongSectionSpace(format!("{} + {}", self.space, other.space)));
        }
        let (a, b) = (self.clone(), other.clone());
        Self::new(self.n, self.space, move |g| &a.eval(g) + &b.eval(g))
    }

    /// `z · u`.
    pub fn scaled(&self, z: Complex64) -> Self {
        let a = self.clone();
        Self { n: self.n, space: self.space, eval: Arc::new(move |g| a.eval(g).scale(z)) }
    }

    /// A section whose value does not depend on `g`.
    pub fn constant(n: usize, space: SectionSpace, value: Tensor) -> Result<Self> {
        if value.rank != space.rank() || value.n != n {
            return Err(Error::WrongSectionSpace(format!("constant of rank {} in {space}", value.rank)));
        }
        Self::new(n, space, move |_| value.clone())
    }
}

/// `M`-invariant scalar shaping `exp(α·(g e_pole) + i β·(g e_time))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarShape {
    pub alpha: DVector<f64>,
    pub beta: DVector<f64>,
}

impl ScalarShape {
    pub fn flat(n: usize) -> Self {
        Self { alpha: DVector::zeros(n + 2), beta: DVector::zeros(n + 2) }
    }

    pub fn value(&self, g: &GroupElement) -> Complex64 {
        let n = g.n();
        let m = g.mat();
        let pole = m.column(n);
        let time = m.column(n + 1);
        Complex64::new(self.alpha.dot(&pole), self.beta.dot(&time)).exp()
    }
}

/// Row `c^T g` restricted to the `m`-block columns; transforms as `R^T` under `g ↦ g m`.
fn matrix_coefficient(c: &DVector<f64>, g: &GroupElement) -> DVector<f64> {
    let n = g.n();
    DVector::from_fn(n, |j, _| (0..n + 2).map(|r| c[r] * g.mat()[(r, j)]).sum())
}

/// Tensor built from covectors: wedge product for exterior spaces, plain
/// tensor product otherwise.
fn covector_tensor(space: SectionSpace, covectors: &[DVector<f64>], n: usize) -> Tensor {
    match space {
        SectionSpace::Exterior(_, p) => Tensor::from_fn(n, p, |idx| {
            let m = DMatrix::from_fn(p, p, |a, b| covectors[a][idx[b]]);
            Complex64::new(if p == 0 { 1.0 } else { m.determinant() }, 0.0)
        }),
        SectionSpace::PlusMinus | SectionSpace::MinusMinus => {
            Tensor::from_fn(n, 2, |idx| Complex64::new(covectors[0][idx[0]] * covectors[1][idx[1]], 0.0))
        }
    }
}

/// `u(g) = φ(g) · ℓ_{c_1}(g) ∧ ... ∧ ℓ_{c_p}(g)` (tensor product for the mixed spaces),
/// with `ℓ_c(g) = c^T g` on the `m`-columns.
pub fn matrix_coefficient_section(
    n: usize,
    space: SectionSpace,
    shape: ScalarShape,
    coefficients: Vec<DVector<f64>>,
) -> Result<EquivariantSection> {
    if coefficients.len() != space.rank() {
        return Err(Error::InvalidArgument(format!("{space} needs {} coefficient vectors", space.rank())));
    }
    if coefficients.iter().any(|c| c.len() != n + 2) {
        return Err(Error::Shape { expected: format!("vectors of length {}", n + 2), got: "other".into() });
    }
    EquivariantSection::new(n, space, move |g| {
        let covectors: Vec<_> = coefficients.iter().map(|c| matrix_coefficient(c, g)).collect();
        covector_tensor(space, &covectors, n).scale(shape.value(g))
    })
}

/// `ψ_+(g) = (g ζ^+)_time` and `ψ_-(g) = -(g ζ^-)_time`, `ζ^± = e_pole ± e_time`.
/// Both are positive, `M`-invariant, and scale by `e^{±t}` under `g ↦ g e^{t H0}`.
pub fn null_coordinates(g: &GroupElement) -> (f64, f64) {
    let n = g.n();
    let m = g.mat();
    let (pole, time) = (m[(n + 1, n)], m[(n + 1, n + 1)]);
    (pole + time, time - pole)
}

/// Section with exact `A`-scaling `u(g e^{t H0}) = e^{(a - b) t} u(g)`:
/// `ψ_+^a ψ_-^b · exp(i κ ψ_+ ψ_-) · ℓ_{c_1} ∧ ... ∧ ℓ_{c_p}`.
pub fn a_eigen_section(
    n: usize,
    space: SectionSpace,
    plus_power: Complex64,
    minus_power: Complex64,
    kappa: f64,
    coefficients: Vec<DVector<f64>>,
) -> Result<EquivariantSection> {
    if coefficients.len() != space.rank() {
        return Err(Error::InvalidArgument(format!("{space} needs {} coefficient vectors", space.rank())));
    }
    EquivariantSection::new(n, space, move |g| {
        let (pp, pm) = null_coordinates(g);
        let scalar = (plus_power * pp.ln() + minus_power * pm.ln() + Complex64::new(0.0, kappa * pp * pm)).exp();
        let covectors: Vec<_> = coefficients.iter().map(|c| matrix_coefficient(c, g)).collect();
        covector_tensor(space, &covectors, n).scale(scalar)
    })
}

/// `F(g ζ^-) · T_0` with `T_0` the invariant tensor of the space (1, `δ`, or the
/// volume form). `N^-` fixes `ζ^-`, so the section is constant along `N^-`.
pub fn horocycle_invariant_section(n: usize, space: SectionSpace, shape: ScalarShape) -> Result<EquivariantSection> {
    let invariant = match space {
        SectionSpace::Exterior(_, 0) => Tensor::scalar(n, Complex64::new(1.0, 0.0)),
        SectionSpace::Exterior(_, p) if p == n => {
            let id: Vec<_> = (0..n).map(|j| DVector::from_fn(n, |i, _| if i == j { 1.0 } else { 0.0 })).collect();
            covector_tensor(space, &id, n)
        }
        SectionSpace::PlusMinus | SectionSpace::MinusMinus => {
            Tensor::from_fn(n, 2, |idx| Complex64::new(if idx[0] == idx[1] { 1.0 } else { 0.0 }, 0.0))
        }
        other => return Err(Error::WrongSectionSpace(format!("{other} has no M-invariant tensor"))),
    };
    EquivariantSection::new(n, space, move |g| {
        let z = g.mat().column(g.n()) - g.mat().column(g.n() + 1);
        let f = Complex64::new(shape.alpha.dot(&z), shape.beta.dot(&z)).exp();
        invariant.scale(f)
    })
}

fn directional<F>(f: F, g: &GroupElement, x: &AlgebraElement, step: f64) -> Result<Tensor>
where
    F: Fn(&GroupElement) -> Result<Tensor>,
{
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("finite-difference step must be positive".into()));
    }
    let fwd = f(&(g * &group_exp(&x.scale(step))?))?;
    let bwd = f(&(g * &group_exp(&x.scale(-step))?))?;
    Ok((&fwd - &bwd).scale(Complex64::new(0.5 / step, 0.0)))
}

/// Central difference of `t ↦ u(g e^{t X})` at `t = 0`, `X` the direction in `n^+ ⊕ a ⊕ n^-`.
pub fn covariant_derivative(
    u: &EquivariantSection,
    direction: &BruhatComponents,
    g: &GroupElement,
    step: f64,
) -> Result<Tensor> {
    check_no_m_part(direction)?;
    directional(|h| Ok(u.eval(h)), g, &direction.reassemble(), step)
}

/// Derivative of `t ↦ e^{∓ p t} u(g e^{t H0})` for sections of `Λ^p (n^±)^*`.
pub fn lie_derivative_x(u: &EquivariantSection, g: &GroupElement, step: f64) -> Result<Tensor> {
    let SectionSpace::Exterior(sign, p) = u.space else {
        return Err(Error::WrongSectionSpace(format!("Lie derivative needs an exterior power, got {}", u.space)));
    };
    let rate = -sign.value() * p as f64;
    let n = u.n;
    let pulled = |t: f64| -> Result<Tensor> { Ok(u.eval(&(g * &a_element(n, t))).scale(Complex64::new((rate * t).exp(), 0.0))) };
    let diff = &pulled(step)? - &pulled(-step)?;
    Ok(diff.scale(Complex64::new(0.5 / step, 0.0)))
}

/// `Σ_j ∇_{U_j^-} u ⊗ (U_j^-)^*` in the standard basis.
pub fn horocycle_minus(u: &EquivariantSection, g: &GroupElement, step: f64) -> Result<Tensor> {
    horocycle_minus_in_basis(u, g, &DMatrix::identity(u.n, u.n), step)
}

/// Same operator built from the orthonormal basis `U'_j = n^-(R e_j / 2)`, and
/// reported in the standard basis.
pub fn horocycle_minus_in_basis(u: &EquivariantSection, g: &GroupElement, r: &DMatrix<f64>, step: f64) -> Result<Tensor> {
    let n = u.n;
    if r.shape() != (n, n) {
        return Err(Error::Shape { expected: format!("{n}x{n} rotation"), got: format!("{:?}", r.shape()) });
    }
    let rotated = (0..n)
        .map(|j| {
            let dir = AlgebraElement::nilpotent(Sign::Minus, &(r.column(j) * 0.5));
            directional(|h| Ok(u.eval(h)), g, &dir, step)
        })
        .collect::<Result<Vec<_>>>()?;
    // (U'_j)^* = Σ_i R_{ij} (U_i)^*.
    let parts: Vec<Tensor> = (0..n)
        .map(|i| {
            rotated
                .iter()
                .enumerate()
                .fold(Tensor::zeros(n, u.space.rank()), |acc, (j, t)| &acc + &t.scale(Complex64::new(r[(i, j)], 0.0)))
        })
        .collect();
    Ok(Tensor::stack(&parts))
}

/// `|∇_X U_- u - U_- ∇_X u - c U_- u|` at `g`, every derivative by nested central differences.
pub fn commutation_residual(u: &EquivariantSection, g: &GroupElement, coefficient: f64, step: f64) -> Result<f64> {
    let h0 = StandardBasis::new(u.n).h0;
    let outer = directional(|h| horocycle_minus(u, h, step), g, &h0, step)?;
    let inner = {
        let nabla = |h: &GroupElement| -> Result<Tensor> { directional(|k| Ok(u.eval(k)), h, &h0, step) };
        let parts = (0..u.n)
            .map(|j| {
                let dir = AlgebraElement::nilpotent(Sign::Minus, &DVector::from_fn(u.n, |i, _| if i == j { 0.5 } else { 0.0 }));
                directional(nabla, g, &dir, step)
            })
            .collect::<Result<Vec<_>>>()?;
        Tensor::stack(&parts)
    };
    let plain = horocycle_minus(u, g, step)?;
    Ok((&(&outer - &inner) - &plain.scale(Complex64::new(coefficient, 0.0))).max_abs())
}

/// `|(∇_X U_- - U_- ∇_X - U_-) u (g)|`.
pub fn commutation_defect(u: &EquivariantSection, g: &GroupElement, step: f64) -> Result<f64> {
    commutation_residual(u, g, 1.0, step)
}

/// Least-squares rate `r` with `U_- u(g e^{t H0}) ≈ e^{r t} U_- u(g)` near `t = 0`.
pub fn horocycle_scaling_exponent(u: &EquivariantSection, g: &GroupElement, step: f64) -> Result<Complex64> {
    let h0 = StandardBasis::new(u.n).h0;
    let value = horocycle_minus(u, g, step)?;
    let norm = value.frobenius(&value).re;
    if norm == 0.0 {
        return Err(Error::InvalidArgument("horocycle derivative vanishes".into()));
    }
    let rate = directional(|h| horocycle_minus(u, h, step), g, &h0, step)?;
    Ok(value.frobenius(&rate) / norm)
}

/// Decomposition of a bilinear form into trace-free symmetric, skew and trace parts.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSplit {
    pub sym0: DMatrix<Complex64>,
    pub antisym: DMatrix<Complex64>,
    pub trace_part: DMatrix<Complex64>,
}

impl TensorSplit {
    pub fn reassemble(&self) -> DMatrix<Complex64> {
        &self.sym0 + &self.antisym + &self.trace_part
    }

    /// Largest Frobenius pairing between distinct parts.
    pub fn cross_pairing(&self) -> f64 {
        let pair = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm();
        pair(&self.sym0, &self.antisym).max(pair(&self.sym0, &self.trace_part)).max(pair(&self.antisym, &self.trace_part))
    }
}

pub fn tensor_split(t: &DMatrix<Complex64>) -> Result<TensorSplit> {
    let n = t.nrows();
    if n == 0 || t.ncols() != n {
        return Err(Error::Shape { expected: "non-empty square matrix".into(), got: format!("{:?}", t.shape()) });
    }
    let tt = t.transpose();
    let half = Complex64::new(0.5, 0.0);
    let sym = (t + &tt) * half;
    let antisym = (t - &tt) * half;
    let trace = t.trace() / n as f64;
    let trace_part = DMatrix::from_diagonal_element(n, n, trace);
    Ok(TensorSplit { sym0: sym - &trace_part, antisym, trace_part })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn random_shape<R: Rng>(rng: &mut R, n: usize) -> ScalarShape {
        ScalarShape { alpha: sampling::uniform_vector(rng, n + 2, 0.3), beta: sampling::uniform_vector(rng, n + 2, 0.3) }
    }

    fn random_section<R: Rng>(rng: &mut R, n: usize, space: SectionSpace) -> EquivariantSection {
        let coeffs = (0..space.rank()).map(|_| sampling::uniform_vector(rng, n + 2, 1.0)).collect();
        matrix_coefficient_section(n, space, random_shape(rng, n), coeffs).unwrap()
    }

    #[test]
    fn flow_is_a_one_parameter_group() {
        let mut rng = sampling::stream(21, "flow");
        let x = FlowPoint::new(sampling::group_element(&mut rng, 2, 1.0));
        assert_eq!(geodesic_flow(0.0, &x).unwrap().group(), x.group());
        let two = geodesic_flow(0.4, &geodesic_flow(-1.1, &x).unwrap()).unwrap();
        let one = geodesic_flow(-0.7, &x).unwrap();
        assert!(one.coset_defect(&two) < 1e-12);
        assert!(matches!(geodesic_flow(51.0, &x), Err(Error::ScaleCap { .. })));
    }

    #[test]
    fn foot_point_moves_at_unit_speed() {
        let mut rng = sampling::stream(22, "speed");
        let x = FlowPoint::new(sampling::group_element(&mut rng, 3, 1.0));
        let dt = 1e-4;
        for k in 0..20 {
            let t = k as f64 * 0.1;
            let p = geodesic_flow(t, &x).unwrap().base_point();
            let q = geodesic_flow(t + dt, &x).unwrap().base_point();
            let d = (q - p) / dt;
            let minkowski = d.rows(0, 4).norm_squared() - d[4] * d[4];
            assert!((minkowski - 1.0).abs() < 1e-6, "{minkowski}");
        }
    }

    #[test]
    fn flow_commutes_with_m() {
        let mut rng = sampling::stream(23, "m");
        let g = sampling::group_element(&mut rng, 2, 1.0);
        let m = sampling::m_element(&mut rng, 2);
        let a = geodesic_flow(0.9, &FlowPoint::new(g.clone())).unwrap();
        let b = geodesic_flow(0.9, &FlowPoint::new(&g * &m)).unwrap();
        assert!(a.coset_defect(&b) < 1e-10);
    }

    #[test]
    fn derivative_rates() {
        let mut rng = sampling::stream(24, "anosov");
        let g = sampling::group_element(&mut rng, 2, 1.0);
        let vp = sampling::uniform_vector(&mut rng, 2, 1.0);
        let vm = sampling::uniform_vector(&mut rng, 2, 1.0);
        let vt = ModelTangent::new(g, BruhatComponents::tangent(0.3, vp.clone(), vm.clone())).unwrap();
        let t = 1.3;
        let out = flow_derivative(t, &vt).unwrap();
        let v = out.components();
        assert!((&v.nplus - &vp * (-t).exp()).norm() < 1e-12);
        assert!((&v.nminus - &vm * t.exp()).norm() < 1e-12);
        assert!((v.a_part - 0.3).abs() < 1e-14);
        let split = flow_derivative(0.5, &flow_derivative(0.8, &vt).unwrap()).unwrap();
        assert!((&split.components().nminus - &vm * t.exp()).norm() < 1e-10);
        assert!(matches!(flow_derivative(-60.0, &vt), Err(Error::ScaleCap { .. })));
    }

    #[test]
    fn m_part_is_rejected() {
        let mut dir = BruhatComponents::tangent(1.0, DVector::zeros(2), DVector::zeros(2));
        dir.m_part[(0, 1)] = 1.0;
        dir.m_part[(1, 0)] = -1.0;
        assert!(ModelTangent::new(GroupElement::identity(2), dir.clone()).is_err());
        let u = EquivariantSection::constant(2, SectionSpace::Exterior(Sign::Plus, 0), Tensor::scalar(2, c(1.0))).unwrap();
        assert!(covariant_derivative(&u, &dir, &GroupElement::identity(2), 1e-5).is_err());
    }

    #[test]
    fn built_sections_are_equivariant() {
        let mut rng = sampling::stream(25, "equiv");
        for n in 1..=3 {
            let spaces = [
                SectionSpace::Exterior(Sign::Plus, 1),
                SectionSpace::Exterior(Sign::Minus, n),
                SectionSpace::PlusMinus,
                SectionSpace::MinusMinus,
            ];
            for space in spaces {
                let u = random_section(&mut rng, n, space);
                let coeffs = (0..space.rank()).map(|_| sampling::uniform_vector(&mut rng, n + 2, 1.0)).collect();
                let e = a_eigen_section(n, space, c(0.7), c(-0.4), 0.2, coeffs).unwrap();
                let h = horocycle_invariant_section(n, SectionSpace::MinusMinus, random_shape(&mut rng, n)).unwrap();
                for _ in 0..5 {
                    let g = sampling::group_element(&mut rng, n, 1.0);
                    let m = sampling::m_element(&mut rng, n);
                    for s in [&u, &e, &h] {
                        let d = s.equivariance_defect(&g, &m);
                        assert!(d < 1e-10 * s.eval(&g).max_abs().max(1.0), "n={n} {space}: {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn rotate_slots_matches_matrix_form() {
        let mut rng = sampling::stream(26, "rot");
        let t = Tensor::from_fn(3, 2, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let r = sampling::rotation(&mut rng, 3);
        let want = r.transpose().map(c) * t.as_matrix().unwrap() * r.map(c);
        assert!((t.rotate_slots(&r).as_matrix().unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn covariant_derivative_of_eigenfamily() {
        let mut rng = sampling::stream(27, "eigen");
        let n = 2;
        let space = SectionSpace::Exterior(Sign::Minus, 1);
        let coeffs = vec![sampling::uniform_vector(&mut rng, n + 2, 1.0)];
        let (a, b) = (Complex64::new(0.6, 0.3), Complex64::new(1.1, -0.2));
        let u = a_eigen_section(n, space, a, b, 0.4, coeffs).unwrap();
        let dir = BruhatComponents::tangent(1.0, DVector::zeros(n), DVector::zeros(n));
        for _ in 0..5 {
            let g = sampling::group_element(&mut rng, n, 1.0);
            let got = covariant_derivative(&u, &dir, &g, 1e-5).unwrap();
            let want = u.eval(&g).scale(a - b);
            assert!(got.distance(&want) < 1e-8 * want.max_abs().max(1.0));
        }
    }

    #[test]
    fn constant_sections_have_no_derivative() {
        let n = 2;
        let u = EquivariantSection::constant(n, SectionSpace::MinusMinus, Tensor::from_fn(n, 2, |i| c((i[0] + 2 * i[1]) as f64))).unwrap();
        let g = sampling::group_element(&mut sampling::stream(28, "c"), n, 1.0);
        assert!(horocycle_minus(&u, &g, 1e-5).unwrap().max_abs() == 0.0);
        assert!(commutation_defect(&u, &g, 1e-4).unwrap() == 0.0);
        let p1 = EquivariantSection::constant(n, SectionSpace::Exterior(Sign::Plus, 1), Tensor::from_fn(n, 1, |_| c(2.0))).unwrap();
        let lie = lie_derivative_x(&p1, &g, 1e-5).unwrap();
        assert!(lie.distance(&p1.eval(&g).scale(c(-1.0))) < 1e-9);
    }

    #[test]
    fn lie_and_covariant_differ_by_degree() {
        let mut rng = sampling::stream(29, "shift");
        let n = 2;
        let x = BruhatComponents::tangent(1.0, DVector::zeros(n), DVector::zeros(n));
        for sign in [Sign::Plus, Sign::Minus] {
            for p in 0..=2 {
                let u = random_section(&mut rng, n, SectionSpace::Exterior(sign, p));
                let g = sampling::group_element(&mut rng, n, 1.0);
                let lie = lie_derivative_x(&u, &g, 1e-5).unwrap();
                let cov = covariant_derivative(&u, &x, &g, 1e-5).unwrap();
                let want = u.eval(&g).scale(c(-sign.value() * p as f64));
                assert!((&lie - &cov).distance(&want) < 1e-6);
            }
        }
        let mixed = random_section(&mut rng, n, SectionSpace::PlusMinus);
        assert!(matches!(lie_derivative_x(&mixed, &GroupElement::identity(n), 1e-5), Err(Error::WrongSectionSpace(_))));
    }

    #[test]
    fn horocycle_operator_kills_horocycle_invariant_sections() {
        let mut rng = sampling::stream(30, "horo");
        for n in 1..=3 {
            let u = horocycle_invariant_section(n, SectionSpace::MinusMinus, random_shape(&mut rng, n)).unwrap();
            let g = sampling::group_element(&mut rng, n, 1.0);
            assert!(horocycle_minus(&u, &g, 1e-5).unwrap().max_abs() < 1e-9);
        }
        assert!(horocycle_invariant_section(3, SectionSpace::Exterior(Sign::Plus, 1), ScalarShape::flat(3)).is_err());
    }

    #[test]
    fn horocycle_operator_is_basis_independent() {
        let mut rng = sampling::stream(31, "basis");
        let n = 3;
        let u = random_section(&mut rng, n, SectionSpace::Exterior(Sign::Plus, 2));
        let g = sampling::group_element(&mut rng, n, 1.0);
        let r = sampling::rotation(&mut rng, n);
        let a = horocycle_minus(&u, &g, 1e-5).unwrap();
        let b = horocycle_minus_in_basis(&u, &g, &r, 1e-5).unwrap();
        assert!(a.distance(&b) < 1e-9 * a.max_abs().max(1.0), "{}", a.distance(&b));
    }

    #[test]
    fn commutator_with_the_flow_generator() {
        // Ad(e^{tH0}) U^- = e^{-t} U^-, so the exact commutator is -U_-.
        let mut rng = sampling::stream(32, "comm");
        for n in 1..=2 {
            let u = random_section(&mut rng, n, SectionSpace::Exterior(Sign::Minus, 1));
            let g = sampling::group_element(&mut rng, n, 0.8);
            let scale = horocycle_minus(&u, &g, 1e-4).unwrap().max_abs();
            assert!(commutation_residual(&u, &g, -1.0, 1e-4).unwrap() < 1e-4);
            assert!((commutation_defect(&u, &g, 1e-4).unwrap() - 2.0 * scale).abs() < 1e-4 * scale.max(1.0));
        }
    }

    #[test]
    fn horocycle_operator_shifts_the_a_exponent() {
        let mut rng = sampling::stream(33, "exp");
        let n = 2;
        let coeffs = vec![sampling::uniform_vector(&mut rng, n + 2, 1.0)];
        // u(g e^{tH0}) = e^{-μ t} u(g) with μ = b - a = 0.5.
        let u = a_eigen_section(n, SectionSpace::Exterior(Sign::Plus, 1), c(0.3), c(0.8), 0.1, coeffs).unwrap();
        let g = sampling::group_element(&mut rng, n, 1.0);
        let r = horocycle_scaling_exponent(&u, &g, 1e-4).unwrap();
        assert!((r - c(-1.5)).norm() < 1e-4, "{r}");
    }

    #[test]
    fn tensor_split_parts() {
        let id = DMatrix::from_diagonal_element(3, 3, c(1.0));
        let s = tensor_split(&id).unwrap();
        assert_eq!(s.trace_part, id);
        assert!(s.sym0.norm() == 0.0 && s.antisym.norm() == 0.0);
        let skew = DMatrix::from_row_slice(2, 2, &[c(0.0), c(2.0), c(-2.0), c(0.0)]);
        let s = tensor_split(&skew).unwrap();
        assert_eq!(s.antisym, skew);
        assert!(s.sym0.norm() == 0.0 && s.trace_part.norm() == 0.0);
        assert!(tensor_split(&DMatrix::zeros(2, 3)).is_err());
    }
}
