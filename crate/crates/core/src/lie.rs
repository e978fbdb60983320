//! Matrix realization of `so(n+1,1)` and `SO(n+1,1)_0`.
//!
//! Index convention (0-based): coordinates `0..n` carry the `m`-block,
//! `n` is the pole axis of the boundary sphere and `n + 1` is the Minkowski
//! time axis. `J = diag(1, ..., 1, -1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numeric::{max_abs, max_abs_diff};

/// Root sign selecting `n^+` / `n^-` and the Iwasawa / opposite Iwasawa decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("unknown sign {other:?}"))),
        }
    }
}

/// `diag(1, ..., 1, -1)` of size `n + 2`.
pub fn minkowski_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n + 2, n + 2);
    j[(n + 1, n + 1)] = -1.0;
    j
}

/// Multiply by `J` from the left without forming it: negates the last row.
fn j_left(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let last = m.nrows() - 1;
    m.row_mut(last).neg_mut();
    m
}

/// Multiply by `J` from the right: negates the last column.
fn j_right(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let last = m.ncols() - 1;
    m.column_mut(last).neg_mut();
    m
}

/// Payload for [`embed`], one variant per distinguished subspace.
#[derive(Debug, Clone)]
pub enum Payload {
    /// Coefficient of `H0` in `a`.
    A(f64),
    NPlus(DVector<f64>),
    NMinus(DVector<f64>),
    /// `n x n` skew matrix.
    M(DMatrix<f64>),
    /// `(n+1) x (n+1)` skew matrix.
    K(DMatrix<f64>),
    /// Vector in `R^{n+1}`.
    P(DVector<f64>),
    /// Vector in `R^n` identified with `m^{perp k}`.
    MPerpK(DVector<f64>),
}

/// An element of `so(n+1,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    mat: DMatrix<f64>,
    n: usize,
}

impl AlgebraElement {
    /// Validates `X^T J + J X = 0` entrywise (scaled by `max(1, |X|_max)`).
    pub fn from_matrix(mat: DMatrix<f64>, n: usize) -> Result<Self> {
        check_shape(&mat, n)?;
        let defect = algebra_defect(&mat);
        let tol = Tolerances::DEFAULT.algebra * max_abs(&mat).max(1.0);
        if defect > tol {
            return Err(Error::NotInAlgebra { defect });
        }
        Ok(Self { mat, n })
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<f64>, n: usize) -> Self {
        debug_assert_eq!(mat.nrows(), n + 2);
        Self { mat, n }
    }

    pub fn zero(n: usize) -> Self {
        Self { mat: DMatrix::zeros(n + 2, n + 2), n }
    }

    /// The generator `H0` of `a`.
    pub fn h0(n: usize) -> Self {
        let mut mat = DMatrix::zeros(n + 2, n + 2);
        mat[(n, n + 1)] = 1.0;
        mat[(n + 1, n)] = 1.0;
        Self { mat, n }
    }

    /// Element of `n^sign` with coordinate vector `v`.
    pub fn nilpotent(sign: Sign, v: &DVector<f64>) -> Self {
        let n = v.len();
        let s = sign.value();
        let mut mat = DMatrix::zeros(n + 2, n + 2);
        for i in 0..n {
            mat[(i, n)] = v[i];
            mat[(i, n + 1)] = -s * v[i];
            mat[(n, i)] = -v[i];
            mat[(n + 1, i)] = -s * v[i];
        }
        Self { mat, n }
    }

    /// Element of `m^{perp k}` with coordinate vector `v`.
    pub fn m_perp_k(v: &DVector<f64>) -> Self {
        let n = v.len();
        let mut mat = DMatrix::zeros(n + 2, n + 2);
        for i in 0..n {
            mat[(i, n)] = v[i];
            mat[(n, i)] = -v[i];
        }
        Self { mat, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_mat(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { mat: &self.mat * s, n: self.n }
    }

    /// Norm normalized so that `|t H0| = |t|`: `sqrt(<X, X> / 2)`.
    pub fn norm(&self) -> f64 {
        (self.mat.norm_squared() / 2.0).sqrt()
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        same_n(self.n, other.n)?;
        Ok(Self {
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
            n: self.n,
        })
    }

    /// Cartan involution `X -> -X^T`.
    pub fn cartan_involution(&self) -> Self {
        Self { mat: -self.mat.transpose(), n: self.n }
    }

    /// `tr(X Y^T)`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        same_n(self.n, other.n)?;
        Ok(self.mat.component_mul(&other.mat).sum())
    }

    /// Killing form `2n tr(XY)`.
    pub fn killing(&self, other: &Self) -> Result<f64> {
        same_n(self.n, other.n)?;
        let tr = self.mat.component_mul(&other.mat.transpose()).sum();
        Ok(2.0 * self.n as f64 * tr)
    }

    /// Both pairings at once.
    pub fn pairings(&self, other: &Self) -> Result<Pairings> {
        Ok(Pairings {
            inner: self.inner(other)?,
            killing: self.killing(other)?,
        })
    }

    /// The `k`-part of `X` along `a ⊕ n^sign`.
    pub fn iwasawa_project(&self, sign: Sign) -> AlgebraElement {
        let c = self.bruhat();
        // X = m + a + n^+(v+) + n^-(v-); the n^{-sign} summand is rewritten as
        // (Y + θY) - θY with θY in n^{sign}.
        let keep = match sign {
            Sign::Plus => &c.nminus,
            Sign::Minus => &c.nplus,
        };
        let mut out = embed_m_unchecked(&c.m_part, self.n);
        out.mat += AlgebraElement::m_perp_k(&(keep * 2.0)).mat;
        out
    }

    /// Bruhat coordinates `m ⊕ a ⊕ n^+ ⊕ n^-`.
    pub fn bruhat(&self) -> BruhatComponents {
        let n = self.n;
        let x = &self.mat;
        let m_part = x.view((0, 0), (n, n)).into_owned();
        let a_part = x[(n, n + 1)];
        // u = k-column above the pole, q = p-part in the m rows.
        let u = DVector::from_iterator(n, (0..n).map(|i| x[(i, n)]));
        let q = DVector::from_iterator(n, (0..n).map(|i| x[(i, n + 1)]));
        BruhatComponents {
            m_part,
            a_part,
            nplus: (&u - &q) * 0.5,
            nminus: (&u + &q) * 0.5,
        }
    }

    /// True when the element lies in `n^sign` to within the algebra tolerance.
    pub fn is_nilpotent_of(&self, sign: Sign) -> bool {
        let c = self.bruhat();
        let v = match sign {
            Sign::Plus => &c.nplus,
            Sign::Minus => &c.nminus,
        };
        let rebuilt = AlgebraElement::nilpotent(sign, v);
        max_abs_diff(&rebuilt.mat, &self.mat) <= Tolerances::DEFAULT.algebra * max_abs(&self.mat).max(1.0)
    }

    fn is_a(&self) -> bool {
        let t = self.mat[(self.n, self.n + 1)];
        let rebuilt = AlgebraElement::h0(self.n).scale(t);
        max_abs_diff(&rebuilt.mat, &self.mat) == 0.0
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        AlgebraElement { mat: &self.mat + &rhs.mat, n: self.n }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        AlgebraElement { mat: &self.mat - &rhs.mat, n: self.n }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { mat: -&self.mat, n: self.n }
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, s: f64) -> AlgebraElement {
        self.scale(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairings {
    pub inner: f64,
    pub killing: f64,
}

/// Coordinates of an algebra element in `g = m ⊕ a ⊕ n^+ ⊕ n^-`.
#[derive(Debug, Clone, PartialEq)]
pub struct BruhatComponents {
    pub m_part: DMatrix<f64>,
    pub a_part: f64,
    pub nplus: DVector<f64>,
    pub nminus: DVector<f64>,
}

impl BruhatComponents {
    /// Tangent direction with no `m` part.
    pub fn tangent(a_part: f64, nplus: DVector<f64>, nminus: DVector<f64>) -> Self {
        let n = nplus.len();
        Self { m_part: DMatrix::zeros(n, n), a_part, nplus, nminus }
    }

    pub fn n(&self) -> usize {
        self.nplus.len()
    }

    /// The four summands as algebra elements, in the order `m, a, n^+, n^-`.
    pub fn summands(&self) -> [AlgebraElement; 4] {
        let n = self.n();
        [
            embed_m_unchecked(&self.m_part, n),
            AlgebraElement::h0(n).scale(self.a_part),
            AlgebraElement::nilpotent(Sign::Plus, &self.nplus),
            AlgebraElement::nilpotent(Sign::Minus, &self.nminus),
        ]
    }

    pub fn reassemble(&self) -> AlgebraElement {
        let [m, a, p, q] = self.summands();
        &(&(&m + &a) + &p) + &q
    }
}

fn embed_m_unchecked(m: &DMatrix<f64>, n: usize) -> AlgebraElement {
    let mut mat = DMatrix::zeros(n + 2, n + 2);
    mat.view_mut((0, 0), (n, n)).copy_from(m);
    AlgebraElement { mat, n }
}

fn skew_defect(m: &DMatrix<f64>) -> f64 {
    max_abs_diff(m, &(-m.transpose()))
}

/// Places a payload into its block of `so(n+1,1)`.
pub fn embed(n: usize, payload: Payload) -> Result<AlgebraElement> {
    let tol = Tolerances::DEFAULT.algebra;
    let want_vec = |v: &DVector<f64>, len: usize| -> Result<()> {
        if v.len() != len {
            return Err(Error::Shape { expected: format!("vector of length {len}"), got: format!("length {}", v.len()) });
        }
        Ok(())
    };
    let want_skew = |m: &DMatrix<f64>, size: usize| -> Result<()> {
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::Shape {
                expected: format!("{size}x{size} matrix"),
                got: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        let defect = skew_defect(m);
        if defect > tol * max_abs(m).max(1.0) {
            return Err(Error::NotSkew { defect });
        }
        Ok(())
    };
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(match payload {
        Payload::A(t) => AlgebraElement::h0(n).scale(t),
        Payload::NPlus(v) => {
            want_vec(&v, n)?;
            AlgebraElement::nilpotent(Sign::Plus, &v)
        }
        Payload::NMinus(v) => {
            want_vec(&v, n)?;
            AlgebraElement::nilpotent(Sign::Minus, &v)
        }
        Payload::MPerpK(v) => {
            want_vec(&v, n)?;
            AlgebraElement::m_perp_k(&v)
        }
        Payload::M(m) => {
            want_skew(&m, n)?;
            embed_m_unchecked(&((&m - m.transpose()) * 0.5), n)
        }
        Payload::K(k) => {
            want_skew(&k, n + 1)?;
            let mut mat = DMatrix::zeros(n + 2, n + 2);
            mat.view_mut((0, 0), (n + 1, n + 1)).copy_from(&((&k - k.transpose()) * 0.5));
            AlgebraElement { mat, n }
        }
        Payload::P(p) => {
            want_vec(&p, n + 1)?;
            let mut mat = DMatrix::zeros(n + 2, n + 2);
            for i in 0..=n {
                mat[(i, n + 1)] = p[i];
                mat[(n + 1, i)] = p[i];
            }
            AlgebraElement { mat, n }
        }
    })
}

/// `max |X^T J + J X|`.
pub fn algebra_defect(mat: &DMatrix<f64>) -> f64 {
    let jx = j_left(mat.clone());
    let xtj = j_right(mat.transpose());
    max_abs(&(xtj + jx))
}

fn check_shape(mat: &DMatrix<f64>, n: usize) -> Result<()> {
    if n == 0 || mat.nrows() != n + 2 || mat.ncols() != n + 2 {
        return Err(Error::Shape {
            expected: format!("{}x{} matrix", n + 2, n + 2),
            got: format!("{}x{}", mat.nrows(), mat.ncols()),
        });
    }
    Ok(())
}

fn same_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Orthonormal bases of `n^±` and the generator `H0`.
#[derive(Debug, Clone)]
pub struct StandardBasis {
    pub h0: AlgebraElement,
    pub u_plus: Vec<AlgebraElement>,
    pub u_minus: Vec<AlgebraElement>,
}

impl StandardBasis {
    pub fn new(n: usize) -> Self {
        // |n^±(v)|^2 = 4|v|^2, so e_j / 2 is a unit vector.
        let unit = |j: usize| DVector::from_fn(n, |i, _| if i == j { 0.5 } else { 0.0 });
        Self {
            h0: AlgebraElement::h0(n),
            u_plus: (0..n).map(|j| AlgebraElement::nilpotent(Sign::Plus, &unit(j))).collect(),
            u_minus: (0..n).map(|j| AlgebraElement::nilpotent(Sign::Minus, &unit(j))).collect(),
        }
    }

    pub fn u(&self, sign: Sign) -> &[AlgebraElement] {
        match sign {
            Sign::Plus => &self.u_plus,
            Sign::Minus => &self.u_minus,
        }
    }

    /// The root `alpha0` evaluated on an element of `a`.
    pub fn alpha0(&self, x: &AlgebraElement) -> f64 {
        x.mat[(x.n, x.n + 1)]
    }
}

/// An element of `SO(n+1,1)_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    mat: DMatrix<f64>,
    n: usize,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self { mat: DMatrix::identity(n + 2, n + 2), n }
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<f64>, n: usize) -> Self {
        debug_assert_eq!(mat.nrows(), n + 2);
        Self { mat, n }
    }

    /// Block-diagonal `diag(r, 1)` for `r ∈ SO(n+1)`.
    pub fn from_rotation(r: &DMatrix<f64>) -> Result<Self> {
        let n = r
            .nrows()
            .checked_sub(1)
            .filter(|&n| n >= 1 && r.ncols() == n + 1)
            .ok_or_else(|| Error::Shape { expected: "square (n+1)x(n+1), n >= 1".into(), got: format!("{}x{}", r.nrows(), r.ncols()) })?;
        let mut mat = DMatrix::identity(n + 2, n + 2);
        mat.view_mut((0, 0), (n + 1, n + 1)).copy_from(r);
        check_group_membership(mat, n)
    }

    /// `diag(m, 1, 1)` for `m ∈ SO(n)`.
    pub fn from_m_block(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut mat = DMatrix::identity(n + 2, n + 2);
        mat.view_mut((0, 0), (n, n)).copy_from(m);
        Self { mat, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_mat(self) -> DMatrix<f64> {
        self.mat
    }

    /// `J g^T J`.
    pub fn inverse(&self) -> Self {
        Self { mat: j_left(j_right(self.mat.transpose())), n: self.n }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        same_n(self.n, other.n)?;
        Ok(Self { mat: &self.mat * &other.mat, n: self.n })
    }

    /// Upper `(n+1) x (n+1)` block (the `K`-part for elements of `K`).
    pub fn rotation_block(&self) -> DMatrix<f64> {
        self.mat.view((0, 0), (self.n + 1, self.n + 1)).into_owned()
    }

    /// `g · e_time`, the base point of `gK` on the hyperboloid.
    pub fn hyperboloid_point(&self) -> DVector<f64> {
        self.mat.column(self.n + 1).into_owned()
    }

    /// Relative J-orthogonality defect `|g^T J g - J|_max / max(1, |g|_max^2)`.
    pub fn j_defect(&self) -> f64 {
        let gtjg = self.mat.transpose() * j_left(self.mat.clone());
        let scale = max_abs(&self.mat).powi(2).max(1.0);
        max_abs_diff(&gtjg, &minkowski_j(self.n)) / scale
    }

    /// Adjoint action `g X g^{-1}`.
    pub fn adjoint(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        same_n(self.n, x.n)?;
        let inv = self.inverse();
        Ok(AlgebraElement::from_matrix_unchecked(&self.mat * &x.mat * &inv.mat, self.n))
    }

    /// Applies the group element to a vector in `R^{n+2}`.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.mat * v
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        GroupElement { mat: &self.mat * &rhs.mat, n: self.n }
    }
}

/// Validates a matrix as an element of `SO(n+1,1)_0`.
pub fn check_group_membership(mat: DMatrix<f64>, n: usize) -> Result<GroupElement> {
    check_group_membership_with(mat, n, Tolerances::DEFAULT.membership)
}

pub fn check_group_membership_with(mat: DMatrix<f64>, n: usize, tolerance: f64) -> Result<GroupElement> {
    check_shape(&mat, n)?;
    if mat.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let g = GroupElement { mat, n };
    let defect = g.j_defect();
    if defect > tolerance {
        return Err(Error::NotJOrthogonal { defect, tolerance });
    }
    let entry = g.mat[(n + 1, n + 1)];
    if entry < 1.0 - tolerance {
        return Err(Error::WrongComponent { entry });
    }
    // J-orthogonal with g_tt >= 1 leaves det = ±1; the determinant separates them.
    let det = g.mat.clone().determinant();
    if (det - 1.0).abs() > 0.5 {
        return Err(Error::Determinant { det });
    }
    Ok(g)
}

/// Matrix exponential into the group.
///
/// Elements of `a` and of `n^±` use exact closed forms; everything else goes
/// through scaling and squaring with a Taylor kernel.
pub fn group_exp(x: &AlgebraElement) -> Result<GroupElement> {
    let cap = Tolerances::DEFAULT.exp_norm_cap;
    let norm = x.norm();
    if !norm.is_finite() || norm > cap {
        return Err(Error::NormCap { norm, cap });
    }
    let n = x.n;
    if x.is_a() {
        let t = x.mat[(n, n + 1)];
        return Ok(a_element(n, t));
    }
    for sign in [Sign::Plus, Sign::Minus] {
        if x.is_nilpotent_of(sign) {
            let v = match sign {
                Sign::Plus => x.bruhat().nplus,
                Sign::Minus => x.bruhat().nminus,
            };
            return Ok(n_element(sign, &v));
        }
    }
    Ok(GroupElement { mat: expm(&x.mat), n })
}

/// `exp(t H0)`.
pub fn a_element(n: usize, t: f64) -> GroupElement {
    let mut mat = DMatrix::identity(n + 2, n + 2);
    let (s, c) = (t.sinh(), t.cosh());
    mat[(n, n)] = c;
    mat[(n + 1, n + 1)] = c;
    mat[(n, n + 1)] = s;
    mat[(n + 1, n)] = s;
    GroupElement { mat, n }
}

/// `exp(N) = I + N + N^2/2` for `N ∈ n^sign` (`N^3 = 0`).
pub fn n_element(sign: Sign, v: &DVector<f64>) -> GroupElement {
    let n = v.len();
    let nil = AlgebraElement::nilpotent(sign, v).mat;
    let mut mat = DMatrix::identity(n + 2, n + 2);
    mat += &nil;
    mat += &nil * &nil * 0.5;
    GroupElement { mat, n }
}

/// General dense exponential: scaling and squaring around a truncated Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = a.nrows();
    let norm1 = (0..dim)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let mut squarings = 0u32;
    if norm1 > 0.25 {
        squarings = (norm1 / 0.25).log2().ceil() as u32;
    }
    let scaled = a / 2f64.powi(squarings as i32);
    let mut result = DMatrix::identity(dim, dim);
    let mut term = DMatrix::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        result += &term;
        if max_abs(&term) <= f64::EPSILON * 1e-3 * max_abs(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn h0_block_for_n1() {
        let h = embed(1, Payload::A(1.0)).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(1, 2)] = 1.0;
        expected[(2, 1)] = 1.0;
        assert_eq!(h.mat(), &expected);
    }

    #[test]
    fn embed_rejects_bad_payloads() {
        assert!(matches!(embed(2, Payload::NPlus(v(&[1.0]))), Err(Error::Shape { .. })));
        let not_skew = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(embed(2, Payload::M(not_skew)), Err(Error::NotSkew { .. })));
        assert!(matches!(embed(2, Payload::P(v(&[1.0, 2.0]))), Err(Error::Shape { .. })));
    }

    #[test]
    fn every_embedding_is_in_the_algebra() {
        let n = 3;
        let skew3 = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0]);
        let skew4 = DMatrix::from_fn(4, 4, |i, j| (i as f64) - (j as f64));
        for p in [
            Payload::A(0.3),
            Payload::NPlus(v(&[1.0, 2.0, 3.0])),
            Payload::NMinus(v(&[1.0, -2.0, 3.0])),
            Payload::M(skew3),
            Payload::K(skew4),
            Payload::P(v(&[1.0, 2.0, 3.0, 4.0])),
            Payload::MPerpK(v(&[0.5, 0.0, -1.0])),
        ] {
            let x = embed(n, p).unwrap();
            assert_eq!(algebra_defect(x.mat()), 0.0);
        }
    }

    #[test]
    fn theta_swaps_root_spaces() {
        let w = v(&[0.3, -1.2]);
        let plus = AlgebraElement::nilpotent(Sign::Plus, &w);
        let minus = AlgebraElement::nilpotent(Sign::Minus, &w);
        assert_eq!(plus.cartan_involution(), minus);
    }

    #[test]
    fn bruhat_of_pure_components() {
        let c = embed(2, Payload::A(2.5)).unwrap().bruhat();
        assert_eq!(c.a_part, 2.5);
        assert_eq!(c.nplus, DVector::zeros(2));
        assert_eq!(c.nminus, DVector::zeros(2));
        assert_eq!(c.m_part, DMatrix::zeros(2, 2));

        let e1 = v(&[1.0, 0.0]);
        let e2 = v(&[0.0, 1.0]);
        let x = &AlgebraElement::nilpotent(Sign::Plus, &e1) + &AlgebraElement::nilpotent(Sign::Minus, &e2);
        let c = x.bruhat();
        assert_eq!((c.a_part, &c.nplus, &c.nminus), (0.0, &e1, &e2));
    }

    #[test]
    fn iwasawa_projection_examples() {
        let k = embed(2, Payload::K(DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 2.0, -1.0, 0.0, 3.0, -2.0, -3.0, 0.0]))).unwrap();
        assert_eq!(k.iwasawa_project(Sign::Minus), k);
        assert_eq!(k.iwasawa_project(Sign::Plus), k);

        let w = v(&[0.7, -0.2]);
        let minus = AlgebraElement::nilpotent(Sign::Minus, &w);
        assert_eq!(minus.iwasawa_project(Sign::Minus), AlgebraElement::zero(2));
        // Y+ = (Y+ + θY+) - θY+, and Y+ + θY+ = m^{perp k}(2w).
        let plus = AlgebraElement::nilpotent(Sign::Plus, &w);
        assert_eq!(plus.iwasawa_project(Sign::Minus), AlgebraElement::m_perp_k(&(&w * 2.0)));
        let rest = &plus - &plus.iwasawa_project(Sign::Minus);
        let c = rest.bruhat();
        assert!(c.m_part.iter().all(|x| *x == 0.0) && c.nplus.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn pairings_of_h0() {
        for n in 1..=3 {
            let h = AlgebraElement::h0(n);
            let p = h.pairings(&h).unwrap();
            assert_eq!(p.inner, 2.0);
            assert_eq!(p.killing, 4.0 * n as f64);
        }
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = StandardBasis::new(3);
        for s in [Sign::Plus, Sign::Minus] {
            for (i, x) in b.u(s).iter().enumerate() {
                for (j, y) in b.u(s).iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((x.inner(y).unwrap() - want).abs() < 1e-12);
                }
            }
        }
        assert_eq!(b.alpha0(&b.h0), 1.0);
    }

    #[test]
    fn exp_of_zero_and_of_a() {
        assert_eq!(group_exp(&AlgebraElement::zero(2)).unwrap(), GroupElement::identity(2));
        let t = 0.8;
        let g = group_exp(&AlgebraElement::h0(1).scale(t)).unwrap();
        let m = g.mat();
        assert!((m[(1, 1)] - t.cosh()).abs() < 1e-15);
        assert!((m[(1, 2)] - t.sinh()).abs() < 1e-15);
        assert!((m[(2, 1)] - t.sinh()).abs() < 1e-15);
        assert_eq!(m[(0, 0)], 1.0);
        // Power-series oracle for the same element.
        let series = expm(AlgebraElement::h0(1).scale(t).mat());
        assert!(max_abs_diff(&series, m) < 1e-14);
    }

    #[test]
    fn nilpotent_exp_truncates_at_degree_two() {
        for sign in [Sign::Plus, Sign::Minus] {
            let x = AlgebraElement::nilpotent(sign, &v(&[0.4, -1.1, 2.0]));
            let nm = x.mat();
            let cube = nm * nm * nm;
            assert_eq!(max_abs(&cube), 0.0);
            let deg2 = DMatrix::identity(5, 5) + nm + nm * nm * 0.5;
            let deg3 = &deg2 + &cube / 6.0;
            assert_eq!(deg2, deg3);
            assert_eq!(group_exp(&x).unwrap().mat(), &deg2);
        }
    }

    #[test]
    fn exp_norm_cap() {
        let x = AlgebraElement::h0(1).scale(60.0);
        assert!(matches!(group_exp(&x), Err(Error::NormCap { .. })));
    }

    #[test]
    fn membership_checks() {
        assert!(check_group_membership(DMatrix::identity(4, 4), 2).is_ok());
        let mut flip = DMatrix::identity(4, 4);
        flip[(2, 2)] = -1.0;
        flip[(3, 3)] = -1.0;
        assert!(matches!(check_group_membership(flip, 2), Err(Error::WrongComponent { .. })));
        let mut reflect = DMatrix::identity(4, 4);
        reflect[(0, 0)] = -1.0;
        assert!(matches!(check_group_membership(reflect, 2), Err(Error::Determinant { .. })));
        let mut bad = DMatrix::identity(4, 4);
        bad[(0, 1)] = 0.1;
        assert!(matches!(check_group_membership(bad, 2), Err(Error::NotJOrthogonal { .. })));
    }

    #[test]
    fn adjoint_by_identity() {
        let x = AlgebraElement::nilpotent(Sign::Plus, &v(&[1.0, 2.0]));
        assert_eq!(GroupElement::identity(2).adjoint(&x).unwrap(), x);
    }

    #[test]
    fn inverse_is_exact_on_the_group() {
        let g = group_exp(&embed(2, Payload::P(v(&[0.3, -0.4, 0.5]))).unwrap()).unwrap();
        let prod = &g * &g.inverse();
        assert!(max_abs_diff(prod.mat(), &DMatrix::identity(4, 4)) < 1e-14);
    }
}
