//! Seeded generators for group elements, boundary points and tangent frames.
//!
//! Every stream is derived from a `(seed, label)` pair so independent
//! consumers never share random state.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::boundary::{BoundaryPoint, TangentVector};
use crate::lie::{a_element, expm, n_element, AlgebraElement, GroupElement, Sign};

/// FNV-1a; stable across platforms and compiler versions.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// RNG stream for `(seed, label)`.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut bytes = seed.to_le_bytes().to_vec();
    bytes.extend_from_slice(label.as_bytes());
    ChaCha8Rng::seed_from_u64(fnv1a(&bytes))
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.sample(StandardNormal))
}

pub fn uniform_vector<R: Rng>(rng: &mut R, len: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(-scale..=scale))
}

pub fn skew_matrix<R: Rng>(rng: &mut R, size: usize, scale: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(size, size, |_, _| rng.random_range(-scale..=scale));
    (&a - a.transpose()) * 0.5
}

/// Random element of `SO(size)` as the exponential of a random skew matrix.
pub fn rotation<R: Rng>(rng: &mut R, size: usize) -> DMatrix<f64> {
    expm(&skew_matrix(rng, size, 3.0))
}

/// Random element of `so(n+1,1)`: a rotation block plus a boost column.
pub fn algebra_element<R: Rng>(rng: &mut R, n: usize, scale: f64) -> AlgebraElement {
    let mut mat = DMatrix::zeros(n + 2, n + 2);
    mat.view_mut((0, 0), (n + 1, n + 1)).copy_from(&skew_matrix(rng, n + 1, 2.0 * scale));
    for i in 0..=n {
        let b = rng.random_range(-scale..=scale);
        mat[(i, n + 1)] = b;
        mat[(n + 1, i)] = b;
    }
    AlgebraElement::from_matrix_unchecked(mat, n)
}

pub fn k_element<R: Rng>(rng: &mut R, n: usize) -> GroupElement {
    let mut mat = DMatrix::identity(n + 2, n + 2);
    mat.view_mut((0, 0), (n + 1, n + 1)).copy_from(&rotation(rng, n + 1));
    GroupElement::from_matrix_unchecked(mat, n)
}

pub fn m_element<R: Rng>(rng: &mut R, n: usize) -> GroupElement {
    GroupElement::from_m_block(&rotation(rng, n))
}

/// Random `(k, t, v)` with `|t| <= t_max`, `|v_i| <= v_max`.
pub fn iwasawa_triple<R: Rng>(rng: &mut R, n: usize, t_max: f64, v_max: f64) -> (GroupElement, f64, DVector<f64>) {
    let k = k_element(rng, n);
    let t = rng.random_range(-t_max..=t_max);
    let v = uniform_vector(rng, n, v_max);
    (k, t, v)
}

/// Generic group element `k1 · exp(t H0) · exp(N^-_v) · k2` of moderate size.
pub fn group_element<R: Rng>(rng: &mut R, n: usize, scale: f64) -> GroupElement {
    let k1 = k_element(rng, n);
    let k2 = k_element(rng, n);
    let t = rng.random_range(-scale..=scale);
    let v = uniform_vector(rng, n, scale);
    let g = &(&(&k1 * &a_element(n, t)) * &n_element(Sign::Minus, &v)) * &k2;
    GroupElement::from_matrix_unchecked(g.into_mat(), n)
}

pub fn boundary_point<R: Rng>(rng: &mut R, n: usize) -> BoundaryPoint {
    loop {
        let x = gaussian_vector(rng, n + 1);
        let norm = x.norm();
        if norm > 1e-3 {
            return BoundaryPoint::new_unchecked(x / norm);
        }
    }
}

/// `count` orthonormal tangent vectors at `b` (requires `count <= n`).
pub fn tangent_frame<R: Rng>(rng: &mut R, b: &BoundaryPoint, count: usize) -> Vec<TangentVector> {
    let mut basis: Vec<DVector<f64>> = vec![b.coords().clone()];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut w = gaussian_vector(rng, b.coords().len());
        for e in &basis {
            let d = w.dot(e);
            w -= e * d;
        }
        let norm = w.norm();
        if norm < 1e-6 {
            continue;
        }
        w /= norm;
        basis.push(w.clone());
        out.push(TangentVector::new_unchecked(b.clone(), w));
    }
    out
}
