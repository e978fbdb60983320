//! Iwasawa (`G = K A N^+`) and opposite Iwasawa (`G = K A N^-`) factorizations.
//!
//! Null-vector method: with `ζ± = e_pole ± e_time`, `N^±` fixes `ζ±` and
//! `exp(t H0) ζ± = e^{±t} ζ±`, while `K` fixes `e_time`. The scale `t` and the
//! boundary image `k e_pole` are read off `g ζ±`; the `M`-part of `k` and the
//! nilpotent coordinates follow from one rotation back to the pole.

use nalgebra::{DMatrix, DVector};

use crate::boundary::lift_rotation;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::lie::{a_element, n_element, GroupElement, Sign};
use crate::numeric::relative_diff;

/// `g = k · exp(t H0) · exp(N^sign_v)` together with its reconstruction residual.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaFactors {
    pub sign: Sign,
    pub k: GroupElement,
    pub t: f64,
    pub v: DVector<f64>,
    pub residual: f64,
}

impl IwasawaFactors {
    pub fn a(&self) -> GroupElement {
        a_element(self.k.n(), self.t)
    }

    pub fn nilpotent(&self) -> GroupElement {
        n_element(self.sign, &self.v)
    }

    /// `a · n`, the `AN^sign` part.
    pub fn an(&self) -> GroupElement {
        &self.a() * &self.nilpotent()
    }

    pub fn reassemble(&self) -> GroupElement {
        &self.k * &self.an()
    }
}

/// Scale and boundary image from the fixed null vector: returns
/// `(H^sign(g), k^sign(g) e_pole)`. No check of the scale cap.
pub(crate) fn scale_and_pole(g: &DMatrix<f64>, n: usize, sign: Sign) -> Result<(f64, DVector<f64>)> {
    let s = sign.value();
    // g ζ_sign = e^{sign t} (k e_pole + sign e_time)
    let z = g.column(n) + g.column(n + 1) * s;
    let last = s * z[n + 1];
    if !(last > 0.0) || !last.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "null vector image has wrong time orientation ({last}); not in the identity component"
        )));
    }
    let t = s * last.ln();
    let mut b = z.rows(0, n + 1).into_owned() / last;
    let norm = b.norm();
    b /= norm;
    Ok((t, b))
}

/// `H^-(g)` alone, without the full factorization.
pub fn h_minus(g: &GroupElement) -> Result<f64> {
    scale_and_pole(g.mat(), g.n(), Sign::Minus).map(|(t, _)| t)
}

pub fn h_of(g: &GroupElement, sign: Sign) -> Result<f64> {
    scale_and_pole(g.mat(), g.n(), sign).map(|(t, _)| t)
}

pub fn iwasawa_decompose(g: &GroupElement, sign: Sign) -> Result<IwasawaFactors> {
    iwasawa_decompose_with(g, sign, &Tolerances::DEFAULT)
}

pub fn iwasawa_decompose_with(g: &GroupElement, sign: Sign, tol: &Tolerances) -> Result<IwasawaFactors> {
    let n = g.n();
    let (t, pole) = scale_and_pole(g.mat(), n, sign)?;
    if t.abs() > tol.scale_cap {
        return Err(Error::ScaleCap { t, cap: tol.scale_cap });
    }
    let k0 = lift_rotation(&pole);
    // h = k0^{-1} g = m a n with m ∈ M; the m-block of h is exactly m.
    let mut k0_full = DMatrix::identity(n + 2, n + 2);
    k0_full.view_mut((0, 0), (n + 1, n + 1)).copy_from(&k0);
    let h = k0_full.transpose() * g.mat();
    let m = h.view((0, 0), (n, n)).into_owned();
    // a n ζ_{-sign} has m-coordinates 2v.
    let s = sign.value();
    let other = h.column(n) - h.column(n + 1) * s;
    let w = other.rows(0, n).into_owned();
    let v = m.transpose() * w * 0.5;

    let mut k_mat = DMatrix::identity(n + 2, n + 2);
    k_mat.view_mut((0, 0), (n, n)).copy_from(&m);
    let k = GroupElement::from_matrix_unchecked(&k0_full * k_mat, n);

    let mut factors = IwasawaFactors { sign, k, t, v, residual: 0.0 };
    factors.residual = relative_diff(factors.reassemble().mat(), g.mat());
    if !(factors.residual <= tol.reconstruction) {
        return Err(Error::Reconstruction { defect: factors.residual, tolerance: tol.reconstruction });
    }
    Ok(factors)
}

/// `|H(g1 g2) - H(g1 k(g2)) - H(g2)|`, which vanishes identically.
pub fn iwasawa_cocycle_defect(g1: &GroupElement, g2: &GroupElement, sign: Sign) -> Result<f64> {
    let f2 = iwasawa_decompose(g2, sign)?;
    let h12 = iwasawa_decompose(&(g1 * g2), sign)?.t;
    let h1k = iwasawa_decompose(&(g1 * &f2.k), sign)?.t;
    Ok((h12 - h1k - f2.t).abs())
}
