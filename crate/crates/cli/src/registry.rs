//! Catalogue of the identities the `verify` suites measure.
//!
//! Every check id belongs to exactly one invariant; the coverage audit test
//! makes sure every invariant is exercised by at least one check.

/// A mathematical identity the library is expected to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Invariant {
    pub id: &'static str,
    pub suite: &'static str,
    /// Short name of the identity, echoed in reports.
    pub anchor: &'static str,
}

/// Whether a residual must stay below or rise above its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub invariant: &'static str,
    pub tolerance: f64,
    pub bound: Bound,
}

pub const INVARIANTS: &[Invariant] = &[
    Invariant { id: "lie.root_space_law", suite: "lie_core", anchor: "root-space relations [H0, U] = ±U" },
    Invariant { id: "lie.adjoint_eigenvalues", suite: "lie_core", anchor: "Ad(exp(-tH0)) acts on n± by exp(∓t)" },
    Invariant { id: "lie.bruhat_orthogonality", suite: "lie_core", anchor: "orthogonal Bruhat decomposition m ⊕ a ⊕ n+ ⊕ n-" },
    Invariant { id: "lie.pairing_consistency", suite: "lie_core", anchor: "inner product from Killing form and Cartan involution" },
    Invariant { id: "lie.nilpotent_exactness", suite: "lie_core", anchor: "exponential series of n± stops at degree 2" },
    Invariant { id: "iwasawa.round_trip", suite: "iwasawa", anchor: "Iwasawa factorizations G = K A N±" },
    Invariant { id: "iwasawa.m_stability", suite: "iwasawa", anchor: "M normalizes A N±" },
    Invariant { id: "iwasawa.a_equivariance", suite: "iwasawa", anchor: "H(g exp(sH0)) = H(g) + s" },
    Invariant { id: "iwasawa.cocycle", suite: "iwasawa", anchor: "Iwasawa cocycle H(g1 g2 k) = H(g1 k(g2 k)) + H(g2 k)" },
    Invariant { id: "boundary.lift_independence", suite: "boundary", anchor: "boundary action is well defined on K/M" },
    Invariant { id: "boundary.conformality", suite: "boundary", anchor: "boundary differential is conformal" },
    Invariant { id: "boundary.differential_formula", suite: "boundary", anchor: "differential of the boundary action" },
    Invariant { id: "boundary.algebraic_chain", suite: "boundary", anchor: "K-projection of Ad(a n) on the m-complement" },
    Invariant { id: "boundary.change_of_variables", suite: "boundary", anchor: "Jacobian of the boundary action" },
    Invariant { id: "boundary.kernel_cocycle", suite: "boundary", anchor: "multiplicativity of the visual kernel" },
    Invariant { id: "principal_series.homomorphism", suite: "principal_series", anchor: "principal series is a representation" },
    Invariant { id: "principal_series.unitarity", suite: "principal_series", anchor: "unitarity on the imaginary axis" },
    Invariant { id: "principal_series.compat", suite: "principal_series", anchor: "pullback of p-forms is the principal series at p - n/2" },
    Invariant { id: "principal_series.twist", suite: "principal_series", anchor: "fusion of scalar factors" },
    Invariant { id: "flow.shift_exponent", suite: "flow_calculus", anchor: "horocycle operator shifts the A-exponent" },
    Invariant { id: "flow.anosov_rates", suite: "flow_calculus", anchor: "Anosov rates of the flow derivative" },
    Invariant { id: "flow.m_invariance", suite: "flow_calculus", anchor: "flow quantities are right-M invariant" },
    Invariant { id: "flow.lie_shift", suite: "flow_calculus", anchor: "Lie derivative is the covariant derivative shifted by ∓p" },
    Invariant { id: "flow.commutation", suite: "flow_calculus", anchor: "commutator of the flow generator with the horocycle operator" },
    Invariant { id: "flow.tensor_split", suite: "flow_calculus", anchor: "splitting of bilinear forms into trace-free, skew and trace parts" },
    Invariant { id: "poisson.equivariance", suite: "poisson", anchor: "G-equivariance of the Poisson transform" },
    Invariant { id: "poisson.eigenvalue_law", suite: "poisson", anchor: "Poisson transforms are Laplace eigenfunctions with eigenvalue λ(n-λ)" },
    Invariant { id: "poisson.quadrature_convergence", suite: "poisson", anchor: "quadrature self-convergence of the Poisson transform" },
];

const fn upper(id: &'static str, invariant: &'static str, tolerance: f64) -> Check {
    Check { id, invariant, tolerance, bound: Bound::Upper }
}

pub const CHECKS: &[Check] = &[
    upper("lie.root_space_law", "lie.root_space_law", 1e-12),
    upper("lie.adjoint_eigenvalues", "lie.adjoint_eigenvalues", 1e-10),
    upper("lie.bruhat_orthogonality", "lie.bruhat_orthogonality", 1e-12),
    upper("lie.pairing_consistency", "lie.pairing_consistency", 1e-12),
    upper("lie.nilpotent_exactness", "lie.nilpotent_exactness", 1e-15),
    upper("iwasawa.round_trip", "iwasawa.round_trip", 1e-9),
    upper("iwasawa.m_stability", "iwasawa.m_stability", 1e-10),
    upper("iwasawa.a_equivariance", "iwasawa.a_equivariance", 1e-10),
    upper("iwasawa.cocycle", "iwasawa.cocycle", 1e-9),
    upper("boundary.lift_independence", "boundary.lift_independence", 1e-10),
    upper("boundary.conformality", "boundary.conformality", 1e-10),
    upper("boundary.differential_fd", "boundary.differential_formula", 1e-6),
    upper("boundary.algebraic_chain", "boundary.algebraic_chain", 1e-9),
    upper("boundary.change_of_variables", "boundary.change_of_variables", 1e-6),
    upper("boundary.kernel_cocycle", "boundary.kernel_cocycle", 1e-9),
    upper("principal_series.homomorphism", "principal_series.homomorphism", 1e-8),
    upper("principal_series.unitarity", "principal_series.unitarity", 1e-6),
    upper("principal_series.compat", "principal_series.compat", 1e-8),
    Check { id: "principal_series.compat_shifted_parameter", invariant: "principal_series.compat", tolerance: 1e-2, bound: Bound::Lower },
    upper("principal_series.twist", "principal_series.twist", 1e-10),
    upper("flow.shift_exponent", "flow.shift_exponent", 1e-4),
    upper("flow.shift_exponent_mu_plus_one", "flow.shift_exponent", 1e-4),
    upper("flow.anosov_rates", "flow.anosov_rates", 1e-12),
    upper("flow.m_invariance", "flow.m_invariance", 1e-10),
    upper("flow.section_equivariance", "flow.m_invariance", 1e-10),
    upper("flow.lie_shift", "flow.lie_shift", 1e-6),
    upper("flow.commutation", "flow.commutation", 1e-4),
    upper("flow.commutation_opposite_sign", "flow.commutation", 1e-4),
    upper("flow.tensor_split_reassembly", "flow.tensor_split", 1e-14),
    upper("flow.tensor_split_orthogonality", "flow.tensor_split", 1e-14),
    upper("poisson.kernel_sign", "poisson.eigenvalue_law", 5e-3),
    upper("poisson.eigenvalue_law", "poisson.eigenvalue_law", 5e-3),
    upper("poisson.equivariance", "poisson.equivariance", 1e-6),
    upper("poisson.quadrature_convergence", "poisson.quadrature_convergence", 1e-6),
];

pub fn check(id: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.id == id)
}

pub fn invariant(id: &str) -> Option<&'static Invariant> {
    INVARIANTS.iter().find(|i| i.id == id)
}

/// Checks of one suite, in report order.
pub fn suite_checks(suite: &str) -> impl Iterator<Item = &'static Check> + '_ {
    CHECKS.iter().filter(move |c| invariant(c.invariant).is_some_and(|i| i.suite == suite))
}
