/// Every numerical tolerance used by the library, in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entrywise tolerance for Lie algebra invariants and block-pattern tests.
    pub algebra: f64,
    /// Tolerance for group invariants of internally produced elements.
    pub group: f64,
    /// Tolerance used when validating user-supplied matrices as group elements.
    pub membership: f64,
    /// Relative reconstruction tolerance of Iwasawa factorizations.
    pub reconstruction: f64,
    /// Unit-norm tolerance for boundary points and tangency of tangent vectors.
    pub unit: f64,
    /// Cap on the algebra norm accepted by the exponential.
    pub exp_norm_cap: f64,
    /// Cap on |H(g)| and on flow times.
    pub scale_cap: f64,
    /// Central finite-difference step for first derivatives.
    pub fd_step: f64,
    /// Step used by each level of nested finite differences.
    pub nested_fd_step: f64,
    /// Relative discrepancy allowed by the Poisson quadrature self-check.
    pub quadrature_self_check: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        algebra: 1e-12,
        group: 1e-10,
        membership: 1e-8,
        reconstruction: 1e-9,
        unit: 1e-12,
        exp_norm_cap: 50.0,
        scale_cap: 50.0,
        fd_step: 1e-5,
        nested_fd_step: 1e-4,
        quadrature_self_check: 1e-5,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
