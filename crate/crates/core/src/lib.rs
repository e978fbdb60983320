//! Explicit Lie theory of `G = SO(n+1,1)_0` at desk scale.
//!
//! The crate realizes the Lie algebra and group as `(n+2) x (n+2)` real
//! matrices and builds on them:
//!
//! * [`lie`]: root-space structure, Bruhat coordinates, pairings, exponential;
//! * [`iwasawa`]: the factorizations `G = KAN^±` and the maps `k^±, H^±, n^±`;
//! * [`boundary`] and [`quadrature`]: the conformal action on `S^n = K/M`;
//! * [`principal_series`]: principal series on `p`-forms and the pullback action;
//! * [`flow`]: geodesic flow on `G/M`, covariant and Lie derivatives, horocycle operator;
//! * [`poisson`]: the scalar Poisson transform and a mean-value Laplacian.

pub mod boundary;
pub mod config;
pub mod error;
pub mod flow;
pub mod iwasawa;
pub mod lie;
pub mod matrix_io;
pub mod numeric;
pub mod poisson;
pub mod principal_series;
pub mod quadrature;
pub mod sampling;

pub use boundary::{BoundaryPoint, TangentVector};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use iwasawa::IwasawaFactors;
pub use lie::{AlgebraElement, BruhatComponents, GroupElement, Payload, Sign, StandardBasis};
pub use num_complex::Complex64;
pub use quadrature::SphereQuadrature;
pub use flow::{EquivariantSection, FlowPoint, ModelTangent, SectionSpace, Tensor};
pub use poisson::HyperbolicPoint;
pub use principal_series::BoundarySection;
