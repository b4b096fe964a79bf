//! Spherical functions on Cartan motion groups K ⋉ p.
//!
//! The crate evaluates ψ_λ(Y) = ∫_K e^{iλ(Ad(k)Y)} dk by Monte Carlo over
//! Haar-sampled K, evaluates the radial form φ(r, s) on R^n by quadrature
//! and by its leading large-r asymptotic, tests boundedness and positive
//! definiteness of these functions numerically, and implements the
//! plane-wave synthesis and K-type operators on the Helmholtz eigenspaces
//! {f : Δf = −λ²f} of R^2 and R^3.

// `!(x > 0.0)` also rejects NaN, which is the point of those checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod eigenspace;
pub mod error;
pub mod group;
pub mod logcomplex;
pub mod model;
pub mod positivity;
pub mod seed;
pub mod special;
pub mod spherical;

pub use classify::{is_transitive_on_spheres, transitive_groups, ClassificationEntry};
pub use eigenspace::{
    analyze, ktype_project, laplacian_residual, radial_average, synthesize, EigenFunctionHandle,
    SphereDensity,
};
pub use error::{Error, Result};
pub use group::{haar_sample, Family, GroupElement, GroupSpec, HaarSampler};
pub use logcomplex::LogComplex;
pub use model::{
    parse_model, rank_one_model, sl_flat_model, ModelKind, MotionModel, PVector, SpectralParam,
};
pub use positivity::{
    bochner_test, gram_matrix, is_positive_semidefinite, BochnerConfig, BochnerReport, GramReport,
    PdVerdict, PointConfig,
};
pub use spherical::{
    boundedness_classify, phi_asymptotic, phi_eval, phi_radial, psi_monte_carlo, BoundednessConfig,
    Branch, MCEstimate, PhiEvaluation, Verdict,
};
