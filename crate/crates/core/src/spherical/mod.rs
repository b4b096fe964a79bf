//! Spherical functions ψ_λ and the radial function φ(r, s).

mod bounded;
mod crossover;
mod montecarlo;
mod radial;
mod sweep;

pub use bounded::{
    boundedness_classify, geometric_grid, BoundednessConfig, BoundednessReport, Evaluator,
    EvidenceRow, Verdict,
};
pub use crossover::{CrossoverTable, CONSTANTS_ENV, CONSTANTS_VERSION};
pub use montecarlo::{psi_monte_carlo, psi_monte_carlo_many, MCEstimate};
pub use radial::{
    calibrate_crossover, phi_asymptotic, phi_eval, phi_eval_with, phi_radial, phi_radial_escalated,
    recommended_nodes, AccuracyWarning, Branch, PhiEvaluation, RadialEstimate, ESCALATION_TOL,
    MAX_NODES, MIN_NODES,
};
pub use sweep::{phi_sweep, PhiRecord, PHI_CSV_HEADER};
