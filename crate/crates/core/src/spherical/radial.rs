//! The radial spherical function of a sphere-transitive K ⋉ R^n,
//!
//!   φ(r, s) = c_n ∫₀^π e^{sr cos θ} sin^{n−2}θ dθ,
//!   c_n = Γ(n/2) / (√π Γ((n−1)/2)),
//!
//! by Gauss–Legendre quadrature, and its leading large-r behaviour
//!
//!   φ(r, s) ~ Γ(n/2) 2^{(n−3)/2} / √π · e^{sr} / (sr)^{(n−1)/2},  Re s > 0.
//!
//! Values are returned in log space. The quadrature integrates the shifted
//! integrand e^{sr(cos θ − 1)} sin^{n−2}θ, whose modulus is at most 1 once
//! s is reflected into Re s ≥ 0 (φ is even in s); the factor e^{sr} is
//! restored as an additive log term.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::crossover::CrossoverTable;
use crate::error::{Error, Result};
use crate::logcomplex::LogComplex;
use crate::special::ln_gamma;

/// Smallest node count `phi_radial` accepts.
pub const MIN_NODES: usize = 8;
/// Node cap for escalation.
pub const MAX_NODES: usize = 1 << 20;
/// Agreement between successive rules that ends escalation.
pub const ESCALATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum AccuracyWarning {
    /// Fewer nodes than the oscillation heuristic asks for.
    UnderResolved { nodes: usize, recommended: usize },
    /// Escalation hit the node cap before successive rules agreed.
    NotConverged { nodes: usize, err_est: f64 },
}

/// Result of a radial quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialEstimate {
    pub value: LogComplex,
    /// Relative difference against the rule with half as many nodes; an
    /// upper estimate of the error of `value`.
    pub err_est: f64,
    pub nodes: usize,
    pub warning: Option<AccuracyWarning>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Quadrature,
    Asymptotic,
    QuadratureEscalated,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Quadrature => "quadrature",
            Branch::Asymptotic => "asymptotic",
            Branch::QuadratureEscalated => "quadrature-escalated",
        }
    }
}

/// Output of the hybrid evaluator [`phi_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEvaluation {
    pub value: LogComplex,
    pub branch: Branch,
    /// Relative error estimate: successive-rule difference for quadrature,
    /// the calibrated crossover tolerance for the asymptotic branch.
    pub err_est: f64,
    /// Nodes of the final rule (0 for the asymptotic branch).
    pub nodes: usize,
    pub warning: Option<AccuracyWarning>,
}

/// ln c_n with c_n = Γ(n/2)/(√π Γ((n−1)/2)).
fn ln_normalization(n: usize) -> f64 {
    let nf = n as f64;
    ln_gamma(0.5 * nf) - 0.5 * PI.ln() - ln_gamma(0.5 * (nf - 1.0))
}

/// ln of the asymptotic constant Γ(n/2) 2^{(n−3)/2} / √π.
fn ln_asymptotic_constant(n: usize) -> f64 {
    let nf = n as f64;
    ln_gamma(0.5 * nf) + 0.5 * (nf - 3.0) * 2f64.ln() - 0.5 * PI.ln()
}

/// Node count needed to resolve the oscillation of e^{i Im(s) r cos θ}.
pub fn recommended_nodes(s: Complex64, r: f64) -> usize {
    let osc = (4.0 * s.im.abs() * r).ceil();
    let osc = if osc.is_finite() {
        osc as usize
    } else {
        MAX_NODES
    };
    64usize.max(osc.saturating_add(32)).min(MAX_NODES)
}

fn check_args(n: usize, r: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "radial spherical function needs n ≥ 2, got {n}"
        )));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "radius must be finite and ≥ 0, got {r}"
        )));
    }
    Ok(())
}

/// Reflect s into the closed right half-plane; φ(r, s) = φ(r, −s).
fn reflect(s: Complex64) -> Complex64 {
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

/// Upper end of the θ-interval carrying all but e^{−L} of the mass.
fn theta_cutoff(n: usize, z: Complex64) -> f64 {
    let budget = 40.0 + 0.5 * (n as f64 - 1.0) * (1.0 + z.norm()).ln();
    if z.re > 0.0 && budget / z.re < 2.0 {
        (1.0 - budget / z.re).acos()
    } else {
        PI
    }
}

/// ∫₀^{θmax} e^{z(cos θ − 1)} sin^{n−2}θ dθ with an N-point rule.
fn shifted_integral(n: usize, z: Complex64, theta_max: f64, nodes: usize) -> Complex64 {
    let rule = GaussLegendre::new(NonZeroUsize::new(nodes).expect("nodes ≥ 1"));
    let half = 0.5 * theta_max;
    let power = (n - 2) as i32;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in rule.as_node_weight_pairs() {
        let theta = half * (x + 1.0);
        // cos θ − 1 = −2 sin²(θ/2), without cancellation near θ = 0
        let c = -2.0 * (0.5 * theta).sin().powi(2);
        let weight = if power == 0 {
            1.0
        } else {
            theta.sin().powi(power)
        };
        acc += (z * c).exp() * (w * weight);
    }
    acc * half
}

fn assemble(n: usize, z: Complex64, integral: Complex64) -> LogComplex {
    if integral.norm() == 0.0 {
        return LogComplex::ZERO;
    }
    LogComplex::new(
        ln_normalization(n) + z.re + integral.norm().ln(),
        z.im + integral.arg(),
    )
}

fn relative_gap(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// φ(r, s) by an explicit `nodes`-point Gauss–Legendre rule.
///
/// The returned `err_est` compares against a rule with ⌈nodes/2⌉ points.
/// Fewer nodes than [`recommended_nodes`] is allowed but flagged with
/// [`AccuracyWarning::UnderResolved`].
pub fn phi_radial(n: usize, s: Complex64, r: f64, nodes: usize) -> Result<RadialEstimate> {
    check_args(n, r)?;
    if nodes < MIN_NODES {
        return Err(Error::TooFewNodes {
            min: MIN_NODES,
            got: nodes,
        });
    }
    if r == 0.0 || s.norm() == 0.0 {
        return Ok(RadialEstimate {
            value: LogComplex::ONE,
            err_est: 0.0,
            nodes,
            warning: None,
        });
    }
    let z = reflect(s) * r;
    let theta_max = theta_cutoff(n, z);
    let full = shifted_integral(n, z, theta_max, nodes);
    let coarse = shifted_integral(n, z, theta_max, nodes.div_ceil(2));
    let recommended = recommended_nodes(s, r);
    let warning =
        (nodes < recommended).then_some(AccuracyWarning::UnderResolved { nodes, recommended });
    Ok(RadialEstimate {
        value: assemble(n, z, full),
        err_est: relative_gap(full, coarse),
        nodes,
        warning,
    })
}

/// Quadrature with doubling until two successive rules agree to
/// [`ESCALATION_TOL`] or [`MAX_NODES`] is reached.
pub fn phi_radial_escalated(n: usize, s: Complex64, r: f64) -> Result<RadialEstimate> {
    check_args(n, r)?;
    if r == 0.0 || s.norm() == 0.0 {
        return phi_radial(n, s, r, MIN_NODES);
    }
    let z = reflect(s) * r;
    let theta_max = theta_cutoff(n, z);
    let mut nodes = recommended_nodes(s, r);
    let mut prev = shifted_integral(n, z, theta_max, nodes);
    loop {
        let next_nodes = (2 * nodes).min(MAX_NODES);
        let next = shifted_integral(n, z, theta_max, next_nodes);
        let gap = relative_gap(next, prev);
        if gap <= ESCALATION_TOL || next_nodes == MAX_NODES {
            let warning = (gap > ESCALATION_TOL).then_some(AccuracyWarning::NotConverged {
                nodes: next_nodes,
                err_est: gap,
            });
            return Ok(RadialEstimate {
                value: assemble(n, z, next),
                err_est: gap,
                nodes: next_nodes,
                warning,
            });
        }
        nodes = next_nodes;
        prev = next;
    }
}

/// Leading asymptotic term Γ(n/2) 2^{(n−3)/2}/√π · e^{sr}/(sr)^{(n−1)/2}
/// (principal branch), valid as r → ∞ for Re s > 0.
pub fn phi_asymptotic(n: usize, s: Complex64, r: f64) -> Result<LogComplex> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "radial spherical function needs n ≥ 2, got {n}"
        )));
    }
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!(
            "asymptotic law needs Re s > 0, got s = {s}"
        )));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "asymptotic law needs r > 0, got {r}"
        )));
    }
    let z = s * r;
    let power = 0.5 * (n as f64 - 1.0);
    Ok(LogComplex::new(
        ln_asymptotic_constant(n) + z.re - power * z.norm().ln(),
        z.im - power * z.arg(),
    ))
}

/// Hybrid evaluator using the crossover constants in effect (the embedded
/// table, or the file named by `MH_CONSTANTS_PATH`).
pub fn phi_eval(n: usize, s: Complex64, r: f64) -> Result<PhiEvaluation> {
    phi_eval_with(n, s, r, CrossoverTable::current()?)
}

/// Hybrid evaluator with an explicit crossover table.
///
/// * asymptotic when Re s ≠ 0, |s|r > R*(n) and |Re s|·r is large enough
///   for the reflected exponential to be negligible;
/// * plain quadrature at the heuristic node count for |s|r up to the
///   table's plain-quadrature ceiling;
/// * escalated quadrature otherwise.
pub fn phi_eval_with(
    n: usize,
    s: Complex64,
    r: f64,
    table: &CrossoverTable,
) -> Result<PhiEvaluation> {
    check_args(n, r)?;
    let sr = reflect(s);
    let z = s.norm() * r;
    if let Some(rstar) = table.crossover(n) {
        if sr.re > 0.0 && z > rstar && sr.re * r >= table.min_real_product {
            return Ok(PhiEvaluation {
                value: phi_asymptotic(n, sr, r)?,
                branch: Branch::Asymptotic,
                err_est: table.tolerance,
                nodes: 0,
                warning: None,
            });
        }
    }
    let (est, branch) = if z <= table.plain_quadrature_max {
        let est = phi_radial(n, s, r, recommended_nodes(s, r))?;
        if est.err_est <= ESCALATION_TOL {
            (est, Branch::Quadrature)
        } else {
            (phi_radial_escalated(n, s, r)?, Branch::QuadratureEscalated)
        }
    } else {
        (phi_radial_escalated(n, s, r)?, Branch::QuadratureEscalated)
    };
    Ok(PhiEvaluation {
        value: est.value,
        branch,
        err_est: est.err_est,
        nodes: est.nodes,
        warning: est.warning,
    })
}

/// Smallest |s|r on the grid 2^{k/8} (s = 1) where escalated quadrature and
/// the asymptotic term agree to `tol`, searched up to `z_max`.
pub fn calibrate_crossover(n: usize, tol: f64, z_max: f64) -> Result<Option<f64>> {
    let s = Complex64::new(1.0, 0.0);
    let mut k = 0;
    loop {
        let z = 2f64.powf(k as f64 / 8.0);
        if z > z_max {
            return Ok(None);
        }
        let quad = phi_radial_escalated(n, s, z)?;
        let asym = phi_asymptotic(n, s, z)?;
        if quad.value.relative_distance(asym) <= tol {
            return Ok(Some(z));
        }
        k += 1;
    }
}
