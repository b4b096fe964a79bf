//! Empirical boundedness classifier: ψ_λ is bounded exactly when λ is real,
//! so growth of |ψ_λ(tY)| along rays in a separates the two cases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::montecarlo::psi_monte_carlo_many;
use super::radial::phi_eval;
use crate::error::{Error, Result};
use crate::logcomplex::LogComplex;
use crate::model::{ModelKind, MotionModel, PVector, SpectralParam};
use crate::seed::subseed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessConfig {
    /// Ray parameters, evaluated in ascending order.
    pub grid: Vec<f64>,
    pub threshold: f64,
    pub samples: usize,
    pub seed: u64,
    /// A Monte Carlo point whose std_error exceeds this makes the verdict
    /// Inconclusive unless a witness is found.
    pub std_error_ceiling: f64,
}

impl Default for BoundednessConfig {
    fn default() -> Self {
        BoundednessConfig {
            grid: geometric_grid(1.0, 2.0, 11),
            threshold: 1.05,
            samples: 100_000,
            seed: 0,
            std_error_ceiling: 0.05,
        }
    }
}

/// `count` points start·ratio^k.
pub fn geometric_grid(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluator {
    Quadrature,
    MonteCarlo,
}

/// One evaluation |ψ_λ(t·Y_d)|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRow {
    pub direction: usize,
    pub t: f64,
    pub value: LogComplex,
    /// Absolute error bound on |value| (MC std_error, or the quadrature
    /// relative error times |value|).
    pub err: f64,
    pub evaluator: Evaluator,
    pub witness: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub verdict: Verdict,
    pub witness: Option<EvidenceRow>,
    /// Every evaluation made, in evaluation order.
    pub evidence: Vec<EvidenceRow>,
    pub threshold: f64,
}

/// Classify ψ_λ as bounded or unbounded from its values on rays t·Y_d,
/// Y_d running over the slice basis embedded in p.
///
/// Rank-one models use the radial quadrature (ψ_λ(Y) = φ(|Y|, iλ₁)), so
/// `samples` and `seed` only matter for the SL model. Unbounded iff some
/// |ψ| exceeds the threshold by more than three error units.
pub fn boundedness_classify(
    model: &MotionModel,
    lambda: &SpectralParam,
    config: &BoundednessConfig,
) -> Result<BoundednessReport> {
    if config.grid.is_empty() {
        return Err(Error::Domain("boundedness grid is empty".into()));
    }
    if config.grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Domain(
            "grid points must be finite and positive".into(),
        ));
    }
    if !(config.threshold > 1.0) {
        return Err(Error::Domain(format!(
            "threshold must exceed 1, got {}",
            config.threshold
        )));
    }
    let mut grid = config.grid.clone();
    grid.sort_by(f64::total_cmp);

    let mut evidence = Vec::new();
    let mut noisy = false;
    for d in 0..model.rank() {
        let mut h = vec![0.0; model.rank()];
        h[d] = 1.0;
        let dir = model.embed_a(&h)?;
        let rows = match model.kind() {
            ModelKind::RankOne => ray_quadrature(model, lambda, &dir, &grid, d, config.threshold)?,
            ModelKind::SlFlat => {
                let ys: Vec<PVector> = grid.iter().map(|t| dir.scaled(*t)).collect();
                let est = psi_monte_carlo_many(
                    model,
                    lambda,
                    &ys,
                    config.samples,
                    subseed(config.seed, d as u64),
                )?;
                grid.iter()
                    .zip(est)
                    .map(|(t, e)| EvidenceRow {
                        direction: d,
                        t: *t,
                        value: LogComplex::from_complex(e.value),
                        err: e.std_error,
                        evaluator: Evaluator::MonteCarlo,
                        witness: e.value.norm() - 3.0 * e.std_error > config.threshold,
                    })
                    .collect()
            }
        };
        for row in rows {
            evidence.push(row);
            if row.witness {
                return Ok(BoundednessReport {
                    verdict: Verdict::Unbounded,
                    witness: Some(row),
                    evidence,
                    threshold: config.threshold,
                });
            }
            if row.evaluator == Evaluator::MonteCarlo && !(row.err <= config.std_error_ceiling) {
                noisy = true;
            }
        }
    }
    Ok(BoundednessReport {
        verdict: if noisy {
            Verdict::Inconclusive
        } else {
            Verdict::Bounded
        },
        witness: None,
        evidence,
        threshold: config.threshold,
    })
}

fn ray_quadrature(
    model: &MotionModel,
    lambda: &SpectralParam,
    dir: &PVector,
    grid: &[f64],
    d: usize,
    threshold: f64,
) -> Result<Vec<EvidenceRow>> {
    model.pairing(lambda, dir)?;
    let s = Complex64::i() * lambda.0[0];
    let norm = dir.norm();
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        let e = phi_eval(model.n(), s, t * norm)?;
        // |v|(1 − 3·rel) > threshold, in log space since |v| may overflow
        let slack = 1.0 - 3.0 * e.err_est;
        let witness = slack > 0.0 && e.value.log_magnitude + slack.ln() > threshold.ln();
        rows.push(EvidenceRow {
            direction: d,
            t: *t,
            value: e.value,
            err: e.err_est * e.value.abs(),
            evaluator: Evaluator::Quadrature,
            witness,
        });
    }
    Ok(rows)
}
