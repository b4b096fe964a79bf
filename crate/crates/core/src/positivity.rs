//! Bochner-style positive-definiteness tests of spherical kernels.
//!
//! ψ_λ is positive definite exactly when λ is real, and a positive-definite
//! ψ satisfies |ψ| ≤ 1. Both sides are tested: Gram matrices
//! G_ij = ψ_λ(Y_i − Y_j) must be PSD, and a sup-norm probe along rays looks
//! for |ψ| > 1.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelKind, MotionModel, PVector, SpectralParam};
use crate::seed::{rng_from_seed, subseed};
use crate::spherical::{
    boundedness_classify, geometric_grid, phi_eval, psi_monte_carlo_many, BoundednessConfig,
    EvidenceRow, Verdict,
};

/// Points closer than this (Euclidean) count as coincident.
pub const DISTINCT_TOL: f64 = 1e-9;
/// Hermitian defect accepted by [`is_positive_semidefinite`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Grid,
    SeededRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    points: Vec<PVector>,
    provenance: Provenance,
}

impl PointConfig {
    pub fn new(points: Vec<PVector>, provenance: Provenance) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Domain("point configuration is empty".into()));
        };
        let dim = first.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i].sub(&points[j]).norm() <= DISTINCT_TOL {
                    return Err(Error::Domain(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(PointConfig { points, provenance })
    }

    /// m points t_k·Y_d on the ray through the d-th slice direction, with
    /// t_k = spacing·(2^k − 1).
    pub fn collinear(
        model: &MotionModel,
        direction: usize,
        m: usize,
        spacing: f64,
    ) -> Result<Self> {
        if direction >= model.rank() {
            return Err(Error::Domain(format!(
                "direction {direction} out of range for rank {}",
                model.rank()
            )));
        }
        let mut h = vec![0.0; model.rank()];
        h[direction] = 1.0;
        let dir = model.embed_a(&h)?;
        let points = (0..m)
            .map(|k| dir.scaled(spacing * (2f64.powi(k as i32) - 1.0)))
            .collect();
        PointConfig::new(points, Provenance::Grid)
    }

    /// m points with independent N(0, scale²) coordinates.
    pub fn random(model: &MotionModel, m: usize, scale: f64, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        let points = (0..m)
            .map(|_| {
                PVector(
                    (0..model.dim_p())
                        .map(|_| {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            scale * z
                        })
                        .collect(),
                )
            })
            .collect();
        PointConfig::new(points, Provenance::SeededRandom)
    }

    pub fn points(&self) -> &[PVector] {
        &self.points
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Monte Carlo settings for models without a radial evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorSettings {
    pub samples: usize,
    pub seed: u64,
    pub std_error_ceiling: f64,
}

impl Default for EvaluatorSettings {
    fn default() -> Self {
        EvaluatorSettings {
            samples: 20_000,
            seed: 0,
            std_error_ceiling: 0.05,
        }
    }
}

/// A Gram matrix together with the largest absolute error of its entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    pub matrix: DMatrix<Complex64>,
    pub error_bound: f64,
}

/// G_ij = ψ_λ(Y_i − Y_j): radial quadrature for rank-one models, Monte
/// Carlo with one shared sample stream for the SL model.
pub fn gram_matrix(
    model: &MotionModel,
    lambda: &SpectralParam,
    config: &PointConfig,
    settings: &EvaluatorSettings,
) -> Result<Gram> {
    let pts = config.points();
    let m = pts.len();
    for p in pts {
        model.pairing(lambda, p)?;
    }
    let mut g = DMatrix::from_element(m, m, Complex64::new(1.0, 0.0));
    let mut error_bound: f64 = 0.0;
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).filter(move |j| *j != i).map(move |j| (i, j)))
        .collect();
    match model.kind() {
        ModelKind::RankOne => {
            let s = Complex64::i() * lambda.0[0];
            for &(i, j) in &pairs {
                let e = phi_eval(model.n(), s, pts[i].sub(&pts[j]).norm())?;
                let v = e.value.to_complex();
                error_bound = error_bound.max(e.err_est * v.norm());
                g[(i, j)] = v;
            }
        }
        ModelKind::SlFlat => {
            if pairs.is_empty() {
                return Ok(Gram {
                    matrix: g,
                    error_bound,
                });
            }
            let diffs: Vec<PVector> = pairs.iter().map(|&(i, j)| pts[i].sub(&pts[j])).collect();
            let est = psi_monte_carlo_many(model, lambda, &diffs, settings.samples, settings.seed)?;
            let mut worst = (0, 0, 0.0f64);
            for (&(i, j), e) in pairs.iter().zip(&est) {
                g[(i, j)] = e.value;
                if !(e.std_error <= worst.2) {
                    worst = (i, j, e.std_error);
                }
                error_bound = error_bound.max(3.0 * e.std_error);
            }
            if !(worst.2 <= settings.std_error_ceiling) {
                return Err(Error::ErrorCeiling {
                    i: worst.0,
                    j: worst.1,
                    std_error: worst.2,
                    ceiling: settings.std_error_ceiling,
                });
            }
        }
    }
    Ok(Gram {
        matrix: g,
        error_bound,
    })
}

/// max |G − G*|.
pub fn hermitian_defect(g: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            worst = worst.max((g[(i, j)] - g[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Ascending eigenvalues of a Hermitian matrix, from the symmetric real
/// embedding [[A, −B], [B, A]] (each eigenvalue appears twice there).
pub fn hermitian_eigenvalues(g: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if g.nrows() != g.ncols() {
        return Err(Error::Dimension {
            expected: g.nrows(),
            got: g.ncols(),
        });
    }
    let scale = g.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = hermitian_defect(g);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            deviation: defect,
            tolerance: HERMITIAN_TOL,
        });
    }
    let m = g.nrows();
    let h = (g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let mut real = DMatrix::<f64>::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            let z = h[(i, j)];
            real[(i, j)] = z.re;
            real[(i + m, j + m)] = z.re;
            real[(i, j + m)] = -z.im;
            real[(i + m, j)] = z.im;
        }
    }
    let mut ev: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    // pairs of equal eigenvalues; keep one of each
    Ok(ev.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect())
}

/// PSD decision: min eigenvalue ≥ −tol·max(1, max eigenvalue).
pub fn is_positive_semidefinite(g: &DMatrix<Complex64>, tol: f64) -> Result<(bool, f64)> {
    let ev = hermitian_eigenvalues(g)?;
    let (min, max) = match (ev.first(), ev.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Ok((true, 0.0)),
    };
    Ok((min >= -tol * max.max(1.0), min))
}

/// Row-major [re, im] pairs.
fn matrix_to_rows(g: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..g.nrows())
        .map(|i| {
            (0..g.ncols())
                .map(|j| [g[(i, j)].re, g[(i, j)].im])
                .collect()
        })
        .collect()
}

fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> std::result::Result<DMatrix<Complex64>, String> {
    let m = rows.len();
    if rows.iter().any(|r| r.len() != m) {
        return Err("matrix rows must form a square".into());
    }
    Ok(DMatrix::from_fn(m, m, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        g: &DMatrix<Complex64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_rows(g).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        rows_to_matrix(&rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    #[serde(with = "matrix_serde")]
    pub matrix: DMatrix<Complex64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub psd: bool,
    pub tolerance_used: f64,
    /// Largest absolute error of an entry, as reported by the evaluator.
    pub error_bound: f64,
    /// max |G − G*| of the raw matrix, before symmetrization.
    pub hermitian_defect: f64,
    pub provenance: Provenance,
}

impl GramReport {
    /// Symmetrize, eigen-solve and decide with tol = max(1e-10, 10·err)·m.
    ///
    /// A raw defect |G − G*| beyond the tolerance also fails: a positive
    /// definite kernel has a Hermitian Gram.
    pub fn from_gram(gram: Gram, provenance: Provenance) -> Result<Self> {
        let m = gram.matrix.nrows();
        let tol = 1e-10f64.max(10.0 * gram.error_bound) * m as f64;
        let defect = hermitian_defect(&gram.matrix);
        let matrix = (&gram.matrix + gram.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let ev = hermitian_eigenvalues(&matrix)?;
        let min = ev.first().copied().unwrap_or(0.0);
        let max = ev.last().copied().unwrap_or(0.0);
        let scale = max.max(1.0);
        Ok(GramReport {
            matrix,
            min_eigenvalue: min,
            max_eigenvalue: max,
            psd: min >= -tol * scale && defect <= tol * scale,
            tolerance_used: tol,
            error_bound: gram.error_bound,
            hermitian_defect: defect,
            provenance,
        })
    }

    /// Fails by more than ten times the tolerance, in eigenvalue or in
    /// Hermitian defect.
    pub fn fails_decisively(&self) -> bool {
        let margin = 10.0 * self.tolerance_used * self.max_eigenvalue.max(1.0);
        self.min_eigenvalue < -margin || self.hermitian_defect > margin
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdVerdict {
    PositiveDefinite,
    NotPositiveDefinite,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BochnerConfig {
    pub trials: usize,
    pub m: usize,
    pub seed: u64,
    /// The probe flags |ψ| > 1 + margin.
    pub margin: f64,
    /// Spacing of collinear configurations.
    pub spacing: f64,
    /// Coordinate scale of random configurations.
    pub scale: f64,
    pub probe_grid: Vec<f64>,
    pub evaluator: EvaluatorSettings,
}

impl Default for BochnerConfig {
    fn default() -> Self {
        BochnerConfig {
            trials: 20,
            m: 8,
            seed: 0,
            margin: 0.05,
            spacing: 0.25,
            scale: 1.0,
            probe_grid: geometric_grid(1.0, 2.0, 11),
            evaluator: EvaluatorSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BochnerReport {
    pub verdict: PdVerdict,
    /// Sup-norm witness |ψ(tY)| > 1 + margin, if the probe found one.
    pub probe_witness: Option<EvidenceRow>,
    /// The trial Gram with the smallest relative min eigenvalue.
    pub worst: Option<GramReport>,
    pub trials_run: usize,
}

/// Bochner test of ψ_λ: sup-norm probe first, then `trials` Gram matrices
/// alternating between collinear and seeded-random configurations.
pub fn bochner_test(
    model: &MotionModel,
    lambda: &SpectralParam,
    config: &BochnerConfig,
) -> Result<BochnerReport> {
    if config.trials < 1 {
        return Err(Error::Domain("at least one trial required".into()));
    }
    if config.m < 2 {
        return Err(Error::Domain(format!(
            "at least two points required, got {}",
            config.m
        )));
    }
    let probe = boundedness_classify(
        model,
        lambda,
        &BoundednessConfig {
            grid: config.probe_grid.clone(),
            threshold: 1.0 + config.margin,
            samples: config.evaluator.samples,
            seed: subseed(config.seed, u64::MAX),
            std_error_ceiling: config.evaluator.std_error_ceiling,
        },
    )?;
    if probe.verdict == Verdict::Unbounded {
        return Ok(BochnerReport {
            verdict: PdVerdict::NotPositiveDefinite,
            probe_witness: probe.witness,
            worst: None,
            trials_run: 0,
        });
    }
    let mut inconclusive = probe.verdict == Verdict::Inconclusive;
    let mut worst: Option<GramReport> = None;
    let relative = |r: &GramReport| r.min_eigenvalue / r.max_eigenvalue.max(1.0);
    for trial in 0..config.trials {
        let tseed = subseed(config.seed, trial as u64);
        let points = if trial % 2 == 0 {
            PointConfig::collinear(model, (trial / 2) % model.rank(), config.m, config.spacing)?
        } else {
            PointConfig::random(model, config.m, config.scale, tseed)?
        };
        let settings = EvaluatorSettings {
            seed: subseed(tseed, 1),
            ..config.evaluator
        };
        let report = match gram_matrix(model, lambda, &points, &settings) {
            Ok(g) => GramReport::from_gram(g, points.provenance())?,
            Err(Error::ErrorCeiling { .. }) => {
                inconclusive = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let decisive = report.fails_decisively();
        if !report.psd && !decisive {
            inconclusive = true;
        }
        if worst
            .as_ref()
            .is_none_or(|w| relative(&report) < relative(w))
        {
            worst = Some(report);
        }
        if decisive {
            return Ok(BochnerReport {
                verdict: PdVerdict::NotPositiveDefinite,
                probe_witness: None,
                worst,
                trials_run: trial + 1,
            });
        }
    }
    Ok(BochnerReport {
        verdict: if inconclusive {
            PdVerdict::Inconclusive
        } else {
            PdVerdict::PositiveDefinite
        },
        probe_witness: None,
        worst,
        trials_run: config.trials,
    })
}
