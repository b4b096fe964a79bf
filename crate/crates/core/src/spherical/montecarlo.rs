//! Monte Carlo evaluation of ψ_λ(Y) = ∫_K e^{iλ(Ad(k)Y)} dk over Haar samples.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::HaarSampler;
use crate::model::{ModelKind, MotionModel, PVector, SpectralParam};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub value: Complex64,
    /// √((var Re + var Im)/N) with unbiased sample variances.
    pub std_error: f64,
    pub samples: usize,
}

/// Running mean and squared deviations of a complex sample (Welford).
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    count: usize,
    mean: Complex64,
    m2_re: f64,
    m2_im: f64,
}

impl Accumulator {
    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        let delta2 = x - self.mean;
        self.m2_re += delta.re * delta2.re;
        self.m2_im += delta.im * delta2.im;
    }

    fn finish(self) -> MCEstimate {
        let n = self.count as f64;
        let var = (self.m2_re + self.m2_im) / (n - 1.0);
        MCEstimate {
            value: self.mean,
            std_error: (var.max(0.0) / n).sqrt(),
            samples: self.count,
        }
    }
}

/// Monte Carlo estimate of ψ_λ(Y) from `samples` Haar draws seeded by `seed`.
pub fn psi_monte_carlo(
    model: &MotionModel,
    lambda: &SpectralParam,
    y: &PVector,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    let mut out = psi_monte_carlo_many(model, lambda, std::slice::from_ref(y), samples, seed)?;
    Ok(out.remove(0))
}

/// ψ_λ at several points from one shared stream of Haar samples.
///
/// Estimates at different points are correlated (common random numbers);
/// each one individually has the same law as [`psi_monte_carlo`] with the
/// same seed.
pub fn psi_monte_carlo_many(
    model: &MotionModel,
    lambda: &SpectralParam,
    ys: &[PVector],
    samples: usize,
    seed: u64,
) -> Result<Vec<MCEstimate>> {
    if samples < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: samples,
        });
    }
    let spec = model.group();
    // checks the parameter and each point up front
    for y in ys {
        model.pairing(lambda, y)?;
    }
    let mats: Vec<Option<DMatrix<f64>>> = ys
        .iter()
        .map(|y| (model.kind() == ModelKind::SlFlat).then(|| model.to_matrix(y)))
        .collect();
    let mut acc = vec![Accumulator::default(); ys.len()];
    let i = Complex64::i();
    for k in HaarSampler::new(spec, seed).take(samples) {
        for ((a, y), m) in acc.iter_mut().zip(ys).zip(&mats) {
            if y.is_zero() {
                a.push(Complex64::new(1.0, 0.0));
                continue;
            }
            let p = model.pairing_after_action(lambda, &k, y, m.as_ref());
            a.push((i * p).exp());
        }
    }
    Ok(acc.into_iter().map(Accumulator::finish).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::model::{rank_one_model, sl_flat_model};

    #[test]
    fn zero_point_is_exact() {
        let m = sl_flat_model(3).unwrap();
        let lam = SpectralParam(vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 0.0)]);
        let e = psi_monte_carlo(&m, &lam, &PVector::zeros(m.dim_p()), 100, 1).unwrap();
        assert_eq!(e.value, Complex64::new(1.0, 0.0));
        assert_eq!(e.std_error, 0.0);
        assert_eq!(e.samples, 100);
    }

    #[test]
    fn deterministic_and_validated() {
        let m = rank_one_model(3, GroupSpec::so(3).unwrap()).unwrap();
        let lam = SpectralParam::real(&[1.3]);
        let y = PVector(vec![0.3, -1.0, 2.0]);
        let a = psi_monte_carlo(&m, &lam, &y, 500, 9).unwrap();
        let b = psi_monte_carlo(&m, &lam, &y, 500, 9).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            psi_monte_carlo(&m, &lam, &y, 1, 9),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(psi_monte_carlo(&m, &lam, &PVector(vec![1.0]), 10, 9).is_err());
    }

    #[test]
    fn batch_matches_single() {
        let m = sl_flat_model(2).unwrap();
        let lam = SpectralParam::real(&[0.7]);
        let ys = [PVector(vec![1.0, 0.2]), PVector(vec![-0.5, 0.4])];
        let many = psi_monte_carlo_many(&m, &lam, &ys, 300, 4).unwrap();
        for (y, e) in ys.iter().zip(&many) {
            let single = psi_monte_carlo(&m, &lam, y, 300, 4).unwrap();
            assert!((single.value - e.value).norm() < 1e-14);
        }
    }
}
