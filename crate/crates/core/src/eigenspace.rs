//! Helmholtz eigenspaces {f : Δf = −λ²f} on R^2 and R^3 through plane-wave
//! synthesis f(x) = ∫_{S^{n−1}} e^{iλ(x,w)} F(w) dw, with the K-type
//! projections and the single-radius inverse on R^2.
//!
//! Densities live on fixed product rules. A rule built for budget z_max
//! resolves synthesis for |λ||x| ≤ z_max:
//!
//! * n = 2: N = 2⌈z_max⌉ + 64 equispaced nodes (trapezoid);
//! * n = 3: Gauss–Legendre in the polar cosine with ⌈z_max⌉ + 32 nodes,
//!   times 2⌈z_max⌉ + 64 equispaced azimuths.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;
use crate::special::bessel_j;

/// Default resolution budget for |λ||x|.
pub const DEFAULT_BUDGET: f64 = 30.0;
/// |J_k(λr)| below this rejects a radius for [`analyze`].
pub const BESSEL_GUARD: f64 = 1e-6;
/// Angular bandwidth of [`SphereDensity::random`] on the circle.
pub const RANDOM_BANDWIDTH: i64 = 8;

const LAYOUT_TOL: f64 = 1e-14;

/// Neumaier-compensated sum; rules on S² have thousands of nodes.
#[derive(Default)]
struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        self.sum = Complex64::new(
            neumaier(&mut self.carry.re, self.sum.re, x.re),
            neumaier(&mut self.carry.im, self.sum.im, x.im),
        );
    }

    fn total(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn neumaier(carry: &mut f64, sum: f64, x: f64) -> f64 {
    let t = sum + x;
    *carry += if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    t
}

fn compensated(iter: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut acc = CompensatedSum::default();
    for x in iter {
        acc.add(x);
    }
    acc.total()
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "eigenspace operators are implemented for n ∈ {{2, 3}}, got {n}"
        )))
    }
}

fn check_budget(budget: f64) -> Result<()> {
    if budget.is_finite() && budget >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "resolution budget must be finite and ≥ 0, got {budget}"
        )))
    }
}

/// Nodes and weights of the standard rule.
fn sphere_rule(n: usize, budget: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let b = budget.ceil() as usize;
    let azimuths = 2 * b + 64;
    match n {
        2 => {
            let nodes = (0..azimuths)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / azimuths as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            (nodes, vec![1.0 / azimuths as f64; azimuths])
        }
        _ => {
            let polar = b + 32;
            let gl = GaussLegendre::new(NonZeroUsize::new(polar).expect("polar > 0"));
            let total: f64 = gl.as_node_weight_pairs().iter().map(|p| p.1).sum();
            let mut nodes = Vec::with_capacity(polar * azimuths);
            let mut weights = Vec::with_capacity(polar * azimuths);
            for &(u, w) in gl.as_node_weight_pairs() {
                let rho = (1.0 - u * u).sqrt();
                for j in 0..azimuths {
                    let t = 2.0 * PI * j as f64 / azimuths as f64;
                    nodes.push(vec![rho * t.cos(), rho * t.sin(), u]);
                    weights.push(w / total / azimuths as f64);
                }
            }
            (nodes, weights)
        }
    }
}

/// Budget of the standard rule with `count` nodes, if there is one.
fn budget_for_count(n: usize, count: usize) -> Option<f64> {
    match n {
        2 => (count >= 64 && count.is_multiple_of(2)).then(|| ((count - 64) / 2) as f64),
        3 => {
            let polar = ((count / 2) as f64).sqrt().round() as usize;
            (polar >= 32 && 2 * polar * polar == count).then(|| (polar - 32) as f64)
        }
        _ => None,
    }
}

/// A density F on S^{n−1}, sampled on the standard rule.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereDensity {
    n: usize,
    budget: f64,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct DensityFile {
    n: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    values: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<f64>,
}

impl SphereDensity {
    /// F(w) = f(w) on the rule for `budget`.
    pub fn from_fn(n: usize, budget: f64, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        check_dimension(n)?;
        check_budget(budget)?;
        let (nodes, weights) = sphere_rule(n, budget);
        let values = nodes.iter().map(|w| f(w)).collect();
        Ok(SphereDensity {
            n,
            budget: budget.ceil(),
            nodes,
            weights,
            values,
        })
    }

    pub fn constant(n: usize, budget: f64, c: Complex64) -> Result<Self> {
        Self::from_fn(n, budget, |_| c)
    }

    /// Smooth seeded density: on the circle Σ_{|k|≤8} c_k e^{ikθ}, on the
    /// sphere a complex quadratic polynomial in w; coefficients are complex
    /// Gaussians, with 1 added to the constant term.
    pub fn random(n: usize, budget: f64, seed: u64) -> Result<Self> {
        check_dimension(n)?;
        let mut rng = rng_from_seed(seed);
        let mut gauss = || {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) * 0.5
        };
        if n == 2 {
            let coeffs: Vec<Complex64> = (-RANDOM_BANDWIDTH..=RANDOM_BANDWIDTH)
                .map(|k| if k == 0 { gauss() + 1.0 } else { gauss() })
                .collect();
            Self::from_fn(2, budget, |w| {
                let t = w[1].atan2(w[0]);
                coeffs
                    .iter()
                    .zip(-RANDOM_BANDWIDTH..)
                    .map(|(c, k)| c * Complex64::from_polar(1.0, k as f64 * t))
                    .sum()
            })
        } else {
            let c0 = gauss() + 1.0;
            let lin: Vec<Complex64> = (0..3).map(|_| gauss()).collect();
            let quad: Vec<Complex64> = (0..9).map(|_| gauss()).collect();
            Self::from_fn(3, budget, |w| {
                let mut v = c0;
                for i in 0..3 {
                    v += lin[i] * w[i];
                    for j in 0..3 {
                        v += quad[3 * i + j] * w[i] * w[j];
                    }
                }
                v
            })
        }
    }

    /// All mass on the node nearest `w0`: F = 1/weight there, 0 elsewhere,
    /// so the synthesized function is the plane wave along that node.
    pub fn point_mass(n: usize, budget: f64, w0: &[f64]) -> Result<Self> {
        let mut d = Self::constant(n, budget, Complex64::new(0.0, 0.0))?;
        let i = d.nearest_node(w0)?;
        d.values[i] = Complex64::new(1.0 / d.weights[i], 0.0);
        Ok(d)
    }

    /// Validate a density against the standard layout for `n`.
    pub fn from_parts(
        n: usize,
        nodes: Vec<Vec<f64>>,
        weights: Vec<f64>,
        values: Vec<Complex64>,
        budget: Option<f64>,
    ) -> Result<Self> {
        check_dimension(n)?;
        let count = nodes.len();
        if weights.len() != count || values.len() != count {
            return Err(Error::Dimension {
                expected: count,
                got: if weights.len() != count {
                    weights.len()
                } else {
                    values.len()
                },
            });
        }
        let budget = match budget.or_else(|| budget_for_count(n, count)) {
            Some(b) => b,
            None => {
                return Err(Error::Domain(format!(
                    "{count} nodes do not form a standard rule for n = {n}"
                )))
            }
        };
        check_budget(budget)?;
        let budget = budget.ceil();
        let (ref_nodes, ref_weights) = sphere_rule(n, budget);
        if ref_nodes.len() != count {
            return Err(Error::Domain(format!(
                "budget {budget} needs {} nodes, got {count}",
                ref_nodes.len()
            )));
        }
        for (i, (w, rw)) in nodes.iter().zip(&ref_nodes).enumerate() {
            if w.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: w.len(),
                });
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let off = w
                .iter()
                .zip(rw)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if (norm - 1.0).abs() > LAYOUT_TOL
                || off > 1e-12
                || (weights[i] - ref_weights[i]).abs() > 1e-15
            {
                return Err(Error::Domain(format!(
                    "node {i} does not match the standard rule"
                )));
            }
        }
        Ok(SphereDensity {
            n,
            budget,
            nodes: ref_nodes,
            weights: ref_weights,
            values,
        })
    }

    /// Same rule, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::Dimension {
                expected: self.values.len(),
                got: values.len(),
            });
        }
        Ok(SphereDensity {
            values,
            ..self.clone()
        })
    }

    /// Pointwise F(w) ↦ g(w, F(w)).
    pub fn map(&self, g: impl Fn(&[f64], Complex64) -> Complex64) -> Self {
        let values = self
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(w, v)| g(w, *v))
            .collect();
        SphereDensity {
            values,
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nearest_node(&self, w0: &[f64]) -> Result<usize> {
        if w0.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: w0.len(),
            });
        }
        let dot = |w: &Vec<f64>| w.iter().zip(w0).map(|(a, b)| a * b).sum::<f64>();
        Ok((0..self.nodes.len())
            .max_by(|a, b| dot(&self.nodes[*a]).total_cmp(&dot(&self.nodes[*b])))
            .expect("rule is nonempty"))
    }

    /// ∫ F dw.
    pub fn mean(&self) -> Complex64 {
        compensated(self.weights.iter().zip(&self.values).map(|(w, v)| v * *w))
    }

    /// Angular Fourier coefficient F̂_k = ∫ F(θ) e^{−ikθ} dθ/2π (n = 2).
    pub fn angular_coefficient(&self, k: i64) -> Result<Complex64> {
        if self.n != 2 {
            return Err(Error::Unsupported(
                "angular coefficients are defined on the circle only".into(),
            ));
        }
        Ok(self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((w, wt), v)| v * Complex64::from_polar(*wt, -(k as f64) * w[1].atan2(w[0])))
            .sum())
    }

    pub fn to_json(&self) -> String {
        let file = DensityFile {
            n: self.n,
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
            budget: Some(self.budget),
        };
        serde_json::to_string(&file).expect("density serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DensityFile =
            serde_json::from_str(text).map_err(|e| Error::Domain(format!("density JSON: {e}")))?;
        let values = file
            .values
            .iter()
            .map(|v| Complex64::new(v[0], v[1]))
            .collect();
        Self::from_parts(file.n, file.nodes, file.weights, values, file.budget)
    }
}

/// An element of the λ-eigenspace, given by its density.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFunctionHandle {
    pub lambda: Complex64,
    pub density: SphereDensity,
}

impl EigenFunctionHandle {
    pub fn new(lambda: Complex64, density: SphereDensity) -> Self {
        EigenFunctionHandle { lambda, density }
    }

    pub fn n(&self) -> usize {
        self.density.n
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: x.len(),
            });
        }
        let requested = self.lambda.norm() * norm(x);
        if requested > self.density.budget {
            return Err(Error::RefinementNeeded {
                requested,
                budget: self.density.budget,
            });
        }
        Ok(())
    }

    fn eval_unchecked(&self, x: &[f64]) -> Complex64 {
        let il = Complex64::i() * self.lambda;
        let d = &self.density;
        compensated(
            d.nodes
                .iter()
                .zip(&d.weights)
                .zip(&d.values)
                .map(|((w, wt), v)| {
                    let dot: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
                    (il * dot).exp() * v * *wt
                }),
        )
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// f(x) = ∫ e^{iλ(x,w)} F(w) dw on the density's rule.
pub fn synthesize(handle: &EigenFunctionHandle, x: &[f64]) -> Result<Complex64> {
    handle.check_point(x)?;
    Ok(handle.eval_unchecked(x))
}

/// |Δ_h f(x) + λ² f(x)| with the central (2n+1)-point stencil.
pub fn laplacian_residual(handle: &EigenFunctionHandle, x: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "stencil step must be positive, got {h}"
        )));
    }
    handle.check_point(x)?;
    let f0 = handle.eval_unchecked(x);
    let mut lap = Complex64::new(0.0, 0.0);
    let mut y = x.to_vec();
    for i in 0..x.len() {
        y[i] = x[i] + h;
        handle.check_point(&y)?;
        let fp = handle.eval_unchecked(&y);
        y[i] = x[i] - h;
        handle.check_point(&y)?;
        let fm = handle.eval_unchecked(&y);
        y[i] = x[i];
        lap += (fp + fm - f0 * 2.0) / (h * h);
    }
    Ok((lap + handle.lambda * handle.lambda * f0).norm())
}

/// f^♮(r) = ∫_{S^{n−1}} f(r·u) du, averaged with the density's own rule.
/// Equals (∫F)·φ(r, iλ).
pub fn radial_average(handle: &EigenFunctionHandle, r: f64) -> Result<Complex64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "radius must be finite and ≥ 0, got {r}"
        )));
    }
    let mut e1 = vec![0.0; handle.n()];
    e1[0] = r;
    handle.check_point(&e1)?;
    let d = &handle.density;
    let mut acc = CompensatedSum::default();
    let mut y = vec![0.0; handle.n()];
    for (u, w) in d.nodes.iter().zip(&d.weights) {
        for (yi, ui) in y.iter_mut().zip(u) {
            *yi = r * ui;
        }
        acc.add(handle.eval_unchecked(&y) * *w);
    }
    Ok(acc.total())
}

/// (1/2π)∫₀^{2π} e^{ikθ} g(R_{−θ}x) dθ by an M-point trapezoid rule.
pub fn ktype_project_fn(
    g: impl Fn(&[f64]) -> Complex64,
    k: i64,
    x: &[f64],
    m: usize,
) -> Result<Complex64> {
    if x.len() != 2 {
        return Err(Error::Unsupported(
            "K-type projection is implemented for n = 2 only".into(),
        ));
    }
    if m == 0 {
        return Err(Error::Domain(
            "trapezoid rule needs at least one node".into(),
        ));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        let (s, c) = t.sin_cos();
        // R_{−θ}x
        let y = [c * x[0] + s * x[1], -s * x[0] + c * x[1]];
        acc += Complex64::from_polar(1.0, k as f64 * t) * g(&y);
    }
    Ok(acc / m as f64)
}

/// Trapezoid nodes used by [`ktype_project`]: 2⌈|λ||x|⌉ + 2|k| + 64.
pub fn ktype_nodes(lambda: Complex64, k: i64, x: &[f64]) -> usize {
    2 * (lambda.norm() * norm(x)).ceil() as usize + 2 * k.unsigned_abs() as usize + 64
}

/// α_k * f at x (n = 2): the e^{ikθ} component of f along the circle
/// through x.
pub fn ktype_project(handle: &EigenFunctionHandle, k: i64, x: &[f64]) -> Result<Complex64> {
    if handle.n() != 2 {
        return Err(Error::Unsupported(
            "K-type projection is implemented for n = 2 only".into(),
        ));
    }
    handle.check_point(x)?;
    ktype_project_fn(
        |y| handle.eval_unchecked(y),
        k,
        x,
        ktype_nodes(handle.lambda, k, x),
    )
}

/// Samples of f at r(cos φ_j, sin φ_j), φ_j = 2πj/m.
pub fn circle_samples(handle: &EigenFunctionHandle, r: f64, m: usize) -> Result<Vec<Complex64>> {
    if handle.n() != 2 {
        return Err(Error::Unsupported(
            "circle sampling is implemented for n = 2 only".into(),
        ));
    }
    handle.check_point(&[r, 0.0])?;
    Ok((0..m)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / m as f64;
            handle.eval_unchecked(&[r * t.cos(), r * t.sin()])
        })
        .collect())
}

/// Circle sample count sufficient for [`analyze`] up to `max_k`:
/// 2⌈|λ|r⌉ + 2·max_k + 64.
pub fn analyze_samples(lambda: Complex64, r: f64, max_k: usize) -> usize {
    2 * (lambda.norm() * r).ceil() as usize + 2 * max_k + 64
}

/// Angular coefficients F̂_k, k = −max_k..=max_k, recovered from samples of
/// f on one circle: F̂_k = f̂_k / (i^k J_k(λr)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularCoefficients {
    pub max_k: usize,
    /// Index k + max_k.
    pub coefficients: Vec<Complex64>,
}

impl AngularCoefficients {
    pub fn get(&self, k: i64) -> Option<Complex64> {
        let idx = k + self.max_k as i64;
        (idx >= 0)
            .then(|| self.coefficients.get(idx as usize).copied())
            .flatten()
    }
}

/// Invert synthesis at radius r from equispaced circle samples. Rejects
/// radii where some |J_k(λr)| < 1e-6, |k| ≤ max_k.
pub fn analyze(
    samples: &[Complex64],
    lambda: Complex64,
    r: f64,
    max_k: usize,
) -> Result<AngularCoefficients> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "radius must be finite and > 0, got {r}"
        )));
    }
    let m = samples.len();
    if m < 2 * max_k + 1 {
        return Err(Error::TooFewSamples {
            min: 2 * max_k + 1,
            got: m,
        });
    }
    let z = lambda * r;
    let mut jk = Vec::with_capacity(2 * max_k + 1);
    for k in -(max_k as i64)..=(max_k as i64) {
        let j = bessel_j(k, z);
        if !(j.norm() >= BESSEL_GUARD) {
            return Err(Error::NearBesselZero {
                k,
                value: j.norm(),
                threshold: BESSEL_GUARD,
            });
        }
        jk.push(j);
    }
    let coefficients = (-(max_k as i64)..=(max_k as i64))
        .zip(jk)
        .map(|(k, j)| {
            let fk: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(idx, v)| {
                    v * Complex64::from_polar(1.0, -2.0 * PI * (k * idx as i64) as f64 / m as f64)
                })
                .sum::<Complex64>()
                / m as f64;
            fk / (Complex64::i().powi(k.rem_euclid(4) as i32) * j)
        })
        .collect();
    Ok(AngularCoefficients {
        max_k,
        coefficients,
    })
}
