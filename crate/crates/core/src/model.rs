//! Flat symmetric-space instances: the data (K, p, a, Ad, λ(·), W) consumed
//! by the spherical-function evaluators.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::is_transitive_on_spheres;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// A point of p in orthonormal coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PVector(pub Vec<f64>);

impl PVector {
    pub fn zeros(dim: usize) -> Self {
        PVector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }

    pub fn scaled(&self, t: f64) -> PVector {
        PVector(self.0.iter().map(|x| x * t).collect())
    }

    pub fn sub(&self, other: &PVector) -> PVector {
        PVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &PVector) -> PVector {
        PVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// λ ∈ a*_c in slice coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam(pub Vec<Complex64>);

impl SpectralParam {
    pub fn real(values: &[f64]) -> Self {
        SpectralParam(values.iter().map(|v| Complex64::new(*v, 0.0)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Largest |Im λ_i|.
    pub fn max_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.max_imag() == 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.norm() == 0.0)
    }

    pub fn neg(&self) -> SpectralParam {
        SpectralParam(self.0.iter().map(|z| -z).collect())
    }

    fn distance(&self, other: &SpectralParam) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// p = R^n, K ⊆ O(n) transitive on spheres, a = R·e₁.
    RankOne,
    /// p = symmetric traceless n×n matrices, K = SO(n), a = traceless diagonals.
    SlFlat,
}

/// An immutable flat model K ⋉ p.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionModel {
    name: String,
    kind: ModelKind,
    n: usize,
    group: GroupSpec,
    dim_p: usize,
    rank: usize,
    // diagonal entries of the orthonormal basis of the diagonal block (SL model)
    diag_basis: Vec<Vec<f64>>,
}

/// Serializable descriptor {name, dim_p, rank, group}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub name: String,
    pub dim_p: usize,
    pub rank: usize,
    pub group: GroupSpec,
}

/// p = R^n acted on by a sphere-transitive K, with a = R·e₁ and W = {±1}.
pub fn rank_one_model(n: usize, spec: GroupSpec) -> Result<MotionModel> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "rank-one model needs n ≥ 2, got {n}"
        )));
    }
    if spec.n() != n || !is_transitive_on_spheres(&spec.name(), n)? {
        return Err(Error::NotTransitive {
            group: spec.name(),
            n,
        });
    }
    Ok(MotionModel {
        name: format!("rank1:{n}:{spec}"),
        kind: ModelKind::RankOne,
        n,
        group: spec,
        dim_p: n,
        rank: 1,
        diag_basis: Vec::new(),
    })
}

/// The flat model of SL(n, R)/SO(n): symmetric traceless matrices under
/// conjugation by SO(n).
pub fn sl_flat_model(n: usize) -> Result<MotionModel> {
    if n < 2 {
        return Err(Error::Domain(format!("SL flat model needs n ≥ 2, got {n}")));
    }
    // Helmert basis of traceless diagonals: (e₁+…+e_k − k e_{k+1})/√(k(k+1))
    let diag_basis = (1..n)
        .map(|k| {
            let c = 1.0 / ((k * (k + 1)) as f64).sqrt();
            (0..n)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => c,
                    std::cmp::Ordering::Equal => -(k as f64) * c,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect();
    Ok(MotionModel {
        name: format!("sl:{n}"),
        kind: ModelKind::SlFlat,
        n,
        group: GroupSpec::so(n)?,
        dim_p: n * (n + 1) / 2 - 1,
        rank: n - 1,
        diag_basis,
    })
}

impl MotionModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim_p(&self) -> usize {
        self.dim_p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    /// n: ambient dimension of R^n (rank-one) or matrix size (SL).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            name: self.name.clone(),
            dim_p: self.dim_p,
            rank: self.rank,
            group: self.group,
        }
    }

    fn check_vector(&self, y: &PVector) -> Result<()> {
        if y.dim() != self.dim_p {
            return Err(Error::Dimension {
                expected: self.dim_p,
                got: y.dim(),
            });
        }
        Ok(())
    }

    fn check_param(&self, lambda: &SpectralParam) -> Result<()> {
        if lambda.rank() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                got: lambda.rank(),
            });
        }
        Ok(())
    }

    /// Symmetric matrix of an SL-model vector.
    pub fn to_matrix(&self, y: &PVector) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (k, diag) in self.diag_basis.iter().enumerate() {
            for i in 0..n {
                m[(i, i)] += y.0[k] * diag[i];
            }
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut idx = n - 1;
        for i in 0..n {
            for j in (i + 1)..n {
                m[(i, j)] = y.0[idx] * s;
                m[(j, i)] = y.0[idx] * s;
                idx += 1;
            }
        }
        m
    }

    /// Orthonormal coordinates of a symmetric traceless matrix (SL model).
    pub fn from_matrix(&self, m: &DMatrix<f64>) -> PVector {
        let n = self.n;
        let mut out = Vec::with_capacity(self.dim_p);
        for diag in &self.diag_basis {
            out.push((0..n).map(|i| m[(i, i)] * diag[i]).sum());
        }
        let s = std::f64::consts::SQRT_2;
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(0.5 * (m[(i, j)] + m[(j, i)]) * s);
            }
        }
        PVector(out)
    }

    /// Ad(k)Y.
    pub fn action(&self, k: &GroupElement, y: &PVector) -> Result<PVector> {
        self.check_vector(y)?;
        match self.kind {
            ModelKind::RankOne => Ok(PVector(k.apply(&y.0))),
            ModelKind::SlFlat => {
                let m = self.to_matrix(y);
                let km = k.matrix() * m * k.matrix().transpose();
                Ok(self.from_matrix(&km))
            }
        }
    }

    /// The point of a with slice coordinates `h` (length = rank).
    pub fn embed_a(&self, h: &[f64]) -> Result<PVector> {
        if h.len() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                got: h.len(),
            });
        }
        match self.kind {
            ModelKind::RankOne => {
                let mut v = vec![0.0; self.n];
                v[0] = h[0];
                Ok(PVector(v))
            }
            ModelKind::SlFlat => {
                let mut m = DMatrix::<f64>::zeros(self.n, self.n);
                let mut trace = 0.0;
                for (i, hi) in h.iter().enumerate() {
                    m[(i, i)] = *hi;
                    trace += hi;
                }
                m[(self.n - 1, self.n - 1)] = -trace;
                Ok(self.from_matrix(&m))
            }
        }
    }

    /// Diagonal of the SL matrix, read from coordinates.
    fn diagonal(&self, y: &[f64]) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for (k, diag) in self.diag_basis.iter().enumerate() {
            for (di, bi) in d.iter_mut().zip(diag) {
                *di += y[k] * bi;
            }
        }
        d
    }

    /// λ(Y): λ₁·Y₁ (rank one) or Σ_{i<n} λ_i·Y_ii (SL).
    pub fn pairing(&self, lambda: &SpectralParam, y: &PVector) -> Result<Complex64> {
        self.check_param(lambda)?;
        self.check_vector(y)?;
        Ok(self.pairing_unchecked(lambda, &y.0))
    }

    fn pairing_unchecked(&self, lambda: &SpectralParam, y: &[f64]) -> Complex64 {
        match self.kind {
            ModelKind::RankOne => lambda.0[0] * y[0],
            ModelKind::SlFlat => {
                let d = self.diagonal(y);
                lambda.0.iter().zip(&d).map(|(l, di)| l * di).sum()
            }
        }
    }

    /// λ(Ad(k)Y) without materializing Ad(k)Y in full.
    ///
    /// Only the coordinates λ reads are formed: (kY)₁ for rank one, the
    /// diagonal of kYkᵀ for the SL model. `y_matrix` must be
    /// [`MotionModel::to_matrix`] of Y for the SL model and is ignored
    /// otherwise.
    pub fn pairing_after_action(
        &self,
        lambda: &SpectralParam,
        k: &GroupElement,
        y: &PVector,
        y_matrix: Option<&DMatrix<f64>>,
    ) -> Complex64 {
        let km = k.matrix();
        match self.kind {
            ModelKind::RankOne => {
                let first: f64 = (0..self.n).map(|j| km[(0, j)] * y.0[j]).sum();
                lambda.0[0] * first
            }
            ModelKind::SlFlat => {
                let owned;
                let m = match y_matrix {
                    Some(m) => m,
                    None => {
                        owned = self.to_matrix(y);
                        &owned
                    }
                };
                let n = self.n;
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, l) in lambda.0.iter().enumerate() {
                    // (k M kᵀ)_ii = Σ_ab k_ia M_ab k_ib
                    let mut d = 0.0;
                    for a in 0..n {
                        let kia = km[(i, a)];
                        if kia == 0.0 {
                            continue;
                        }
                        let row: f64 = (0..n).map(|b| m[(a, b)] * km[(i, b)]).sum();
                        d += kia * row;
                    }
                    acc += l * d;
                }
                acc
            }
        }
    }

    /// Distinct Weyl images of λ.
    pub fn weyl_orbit(&self, lambda: &SpectralParam) -> Result<Vec<SpectralParam>> {
        self.check_param(lambda)?;
        let scale = 1.0 + lambda.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut orbit: Vec<SpectralParam> = Vec::new();
        for (img, _) in self.weyl_representatives(lambda)? {
            if !orbit.iter().any(|o| o.distance(&img) <= 1e-14 * scale) {
                orbit.push(img);
            }
        }
        Ok(orbit)
    }

    /// Each Weyl image λ′ of λ with an element k₀ ∈ K satisfying
    /// λ′(Y) = λ(Ad(k₀)Y) for all Y.
    pub fn weyl_representatives(
        &self,
        lambda: &SpectralParam,
    ) -> Result<Vec<(SpectralParam, GroupElement)>> {
        self.check_param(lambda)?;
        let n = self.n;
        match self.kind {
            ModelKind::RankOne => {
                let mut flip = DMatrix::<f64>::identity(n, n);
                match self.group.family() {
                    crate::group::Family::U | crate::group::Family::Sp => {
                        // −I lies in U(m) and Sp(m); for U(m) diag(−1,1,…) suffices
                        if self.group.family() == crate::group::Family::Sp {
                            flip = -flip;
                        } else {
                            flip[(0, 0)] = -1.0;
                            flip[(1, 1)] = -1.0;
                        }
                    }
                    _ => {
                        // diag(−1, −1, 1, …): det +1, in SO(n) and in SU(m), m ≥ 2
                        flip[(0, 0)] = -1.0;
                        flip[(1, 1)] = -1.0;
                    }
                }
                Ok(vec![
                    (lambda.clone(), GroupElement::identity(n)),
                    (lambda.neg(), GroupElement::from_matrix(flip)?),
                ])
            }
            ModelKind::SlFlat => {
                let mut full: Vec<Complex64> = lambda.0.clone();
                full.push(Complex64::new(0.0, 0.0));
                let mut out = Vec::new();
                for perm in permutations(n) {
                    // P[i][π(i)] = 1 gives (P Y Pᵀ)_ii = Y_{π(i)π(i)}
                    let mut p = DMatrix::<f64>::zeros(n, n);
                    for (i, pi) in perm.iter().enumerate() {
                        p[(i, *pi)] = 1.0;
                    }
                    if p.determinant() < 0.0 {
                        p.row_mut(0).neg_mut();
                    }
                    // λ′_j = λ_{π⁻¹(j)}, shifted so the last entry is 0
                    let mut img = vec![Complex64::new(0.0, 0.0); n];
                    for (i, pi) in perm.iter().enumerate() {
                        img[*pi] = full[i];
                    }
                    let last = img[n - 1];
                    let coords = img[..n - 1].iter().map(|z| z - last).collect();
                    out.push((SpectralParam(coords), GroupElement::from_matrix(p)?));
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for MotionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Parse "rank1:<n>[:<group>]" or "sl:<n>".
pub fn parse_model(spec: &str) -> Result<MotionModel> {
    let bad = || {
        Error::Domain(format!(
            "unrecognized model `{spec}` (expected rank1:<n>[:<group>] or sl:<n>)"
        ))
    };
    let mut parts = spec.splitn(3, ':');
    let kind = parts.next().ok_or_else(bad)?;
    let n: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    match kind {
        "rank1" => {
            let group = match parts.next() {
                Some(name) => crate::classify::sampler_spec(name)?,
                None => GroupSpec::so(n)?,
            };
            rank_one_model(n, group)
        }
        "sl" if parts.next().is_none() => sl_flat_model(n),
        _ => Err(bad()),
    }
}
