//! Haar-distributed sampling on the classical compact groups, realized as
//! real orthogonal matrices acting on R^n.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Orthogonality tolerance every sampled element satisfies.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SO,
    O,
    U,
    SU,
    Sp,
}

impl Family {
    /// Real dimension of the space acted on, per unit of the rank parameter.
    pub fn real_multiplier(self) -> usize {
        match self {
            Family::SO | Family::O => 1,
            Family::U | Family::SU => 2,
            Family::Sp => 4,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Family::SO => "SO",
            Family::O => "O",
            Family::U => "U",
            Family::SU => "SU",
            Family::Sp => "Sp",
        }
    }
}

/// A classical compact group together with its real realization on R^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    family: Family,
    m: usize,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRepr {
    family: Family,
    m: usize,
    n: usize,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;

    fn try_from(r: GroupSpecRepr) -> Result<Self> {
        let spec = GroupSpec::new(r.family, r.m)?;
        if spec.n() != r.n {
            return Err(Error::Dimension {
                expected: spec.n(),
                got: r.n,
            });
        }
        Ok(spec)
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(s: GroupSpec) -> Self {
        GroupSpecRepr {
            family: s.family,
            m: s.m,
            n: s.n(),
        }
    }
}

impl GroupSpec {
    pub fn new(family: Family, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain(format!(
                "{}(0) has no ambient space",
                family.prefix()
            )));
        }
        Ok(Self { family, m })
    }

    pub fn so(n: usize) -> Result<Self> {
        Self::new(Family::SO, n)
    }

    pub fn o(n: usize) -> Result<Self> {
        Self::new(Family::O, n)
    }

    pub fn u(m: usize) -> Result<Self> {
        Self::new(Family::U, m)
    }

    pub fn su(m: usize) -> Result<Self> {
        Self::new(Family::SU, m)
    }

    pub fn sp(m: usize) -> Result<Self> {
        Self::new(Family::Sp, m)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The rank parameter m.
    pub fn rank_parameter(&self) -> usize {
        self.m
    }

    /// Ambient real dimension n.
    pub fn n(&self) -> usize {
        self.m * self.family.real_multiplier()
    }

    /// Whether every element has determinant +1 in the real realization.
    pub fn is_special(&self) -> bool {
        !matches!(self.family, Family::O)
    }

    pub fn name(&self) -> String {
        format!("{}({})", self.family.prefix(), self.m)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family.prefix(), self.m)
    }
}

/// An element of a compact group as an n×n real orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: DMatrix<f64>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    /// Wrap a matrix, checking orthogonality to [`ORTHOGONALITY_TOL`].
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let el = Self { matrix };
        let defect = el.orthogonality_defect();
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::Domain(format!(
                "matrix is not orthogonal: ‖QᵀQ − I‖_max = {defect:.3e}"
            )));
        }
        Ok(el)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// ‖QᵀQ − I‖_max.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        let g = self.matrix.tr_mul(&self.matrix) - DMatrix::<f64>::identity(n, n);
        g.amax()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Matrix-vector product kY.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(y.len(), n, "vector length must match the group dimension");
        let mut out = vec![0.0; n];
        for (j, yj) in y.iter().enumerate() {
            if *yj == 0.0 {
                continue;
            }
            let col = self.matrix.column(j);
            for (o, c) in out.iter_mut().zip(col.iter()) {
                *o += c * yj;
            }
        }
        out
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: &self.matrix * &other.matrix,
        }
    }
}

/// Streaming Haar sampler; each instance owns its generator.
#[derive(Debug, Clone)]
pub struct HaarSampler {
    spec: GroupSpec,
    rng: ChaCha8Rng,
}

impl HaarSampler {
    pub fn new(spec: GroupSpec, seed: u64) -> Self {
        Self {
            spec,
            rng: rng_from_seed(seed),
        }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn sample(&mut self) -> GroupElement {
        let m = self.spec.m;
        let matrix = match self.spec.family {
            Family::O => haar_orthogonal(m, &mut self.rng),
            Family::SO => {
                let mut q = haar_orthogonal(m, &mut self.rng);
                if q.determinant() < 0.0 {
                    q.column_mut(0).neg_mut();
                }
                q
            }
            Family::U => realify_complex(&haar_unitary(m, &mut self.rng)),
            Family::SU => {
                let mut q = haar_unitary(m, &mut self.rng);
                let det = q.determinant();
                let fix = (det / det.norm()).conj();
                for v in q.column_mut(0).iter_mut() {
                    *v *= fix;
                }
                realify_complex(&q)
            }
            Family::Sp => realify_quaternion(&haar_symplectic(m, &mut self.rng), m),
        };
        GroupElement { matrix }
    }
}

impl Iterator for HaarSampler {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        Some(self.sample())
    }
}

/// `count` independent Haar-distributed elements, deterministic in
/// (spec, seed, count).
pub fn haar_sample(spec: &GroupSpec, seed: u64, count: usize) -> Result<Vec<GroupElement>> {
    if count == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    Ok(HaarSampler::new(*spec, seed).take(count).collect())
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

// QR of a Gaussian matrix; Q·sign(diag R) removes the sign ambiguity.
fn haar_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn haar_unitary<R: Rng>(m: usize, rng: &mut R) -> DMatrix<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let g = DMatrix::<Complex64>::from_fn(m, m, |_, _| {
        Complex64::new(gaussian(rng) * scale, gaussian(rng) * scale)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..m {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for v in q.column_mut(j).iter_mut() {
            *v *= ph;
        }
    }
    q
}

/// a+bi ↦ [[a,−b],[b,a]] blockwise.
pub fn realify_complex(q: &DMatrix<Complex64>) -> DMatrix<f64> {
    let m = q.nrows();
    DMatrix::from_fn(2 * m, 2 * m, |r, c| {
        let z = q[(r / 2, c / 2)];
        match (r % 2, c % 2) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Quaternion([f64; 4]);

impl Quaternion {
    const ZERO: Quaternion = Quaternion([0.0; 4]);

    fn mul(self, o: Quaternion) -> Quaternion {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quaternion([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }

    fn conj(self) -> Quaternion {
        let [a, b, c, d] = self.0;
        Quaternion([a, -b, -c, -d])
    }

    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    fn scale(self, s: f64) -> Quaternion {
        Quaternion(self.0.map(|x| x * s))
    }

    fn norm_sqr(self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// Matrix of left multiplication x ↦ q·x in the basis (1, i, j, k).
    fn left_matrix(self) -> [[f64; 4]; 4] {
        let [a, b, c, d] = self.0;
        [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]]
    }
}

// Columns of a quaternionic Gaussian matrix, orthonormalized with
// right-scalar Gram–Schmidt (two passes). Gram–Schmidt commutes with left
// multiplication by Sp(m), so the result is Haar.
fn haar_symplectic<R: Rng>(m: usize, rng: &mut R) -> Vec<Vec<Quaternion>> {
    let mut cols: Vec<Vec<Quaternion>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut v: Vec<Quaternion> = (0..m)
            .map(|_| Quaternion(std::array::from_fn(|_| gaussian(rng))))
            .collect();
        for _pass in 0..2 {
            for q in &cols {
                // coefficient q* v = Σ conj(q_i) v_i
                let coef = q.iter().zip(&v).fold(Quaternion::ZERO, |acc, (qi, vi)| {
                    acc.add(qi.conj().mul(*vi))
                });
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi = vi.sub(qi.mul(coef));
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi = vi.scale(1.0 / norm);
        }
        cols.push(v);
    }
    cols
}

fn realify_quaternion(cols: &[Vec<Quaternion>], m: usize) -> DMatrix<f64> {
    let mut out = DMatrix::<f64>::zeros(4 * m, 4 * m);
    for (j, col) in cols.iter().enumerate() {
        for (i, q) in col.iter().enumerate() {
            let block = q.left_matrix();
            for (r, row) in block.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    out[(4 * i + r, 4 * j + c)] = *v;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_specs() -> Vec<GroupSpec> {
        vec![
            GroupSpec::so(2).unwrap(),
            GroupSpec::so(3).unwrap(),
            GroupSpec::so(5).unwrap(),
            GroupSpec::o(3).unwrap(),
            GroupSpec::u(1).unwrap(),
            GroupSpec::u(3).unwrap(),
            GroupSpec::su(2).unwrap(),
            GroupSpec::su(3).unwrap(),
            GroupSpec::sp(1).unwrap(),
            GroupSpec::sp(2).unwrap(),
        ]
    }

    #[test]
    fn ambient_dimension_follows_family() {
        assert_eq!(GroupSpec::so(3).unwrap().n(), 3);
        assert_eq!(GroupSpec::u(2).unwrap().n(), 4);
        assert_eq!(GroupSpec::su(3).unwrap().n(), 6);
        assert_eq!(GroupSpec::sp(2).unwrap().n(), 8);
        assert!(GroupSpec::sp(0).is_err());
    }

    #[test]
    fn so3_single_sample_is_a_rotation() {
        let q = &haar_sample(&GroupSpec::so(3).unwrap(), 1, 1).unwrap()[0];
        assert!(q.orthogonality_defect() <= 1e-12);
        assert!((q.determinant() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn every_family_is_orthogonal_with_correct_determinant() {
        for spec in all_specs() {
            for q in haar_sample(&spec, 99, 50).unwrap() {
                assert_eq!(q.dim(), spec.n());
                assert!(q.orthogonality_defect() <= ORTHOGONALITY_TOL, "{spec}");
                let det = q.determinant();
                if spec.is_special() {
                    assert!((det - 1.0).abs() <= 1e-12, "{spec}: det {det}");
                } else {
                    assert!((det.abs() - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn orthogonal_group_hits_both_components() {
        let dets: Vec<f64> = haar_sample(&GroupSpec::o(3).unwrap(), 5, 200)
            .unwrap()
            .iter()
            .map(|q| q.determinant())
            .collect();
        assert!(dets.iter().any(|d| *d < 0.0));
        assert!(dets.iter().any(|d| *d > 0.0));
    }

    #[test]
    fn realification_commutes_with_complex_structure() {
        // the realized matrices commute with J = multiplication by i
        let spec = GroupSpec::u(2).unwrap();
        let j = realify_complex(&DMatrix::from_diagonal_element(
            2,
            2,
            Complex64::new(0.0, 1.0),
        ));
        for q in haar_sample(&spec, 3, 10).unwrap() {
            let c = q.matrix() * &j - &j * q.matrix();
            assert!(c.amax() < 1e-13);
        }
    }

    #[test]
    fn symplectic_commutes_with_right_quaternion_units() {
        // left-quaternionic matrices commute with right multiplication by j
        let spec = GroupSpec::sp(2).unwrap();
        let mut rj = DMatrix::<f64>::zeros(8, 8);
        // right multiplication by j on (1,i,j,k): 1→j, i→ij=k, j→-1, k→kj=-i
        let block = [
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ];
        for b in 0..2 {
            for r in 0..4 {
                for c in 0..4 {
                    rj[(4 * b + r, 4 * b + c)] = block[r][c];
                }
            }
        }
        for q in haar_sample(&spec, 11, 10).unwrap() {
            let c = q.matrix() * &rj - &rj * q.matrix();
            assert!(c.amax() < 1e-13);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = GroupSpec::sp(2).unwrap();
        let a = haar_sample(&spec, 42, 5).unwrap();
        let b = haar_sample(&spec, 42, 5).unwrap();
        assert_eq!(a, b);
        let c = haar_sample(&spec, 43, 5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_count_is_rejected() {
        assert!(haar_sample(&GroupSpec::so(3).unwrap(), 0, 0).is_err());
    }

    #[test]
    fn spec_serde_checks_dimension() {
        let spec = GroupSpec::su(2).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"family":"SU","m":2,"n":4}"#);
        let back: GroupSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"family":"SU","m":2,"n":3}"#).is_err());
    }
}
