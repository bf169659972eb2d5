//! Tolerance-aware dense complex linear algebra.
//!
//! Everything above this module works with [`Matrix`] (a dense `DMatrix` of
//! `Complex64`) and [`Subspace`] (an orthonormal column basis). Rank decisions,
//! eigenvalue clustering and verification residuals are all driven by an
//! explicit [`Tolerances`] value rather than hidden constants.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use thiserror::Error;

pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite entry at position {0}")]
    NonfiniteEntry(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigenvalue clusters at {a} and {b} are closer than 3*eps_cluster")]
    ClusterAmbiguous { a: Complex64, b: Complex64 },
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(&'static str),
}

/// Thresholds used for every numerical decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff for rank decisions.
    pub rank: f64,
    /// Single-linkage radius for eigenvalue and signature clustering.
    pub cluster: f64,
    /// Acceptance threshold for verification residuals.
    pub residual: f64,
    /// Frobenius radius for identifying group elements.
    pub dedup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-9,
            cluster: 1e-7,
            residual: 1e-8,
            dedup: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(rank: f64, cluster: f64, residual: f64, dedup: f64) -> Result<Self, NumError> {
        let tol = Tolerances {
            rank,
            cluster,
            residual,
            dedup,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), NumError> {
        let all = [self.rank, self.cluster, self.residual, self.dedup];
        if all.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(NumError::InvalidTolerances("all tolerances must be finite and positive"));
        }
        if self.cluster < self.rank {
            return Err(NumError::InvalidTolerances("eps_cluster must be at least eps_rank"));
        }
        Ok(())
    }
}

/// A linear subspace of `C^n` held as an orthonormal column basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Wraps columns that the caller guarantees to be orthonormal.
    pub(crate) fn from_orthonormal(basis: Matrix) -> Self {
        Subspace {
            ambient_dim: basis.nrows(),
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vector> + '_ {
        self.basis.column_iter().map(|c| c.into_owned())
    }

    /// Orthogonal projection of `v` onto this subspace.
    pub fn project(&self, v: &Vector) -> Vector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Norm of the component of `v` orthogonal to this subspace.
    pub fn residual(&self, v: &Vector) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Image of the subspace under `m`, re-orthonormalized.
    pub fn map(&self, m: &Matrix, tol: &Tolerances) -> Subspace {
        orthonormal_columns(&(m * &self.basis), tol)
    }
}

pub fn check_finite(m: &Matrix) -> Result<(), NumError> {
    match m.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(p) => Err(NumError::NonfiniteEntry(p)),
        None => Ok(()),
    }
}

pub fn check_finite_vector(v: &Vector) -> Result<(), NumError> {
    match v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(p) => Err(NumError::NonfiniteEntry(p)),
        None => Ok(()),
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from rows of complex entries.
pub fn matrix_from_rows(rows: &[Vec<Complex64>]) -> Matrix {
    let r = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    Matrix::from_fn(r, cols, |i, j| rows[i][j])
}

/// Real-entry convenience constructor, row-major.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

pub fn diag(values: &[Complex64]) -> Matrix {
    Matrix::from_diagonal(&Vector::from_column_slice(values))
}

/// Matrix unit `E_ij` in dimension `d`.
pub fn unit(d: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

/// Column-major vectorization.
pub fn vectorize(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &Vector, rows: usize, cols: usize) -> Matrix {
    Matrix::from_column_slice(rows, cols, v.as_slice())
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).iter().copied().fold(0.0, f64::max)
}

pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    to_faer(m)
        .singular_values()
        .expect("svd converges on finite input")
}

/// Full SVD `m = U Σ Vᴴ` with singular values in nonincreasing order.
struct FullSvd {
    values: Vec<f64>,
    u: Matrix,
    v: Matrix,
}

fn to_faer(m: &Matrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn full_svd(m: &Matrix) -> FullSvd {
    let svd = to_faer(m).svd().expect("svd converges on finite input");
    FullSvd {
        values: svd.S().column_vector().iter().map(|s| s.re).collect(),
        u: from_faer(svd.U()),
        v: from_faer(svd.V()),
    }
}

pub fn is_unitary(m: &Matrix, tol: &Tolerances) -> bool {
    m.is_square() && (m.adjoint() * m - Matrix::identity(m.nrows(), m.ncols())).norm() <= tol.residual
}

/// `‖M − Mᴴ‖_F`.
pub fn hermitian_defect(m: &Matrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Orthonormal basis for the span of `vectors`, discarding directions whose
/// singular value falls below `eps_rank · σ_max`.
pub fn orthonormal_basis(vectors: &[Vector], tol: &Tolerances) -> Result<Subspace, NumError> {
    let first = vectors.first().ok_or(NumError::EmptyInput)?;
    let d = first.len();
    if d == 0 {
        return Err(NumError::EmptyInput);
    }
    let mut m = Matrix::zeros(d, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        if v.len() != d {
            return Err(NumError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        check_finite_vector(v)?;
        m.set_column(j, v);
    }
    Ok(orthonormal_columns(&m, tol))
}

/// Orthonormal basis for the column space of `m` (relative `eps_rank` cutoff).
pub fn orthonormal_columns(m: &Matrix, tol: &Tolerances) -> Subspace {
    let d = m.nrows();
    if m.ncols() == 0 || d == 0 {
        return Subspace::zero(d);
    }
    let svd = full_svd(m);
    let smax = svd.values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Subspace::zero(d);
    }
    let k = svd.values.iter().take_while(|s| **s > tol.rank * smax).count();
    Subspace::from_orthonormal(svd.u.columns(0, k).into_owned())
}

/// Numerical rank with the relative `eps_rank` cutoff.
pub fn rank(m: &Matrix, tol: &Tolerances) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol.rank * smax).count()
}

/// Right singular vectors of `m` with singular values listed in ascending
/// order; directions beyond the row count have singular value zero.
fn right_singular_ascending(m: &Matrix) -> (Vec<f64>, Matrix) {
    let cols = m.ncols();
    let svd = full_svd(m);
    let mut values = svd.values;
    values.resize(cols, 0.0);
    values.reverse();
    let order: Vec<usize> = (0..cols).rev().collect();
    (values, svd.v.select_columns(order.iter()))
}

/// Kernel of `m` with the relative `eps_rank · σ_max` cutoff.
pub fn nullspace(m: &Matrix, tol: &Tolerances) -> Result<Subspace, NumError> {
    check_finite(m)?;
    let smax = spectral_norm(m);
    Ok(nullspace_below(m, tol.rank * smax))
}

/// Kernel of `m`: right singular vectors whose singular value is at most
/// `threshold` (an absolute bound).
pub fn nullspace_below(m: &Matrix, threshold: f64) -> Subspace {
    let cols = m.ncols();
    if cols == 0 {
        return Subspace::zero(0);
    }
    if m.nrows() == 0 {
        return Subspace::full(cols);
    }
    let (values, v) = right_singular_ascending(m);
    let k = values.iter().take_while(|s| **s <= threshold).count();
    Subspace::from_orthonormal(v.columns(0, k).into_owned())
}

/// Right singular vectors of the `k` smallest singular values.
pub fn smallest_right_singular(m: &Matrix, k: usize) -> Subspace {
    let (_, v) = right_singular_ascending(m);
    Subspace::from_orthonormal(v.columns(0, k.min(v.ncols())).into_owned())
}

/// An eigenvalue cluster with its generalized eigenspace.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub center: Complex64,
    pub multiplicity: usize,
    pub space: Subspace,
}

pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>, NumError> {
    if !m.is_square() {
        return Err(NumError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    check_finite(m)?;
    let d = m.nrows();
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = Schur::new(m.clone());
    let (_, t) = schur.unpack();
    Ok((0..d).map(|i| t[(i, i)]).collect())
}

/// Groups the eigenvalues of `m` by single linkage with radius
/// `eps_cluster · max(‖m‖₂, 1)` and attaches to each cluster its generalized
/// eigenspace.
///
/// The generalized space of a cluster with center `c` and multiplicity `k` is
/// the kernel of `(M − cI)^k`, taken as the `k` right singular vectors with the
/// smallest singular values so that the dimensions always sum to `d`.
/// Clusters are ordered by `(re, im)` of their centers.
pub fn clustered_eigen(m: &Matrix, tol: &Tolerances) -> Result<Vec<EigenCluster>, NumError> {
    let values = eigenvalues(m)?;
    let radius = tol.cluster * spectral_norm(m).max(1.0);
    cluster_eigenvalues(m, values, radius)
}

/// [`clustered_eigen`] with an explicit absolute radius.
pub(crate) fn clustered_eigen_within(m: &Matrix, radius: f64) -> Result<Vec<EigenCluster>, NumError> {
    cluster_eigenvalues(m, eigenvalues(m)?, radius)
}

fn cluster_eigenvalues(
    m: &Matrix,
    values: Vec<Complex64>,
    radius: f64,
) -> Result<Vec<EigenCluster>, NumError> {
    let d = values.len();
    let groups = single_linkage(&values, radius);

    let mut clusters: Vec<(Complex64, usize)> = groups
        .iter()
        .map(|g| {
            let sum: Complex64 = g.iter().map(|&i| values[i]).sum();
            (sum / g.len() as f64, g.len())
        })
        .collect();
    clusters.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));

    for (i, a) in clusters.iter().enumerate() {
        for b in &clusters[i + 1..] {
            if (a.0 - b.0).norm() <= 3.0 * radius {
                return Err(NumError::ClusterAmbiguous { a: a.0, b: b.0 });
            }
        }
    }

    let id = Matrix::identity(d, d);
    Ok(clusters
        .into_iter()
        .map(|(center, multiplicity)| {
            let shifted = m - &id * center;
            let mut power = shifted.clone();
            for _ in 1..multiplicity {
                power = &power * &shifted;
            }
            EigenCluster {
                center,
                multiplicity,
                space: smallest_right_singular(&power, multiplicity),
            }
        })
        .collect())
}

/// Single-linkage grouping of points in the complex plane.
pub(crate) fn single_linkage(points: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

/// `S1 ⊆ S2`: every basis vector of `S1` reconstructs from `S2` with residual
/// at most `eps_residual`.
pub fn subspace_leq(s1: &Subspace, s2: &Subspace, tol: &Tolerances) -> Result<bool, NumError> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(NumError::DimensionMismatch {
            expected: s1.ambient_dim(),
            found: s2.ambient_dim(),
        });
    }
    Ok(s1.vectors().all(|v| s2.residual(&v) <= tol.residual))
}

pub fn subspace_eq(s1: &Subspace, s2: &Subspace, tol: &Tolerances) -> Result<bool, NumError> {
    Ok(subspace_leq(s1, s2, tol)? && subspace_leq(s2, s1, tol)?)
}

/// Rank of the concatenation of the given bases.
pub fn joint_rank(spaces: &[&Subspace], tol: &Tolerances) -> usize {
    let Some(first) = spaces.first() else {
        return 0;
    };
    let d = first.ambient_dim();
    let total: usize = spaces.iter().map(|s| s.dim()).sum();
    let mut m = Matrix::zeros(d, total);
    let mut col = 0;
    for s in spaces {
        m.view_mut((0, col), (d, s.dim())).copy_from(s.basis());
        col += s.dim();
    }
    rank(&m, tol)
}

/// Minimum-norm least-squares solution of `A x ≈ b` and the residual `‖Ax − b‖`.
pub fn least_squares(a: &Matrix, b: &Vector) -> Result<(Vector, f64), NumError> {
    if a.nrows() != b.len() {
        return Err(NumError::DimensionMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    check_finite(a)?;
    check_finite_vector(b)?;
    if a.ncols() == 0 {
        return Ok((Vector::zeros(0), b.norm()));
    }
    if a.nrows() == 0 {
        return Ok((Vector::zeros(a.ncols()), 0.0));
    }
    let svd = full_svd(a);
    let smax = svd.values.first().copied().unwrap_or(0.0);
    let cutoff = f64::EPSILON * a.nrows().max(a.ncols()) as f64 * smax;
    let mut x = Vector::zeros(a.ncols());
    for (i, s) in svd.values.iter().enumerate().take_while(|(_, s)| **s > cutoff) {
        let coeff = svd.u.column(i).dotc(b) / *s;
        x += svd.v.column(i) * coeff;
    }
    let residual = (a * &x - b).norm();
    Ok((x, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[f64]) -> Vector {
        Vector::from_iterator(entries.len(), entries.iter().map(|x| c(*x, 0.0)))
    }

    #[test]
    fn collinear_vectors_span_a_line() {
        let tol = Tolerances::default();
        let s = orthonormal_basis(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])], &tol).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.residual(&v(&[1.0, 0.0])) < 1e-14);
    }

    #[test]
    fn standard_basis_spans_plane() {
        let tol = Tolerances::default();
        let s = orthonormal_basis(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])], &tol).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn tiny_perturbation_is_rank_deficient() {
        let tol = Tolerances::default();
        let s = orthonormal_basis(&[v(&[1.0, 1.0, 0.0]), v(&[1.0, 1.0, 1e-15])], &tol).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn orthonormal_basis_errors() {
        let tol = Tolerances::default();
        assert_eq!(orthonormal_basis(&[], &tol), Err(NumError::EmptyInput));
        let bad = Vector::from_vec(vec![c(f64::NAN, 0.0)]);
        assert!(matches!(
            orthonormal_basis(&[bad], &tol),
            Err(NumError::NonfiniteEntry(0))
        ));
        assert!(matches!(
            orthonormal_basis(&[v(&[1.0]), v(&[1.0, 2.0])], &tol),
            Err(NumError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn nullspace_examples() {
        let tol = Tolerances::default();
        let n = nullspace(&real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]), &tol).unwrap();
        assert_eq!(n.dim(), 1);
        assert!(n.residual(&v(&[1.0, 0.0])) < 1e-14);

        assert!(nullspace(&Matrix::identity(3, 3), &tol).unwrap().is_zero());

        let n = nullspace(&real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]), &tol).unwrap();
        assert_eq!(n.dim(), 1);
        let s = 0.5f64.sqrt();
        assert!(n.residual(&v(&[s, -s])) < 1e-14);
    }

    #[test]
    fn nullspace_of_wide_matrix_keeps_all_directions() {
        let tol = Tolerances::default();
        let n = nullspace(&real_matrix(1, 3, &[1.0, 1.0, 0.0]), &tol).unwrap();
        assert_eq!(n.dim(), 2);
    }

    #[test]
    fn clustered_eigen_examples() {
        let tol = Tolerances::default();
        let cl = clustered_eigen(&diag(&[ONE, ONE, c(2.0, 0.0)]), &tol).unwrap();
        assert_eq!(cl.len(), 2);
        assert!((cl[0].center - ONE).norm() < 1e-12);
        assert_eq!(cl[0].space.dim(), 2);
        assert!((cl[1].center - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(cl[1].space.dim(), 1);

        let cl = clustered_eigen(&real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]), &tol).unwrap();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].space.dim(), 2);

        let cl = clustered_eigen(&diag(&[I, -I]), &tol).unwrap();
        assert_eq!(cl.len(), 2);
        assert!((cl[0].center + I).norm() < 1e-12);
        assert!((cl[1].center - I).norm() < 1e-12);
        assert!(cl.iter().all(|k| k.space.dim() == 1));
    }

    #[test]
    fn near_clusters_are_ambiguous() {
        let tol = Tolerances::default();
        let m = diag(&[ONE, c(1.0 + 2e-7, 0.0)]);
        assert!(matches!(
            clustered_eigen(&m, &tol),
            Err(NumError::ClusterAmbiguous { .. })
        ));
    }

    #[test]
    fn clustered_eigen_rejects_rectangular() {
        let tol = Tolerances::default();
        assert!(matches!(
            clustered_eigen(&Matrix::zeros(2, 3), &tol),
            Err(NumError::NotSquare { .. })
        ));
    }

    #[test]
    fn subspace_order_examples() {
        let tol = Tolerances::default();
        let line = orthonormal_basis(&[v(&[1.0, 0.0])], &tol).unwrap();
        let plane = Subspace::full(2);
        assert!(subspace_leq(&line, &plane, &tol).unwrap());
        assert!(!subspace_leq(&plane, &line, &tol).unwrap());

        let a = orthonormal_basis(&[v(&[1.0, 1.0])], &tol).unwrap();
        let b = orthonormal_basis(&[v(&[1.0, 1.0000001])], &tol).unwrap();
        assert!(!subspace_leq(&a, &b, &tol).unwrap());

        assert!(matches!(
            subspace_leq(&line, &Subspace::full(3), &tol),
            Err(NumError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn least_squares_examples() {
        let (x, r) = least_squares(&Matrix::identity(2, 2), &v(&[3.0, 4.0])).unwrap();
        assert!((x - v(&[3.0, 4.0])).norm() < 1e-14);
        assert!(r < 1e-14);

        let (x, r) = least_squares(&real_matrix(2, 1, &[1.0, 1.0]), &v(&[1.0, 0.0])).unwrap();
        assert!((x[0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((r - 0.5f64.sqrt()).abs() < 1e-14);

        let a = real_matrix(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let (_, r) = least_squares(&a, &v(&[1.0, 2.0, 3.0])).unwrap();
        assert!(r <= Tolerances::default().residual);
    }

    #[test]
    fn tolerances_validation() {
        assert!(Tolerances::default().validate().is_ok());
        assert!(Tolerances::new(1e-9, 1e-10, 1e-8, 1e-9).is_err());
        assert!(Tolerances::new(0.0, 1e-7, 1e-8, 1e-9).is_err());
    }
}
