//! Finite-dimensional matrix algebras.
//!
//! A [`MatrixAlgebra`] is a subspace of `d×d` complex matrices closed under
//! products, held as an explicit basis. For commutative algebras this module
//! computes the joint generalized weight decomposition of `C^d`, the
//! nilradical, the common kernel of a nilpotent family and the Gelfand table
//! `λ ↦ λ(B_i)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::numkit::{
    self, clustered_eigen_within, joint_rank, least_squares, nullspace, nullspace_below, vectorize,
    Matrix, NumError, Subspace, Tolerances, Vector,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generators have mixed sizes: expected {expected}x{expected}, found {rows}x{cols}")]
    MixedSizes {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("closure exceeds the dimension cap {cap}")]
    DimensionCap { cap: usize },
    #[error("basis elements are linearly dependent")]
    DependentBasis,
    #[error("span is not closed under products (residual {residual:.3e})")]
    NotClosed { residual: f64 },
    #[error("algebra is not abelian (scaled commutator {violation:.3e})")]
    NotAbelian { violation: f64 },
    #[error("nilradical element is not nilpotent (‖R^d‖ = {norm:.3e})")]
    NilpotencyCheckFailed { norm: f64 },
    #[error("nonzero commuting nilpotent family has zero common kernel")]
    EngelViolation,
    #[error("Gelfand map is not multiplicative (residual {residual:.3e})")]
    HomomorphismCheckFailed { residual: f64 },
    #[error(transparent)]
    Numeric(#[from] NumError),
}

/// A product-closed subspace of `d×d` matrices.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    space_dim: usize,
    basis: Vec<Matrix>,
    tol: Tolerances,
    /// Orthonormal frame of the vectorized span, used for membership tests.
    frame: Vec<Vector>,
}

impl MatrixAlgebra {
    /// Validates an explicit basis: equal sizes, independence and closure.
    pub fn from_basis(basis: Vec<Matrix>, tol: Tolerances) -> Result<Self, AlgebraError> {
        let d = check_sizes(&basis)?;
        let mut alg = MatrixAlgebra {
            space_dim: d,
            basis: Vec::new(),
            tol,
            frame: Vec::new(),
        };
        for b in basis {
            numkit::check_finite(&b)?;
            if !alg.try_extend(b) {
                return Err(AlgebraError::DependentBasis);
            }
        }
        let residual = alg.closure_residual();
        if residual > tol.residual {
            return Err(AlgebraError::NotClosed { residual });
        }
        Ok(alg)
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn tol(&self) -> &Tolerances {
        &self.tol
    }

    pub fn contains_identity(&self) -> bool {
        self.membership_residual(&Matrix::identity(self.space_dim, self.space_dim))
            <= self.tol.residual
    }

    /// Relative distance `‖x − P x‖ / ‖x‖` from `x` to the span.
    pub fn membership_residual(&self, x: &Matrix) -> f64 {
        let v = vectorize(x);
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut r = v;
        for q in &self.frame {
            let proj = q.dotc(&r);
            r -= q * proj;
        }
        r.norm() / norm
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.membership_residual(x) <= self.tol.residual
    }

    /// Coordinates of `x` in the basis (least squares) and the relative
    /// residual of the fit.
    pub fn coordinates(&self, x: &Matrix) -> Result<(Vector, f64), AlgebraError> {
        let d2 = self.space_dim * self.space_dim;
        let mut a = Matrix::zeros(d2, self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            a.set_column(j, &vectorize(b));
        }
        let rhs = vectorize(x);
        let (coef, residual) = least_squares(&a, &rhs)?;
        let norm = rhs.norm();
        Ok((coef, if norm == 0.0 { 0.0 } else { residual / norm }))
    }

    /// Recombines a coefficient vector into a matrix.
    pub fn element(&self, coef: &Vector) -> Matrix {
        let d = self.space_dim;
        self.basis
            .iter()
            .zip(coef.iter())
            .fold(Matrix::zeros(d, d), |acc, (b, c)| acc + b * *c)
    }

    /// Worst distance of a basis product `B_iB_j` from the span, relative to
    /// `‖B_i‖‖B_j‖` so that products cancelling to zero count as closed.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            for b in &self.basis {
                let p = a * b;
                let off = self.membership_residual(&p) * p.norm();
                worst = worst.max(off / (a.norm() * b.norm()));
            }
        }
        worst
    }

    /// Appends `x` when it escapes the current span. Returns whether it did.
    fn try_extend(&mut self, x: Matrix) -> bool {
        let v = vectorize(&x);
        let norm = v.norm();
        if norm == 0.0 {
            return false;
        }
        let mut r = v;
        // two Gram-Schmidt passes
        for _ in 0..2 {
            for q in &self.frame {
                let proj = q.dotc(&r);
                r -= q * proj;
            }
        }
        let rn = r.norm();
        if rn / norm <= self.tol.residual {
            return false;
        }
        self.frame.push(r / Complex64::from(rn));
        self.basis.push(x);
        true
    }

    /// Frobenius norms of the basis elements.
    fn basis_norms(&self) -> Vec<f64> {
        self.basis.iter().map(|b| b.norm()).collect()
    }
}

fn check_sizes(ms: &[Matrix]) -> Result<usize, AlgebraError> {
    let first = ms.first().ok_or(AlgebraError::NoGenerators)?;
    let d = first.nrows();
    for m in ms {
        if m.nrows() != d || m.ncols() != d {
            return Err(AlgebraError::MixedSizes {
                expected: d,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
    }
    Ok(d)
}

/// Smallest product-closed subspace containing `generators` (and the
/// identity when `include_identity` is set).
///
/// The basis keeps the identity first (if requested), then the independent
/// generators in order, then products `B_i B_j` in the order they were found
/// to escape the span.
pub fn close_algebra(
    generators: &[Matrix],
    include_identity: bool,
    tol: Tolerances,
    max_dim: usize,
) -> Result<MatrixAlgebra, AlgebraError> {
    let d = check_sizes(generators)?;
    let mut alg = MatrixAlgebra {
        space_dim: d,
        basis: Vec::new(),
        tol,
        frame: Vec::new(),
    };
    let cap = max_dim.min(d * d);
    let push = |alg: &mut MatrixAlgebra, x: Matrix| -> Result<bool, AlgebraError> {
        let added = alg.try_extend(x);
        if alg.dim() > cap {
            return Err(AlgebraError::DimensionCap { cap });
        }
        Ok(added)
    };
    if include_identity {
        push(&mut alg, Matrix::identity(d, d))?;
    }
    for g in generators {
        numkit::check_finite(g)?;
        push(&mut alg, g.clone())?;
    }
    // fixpoint: every product of basis elements must already lie in the span
    let mut checked = 0;
    loop {
        let n = alg.dim();
        let mut grew = false;
        for i in 0..n {
            for j in 0..n {
                if i < checked && j < checked {
                    continue;
                }
                let p = &alg.basis[i] * &alg.basis[j];
                // products that cancel to rounding noise are zero, not new directions
                if p.norm() <= tol.rank * alg.basis[i].norm() * alg.basis[j].norm() {
                    continue;
                }
                grew |= push(&mut alg, p)?;
            }
        }
        checked = n;
        if !grew {
            break;
        }
    }
    Ok(alg)
}

/// Outcome of the commutativity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelianCheck {
    pub abelian: bool,
    /// `max ‖B_iB_j − B_jB_i‖ / (‖B_i‖‖B_j‖ + 1)` over basis pairs.
    pub max_violation: f64,
}

pub fn is_abelian(a: &MatrixAlgebra) -> AbelianCheck {
    let mut worst: f64 = 0.0;
    for (i, x) in a.basis.iter().enumerate() {
        for y in &a.basis[i + 1..] {
            let comm = (x * y - y * x).norm();
            worst = worst.max(comm / (x.norm() * y.norm()));
        }
    }
    AbelianCheck {
        abelian: worst <= a.tol.residual,
        max_violation: worst,
    }
}

fn require_abelian(a: &MatrixAlgebra) -> Result<(), AlgebraError> {
    let check = is_abelian(a);
    if check.abelian {
        Ok(())
    } else {
        Err(AlgebraError::NotAbelian {
            violation: check.max_violation,
        })
    }
}

/// A linear functional on the algebra, stored by its values on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pub values: Vec<Complex64>,
}

impl Weight {
    /// `λ(Σ c_i B_i) = Σ c_i λ(B_i)`.
    pub fn evaluate(&self, coef: &Vector) -> Complex64 {
        self.values.iter().zip(coef.iter()).map(|(l, c)| l * c).sum()
    }

    pub fn distance(&self, other: &Weight) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Weight {
        Weight {
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }
}

/// The joint weight decomposition of `C^d` under a commutative algebra.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    /// Every generalized weight produced by the refinement, sorted
    /// lexicographically by `(re, im)` of the value vector.
    pub generalized_weights: Vec<Weight>,
    pub generalized_spaces: Vec<Subspace>,
    /// `H_λ` for each generalized weight (possibly zero).
    pub eigen_spaces: Vec<Subspace>,
}

impl WeightSystem {
    /// Indices of the weights whose eigenspace is nonzero (the set `Λ`).
    pub fn lambda_indices(&self) -> Vec<usize> {
        (0..self.eigen_spaces.len())
            .filter(|&k| !self.eigen_spaces[k].is_zero())
            .collect()
    }

    /// `Λ` together with `H_λ`.
    pub fn lambda(&self) -> Vec<(&Weight, &Subspace)> {
        self.lambda_indices()
            .into_iter()
            .map(|k| (&self.generalized_weights[k], &self.eigen_spaces[k]))
            .collect()
    }

    pub fn generalized_dim_sum(&self) -> usize {
        self.generalized_spaces.iter().map(Subspace::dim).sum()
    }

    pub fn eigen_dim_sum(&self) -> usize {
        self.eigen_spaces.iter().map(Subspace::dim).sum()
    }

    /// Rank of the concatenated eigenspace bases; equals `d` exactly when
    /// `C^d = ⊕ H_λ`.
    pub fn eigen_span_rank(&self, tol: &Tolerances) -> usize {
        let spaces: Vec<&Subspace> = self.eigen_spaces.iter().collect();
        joint_rank(&spaces, tol)
    }
}

/// Splits `C^d` into joint generalized eigenspaces of the basis elements.
///
/// Starting from the whole space, each basis element in turn splits every
/// current leaf into the generalized eigenspaces of its restriction. The
/// basis elements are normalized to unit Frobenius norm first, so cluster
/// radii are relative to the size of each element. The
/// value of a weight on `B_i` is `tr(B_i|leaf) / dim(leaf)`, which equals the
/// cluster center and is better conditioned than any single eigenvalue.
pub fn generalized_weight_decomposition(a: &MatrixAlgebra) -> Result<WeightSystem, AlgebraError> {
    require_abelian(a)?;
    let tol = a.tol;
    let d = a.space_dim;

    // clustering runs on unit-norm elements so that radii are scale free
    let units: Vec<Matrix> = a
        .basis
        .iter()
        .map(|b| b / Complex64::from(b.norm()))
        .collect();

    let mut leaves: Vec<Matrix> = vec![Matrix::identity(d, d)];
    for b in &units {
        let mut next = Vec::with_capacity(leaves.len());
        for q in &leaves {
            let restricted = q.adjoint() * b * q;
            // units have norm one, so the radius is absolute on every leaf
            for cluster in clustered_eigen_within(&restricted, tol.cluster)? {
                next.push(q * cluster.space.basis());
            }
        }
        leaves = next;
    }

    let mut entries: Vec<(Weight, Subspace, Subspace)> = leaves
        .into_iter()
        .map(|q| {
            let r = q.ncols();
            let restrictions: Vec<Matrix> = units.iter().map(|b| q.adjoint() * b * &q).collect();
            let unit_values: Vec<Complex64> = restrictions
                .iter()
                .map(|m| m.trace() / r as f64)
                .collect();
            // H_λ ∩ leaf: kernel of the stacked (B_i − λ(B_i)) restrictions
            let mut stacked = Matrix::zeros(r * restrictions.len(), r);
            for (i, (m, l)) in restrictions.iter().zip(&unit_values).enumerate() {
                let shifted = m - Matrix::identity(r, r) * *l;
                stacked.view_mut((i * r, 0), (r, r)).copy_from(&shifted);
            }
            let kernel = nullspace_below(&stacked, tol.cluster);
            let eigen = Subspace::from_orthonormal(&q * kernel.basis());
            let values = unit_values
                .iter()
                .zip(&a.basis)
                .map(|(v, b)| v * b.norm())
                .collect();
            (Weight { values }, Subspace::from_orthonormal(q), eigen)
        })
        .collect();

    entries.sort_by(|x, y| {
        for (a, b) in x.0.values.iter().zip(&y.0.values) {
            let ord = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            if ord.is_ne() {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    });

    let mut sys = WeightSystem {
        generalized_weights: Vec::new(),
        generalized_spaces: Vec::new(),
        eigen_spaces: Vec::new(),
    };
    for (w, g, e) in entries {
        sys.generalized_weights.push(w);
        sys.generalized_spaces.push(g);
        sys.eigen_spaces.push(e);
    }
    Ok(sys)
}

/// Basis of the nilradical: the elements on which every generalized weight
/// vanishes. Each returned element has unit Frobenius norm.
pub fn nilradical(a: &MatrixAlgebra) -> Result<Vec<Matrix>, AlgebraError> {
    let sys = generalized_weight_decomposition(a)?;
    nilradical_from(a, &sys)
}

pub(crate) fn nilradical_from(
    a: &MatrixAlgebra,
    sys: &WeightSystem,
) -> Result<Vec<Matrix>, AlgebraError> {
    let n = a.dim();
    let norms = a.basis_norms();
    // columns rescaled so the rank cutoff is per unit-norm basis element
    let mut coeffs = Matrix::zeros(sys.generalized_weights.len(), n);
    for (k, w) in sys.generalized_weights.iter().enumerate() {
        for i in 0..n {
            coeffs[(k, i)] = w.values[i] / norms[i];
        }
    }
    let kernel = nullspace_below(&coeffs, a.tol.cluster);
    let d = a.space_dim;
    let mut out = Vec::with_capacity(kernel.dim());
    for v in kernel.vectors() {
        let mut coef = Vector::from_fn(n, |i, _| v[i] / norms[i]);
        if let Some(lead) = coef.iter().find(|z| z.norm() > 1e-12).copied() {
            coef *= lead.conj() / Complex64::from(lead.norm());
        }
        let mut r = a.element(&coef);
        let rn = r.norm();
        if rn > 0.0 {
            r /= Complex64::from(rn);
        }
        let mut power = Matrix::identity(d, d);
        for _ in 0..d {
            power = &power * &r;
        }
        let pn = power.norm();
        if pn > a.tol.residual * r.norm().powi(d as i32) {
            return Err(AlgebraError::NilpotencyCheckFailed { norm: pn });
        }
        out.push(r);
    }
    Ok(out)
}

/// Intersection of the kernels of `nil_basis` (all of `C^d` for an empty
/// family). A nonzero commuting nilpotent family must have a nonzero common
/// kernel; a violation is reported as [`AlgebraError::EngelViolation`].
pub fn common_kernel(
    nil_basis: &[Matrix],
    d: usize,
    tol: &Tolerances,
) -> Result<Subspace, AlgebraError> {
    if nil_basis.is_empty() {
        return Ok(Subspace::full(d));
    }
    for m in nil_basis {
        if m.nrows() != d || m.ncols() != d {
            return Err(AlgebraError::MixedSizes {
                expected: d,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
    }
    let mut stacked = Matrix::zeros(d * nil_basis.len(), d);
    for (i, m) in nil_basis.iter().enumerate() {
        stacked.view_mut((i * d, 0), (d, d)).copy_from(m);
    }
    let kernel = nullspace(&stacked, tol)?;
    if kernel.is_zero() && is_commuting_nilpotent_family(nil_basis, tol) {
        return Err(AlgebraError::EngelViolation);
    }
    Ok(kernel)
}

fn is_commuting_nilpotent_family(ms: &[Matrix], tol: &Tolerances) -> bool {
    let nonzero = ms.iter().any(|m| m.norm() > 0.0);
    let nilpotent = ms.iter().all(|m| {
        let d = m.nrows();
        let scale = m.norm();
        let mut p = Matrix::identity(d, d);
        for _ in 0..d {
            p = &p * m;
        }
        p.norm() <= tol.residual * scale.powi(d as i32)
    });
    let commuting = ms.iter().enumerate().all(|(i, x)| {
        ms[i + 1..]
            .iter()
            .all(|y| (x * y - y * x).norm() <= tol.residual * x.norm() * y.norm())
    });
    nonzero && nilpotent && commuting
}

/// Values `λ(B_i)` for every `λ ∈ Λ`.
#[derive(Debug, Clone)]
pub struct GelfandTable {
    pub weights: Vec<Weight>,
    /// `|Λ| × dim A`, entry `(k, i) = λ_k(B_i)`.
    pub values: Matrix,
    /// Worst `|λ(B_iB_j) − λ(B_i)λ(B_j)|`, scaled by `‖B_i‖‖B_j‖`.
    pub homomorphism_residual: f64,
}

pub fn gelfand_transform(a: &MatrixAlgebra) -> Result<GelfandTable, AlgebraError> {
    let sys = generalized_weight_decomposition(a)?;
    gelfand_from(a, &sys)
}

pub(crate) fn gelfand_from(
    a: &MatrixAlgebra,
    sys: &WeightSystem,
) -> Result<GelfandTable, AlgebraError> {
    let weights: Vec<Weight> = sys.lambda().into_iter().map(|(w, _)| w.clone()).collect();
    let n = a.dim();
    let values = Matrix::from_fn(weights.len(), n, |k, i| weights[k].values[i]);

    let mut worst: f64 = 0.0;
    for (i, x) in a.basis.iter().enumerate() {
        for (j, y) in a.basis.iter().enumerate() {
            let (coef, _) = a.coordinates(&(x * y))?;
            let scale = x.norm() * y.norm();
            for w in &weights {
                let lhs = w.evaluate(&coef);
                let rhs = w.values[i] * w.values[j];
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
    }
    if worst > a.tol.residual {
        return Err(AlgebraError::HomomorphismCheckFailed { residual: worst });
    }
    Ok(GelfandTable {
        weights,
        values,
        homomorphism_residual: worst,
    })
}
