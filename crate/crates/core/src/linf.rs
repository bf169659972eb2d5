//! Subalgebras of bounded functions on atomic measure spaces.
//!
//! A finite-dimensional algebra of functions is spanned by the indicators of
//! the level sets of its basis: grouping atoms by their value tuple
//! `s(x) = (s_1(x), …, s_n(x))`, each cell indicator is recovered inside the
//! algebra as a product of normalized differences `ψ_hk`. Indicators are
//! real, so the algebra is closed under conjugation.
//!
//! The second half models the infinite-dimensional counterexample: an algebra
//! of functions constant on disjoint sets `E_n`, cut out by a limit
//! condition, and a witness `f` in the algebra whose conjugate is not.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::numkit::{least_squares, Matrix, NumError, Tolerances, Vector, I, ONE, ZERO};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinfError {
    #[error("invalid atomic space: {0}")]
    InvalidSpace(String),
    #[error("function has {found} values but the space has {expected} atoms")]
    LengthMismatch { expected: usize, found: usize },
    #[error("no basis functions given")]
    EmptyBasis,
    #[error("basis functions live on different spaces")]
    MixedSpaces,
    #[error("basis functions are linearly dependent")]
    DependentBasis,
    #[error("every atom has the zero signature")]
    AllZero,
    #[error("span is not closed under pointwise products (residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },
    #[error("cells {h} and {k} are invalid for a partition with {cells} cells")]
    InvalidCells { h: usize, k: usize, cells: usize },
    #[error("no separating coordinate between cells {h} and {k}")]
    NoSeparatingIndex { h: usize, k: usize },
    #[error("product of ψ functions is not an indicator (error {error:.3e})")]
    NotIndicator { error: f64 },
    #[error("indicators span {indicators} dimensions, basis spans {basis}")]
    SpanMismatch { indicators: usize, basis: usize },
    #[error("function is not real-valued at atom {atom}")]
    NotReal { atom: usize },
    #[error("need at least 10 terms, got {0}")]
    TooFewTerms(usize),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

/// Finitely many atoms with positive masses.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicSpace {
    atoms: Vec<String>,
    masses: Vec<f64>,
}

impl AtomicSpace {
    pub fn new(atoms: Vec<String>, masses: Vec<f64>) -> Result<Self, LinfError> {
        if atoms.len() != masses.len() {
            return Err(LinfError::InvalidSpace(format!(
                "{} atoms but {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        if atoms.is_empty() {
            return Err(LinfError::InvalidSpace("no atoms".into()));
        }
        if let Some(i) = masses.iter().position(|m| !m.is_finite() || *m <= 0.0) {
            return Err(LinfError::InvalidSpace(format!("atom {i} has non-positive mass")));
        }
        let mut sorted: Vec<&String> = atoms.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(LinfError::InvalidSpace("duplicate atom identifier".into()));
        }
        Ok(AtomicSpace { atoms, masses })
    }

    /// Atoms named `1..=n`, each of unit mass.
    pub fn uniform(n: usize) -> Self {
        AtomicSpace {
            atoms: (1..=n).map(|i| i.to_string()).collect(),
            masses: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass_of(&self, cell: &[usize]) -> f64 {
        cell.iter().map(|&i| self.masses[i]).sum()
    }
}

/// A function on an atomic space, one value per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    space: Arc<AtomicSpace>,
    values: Vec<Complex64>,
}

impl SimpleFunction {
    pub fn new(space: Arc<AtomicSpace>, values: Vec<Complex64>) -> Result<Self, LinfError> {
        if values.len() != space.len() {
            return Err(LinfError::LengthMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        if let Some(p) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NumError::NonfiniteEntry(p).into());
        }
        Ok(SimpleFunction { space, values })
    }

    pub fn real(space: Arc<AtomicSpace>, values: &[f64]) -> Result<Self, LinfError> {
        Self::new(space, values.iter().map(|x| Complex64::new(*x, 0.0)).collect())
    }

    pub fn space(&self) -> &Arc<AtomicSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn conj(&self) -> SimpleFunction {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> SimpleFunction {
        SimpleFunction {
            space: Arc::clone(&self.space),
            values: self.values.iter().map(|z| f(*z)).collect(),
        }
    }

    pub fn mul(&self, other: &SimpleFunction) -> SimpleFunction {
        SimpleFunction {
            space: Arc::clone(&self.space),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    fn as_vector(&self) -> Vector {
        Vector::from_column_slice(&self.values)
    }
}

/// Span of a list of functions on a common space.
struct FunctionSpan {
    columns: Matrix,
}

impl FunctionSpan {
    fn new(basis: &[SimpleFunction]) -> Result<Self, LinfError> {
        let first = basis.first().ok_or(LinfError::EmptyBasis)?;
        if basis.iter().any(|f| f.space != first.space) {
            return Err(LinfError::MixedSpaces);
        }
        let mut columns = Matrix::zeros(first.space.len(), basis.len());
        for (j, f) in basis.iter().enumerate() {
            columns.set_column(j, &f.as_vector());
        }
        Ok(FunctionSpan { columns })
    }

    /// Coefficients and relative residual of `f` against the span.
    fn fit(&self, f: &SimpleFunction) -> Result<(Vector, f64), LinfError> {
        let v = f.as_vector();
        let (coef, residual) = least_squares(&self.columns, &v)?;
        let norm = v.norm();
        Ok((coef, if norm == 0.0 { 0.0 } else { residual / norm }))
    }
}

fn check_independent(span: &FunctionSpan, tol: &Tolerances) -> Result<(), LinfError> {
    if crate::numkit::rank(&span.columns, tol) < span.columns.ncols() {
        return Err(LinfError::DependentBasis);
    }
    Ok(())
}

/// Outcome of the closure test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubalgebraCheck {
    pub closed: bool,
    /// Worst relative residual of `f_i · f_j` against the span.
    pub worst_residual: f64,
}

/// Whether every pointwise product of basis functions lies in their span.
pub fn is_pointwise_subalgebra(
    basis: &[SimpleFunction],
    tol: &Tolerances,
) -> Result<SubalgebraCheck, LinfError> {
    let span = FunctionSpan::new(basis)?;
    check_independent(&span, tol)?;
    let mut worst: f64 = 0.0;
    for (i, f) in basis.iter().enumerate() {
        for g in &basis[i..] {
            worst = worst.max(span.fit(&f.mul(g))?.1);
        }
    }
    Ok(SubalgebraCheck {
        closed: worst <= tol.residual,
        worst_residual: worst,
    })
}

/// Level sets of the value map `s`: the zero cell `A_0` and the cells
/// `A_1, …, A_m` (stored 0-based) with their signatures `v_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub zero_cell: Vec<usize>,
    pub cells: Vec<Vec<usize>>,
    pub signatures: Vec<Vec<Complex64>>,
    /// Absolute radius used to compare signature coordinates.
    pub radius: f64,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells as sorted atom sets, sorted, for order-free comparison.
    pub fn canonical_cells(&self) -> Vec<Vec<usize>> {
        let mut cells: Vec<Vec<usize>> = self
            .cells
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        cells.sort();
        cells
    }
}

/// Groups atoms by signature `(s_1(x), …, s_n(x))`.
///
/// Two signatures are equal when every coordinate differs by at most
/// `eps_cluster · max|s_j(x)|`; a signature within that radius of zero goes to
/// the zero cell. Cells appear in order of their first atom.
pub fn level_partition(basis: &[SimpleFunction], tol: &Tolerances) -> Result<Partition, LinfError> {
    FunctionSpan::new(basis)?;
    let n_atoms = basis[0].space.len();
    let scale = basis
        .iter()
        .flat_map(|f| f.values.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(LinfError::AllZero);
    }
    let radius = tol.cluster * scale;
    let signature = |x: usize| -> Vec<Complex64> { basis.iter().map(|f| f.values[x]).collect() };
    let close = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).all(|(p, q)| (p - q).norm() <= radius);

    let mut part = Partition {
        zero_cell: Vec::new(),
        cells: Vec::new(),
        signatures: Vec::new(),
        radius,
    };
    for x in 0..n_atoms {
        let s = signature(x);
        if s.iter().all(|z| z.norm() <= radius) {
            part.zero_cell.push(x);
            continue;
        }
        match part.signatures.iter().position(|v| close(v, &s)) {
            Some(k) => part.cells[k].push(x),
            None => {
                part.cells.push(vec![x]);
                part.signatures.push(s);
            }
        }
    }
    if part.cells.is_empty() {
        return Err(LinfError::AllZero);
    }
    Ok(part)
}

/// `ψ_hk` with its coordinates in the basis.
#[derive(Debug, Clone)]
pub struct Psi {
    pub function: SimpleFunction,
    /// Separating coordinate `j(h, k)`.
    pub j: usize,
    /// Nonvanishing coordinate `l(h)`.
    pub l: usize,
    pub coefficients: Vector,
    pub membership_residual: f64,
}

/// `ψ_hk = (s_j − v_kj) s_l / ((v_hj − v_kj) v_hl)`: one on `A_h`, zero on
/// `A_k` and on `A_0`. Cell indices are 0-based.
pub fn psi(
    h: usize,
    k: usize,
    partition: &Partition,
    basis: &[SimpleFunction],
    tol: &Tolerances,
) -> Result<Psi, LinfError> {
    let check = is_pointwise_subalgebra(basis, tol)?;
    if !check.closed {
        return Err(LinfError::NotSubalgebra {
            residual: check.worst_residual,
        });
    }
    let span = FunctionSpan::new(basis)?;
    psi_in(h, k, partition, basis, &span)
}

fn psi_in(
    h: usize,
    k: usize,
    partition: &Partition,
    basis: &[SimpleFunction],
    span: &FunctionSpan,
) -> Result<Psi, LinfError> {
    let m = partition.len();
    if h == k || h >= m || k >= m {
        return Err(LinfError::InvalidCells { h, k, cells: m });
    }
    let (vh, vk) = (&partition.signatures[h], &partition.signatures[k]);
    let radius = partition.radius;
    let j = (0..vh.len())
        .find(|&j| (vh[j] - vk[j]).norm() > radius)
        .ok_or(LinfError::NoSeparatingIndex { h, k })?;
    let l = (0..vh.len())
        .find(|&l| vh[l].norm() > radius)
        .ok_or(LinfError::NoSeparatingIndex { h, k })?;
    let denom = (vh[j] - vk[j]) * vh[l];
    let (sj, sl) = (&basis[j], &basis[l]);
    let function = SimpleFunction {
        space: Arc::clone(&sj.space),
        values: sj
            .values
            .iter()
            .zip(&sl.values)
            .map(|(a, b)| (a - vk[j]) * b / denom)
            .collect(),
    };
    let (coefficients, membership_residual) = span.fit(&function)?;
    Ok(Psi {
        function,
        j,
        l,
        coefficients,
        membership_residual,
    })
}

/// Indicators of the level cells, recovered inside the algebra.
#[derive(Debug, Clone)]
pub struct Idempotents {
    pub partition: Partition,
    /// `χ_{A_h}`, projected to exact 0/1 values.
    pub indicators: Vec<SimpleFunction>,
    /// Coordinates of each indicator in the input basis.
    pub coefficients: Vec<Vector>,
    /// Largest `|χ − round(χ)|` before projection.
    pub max_projection_error: f64,
    /// Largest `|χ² − χ|` before projection.
    pub max_idempotency_error: f64,
    /// Worst relative residual of `χ` against the span of the basis.
    pub max_membership_residual: f64,
    /// Worst relative residual of `conj(χ)` against the span of the basis.
    pub max_conjugate_residual: f64,
    pub self_adjoint: bool,
}

/// `χ_{A_h} = (s_l / v_hl) · ∏_{k≠h} ψ_hk` for every cell `h`.
///
/// The leading factor `s_l / v_hl` is one on `A_h` and zero on `A_0`; it closes
/// the single-cell case where the product over `k ≠ h` is empty.
pub fn extract_idempotents(
    basis: &[SimpleFunction],
    tol: &Tolerances,
) -> Result<Idempotents, LinfError> {
    let check = is_pointwise_subalgebra(basis, tol)?;
    if !check.closed {
        return Err(LinfError::NotSubalgebra {
            residual: check.worst_residual,
        });
    }
    let span = FunctionSpan::new(basis)?;
    let partition = level_partition(basis, tol)?;
    let m = partition.len();
    let space = Arc::clone(&basis[0].space);

    let mut indicators = Vec::with_capacity(m);
    let mut coefficients = Vec::with_capacity(m);
    let mut projection_error: f64 = 0.0;
    let mut idempotency_error: f64 = 0.0;
    let mut membership: f64 = 0.0;
    let mut conjugate: f64 = 0.0;
    for h in 0..m {
        let vh = &partition.signatures[h];
        let l = (0..vh.len())
            .find(|&l| vh[l].norm() > partition.radius)
            .ok_or(LinfError::NoSeparatingIndex { h, k: h })?;
        let mut chi = basis[l].map(|z| z / vh[l]);
        for k in (0..m).filter(|&k| k != h) {
            chi = chi.mul(&psi_in(h, k, &partition, basis, &span)?.function);
        }
        let (coef, residual) = span.fit(&chi)?;
        membership = membership.max(residual);
        conjugate = conjugate.max(span.fit(&chi.conj())?.1);
        let projected: Vec<Complex64> = chi
            .values
            .iter()
            .map(|z| if (z - ONE).norm() < 0.5 { ONE } else { ZERO })
            .collect();
        for (z, p) in chi.values.iter().zip(&projected) {
            projection_error = projection_error.max((z - p).norm());
            idempotency_error = idempotency_error.max((z * z - z).norm());
        }
        indicators.push(SimpleFunction {
            space: Arc::clone(&space),
            values: projected,
        });
        coefficients.push(coef);
    }

    if projection_error > tol.residual {
        return Err(LinfError::NotIndicator {
            error: projection_error,
        });
    }
    // the projected indicators must mark exactly the partition cells
    for (h, chi) in indicators.iter().enumerate() {
        let ones: Vec<usize> = (0..space.len()).filter(|&x| chi.values[x] == ONE).collect();
        let mut cell = partition.cells[h].clone();
        cell.sort_unstable();
        if ones != cell {
            return Err(LinfError::NotIndicator { error: 1.0 });
        }
    }
    if m != basis.len() || membership > tol.residual {
        return Err(LinfError::SpanMismatch {
            indicators: m,
            basis: basis.len(),
        });
    }
    Ok(Idempotents {
        partition,
        indicators,
        coefficients,
        max_projection_error: projection_error,
        max_idempotency_error: idempotency_error,
        max_membership_residual: membership,
        max_conjugate_residual: conjugate,
        self_adjoint: conjugate <= tol.residual,
    })
}

/// Constant values `a(n)` on the sets `E_n`, `n ≥ 1`.
pub trait TailModel: Send + Sync {
    fn value(&self, n: u64) -> Complex64;
}

impl<F: Fn(u64) -> Complex64 + Send + Sync> TailModel for F {
    fn value(&self, n: u64) -> Complex64 {
        self(n)
    }
}

/// The witness `f`: `0` on `E_1`, `1/n` on `E_n` for even `n`, `i/n` for odd
/// `n > 1`; or its complex conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub conjugated: bool,
}

impl TailModel for Witness {
    fn value(&self, n: u64) -> Complex64 {
        let v = if n == 1 {
            ZERO
        } else if n.is_multiple_of(2) {
            Complex64::new(1.0 / n as f64, 0.0)
        } else {
            I / n as f64
        };
        if self.conjugated {
            v.conj()
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRule {
    RepeatLast,
    Zero,
    Constant(Complex64),
}

/// Explicit values `a(1), …, a(len)` followed by a tail rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TableTail {
    pub table: Vec<Complex64>,
    pub rule: TailRule,
}

impl TailModel for TableTail {
    fn value(&self, n: u64) -> Complex64 {
        let idx = (n as usize).saturating_sub(1);
        match self.table.get(idx) {
            Some(v) => *v,
            None => match self.rule {
                TailRule::RepeatLast => self.table.last().copied().unwrap_or(ZERO),
                TailRule::Zero => ZERO,
                TailRule::Constant(c) => c,
            },
        }
    }
}

/// `α·a + β·b`.
pub struct Combination<'a> {
    pub terms: Vec<(Complex64, &'a dyn TailModel)>,
}

impl TailModel for Combination<'_> {
    fn value(&self, n: u64) -> Complex64 {
        self.terms.iter().map(|(c, m)| c * m.value(n)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember,
    /// A quotient sequence does not settle; reported as non-membership.
    Divergent,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        *self == Membership::Member
    }

    pub fn name(&self) -> &'static str {
        match self {
            Membership::Member => "member",
            Membership::NonMember => "non-member",
            Membership::Divergent => "divergent",
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuotientReport {
    /// `q_odd[m−1] = m · (a(2m+1) − a(1))`.
    pub q_odd: Vec<Complex64>,
    /// `q_even[m−1] = m · (a(2m) − a(1))`.
    pub q_even: Vec<Complex64>,
    pub odd_limit: Complex64,
    pub even_limit: Complex64,
    /// Largest change over the last `M/10` terms.
    pub odd_cauchy: f64,
    pub even_cauchy: f64,
    /// `|lim q_odd − i · lim q_even|`.
    pub gap: f64,
    /// `max(10 · cauchy, eps_residual)`.
    pub threshold: f64,
    pub verdict: Membership,
}

/// Largest `|q(m) − q(end)|` for `m` in the last `window` terms before `end`.
fn cauchy_residual(q: &[Complex64], end: usize, window: usize) -> f64 {
    let last = q[end - 1];
    q[end.saturating_sub(window + 1)..end]
        .iter()
        .map(|z| (z - last).norm())
        .fold(0.0, f64::max)
}

/// Evaluates the limit condition
/// `lim m (a(2m+1) − a(1)) = i · lim m (a(2m) − a(1))` on the first `terms`
/// values of each quotient sequence.
pub fn membership_quotients(
    model: &dyn TailModel,
    terms: usize,
    tol: &Tolerances,
) -> Result<QuotientReport, LinfError> {
    if terms < 10 {
        return Err(LinfError::TooFewTerms(terms));
    }
    let a1 = model.value(1);
    let (q_odd, q_even): (Vec<Complex64>, Vec<Complex64>) = (1..=terms as u64)
        .map(|m| {
            let mf = m as f64;
            (
                (model.value(2 * m + 1) - a1) * mf,
                (model.value(2 * m) - a1) * mf,
            )
        })
        .unzip();

    let late = (terms / 10).max(1);
    let early_end = terms / 2;
    let early = (terms / 20).max(1);
    let settles = |q: &[Complex64]| {
        let r_late = cauchy_residual(q, terms, late);
        let r_early = cauchy_residual(q, early_end, early);
        (r_late, r_late <= tol.residual || r_late < r_early)
    };
    let (odd_cauchy, odd_ok) = settles(&q_odd);
    let (even_cauchy, even_ok) = settles(&q_even);
    let odd_limit = q_odd[terms - 1];
    let even_limit = q_even[terms - 1];
    let gap = (odd_limit - I * even_limit).norm();
    let threshold = (10.0 * odd_cauchy.max(even_cauchy)).max(tol.residual);
    let verdict = if !(odd_ok && even_ok) {
        Membership::Divergent
    } else if gap <= threshold {
        Membership::Member
    } else {
        Membership::NonMember
    };
    Ok(QuotientReport {
        q_odd,
        q_even,
        odd_limit,
        even_limit,
        odd_cauchy,
        even_cauchy,
        gap,
        threshold,
        verdict,
    })
}

/// Disjoint sets produced by repeated splitting at the mid-range value.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection {
    /// `E_1, E_2, …` as 0-based atom indices in ascending order.
    pub sets: Vec<Vec<usize>>,
    /// Atoms left over after the last split.
    pub remainder: Vec<usize>,
    /// The remainder became essentially constant before `depth` sets were found.
    pub constant_remainder: bool,
}

/// Splits the atoms at `c = (ess inf f + ess sup f) / 2` into
/// `Y = {f > c}` and `Z = {f ≤ c}`, keeps one side as the next `E_k` and
/// continues on the other. The side with more distinct values is continued
/// (ties continue on `Z`), standing in for the infinite-dimensional half.
pub fn bisect_disjoint_sets(
    f: &SimpleFunction,
    depth: usize,
    tol: &Tolerances,
) -> Result<Bisection, LinfError> {
    let scale = f.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if let Some(atom) = f.values.iter().position(|z| z.im.abs() > tol.residual * scale) {
        return Err(LinfError::NotReal { atom });
    }
    let values: Vec<f64> = f.values.iter().map(|z| z.re).collect();
    let gap = tol.cluster * scale;
    let distinct = |idx: &[usize]| -> usize {
        let mut v: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        v.sort_by(f64::total_cmp);
        v.windows(2).filter(|w| w[1] - w[0] > gap).count() + usize::from(!v.is_empty())
    };

    let mut remaining: Vec<usize> = (0..values.len()).collect();
    let mut sets = Vec::new();
    while sets.len() < depth {
        let lo = remaining.iter().map(|&i| values[i]).fold(f64::INFINITY, f64::min);
        let hi = remaining.iter().map(|&i| values[i]).fold(f64::NEG_INFINITY, f64::max);
        if remaining.is_empty() || hi - lo <= gap {
            return Ok(Bisection {
                sets,
                remainder: remaining,
                constant_remainder: true,
            });
        }
        let c = (lo + hi) / 2.0;
        let (y, z): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&i| values[i] > c);
        if distinct(&y) > distinct(&z) {
            sets.push(z);
            remaining = y;
        } else {
            sets.push(y);
            remaining = z;
        }
    }
    Ok(Bisection {
        sets,
        remainder: remaining,
        constant_remainder: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::c;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn funcs(n: usize, rows: &[&[f64]]) -> Vec<SimpleFunction> {
        let space = Arc::new(AtomicSpace::uniform(n));
        rows.iter()
            .map(|r| SimpleFunction::real(Arc::clone(&space), r).unwrap())
            .collect()
    }

    fn reals(f: &SimpleFunction) -> Vec<f64> {
        f.values().iter().map(|z| z.re).collect()
    }

    #[test]
    fn atomic_space_validation() {
        assert!(AtomicSpace::new(vec!["a".into()], vec![0.0]).is_err());
        assert!(AtomicSpace::new(vec!["a".into(), "a".into()], vec![1.0, 1.0]).is_err());
        assert!(AtomicSpace::new(vec!["a".into()], vec![1.0, 2.0]).is_err());
        assert!(AtomicSpace::new(vec!["a".into(), "b".into()], vec![1.0, 0.5]).is_ok());
    }

    #[test]
    fn subalgebra_examples() {
        let t = tol();
        assert!(is_pointwise_subalgebra(&funcs(3, &[&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]), &t).unwrap().closed);
        let r = is_pointwise_subalgebra(&funcs(3, &[&[1.0, 2.0, 0.0]]), &t).unwrap();
        assert!(!r.closed && r.worst_residual > 0.1);
        assert!(is_pointwise_subalgebra(&funcs(3, &[&[2.0, 2.0, 3.0], &[0.0, 0.0, 3.0]]), &t).unwrap().closed);
    }

    #[test]
    fn mixed_spaces_rejected() {
        let a = funcs(2, &[&[1.0, 0.0]]);
        let heavy = Arc::new(AtomicSpace::new(vec!["1".into(), "2".into()], vec![1.0, 2.0]).unwrap());
        let b = SimpleFunction::real(heavy, &[0.0, 1.0]).unwrap();
        assert_eq!(
            is_pointwise_subalgebra(&[a[0].clone(), b], &tol()).unwrap_err(),
            LinfError::MixedSpaces
        );
    }

    #[test]
    fn partition_examples() {
        let p = level_partition(&funcs(3, &[&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]), &tol()).unwrap();
        assert!(p.zero_cell.is_empty());
        assert_eq!(p.cells, vec![vec![0, 1], vec![2]]);
        assert_eq!(p.signatures[0], vec![ONE, ZERO]);
        assert_eq!(p.signatures[1], vec![ZERO, ONE]);

        let p = level_partition(&funcs(2, &[&[2.0, 0.0]]), &tol()).unwrap();
        assert_eq!(p.zero_cell, vec![1]);
        assert_eq!(p.cells, vec![vec![0]]);
        assert_eq!(p.signatures[0], vec![c(2.0, 0.0)]);

        let p = level_partition(&funcs(3, &[&[1.0, 2.0, 0.0], &[0.0, 0.0, 3.0]]), &tol()).unwrap();
        assert_eq!(p.cells.len(), 3);
        assert_eq!(p.signatures[2], vec![ZERO, c(3.0, 0.0)]);

        assert_eq!(
            level_partition(&funcs(2, &[&[0.0, 0.0]]), &tol()).unwrap_err(),
            LinfError::AllZero
        );
    }

    #[test]
    fn psi_examples() {
        let basis = funcs(3, &[&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let p = level_partition(&basis, &tol()).unwrap();
        let p12 = psi(0, 1, &p, &basis, &tol()).unwrap();
        assert_eq!((p12.j, p12.l), (0, 0));
        assert_eq!(reals(&p12.function), vec![1.0, 1.0, 0.0]);
        assert!(p12.membership_residual < 1e-12);

        let p21 = psi(1, 0, &p, &basis, &tol()).unwrap();
        assert_eq!((p21.j, p21.l), (0, 1));
        assert_eq!(reals(&p21.function), vec![0.0, 0.0, 1.0]);

        assert!(matches!(
            psi(0, 0, &p, &basis, &tol()),
            Err(LinfError::InvalidCells { .. })
        ));
        let not_closed = funcs(3, &[&[1.0, 2.0, 0.0]]);
        let p = level_partition(&not_closed, &tol()).unwrap();
        assert!(matches!(
            psi(0, 1, &p, &not_closed, &tol()),
            Err(LinfError::NotSubalgebra { .. })
        ));
    }

    #[test]
    fn idempotent_examples() {
        let r = extract_idempotents(&funcs(3, &[&[2.0, 2.0, 3.0], &[0.0, 0.0, 3.0]]), &tol()).unwrap();
        assert_eq!(r.indicators.len(), 2);
        assert_eq!(reals(&r.indicators[0]), vec![1.0, 1.0, 0.0]);
        assert_eq!(reals(&r.indicators[1]), vec![0.0, 0.0, 1.0]);
        assert!(r.self_adjoint);
        // (1,1,0) = (2,2,3)/2 − (0,0,3)/2
        assert!((r.coefficients[0][0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((r.coefficients[0][1] - c(-0.5, 0.0)).norm() < 1e-12);

        let r = extract_idempotents(&funcs(2, &[&[2.0, 0.0]]), &tol()).unwrap();
        assert_eq!(reals(&r.indicators[0]), vec![1.0, 0.0]);
        assert!((r.coefficients[0][0] - c(0.5, 0.0)).norm() < 1e-12);

        let r = extract_idempotents(&funcs(3, &[&[1.0, 1.0, 1.0]]), &tol()).unwrap();
        assert_eq!(reals(&r.indicators[0]), vec![1.0, 1.0, 1.0]);

        assert!(matches!(
            extract_idempotents(&funcs(3, &[&[1.0, 2.0, 0.0]]), &tol()),
            Err(LinfError::NotSubalgebra { .. })
        ));
    }

    #[test]
    fn complex_valued_subalgebra() {
        // span{(i, i, 0), (0, 0, 1+i)} is closed, and still self-adjoint
        let space = Arc::new(AtomicSpace::uniform(3));
        let f = SimpleFunction::new(Arc::clone(&space), vec![I, I, ZERO]).unwrap();
        let g = SimpleFunction::new(space, vec![ZERO, ZERO, c(1.0, 1.0)]).unwrap();
        let r = extract_idempotents(&[f, g], &tol()).unwrap();
        assert!(r.self_adjoint);
        assert_eq!(r.partition.canonical_cells(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn witness_quotients() {
        let r = membership_quotients(&Witness { conjugated: false }, 1000, &tol()).unwrap();
        assert!(r.q_even.iter().all(|q| (q - c(0.5, 0.0)).norm() <= 4.0 * f64::EPSILON));
        assert!((r.odd_limit - c(0.0, 1000.0 / 2001.0)).norm() < 1e-15);
        assert_eq!(r.verdict, Membership::Member);

        let r = membership_quotients(&Witness { conjugated: true }, 1000, &tol()).unwrap();
        assert_eq!(r.verdict, Membership::NonMember);
        assert!((r.gap - 1000.0 / 2001.0 - 0.5).abs() < 1e-12);

        let seven = |_n: u64| c(7.0, 0.0);
        let r = membership_quotients(&seven, 10, &tol()).unwrap();
        assert_eq!(r.verdict, Membership::Member);
        assert_eq!(r.gap, 0.0);

        assert_eq!(
            membership_quotients(&seven, 9, &tol()).unwrap_err(),
            LinfError::TooFewTerms(9)
        );
    }

    #[test]
    fn divergent_quotients() {
        let log = |n: u64| c((n as f64).ln(), 0.0);
        let r = membership_quotients(&log, 1000, &tol()).unwrap();
        assert_eq!(r.verdict, Membership::Divergent);
        assert!(!r.verdict.is_member());
    }

    #[test]
    fn table_tail_rules() {
        let t = TableTail {
            table: vec![ONE, c(2.0, 0.0)],
            rule: TailRule::RepeatLast,
        };
        assert_eq!(t.value(1), ONE);
        assert_eq!(t.value(50), c(2.0, 0.0));
        let t = TableTail {
            table: vec![ONE],
            rule: TailRule::Constant(I),
        };
        assert_eq!(t.value(3), I);
        let t = TableTail {
            table: vec![c(5.0, 0.0); 4],
            rule: TailRule::RepeatLast,
        };
        assert_eq!(membership_quotients(&t, 20, &tol()).unwrap().verdict, Membership::Member);
    }

    #[test]
    fn bisection_examples() {
        let f = &funcs(8, &[&[0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0]])[0];
        let b = bisect_disjoint_sets(f, 3, &tol()).unwrap();
        assert_eq!(b.sets, vec![vec![4, 5, 6, 7], vec![2, 3]]);
        assert!(b.constant_remainder);
        assert_eq!(b.remainder, vec![0, 1]);

        let f = &funcs(3, &[&[2.0, 2.0, 2.0]])[0];
        let b = bisect_disjoint_sets(f, 2, &tol()).unwrap();
        assert!(b.sets.is_empty() && b.constant_remainder);

        let f = &funcs(4, &[&[0.0, 1.0, 2.0, 3.0]])[0];
        let b = bisect_disjoint_sets(f, 2, &tol()).unwrap();
        assert_eq!(b.sets, vec![vec![2, 3], vec![1]]);
        assert!(!b.constant_remainder);
    }

    #[test]
    fn bisection_follows_the_richer_half() {
        // Y = {3, 3.5, 4} carries more distinct values than Z = {0}
        let f = &funcs(4, &[&[0.0, 3.0, 3.5, 4.0]])[0];
        let b = bisect_disjoint_sets(f, 1, &tol()).unwrap();
        assert_eq!(b.sets, vec![vec![0]]);
        assert_eq!(b.remainder, vec![1, 2, 3]);
    }

    #[test]
    fn bisection_rejects_complex_values() {
        let space = Arc::new(AtomicSpace::uniform(2));
        let f = SimpleFunction::new(space, vec![ONE, I]).unwrap();
        assert_eq!(
            bisect_disjoint_sets(&f, 1, &tol()).unwrap_err(),
            LinfError::NotReal { atom: 1 }
        );
    }
}
