//! Inductive algebras: normalization by a representation, the induced action
//! on weights, weight-space orthogonality and the self-adjointness
//! certificate, chained together by [`certify_pipeline`].
//!
//! For an abelian algebra `A` normalized by an irreducible unitary
//! representation `π`, the pipeline checks as executable assertions that the
//! nilradical vanishes, that `C^d` is the direct sum of the weight spaces
//! `H_λ`, that distinct weight spaces are orthogonal, and that for every basis
//! element `B` the element `T₁` whose Gelfand transform is `conj(G(B))` equals
//! `Bᴴ`.

use std::fmt;

use thiserror::Error;

use crate::grouprep::{commutant_dimension, GroupError, UnitaryRepresentation};
use crate::matalg::{
    close_algebra, common_kernel, gelfand_from, generalized_weight_decomposition, is_abelian,
    nilradical_from, AbelianCheck, AlgebraError, GelfandTable, MatrixAlgebra, Weight,
    WeightSystem,
};
use crate::numkit::{least_squares, subspace_eq, Matrix, NumError, Tolerances, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InductiveError {
    #[error("algebra acts on C^{algebra} but the representation on C^{representation}")]
    DimensionMismatch { algebra: usize, representation: usize },
    #[error("transported weight matches no unique member of Λ (nearest distance {nearest:.3e})")]
    ActionEscapesLambda { nearest: f64 },
    #[error("nilradical has dimension {dim}")]
    NonzeroNilradical { dim: usize },
    #[error("weight spaces span only {rank} of {dim} dimensions")]
    IncompleteDecomposition { rank: usize, dim: usize },
    #[error("certificate failed (solve residual {solve:.3e}, adjoint deviation {deviation:.3e})")]
    CertificateFailed { solve: f64, deviation: f64 },
    #[error("{what} (measured {value:.3e}, tolerance {tolerance:.3e})")]
    AssertionFailed {
        what: &'static str,
        value: f64,
        tolerance: f64,
    },
    #[error("certificate verdict {certificate} disagrees with direct adjoint membership {direct}")]
    OracleDisagreement { certificate: bool, direct: bool },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<NumError> for InductiveError {
    fn from(e: NumError) -> Self {
        InductiveError::Algebra(AlgebraError::Numeric(e))
    }
}

#[derive(Debug, Clone)]
pub struct InductivityReport {
    pub normalized: bool,
    /// `residuals[g][i]`: relative distance of `π(g) B_i π(g)ᴴ` from the span.
    pub residuals: Vec<Vec<f64>>,
    pub max_residual: f64,
    pub abelian: AbelianCheck,
    /// Subspaces of a finite-dimensional space are always weakly closed.
    pub weakly_closed: bool,
    /// Set for continuous groups, where only quadrature elements are checked.
    pub sampled: bool,
}

/// Tests `π(g) A π(g)ᴴ ⊆ A` for each acting element. Conjugation is a linear
/// bijection of the matrix space, so inclusion forces equality, and
/// stability under generators extends to the generated group.
pub fn is_normalized(
    a: &MatrixAlgebra,
    rep: &UnitaryRepresentation,
) -> Result<InductivityReport, InductiveError> {
    check_dims(a, rep)?;
    let residuals: Vec<Vec<f64>> = rep
        .actors
        .iter()
        .map(|g| {
            a.basis()
                .iter()
                .map(|b| a.membership_residual(&(g * b * g.adjoint())))
                .collect()
        })
        .collect();
    let max_residual = residuals.iter().flatten().copied().fold(0.0, f64::max);
    Ok(InductivityReport {
        normalized: max_residual <= a.tol().residual,
        residuals,
        max_residual,
        abelian: is_abelian(a),
        weakly_closed: true,
        sampled: rep.model.is_continuous(),
    })
}

fn check_dims(a: &MatrixAlgebra, rep: &UnitaryRepresentation) -> Result<(), InductiveError> {
    if a.space_dim() != rep.dim {
        return Err(InductiveError::DimensionMismatch {
            algebra: a.space_dim(),
            representation: rep.dim,
        });
    }
    Ok(())
}

/// Largest per-coordinate distance with each coordinate divided by `‖B_i‖_F`.
fn scaled_distance(a: &MatrixAlgebra, x: &Weight, y: &Weight) -> f64 {
    x.values
        .iter()
        .zip(&y.values)
        .zip(a.basis())
        .map(|((p, q), b)| (p - q).norm() / b.norm())
        .fold(0.0, f64::max)
}

/// A transported weight together with its position in `Λ`.
#[derive(Debug, Clone)]
pub struct ActedWeight {
    pub weight: Weight,
    /// Index into [`WeightSystem::lambda`].
    pub lambda_position: usize,
}

/// `gλ(T) = λ(π(g)⁻¹ T π(g))`, matched against `Λ`.
pub fn weight_action(
    a: &MatrixAlgebra,
    sys: &WeightSystem,
    g: &Matrix,
    lambda: &Weight,
) -> Result<ActedWeight, InductiveError> {
    let mut values = Vec::with_capacity(a.dim());
    for b in a.basis() {
        let (coef, _) = a.coordinates(&(g.adjoint() * b * g))?;
        values.push(lambda.evaluate(&coef));
    }
    let weight = Weight { values };
    let radius = a.tol().cluster;
    let distances: Vec<f64> = sys
        .lambda()
        .iter()
        .map(|(w, _)| scaled_distance(a, w, &weight))
        .collect();
    let hits: Vec<usize> = (0..distances.len())
        .filter(|&k| distances[k] <= radius)
        .collect();
    match hits.as_slice() {
        [k] => Ok(ActedWeight {
            weight,
            lambda_position: *k,
        }),
        _ => Err(InductiveError::ActionEscapesLambda {
            nearest: distances.iter().copied().fold(f64::INFINITY, f64::min),
        }),
    }
}

#[derive(Debug, Clone)]
pub struct WeightOrbitReport {
    /// Orbits of positions in `Λ`, each sorted, ordered by smallest member.
    pub orbits: Vec<Vec<usize>>,
    /// `permutations[g][λ] = gλ` for each acting element.
    pub permutations: Vec<Vec<usize>>,
    /// Every acting element permutes `Λ` injectively.
    pub injective: bool,
    /// `π(g) H_λ = H_{gλ}` held for every element and weight.
    pub spaces_match: bool,
    /// Worst `‖π(g)v − P_{H_{gλ}} π(g)v‖` over unit basis vectors `v` of `H_λ`.
    pub max_compatibility_residual: f64,
}

/// Orbits of `Λ` under the group generated by the acting elements.
pub fn weight_orbits(
    a: &MatrixAlgebra,
    sys: &WeightSystem,
    rep: &UnitaryRepresentation,
) -> Result<WeightOrbitReport, InductiveError> {
    check_dims(a, rep)?;
    let lam = sys.lambda();
    let n = lam.len();
    let tol = a.tol();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let mut permutations = Vec::with_capacity(rep.actors.len());
    let mut injective = true;
    let mut spaces_match = true;
    let mut worst: f64 = 0.0;
    for g in &rep.actors {
        let mut perm = Vec::with_capacity(n);
        for (k, (w, space)) in lam.iter().enumerate() {
            let target = weight_action(a, sys, g, w)?.lambda_position;
            perm.push(target);
            let (ra, rb) = (find(&mut parent, k), find(&mut parent, target));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
            let image = space.map(g, tol);
            let target_space = lam[target].1;
            spaces_match &= subspace_eq(&image, target_space, tol)?;
            for v in space.vectors() {
                worst = worst.max(target_space.residual(&(g * v)));
            }
        }
        let mut seen = vec![false; n];
        for &t in &perm {
            injective &= !std::mem::replace(&mut seen[t], true);
        }
        permutations.push(perm);
    }

    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for k in 0..n {
        let r = find(&mut parent, k);
        if slot[r] == usize::MAX {
            slot[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[slot[r]].push(k);
    }
    Ok(WeightOrbitReport {
        orbits,
        permutations,
        injective,
        spaces_match,
        max_compatibility_residual: worst,
    })
}

/// Largest `|⟨v, w⟩|` over orthonormal basis vectors of distinct weight
/// spaces, in the standard inner product.
pub fn verify_weight_orthogonality(a: &MatrixAlgebra) -> Result<f64, InductiveError> {
    let sys = generalized_weight_decomposition(a)?;
    Ok(weight_overlap(&sys))
}

pub fn weight_overlap(sys: &WeightSystem) -> f64 {
    let lam = sys.lambda();
    let mut worst: f64 = 0.0;
    for (i, (_, x)) in lam.iter().enumerate() {
        for (_, y) in &lam[i + 1..] {
            let gram = x.basis().adjoint() * y.basis();
            worst = gram.iter().map(|z| z.norm()).fold(worst, f64::max);
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct CertificateEntry {
    /// `T₁ = Σ c_k B_k`.
    pub coefficients: Vector,
    /// `‖W c − conj(W e_i)‖` for the Gelfand table `W`.
    pub solve_residual: f64,
    /// `‖T₁ − B_iᴴ‖_F`.
    pub adjoint_deviation: f64,
    /// `eps_residual · (1 + ‖B_i‖_F)`.
    pub tolerance: f64,
    pub valid: bool,
}

#[derive(Debug, Clone)]
pub struct SelfAdjointCertificate {
    pub entries: Vec<CertificateEntry>,
    pub valid: bool,
}

impl SelfAdjointCertificate {
    pub fn worst_solve_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.solve_residual).fold(0.0, f64::max)
    }

    pub fn worst_adjoint_deviation(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.adjoint_deviation)
            .fold(0.0, f64::max)
    }
}

/// Solves `G(T₁) = conj(G(B_i))` for every basis element and compares `T₁`
/// with `B_iᴴ`. Requires a zero nilradical and `C^d = ⊕ H_λ`.
pub fn selfadjoint_certificate(a: &MatrixAlgebra) -> Result<SelfAdjointCertificate, InductiveError> {
    let sys = generalized_weight_decomposition(a)?;
    let nil = nilradical_from(a, &sys)?;
    if !nil.is_empty() {
        return Err(InductiveError::NonzeroNilradical { dim: nil.len() });
    }
    let rank = sys.eigen_span_rank(a.tol());
    if rank != a.space_dim() {
        return Err(InductiveError::IncompleteDecomposition {
            rank,
            dim: a.space_dim(),
        });
    }
    let table = gelfand_from(a, &sys)?;
    let cert = build_certificate(a, &table)?;
    if !cert.valid {
        return Err(InductiveError::CertificateFailed {
            solve: cert.worst_solve_residual(),
            deviation: cert.worst_adjoint_deviation(),
        });
    }
    Ok(cert)
}

/// Certificate entries without the validity requirement.
pub fn build_certificate(
    a: &MatrixAlgebra,
    table: &GelfandTable,
) -> Result<SelfAdjointCertificate, InductiveError> {
    let w = &table.values;
    let mut entries = Vec::with_capacity(a.dim());
    for (i, b) in a.basis().iter().enumerate() {
        let target: Vector = w.column(i).map(|z| z.conj());
        let (coefficients, solve_residual) = least_squares(w, &target)?;
        let t1 = a.element(&coefficients);
        let adjoint_deviation = (t1 - b.adjoint()).norm();
        let tolerance = a.tol().residual * b.norm();
        entries.push(CertificateEntry {
            coefficients,
            solve_residual,
            adjoint_deviation,
            tolerance,
            valid: solve_residual <= tolerance && adjoint_deviation <= tolerance,
        });
    }
    let valid = entries.iter().all(|e| e.valid);
    Ok(SelfAdjointCertificate { entries, valid })
}

/// Direct oracle: relative distance of each `B_iᴴ` from the span of `A`.
pub fn adjoint_membership(a: &MatrixAlgebra) -> Vec<f64> {
    a.basis()
        .iter()
        .map(|b| a.membership_residual(&b.adjoint()))
        .collect()
}

pub fn is_self_adjoint_direct(a: &MatrixAlgebra) -> bool {
    adjoint_membership(a)
        .iter()
        .all(|r| *r <= a.tol().residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Irreducibility,
    Closure,
    Abelian,
    Normalization,
    Nilradical,
    Decomposition,
    DirectSum,
    Orbits,
    Orthogonality,
    Gelfand,
    Certificate,
}

impl Stage {
    pub const ALL: [Stage; 11] = [
        Stage::Irreducibility,
        Stage::Closure,
        Stage::Abelian,
        Stage::Normalization,
        Stage::Nilradical,
        Stage::Decomposition,
        Stage::DirectSum,
        Stage::Orbits,
        Stage::Orthogonality,
        Stage::Gelfand,
        Stage::Certificate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Irreducibility => "irreducibility",
            Stage::Closure => "closure",
            Stage::Abelian => "abelian",
            Stage::Normalization => "normalization",
            Stage::Nilradical => "nilradical",
            Stage::Decomposition => "decomposition",
            Stage::DirectSum => "direct_sum",
            Stage::Orbits => "orbits",
            Stage::Orthogonality => "orthogonality",
            Stage::Gelfand => "gelfand",
            Stage::Certificate => "certificate",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageStatus {
    Passed,
    Failed,
    Skipped,
}

impl StageStatus {
    pub fn name(&self) -> &'static str {
        match self {
            StageStatus::Passed => "passed",
            StageStatus::Failed => "failed",
            StageStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StageRecord {
    pub stage: Stage,
    pub status: StageStatus,
    pub detail: String,
    pub metrics: Vec<(&'static str, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every hypothesis held and every assertion passed.
    SelfAdjoint,
    /// The algebra is inductive but the representation is reducible.
    HypothesesNotMet,
    /// The algebra is not abelian or not normalized.
    NotInductive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::SelfAdjoint => "self_adjoint",
            Verdict::HypothesesNotMet => "hypotheses_not_met",
            Verdict::NotInductive => "not_inductive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub include_identity: bool,
    pub max_dim: usize,
    pub tol: Tolerances,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            include_identity: false,
            max_dim: usize::MAX,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub stages: Vec<StageRecord>,
    pub verdict: Verdict,
    pub commutant_dim: usize,
    pub irreducible: bool,
    pub algebra: Option<MatrixAlgebra>,
    /// Whether the closed algebra contains the identity.
    pub unital: Option<bool>,
    /// Normalization was checked only at quadrature elements.
    pub sampled_normalization: bool,
    pub weights: Vec<Weight>,
    pub eigen_dims: Vec<usize>,
    pub nilradical_dim: Option<usize>,
    pub common_kernel_dim: Option<usize>,
    pub orbits: Option<WeightOrbitReport>,
    pub max_weight_overlap: Option<f64>,
    pub gelfand: Option<GelfandTable>,
    pub certificate: Option<SelfAdjointCertificate>,
    pub adjoint_membership: Option<Vec<f64>>,
}

impl PipelineReport {
    pub fn stage(&self, stage: Stage) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.stage == stage)
    }

    pub fn certificate_valid(&self) -> Option<bool> {
        self.certificate.as_ref().map(|c| c.valid)
    }

    pub fn direct_valid(&self) -> Option<bool> {
        let tol = self.algebra.as_ref()?.tol().residual;
        self.adjoint_membership
            .as_ref()
            .map(|r| r.iter().all(|x| *x <= tol))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("stage {stage}: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: InductiveError,
}

fn at<E: Into<InductiveError>>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        source: e.into(),
    }
}

struct Recorder {
    stages: Vec<StageRecord>,
}

impl Recorder {
    fn push(&mut self, stage: Stage, status: StageStatus, detail: String, metrics: Vec<(&'static str, f64)>) {
        self.stages.push(StageRecord {
            stage,
            status,
            detail,
            metrics,
        });
    }

    fn skip_rest(&mut self, reason: &str) {
        for stage in Stage::ALL {
            if self.stages.iter().all(|s| s.stage != stage) {
                self.push(stage, StageStatus::Skipped, reason.to_string(), Vec::new());
            }
        }
    }
}

fn check(ok: bool) -> StageStatus {
    if ok {
        StageStatus::Passed
    } else {
        StageStatus::Failed
    }
}

/// Runs every check of the self-adjointness argument on the algebra generated
/// by `generators` under `rep`.
///
/// A reducible representation does not stop the run; its conclusions are
/// labelled [`Verdict::HypothesesNotMet`]. A non-abelian or non-normalized
/// algebra stops after the failing stage with [`Verdict::NotInductive`]. When
/// all hypotheses hold, any failed assertion is returned as an error naming
/// the stage, since it signals a numerical or input problem.
pub fn certify_pipeline(
    rep: &UnitaryRepresentation,
    generators: &[Matrix],
    options: &PipelineOptions,
) -> Result<PipelineReport, PipelineError> {
    let tol = options.tol;
    let mut rec = Recorder { stages: Vec::new() };
    let mut report = PipelineReport {
        stages: Vec::new(),
        verdict: Verdict::SelfAdjoint,
        commutant_dim: 0,
        irreducible: false,
        algebra: None,
        unital: None,
        sampled_normalization: rep.model.is_continuous(),
        weights: Vec::new(),
        eigen_dims: Vec::new(),
        nilradical_dim: None,
        common_kernel_dim: None,
        orbits: None,
        max_weight_overlap: None,
        gelfand: None,
        certificate: None,
        adjoint_membership: None,
    };

    let commutant_dim = commutant_dimension(rep, &tol);
    let irreducible = commutant_dim == 1;
    report.commutant_dim = commutant_dim;
    report.irreducible = irreducible;
    rec.push(
        Stage::Irreducibility,
        check(irreducible),
        format!("commutant dimension {commutant_dim}"),
        vec![("commutant_dim", commutant_dim as f64)],
    );

    let a = close_algebra(generators, options.include_identity, tol, options.max_dim)
        .map_err(at(Stage::Closure))?;
    if a.space_dim() != rep.dim {
        return Err(PipelineError {
            stage: Stage::Closure,
            source: InductiveError::DimensionMismatch {
                algebra: a.space_dim(),
                representation: rep.dim,
            },
        });
    }
    report.unital = Some(a.contains_identity());
    rec.push(
        Stage::Closure,
        StageStatus::Passed,
        format!(
            "dimension {}, {}",
            a.dim(),
            if a.contains_identity() { "unital" } else { "non-unital" }
        ),
        vec![("dimension", a.dim() as f64), ("closure_residual", a.closure_residual())],
    );
    report.algebra = Some(a.clone());

    let abelian = is_abelian(&a);
    rec.push(
        Stage::Abelian,
        check(abelian.abelian),
        String::new(),
        vec![("max_commutator", abelian.max_violation)],
    );
    if !abelian.abelian {
        report.verdict = Verdict::NotInductive;
        rec.skip_rest("algebra is not abelian");
        report.stages = rec.stages;
        return Ok(report);
    }

    let norm = is_normalized(&a, rep).map_err(at(Stage::Normalization))?;
    rec.push(
        Stage::Normalization,
        check(norm.normalized),
        if norm.sampled {
            "checked at quadrature elements only".to_string()
        } else {
            "checked at every generator".to_string()
        },
        vec![("max_residual", norm.max_residual)],
    );
    if !norm.normalized {
        report.verdict = Verdict::NotInductive;
        rec.skip_rest("algebra is not normalized");
        report.stages = rec.stages;
        return Ok(report);
    }

    let sys = generalized_weight_decomposition(&a).map_err(at(Stage::Decomposition))?;
    let nil = nilradical_from(&a, &sys).map_err(at(Stage::Nilradical))?;
    let kernel = common_kernel(&nil, a.space_dim(), &tol).map_err(at(Stage::Nilradical))?;
    // K is π(G)-invariant because N is normalized
    let mut invariance: f64 = 0.0;
    for g in &rep.actors {
        for v in kernel.vectors() {
            invariance = invariance.max(kernel.residual(&(g * v)));
        }
    }
    report.nilradical_dim = Some(nil.len());
    report.common_kernel_dim = Some(kernel.dim());
    let nil_metrics = vec![
        ("nilradical_dim", nil.len() as f64),
        ("common_kernel_dim", kernel.dim() as f64),
        ("kernel_invariance_residual", invariance),
    ];
    if !nil.is_empty() && irreducible {
        return Err(PipelineError {
            stage: Stage::Nilradical,
            source: InductiveError::NonzeroNilradical { dim: nil.len() },
        });
    }
    rec.push(
        Stage::Nilradical,
        check(nil.is_empty()),
        format!("common kernel dimension {}", kernel.dim()),
        nil_metrics,
    );

    let lam = sys.lambda();
    report.weights = lam.iter().map(|(w, _)| (*w).clone()).collect();
    report.eigen_dims = lam.iter().map(|(_, s)| s.dim()).collect();
    rec.push(
        Stage::Decomposition,
        StageStatus::Passed,
        format!("{} weights", lam.len()),
        vec![
            ("lambda_count", lam.len() as f64),
            ("generalized_dim_sum", sys.generalized_dim_sum() as f64),
        ],
    );

    let rank = sys.eigen_span_rank(&tol);
    let direct_sum = rank == a.space_dim();
    if !direct_sum && irreducible {
        return Err(PipelineError {
            stage: Stage::DirectSum,
            source: InductiveError::IncompleteDecomposition {
                rank,
                dim: a.space_dim(),
            },
        });
    }
    rec.push(
        Stage::DirectSum,
        check(direct_sum),
        format!("weight spaces span {rank} of {}", a.space_dim()),
        vec![("eigen_dim_sum", sys.eigen_dim_sum() as f64), ("rank", rank as f64)],
    );

    let orbits = weight_orbits(&a, &sys, rep).map_err(at(Stage::Orbits))?;
    let orbits_ok = orbits.injective
        && orbits.spaces_match
        && orbits.max_compatibility_residual <= tol.residual;
    if !orbits_ok && irreducible {
        return Err(PipelineError {
            stage: Stage::Orbits,
            source: InductiveError::AssertionFailed {
                what: "π(g) H_λ = H_{gλ}",
                value: orbits.max_compatibility_residual,
                tolerance: tol.residual,
            },
        });
    }
    rec.push(
        Stage::Orbits,
        check(orbits_ok),
        format!("{} orbit(s)", orbits.orbits.len()),
        vec![
            ("orbit_count", orbits.orbits.len() as f64),
            ("max_compatibility_residual", orbits.max_compatibility_residual),
        ],
    );
    report.orbits = Some(orbits);

    let overlap = weight_overlap(&sys);
    report.max_weight_overlap = Some(overlap);
    let orthogonal = overlap <= tol.residual;
    if !orthogonal && irreducible {
        return Err(PipelineError {
            stage: Stage::Orthogonality,
            source: InductiveError::AssertionFailed {
                what: "distinct weight spaces are orthogonal",
                value: overlap,
                tolerance: tol.residual,
            },
        });
    }
    rec.push(
        Stage::Orthogonality,
        check(orthogonal),
        String::new(),
        vec![("max_inner_product", overlap)],
    );

    let table = gelfand_from(&a, &sys).map_err(at(Stage::Gelfand))?;
    rec.push(
        Stage::Gelfand,
        StageStatus::Passed,
        String::new(),
        vec![("homomorphism_residual", table.homomorphism_residual)],
    );

    if nil.is_empty() && direct_sum {
        let cert = build_certificate(&a, &table).map_err(at(Stage::Certificate))?;
        let membership = adjoint_membership(&a);
        let direct = membership.iter().all(|r| *r <= tol.residual);
        if direct != cert.valid {
            return Err(PipelineError {
                stage: Stage::Certificate,
                source: InductiveError::OracleDisagreement {
                    certificate: cert.valid,
                    direct,
                },
            });
        }
        if !cert.valid && irreducible {
            return Err(PipelineError {
                stage: Stage::Certificate,
                source: InductiveError::CertificateFailed {
                    solve: cert.worst_solve_residual(),
                    deviation: cert.worst_adjoint_deviation(),
                },
            });
        }
        rec.push(
            Stage::Certificate,
            check(cert.valid),
            "direct adjoint membership agrees".to_string(),
            vec![
                ("max_solve_residual", cert.worst_solve_residual()),
                ("max_adjoint_deviation", cert.worst_adjoint_deviation()),
                (
                    "max_adjoint_membership_residual",
                    membership.iter().copied().fold(0.0, f64::max),
                ),
            ],
        );
        report.certificate = Some(cert);
        report.adjoint_membership = Some(membership);
    } else {
        rec.push(
            Stage::Certificate,
            StageStatus::Skipped,
            "requires zero nilradical and a complete weight decomposition".to_string(),
            Vec::new(),
        );
        report.adjoint_membership = Some(adjoint_membership(&a));
    }
    report.gelfand = Some(table);

    report.verdict = if irreducible {
        Verdict::SelfAdjoint
    } else {
        Verdict::HypothesesNotMet
    };
    report.stages = rec.stages;
    Ok(report)
}
