//! The four job commands.

use std::fmt::Write;
use std::sync::Arc;

use indalg::grouprep::{
    check_hermitian_psd, commutant_dimension, haar_average_form, scalar_deviation, Builtin, GroupError,
    UnitaryRepresentation,
};
use indalg::inductive::{certify_pipeline, InductiveError, PipelineOptions, PipelineReport, StageStatus, Verdict};
use indalg::linf::{
    bisect_disjoint_sets, extract_idempotents, membership_quotients, AtomicSpace, LinfError, QuotientReport,
    SimpleFunction, TableTail, TailModel, TailRule, Witness,
};
use indalg::matalg::AlgebraError;
use indalg::numkit::{Matrix, Tolerances};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::job::{ComplexDoc, Job, RepresentationDoc, TailRuleDoc};
use crate::render;
use crate::{CliError, Outcome, EXIT_NEGATIVE, EXIT_PASS};

const DEFAULT_MAX_ORDER: usize = 10_000;
const DEFAULT_TERMS: usize = 1000;
const DEFAULT_DEPTH: usize = 3;
const TAIL_PREVIEW: usize = 5;

struct BuiltRep {
    name: String,
    rep: UnitaryRepresentation,
}

fn representation(job: &Job, tol: &Tolerances) -> Result<BuiltRep, CliError> {
    let doc = job
        .representation
        .as_ref()
        .ok_or_else(|| CliError::input("representation", "missing field"))?;
    let max_order = job.options.max_order.unwrap_or(DEFAULT_MAX_ORDER);
    match doc {
        RepresentationDoc::Builtin(b) => {
            let builtin: Builtin = b
                .builtin
                .parse()
                .map_err(|e: GroupError| CliError::input("representation.builtin", e.to_string()))?;
            let nodes = b.quadrature_nodes.or(job.options.quadrature_nodes);
            let rep = builtin.representation(nodes, tol, max_order).map_err(|e| match e {
                GroupError::InsufficientNodes { .. } => {
                    let field = if b.quadrature_nodes.is_some() {
                        "representation.quadrature_nodes"
                    } else {
                        "options.quadrature_nodes"
                    };
                    CliError::input(field, e.to_string())
                }
                other => CliError::internal(other),
            })?;
            Ok(BuiltRep {
                name: builtin.to_string(),
                rep,
            })
        }
        RepresentationDoc::Explicit(x) => {
            let gens = x
                .generators
                .iter()
                .enumerate()
                .map(|(i, m)| m.to_matrix(&format!("representation.generators[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let rep = UnitaryRepresentation::finite(gens, tol, max_order).map_err(|e| match e {
                GroupError::NoGenerators => CliError::input("representation.generators", e.to_string()),
                GroupError::NotUnitary { index } | GroupError::MixedSizes { index, .. } => {
                    CliError::input(&format!("representation.generators[{index}]"), e.to_string())
                }
                GroupError::Numeric(_) => CliError::input("representation.generators", e.to_string()),
                other => CliError::internal(other),
            })?;
            Ok(BuiltRep {
                name: "explicit".to_string(),
                rep,
            })
        }
    }
}

fn matrices(docs: &Option<Vec<crate::MatrixDocument>>, field: &str) -> Result<Vec<Matrix>, CliError> {
    let docs = docs
        .as_ref()
        .ok_or_else(|| CliError::input(field, "missing field"))?;
    if docs.is_empty() {
        return Err(CliError::input(field, "at least one matrix is required"));
    }
    docs.iter()
        .enumerate()
        .map(|(i, m)| m.to_matrix(&format!("{field}[{i}]")))
        .collect()
}

fn rep_json(b: &BuiltRep) -> Value {
    json!({
        "name": b.name,
        "dim": b.rep.dim,
        "elements": b.rep.order(),
        "continuous": b.rep.model.is_continuous(),
        "quadrature_nodes": if b.rep.model.is_continuous() { json!(b.rep.model.nodes) } else { Value::Null },
    })
}

pub fn certify(job: &Job, tol: Tolerances) -> Result<Outcome, CliError> {
    let built = representation(job, &tol)?;
    let generators = matrices(&job.algebra, "algebra")?;
    let d = built.rep.dim;
    if let Some(i) = generators.iter().position(|g| g.nrows() != d || g.ncols() != d) {
        return Err(CliError::input(
            &format!("algebra[{i}]"),
            format!("expected a {d}x{d} matrix to match the representation"),
        ));
    }
    let options = PipelineOptions {
        include_identity: job.options.include_identity.unwrap_or(false),
        max_dim: job.options.max_dim.unwrap_or(d * d),
        tol,
    };
    let report = certify_pipeline(&built.rep, &generators, &options).map_err(|e| match &e.source {
        InductiveError::Algebra(AlgebraError::MixedSizes { .. } | AlgebraError::NoGenerators) => {
            CliError::input("algebra", e.to_string())
        }
        InductiveError::Algebra(AlgebraError::DimensionCap { .. }) => CliError::input("options.max_dim", e.to_string()),
        _ => CliError::internal(e),
    })?;
    let exit = if report.verdict == Verdict::SelfAdjoint {
        EXIT_PASS
    } else {
        EXIT_NEGATIVE
    };
    Ok(Outcome {
        text: certify_text(&built, &report),
        report: certify_json(&built, &report),
        exit,
    })
}

fn certify_json(built: &BuiltRep, r: &PipelineReport) -> Value {
    let stages: Vec<Value> = r
        .stages
        .iter()
        .map(|s| {
            json!({
                "stage": s.stage.name(),
                "status": s.status.name(),
                "detail": s.detail,
                "metrics": render::metrics(&s.metrics),
            })
        })
        .collect();
    let failed = r
        .stages
        .iter()
        .find(|s| s.status == StageStatus::Failed)
        .map(|s| s.stage.name());
    let certificate = r.certificate.as_ref().map(|c| {
        json!({
            "valid": c.valid,
            "entries": c.entries.iter().map(|e| json!({
                "coefficients": render::vector(&e.coefficients),
                "solve_residual": e.solve_residual,
                "adjoint_deviation": e.adjoint_deviation,
                "tolerance": e.tolerance,
                "valid": e.valid,
            })).collect::<Vec<_>>(),
        })
    });
    json!({
        "command": "certify",
        "representation": rep_json(built),
        "verdict": r.verdict.name(),
        "failed_stage": failed,
        "irreducible": r.irreducible,
        "commutant_dim": r.commutant_dim,
        "algebra": r.algebra.as_ref().map(|a| json!({
            "dim": a.dim(),
            "unital": a.contains_identity(),
            "basis": a.basis().iter().map(render::matrix).collect::<Vec<_>>(),
        })),
        "sampled_normalization": r.sampled_normalization,
        "stages": stages,
        "weights": r.weights.iter().map(|w| render::complexes(&w.values)).collect::<Vec<_>>(),
        "eigen_dims": r.eigen_dims,
        "nilradical_dim": r.nilradical_dim,
        "common_kernel_dim": r.common_kernel_dim,
        "orbits": r.orbits.as_ref().map(|o| &o.orbits),
        "max_weight_overlap": r.max_weight_overlap,
        "gelfand": r.gelfand.as_ref().map(|g| json!({
            "values": render::matrix(&g.values),
            "homomorphism_residual": g.homomorphism_residual,
        })),
        "certificate": certificate,
        "adjoint_membership": r.adjoint_membership,
        "direct_valid": r.direct_valid(),
    })
}

fn certify_text(built: &BuiltRep, r: &PipelineReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", r.verdict.name());
    let _ = writeln!(
        out,
        "representation: {} (dimension {}, {} elements{})",
        built.name,
        built.rep.dim,
        built.rep.order(),
        if built.rep.model.is_continuous() { ", quadrature" } else { "" }
    );
    let _ = writeln!(out, "commutant dimension: {}", r.commutant_dim);
    if let Some(a) = &r.algebra {
        let _ = writeln!(
            out,
            "algebra: dimension {}, {}",
            a.dim(),
            if a.contains_identity() { "unital" } else { "non-unital" }
        );
    }
    let _ = writeln!(out, "stages:");
    for s in &r.stages {
        let mut line = format!("  {:<15} {:<8}", s.stage.name(), s.status.name());
        if !s.detail.is_empty() {
            let _ = write!(line, " {}", s.detail);
        }
        if !s.metrics.is_empty() {
            let _ = write!(line, " [{}]", render::fmt_metrics(&s.metrics));
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    if !r.weights.is_empty() {
        let _ = writeln!(out, "weights:");
        for (w, dim) in r.weights.iter().zip(&r.eigen_dims) {
            let _ = writeln!(out, "  {} eigenspace dimension {dim}", render::fmt_complexes(&w.values));
        }
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(
            out,
            "certificate: {} (worst adjoint deviation {:.3e})",
            if c.valid { "valid" } else { "invalid" },
            c.worst_adjoint_deviation()
        );
    }
    out
}

fn space_and_functions(job: &Job, field: &str) -> Result<Vec<SimpleFunction>, CliError> {
    let rows = job
        .functions
        .as_ref()
        .ok_or_else(|| CliError::input(field, "missing field"))?;
    if rows.is_empty() {
        return Err(CliError::input(field, "at least one function is required"));
    }
    let space = match &job.space {
        Some(s) => AtomicSpace::new(s.atoms.clone(), s.masses.clone())
            .map_err(|e| CliError::input("space", e.to_string()))?,
        None => AtomicSpace::uniform(rows[0].len()),
    };
    if space.is_empty() {
        return Err(CliError::input(&format!("{field}[0]"), "functions need at least one atom"));
    }
    let space = Arc::new(space);
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let values: Vec<Complex64> = row.iter().map(|z| z.0).collect();
            SimpleFunction::new(Arc::clone(&space), values)
                .map_err(|e| CliError::input(&format!("{field}[{i}]"), e.to_string()))
        })
        .collect()
}

fn atom_names(space: &AtomicSpace, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| space.atoms()[i].clone()).collect()
}

pub fn idempotents(job: &Job, tol: Tolerances) -> Result<Outcome, CliError> {
    let basis = space_and_functions(job, "functions")?;
    let space = Arc::clone(basis[0].space());
    let result = match extract_idempotents(&basis, &tol) {
        Ok(r) => r,
        Err(LinfError::NotSubalgebra { residual }) => {
            let report = json!({
                "command": "idempotents",
                "verdict": "not_subalgebra",
                "worst_product_residual": residual,
            });
            return Ok(Outcome {
                report,
                text: format!(
                    "verdict: not_subalgebra\nspan is not closed under pointwise products (worst product residual {residual:.3e})\n"
                ),
                exit: EXIT_NEGATIVE,
            });
        }
        Err(
            e @ (LinfError::DependentBasis
            | LinfError::AllZero
            | LinfError::EmptyBasis
            | LinfError::MixedSpaces
            | LinfError::LengthMismatch { .. }),
        ) => return Err(CliError::input("functions", e.to_string())),
        Err(e) => return Err(CliError::internal(e)),
    };

    let p = &result.partition;
    let cells: Vec<Value> = p
        .cells
        .iter()
        .zip(&p.signatures)
        .map(|(cell, sig)| {
            json!({
                "atoms": atom_names(&space, cell),
                "mass": space.mass_of(cell),
                "signature": render::complexes(sig),
            })
        })
        .collect();
    let indicators: Vec<Value> = result
        .indicators
        .iter()
        .zip(&result.coefficients)
        .map(|(chi, coef)| {
            json!({
                "values": chi.values().iter().map(|z| z.re).collect::<Vec<_>>(),
                "coefficients": render::vector(coef),
            })
        })
        .collect();
    let verdict = if result.self_adjoint { "self_adjoint" } else { "not_self_adjoint" };
    let report = json!({
        "command": "idempotents",
        "verdict": verdict,
        "atoms": space.atoms(),
        "zero_cell": atom_names(&space, &p.zero_cell),
        "cells": cells,
        "indicators": indicators,
        "max_projection_error": result.max_projection_error,
        "max_idempotency_error": result.max_idempotency_error,
        "max_membership_residual": result.max_membership_residual,
        "max_conjugate_residual": result.max_conjugate_residual,
        "self_adjoint": result.self_adjoint,
    });

    let mut text = String::new();
    let _ = writeln!(text, "verdict: {verdict}");
    let _ = writeln!(text, "zero cell: {{{}}}", atom_names(&space, &p.zero_cell).join(", "));
    for (h, (cell, sig)) in p.cells.iter().zip(&p.signatures).enumerate() {
        let _ = writeln!(
            text,
            "cell {}: {{{}}} signature {}",
            h + 1,
            atom_names(&space, cell).join(", "),
            render::fmt_complexes(sig)
        );
    }
    for (h, (chi, coef)) in result.indicators.iter().zip(&result.coefficients).enumerate() {
        let terms: Vec<String> = coef
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 1e-14)
            .map(|(j, c)| format!("({})·s{}", render::fmt_complex(*c), j + 1))
            .collect();
        let _ = writeln!(
            text,
            "chi{} = {} = {}",
            h + 1,
            render::fmt_complexes(chi.values()),
            terms.join(" + ")
        );
    }
    let _ = writeln!(
        text,
        "conjugate membership residual: {:.3e}",
        result.max_conjugate_residual
    );
    Ok(Outcome {
        report,
        text,
        exit: if result.self_adjoint { EXIT_PASS } else { EXIT_NEGATIVE },
    })
}

fn quotient_json(q: &QuotientReport) -> Value {
    let m = q.q_odd.len();
    let start = m.saturating_sub(TAIL_PREVIEW);
    let tail = |v: &[Complex64]| -> Vec<Value> {
        (start..m).map(|i| json!({"m": i + 1, "q": render::complex(v[i])})).collect()
    };
    json!({
        "terms": m,
        "odd_tail": tail(&q.q_odd),
        "even_tail": tail(&q.q_even),
        "odd_limit": render::complex(q.odd_limit),
        "even_limit": render::complex(q.even_limit),
        "odd_cauchy_residual": q.odd_cauchy,
        "even_cauchy_residual": q.even_cauchy,
        "gap": q.gap,
        "threshold": q.threshold,
        "verdict": q.verdict.name(),
    })
}

fn quotient_text(label: &str, q: &QuotientReport) -> String {
    let m = q.q_odd.len();
    let mut out = String::new();
    let _ = writeln!(out, "{label}: {}", q.verdict.name());
    for i in m.saturating_sub(TAIL_PREVIEW)..m {
        let _ = writeln!(
            out,
            "  m={:<8} q_odd={:<28} q_even={}",
            i + 1,
            render::fmt_complex(q.q_odd[i]),
            render::fmt_complex(q.q_even[i])
        );
    }
    let _ = writeln!(
        out,
        "  limits: q_odd -> {}, q_even -> {}",
        render::fmt_complex(q.odd_limit),
        render::fmt_complex(q.even_limit)
    );
    let _ = writeln!(
        out,
        "  gap |q_odd - i q_even| = {:.3e}, threshold {:.3e}, cauchy residuals {:.3e} / {:.3e}",
        q.gap, q.threshold, q.odd_cauchy, q.even_cauchy
    );
    out
}

pub fn counterexample(job: &Job, tol: Tolerances) -> Result<Outcome, CliError> {
    let terms = job.options.m.unwrap_or(DEFAULT_TERMS);
    let quotients = |model: &dyn TailModel| {
        membership_quotients(model, terms, &tol).map_err(|e| match e {
            LinfError::TooFewTerms(_) => CliError::input("options.m", e.to_string()),
            other => CliError::internal(other),
        })
    };

    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!("counterexample"));
    let mut text = String::new();
    let exit = if let Some(tail) = &job.tail {
        if tail.table.is_empty() {
            return Err(CliError::input("tail.table", "table must not be empty"));
        }
        if let Some(i) = tail.table.iter().position(|z| !z.0.re.is_finite() || !z.0.im.is_finite()) {
            return Err(CliError::input(&format!("tail.table[{i}]"), "entry is not finite"));
        }
        let model = TableTail {
            table: tail.table.iter().map(|z| z.0).collect(),
            rule: match tail.rule {
                TailRuleDoc::RepeatLast => TailRule::RepeatLast,
                TailRuleDoc::Zero => TailRule::Zero,
                TailRuleDoc::Constant(ComplexDoc(c)) => TailRule::Constant(c),
            },
        };
        let q = quotients(&model)?;
        report.insert("tail".into(), quotient_json(&q));
        report.insert("verdict".into(), json!(q.verdict.name()));
        text.push_str(&quotient_text("tail", &q));
        if q.verdict.is_member() {
            EXIT_PASS
        } else {
            EXIT_NEGATIVE
        }
    } else {
        let f = quotients(&Witness { conjugated: false })?;
        let g = quotients(&Witness { conjugated: true })?;
        report.insert("f".into(), quotient_json(&f));
        report.insert("conj_f".into(), quotient_json(&g));
        report.insert("verdict".into(), json!([f.verdict.name(), g.verdict.name()]));
        let separated = f.verdict.is_member() && !g.verdict.is_member();
        report.insert("self_adjoint".into(), json!(!separated));
        text.push_str(&quotient_text("f", &f));
        text.push_str(&quotient_text("conj(f)", &g));
        let _ = writeln!(
            text,
            "algebra is {}",
            if separated { "not self-adjoint: f is a member, conj(f) is not" } else { "not separated at this M" }
        );
        if separated {
            EXIT_PASS
        } else {
            EXIT_NEGATIVE
        }
    };

    if job.functions.is_some() {
        let fns = space_and_functions(job, "functions")?;
        let depth = job.options.depth.unwrap_or(DEFAULT_DEPTH);
        let b = bisect_disjoint_sets(&fns[0], depth, &tol).map_err(|e| match e {
            LinfError::NotReal { .. } => CliError::input("functions[0]", e.to_string()),
            other => CliError::internal(other),
        })?;
        let space = fns[0].space();
        report.insert(
            "bisection".into(),
            json!({
                "sets": b.sets.iter().map(|s| atom_names(space, s)).collect::<Vec<_>>(),
                "remainder": atom_names(space, &b.remainder),
                "constant_remainder": b.constant_remainder,
            }),
        );
        let _ = writeln!(text, "bisection:");
        for (k, s) in b.sets.iter().enumerate() {
            let _ = writeln!(text, "  E{} = {{{}}}", k + 1, atom_names(space, s).join(", "));
        }
        if b.constant_remainder {
            let _ = writeln!(text, "  remainder is constant: {{{}}}", atom_names(space, &b.remainder).join(", "));
        }
    }

    Ok(Outcome {
        report: Value::Object(report),
        text,
        exit,
    })
}

pub fn schur(job: &Job, tol: Tolerances) -> Result<Outcome, CliError> {
    let built = representation(job, &tol)?;
    let p = job
        .form
        .as_ref()
        .ok_or_else(|| CliError::input("form", "missing field"))?
        .to_matrix("form")?;
    let d = built.rep.dim;
    if p.nrows() != d || p.ncols() != d {
        return Err(CliError::input("form", format!("expected a {d}x{d} matrix")));
    }
    check_hermitian_psd(&p, &tol).map_err(|e| CliError::input("form", e.to_string()))?;
    let commutant_dim = commutant_dimension(&built.rep, &tol);
    let irreducible = commutant_dim == 1;
    let q = haar_average_form(&built.rep, &p, &tol).map_err(CliError::internal)?;
    let check = scalar_deviation(q);
    let threshold = tol.residual * p.norm().max(1.0);
    let scalar = check.deviation <= threshold;
    let exit = if irreducible && scalar { EXIT_PASS } else { EXIT_NEGATIVE };
    let verdict = match (irreducible, scalar) {
        (true, true) => "scalar",
        (true, false) => "not_scalar",
        (false, _) => "hypotheses_not_met",
    };
    let report = json!({
        "command": "schur",
        "representation": rep_json(&built),
        "verdict": verdict,
        "irreducible": irreducible,
        "commutant_dim": commutant_dim,
        "averaged": render::matrix(&check.averaged),
        "mu": render::complex(check.mu),
        "deviation": check.deviation,
        "threshold": threshold,
    });
    let mut text = String::new();
    let _ = writeln!(text, "verdict: {verdict}");
    let _ = writeln!(text, "representation: {} (dimension {d})", built.name);
    let _ = writeln!(text, "commutant dimension: {commutant_dim}");
    let _ = writeln!(text, "Q =");
    text.push_str(&render::fmt_matrix(&check.averaged, "  "));
    let _ = writeln!(text, "mu = {}", render::fmt_complex(check.mu));
    let _ = writeln!(text, "deviation = {:.3e} (threshold {threshold:.3e})", check.deviation);
    Ok(Outcome { report, text, exit })
}
