use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn indalg(job: &str, extra: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_indalg"))
        .args(["--format", "json"])
        .args(extra)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(job.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn run(job: &str) -> (i32, Value) {
    let out = indalg(job, &[]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), report)
}

const E11: &str = r#"{"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0]]}"#;
const E22: &str = r#"{"rows": 2, "cols": 2, "entries": [[0, 0], [0, 1]]}"#;
const NIL: &str = r#"{"rows": 2, "cols": 2, "entries": [[0, 1], [0, 0]]}"#;

fn certify(builtin: &str, algebra: &[&str]) -> String {
    format!(
        r#"{{"command": "certify", "representation": {{"builtin": "{builtin}"}}, "algebra": [{}]}}"#,
        algebra.join(",")
    )
}

fn schur(builtin: &str, nodes: Option<usize>, form: &str) -> String {
    let nodes = nodes.map(|k| format!(r#", "quadrature_nodes": {k}"#)).unwrap_or_default();
    format!(r#"{{"command": "schur", "representation": {{"builtin": "{builtin}"{nodes}}}, "form": {form}}}"#)
}

#[test]
fn certify_dihedral_diagonal_passes() {
    let (code, r) = run(&certify("dihedral4:std2", &[E11, E22]));
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "self_adjoint");
    assert_eq!(r["certificate"]["valid"], true);
    assert_eq!(r["stages"].as_array().unwrap().len(), 11);
    assert!(r["stages"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["status"] == "passed"));
}

#[test]
fn certify_nilpotent_fails_normalization() {
    let (code, r) = run(&certify("dihedral4:std2", &[NIL]));
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "not_inductive");
    assert_eq!(r["failed_stage"], "normalization");
}

#[test]
fn certify_o2_diagonal_passes() {
    let (code, r) = run(&certify("o2:1", &[E11, E22]));
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "self_adjoint");
    assert_eq!(r["representation"]["quadrature_nodes"], 5);
}

#[test]
fn certify_reducible_reports_hypotheses() {
    let (code, r) = run(&certify("circle-sum:1", &[E11, E22]));
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "hypotheses_not_met");
    assert_eq!(r["commutant_dim"], 2);
}

#[test]
fn certify_explicit_generators() {
    let job = format!(
        r#"{{"command": "certify",
            "representation": {{"generators": [
                {{"rows": 2, "cols": 2, "entries": [[[0, 1], 0], [0, [0, -1]]]}},
                {{"rows": 2, "cols": 2, "entries": [[0, 1], [1, 0]]}}]}},
            "algebra": [{E11}, {E22}]}}"#
    );
    let (code, r) = run(&job);
    assert_eq!(code, 0);
    assert_eq!(r["representation"]["elements"], 8);
}

#[test]
fn certify_schema_errors_exit_64_with_pointer() {
    let (code, r) = run(r#"{"command": "certify", "representation": {"builtin": "dihedral4:std2"}, "algebra": [{"rows": 2, "cols": 2, "entries": [[1, 0], [0, "x"]]}]}"#);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "algebra[0].entries[1][1]");

    let (code, r) = run(&certify("dihedral4:std2", &[r#"{"rows": 3, "cols": 3, "entries": [[1,0,0],[0,1,0],[0,0,1]]}"#]));
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "algebra[0]");

    let (code, r) = run(r#"{"command": "certify", "representation": {"builtin": "dihedral4:std2"}}"#);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "algebra");

    let (code, r) = run(&certify("tetrahedral:std3", &[E11]));
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "representation.builtin");

    let (code, r) = run(r#"{"command": "launch"}"#);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "command");

    let (code, _) = run("not json");
    assert_eq!(code, 64);
}

#[test]
fn non_unitary_generator_is_bad_input() {
    let job = format!(
        r#"{{"command": "certify",
            "representation": {{"generators": [{{"rows": 2, "cols": 2, "entries": [[2, 0], [0, 1]]}}]}},
            "algebra": [{E11}]}}"#
    );
    let (code, r) = run(&job);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "representation.generators[0]");
}

#[test]
fn too_few_quadrature_nodes_is_bad_input() {
    let (code, r) = run(&schur("o2:2", Some(5), E11));
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "representation.quadrature_nodes");
}

#[test]
fn idempotents_examples() {
    let (code, r) = run(r#"{"command": "idempotents", "functions": [[2, 2, 3], [0, 0, 3]]}"#);
    assert_eq!(code, 0);
    let values: Vec<Value> = r["indicators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["values"].clone())
        .collect();
    assert_eq!(values, vec![serde_json::json!([1.0, 1.0, 0.0]), serde_json::json!([0.0, 0.0, 1.0])]);
    assert_eq!(r["self_adjoint"], true);

    let (code, r) = run(r#"{"command": "idempotents", "functions": [[1, 2, 0]]}"#);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "not_subalgebra");
    assert!(r["worst_product_residual"].as_f64().unwrap() > 0.1);

    let (code, r) = run(r#"{"command": "idempotents", "functions": [[1, 1, 1]]}"#);
    assert_eq!(code, 0);
    assert_eq!(r["indicators"].as_array().unwrap().len(), 1);
}

#[test]
fn idempotents_with_named_atoms() {
    let (code, r) = run(
        r#"{"command": "idempotents", "space": {"atoms": ["a", "b", "c"], "masses": [0.5, 1, 2]},
            "functions": [[2, 2, 3], [0, 0, 3]]}"#,
    );
    assert_eq!(code, 0);
    assert_eq!(r["cells"][0]["atoms"], serde_json::json!(["a", "b"]));
    assert_eq!(r["cells"][0]["mass"], 1.5);

    let (code, r) = run(r#"{"command": "idempotents", "space": {"atoms": ["a"], "masses": [1]}, "functions": [[1, 2]]}"#);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "functions[0]");

    let (code, r) = run(r#"{"command": "idempotents", "space": {"atoms": ["a"], "masses": [-1]}, "functions": [[1]]}"#);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "space");
}

#[test]
fn counterexample_large_m() {
    let (code, r) = run(r#"{"command": "counterexample", "options": {"m": 1000000}}"#);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], serde_json::json!(["member", "non-member"]));
    let odd = &r["f"]["odd_limit"];
    let (re, im) = (odd[0].as_f64().unwrap(), odd[1].as_f64().unwrap());
    assert!(re.abs() < 1e-6 && (im - 0.5).abs() < 1e-6);
    assert_eq!(r["f"]["odd_tail"].as_array().unwrap().len(), 5);
}

#[test]
fn counterexample_small_m_and_tables() {
    let (code, r) = run(r#"{"command": "counterexample", "options": {"m": 10}}"#);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], serde_json::json!(["member", "non-member"]));

    let (code, r) = run(r#"{"command": "counterexample", "tail": {"table": [7]}}"#);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "member");

    let (code, r) = run(r#"{"command": "counterexample", "tail": {"table": [0, 1], "rule": "zero"}}"#);
    assert_eq!(code, 0, "{r}");

    let (code, r) = run(r#"{"command": "counterexample", "tail": {"table": [0, [0, -1], 1], "rule": {"constant": 1}}}"#);
    assert_eq!(code, 2, "{r}");
    assert_eq!(r["verdict"], "divergent");

    let (code, r) = run(r#"{"command": "counterexample", "options": {"m": 9}}"#);
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "options.m");
}

#[test]
fn counterexample_bisection() {
    let (code, r) = run(r#"{"command": "counterexample", "options": {"m": 10, "depth": 3}, "functions": [[0, 0, 1, 1, 2, 2, 3, 3]]}"#);
    assert_eq!(code, 0);
    assert_eq!(r["bisection"]["sets"], serde_json::json!([["5", "6", "7", "8"], ["3", "4"]]));
    assert_eq!(r["bisection"]["constant_remainder"], true);
}

#[test]
fn schur_examples() {
    let p = r#"{"rows": 2, "cols": 2, "entries": [[2, 0], [0, 0]]}"#;
    let (code, r) = run(&schur("dihedral4:std2", None, p));
    assert_eq!(code, 0);
    assert_eq!(r["mu"], serde_json::json!([1.0, 0.0]));
    assert!(r["deviation"].as_f64().unwrap() < 1e-12);

    let (code, r) = run(&schur("o2:1", Some(5), p));
    assert_eq!(code, 0);
    let mu = &r["mu"];
    assert!((mu[0].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let (code, r) = run(&schur("circle-sum:1", None, p));
    assert_eq!(code, 2);
    assert_eq!(r["commutant_dim"], 2);
    assert_eq!(r["verdict"], "hypotheses_not_met");

    let indefinite = r#"{"rows": 2, "cols": 2, "entries": [[0, 1], [1, 0]]}"#;
    let (code, r) = run(&schur("dihedral4:std2", None, indefinite));
    assert_eq!(code, 64);
    assert_eq!(r["error"]["pointer"], "form");
}

#[test]
fn tol_overrides_and_job_file() {
    let out = indalg(&certify("dihedral4:std2", &[E11, E22]), &["--tol", "residual=-1"]);
    assert_eq!(out.status.code(), Some(64));

    let dir = std::env::temp_dir().join(format!("indalg-job-{}", std::process::id()));
    std::fs::write(&dir, certify("quaternion8:std2", &[E11, E22])).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_indalg"))
        .args(["--job", dir.to_str().unwrap(), "--tol", "residual=1e-7"])
        .output()
        .unwrap();
    std::fs::remove_file(&dir).ok();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("verdict: self_adjoint"));

    let out = Command::new(env!("CARGO_BIN_EXE_indalg"))
        .args(["--job", "/nonexistent/job.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn reports_are_deterministic() {
    let job = certify("symmetric3:std2", &[E11, E22]);
    let a = indalg(&job, &[]);
    let b = indalg(&job, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
