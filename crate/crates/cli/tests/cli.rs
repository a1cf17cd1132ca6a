use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn pqsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pqsp"))
        .args(args)
        .env_remove("PQSP_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn monomial_doc(c: &[f64]) -> String {
    let body: Vec<String> = c.iter().map(|v| format!("[{v},0]")).collect();
    format!("{{\"coeffs\":[{}]}}", body.join(","))
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn reported_residual(err: &str) -> f64 {
    let tail = err.split("residual = ").nth(1).expect("residual in summary");
    tail.split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn factor_square_gives_one_linear_factor() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "x2.json", &monomial_doc(&[0.0, 0.0, 1.0]));
    let o = pqsp(&["factor", "--poly", s(&poly), "--k", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let plan: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let factors = plan["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 1);
    let c: Vec<f64> = factors[0]["coeffs"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap()).collect();
    assert_eq!(c.len(), 2);
    assert!(c[0].abs() < 1e-12 && (c[1].abs() - 1.0).abs() < 1e-12, "{c:?}");
}

#[test]
fn factor_degree_twelve_into_three() {
    let dir = TempDir::new().unwrap();
    let q1 = [0.4, 0.5, -0.3, 0.2, -0.1, 0.4, 0.25];
    let q2 = [0.3, -0.2, 0.1, 0.35, -0.15, 0.05, -0.3];
    let p: Vec<f64> = mul(&q1, &q1).iter().zip(mul(&q2, &q2)).map(|(a, b)| a + b).collect();
    let poly = write(&dir, "p.json", &monomial_doc(&p));
    let out = dir.path().join("plan.json");
    let o = pqsp(&["factor", "--poly", s(&poly), "--k", "3", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(reported_residual(&stderr(&o)) <= 1e-6, "{}", stderr(&o));
    let plan = read_json(&out);
    assert_eq!(plan["factors"].as_array().unwrap().len(), 3);
    assert!(plan["K"].as_f64().unwrap() >= 1.0 - 1e-12);
}

#[test]
fn factor_rejects_odd_degree() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "x3.json", &monomial_doc(&[0.0, 0.0, 0.0, 1.0]));
    assert_eq!(code(&pqsp(&["factor", "--poly", s(&poly)])), 2);
}

#[test]
fn phases_for_identity_and_chebyshev() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &monomial_doc(&[0.0, 1.0]));
    let o = pqsp(&["phases", "--poly", s(&x)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let ph: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(ph["residual"].as_f64().unwrap_or(0.0) <= 1e-10);

    let t8 = write(&dir, "t8.json", r#"{"basis":"chebyshev","coeffs":[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}"#);
    let out = dir.path().join("t8_phases.json");
    let o = pqsp(&["phases", "--poly", s(&t8), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(read_json(&out)["residual"].as_f64().unwrap_or(0.0) <= 1e-4);
}

#[test]
fn phases_reject_oversized_target() {
    let dir = TempDir::new().unwrap();
    let big = write(&dir, "big.json", r#"{"basis":"chebyshev","coeffs":[[0,0],[0,0],[0,0],[0,0],[1.2,0]]}"#);
    let o = pqsp(&["phases", "--poly", s(&big)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("rescale"), "{}", stderr(&o));
}

#[test]
fn renyi_six_exact() {
    let o = pqsp(&["estimate", "--property", "renyi", "--alpha", "6", "--k", "2", "--state", "diag(0.75,0.25)"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("0.3449"), "{}", stdout(&o));
}

fn strip_duration(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("duration_seconds");
    v["config"].as_object_mut().unwrap().remove("out");
    v["config"].as_object_mut().unwrap().remove("csv");
    v
}

#[test]
fn sampled_runs_reproduce_and_replay() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    let csv = dir.path().join("a.csv");
    let base = ["estimate", "--property", "renyi", "--alpha", "6", "--k", "2", "--state", "diag(0.75,0.25)"];
    let run = |out: &Path, extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(&["--shots", "100000", "--seed", "7", "--out", s(out)]);
        args.extend_from_slice(extra);
        let o = pqsp(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    };
    run(&a, &["--csv", s(&csv)]);
    run(&b, &[]);
    assert_eq!(strip_duration(read_json(&a)), strip_duration(read_json(&b)));

    let o = pqsp(&["estimate", "--config", s(&a), "--out", s(&c)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(strip_duration(read_json(&a)), strip_duration(read_json(&c)));

    let value = read_json(&a)["report"]["value"].as_f64().unwrap();
    let se = read_json(&a)["report"]["std_error"].as_f64().unwrap();
    assert!((value - 0.3449443).abs() < 5.0 * se + 1e-9, "{value} ± {se}");

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,label,value,std_error,shots,threads,terms"));
    assert!(lines.next().unwrap().starts_with("estimate,renyi_integer,"));
}

#[test]
fn seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let run = |seed: &str, name: &str| {
        let out = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_pqsp"))
            .args(["estimate", "--property", "renyi", "--alpha", "3", "--shots", "2000", "--state", "diag(0.75,0.25)"])
            .args(["--out", s(&out)])
            .env("PQSP_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        read_json(&out)
    };
    let a = run("11", "a.json");
    let b = run("11", "b.json");
    let c = run("12", "c.json");
    assert_eq!(a["config"]["seed"], 11);
    assert_eq!(a["report"], b["report"]);
    assert_ne!(a["report"]["value"], c["report"]["value"]);
}

#[test]
fn von_neumann_of_maximally_mixed_qubit() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("vn.json");
    let o = pqsp(&["estimate", "--property", "von-neumann", "--state", "maximally_mixed(2)", "--epsilon", "0.01", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = read_json(&out)["report"]["value"].as_f64().unwrap();
    assert!((v - std::f64::consts::LN_2).abs() <= 0.01, "{v}");
}

#[test]
fn estimate_usage_errors() {
    assert_eq!(code(&pqsp(&["estimate", "--property", "renyi"])), 2);
    assert_eq!(code(&pqsp(&["estimate", "--property", "partition"])), 2);
    assert_eq!(code(&pqsp(&["estimate", "--property", "trace"])), 2);
    assert_eq!(code(&pqsp(&["estimate", "--property", "renyi", "--alpha", "2", "--state", "wobble(3)"])), 2);
    assert_eq!(code(&pqsp(&["estimate", "--property", "renyi", "--alpha", "2", "--mode", "exact", "--shots", "5"])), 2);
    assert_eq!(code(&pqsp(&["estimate", "--property", "renyi", "--alpha", "1"])), 2);
    assert_eq!(code(&pqsp(&["estimate"])), 2);
}

#[test]
fn config_with_unknown_field_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"property":{"kind":"von_neumann"},"state":{"pure":2},"k":2,"epsilon":0.01,"shots":"exact","seed":0,"colour":1}"#,
    );
    assert_eq!(code(&pqsp(&["estimate", "--config", s(&cfg)])), 2);
    let ok = write(
        &dir,
        "ok.json",
        r#"{"property":{"kind":"partition","beta":1.0},"state":{"maximally_mixed":2},"k":2,"epsilon":0.001,"shots":"exact","seed":0}"#,
    );
    let o = pqsp(&["estimate", "--config", s(&ok)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("1.213061"), "{}", stdout(&o));
}

#[test]
fn cost_routes() {
    let o = pqsp(&["cost", "--route", "factored", "--epsilon", "0.1", "--k-constant", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("predicted shots: 100"), "{}", stdout(&o));
    let o = pqsp(&["cost", "--route", "partition", "--epsilon", "0.05", "--beta", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("predicted shots: 2956"), "{}", stdout(&o));
    assert_eq!(code(&pqsp(&["cost", "--route", "factored", "--epsilon", "0.1"])), 2);
    assert_eq!(code(&pqsp(&["cost", "--route", "nonsense", "--epsilon", "0.1"])), 2);
}

#[test]
fn simulate_factor_plan() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", &monomial_doc(&[0.0, 0.0, 1.0, 0.0, 1.0]));
    let plan = dir.path().join("plan.json");
    assert_eq!(code(&pqsp(&["factor", "--poly", s(&poly), "--k", "2", "--out", s(&plan)])), 0);
    let o = pqsp(&["simulate", "--state", "diag(0.75,0.25)", "--plan", s(&plan)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // tr(rho^k R(rho)) with k = 2
    let exact: f64 = [0.75_f64, 0.25].iter().map(|p| p * p * (p.powi(2) + p.powi(4))).sum();
    assert!((r["value"].as_f64().unwrap() - exact).abs() < 1e-10, "{r}");
    assert_eq!(r["width"], 2);

    let o = pqsp(&["simulate", "--state", "diag(0.75,0.25)", "--plan", s(&plan), "--shots", "20000", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let (v, se) = (r["value"].as_f64().unwrap(), r["std_error"].as_f64().unwrap());
    assert!((v - exact).abs() < 5.0 * se, "{v} ± {se} vs {exact}");
}

#[test]
fn validate_suites() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("v.json");
    let o = pqsp(&["validate", "--suite", "swap", "--dims", "2..8", "--k", "2..5", "--json", s(&json)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = read_json(&json);
    assert_eq!(v["passed"], 28);
    assert_eq!(v["failed"], 0);

    let o = pqsp(&["validate", "--suite", "swap", "--dims", "2,4", "--k", "2", "--inject-fault"]);
    assert_eq!(code(&o), 1);

    let o = pqsp(&["validate"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(serde_json::from_str::<Value>(&stdout(&o)).unwrap()["failed"], 0);

    assert_eq!(code(&pqsp(&["validate", "--suite", "nonsense"])), 2);
}
