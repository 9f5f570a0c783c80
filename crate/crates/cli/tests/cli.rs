use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

fn qmc_in(dir: &Path, args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_qmc"))
        .args(args)
        .current_dir(dir)
        .env_remove("QMC_TOLERANCE")
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exited normally"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) {
        std::fs::write(self.path(name), text).unwrap();
    }

    fn run(&self, args: &[&str]) -> Run {
        qmc_in(self.dir.path(), args)
    }

    fn ok(&self, args: &[&str]) -> Run {
        let r = self.run(args);
        assert_eq!(r.code, 0, "qmc {args:?} failed: {}", r.stderr);
        r
    }

    fn gen(&self, name: &str, args: &[&str]) {
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--out", name, "-q"]);
        self.ok(&full);
    }
}

#[test]
fn validate_exit_codes() {
    let w = Workspace::new();
    w.gen("cycle.txt", &["cycle", "--n", "8"]);
    let r = w.ok(&["validate", "cycle.txt"]);
    let v = r.json();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "validate");
    assert_eq!(v["report"]["passed"], true);

    w.write("broken.txt", "3\n0 1 5\n1 0 1\n1 1 0\n");
    let r = w.run(&["validate", "broken.txt"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["report"]["violation_count"], 1);
    assert!(r.stderr.contains("rho(0, 2) = 5"));

    w.write("inf.txt", "2\n0 inf\n1 0\n");
    let r = w.run(&["validate", "inf.txt"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--relaxed"));
    assert_eq!(w.run(&["--relaxed", "validate", "inf.txt"]).code, 0);

    assert_eq!(w.run(&["validate", "missing.txt"]).code, 2);
    assert_eq!(w.run(&["cover", "cycle.txt"]).code, 2, "missing --alpha is a usage error");
}

#[test]
fn tolerance_comes_from_the_environment() {
    let w = Workspace::new();
    w.write("slightly.txt", "3\n0 1 2.0000001\n1 0 1\n1 1 0\n");
    assert_eq!(w.run(&["validate", "slightly.txt"]).code, 1);
    let out = Command::new(env!("CARGO_BIN_EXE_qmc"))
        .args(["validate", "slightly.txt", "-q"])
        .current_dir(w.dir.path())
        .env("QMC_TOLERANCE", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(w.run(&["--tolerance", "-1", "validate", "slightly.txt"]).code, 2);
}

#[test]
fn line_covers() {
    let w = Workspace::new();
    w.gen("line.txt", &["line", "--n", "8"]);
    let base = ["--relaxed", "cover", "line.txt", "--alpha", "1", "--direction", "inner"];
    let greedy = w.ok(&[&base[..], &["--compare"]].concat()).json();
    assert_eq!(greedy["size"], 4);
    assert_eq!(greedy["exact_optimum"], 4);
    assert_eq!(greedy["verified"], true);
    assert!(greedy["distance_evaluations"].as_u64().unwrap() <= 64);

    let arbitrary = w.ok(&[&base[..], &["--algo", "arbitrary"]].concat()).json();
    assert_eq!(arbitrary["size"], 8);

    let eps = w.ok(&[&base[..], &["--eps", "0.5"]].concat()).json();
    assert_eq!(eps["size"], 2);
    assert_eq!(eps["uncovered"].as_array().unwrap().len(), 4);

    // the iterated schedule starts from the diameter, which is infinite here
    assert_eq!(w.run(&[&base[..], &["--algo", "iterated", "--lambda", "2"]].concat()).code, 1);
    w.gen("cycle.txt", &["cycle", "--n", "16"]);
    let iterated = w.ok(&["cover", "cycle.txt", "--alpha", "12", "--algo", "iterated", "--lambda", "2"]).json();
    assert_eq!(iterated["verified"], true);

    assert_eq!(w.run(&[&base[..], &["--algo", "arbitrary", "--eps", "0.5"]].concat()).code, 2);
    assert_eq!(w.run(&[&base[..], &["--eps", "0.9"]].concat()).code, 2);
}

#[test]
fn edge_list_round_trip() {
    let w = Workspace::new();
    w.gen("c.edges", &["cycle", "--n", "6", "--output-format", "edges"]);
    w.gen("c.txt", &["cycle", "--n", "6"]);
    let a = w.ok(&["dimension", "c.edges", "-q"]).json();
    let b = w.ok(&["dimension", "c.txt", "-q"]).json();
    assert_eq!(a, b);
}

#[test]
fn backedge_line_constants() {
    let w = Workspace::new();
    w.gen("be.txt", &["backedge-line", "--n", "8"]);
    let v = w.ok(&["dimension", "be.txt", "--method", "exact"]).json();
    let est = v["estimates"].as_array().unwrap();
    assert_eq!(est[0]["constant"], "outer");
    assert!(est[0]["value"].as_u64().unwrap() <= 4);
    assert_eq!(est[1]["constant"], "inner");
    assert_eq!(est[1]["value"], 8);
    assert!(est[1]["estimate"]["per_ball"].as_array().is_some_and(|b| !b.is_empty()));
}

#[test]
fn train_predict_round_trip() {
    let w = Workspace::new();
    w.ok(&["gen", "margin-example", "--out", "m.txt", "--labels", "m.lab", "--spec", "m.json", "-q"]);
    let spec: Value = serde_json::from_str(&std::fs::read_to_string(w.path("m.json")).unwrap()).unwrap();
    assert_eq!(spec["spec"]["kind"], "margin-example");

    let r = w.ok(&["train", "m.txt", "--labels", "m.lab", "--model-out", "model.json"]);
    let v = r.json();
    assert_eq!(v["margins"]["rho_pm"], 1.0);
    assert_eq!(v["margins"]["rho_mp"], 2.0);
    let sizes = v["candidate_sizes"].as_object().unwrap();
    assert_eq!(sizes.len(), 4);
    let min = sizes.values().map(|s| s.as_u64().unwrap()).min().unwrap();
    assert_eq!(v["k"], min);
    assert_eq!(v["training_errors"], 0);
    for name in ["pos-outer", "neg-inner", "pos-inner", "neg-outer"] {
        assert!(r.stderr.contains(name));
    }

    let p = w.ok(&["predict", "m.txt", "--model", "model.json", "--labels", "m.lab"]).json();
    assert_eq!(p["agreement"]["rate"], 1.0);
    assert_eq!(p["agreement"]["total"], 7);
    for pred in p["predictions"].as_array().unwrap() {
        assert_eq!(pred["evaluations"], v["k"]);
    }

    w.write("q.json", r#"[{"from_query": [0, 9, 9, 9, 9, 9, 9], "to_query": [0, "inf", 9, 9, 9, 9, 9]}]"#);
    let q = w.ok(&["predict", "m.txt", "--model", "model.json", "--queries", "q.json"]).json();
    assert_eq!(q["queries"].as_array().unwrap().len(), 1);

    w.write("bad.lab", "0 +1\n1 2\n");
    assert_eq!(w.run(&["train", "m.txt", "--labels", "bad.lab"]).code, 2);
}

#[test]
fn eps_training_reports_agnostic_bound() {
    let w = Workspace::new();
    w.ok(&["gen", "margin-example", "--out", "m.txt", "--labels", "m.lab", "-q"]);
    let v = w.ok(&["train", "m.txt", "--labels", "m.lab", "--eps", "0.5", "-q"]).json();
    assert_eq!(v["bound"]["theorem"], 2);
    let v = w.ok(&["train", "m.txt", "--labels", "m.lab", "--algo", "iterated", "--lambda", "2", "-q"]).json();
    assert_eq!(v["training_errors"], 0);
}

#[test]
fn bound_values() {
    let w = Workspace::new();
    let v = w.ok(&["bound", "--theorem", "1", "--n", "100", "--k", "5", "--delta", "0.05"]).json();
    let expected = (6.0 * 100f64.ln() + 20f64.ln()) / 95.0;
    let got = v["report"]["raw"].as_f64().unwrap();
    assert!((got - expected).abs() <= 1e-11 * expected, "{got} vs {expected}");
    assert!((got - 0.3224).abs() < 1e-4);

    let v = w.ok(&["bound", "--theorem", "2", "--n", "1000", "--k", "10", "--delta", "0.05", "--eps", "0.1"]).json();
    assert_eq!(v["report"]["theorem"], 2);
    let two = w.ok(&["bound", "--theorem", "1", "--n", "100", "--k", "5", "--delta", "0.05", "--log-base", "two"]).json();
    assert!(two["report"]["raw"].as_f64().unwrap() > got);

    assert_eq!(w.run(&["bound", "--theorem", "2", "--n", "100", "--k", "5", "--delta", "0.05"]).code, 2);
    assert_eq!(w.run(&["bound", "--theorem", "1", "--n", "5", "--k", "5", "--delta", "0.05"]).code, 2);
    assert_eq!(w.run(&["bound", "--theorem", "3", "--n", "100", "--k", "5", "--delta", "0.05"]).code, 2);
}

#[test]
fn transforms() {
    let w = Workspace::new();
    w.gen("c8.txt", &["cycle", "--n", "8"]);
    let r = w.ok(&["transform", "c8.txt", "--op", "max"]);
    assert!(r.stdout.starts_with("# transform: max\n8\n"));
    let values: Vec<f64> = r.stdout.lines().skip(2).flat_map(|l| l.split_whitespace().map(|t| t.parse::<f64>().unwrap())).collect();
    assert_eq!(values.len(), 64);
    assert!(values.iter().all(|&x| x == 0.0 || (4.0..=7.0).contains(&x)));

    w.write("max.txt", &r.stdout);
    let d = w.ok(&["dimension", "max.txt", "--constant", "doubling"]).json();
    assert_eq!(d["estimates"][0]["value"], 8);
    assert_eq!(w.run(&["dimension", "c8.txt", "--constant", "doubling"]).code, 1);
    let d = w.ok(&["dimension", "c8.txt", "--constant", "doubling", "--op", "max"]).json();
    assert_eq!(d["estimates"][0]["value"], 8);

    w.write("sym.txt", "3\n0 2 3\n2 0 4\n3 4 0\n");
    let r = w.ok(&["transform", "sym.txt", "--op", "min"]);
    assert_eq!(r.stdout, "# transform: min\n3\n0 2 3\n2 0 4\n3 4 0\n");

    w.gen("mv.txt", &["min-violation"]);
    let r = w.ok(&["transform", "mv.txt", "--op", "min", "--out", "mv-min.txt"]);
    let v = r.json();
    assert_eq!(v["report"]["triangle_violation_count"], 1);
    assert_eq!(v["report"]["triangle_violations"][0]["lhs"], 3.0);
    assert_eq!(v["report"]["triangle_violations"][0]["rhs"], 2.0);
    assert!(w.path("mv-min.txt").exists());
}

#[test]
fn gen_verify_and_query() {
    let w = Workspace::new();
    for args in [
        &["line", "--n", "6"][..],
        &["backedge-line", "--n", "8"],
        &["cycle", "--n", "8"],
        &["hst", "--p", "3"],
        &["spoke", "--p", "3"],
        &["min-violation"],
        &["nn-lower-bound", "--p", "3"],
        &["random-bounded", "--n", "32", "--target", "8"],
        &["margin-example"],
    ] {
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--out", "f.txt", "--verify", "-q"]);
        let r = w.run(&full);
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
        let checks = r.json()["checks"].as_array().unwrap().clone();
        assert!(checks.iter().all(|c| c["status"] != "fails"), "{args:?}");
    }

    let r = w.ok(&["gen", "spoke", "--p", "3", "--out", "s.txt", "--verify", "-q"]);
    assert_eq!(r.json()["n"], 9);

    w.ok(&["gen", "nn-lower-bound", "--p", "3", "--out", "t.txt", "--query", "q.json", "-q"]);
    let q: Value = serde_json::from_str(&std::fs::read_to_string(w.path("q.json")).unwrap()).unwrap();
    assert_eq!(q[0]["to_query"][0], "inf");
    assert_eq!(w.run(&["gen", "cycle", "--n", "4", "--query", "q.json"]).code, 2);
    assert_eq!(w.run(&["gen", "cycle"]).code, 2);
    assert_eq!(w.run(&["gen", "nonsense"]).code, 2);
}

#[test]
fn bench_counters() {
    let w = Workspace::new();
    let v = w.ok(&["bench", "--fixture", "nn-lower-bound", "--p", "10"]).json();
    assert_eq!(v["evaluations"], 1024);
    assert_eq!(v["found"], v["designated_leaf"]);

    let v = w.ok(&["bench", "--cover-scaling", "--sizes", "64,128", "--lambda", "2", "--alpha-fraction", "0.5"]).json();
    assert_eq!(v["within_bounds"], true);
    for row in v["rows"].as_array().unwrap() {
        let n = row["n"].as_u64().unwrap();
        assert!(row["greedy_evaluations"].as_u64().unwrap() <= n * n);
        assert!(row["iterated_evaluations"].as_u64().unwrap() <= row["iterated_budget"].as_u64().unwrap());
    }
    assert_eq!(w.run(&["bench"]).code, 2);
    assert_eq!(w.run(&["bench", "--fixture", "nn-lower-bound"]).code, 2);
}

#[test]
fn output_is_deterministic() {
    let w = Workspace::new();
    w.gen("r.txt", &["random-bounded", "--n", "40", "--seed", "3"]);
    w.write("r.lab", &(0..40).map(|i| format!("{i} {}\n", if i % 3 == 0 { "+1" } else { "-1" })).collect::<String>());
    for args in [
        &["cover", "r.txt", "--alpha", "2.5", "--algo", "iterated"][..],
        &["dimension", "r.txt", "--sampled", "--seed", "5"],
        &["train", "r.txt", "--labels", "r.lab"],
    ] {
        let a = w.run(args);
        let b = w.run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(a.code == 0 || a.code == 1, "{args:?}: {}", a.stderr);
    }
}
