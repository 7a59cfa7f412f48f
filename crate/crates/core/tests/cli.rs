use std::path::PathBuf;
use std::process::{Command, Output};

use poisson_forge::report::{Report, Status};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poisson-forge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("poisson-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn goldens() {
    let o = bin(&["bracket", "X2", "X1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-3*X1*X2");

    let o = bin(&["nf", "X3^2", "--alpha", "a"]);
    assert_eq!(stdout(&o).trim(), "2*alpha + 3*x1*x4 + x2*x5 - 2*x1*x3*x5");

    let o = bin(&["nf", "X3^2", "--alpha", "1", "--beta", "0"]);
    assert_eq!(stdout(&o).trim(), "2 + 3*x1*x4 + x2*x5 - 2*x1*x3*x5");

    let o = bin(&["bracket", "X6", "X5^-1"]);
    assert_eq!(stdout(&o).trim(), "3*X5^-1*X6");

    let o = bin(&["eta"]);
    assert_eq!(stdout(&o), "eta2: undefined\neta3: 2\neta4: 6\neta5: 2\neta6: 6\n");
}

#[test]
fn casimir_suite_has_twelve_items() {
    let o = bin(&["verify", "casimir", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.passed());
    assert_eq!(r.suites.len(), 1);
    assert_eq!(r.suites[0].items.len(), 12);
    let labels: Vec<&str> = r.suites[0].items.iter().map(|i| i.label.as_str()).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    assert_eq!(labels, sorted);
}

#[test]
fn text_and_json_agree_and_are_deterministic() {
    let a = bin(&["verify", "torus", "jacobi", "--seed", "5"]);
    let b = bin(&["verify", "torus", "jacobi", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let j = bin(&["verify", "torus", "jacobi", "--seed", "5", "--format", "json"]);
    let r: Report = serde_json::from_str(&stdout(&j)).unwrap();
    let text = stdout(&a);
    for s in &r.suites {
        for i in &s.items {
            assert!(text.contains(&format!("  {} {}", i.status, i.label)), "{}", i.label);
        }
    }
    let back = serde_json::to_string_pretty(&r).unwrap();
    assert_eq!(back.trim(), stdout(&j).trim());
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(bin(&["bracket", "X2 +", "X1"]).status.code(), Some(2));
    assert_eq!(bin(&["bracket", "X9", "X1"]).status.code(), Some(2));
    assert_eq!(bin(&["decompose", "--file", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));

    let bad_schema = scratch("bad.json", r#"{"rank": 2, "lambda": [[0, 1], [-1, 0]], "extra": 1}"#);
    assert_eq!(bin(&["decompose", "--file", bad_schema.to_str().unwrap()]).status.code(), Some(2));

    // a one-coefficient change in the table breaks Jacobi
    let mut alg: serde_json::Value = serde_json::from_str(poisson_forge::schema::ALGEBRA_A_JSON).unwrap();
    alg["brackets"]["3,1"] = "-X1*X3 - 2*X2".into();
    alg.as_object_mut().unwrap().remove("sigma");
    alg.as_object_mut().unwrap().remove("delta");
    let p = scratch("mutated.json", &alg.to_string());
    let o = bin(&["verify", "jacobi", "--algebra", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fail jacobi"));
}

#[test]
fn decompose_file() {
    let p = scratch("rank2.json", r#"{"rank": 2, "lambda": [[0, 1], [-1, 0]], "images": {"t1": "t1*t2", "t2": "0"}}"#);
    let o = bin(&["decompose", "--file", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "gamma = -t2\ntheta(t1) = 0\ntheta(t2) = 0\n");

    let bad = scratch("notder.json", r#"{"rank": 2, "lambda": [[0, 1], [-1, 0]], "images": {"t1": "t2", "t2": "0"}}"#);
    assert_eq!(bin(&["decompose", "--file", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn chain_dump() {
    let o = bin(&["chain"]);
    let s = stdout(&o);
    assert!(s.starts_with("# level 6 (variables are the level-7 generators)\n"));
    assert!(s.contains("X_{3,6} = X3 - X5^2*X6^-1"));
    assert!(s.contains("X_{1,3} = -1/2*X2*X3^-1 + X1"));
    assert_eq!(s.matches("# level").count(), 5);
}

#[test]
fn thread_cap_and_timing() {
    let o = Command::new(env!("CARGO_BIN_EXE_poisson-forge"))
        .args(["verify", "casimir", "grading", "--timing", "--format", "json"])
        .env("POISSON_FORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.suites.iter().all(|s| s.timing_ms.is_some() && s.status == Status::Pass));
}
