use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sign-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// `(re, im)` rows of a CSV emitted by the tool.
fn csv_points(text: &str) -> Vec<(f64, f64, String)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,tag"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.splitn(3, ',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string())
        })
        .collect()
}

fn close(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    (a.0 - b.0).hypot(a.1 - b.1) <= tol
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn normalize_examples() {
    let o = run(&["normalize", "--k", "+-", "--l", "-+"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "--\n");
    assert_eq!(stdout(&run(&["normalize", "--k", "+", "--l", "+"])), "+\n");
    let o = run(&["normalize", "--periodic", "--k", "+", "--l", "-"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("--"));
    assert!(text.contains("period doubled"));
}

#[test]
fn spectrum_finite_examples() {
    let pts = csv_points(&stdout(&run(&["spectrum", "--mode", "finite", "--k", "+"])));
    assert_eq!(pts.len(), 2);
    assert!(close((pts[0].0, pts[0].1), (-1.0, 0.0), 1e-10));
    assert!(close((pts[1].0, pts[1].1), (1.0, 0.0), 1e-10));
    assert!(pts.iter().all(|p| p.2 == "fin:n=1"));

    let pts = csv_points(&stdout(&run(&["spectrum", "--k", "++"])));
    let s = 2f64.sqrt();
    let expect = [(-s, 0.0), (0.0, 0.0), (s, 0.0)];
    assert_eq!(pts.len(), 3);
    for (p, e) in pts.iter().zip(expect) {
        assert!(close((p.0, p.1), e, 1e-10), "{p:?}");
    }
}

#[test]
fn spectrum_periodic_example() {
    let o = run(&["spectrum", "--mode", "periodic", "--k", "-", "--samples", "5"]);
    assert!(o.status.success());
    let pts = csv_points(&stdout(&o));
    assert_eq!(pts.len(), 10);
    assert!(pts.iter().all(|p| p.0.abs() < 1e-12 && p.1.abs() <= 2.0 + 1e-12));
    assert!(pts.iter().all(|p| p.2.starts_with("per:m=2:")));
}

#[test]
fn spectrum_json_and_svg_files() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("s.json");
    let o = run(&["spectrum", "--k", "++", "--out", json_path.to_str().unwrap()]);
    assert!(o.status.success());
    let v = read_json(&json_path);
    assert_eq!(v["params"]["k"], "++");
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    for key in ["re", "im", "tag"] {
        assert!(v["points"][0].get(key).is_some());
    }

    let svg_path = dir.path().join("s.svg");
    assert!(run(&["spectrum", "--k", "+-+", "--out", svg_path.to_str().unwrap()]).status.success());
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<circle").count(), 4);
    assert!(svg.contains(r#"viewBox="-2.2 -2.2 4.4 4.4""#));
}

#[test]
fn manifest_lists_output_digest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    assert!(run(&["enumerate", "--n", "3", "--out", path.to_str().unwrap()]).status.success());
    let manifest = read_json(&dir.path().join("e.csv.manifest.json"));
    assert_eq!(manifest["command"], "enumerate");
    assert_eq!(manifest["params"]["n"], 3);
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    let bytes = fs::read(&path).unwrap();
    assert_eq!(outputs[0]["sha256"], sign_spectra::io::sha256_hex(&bytes));
    assert_eq!(outputs[0]["bytes"], bytes.len());
}

#[test]
fn enumerate_examples() {
    let o = run(&["enumerate", "--n", "1"]);
    assert!(o.status.success());
    let one = csv_points(&stdout(&o));
    assert_eq!(one.len(), 4);
    for e in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
        assert!(one.iter().any(|p| close((p.0, p.1), e, 1e-10)));
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("4 points"));

    let two = csv_points(&stdout(&run(&["enumerate", "--n", "2", "--accumulate"])));
    assert_eq!(two.len(), 4 + 4 * 3);
    for p in &one {
        assert!(two.iter().any(|q| q.0 == p.0 && q.1 == p.1 && q.2 == p.2));
    }

    let dedup = csv_points(&stdout(&run(&["enumerate", "--n", "2", "--accumulate", "--dedup"])));
    assert!(dedup.len() < two.len());
}

#[test]
fn enumerate_cap() {
    assert_eq!(run(&["enumerate", "--n", "17"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--n", "5", "--cap", "4"]).status.code(), Some(2));
    assert!(run(&["enumerate", "--n", "5", "--cap", "5", "--canonical"]).status.success());
}

#[test]
fn embed_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("emb.json");
    let o = run(&["embed", "--k", "+", "--n", "4", "--witness", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(&path);
    assert_eq!(v["l"], "++");
    assert_eq!(v["verified"], true);
    let targets = v["targets"].as_array().unwrap();
    assert_eq!(targets.len(), 2);
    assert!(targets.iter().all(|t| t["re"].as_f64().unwrap().abs() < 1e-12));
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 2);

    let v: Value = serde_json::from_str(&stdout(&run(&["embed", "--k", "+", "--n", "3"]))).unwrap();
    assert_eq!(v["l"], "+");
    assert_eq!(v["verified"], true);
    for t in v["targets"].as_array().unwrap() {
        assert!((t["re"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    }

    let o = run(&["embed", "--k", "+-", "--n", "4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["m"], 4);
    assert_eq!(v["k"], "+-+-");
    assert_eq!(v["verified"], true);
}

#[test]
fn embed_rejects_small_n() {
    assert_eq!(run(&["embed", "--k", "+", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn embed_reports_verification_failure() {
    // an absurdly small tolerance cannot be met by rounded targets
    let o = run(&["embed", "--k", "+-++", "--n", "7", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verified"], false);
}

#[test]
fn density_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let o = run(&["density", "--max-n", "4", "--max-m", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(&path);
    let per_n: Vec<f64> = v["per_n"].as_object().unwrap().values().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(per_n.len(), 3);
    assert!(per_n.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert_eq!(v["monotone"], true);
    assert!(v.get("timing").is_none());
    let manifest = read_json(&dir.path().join("d.json.manifest.json"));
    assert!(manifest["timing"]["finite_secs"].is_number());

    let o = run(&["density", "--max-n", "2", "--max-m", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["per_n"].as_object().unwrap().len(), 1);
    assert_eq!(v["finite_points"]["2"], 16);
}

#[test]
fn density_invalid_caps() {
    assert_eq!(run(&["density", "--max-n", "4", "--max-m", "11"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--max-n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--max-n", "20"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["spectrum", "--k", "+x"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--k", ""]).status.code(), Some(2));
    assert_eq!(run(&["normalize", "--k", "++", "--l", "+"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--mode", "periodic", "--k", "+", "--samples", "1"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--k", "+", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn io_errors() {
    let o = run(&["spectrum", "--k", "+", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, Vec<&str>); 4] = [
        ("a.csv", vec!["enumerate", "--n", "6", "--accumulate"]),
        ("b.json", vec!["spectrum", "--mode", "periodic", "--k", "+-+", "--samples", "33"]),
        ("c.json", vec!["embed", "--k", "+--", "--n", "5", "--witness"]),
        ("d.json", vec!["density", "--max-n", "5", "--max-m", "2", "--samples", "17"]),
    ];
    for (name, args) in cases {
        let mut contents = Vec::new();
        for (i, threads) in ["1", "3"].iter().enumerate() {
            let path = dir.path().join(format!("{i}-{name}"));
            let mut full = args.clone();
            full.extend(["--threads", threads, "--out", path.to_str().unwrap()]);
            assert!(run(&full).status.success(), "{full:?}");
            contents.push(fs::read(&path).unwrap());
        }
        assert_eq!(contents[0], contents[1], "{name}");
    }
}
