use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodal-quartic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn generate(dir: &Path, seed: &str, p: &str) -> Output {
    run(&["generate", "--seed", seed, "--p", p, "--out", dir.to_str().unwrap()])
}

fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] <= w[1]) && m.values().all(keys_sorted)
        }
        Value::Array(a) => a.iter().all(keys_sorted),
        _ => true,
    }
}

#[test]
fn generate_is_byte_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(generate(a.path(), "1", "11").status.code(), Some(0));
    assert_eq!(generate(b.path(), "1", "11").status.code(), Some(0));
    for name in ["quartic_p11_seed1.txt", "quartic_p11_seed1.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn generated_instance_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let gen = generate(dir.path(), "1", "11");
    assert_eq!(gen.status.code(), Some(0));
    let report = stdout_json(&gen);
    assert_eq!(report["field"], "GF(11^2)");
    assert_eq!(report["schema"], "nodal-quartic/generate/v1");
    assert_eq!(report["nodes"].as_array().unwrap().len(), 12);
    assert_eq!(report["defect"], 1);
    assert!(keys_sorted(&report));

    let input = dir.path().join("quartic_p11_seed1.txt");
    let out = run(&["analyze", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let a = stdout_json(&out);
    assert_eq!(a["s"], 12);
    assert_eq!(a["defect"], 1);
    assert_eq!(a["field"], "GF(11^2)");
    assert_eq!(a["verdict"]["theorem_path"], "ExceptionCase");
    assert!(keys_sorted(&a));

    let v = stdout_json(&run(&["verdict", "--input", input.to_str().unwrap()]));
    assert_eq!(v["verdict"]["theorem_path"], "ExceptionCase");
    assert_eq!(v["schema"], "nodal-quartic/verdict/v1");
}

#[test]
fn supplied_points_are_certified() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    fs::write(&f, "field p=13\nF: x0^4 + x1^4 + x2^4 + x3^4 + x4^4\n").unwrap();
    let pts = dir.path().join("pts.txt");
    fs::write(&pts, "1,0,0,0,0\n").unwrap();
    let out = run(&["analyze", "--input", f.to_str().unwrap(), "--points", pts.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["analyze", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let a = stdout_json(&out);
    assert_eq!(a["s"], 0);
    assert_eq!(a["verdict"]["theorem_path"], "QFactorial");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["analyze", "--input", "/nonexistent/f.txt"]).status.code(), Some(1));
    assert_eq!(generate(dir.path(), "1", "2").status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "field p=11\nF: x0^4 + * x1\n").unwrap();
    assert_eq!(run(&["analyze", "--input", bad.to_str().unwrap()]).status.code(), Some(1));

    let p2 = dir.path().join("p2.txt");
    fs::write(&p2, "F: x0^4 + x1^4\n").unwrap();
    assert_eq!(run(&["analyze", "--input", p2.to_str().unwrap(), "--field", "p=2"]).status.code(), Some(1));

    let big = dir.path().join("big.txt");
    fs::write(&big, "field p=11\nF: x0^4 + x1^4 + x2^4 + x3^4 + x4^4\n").unwrap();
    let out = run(&["analyze", "--input", big.to_str().unwrap(), "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn audits() {
    let b = stdout_json(&run(&["audit", "bese"]));
    assert_eq!(b["schema"], "nodal-quartic/audit-bese/v1");
    assert_eq!(b["instances"][0]["rho"], 35);
    assert!(keys_sorted(&b));

    let l = stdout_json(&run(&["audit", "lattice"]));
    assert_eq!(l["audit"]["fixes_e"], true);
    assert_eq!(l["audit"]["expansion"]["c0"], -124);

    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("gram.json");
    fs::write(&g, "[[6,0,2],[0,-2,1],[2,1,-2]]").unwrap();
    let custom = stdout_json(&run(&["audit", "lattice", "--gram", g.to_str().unwrap()]));
    assert_eq!(custom["audit"]["gram"][0][0], 6);

    fs::write(&g, "[[6,1,2],[0,-2,1],[2,1,-2]]").unwrap();
    assert_eq!(run(&["audit", "lattice", "--gram", g.to_str().unwrap()]).status.code(), Some(1));
}
