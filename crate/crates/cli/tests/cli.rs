use std::path::Path;
use std::process::{Command, Output};

fn affchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affchar")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn partitions(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p
}

#[test]
fn char_a1_vacuum_entry() {
    let out = affchar(&["char", "--type", "A1", "--level", "1", "--order", "6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["type"], "A1");
    assert_eq!(v["order"], 6);
    let zero = v["entries"].as_array().unwrap().iter().find(|e| e["n"] == serde_json::json!([0])).unwrap();
    let coeffs: Vec<u64> =
        zero["series"]["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().parse().unwrap()).collect();
    assert_eq!(coeffs, partitions(6));
    assert_eq!(zero["series"]["low"], 0);
}

#[test]
fn rank_flag_and_type_errors() {
    let out = affchar(&["char", "--type", "A", "--rank", "2", "--order", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["entries"].as_array().unwrap().len(), 7);
    let out = affchar(&["char", "--type", "D2", "--order", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));
    assert_eq!(code(&affchar(&["char", "--type", "A2", "--rank", "3", "--order", "3"])), 2);
    assert_eq!(code(&affchar(&["char", "--type", "X5", "--order", "3"])), 2);
    assert_eq!(code(&affchar(&["char", "--type", "A2", "--order", "-1"])), 2);
    assert_eq!(code(&affchar(&["char", "--type", "A2"])), 2);
    assert_eq!(code(&affchar(&["char", "--type", "A2", "--level", "2", "--order", "3"])), 2);
}

#[test]
fn non_simply_laced_is_a_scope_error() {
    let out = affchar(&["char", "--type", "B2", "--level", "1", "--order", "4"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not simply laced"));
}

#[test]
fn builtin_identities() {
    let out = affchar(&["verify-identity", "--builtin", "A", "--rank", "2", "--order", "100"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["equal"], true);
    assert_eq!(json(&out)["order_checked"], 100);
    assert_eq!(code(&affchar(&["verify-identity", "--builtin", "D", "--rank", "4", "--order", "100"])), 0);
    assert_eq!(code(&affchar(&["verify-identity", "--builtin", "level1", "--type", "A3", "--order", "60"])), 0);
    assert_eq!(code(&affchar(&["verify-identity", "--builtin", "D", "--type", "A3"])), 2);
    assert_eq!(code(&affchar(&["verify-identity", "--order", "10"])), 2);
}

#[test]
fn identity_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"lhs":[{"a":6,"b":0,"e":4},{"a":2,"b":-1,"e":-1},{"a":6,"b":-3,"e":-1}],"rhs":{"builtin":"D","type":"D4"},"order":80}"#,
    );
    assert_eq!(code(&affchar(&["verify-identity", "--identity", &good])), 0);
    // exponent 4 -> 5 multiplies the product by (1 - q^6) + ...
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"lhs":[{"a":6,"b":0,"e":5},{"a":2,"b":-1,"e":-1},{"a":6,"b":-3,"e":-1}],"rhs":{"builtin":"D","type":"D4"},"order":80}"#,
    );
    let out = affchar(&["verify-identity", "--identity", &bad]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["first_mismatch_exponent"], 6);
    let theta = write(
        dir.path(),
        "theta.json",
        r#"{"lhs":[{"a":2,"b":0,"e":2},{"a":1,"b":0,"e":-1}],"rhs":{"theta":{"matrix":[[2]],"scale":2,"shift":[-1]}},"order":30}"#,
    );
    let out = affchar(&["verify-identity", "--identity", &theta, "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("equal through q^30"));
    let broken = write(dir.path(), "broken.json", "{\"lhs\": 3}");
    assert_eq!(code(&affchar(&["verify-identity", "--identity", &broken])), 2);
    let not_pd = write(
        dir.path(),
        "notpd.json",
        r#"{"lhs":[],"rhs":{"theta":{"matrix":[[-2]],"scale":2,"shift":[0]}},"order":3}"#,
    );
    assert_eq!(code(&affchar(&["verify-identity", "--identity", &not_pd])), 2);
}

#[test]
fn recurrence_on_computed_and_supplied_tables() {
    let out = affchar(&["verify-recurrence", "--type", "E6", "--order", "6"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["pairs_checked"].as_u64().unwrap() > 0);

    let dir = tempfile::tempdir().unwrap();
    let table = affchar(&["char", "--type", "A1", "--order", "10"]);
    let mut v = json(&table);
    let path = write(dir.path(), "table.json", &serde_json::to_string(&v).unwrap());
    assert_eq!(code(&affchar(&["verify-recurrence", "--table", &path])), 0);

    // A(1; q) = q + q^2 + 2q^3 + ...; add 1 to the q^2 coefficient
    let entry = v["entries"].as_array_mut().unwrap().iter_mut().find(|e| e["n"] == serde_json::json!([1])).unwrap();
    entry["series"]["coeffs"][1] = serde_json::json!("2");
    let path = write(dir.path(), "bad.json", &serde_json::to_string(&v).unwrap());
    let out = affchar(&["verify-recurrence", "--table", &path]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["report"]["first_mismatch_exponent"], 2);
    assert_eq!(report["failure"]["point"], serde_json::json!([1]));
}

#[test]
fn seeded_tables() {
    let dir = tempfile::tempdir().unwrap();
    let one = r#"{"low":0,"order":12,"coeffs":["1"]}"#;
    let seeds: Vec<String> =
        [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|n| format!(r#"{{"n":[{},{}],"series":{one}}}"#, n[0], n[1])).collect();
    let path = write(dir.path(), "seeds.json", &format!(r#"{{"seeds":[{}]}}"#, seeds.join(",")));
    let out = affchar(&["char", "--type", "A2", "--level", "2", "--order", "12", "--seed", &path]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let e20 = v["entries"].as_array().unwrap().iter().find(|e| e["n"] == serde_json::json!([2, 0])).unwrap();
    assert_eq!(e20["series"]["low"], 2);
    assert_eq!(code(&affchar(&["verify-recurrence", "--type", "A2", "--level", "2", "--order", "12", "--seed", &path])), 0);

    let partial = write(dir.path(), "partial.json", &format!(r#"{{"seeds":[{}]}}"#, seeds[0]));
    let out = affchar(&["char", "--type", "A2", "--level", "2", "--order", "12", "--seed", &partial]);
    assert_eq!(code(&out), 3);
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let args = ["specialize", "--type", "D4", "--order", "5"];
    let a = affchar(&args);
    let b = affchar(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["principal_certified_order"].as_i64().unwrap() > 0);

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = affchar(&["specialize", "--type", "D4", "--order", "5", "--output", target.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), a.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
