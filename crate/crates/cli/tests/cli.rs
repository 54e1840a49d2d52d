use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn flipzeros(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flipzeros"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn theorem1_writes_csv_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = flipzeros(&["theorem1", "--n", "12", "--trials", "30", "--seed", "5", "--out", path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("theorem1.csv")).unwrap();
    assert!(csv.starts_with("trial,seed,V,N_real,N_curve,ratio,excluded\n"));
    assert_eq!(csv.lines().count(), 31);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("theorem1_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n"], 12);
    assert!(summary["note"].as_str().unwrap().contains("supremum"));

    let csv_path = dir.path().join("theorem1.csv");
    let ok = flipzeros(&["verify-csv", path(&csv_path)]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));

    // alter one ratio
    let mut lines: Vec<String> = csv.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[4].split(',').map(String::from).collect();
    fields[5] = "9.5".into();
    lines[4] = fields.join(",");
    fs::write(&csv_path, lines.join("\n") + "\n").unwrap();
    let bad = flipzeros(&["verify-csv", path(&csv_path)]);
    assert_eq!(code(&bad), 3);
}

#[test]
fn outputs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (d, workers) in [(&a, "1"), (&b, "3")] {
        let out = flipzeros(&[
            "theorem1", "--n", "20", "--trials", "25", "--seed", "77", "--workers", workers, "--out", path(d.path()),
        ]);
        assert_eq!(code(&out), 0);
        let out = flipzeros(&["theorem2", "--n", "6", "--seed", "77", "--out", path(d.path())]);
        assert_eq!(code(&out), 0);
    }
    for f in ["theorem1.csv", "theorem1_summary.json", "theorem2.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "trials = 3\nno_such_key = 1\n").unwrap();
    assert_eq!(code(&flipzeros(&["theorem1", "--config", path(&cfg)])), 2);
    assert_eq!(code(&flipzeros(&["theorem1", "--n", "1", "--trials", "3"])), 2);
    assert_eq!(code(&flipzeros(&["theorem1", "--config", "/nonexistent/x.toml"])), 2);
    assert_eq!(code(&flipzeros(&["theorem1", "--format", "xml"])), 2);

    let median = dir.path().join("median.toml");
    fs::write(
        &median,
        "trials = 10\n[model]\nkind = \"median\"\na = 0.0\npairs = [[1.0, -1.0], [2.0, -2.0], [1.0, -1.0]]\n",
    )
    .unwrap();
    assert_eq!(code(&flipzeros(&["corollary-v", "--config", path(&median)])), 2);
}

#[test]
fn config_file_drives_theorem2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t2.toml");
    fs::write(
        &cfg,
        r#"
master_seed = 1
[model]
kind = "symmetric"
magnitudes = { law = "constant", value = 1.0 }
n = 8

[theorem2]
m = 2
interval = [0.0, 1.0]
r = 1.0
c_candidate = 1.0
"#,
    )
    .unwrap();
    let out = flipzeros(&["theorem2", "--config", path(&cfg), "--out", path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("theorem2.json")).unwrap()).unwrap();
    assert_eq!(rep["sequences"], 512);
    assert_eq!(rep["histogram"]["counts"].as_array().unwrap().len(), 64);
    assert!(rep["candidate"]["fraction"].is_number());
    assert!(rep["f_at_c_star"].as_f64().unwrap() <= 0.25);
}

#[test]
fn polynomial_tools() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("p.txt");
    // x² − 1
    fs::write(&poly, "-1 0\n0 0\n1 0\n").unwrap();
    let out = flipzeros(&["zeros", path(&poly)]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["N_real"], 2);
    assert_eq!(v[0]["roots"].as_array().unwrap().len(), 2);
    assert_eq!(v[0]["curves"][0]["count"]["count"], 2);

    let out = flipzeros(&["vcount", path(&poly)]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["polygon"]["V"], 2);

    let json = dir.path().join("p.json");
    fs::write(&json, "[[1.0,0.0],[0.0,0.0],[0.0,0.0],[1e-6,0.0]]").unwrap();
    let out = flipzeros(&["vcount", path(&json), "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "trial,seed,V\n0,0,2\n");

    let out = flipzeros(&["sample", "--n", "3", "--trials", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 4);

    let missing = flipzeros(&["zeros", "/nonexistent/p.txt"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn certify_turan_and_corollary_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let d = path(dir.path());
    assert_eq!(code(&flipzeros(&["certify", "--trials", "30", "--out", d])), 0);
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("certify.json")).unwrap()).unwrap();
    assert_eq!(rep["sbar_pass_rate"], 1.0);
    assert_eq!(rep["jensen_pass_rate"], 1.0);
    assert_eq!(rep["zero_free_violations"], 0);

    let cfg = dir.path().join("turan.toml");
    fs::write(&cfg, "trials = 12\n[turan]\nm = 2\nlengths = [0.5]\nconsistency_samples = 100\n").unwrap();
    assert_eq!(code(&flipzeros(&["turan-b", "--config", path(&cfg), "--out", d])), 0);
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("turan_b.json")).unwrap()).unwrap();
    let b = rep["estimates"][0]["b_emp"].as_f64().unwrap();
    assert!(b > 0.0 && b <= 1.0);

    let cfg = dir.path().join("cor.toml");
    fs::write(
        &cfg,
        "trials = 400\n[model]\nkind = \"symmetric\"\nmagnitudes = { law = \"normal\", sigma = 1.0 }\nn = 30\n",
    )
    .unwrap();
    let out = flipzeros(&["corollary-v", "--config", path(&cfg), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let s: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(s["mean_v"].as_f64().unwrap() <= s["bound"].as_f64().unwrap());
}
