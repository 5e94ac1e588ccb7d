use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixphase"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn meta<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn qubit_scan_default_grid() {
    let o = run(&["qubit-scan"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "eta,alpha,lambda1,t1_re,t1_im,t2_re,t2_im,t12_re,t12_im,t1_status,t2_status,t12_status");
    assert_eq!(data.len(), 1 + 21 * 129 * 5);
    // 17 significant digits, '.' decimal
    let first = data[1].split(',').nth(3).unwrap();
    assert_eq!(first, "0.0000000000000000e0");
    let second_row_alpha = data[6].split(',').nth(1).unwrap();
    assert_eq!(second_row_alpha.parse::<f64>().unwrap(), std::f64::consts::PI / 64.0);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        vec!["families", "--seed", "11"],
        vec!["qubit-scan"],
        vec!["two-photon", "--seed", "5"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "noisy.json",
        r#"{"kind": "two-photon", "parameters": {"r": [0.3], "beta": [0.2, 1.0], "mode": "fringe", "samples": 16, "noise": {"mean_pairs": 100}}}"#,
    );
    let cfg = cfg.to_str().unwrap();
    let a = run(&["two-photon", "--config", cfg, "--seed", "3"]);
    let b = run(&["two-photon", "--config", cfg, "--seed", "3"]);
    let c = run(&["two-photon", "--config", cfg, "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(meta(&stdout(&a), "seed"), Some("3"));
}

#[test]
fn families_report_parity_for_even_dimension() {
    let o = run(&["families", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(meta(&text, "parity_verdict"), Some("-1"));
    assert_eq!(meta(&text, "parity_expected"), Some("-1"));
    let full: Vec<&str> = text.lines().filter(|l| l.starts_with("4,")).collect();
    assert_eq!(full.len(), 24);
    for row in full {
        let f: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(f >= 0.0);
    }
    let identity = text.lines().find(|l| l.starts_with("4,1 2 3 4,")).unwrap();
    let f: f64 = identity.rsplit(',').next().unwrap().parse().unwrap();
    assert!((f - 1.0).abs() < 1e-10);
}

#[test]
fn two_photon_flags_the_unpolarized_node() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "node.json",
        r#"{"kind": "two-photon", "parameters": {"r": [0], "beta": [0.7853981633974483]}}"#,
    );
    let o = run(&["two-photon", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().last().unwrap();
    assert!(row.ends_with(",,indeterminate"), "{row}");
}

#[test]
fn flags_override_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "fam.json",
        &format!(
            r#"{{"kind": "families", "parameters": {{"n": 3, "seed": 1, "tol": 1e-6}}, "output": {{"path": "{}", "format": "csv"}}}}"#,
            dir.path().join("from-config.csv").display()
        ),
    );
    let out = dir.path().join("from-flag.json");
    let o = run(&[
        "families",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "9",
        "--tol",
        "1e-8",
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("from-config.csv").exists());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["kind"], "families");
    assert_eq!(doc["meta"]["seed"], 9);
    assert_eq!(doc["meta"]["tol"], 1e-8);
    assert_eq!(doc["meta"]["n"], 3);

    // without flags the scenario's own output path is used
    let o = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("from-config.csv")).unwrap();
    assert_eq!(meta(&text, "seed"), Some("1"));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{ not json", "invalid configuration"),
        ("field.json", r#"{"kind": "families", "parameters": {"dimension": 4}}"#, "parameters.dimension"),
        ("range.json", r#"{"kind": "families", "parameters": {"n": 12}}"#, "parameters.n"),
        ("type.json", r#"{"kind": "families", "parameters": {"n": "four"}}"#, "invalid type"),
        ("kind.json", r#"{"kind": "qubit-scan"}"#, "kind"),
        ("tol.json", r#"{"kind": "families", "parameters": {"tol": -1}}"#, "tol"),
    ];
    for (name, text, needle) in cases {
        let cfg = write(dir.path(), name, text);
        let o = run(&["families", "--config", cfg.to_str().unwrap()]);
        let err = String::from_utf8_lossy(&o.stderr);
        assert_eq!(o.status.code(), Some(2), "{name}: {err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
    let missing = run(&["verify", "--config", "/nonexistent/scenario.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let steps = run(&["qubit-scan", "--steps", "10"]);
    assert_eq!(steps.status.code(), Some(2));
    let usage = run(&["families", "--bogus"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn failed_checks_exit_1() {
    let o = run(&["verify", "--steps", "16", "--config", scenarios_dir().join("verify.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("transport-defect,") && l.ends_with(",fail")));
    assert_ne!(meta(&text, "failed"), Some("0"));
}

#[test]
fn shipped_scenarios_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(scenarios_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let out = dir.path().join(path.file_stem().unwrap());
        let o = run(&["run", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
        assert!(std::fs::metadata(&out).unwrap().len() > 0);
        seen += 1;
    }
    assert!(seen >= 5);
}
