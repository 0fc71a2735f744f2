use std::path::PathBuf;
use std::process::{Command, Output};

fn htube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htube"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

#[test]
fn point_evaluations() {
    let o = htube(&["point", "ptilde", "1", "0", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1.1752011936438 0 0.593284898038245");
    assert_eq!(stdout(&htube(&["point", "detjac", "0", "0", "0"])).trim(), "1");
    let crit: f64 = stdout(&htube(&["point", "criterion", "1.7320508", "0"]))
        .trim()
        .parse()
        .unwrap();
    assert!(crit.abs() < 1e-7);
    let g = stdout(&htube(&["point", "geodesic", "-1", "1", "0", "0"]));
    assert_eq!(g.trim(), "-1 0 0");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["point", "ptilde", "1", "0"][..],
        &["point", "ptilde", "x", "0", "1"],
        &["verify", "nosuch"],
        &["domain-boundary", "rho", "--range", "0", "1", "--step", "0.1"],
        &["domain-boundary", "f0", "--range", "1", "0", "--step", "0.1"],
        &["domain-boundary", "f0", "--range", "0", "1", "--step", "0"],
        &["verify", "kernel", "--tol", "-1"],
        &["image-probe"],
    ] {
        assert_eq!(htube(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn boundary_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = htube(&[
            "domain-boundary",
            "f0",
            "--range",
            "-5",
            "5",
            "--step",
            "0.01",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("c,value\n-5,"));
    assert!(text.contains("\n0,1.73205080756888\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn rho_curve_rows() {
    let o = htube(&[
        "domain-boundary",
        "rho",
        "--A",
        "2",
        "--range",
        "0",
        "5",
        "--step",
        "0.01",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("t,a,c\n0,2,0\n"));
    assert!(text.contains("\n1,1.70183625647864,1\n"));
}

#[test]
fn unwritable_output_is_an_error() {
    let o = htube(&[
        "domain-boundary",
        "f1",
        "--range",
        "0",
        "1",
        "--step",
        "0.5",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kernel.json");
    let o = htube(&["verify", "kernel", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["suite"], "kernel");
    assert_eq!(report["status"], "pass");
    let ids: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(ids.contains(&"kernel.injectivity_gap_even_coefficients_positive"));
}

#[test]
fn verify_all_with_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.json");
    let o = htube(&[
        "verify",
        "all",
        "--config",
        &config("quaternionic.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("pass embedding.boundary_criterion"));
    assert!(text.contains("pass domains.scan_o0_mirror_witness"));
    assert!(text.contains("suite all [quaternionic]: pass"));
}

#[test]
fn impossible_tolerance_fails_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = htube(&["verify", "geodesic", "--tol", "1e-9", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["status"], "fail");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"name":"bad","dim_v":2,"dim_z":1,"j_maps":[[[0,1],[1,0]]]}"#).unwrap();
    let o = htube(&["verify", "algebra", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("H-type"));
}

#[test]
fn heisenberg_configs_verify() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["heisenberg1.json", "heisenberg2.json"] {
        let out = dir.path().join(name);
        let o = htube(&[
            "verify",
            "embedding",
            "--config",
            &config(name),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{name}: {}", stdout(&o));
    }
    assert!(htube(&["embed-check", "--config", &config("heisenberg2.json")])
        .status
        .success());
}

#[test]
fn geodesic_csv() {
    let o = htube(&["geodesic", "1", "0", "1", "--t-end", "1", "--steps", "10"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,a,b,c,numeric_error");
    assert_eq!(lines.len(), 12);
    assert!(lines[1].starts_with("0,0,0,0,"));
}

#[test]
fn scan_and_probe_commands() {
    let o = htube(&["scan-injectivity", "o1", "--n-a", "50", "--n-c", "100"]);
    assert!(stdout(&o).contains("0 collisions"));
    let o = htube(&["image-probe", "2", "0", "0"]);
    assert!(stdout(&o).contains("1.60611529880277"));
    let o = htube(&["image-probe", "--convexity", "o2", "--pairs", "1000"]);
    assert!(stdout(&o).contains("convex: true"));
}
