use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vortexlab(args: &[&str]) -> Output {
    vortexlab_with_config(args, None)
}

fn vortexlab_with_config(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vortexlab"));
    cmd.args(args).env_remove("VORTEXLAB_CONFIG");
    if let Some(c) = config {
        cmd.env("VORTEXLAB_CONFIG", c);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn integrate_instanton_csv() {
    let o = vortexlab(&["integrate", "--lambda", "0", "--omega", "0", "--m", "1", "--a", "2", "--r-max", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0].join(","), "r,h,dh,energy_cum,pohozaev_residual");
    for row in &rows[1..] {
        let r: f64 = row[0].parse().unwrap();
        let h: f64 = row[1].parse().unwrap();
        assert!((h - 2.0 * r.atan()).abs() < 1e-8);
        // 17 significant digits
        assert_eq!(row[1].split('e').next().unwrap().trim_start_matches('-').len(), 18);
    }
}

#[test]
fn integrate_zero_slope() {
    let o = vortexlab(&["integrate", "--lambda", "1", "--omega", "0.5", "--a", "0"]);
    assert_eq!(o.status.code(), Some(0));
    for row in &csv_rows(&stdout(&o))[1..] {
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn zero_degree_is_invalid_input() {
    let o = vortexlab(&["integrate", "--m", "0", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m must be nonzero"));
    let o = vortexlab(&["integrate", "--a", "1", "--rel-tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = vortexlab(&["integrate", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shoot_case_iv() {
    let o = vortexlab(&["shoot", "--lambda", "1", "--omega", "0.5", "--m", "1", "--k", "1", "--a-range", "0.1:10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert!(v["spec_version"].is_string());
    assert!(v["residual"].as_f64().unwrap() < 1e-6);
    assert!((v["a_star"].as_f64().unwrap() - 1.088_035_146_5).abs() < 1e-8);
}

#[test]
fn shoot_without_bracket_exits_3() {
    let o = vortexlab(&["shoot", "--lambda", "0", "--omega", "1", "--m", "1", "--k", "2", "--a-range", "0.1:10"]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(err["reason"], "no bracket");
    assert!(o.stdout.is_empty());
}

#[test]
fn shoot_instanton_single_point() {
    let o = vortexlab(&["shoot", "--lambda", "0", "--omega", "0", "--m", "1", "--k", "1", "--a-range", "1:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["a_star"].as_f64(), Some(1.0));
}

#[test]
fn classify_examples() {
    let tag = |l: &str, w: &str| {
        let o = vortexlab(&["classify", "--lambda", l, "--omega", w]);
        assert_eq!(o.status.code(), Some(0));
        json(&o)["label"].clone()
    };
    assert_eq!(tag("0", "0")["tag"], "CaseI");
    let ii = tag("1", "1");
    assert_eq!(ii["tag"], "CaseII");
    assert_eq!(ii["admissible_limit_parity"], "Odd");
    assert_eq!(ii["exponential_tail_guaranteed"], false);
    assert_eq!(tag("-1", "0.5")["tag"], "NoFiniteEnergyVortex");
    let o = vortexlab(&["classify", "--lambda", "1", "--omega", "0.5", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1).unwrap().split(',').nth(2), Some("CaseIV"));
}

#[test]
fn sweep_five_by_five() {
    let o = vortexlab(&["sweep", "--lambda-range", "-1:1", "--omega-range", "-1:1", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 26);
    for row in &rows[1..] {
        let (l, w): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let case = row[2].as_str();
        if l == 0.0 && w == 0.0 {
            assert_eq!(case, "CaseI");
        } else if l == w {
            assert_eq!(case, "CaseII");
        } else if l < 0.0 && w < 0.0 {
            assert_eq!(case, "NoFiniteEnergyVortex");
        }
    }
}

#[test]
fn sweep_rejects_degenerate_ranges() {
    for args in [
        ["sweep", "--lambda-range", "1:1", "--n", "3"],
        ["sweep", "--omega-range", "1:0", "--n", "3"],
        ["sweep", "--lambda-range", "0:1", "--n", "0"],
    ] {
        assert_eq!(vortexlab(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn empirical_sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, name: &str| {
        let path = dir.path().join(name);
        let o = vortexlab(&[
            "sweep", "--lambda-range", "0:1", "--omega-range", "0:1", "--n", "3", "--empirical", "--jobs", jobs,
            "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(o.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let one = run("1", "one.csv");
    let four = run("4", "four.csv");
    assert_eq!(one, four);
    let text = String::from_utf8(one).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows[0][5..].join(","), "k,bracket_found,a_star,tail_rate,consistent");
    for row in &rows[1..] {
        assert_eq!(row[9], "true", "{row:?}");
    }
    // (1, 0.5) is Case IV with a solution reaching pi
    let iv = rows.iter().find(|r| r[0].starts_with("1.0") && r[1].starts_with("5.0")).unwrap();
    assert_eq!(iv[2], "CaseIV");
    assert_eq!(iv[6], "true");
    let rate: f64 = iv[8].parse().unwrap();
    assert!(rate > 0.5 && rate < 0.82);
}

#[test]
fn verify_bp_examples() {
    let o = vortexlab(&["verify-bp", "--m", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks[0]["sup_error"].as_f64().unwrap() < 1e-8);
    assert!((checks[1]["energy"].as_f64().unwrap() - 12.0).abs() < 1e-3);
    let o = vortexlab(&["verify-bp", "--m", "1", "--a", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["checks"][0]["energy"].as_f64(), Some(0.0));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "lambda = 1\nomega = 0.5\nm = 1\nk = 1\na_range = \"0.1:10\"\nformat = \"csv\"\n").unwrap();
    let o = vortexlab_with_config(&["shoot"], Some(&cfg));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("lambda,omega,m,k,a_lo"));
    // a flag overrides the file: (1, 0) admits no vortex
    let o = vortexlab_with_config(&["shoot", "--omega", "0", "--format", "json"], Some(&cfg));
    assert_eq!(o.status.code(), Some(3));

    std::fs::write(&cfg, "lamda = 1\n").unwrap();
    let o = vortexlab_with_config(&["classify"], Some(&cfg));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lamda"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["integrate", "--lambda", "0", "--omega", "1", "--a", "0.5", "--format", "json"];
    assert_eq!(vortexlab(&args).stdout, vortexlab(&args).stdout);
}
