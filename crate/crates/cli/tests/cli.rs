use std::fs;
use std::process::{Command, Output};

use advice_soco_core::bounds::{closed_form_lower_objective, integral_lower_bound_params, solve_u, tilde_u};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_advice-soco"));
    c.env_remove("ADVICE_SOCO_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 output")
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

#[test]
fn non_positive_delta_is_a_config_error_naming_delta() {
    for args in [
        &["run", "--generate", "finite", "--delta", "0"][..],
        &["run", "--generate", "line", "--delta", "-0.5"][..],
        &["bounds", "--delta", "0"][..],
        &["sweep", "--deltas", "0.1,0", "--seeds", "1"][..],
        &["microgrid", "--delta", "0"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains("delta"), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn model_violations_exit_with_three() {
    let o = run(&["run", "--generate", "finite", "--alpha", "5"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn bounds_guards_exit_with_two() {
    let o = run(&["bounds", "--t-min", "5", "--t-max", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["bounds", "--t-max", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unreadable_or_malformed_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let o = run(&["run", "--instance", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let o = run(&["bounds", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, r#"{"detla": 0.5}"#).unwrap();
    let o = run(&["bounds", "--config", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("detla"));
}

#[test]
fn same_seed_gives_identical_bytes() {
    for args in [
        &["run", "--generate", "finite", "--seed", "7"][..],
        &["run", "--generate", "line", "--seed", "7", "--algo", "aobd"][..],
        &["microgrid", "--seed", "3", "--sigma", "0.5", "--horizon", "24"][..],
        &["sweep", "--seeds", "2", "--horizon", "24", "--jobs", "3"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let one = run(&["sweep", "--seeds", "2", "--horizon", "24", "--jobs", "1"]);
    let four = run(&["sweep", "--seeds", "2", "--horizon", "24", "--jobs", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn default_sweep_has_thirty_rows_that_satisfy_the_bounds() {
    let o = run(&["sweep"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 30);
    for r in &rows {
        assert_eq!(&r[col("error")], "");
        let v = |name: &str| r[col(name)].parse::<f64>().unwrap();
        let (aos, ftp, opt) = (v("cost_aos"), v("cost_ftp"), v("cost_opt"));
        assert!(opt <= aos * (1.0 + 1e-9));
        assert!(aos <= (1.0 + 2.0 * v("delta")) * ftp * (1.0 + 1e-9) + 1e-9);
        assert!(aos <= v("bound_consistency") * opt * (1.0 + 1e-9) + 1e-9);
    }
}

#[test]
fn thm5_blind_takes_branch_one_with_ratio_at_least_two() {
    let o = run(&["adversarial", "thm5", "--delta", "0.25", "--algo", "blind"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = lines.last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["branch"], 1);
    assert!(summary["measured_cr"].as_f64().unwrap() >= 2.0 - 1e-9);
    assert!(lines[..lines.len() - 1].iter().all(|l| l["game"] == "thm5"));
}

#[test]
fn prop5_transcript_reaches_the_lp_value() {
    let o = run(&["adversarial", "prop5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let summary: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["rounds"], 4);
    assert!(close(summary["lp_value"].as_f64().unwrap(), 10.765139893345026));
    assert!(close(summary["measured_cr"].as_f64().unwrap(), 10.765139893345026));
}

#[test]
fn bounds_output_matches_the_library() {
    let o = run(&["bounds", "--alpha", "0.5", "--delta", "0.5", "--t-max", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(close(doc["tilde_u"].as_f64().unwrap(), tilde_u(0.5, 0.5).unwrap()));
    assert!(close(doc["tilde_u"].as_f64().unwrap(), 90.71869952000004));
    let dual = doc["dual"].as_array().unwrap();
    assert_eq!(dual.len(), 6);
    for (i, d) in dual.iter().enumerate() {
        let lib = solve_u(i + 1, 0.5, 0.5).unwrap().u;
        assert!(close(d["u"].as_f64().unwrap(), lib));
        assert_eq!(d["u_le_tilde_u"], true);
    }
    assert!(close(dual[0]["u"].as_f64().unwrap(), 4.0));
    let (a2, t) = integral_lower_bound_params(0.5, 0.5).unwrap();
    assert!(close(doc["primal"]["alpha_adjusted"].as_f64().unwrap(), a2));
    assert_eq!(doc["primal"]["t"].as_u64().unwrap() as usize, t);
    assert!(close(
        doc["primal"]["closed_form_objective"].as_f64().unwrap(),
        closed_form_lower_objective(a2, 0.5).unwrap()
    ));
}

#[test]
fn flags_override_config_and_config_overrides_env_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"alpha": 0.25, "delta": 1.0, "t_max": 3}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_cfg: Value = serde_json::from_slice(&run(&["bounds", "--config", cfg]).stdout).unwrap();
    assert_eq!(from_cfg["alpha"], 0.25);
    assert_eq!(from_cfg["delta"], 1.0);
    assert_eq!(from_cfg["dual"].as_array().unwrap().len(), 3);

    let flagged: Value =
        serde_json::from_slice(&run(&["bounds", "--config", cfg, "--delta", "0.5"]).stdout).unwrap();
    assert_eq!(flagged["alpha"], 0.25);
    assert_eq!(flagged["delta"], 0.5);

    let defaults: Value = serde_json::from_slice(&run(&["bounds"]).stdout).unwrap();
    assert_eq!(defaults["alpha"], 0.5);
    assert_eq!(defaults["dual"].as_array().unwrap().len(), 8);

    let jobs_cfg = dir.path().join("jobs.json");
    fs::write(&jobs_cfg, r#"{"jobs": 2, "seeds": 1, "horizon": 12}"#).unwrap();
    let o = bin()
        .args(["sweep", "--config", jobs_cfg.to_str().unwrap()])
        .env("ADVICE_SOCO_JOBS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "config jobs must shadow the env: {}", stderr(&o));
    let o = bin()
        .args(["sweep", "--seeds", "1", "--horizon", "12"])
        .env("ADVICE_SOCO_JOBS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ADVICE_SOCO_JOBS"));
}

#[test]
fn out_flag_writes_only_the_named_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.json");
    let o = run(&["bounds", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["alpha"], 0.5);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn instance_files_round_trip_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    fs::write(
        &path,
        r#"{
  "space": {"kind": "finite", "coords": [0, 1, 2, 3]},
  "x0": 0,
  "costs": [{"table": [3, 2, 1, 0]}, {"table": [0, 1, 2, 3]}, {"table": [3, 2, 1, 0]}],
  "predictions": [3, 0, 3]
}"#,
    )
    .unwrap();
    let o = run(&["run", "--instance", path.to_str().unwrap(), "--algo", "ftp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert_eq!(doc["T"], 3);
}

#[test]
fn selftest_passes_on_a_small_suite() {
    let o = run(&["selftest", "--instances", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count() >= 7);
    assert!(!stdout(&o).contains("[FAIL]"));
}
