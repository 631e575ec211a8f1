//! End-to-end checks of the `chtw` binary: exit codes, stderr diagnostics as
//! JSON lines, and the trace/summary/matrices/plotdata file formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chtw"))
}

fn models() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn stderr_diagnostics(output: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&output.stderr)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("not a JSON line: {l} ({e})")))
        .collect()
}

fn run_to(dir: &Path, model: &Path, extra: &[&str]) -> Output {
    bin()
        .arg("run")
        .arg(model)
        .args(extra)
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap()
}

#[test]
fn validate_ok_model() {
    let out = bin().arg("validate").arg(models().join("minimal.chtw")).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stderr_diagnostics(&out).is_empty());
}

#[test]
fn validate_rejects_space_mismatch() {
    let out = bin().arg("validate").arg(fixtures().join("prop3.chtw")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let diags = stderr_diagnostics(&out);
    assert!(diags.iter().any(|d| d["code"] == "PROP3_VIOLATION"));
    assert!(diags.iter().all(|d| d["severity"] == "error" || d["severity"] == "warning"));
}

#[test]
fn validate_reports_invalid_axis() {
    let out = bin().arg("validate").arg(fixtures().join("invalid_axis.chtw")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_diagnostics(&out).iter().any(|d| d["code"] == "INVALID_AXIS"));
}

#[test]
fn validate_missing_file_is_io_error() {
    let out = bin().arg("validate").arg("no/such/model.chtw").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_diagnostics(&out).iter().any(|d| d["code"] == "IO_ERROR"));
}

#[test]
fn validate_syntax_errors_have_locations() {
    let out = bin().arg("validate").arg(fixtures().join("bad/syntax.chtw")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let diags = stderr_diagnostics(&out);
    assert!(!diags.is_empty());
    for d in &diags {
        let loc = d["location"].as_str().unwrap();
        // file:line:col
        assert!(loc.matches(':').count() >= 2, "located: {loc}");
    }
}

#[test]
fn run_zero_steps_writes_initial_state_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &models().join("minimal.chtw"), &["--steps", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let rows: Vec<&str> = trace.lines().collect();
    // 2 branes x 4 cells, step 0 only
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.starts_with("0,")));
}

#[test]
fn run_trace_row_count_matches_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(
        dir.path(),
        &models().join("minimal.chtw"),
        &["--steps", "5", "--sample-every", "2"],
    );
    assert_eq!(out.status.code(), Some(0));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    // recorded steps 0, 2, 4, 5; 8 cells per state
    assert_eq!(trace.lines().count(), 4 * 8);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["recorded_steps"], serde_json::json!([0, 2, 4, 5]));
}

#[test]
fn run_feedback_summary_matches_hand_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &models().join("feedback_point.chtw"), &["--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    let totals: Vec<f64> = summary["m_series"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["total"].as_f64().unwrap())
        .collect();
    assert_eq!(totals, vec![9.0, 9.0, 11.0, 13.0]);
    let counts: Vec<Vec<u64>> = summary["firing_counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r["counts"]
                .as_array()
                .unwrap()
                .iter()
                .map(|c| c.as_u64().unwrap())
                .collect()
        })
        .collect();
    assert_eq!(counts, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
}

#[test]
fn strict_run_exits_3_on_overdraw() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixtures().join("overdraw.chtw");
    let out = run_to(dir.path(), &model, &["--steps", "5", "--strict"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_diagnostics(&out).iter().any(|d| d["code"] == "NEGATIVE_RESOURCE"));
    // files are still written for inspection
    assert!(dir.path().join("trace.csv").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["stopped_early"], serde_json::json!(1));

    // without --strict the run completes with diagnostics, exit 0
    let dir2 = tempfile::tempdir().unwrap();
    let out = run_to(dir2.path(), &model, &["--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr_diagnostics(&out).iter().any(|d| d["code"] == "NEGATIVE_RESOURCE"));
}

#[test]
fn matrices_export_patterns() {
    let out = bin().arg("matrices").arg(models().join("feedback_point.chtw")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["s_h"], serde_json::json!([[1, 0], [0, 1], [0, 1], [0, 0]]));
    assert_eq!(v["r_s"][0][0], serde_json::json!(2.0));
    assert_eq!(v["w_transpose"][0][1]["carriers"][0], "w_li");

    // blocking-only input row stays zero
    let out = bin().arg("matrices").arg(fixtures().join("blocking_only.chtw")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["s_h"], serde_json::json!([[1]]));
    assert_eq!(v["r_s"], serde_json::json!([[null]]));

    // empty model, empty matrices
    let out = bin().arg("matrices").arg(fixtures().join("empty.chtw")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["s_h"], serde_json::json!([]));

    // --out writes the same document to a file
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("matrices.json");
    let out = bin()
        .arg("matrices")
        .arg(models().join("feedback_point.chtw"))
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["tbrane_order"], serde_json::json!(["p", "l"]));
}

#[test]
fn plotdata_1d_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &models().join("minimal.chtw"), &["--steps", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .arg("plotdata")
        .arg(dir.path().join("trace.csv"))
        .args(["--brane", "source", "--step", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    // cell centers of [0,1] with 4 cells, then the value (5 - 2 after one step)
    assert_eq!(rows[0], "0.125 3");
    assert_eq!(rows[3], "0.875 3");
}

#[test]
fn plotdata_2d_has_blank_scanline_separators() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &models().join("feedback_spatial.chtw"), &["--steps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .arg("plotdata")
        .arg(dir.path().join("trace.csv"))
        .args(["--brane", "g", "--step", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // 2x2 grid: two scanlines of two rows, one blank line between them
    let lines: Vec<&str> = text.split('\n').collect();
    assert_eq!(lines[0..2].len(), 2);
    assert_eq!(lines[2], "");
    let data_rows: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(data_rows.len(), 4);
    for row in data_rows {
        assert_eq!(row.split_whitespace().count(), 3); // u v value
    }
}

#[test]
fn plotdata_absent_step_or_brane_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &models().join("minimal.chtw"), &["--steps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .arg("plotdata")
        .arg(dir.path().join("trace.csv"))
        .args(["--brane", "source", "--step", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .arg("plotdata")
        .arg(dir.path().join("trace.csv"))
        .args(["--brane", "ghost", "--step", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .arg("plotdata")
        .arg(dir.path().join("missing.csv"))
        .args(["--brane", "source", "--step", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gallery_models_all_validate() {
    for entry in std::fs::read_dir(models()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("chtw") {
            continue;
        }
        let out = bin().arg("validate").arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{} must validate", path.display());
    }
}

#[test]
fn csv_backed_model_runs_and_conserves() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &models().join("diffusion_1d.chtw"), &["--steps", "4"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    // while the pulse stays interior the kernel moves exactly what is consumed
    let totals = summary["m_series"].as_array().unwrap();
    let first = totals.first().unwrap()["total"].as_f64().unwrap();
    for record in totals {
        let m = record["total"].as_f64().unwrap();
        assert!((m - first).abs() < 1e-9, "resource must be conserved: {m} vs {first}");
    }
    // and the pulse has actually spread to new cells
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let nonzero_at = |step: &str| {
        trace
            .lines()
            .filter(|l| l.starts_with(step) && !l.ends_with(",0"))
            .count()
    };
    assert_eq!(nonzero_at("0,"), 2);
    assert!(nonzero_at("4,") >= 4);
}
