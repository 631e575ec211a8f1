//! Driving the command layer from code: run a gallery model into a scratch
//! directory and inspect the trace.csv / summary.json it writes. The same
//! functions back the `chtw` binary.
//!
//! ```bash
//! cargo run -p chtw --example run_to_files
//! ```

use std::path::Path;

use chtw::cli::{cmd_matrices, cmd_run, cmd_validate, RunOptions};

fn main() {
    let model = Path::new(env!("CARGO_MANIFEST_DIR")).join("models/feedback_point.chtw");
    let out_dir = std::env::temp_dir().join("chtw_example_out");

    let code = cmd_validate(&model);
    println!("validate -> exit {code}");

    let code = cmd_run(
        &model,
        &RunOptions {
            steps: 5,
            strict: false,
            sample_every: 1,
            out_dir: out_dir.clone(),
        },
    );
    println!("run --steps 5 -> exit {code}, files in {}", out_dir.display());

    let trace = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    println!("\nfirst rows of trace.csv (step,brane,cell_index,value):");
    for line in trace.lines().take(6) {
        println!("  {line}");
    }
    println!("  ... {} rows total", trace.lines().count());

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    println!("\nintegral resource per step from summary.json:");
    for record in summary["m_series"].as_array().unwrap() {
        println!("  step {}: M = {}", record["step"], record["total"]);
    }

    let code = cmd_matrices(&model, Some(&out_dir.join("matrices.json")));
    println!("\nmatrices -> exit {code} (matrices.json written)");
}
