//! Command implementations behind the `chtw` binary: validate, run,
//! matrices, plotdata. Each returns the process exit code; diagnostics go to
//! standard error as JSON lines, data files are written as specified.
//!
//! Exit codes: 0 success, 1 model errors, 2 I/O errors, 3 strict run hit a
//! negative resource.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::dsl::{self, ParseFileError};
use crate::dynamics::{self, Trace};
use crate::matrix;
use crate::model::{CHTWSystem, DiagCode, Diagnostic};
use crate::numfmt::fmt_sig;
use crate::space::{Grid, Space};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MODEL: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;

/// Options of the `run` subcommand.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub steps: u64,
    pub strict: bool,
    pub sample_every: u64,
    pub out_dir: PathBuf,
}

fn emit(diag: &Diagnostic) {
    eprintln!("{}", serde_json::to_string(diag).expect("diagnostic is serializable"));
}

fn emit_io(message: impl Into<String>, location: impl Into<String>) -> i32 {
    emit(&Diagnostic::error(DiagCode::IoError, message, location));
    EXIT_IO
}

enum LoadError {
    Io,
    Model,
}

fn load_model(path: &Path) -> Result<CHTWSystem, LoadError> {
    match dsl::parse_file(path) {
        Ok(system) => Ok(system),
        Err(ParseFileError::Io { path, source }) => {
            emit(&Diagnostic::error(
                DiagCode::IoError,
                source.to_string(),
                path,
            ));
            Err(LoadError::Io)
        }
        Err(ParseFileError::Parse { path, errors }) => {
            for e in errors {
                emit(&e.to_diagnostic(&path));
            }
            Err(LoadError::Model)
        }
    }
}

/// Parses and validates a model for the other commands, printing every
/// finding. Warnings do not fail the load.
fn load_validated(path: &Path) -> Result<CHTWSystem, i32> {
    let system = load_model(path).map_err(|e| match e {
        LoadError::Io => EXIT_IO,
        LoadError::Model => EXIT_MODEL,
    })?;
    let diags = system.validate();
    for d in diags.iter() {
        emit(d);
    }
    if diags.has_errors() {
        Err(EXIT_MODEL)
    } else {
        Ok(system)
    }
}

/// `validate <model>`: exit 0 iff the model parses and validates cleanly.
pub fn cmd_validate(model: &Path) -> i32 {
    match load_validated(model) {
        Ok(_) => EXIT_OK,
        Err(code) => code,
    }
}

/// `run <model> --steps N [--strict] [--sample-every K] [--out DIR]`:
/// writes `trace.csv` and `summary.json` into the output directory.
pub fn cmd_run(model: &Path, options: &RunOptions) -> i32 {
    let system = match load_validated(model) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let run_options = dynamics::RunOptions {
        strict: options.strict,
        sample_every: options.sample_every,
    };
    let trace = match dynamics::run(&system, options.steps, &run_options) {
        Ok(t) => t,
        Err(e) => {
            let code = match &e {
                dynamics::EngineError::Firing(_) => DiagCode::NonFiniteField,
                _ => DiagCode::ShapeMismatch,
            };
            emit(&Diagnostic::error(code, e.to_string(), model.display().to_string()));
            return EXIT_MODEL;
        }
    };
    for d in &trace.diagnostics {
        emit(d);
    }

    if let Err(e) = std::fs::create_dir_all(&options.out_dir) {
        return emit_io(e.to_string(), options.out_dir.display().to_string());
    }
    let trace_path = options.out_dir.join("trace.csv");
    if let Err(e) = write_trace_csv(&trace_path, &trace) {
        return emit_io(e.to_string(), trace_path.display().to_string());
    }
    let summary_path = options.out_dir.join("summary.json");
    if let Err(e) = write_summary(&summary_path, model, &system, &trace, options) {
        return emit_io(e.to_string(), summary_path.display().to_string());
    }

    if trace.stopped_early.is_some() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}

fn write_trace_csv(path: &Path, trace: &Trace) -> std::io::Result<()> {
    let mut out = String::new();
    for entry in &trace.entries {
        for mark in &entry.state.marks {
            for (cell, value) in mark.values.iter().enumerate() {
                out.push_str(&entry.state.step.to_string());
                out.push(',');
                out.push_str(&mark.brane);
                out.push(',');
                out.push_str(&cell.to_string());
                out.push(',');
                out.push_str(&fmt_sig(*value));
                out.push('\n');
            }
        }
    }
    std::fs::write(path, out)
}

fn axes_json(space: &Space) -> serde_json::Value {
    json!(space
        .axes
        .iter()
        .map(|a| json!({ "name": a.name, "min": a.min, "max": a.max, "cells": a.cells }))
        .collect::<Vec<_>>())
}

fn write_summary(
    path: &Path,
    model: &Path,
    system: &CHTWSystem,
    trace: &Trace,
    options: &RunOptions,
) -> std::io::Result<()> {
    let cbranes: Vec<_> = system
        .cbranes()
        .iter()
        .map(|b| {
            let space = system.space(&b.space).expect("validated");
            let cells = Grid::build(space).expect("validated").total_cells();
            json!({ "id": b.id, "space": b.space, "cells": cells, "axes": axes_json(space) })
        })
        .collect();
    let tbranes: Vec<_> = system.tbranes().iter().map(|b| json!(b.id)).collect();
    let m_series: Vec<_> = trace
        .resources
        .iter()
        .map(|r| json!({ "step": r.step, "per_brane": r.per_brane, "total": r.total }))
        .collect();
    let firing: Vec<_> = trace
        .firing_counts
        .iter()
        .map(|f| json!({ "step": f.step, "counts": f.counts }))
        .collect();
    let recorded: Vec<u64> = trace.entries.iter().map(|e| e.state.step).collect();
    let summary = json!({
        "model": model.display().to_string(),
        "steps": options.steps,
        "strict": options.strict,
        "sample_every": options.sample_every,
        "stopped_early": trace.stopped_early,
        "cbranes": cbranes,
        "tbranes": tbranes,
        "recorded_steps": recorded,
        "m_series": m_series,
        "firing_counts": firing,
        "diagnostics": trace.diagnostics,
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("serializable");
    text.push('\n');
    std::fs::write(path, text)
}

/// `matrices <model> [--out FILE]`: connectivity, uptake and W patterns as
/// JSON (stdout when no file is given).
pub fn cmd_matrices(model: &Path, out: Option<&Path>) -> i32 {
    let system = match load_validated(model) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let mut text =
        serde_json::to_string_pretty(&matrix::matrices_json(&system, 0)).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return emit_io(e.to_string(), path.display().to_string());
            }
        }
        None => {
            print!("{text}");
            let _ = std::io::stdout().flush();
        }
    }
    EXIT_OK
}

/// `plotdata <trace> --brane ID --step K`: cell-center coordinates plus the
/// value, gnuplot-style (rows of a 2-D scanline separated by blank lines),
/// to stdout. Grid geometry comes from `summary.json` next to the trace.
pub fn cmd_plotdata(trace_path: &Path, brane: &str, step: u64) -> i32 {
    let summary_path = trace_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join("summary.json");
    let summary: serde_json::Value = match std::fs::read_to_string(&summary_path)
        .map_err(|e| e.to_string())
        .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
    {
        Ok(v) => v,
        Err(e) => return emit_io(e, summary_path.display().to_string()),
    };

    let Some(grid) = grid_from_summary(&summary, brane) else {
        emit(&Diagnostic::error(
            DiagCode::UnknownReference,
            format!("no C-brane named '{brane}' in the trace"),
            summary_path.display().to_string(),
        ));
        return EXIT_MODEL;
    };

    let content = match std::fs::read_to_string(trace_path) {
        Ok(c) => c,
        Err(e) => return emit_io(e.to_string(), trace_path.display().to_string()),
    };
    let mut values: BTreeMap<usize, String> = BTreeMap::new();
    for (ix, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return emit_io(
                format!("line {}: expected 4 columns, found {}", ix + 1, fields.len()),
                trace_path.display().to_string(),
            );
        }
        if fields[1] != brane {
            continue;
        }
        let (Ok(row_step), Ok(cell)) = (fields[0].parse::<u64>(), fields[2].parse::<usize>())
        else {
            return emit_io(
                format!("line {}: malformed step or cell index", ix + 1),
                trace_path.display().to_string(),
            );
        };
        if row_step == step {
            values.insert(cell, fields[3].to_string());
        }
    }
    if values.is_empty() {
        emit(&Diagnostic::error(
            DiagCode::UnknownReference,
            format!("step {step} of brane '{brane}' is not recorded in the trace"),
            trace_path.display().to_string(),
        ));
        return EXIT_MODEL;
    }

    let mut out = String::new();
    let mut previous_slowest: Option<usize> = None;
    for (cell, value) in &values {
        if *cell >= grid.total_cells() {
            return emit_io(
                format!("cell index {cell} outside the grid of '{brane}'"),
                trace_path.display().to_string(),
            );
        }
        let multi = grid.multi_index(*cell).expect("checked");
        if grid.space().dimension() >= 2 {
            let slowest = multi[0];
            if previous_slowest.is_some_and(|p| p != slowest) {
                out.push('\n'); // scanline separator
            }
            previous_slowest = Some(slowest);
        }
        let center = grid.cell_center(*cell).expect("checked");
        for c in center {
            out.push_str(&fmt_sig(c));
            out.push(' ');
        }
        out.push_str(value);
        out.push('\n');
    }
    print!("{out}");
    let _ = std::io::stdout().flush();
    EXIT_OK
}

fn grid_from_summary(summary: &serde_json::Value, brane: &str) -> Option<Grid> {
    let entry = summary
        .get("cbranes")?
        .as_array()?
        .iter()
        .find(|b| b.get("id").and_then(|v| v.as_str()) == Some(brane))?;
    let axes = entry
        .get("axes")?
        .as_array()?
        .iter()
        .map(|a| {
            Some(crate::space::Axis::new(
                a.get("name")?.as_str()?,
                a.get("min")?.as_f64()?,
                a.get("max")?.as_f64()?,
                a.get("cells")?.as_u64()? as usize,
            ))
        })
        .collect::<Option<Vec<_>>>()?;
    Grid::build(&Space::new(brane, axes)).ok()
}
