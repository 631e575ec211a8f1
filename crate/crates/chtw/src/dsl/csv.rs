//! CSV loaders for field and kernel data. Row-major order, `.` decimal
//! separator, no header; values one per line or comma-separated, empty
//! lines skipped.

use std::path::Path;

use thiserror::Error;

use crate::field::{FieldValues, Kernel};
use crate::space::Grid;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("LENGTH_MISMATCH: expected {expected} {what}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("PARSE_ERROR: line {line}: cannot parse '{text}' as a number")]
    Parse { line: usize, text: String },
    #[error("PARSE_ERROR: {0}")]
    Io(String),
}

fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>, CsvError> {
    let content =
        std::fs::read_to_string(path).map_err(|e| CsvError::Io(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (ix, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            let cell = cell.trim();
            let value: f64 = cell.parse().map_err(|_| CsvError::Parse {
                line: ix + 1,
                text: cell.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads exactly `grid.total_cells()` values in row-major order.
pub fn load_field_csv(path: &Path, grid: &Grid) -> Result<FieldValues, CsvError> {
    let values: FieldValues = read_rows(path)?.into_iter().flatten().collect();
    if values.len() != grid.total_cells() {
        return Err(CsvError::LengthMismatch {
            what: "values",
            expected: grid.total_cells(),
            got: values.len(),
        });
    }
    Ok(values)
}

/// Reads a kernel as `source_cells` rows of `target_cells` columns.
pub fn load_kernel_csv(
    path: &Path,
    source_cells: usize,
    target_cells: usize,
) -> Result<Kernel, CsvError> {
    let rows = read_rows(path)?;
    if rows.len() != source_cells {
        return Err(CsvError::LengthMismatch {
            what: "rows",
            expected: source_cells,
            got: rows.len(),
        });
    }
    let mut values = Vec::with_capacity(source_cells * target_cells);
    for row in rows {
        if row.len() != target_cells {
            return Err(CsvError::LengthMismatch {
                what: "columns",
                expected: target_cells,
                got: row.len(),
            });
        }
        values.extend(row);
    }
    Ok(Kernel::new(source_cells, target_cells, values).expect("counted"))
}
