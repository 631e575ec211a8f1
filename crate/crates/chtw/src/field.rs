//! Parameter fields and their step schedules.
//!
//! Every parameter of a CHTW-system (thresholds, rates, gains, kernels) is a
//! [`Schedule`]: a piecewise-constant function of the step index `k`. A
//! single entry starting at step 0 is the stationary case; additional
//! entries realize non-stationary systems.

use thiserror::Error;

/// Field values over a grid, one entry per cell in row-major order.
pub type FieldValues = Vec<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("INVALID_SCHEDULE: {0}")]
    InvalidSchedule(String),
    #[error("SHAPE_MISMATCH: kernel expects {rows}x{cols} = {expected} values, got {got}")]
    KernelShape {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
}

/// A piecewise-constant, step-indexed schedule. The first entry starts at
/// step 0 and start steps strictly increase, so a lookup is defined for
/// every `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T> {
    entries: Vec<(u64, T)>,
}

impl<T> Schedule<T> {
    /// A single entry at step 0: the stationary case.
    pub fn stationary(value: T) -> Self {
        Self {
            entries: vec![(0, value)],
        }
    }

    pub fn new(entries: Vec<(u64, T)>) -> Result<Self, FieldError> {
        match entries.first() {
            None => {
                return Err(FieldError::InvalidSchedule(
                    "schedule needs at least one entry".into(),
                ))
            }
            Some((start, _)) if *start != 0 => {
                return Err(FieldError::InvalidSchedule(format!(
                    "first schedule entry must start at step 0, got {start}"
                )))
            }
            _ => {}
        }
        if entries.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(FieldError::InvalidSchedule(
                "schedule start steps must strictly increase".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Value in effect at step `k`: the entry with the greatest start step
    /// `<= k`.
    pub fn at_step(&self, k: u64) -> &T {
        let pos = self.entries.partition_point(|(start, _)| *start <= k);
        &self.entries[pos - 1].1
    }

    pub fn entries(&self) -> &[(u64, T)] {
        &self.entries
    }

    pub fn is_stationary(&self) -> bool {
        self.entries.len() == 1
    }
}

impl Schedule<FieldValues> {
    /// Stationary constant field over a grid of `cells` cells.
    pub fn constant(value: f64, cells: usize) -> Self {
        Self::stationary(vec![value; cells])
    }
}

/// A cross-space linear kernel: `source_cells` rows by `target_cells`
/// columns, row-major. Entry `(x, y)` is the resource produced per unit
/// firing per unit source volume at source cell `x` into target cell `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    source_cells: usize,
    target_cells: usize,
    values: Vec<f64>,
}

impl Kernel {
    pub fn new(source_cells: usize, target_cells: usize, values: Vec<f64>) -> Result<Self, FieldError> {
        let expected = source_cells * target_cells;
        if values.len() != expected {
            return Err(FieldError::KernelShape {
                rows: source_cells,
                cols: target_cells,
                expected,
                got: values.len(),
            });
        }
        Ok(Self {
            source_cells,
            target_cells,
            values,
        })
    }

    pub fn uniform(source_cells: usize, target_cells: usize, value: f64) -> Self {
        Self {
            source_cells,
            target_cells,
            values: vec![value; source_cells * target_cells],
        }
    }

    pub fn source_cells(&self) -> usize {
        self.source_cells
    }

    pub fn target_cells(&self) -> usize {
        self.target_cells
    }

    pub fn value(&self, source: usize, target: usize) -> f64 {
        self.values[source * self.target_cells + target]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
