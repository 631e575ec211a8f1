//! Synchronous dynamics: one-step updates, W-carrier application, multi-step
//! runs and traces.
//!
//! A step is fully synchronous: every firing decision and every update term
//! reads the marks of step `k` only, and the marks of step `k+1` are written
//! into a fresh buffer. Per C-brane, the update is
//!
//! ```text
//! m_c(k+1) = m_c(k)
//!          - sum over T-branes normally connected to c of  r_p(k) * d_p(k)
//!          + sum over W-carriers p -> c of                 w(d_p(k))
//! ```
//!
//! Resource is taken up once per connected (C, T) pair regardless of how
//! many parallel normal carriers realize the connection, which is exactly
//! what the matrix form `m - R_s d + W^T d` computes. Blocking and
//! associative sources are never debited. The equation is applied literally
//! even when simultaneously enabled T-branes overdraw a shared C-brane; the
//! resulting negative cells are reported as `NEGATIVE_RESOURCE` diagnostics
//! and, under [`RunOptions::strict`], stop the run.

use std::collections::HashMap;

use thiserror::Error;

use crate::field::{FieldValues, Kernel};
use crate::firing::{integral_firing, partial_firing, FiringError, FiringField};
use crate::model::{CHTWSystem, DiagCode, Diagnostic, Diagnostics, HKind, MarkFunction, WPayload};
use crate::space::GridError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("UNVALIDATED_SYSTEM: the system has validation errors; run validate() for details")]
    UnvalidatedSystem(Diagnostics),
    #[error(transparent)]
    Firing(#[from] FiringError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("SHAPE_MISMATCH: {0}")]
    Shape(String),
    #[error("INVALID_OPTIONS: {0}")]
    InvalidOptions(String),
}

/// Marks of all C-branes at one step, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub step: u64,
    pub marks: Vec<MarkFunction>,
}

impl SystemState {
    /// State at step 0: the initial mark-functions of the system.
    pub fn initial(system: &CHTWSystem) -> Self {
        Self {
            step: 0,
            marks: system
                .cbranes()
                .iter()
                .map(|b| MarkFunction {
                    brane: b.id.clone(),
                    values: b.initial.clone(),
                })
                .collect(),
        }
    }

    pub fn mark(&self, brane: &str) -> Option<&MarkFunction> {
        self.marks.iter().find(|m| m.brane == brane)
    }
}

/// Caller-supplied per-step parameter overrides, keyed by id. An override
/// replaces the scheduled value for the step being computed; anything not
/// overridden falls back to its schedule.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepOverrides {
    thresholds: HashMap<String, FieldValues>,
    rates: HashMap<String, FieldValues>,
    gains: HashMap<String, FieldValues>,
    kernels: HashMap<String, Kernel>,
}

impl StepOverrides {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn threshold(mut self, hcarrier: impl Into<String>, values: FieldValues) -> Self {
        self.thresholds.insert(hcarrier.into(), values);
        self
    }

    pub fn rate(mut self, tbrane: impl Into<String>, values: FieldValues) -> Self {
        self.rates.insert(tbrane.into(), values);
        self
    }

    pub fn gain(mut self, wcarrier: impl Into<String>, values: FieldValues) -> Self {
        self.gains.insert(wcarrier.into(), values);
        self
    }

    pub fn kernel(mut self, wcarrier: impl Into<String>, kernel: Kernel) -> Self {
        self.kernels.insert(wcarrier.into(), kernel);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
            && self.rates.is_empty()
            && self.gains.is_empty()
            && self.kernels.is_empty()
    }
}

/// Volume-weighted consumed/produced totals of one C-brane over one step.
#[derive(Debug, Clone, PartialEq)]
pub struct BraneDelta {
    pub brane: String,
    pub consumed: f64,
    pub produced: f64,
}

/// Everything one step decided and did: firing fields per T-brane (in
/// declaration order), per-brane totals, and runtime diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    /// The step that was computed (firing decisions read the marks of this step).
    pub step: u64,
    pub firing: Vec<FiringField>,
    pub deltas: Vec<BraneDelta>,
    pub diagnostics: Vec<Diagnostic>,
}

impl StepReport {
    pub fn has_negative_resource(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.code == DiagCode::NegativeResource)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Stop the run as soon as a step produces a negative cell.
    pub strict: bool,
    /// Record full states every this many steps (the final state is always
    /// recorded). Must be >= 1.
    pub sample_every: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            strict: false,
            sample_every: 1,
        }
    }
}

/// One recorded state, with the report of the step that left it (absent on
/// the final state).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub state: SystemState,
    pub report: Option<StepReport>,
}

/// Per-step integral resource record.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceRecord {
    pub step: u64,
    /// Volume-weighted total per C-brane, declaration order.
    pub per_brane: Vec<f64>,
    /// The system's integral resource M.
    pub total: f64,
}

/// Cells fired per T-brane (declaration order) at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringRecord {
    pub step: u64,
    pub counts: Vec<usize>,
}

/// Result of a multi-step run. Sampled full states live in `entries`;
/// resource totals and firing counts are recorded for every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub resources: Vec<ResourceRecord>,
    pub firing_counts: Vec<FiringRecord>,
    pub diagnostics: Vec<Diagnostic>,
    /// Step index the run stopped at when `strict` aborted it.
    pub stopped_early: Option<u64>,
}

fn ensure_validated(system: &CHTWSystem) -> Result<(), EngineError> {
    let diags = system.validate();
    if diags.has_errors() {
        Err(EngineError::UnvalidatedSystem(diags))
    } else {
        Ok(())
    }
}

fn check_state(system: &CHTWSystem, state: &SystemState) -> Result<(), EngineError> {
    if state.marks.len() != system.cbranes().len() {
        return Err(EngineError::Shape(format!(
            "state has {} mark-functions, system has {} C-branes",
            state.marks.len(),
            system.cbranes().len()
        )));
    }
    for (brane, mark) in system.cbranes().iter().zip(&state.marks) {
        if brane.id != mark.brane {
            return Err(EngineError::Shape(format!(
                "state mark order mismatch: expected '{}', found '{}'",
                brane.id, mark.brane
            )));
        }
        let cells = system.grid(&brane.space)?.total_cells();
        if mark.values.len() != cells {
            return Err(EngineError::Shape(format!(
                "mark of '{}' has {} values, grid has {cells} cells",
                brane.id,
                mark.values.len()
            )));
        }
    }
    Ok(())
}

fn overridden<'a>(
    map: &'a HashMap<String, FieldValues>,
    id: &str,
    scheduled: &'a [f64],
    cells: usize,
    what: &str,
) -> Result<&'a [f64], EngineError> {
    match map.get(id) {
        None => Ok(scheduled),
        Some(values) if values.len() == cells => Ok(values),
        Some(values) => Err(EngineError::Shape(format!(
            "{what} override for '{id}' has {} values, grid has {cells} cells",
            values.len()
        ))),
    }
}

/// Firing fields of every T-brane (declaration order) computed from the
/// given state's marks.
pub fn firing_fields(
    system: &CHTWSystem,
    state: &SystemState,
    overrides: &StepOverrides,
) -> Result<Vec<FiringField>, EngineError> {
    let k = state.step;
    let mut fields = Vec::with_capacity(system.tbranes().len());
    for tbrane in system.tbranes() {
        let cells = system.grid(&tbrane.space)?.total_cells();
        let rate = overridden(
            &overrides.rates,
            &tbrane.id,
            tbrane.rate.at_step(k),
            cells,
            "rate",
        )?;
        let mut partials = Vec::new();
        for carrier in system.hcarriers().iter().filter(|h| h.target == tbrane.id) {
            let source_ix = system
                .cbrane_position(&carrier.source)
                .expect("validated system");
            let m = &state.marks[source_ix].values;
            let threshold = overridden(
                &overrides.thresholds,
                &carrier.id,
                carrier.threshold.at_step(k),
                cells,
                "threshold",
            )?;
            partials.push(partial_firing(carrier.kind, m, threshold, rate)?);
        }
        fields.push(integral_firing(&tbrane.id, cells, &partials)?);
    }
    Ok(fields)
}

fn apply_w_resolved(
    system: &CHTWSystem,
    carrier: &crate::model::WCarrier,
    d: &FiringField,
    k: u64,
    overrides: &StepOverrides,
) -> Result<FieldValues, EngineError> {
    let source = system
        .tbrane(&carrier.source)
        .ok_or_else(|| EngineError::Shape(format!("unknown T-brane '{}'", carrier.source)))?;
    let target = system
        .cbrane(&carrier.target)
        .ok_or_else(|| EngineError::Shape(format!("unknown C-brane '{}'", carrier.target)))?;
    let source_grid = system.grid(&source.space)?;
    let target_grid = system.grid(&target.space)?;
    if d.values.len() != source_grid.total_cells() {
        return Err(EngineError::Shape(format!(
            "firing field has {} cells, source grid of '{}' has {}",
            d.values.len(),
            carrier.id,
            source_grid.total_cells()
        )));
    }
    match &carrier.payload {
        WPayload::Pointwise(gain) => {
            let gain = overridden(
                &overrides.gains,
                &carrier.id,
                gain.at_step(k),
                source_grid.total_cells(),
                "gain",
            )?;
            Ok(gain
                .iter()
                .zip(&d.values)
                .map(|(g, &bit)| g * f64::from(bit))
                .collect())
        }
        WPayload::Kernel(kernel) => {
            let kernel = overrides
                .kernels
                .get(&carrier.id)
                .unwrap_or_else(|| kernel.at_step(k));
            if kernel.source_cells() != source_grid.total_cells()
                || kernel.target_cells() != target_grid.total_cells()
            {
                return Err(EngineError::Shape(format!(
                    "kernel of '{}' is {}x{}, grids have {}x{} cells",
                    carrier.id,
                    kernel.source_cells(),
                    kernel.target_cells(),
                    source_grid.total_cells(),
                    target_grid.total_cells()
                )));
            }
            // discrete integral over the source space
            let vol = source_grid.cell_volume();
            let mut out = vec![0.0; target_grid.total_cells()];
            for (x, &bit) in d.values.iter().enumerate() {
                if bit == 0 {
                    continue;
                }
                for (y, o) in out.iter_mut().enumerate() {
                    *o += kernel.value(x, y) * vol;
                }
            }
            Ok(out)
        }
    }
}

/// Resource produced on the carrier's target grid by firing field `d` at
/// step `k`. Pointwise mode is `gain(x) * d(x)` on the shared grid; kernel
/// mode integrates `kernel(x, y) * d(x)` over the source cells.
pub fn apply_w(
    system: &CHTWSystem,
    carrier: &crate::model::WCarrier,
    d: &FiringField,
    k: u64,
) -> Result<FieldValues, EngineError> {
    apply_w_resolved(system, carrier, d, k, &StepOverrides::default())
}

fn step_unchecked(
    system: &CHTWSystem,
    state: &SystemState,
    overrides: &StepOverrides,
) -> Result<(SystemState, StepReport), EngineError> {
    check_state(system, state)?;
    let k = state.step;
    let firing = firing_fields(system, state, overrides)?;

    let mut next = SystemState {
        step: k + 1,
        marks: state.marks.clone(),
    };
    let mut deltas: Vec<BraneDelta> = system
        .cbranes()
        .iter()
        .map(|b| BraneDelta {
            brane: b.id.clone(),
            consumed: 0.0,
            produced: 0.0,
        })
        .collect();
    let mut diagnostics = Vec::new();

    for (ci, cbrane) in system.cbranes().iter().enumerate() {
        let vol = system.grid(&cbrane.space)?.cell_volume();
        let mut consumed_raw = 0.0;
        let mut produced_raw = 0.0;

        // uptake: once per (C, T) pair connected by at least one normal carrier
        for (ti, tbrane) in system.tbranes().iter().enumerate() {
            let connected = system.hcarriers().iter().any(|h| {
                h.kind == HKind::Normal && h.source == cbrane.id && h.target == tbrane.id
            });
            if !connected {
                continue;
            }
            let cells = next.marks[ci].values.len();
            let rate = overridden(
                &overrides.rates,
                &tbrane.id,
                tbrane.rate.at_step(k),
                cells,
                "rate",
            )?;
            let d = &firing[ti].values;
            for (i, value) in next.marks[ci].values.iter_mut().enumerate() {
                let take = rate[i] * f64::from(d[i]);
                *value -= take;
                consumed_raw += take;
            }
        }

        // production from W-carriers, declaration order
        for carrier in system.wcarriers().iter().filter(|w| w.target == cbrane.id) {
            let ti = system
                .tbrane_position(&carrier.source)
                .expect("validated system");
            let contrib = apply_w_resolved(system, carrier, &firing[ti], k, overrides)?;
            for (value, c) in next.marks[ci].values.iter_mut().zip(&contrib) {
                *value += c;
                produced_raw += c;
            }
        }

        deltas[ci].consumed = consumed_raw * vol;
        deltas[ci].produced = produced_raw * vol;

        for (i, value) in next.marks[ci].values.iter().enumerate() {
            if *value < 0.0 {
                diagnostics.push(Diagnostic::error(
                    DiagCode::NegativeResource,
                    format!("mark of '{}' went negative: {value}", cbrane.id),
                    format!("cbrane {} cell {i} step {}", cbrane.id, k + 1),
                ));
            }
        }
    }

    Ok((
        next,
        StepReport {
            step: k,
            firing,
            deltas,
            diagnostics,
        },
    ))
}

/// One synchronous step: firing fields from the marks of step `k`, then the
/// update to step `k+1`. Negative cells are reported, not clamped.
pub fn step(
    system: &CHTWSystem,
    state: &SystemState,
) -> Result<(SystemState, StepReport), EngineError> {
    ensure_validated(system)?;
    step_unchecked(system, state, &StepOverrides::default())
}

/// [`step`] with caller-supplied parameter overrides for this step.
pub fn step_with(
    system: &CHTWSystem,
    state: &SystemState,
    overrides: &StepOverrides,
) -> Result<(SystemState, StepReport), EngineError> {
    ensure_validated(system)?;
    step_unchecked(system, state, overrides)
}

/// Volume-weighted per-brane totals and the integral resource M of a state.
pub fn resource_record(
    system: &CHTWSystem,
    state: &SystemState,
) -> Result<ResourceRecord, EngineError> {
    let mut per_brane = Vec::with_capacity(state.marks.len());
    for (brane, mark) in system.cbranes().iter().zip(&state.marks) {
        let grid = system.grid(&brane.space)?;
        per_brane.push(crate::model::total_resource(&mark.values, &grid));
    }
    Ok(ResourceRecord {
        step: state.step,
        total: per_brane.iter().sum(),
        per_brane,
    })
}

/// Applies [`step`] exactly `steps` times from the initial marking and
/// records the trace. Resource totals and firing counts are kept for every
/// step; full states only every `sample_every` steps (plus the final state).
pub fn run(system: &CHTWSystem, steps: u64, options: &RunOptions) -> Result<Trace, EngineError> {
    ensure_validated(system)?;
    if options.sample_every == 0 {
        return Err(EngineError::InvalidOptions(
            "sample_every must be at least 1".into(),
        ));
    }

    let mut trace = Trace {
        entries: Vec::new(),
        resources: Vec::new(),
        firing_counts: Vec::new(),
        diagnostics: Vec::new(),
        stopped_early: None,
    };
    let mut state = SystemState::initial(system);
    trace.resources.push(resource_record(system, &state)?);

    for _ in 0..steps {
        let (next, report) = step_unchecked(system, &state, &StepOverrides::default())?;
        trace.firing_counts.push(FiringRecord {
            step: report.step,
            counts: report.firing.iter().map(FiringField::fired_cells).collect(),
        });
        trace.diagnostics.extend(report.diagnostics.iter().cloned());
        let abort = options.strict && report.has_negative_resource();
        if state.step.is_multiple_of(options.sample_every) {
            trace.entries.push(TraceEntry {
                state: state.clone(),
                report: Some(report),
            });
        }
        state = next;
        trace.resources.push(resource_record(system, &state)?);
        if abort {
            trace.stopped_early = Some(state.step);
            break;
        }
    }

    trace.entries.push(TraceEntry {
        state,
        report: None,
    });
    Ok(trace)
}
