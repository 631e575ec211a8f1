//! Matrix formulation of the dynamics: connectivity matrices S_H and S_W,
//! the resource-uptake matrix R_s, the W-operator matrix and its transpose,
//! and a matrix-form step `m(k+1) = m(k) - R_s d(k) + W^T d(k)` that must
//! agree with the direct engine cell for cell.
//!
//! Rows and columns follow the system's declaration order. S_H counts every
//! H-carrier kind as a connection; only R_s zeroes the blocking and
//! associative entries, so a row whose brane connects purely through B/A
//! carriers becomes a zero row.

use serde_json::{json, Value};

use crate::dynamics::{firing_fields, EngineError, StepOverrides, SystemState};
use crate::field::FieldValues;
use crate::model::{CHTWSystem, HKind};

/// Binary connectivity patterns: `s_h[c][t]` and `s_w[t][c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityMatrices {
    pub cbrane_order: Vec<String>,
    pub tbrane_order: Vec<String>,
    pub s_h: Vec<Vec<u8>>,
    pub s_w: Vec<Vec<u8>>,
}

/// `entries[c][t]` is the rate field of T-brane `t` at the queried step when
/// the pair is connected by at least one normal carrier, `None` otherwise
/// (including blocking/associative connections, per the zero-row rule).
#[derive(Debug, Clone, PartialEq)]
pub struct UptakeMatrix {
    pub cbrane_order: Vec<String>,
    pub tbrane_order: Vec<String>,
    pub entries: Vec<Vec<Option<FieldValues>>>,
}

/// `entries[t][c]` lists the ids of W-carriers running t -> c (usually zero
/// or one). The transpose view indexes the same storage as `[c][t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WMatrix {
    pub tbrane_order: Vec<String>,
    pub cbrane_order: Vec<String>,
    pub entries: Vec<Vec<Vec<String>>>,
}

impl WMatrix {
    /// W^T entry: carriers at row `c`, column `t`.
    pub fn transposed(&self, c: usize, t: usize) -> &[String] {
        &self.entries[t][c]
    }
}

fn order_ids(system: &CHTWSystem) -> (Vec<String>, Vec<String>) {
    (
        system.cbranes().iter().map(|b| b.id.clone()).collect(),
        system.tbranes().iter().map(|b| b.id.clone()).collect(),
    )
}

/// S_H and S_W patterns in declaration order.
pub fn connectivity_matrices(system: &CHTWSystem) -> ConnectivityMatrices {
    let (cbrane_order, tbrane_order) = order_ids(system);
    let mut s_h = vec![vec![0u8; tbrane_order.len()]; cbrane_order.len()];
    for carrier in system.hcarriers() {
        if let (Some(c), Some(t)) = (
            system.cbrane_position(&carrier.source),
            system.tbrane_position(&carrier.target),
        ) {
            s_h[c][t] = 1;
        }
    }
    let mut s_w = vec![vec![0u8; cbrane_order.len()]; tbrane_order.len()];
    for carrier in system.wcarriers() {
        if let (Some(t), Some(c)) = (
            system.tbrane_position(&carrier.source),
            system.cbrane_position(&carrier.target),
        ) {
            s_w[t][c] = 1;
        }
    }
    ConnectivityMatrices {
        cbrane_order,
        tbrane_order,
        s_h,
        s_w,
    }
}

/// R_s at step `k`: each normal-carrier unit of S_H replaced by the target
/// T-brane's rate; blocking/associative entries stay zero.
pub fn uptake_matrix(system: &CHTWSystem, k: u64) -> UptakeMatrix {
    let (cbrane_order, tbrane_order) = order_ids(system);
    let mut entries: Vec<Vec<Option<FieldValues>>> =
        vec![vec![None; tbrane_order.len()]; cbrane_order.len()];
    for carrier in system.hcarriers() {
        if carrier.kind != HKind::Normal {
            continue;
        }
        if let (Some(c), Some(t)) = (
            system.cbrane_position(&carrier.source),
            system.tbrane_position(&carrier.target),
        ) {
            let rate = system.tbranes()[t].rate.at_step(k).clone();
            entries[c][t] = Some(rate);
        }
    }
    UptakeMatrix {
        cbrane_order,
        tbrane_order,
        entries,
    }
}

/// The W-operator matrix as carrier references, `[dim T x dim C]`.
pub fn w_matrix(system: &CHTWSystem) -> WMatrix {
    let (cbrane_order, tbrane_order) = order_ids(system);
    let mut entries: Vec<Vec<Vec<String>>> =
        vec![vec![Vec::new(); cbrane_order.len()]; tbrane_order.len()];
    for carrier in system.wcarriers() {
        if let (Some(t), Some(c)) = (
            system.tbrane_position(&carrier.source),
            system.cbrane_position(&carrier.target),
        ) {
            entries[t][c].push(carrier.id.clone());
        }
    }
    WMatrix {
        tbrane_order,
        cbrane_order,
        entries,
    }
}

/// Evaluates `m(k+1) = m(k) - R_s(k) d(k) + W^T(k) d(k)` entry-wise. Rate
/// entries apply pointwise; W entries apply through [`crate::dynamics::apply_w`].
/// Must agree with [`crate::dynamics::step`] on every validated system.
pub fn matrix_step(system: &CHTWSystem, state: &SystemState) -> Result<SystemState, EngineError> {
    let diags = system.validate();
    if diags.has_errors() {
        return Err(EngineError::UnvalidatedSystem(diags));
    }
    let k = state.step;
    let d = firing_fields(system, state, &StepOverrides::default())?;
    let uptake = uptake_matrix(system, k);
    let w = w_matrix(system);

    let mut next = SystemState {
        step: k + 1,
        marks: state.marks.clone(),
    };
    for (c, mark) in next.marks.iter_mut().enumerate() {
        for (t, d_t) in d.iter().enumerate() {
            if let Some(rate) = &uptake.entries[c][t] {
                if rate.len() != mark.values.len() {
                    return Err(EngineError::Shape(format!(
                        "R_s entry ({c}, {t}) has {} values, mark has {}",
                        rate.len(),
                        mark.values.len()
                    )));
                }
                for (value, (r, bit)) in mark
                    .values
                    .iter_mut()
                    .zip(rate.iter().zip(&d_t.values))
                {
                    *value -= r * f64::from(*bit);
                }
            }
            for carrier_id in w.transposed(c, t) {
                let carrier = system.wcarrier(carrier_id).expect("carrier from w_matrix");
                let contrib = crate::dynamics::apply_w(system, carrier, d_t, k)?;
                for (value, add) in mark.values.iter_mut().zip(&contrib) {
                    *value += add;
                }
            }
        }
    }
    Ok(next)
}

/// JSON export of the matrix objects at step `k`: orderings, binary
/// patterns, scalar rates on point spaces and references elsewhere.
pub fn matrices_json(system: &CHTWSystem, k: u64) -> Value {
    let conn = connectivity_matrices(system);
    let uptake = uptake_matrix(system, k);
    let w = w_matrix(system);

    let r_s: Vec<Vec<Value>> = uptake
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(t, entry)| match entry {
                    None => Value::Null,
                    Some(values) if values.len() == 1 => json!(values[0]),
                    Some(_) => json!({ "rate_of": uptake.tbrane_order[t] }),
                })
                .collect()
        })
        .collect();

    let w_entries: Vec<Vec<Value>> = w
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|ids| {
                    if ids.is_empty() {
                        Value::Null
                    } else {
                        json!({ "carriers": ids })
                    }
                })
                .collect()
        })
        .collect();
    let w_transpose: Vec<Vec<Value>> = (0..w.cbrane_order.len())
        .map(|c| (0..w.tbrane_order.len()).map(|t| w_entries[t][c].clone()).collect())
        .collect();

    json!({
        "step": k,
        "cbrane_order": conn.cbrane_order,
        "tbrane_order": conn.tbrane_order,
        "s_h": conn.s_h,
        "s_w": conn.s_w,
        "r_s": r_s,
        "w": w_entries,
        "w_transpose": w_transpose,
    })
}
