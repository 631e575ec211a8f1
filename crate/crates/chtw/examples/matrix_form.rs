//! The matrix view of a system: connectivity patterns S_H and S_W, the
//! uptake matrix R_s (with its zero rows for blocking/associative inputs),
//! the W-operator matrix, and the matrix-form step as a cross-check of the
//! direct engine.
//!
//! ```bash
//! cargo run -p chtw --example matrix_form
//! ```

use std::path::Path;

use chtw::dynamics::{step, SystemState};
use chtw::matrix::{connectivity_matrices, matrices_json, matrix_step, uptake_matrix, w_matrix};
use chtw::dsl;

fn main() {
    let model = Path::new(env!("CARGO_MANIFEST_DIR")).join("models/blocking_gate.chtw");
    let system = dsl::parse_file(&model).unwrap();
    assert!(system.validate().is_empty());

    let conn = connectivity_matrices(&system);
    println!("C-branes: {:?}", conn.cbrane_order);
    println!("T-branes: {:?}\n", conn.tbrane_order);
    println!("S_H (every carrier kind counts as a connection):");
    for (row, brane) in conn.s_h.iter().zip(&conn.cbrane_order) {
        println!("  {brane:10} {row:?}");
    }

    println!("\nR_s (only normal carriers take up resource; B/A rows are zero):");
    let uptake = uptake_matrix(&system, 0);
    for (row, brane) in uptake.entries.iter().zip(&uptake.cbrane_order) {
        let cells: Vec<String> = row
            .iter()
            .map(|e| match e {
                Some(values) => format!("{}", values[0]),
                None => "0".into(),
            })
            .collect();
        println!("  {brane:10} [{}]", cells.join(", "));
    }

    println!("\nW^T (carrier references):");
    let w = w_matrix(&system);
    for (c, brane) in w.cbrane_order.iter().enumerate() {
        let cells: Vec<String> = (0..w.tbrane_order.len())
            .map(|t| {
                let refs = w.transposed(c, t);
                if refs.is_empty() {
                    "0".into()
                } else {
                    refs.join("+")
                }
            })
            .collect();
        println!("  {brane:10} [{}]", cells.join(", "));
    }

    // the matrix equation m(k+1) = m(k) - R_s d(k) + W^T d(k) reproduces the
    // direct engine step for step
    let mut state = SystemState::initial(&system);
    for _ in 0..4 {
        let by_matrix = matrix_step(&system, &state).unwrap();
        let (by_engine, _) = step(&system, &state).unwrap();
        assert_eq!(by_matrix, by_engine);
        state = by_engine;
    }
    println!("\nmatrix step == engine step over 4 steps");

    println!("\nJSON export (as written by `chtw matrices`):");
    println!("{}", serde_json::to_string_pretty(&matrices_json(&system, 0)).unwrap());
}
