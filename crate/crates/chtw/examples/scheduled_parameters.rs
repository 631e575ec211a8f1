//! Non-stationary systems two ways: piecewise-constant schedules baked into
//! the model, and caller-supplied per-step overrides through `step_with`.
//!
//! ```bash
//! cargo run -p chtw --example scheduled_parameters
//! ```

use chtw::dynamics::{run, step_with, RunOptions, StepOverrides, SystemState};
use chtw::{CBrane, CHTWSystem, HCarrier, HKind, Schedule, Space, TBrane, WCarrier};

fn gate_system(threshold: Schedule<Vec<f64>>) -> CHTWSystem {
    let mut system = CHTWSystem::new();
    system
        .add_space(Space::point("P"))
        .add_cbrane(CBrane::new("lever", "P", vec![5.0]))
        .add_cbrane(CBrane::new("out", "P", vec![0.0]))
        .add_tbrane(TBrane::new("gen", "P", Schedule::constant(1.0, 1)))
        // associative: the lever gates the generator but is never consumed
        .add_hcarrier(HCarrier::new("gate", HKind::Associative, "lever", "gen", threshold))
        .add_wcarrier(WCarrier::pointwise("emit", "gen", "out", Schedule::constant(2.0, 1)));
    system
}

fn main() {
    // scheduled: the threshold jumps above the lever's mark at step 3
    let schedule = Schedule::new(vec![(0, vec![1.0]), (3, vec![9.0])]).unwrap();
    let system = gate_system(schedule);
    assert!(system.validate().is_empty());
    let trace = run(&system, 6, &RunOptions::default()).unwrap();
    println!("scheduled threshold {{0: 1, 3: 9}} against a constant mark of 5:");
    for record in &trace.firing_counts {
        println!("  step {}: generator fired in {} cell(s)", record.step, record.counts[0]);
    }
    let out = trace.entries.last().unwrap().state.mark("out").unwrap().values[0];
    println!("  output after 6 steps: {out} (2 per step, exactly 3 firing steps)\n");

    // overrides: same system, stationary schedule, threshold driven by hand
    let system = gate_system(Schedule::constant(1.0, 1));
    let mut state = SystemState::initial(&system);
    println!("per-step overrides (threshold = 9 on even steps):");
    for k in 0..6 {
        let overrides = if k % 2 == 0 {
            StepOverrides::new().threshold("gate", vec![9.0])
        } else {
            StepOverrides::new()
        };
        let (next, report) = step_with(&system, &state, &overrides).unwrap();
        println!("  step {k}: fired = {}", report.firing[0].values[0]);
        state = next;
    }
    println!("  output: {}", state.mark("out").unwrap().values[0]);
}
