//! A 1-D pulse spreading through a banded cross-space kernel. The kernel
//! rows integrate to exactly the uptake, so the total resource is conserved
//! while the pulse stays away from the rod ends.
//!
//! ```bash
//! cargo run -p chtw --example spatial_diffusion
//! ```

use chtw::dynamics::{run, RunOptions};
use chtw::{Axis, CBrane, CHTWSystem, HCarrier, HKind, Kernel, Schedule, Space, TBrane, WCarrier};

const CELLS: usize = 30;

fn main() {
    let mut system = CHTWSystem::new();
    system.add_space(Space::new(
        "rod",
        vec![Axis::new("x", 0.0, 1.0, CELLS)],
    ));

    // a rectangular pulse in the middle third
    let init: Vec<f64> = (0..CELLS)
        .map(|i| if (10..20).contains(&i) { 9.0 } else { 0.0 })
        .collect();
    system.add_cbrane(CBrane::new("blob", "rod", init));
    system.add_tbrane(TBrane::new("spread", "rod", Schedule::constant(1.0, CELLS)));
    system.add_hcarrier(HCarrier::new(
        "h",
        HKind::Normal,
        "blob",
        "spread",
        Schedule::constant(0.5, CELLS),
    ));

    // banded kernel: diag + neighbors, scaled so each interior row moves
    // exactly the uptake (sum * cell_volume = rate)
    let vol = 1.0 / CELLS as f64;
    let mut kernel = vec![0.0; CELLS * CELLS];
    for x in 0..CELLS {
        for y in 0..CELLS {
            let band = match x.abs_diff(y) {
                0 => 0.5,
                1 => 0.25,
                _ => 0.0,
            };
            kernel[x * CELLS + y] = band / vol;
        }
    }
    system.add_wcarrier(WCarrier::kernel(
        "w",
        "spread",
        "blob",
        Schedule::stationary(Kernel::new(CELLS, CELLS, kernel).unwrap()),
    ));
    assert!(system.validate().is_empty());

    let trace = run(&system, 40, &RunOptions { strict: false, sample_every: 8 }).unwrap();
    let shades: Vec<char> = " .:-=+*#%@".chars().collect();
    println!("pulse profile every 8 steps (darker = more resource):\n");
    for entry in &trace.entries {
        let row: String = entry.state.marks[0]
            .values
            .iter()
            .map(|v| {
                let bucket = ((v / 9.0) * (shades.len() - 1) as f64).round() as usize;
                shades[bucket.min(shades.len() - 1)]
            })
            .collect();
        println!(
            "step {:3} |{row}| M = {:.6}",
            entry.state.step,
            trace.resources[entry.state.step as usize].total
        );
    }
}
