//! Classical Petri-net emulation on point spaces: integer marks, integer
//! uptake r, thresholds at r - 0.5. A stage forwards tokens while its input
//! strictly exceeds the uptake, so the pipeline drains to a fixed point.
//!
//! ```bash
//! cargo run -p chtw --example token_game
//! ```

use chtw::dynamics::{run, RunOptions};
use chtw::{CBrane, CHTWSystem, HCarrier, HKind, Schedule, Space, TBrane, WCarrier};

fn main() {
    // a -> [t_ab] -> b -> [t_bc] -> c, two tokens per firing
    let mut net = CHTWSystem::new();
    net.add_space(Space::point("P"));
    for (place, tokens) in [("a", 9.0), ("b", 0.0), ("c", 0.0)] {
        net.add_cbrane(CBrane::new(place, "P", vec![tokens]));
    }
    for (transition, input, output) in [("t_ab", "a", "b"), ("t_bc", "b", "c")] {
        let uptake = 2.0;
        net.add_tbrane(TBrane::new(transition, "P", Schedule::constant(uptake, 1)));
        net.add_hcarrier(HCarrier::new(
            format!("h_{input}"),
            HKind::Normal,
            input,
            transition,
            Schedule::constant(uptake - 0.5, 1),
        ));
        net.add_wcarrier(WCarrier::pointwise(
            format!("w_{output}"),
            transition,
            output,
            Schedule::constant(2.0, 1),
        ));
    }
    assert!(net.validate().is_empty());

    let trace = run(&net, 8, &RunOptions::default()).unwrap();
    println!("step |  a  b  c | fired");
    println!("-----+----------+----------");
    for entry in &trace.entries {
        let m: Vec<i64> = entry.state.marks.iter().map(|f| f.values[0] as i64).collect();
        let fired = entry
            .report
            .as_ref()
            .map(|r| {
                r.firing
                    .iter()
                    .filter(|f| f.values[0] == 1)
                    .map(|f| f.tbrane.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .unwrap_or_default();
        println!("  {:2} | {:2} {:2} {:2} | {fired}", entry.state.step, m[0], m[1], m[2]);
    }
    println!("\neach stage stops once its input no longer strictly exceeds the uptake,");
    println!("stranding a small residue upstream while the rest reaches the sink");
}
