//! Shared test support: an independent brute-force oracle for the step
//! semantics, random system and net generators, and small helpers.
//!
//! The oracle is deliberately written from scratch against the defining
//! per-cell formulas - scalar arithmetic, its own Heaviside, its own
//! schedule lookup, its own volume computation - and never calls into the
//! engine's firing or dynamics code paths.

#![allow(dead_code)]
// the oracle indexes cells explicitly so the code mirrors the formulas
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

use chtw::field::Schedule;
use chtw::model::{CHTWSystem, HKind, WPayload};
use chtw::{CBrane, HCarrier, Kernel, Space, TBrane, WCarrier};
use rand::prelude::*;
use rand::rngs::StdRng;

// ---------------------------------------------------------------------------
// brute-force oracle
// ---------------------------------------------------------------------------

fn theta(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn lookup<T>(schedule: &Schedule<T>, k: u64) -> &T {
    let mut current = &schedule.entries()[0].1;
    for (start, value) in schedule.entries() {
        if *start <= k {
            current = value;
        }
    }
    current
}

fn space_cells(space: &Space) -> usize {
    let mut n = 1usize;
    for axis in &space.axes {
        n *= axis.cells;
    }
    n
}

fn space_volume(space: &Space) -> f64 {
    let mut v = 1.0;
    for axis in &space.axes {
        v *= (axis.max - axis.min) / axis.cells as f64;
    }
    v
}

/// One synchronous step evaluated cell by cell from the defining formulas.
/// `marks` is indexed by C-brane declaration order. Returns the next marks
/// and the firing field of every T-brane (declaration order).
pub fn oracle_step(
    system: &CHTWSystem,
    marks: &[Vec<f64>],
    k: u64,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let cpos = |id: &str| {
        system
            .cbranes()
            .iter()
            .position(|b| b.id == id)
            .expect("known C-brane")
    };

    // firing: d_p(x) = prod over incoming carriers of the partial condition
    let mut firing: Vec<Vec<f64>> = Vec::new();
    for tbrane in system.tbranes() {
        let cells = space_cells(system.space(&tbrane.space).unwrap());
        let rate = lookup(&tbrane.rate, k);
        let mut d = vec![1.0; cells];
        for carrier in system.hcarriers() {
            if carrier.target != tbrane.id {
                continue;
            }
            let m = &marks[cpos(&carrier.source)];
            let h = lookup(&carrier.threshold, k);
            for (x, dx) in d.iter_mut().enumerate() {
                let partial = match carrier.kind {
                    HKind::Normal => theta(m[x] - h[x]) * theta(m[x] - rate[x]),
                    HKind::Blocking => theta(-(m[x] - h[x])),
                    HKind::Associative => theta(m[x] - h[x]),
                };
                *dx *= partial;
            }
        }
        firing.push(d);
    }

    let tpos = |id: &str| {
        system
            .tbranes()
            .iter()
            .position(|b| b.id == id)
            .expect("known T-brane")
    };

    // update: m' = m - sum of r_p d_p over normally connected pairs
    //             + sum of w(d_p) over incoming W-carriers
    let mut next: Vec<Vec<f64>> = marks.to_vec();
    for (ci, cbrane) in system.cbranes().iter().enumerate() {
        let cells = next[ci].len();
        for (ti, tbrane) in system.tbranes().iter().enumerate() {
            let connected = system.hcarriers().iter().any(|h| {
                h.kind == HKind::Normal && h.source == cbrane.id && h.target == tbrane.id
            });
            if !connected {
                continue;
            }
            let rate = lookup(&tbrane.rate, k);
            for x in 0..cells {
                next[ci][x] -= rate[x] * firing[ti][x];
            }
        }
        for carrier in system.wcarriers() {
            if carrier.target != cbrane.id {
                continue;
            }
            let ti = tpos(&carrier.source);
            let d = &firing[ti];
            match &carrier.payload {
                WPayload::Pointwise(gain) => {
                    let g = lookup(gain, k);
                    for x in 0..cells {
                        next[ci][x] += g[x] * d[x];
                    }
                }
                WPayload::Kernel(kernel) => {
                    let kern = lookup(kernel, k);
                    let source_space = system
                        .space(&system.tbrane(&carrier.source).unwrap().space)
                        .unwrap();
                    let vol = space_volume(source_space);
                    for y in 0..cells {
                        for (x, dx) in d.iter().enumerate() {
                            next[ci][y] += kern.value(x, y) * dx * vol;
                        }
                    }
                }
            }
        }
    }
    (next, firing)
}

/// Iterates [`oracle_step`] from the system's initial marks.
pub fn oracle_run(system: &CHTWSystem, steps: u64) -> (Vec<Vec<Vec<f64>>>, Vec<Vec<Vec<f64>>>) {
    let mut marks: Vec<Vec<f64>> = system.cbranes().iter().map(|b| b.initial.clone()).collect();
    let mut states = vec![marks.clone()];
    let mut firings = Vec::new();
    for k in 0..steps {
        let (next, firing) = oracle_step(system, &marks, k);
        states.push(next.clone());
        firings.push(firing);
        marks = next;
    }
    (states, firings)
}

// ---------------------------------------------------------------------------
// random CHTW systems
// ---------------------------------------------------------------------------

fn random_field(rng: &mut StdRng, cells: usize, max: f64) -> Vec<f64> {
    if rng.random_bool(0.5) {
        (0..cells)
            .map(|_| rng.random_range(0..=(max as i64)) as f64)
            .collect()
    } else {
        (0..cells).map(|_| rng.random_range(0.0..max)).collect()
    }
}

fn random_schedule(rng: &mut StdRng, cells: usize, max: f64) -> Schedule<Vec<f64>> {
    if rng.random_bool(0.3) {
        let mut entries = vec![(0u64, random_field(rng, cells, max))];
        let mut start = 0u64;
        for _ in 0..rng.random_range(1..=2) {
            start += rng.random_range(1..=4);
            entries.push((start, random_field(rng, cells, max)));
        }
        Schedule::new(entries).unwrap()
    } else {
        Schedule::stationary(random_field(rng, cells, max))
    }
}

/// A random valid system: up to 3 spaces of dimension <= 3 (occasionally a
/// long 1-D grid), up to 4 branes of each kind, mixed carrier kinds, mixed
/// integer/float fields so threshold-boundary equalities actually occur.
pub fn random_system(rng: &mut StdRng) -> CHTWSystem {
    let mut system = CHTWSystem::new();

    let n_spaces = rng.random_range(1..=3);
    for s in 0..n_spaces {
        let dims = rng.random_range(0..=3);
        let mut axes = Vec::new();
        if dims == 1 && rng.random_bool(0.2) {
            // long rod, up to the 10^3-cell bound
            axes.push(chtw::Axis::new(
                "x0",
                0.0,
                rng.random_range(0.5..3.0),
                rng.random_range(200..=1000),
            ));
        } else {
            for d in 0..dims {
                let min = rng.random_range(-2.0..2.0);
                axes.push(chtw::Axis::new(
                    format!("x{d}"),
                    min,
                    min + rng.random_range(0.5..3.0),
                    rng.random_range(1..=8),
                ));
            }
        }
        system.add_space(Space::new(format!("S{s}"), axes));
    }
    let space_ids: Vec<String> = system.spaces().iter().map(|s| s.id.clone()).collect();
    let cells_of: Vec<usize> = system.spaces().iter().map(space_cells).collect();

    let n_c = rng.random_range(1..=4);
    for i in 0..n_c {
        let s = rng.random_range(0..space_ids.len());
        system.add_cbrane(CBrane::new(
            format!("c{i}"),
            space_ids[s].clone(),
            random_field(rng, cells_of[s], 10.0),
        ));
    }
    let n_t = rng.random_range(1..=4);
    for i in 0..n_t {
        let s = rng.random_range(0..space_ids.len());
        system.add_tbrane(TBrane::new(
            format!("t{i}"),
            space_ids[s].clone(),
            random_schedule(rng, cells_of[s], 4.0),
        ));
    }

    let space_of_c: Vec<String> = system.cbranes().iter().map(|b| b.space.clone()).collect();
    let space_of_t: Vec<String> = system.tbranes().iter().map(|b| b.space.clone()).collect();
    let cells_of_space =
        |id: &str| cells_of[space_ids.iter().position(|s| s == id).unwrap()];

    let mut h_count = 0;
    for _ in 0..rng.random_range(0..=6) {
        let t = rng.random_range(0..n_t);
        let candidates: Vec<usize> = (0..n_c)
            .filter(|&c| space_of_c[c] == space_of_t[t])
            .collect();
        let Some(&c) = candidates.choose(rng) else {
            continue;
        };
        let cells = cells_of_space(&space_of_t[t]);
        let kind = match rng.random_range(0..10) {
            0..=5 => HKind::Normal,
            6..=7 => HKind::Blocking,
            _ => HKind::Associative,
        };
        system.add_hcarrier(HCarrier::new(
            format!("h{h_count}"),
            kind,
            format!("c{c}"),
            format!("t{t}"),
            random_schedule(rng, cells, 8.0),
        ));
        h_count += 1;
    }

    let mut w_count = 0;
    for _ in 0..rng.random_range(0..=6) {
        let t = rng.random_range(0..n_t);
        let c = rng.random_range(0..n_c);
        let source_cells = cells_of_space(&space_of_t[t]);
        let target_cells = cells_of_space(&space_of_c[c]);
        let same_space = space_of_t[t] == space_of_c[c];
        let id = format!("w{w_count}");
        if same_space && rng.random_bool(0.7) {
            system.add_wcarrier(WCarrier::pointwise(
                id,
                format!("t{t}"),
                format!("c{c}"),
                random_schedule(rng, source_cells, 3.0),
            ));
        } else {
            if source_cells * target_cells > 50_000 {
                continue;
            }
            let kernel = if rng.random_bool(0.5) {
                Kernel::uniform(source_cells, target_cells, rng.random_range(0.0..2.0))
            } else {
                Kernel::new(
                    source_cells,
                    target_cells,
                    (0..source_cells * target_cells)
                        .map(|_| rng.random_range(0.0..2.0))
                        .collect(),
                )
                .unwrap()
            };
            system.add_wcarrier(WCarrier::kernel(
                id,
                format!("t{t}"),
                format!("c{c}"),
                Schedule::stationary(kernel),
            ));
        }
        w_count += 1;
    }

    let diags = system.validate();
    assert!(!diags.has_errors(), "generator must build valid systems: {diags:?}");
    system
}

// ---------------------------------------------------------------------------
// reference token game (classical emulation)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RefTransition {
    pub uptake: i64,
    pub inputs: Vec<usize>,
    /// (place, produced tokens per firing)
    pub outputs: Vec<(usize, i64)>,
}

#[derive(Debug, Clone)]
pub struct RefNet {
    pub places: usize,
    pub initial: Vec<i64>,
    pub transitions: Vec<RefTransition>,
}

/// Synchronous maximal-parallel token game with integer marks. A transition
/// is enabled where every input place holds strictly more than its uptake
/// (the strict-step boundary), all enabled transitions fire at once, and a
/// firing consumes `uptake` from each input and adds the arc weight to each
/// output. Generated nets give each place at most one consumer, so there
/// are no conflicts to arbitrate.
pub fn ref_token_game(net: &RefNet, steps: usize) -> Vec<Vec<i64>> {
    let mut marks = net.initial.clone();
    let mut history = vec![marks.clone()];
    for _ in 0..steps {
        let fired: Vec<bool> = net
            .transitions
            .iter()
            .map(|t| t.inputs.iter().all(|&s| marks[s] > t.uptake))
            .collect();
        let mut next = marks.clone();
        for (t, transition) in net.transitions.iter().enumerate() {
            if !fired[t] {
                continue;
            }
            for &s in &transition.inputs {
                next[s] -= transition.uptake;
            }
            for &(s, w) in &transition.outputs {
                next[s] += w;
            }
        }
        marks = next;
        history.push(marks.clone());
    }
    history
}

/// Conflict-free random net: every place feeds at most one transition.
pub fn random_ref_net(rng: &mut StdRng) -> RefNet {
    let places = rng.random_range(1..=5);
    let transitions = rng.random_range(1..=4);
    let initial: Vec<i64> = (0..places).map(|_| rng.random_range(0..=10)).collect();
    let mut unused: Vec<usize> = (0..places).collect();
    unused.shuffle(rng);
    let transitions = (0..transitions)
        .map(|_| {
            let n_inputs = rng.random_range(0..=2.min(unused.len()));
            let inputs: Vec<usize> = (0..n_inputs).map(|_| unused.pop().unwrap()).collect();
            let mut outputs: Vec<(usize, i64)> = Vec::new();
            for _ in 0..rng.random_range(0..=2) {
                let place = rng.random_range(0..places);
                if outputs.iter().all(|(p, _)| *p != place) {
                    outputs.push((place, rng.random_range(1..=3)));
                }
            }
            RefTransition {
                uptake: rng.random_range(1..=3),
                inputs,
                outputs,
            }
        })
        .collect();
    RefNet {
        places,
        initial,
        transitions,
    }
}

/// The CHTW encoding of a reference net: point-space branes, integer marks,
/// `rate = uptake` and `threshold = uptake - 0.5`.
pub fn chtw_from_ref_net(net: &RefNet) -> CHTWSystem {
    let mut system = CHTWSystem::new();
    system.add_space(Space::point("P"));
    for (i, &m) in net.initial.iter().enumerate() {
        system.add_cbrane(CBrane::new(format!("s{i}"), "P", vec![m as f64]));
    }
    for (j, t) in net.transitions.iter().enumerate() {
        system.add_tbrane(TBrane::new(
            format!("t{j}"),
            "P",
            Schedule::constant(t.uptake as f64, 1),
        ));
        for &s in &t.inputs {
            system.add_hcarrier(HCarrier::new(
                format!("h{j}_{s}"),
                HKind::Normal,
                format!("s{s}"),
                format!("t{j}"),
                Schedule::constant(t.uptake as f64 - 0.5, 1),
            ));
        }
        for &(s, w) in &t.outputs {
            system.add_wcarrier(WCarrier::pointwise(
                format!("w{j}_{s}"),
                format!("t{j}"),
                format!("s{s}"),
                Schedule::constant(w as f64, 1),
            ));
        }
    }
    system
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn assert_close(a: f64, b: f64, tol: f64, context: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{context}: {a} vs {b} (|diff| = {})",
        (a - b).abs()
    );
}
