//! The firing semantics cell by cell: excess fields, the strict Heaviside
//! step, partial firing per carrier kind, and the integral product.
//!
//! ```bash
//! cargo run -p chtw --example firing_rules
//! ```

use chtw::firing::{heaviside, integral_firing, partial_firing, partial_firing_detail};
use chtw::HKind;

fn main() {
    // theta(0) = 0: a mark exactly at its threshold does not enable firing
    for x in [-1.5, 0.0, 1e-9, 4.0] {
        println!("theta({x}) = {}", heaviside(x).unwrap());
    }
    println!();

    // one 5-cell brane, mark ramping over a constant threshold and rate
    let m = vec![0.0, 1.0, 2.0, 3.0, 4.0];
    let h = vec![1.0; 5];
    let r = vec![2.0; 5];
    let detail = partial_firing_detail(HKind::Normal, &m, &h, &r).unwrap();
    println!("mark                 {m:?}");
    println!("excess over h        {:?}", detail.delta);
    println!("excess over r        {:?}", detail.delta_r);
    println!("normal partial       {:?}", detail.partial);

    // blocking inverts: it fires (allows) strictly below the threshold,
    // and blocks at the boundary
    let blocking = partial_firing(HKind::Blocking, &m, &[4.0; 5], &r).unwrap();
    println!("blocking (b = 4)     {blocking:?}");

    // associative only asks for the threshold, never consumes
    let associative = partial_firing(HKind::Associative, &m, &h, &r).unwrap();
    println!("associative (a = 1)  {associative:?}");

    // the integral firing field is the pointwise product of all partials
    let d = integral_firing(
        "t",
        5,
        &[detail.partial.clone(), blocking.clone(), associative.clone()],
    )
    .unwrap();
    println!("product              {:?}", d.values);
    println!("fired cells          {}", d.fired_cells());

    // no incoming carriers: the empty product fires everywhere
    let source = integral_firing("source", 5, &[]).unwrap();
    println!("no inputs            {:?}", source.values);
}
