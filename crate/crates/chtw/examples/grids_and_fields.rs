//! Spaces, grids and distributed fields: how every brane stores its data.
//!
//! ```bash
//! cargo run -p chtw --example grids_and_fields
//! ```

use chtw::model::total_resource;
use chtw::{Axis, Grid, Space};

fn main() {
    // a point space is a classical Petri-net place: one cell, volume 1
    let point = Grid::build(&Space::point("P")).unwrap();
    println!(
        "point space: {} cell, volume {}",
        point.total_cells(),
        point.cell_volume()
    );

    // a 2-D space [0,2] x [0,3] with 2 x 3 cells
    let plane = Space::new(
        "plane",
        vec![Axis::new("x", 0.0, 2.0, 2), Axis::new("y", 0.0, 3.0, 3)],
    );
    let grid = Grid::build(&plane).unwrap();
    println!(
        "plane: {} cells of volume {}",
        grid.total_cells(),
        grid.cell_volume()
    );

    // linearization is row-major with the first axis slowest
    for linear in 0..grid.total_cells() {
        let multi = grid.multi_index(linear).unwrap();
        let center = grid.cell_center(linear).unwrap();
        println!("  cell {linear} -> index {multi:?} centered at {center:?}");
    }

    // fields are flat arrays over the grid; the integral resource weights by
    // cell volume, so it is stable under grid refinement
    let field = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    println!("total resource of {field:?}: {}", total_resource(&field, &grid));

    let fine = Grid::build(&Space::new(
        "fine",
        vec![Axis::new("x", 0.0, 2.0, 4), Axis::new("y", 0.0, 3.0, 6)],
    ))
    .unwrap();
    let refined: Vec<f64> = (0..fine.total_cells())
        .map(|i| {
            let m = fine.multi_index(i).unwrap();
            field[(m[0] / 2) * 3 + m[1] / 2]
        })
        .collect();
    println!(
        "same field refined 2x: total resource {}",
        total_resource(&refined, &fine)
    );
}
