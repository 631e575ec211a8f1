//! Spaces and their rectangular discretizations.
//!
//! A [`Space`] is an ordered list of named axes; zero axes is a legal *point
//! space* that models 0-dimensional branes. A [`Grid`] fixes the
//! discretization of a space into uniform cells and defines the single
//! canonical ordering used everywhere else in the crate: row-major with the
//! first axis slowest. Field arrays, CSV files and trace rows all follow it.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("INVALID_AXIS: {0}")]
    InvalidAxis(String),
    #[error("INDEX_OUT_OF_RANGE: linear index {index} not in [0, {cells})")]
    IndexOutOfRange { index: usize, cells: usize },
    #[error("SHAPE_MISMATCH: multi-index has {got} components, the space has {dims} axes")]
    RankMismatch { got: usize, dims: usize },
}

/// One coordinate axis: the interval `[min, max]` split into `cells` equal cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub cells: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, min: f64, max: f64, cells: usize) -> Self {
        Self {
            name: name.into(),
            min,
            max,
            cells,
        }
    }

    /// Width of one cell along this axis.
    pub fn cell_width(&self) -> f64 {
        (self.max - self.min) / self.cells as f64
    }

    pub(crate) fn check(&self) -> Result<(), GridError> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(GridError::InvalidAxis(format!(
                "axis '{}' has non-finite bounds",
                self.name
            )));
        }
        if self.max <= self.min {
            return Err(GridError::InvalidAxis(format!(
                "axis '{}' requires max > min (got [{}, {}])",
                self.name, self.min, self.max
            )));
        }
        if self.cells == 0 {
            return Err(GridError::InvalidAxis(format!(
                "axis '{}' requires at least one cell",
                self.name
            )));
        }
        Ok(())
    }
}

/// An n-dimensional space, `n >= 0`. Branes are defined on spaces; the
/// dimension of a brane is the dimension of its space.
#[derive(Debug, Clone, PartialEq)]
pub struct Space {
    pub id: String,
    pub axes: Vec<Axis>,
}

impl Space {
    pub fn new(id: impl Into<String>, axes: Vec<Axis>) -> Self {
        Self {
            id: id.into(),
            axes,
        }
    }

    /// A 0-dimensional space: one cell, unit volume. Reduces branes to
    /// classical Petri-net places.
    pub fn point(id: impl Into<String>) -> Self {
        Self::new(id, Vec::new())
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub(crate) fn check(&self) -> Result<(), GridError> {
        for axis in &self.axes {
            axis.check()?;
        }
        for (i, axis) in self.axes.iter().enumerate() {
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(GridError::InvalidAxis(format!(
                    "duplicate axis name '{}' in space '{}'",
                    axis.name, self.id
                )));
            }
        }
        Ok(())
    }
}

/// Row-major discretization of a space, first axis slowest. Immutable after
/// construction and safe to share across concurrent readers.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    space: Space,
    total_cells: usize,
    cell_volume: f64,
}

impl Grid {
    /// Builds the grid for a space. A point space yields one cell of volume 1.
    pub fn build(space: &Space) -> Result<Self, GridError> {
        space.check()?;
        let total_cells = space.axes.iter().map(|a| a.cells).product::<usize>().max(1);
        let cell_volume = space.axes.iter().map(Axis::cell_width).product::<f64>();
        Ok(Self {
            space: space.clone(),
            total_cells,
            cell_volume,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn total_cells(&self) -> usize {
        self.total_cells
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    fn check_index(&self, linear: usize) -> Result<(), GridError> {
        if linear >= self.total_cells {
            Err(GridError::IndexOutOfRange {
                index: linear,
                cells: self.total_cells,
            })
        } else {
            Ok(())
        }
    }

    /// Inverse of the row-major linearization. A point grid maps 0 to the
    /// empty tuple.
    pub fn multi_index(&self, linear: usize) -> Result<Vec<usize>, GridError> {
        self.check_index(linear)?;
        let mut rem = linear;
        let mut out = vec![0usize; self.space.axes.len()];
        for (i, axis) in self.space.axes.iter().enumerate().rev() {
            out[i] = rem % axis.cells;
            rem /= axis.cells;
        }
        Ok(out)
    }

    /// Row-major linearization, first axis slowest.
    pub fn linearize(&self, multi: &[usize]) -> Result<usize, GridError> {
        if multi.len() != self.space.axes.len() {
            return Err(GridError::RankMismatch {
                got: multi.len(),
                dims: self.space.axes.len(),
            });
        }
        let mut linear = 0usize;
        for (axis, &ix) in self.space.axes.iter().zip(multi) {
            if ix >= axis.cells {
                return Err(GridError::IndexOutOfRange {
                    index: ix,
                    cells: axis.cells,
                });
            }
            linear = linear * axis.cells + ix;
        }
        Ok(linear)
    }

    /// Midpoint coordinates of the indexed cell, one value per axis.
    pub fn cell_center(&self, linear: usize) -> Result<Vec<f64>, GridError> {
        let multi = self.multi_index(linear)?;
        Ok(self
            .space
            .axes
            .iter()
            .zip(&multi)
            .map(|(axis, &ix)| axis.min + (ix as f64 + 0.5) * axis.cell_width())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_1d() -> Grid {
        Grid::build(&Space::new("X", vec![Axis::new("x", 0.0, 1.0, 4)])).unwrap()
    }

    #[test]
    fn unit_interval_four_cells() {
        let g = grid_1d();
        assert_eq!(g.total_cells(), 4);
        assert_eq!(g.cell_volume(), 0.25);
    }

    #[test]
    fn point_space_is_one_unit_cell() {
        let g = Grid::build(&Space::point("P")).unwrap();
        assert_eq!(g.total_cells(), 1);
        assert_eq!(g.cell_volume(), 1.0);
        assert_eq!(g.multi_index(0).unwrap(), Vec::<usize>::new());
        assert_eq!(g.linearize(&[]).unwrap(), 0);
    }

    #[test]
    fn two_axes_volume() {
        let s = Space::new(
            "XY",
            vec![Axis::new("x", 0.0, 2.0, 2), Axis::new("y", 0.0, 3.0, 3)],
        );
        let g = Grid::build(&s).unwrap();
        assert_eq!(g.total_cells(), 6);
        assert_eq!(g.cell_volume(), 1.0);
    }

    #[test]
    fn cell_centers_1d() {
        let g = grid_1d();
        assert_eq!(g.cell_center(0).unwrap(), vec![0.125]);
        assert_eq!(g.cell_center(3).unwrap(), vec![0.875]);
    }

    #[test]
    fn cell_center_2d_row_major() {
        let s = Space::new(
            "XY",
            vec![Axis::new("x", 0.0, 1.0, 2), Axis::new("y", 0.0, 1.0, 2)],
        );
        let g = Grid::build(&s).unwrap();
        // linear 2 decodes to (1, 0): first axis slowest
        assert_eq!(g.multi_index(2).unwrap(), vec![1, 0]);
        assert_eq!(g.cell_center(2).unwrap(), vec![0.75, 0.25]);
    }

    #[test]
    fn multi_index_2x3() {
        let s = Space::new(
            "XY",
            vec![Axis::new("x", 0.0, 1.0, 2), Axis::new("y", 0.0, 1.0, 3)],
        );
        let g = Grid::build(&s).unwrap();
        assert_eq!(g.multi_index(0).unwrap(), vec![0, 0]);
        assert_eq!(g.multi_index(5).unwrap(), vec![1, 2]);
    }

    #[test]
    fn round_trip_bijection() {
        let s = Space::new(
            "XYZ",
            vec![
                Axis::new("x", -1.0, 1.0, 3),
                Axis::new("y", 0.0, 5.0, 4),
                Axis::new("z", 2.0, 2.5, 5),
            ],
        );
        let g = Grid::build(&s).unwrap();
        for i in 0..g.total_cells() {
            let multi = g.multi_index(i).unwrap();
            assert_eq!(g.linearize(&multi).unwrap(), i);
        }
    }

    #[test]
    fn volume_times_cells_matches_extent() {
        let s = Space::new(
            "XY",
            vec![Axis::new("x", 0.0, 0.7, 13), Axis::new("y", -2.0, 9.0, 7)],
        );
        let g = Grid::build(&s).unwrap();
        let extent = 0.7 * 11.0;
        let product = g.cell_volume() * g.total_cells() as f64;
        assert!((product - extent).abs() / extent < 1e-12);
    }

    #[test]
    fn centers_inside_bounds() {
        let s = Space::new("X", vec![Axis::new("x", -3.0, 3.0, 7)]);
        let g = Grid::build(&s).unwrap();
        for i in 0..g.total_cells() {
            let c = g.cell_center(i).unwrap()[0];
            assert!(c > -3.0 && c < 3.0);
        }
    }

    #[test]
    fn invalid_axes_rejected() {
        let bad_range = Space::new("X", vec![Axis::new("x", 1.0, 1.0, 4)]);
        assert!(matches!(
            Grid::build(&bad_range),
            Err(GridError::InvalidAxis(_))
        ));
        let no_cells = Space::new("X", vec![Axis::new("x", 0.0, 1.0, 0)]);
        assert!(matches!(
            Grid::build(&no_cells),
            Err(GridError::InvalidAxis(_))
        ));
        let dup = Space::new(
            "X",
            vec![Axis::new("x", 0.0, 1.0, 2), Axis::new("x", 0.0, 1.0, 2)],
        );
        assert!(matches!(Grid::build(&dup), Err(GridError::InvalidAxis(_))));
    }

    #[test]
    fn index_out_of_range() {
        let g = grid_1d();
        assert!(matches!(
            g.multi_index(4),
            Err(GridError::IndexOutOfRange { index: 4, cells: 4 })
        ));
        assert!(g.cell_center(17).is_err());
    }
}
