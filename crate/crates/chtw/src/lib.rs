//! Simulation engine and model language for CHTW-systems: a multidimensional
//! generalization of Petri nets in which places (C-branes) hold spatially
//! distributed resources, transitions (T-branes) fire pointwise where
//! threshold and rate conditions hold, and arcs carry thresholds
//! (H-carriers) or cross-space transformations (W-carriers).
//!
//! The crate is organized along the model's moving parts:
//!
//! - [`space`]: spaces, axes and row-major grids;
//! - [`field`]: piecewise-constant parameter schedules and kernels;
//! - [`model`]: branes, carriers, the system fivetuple and validation;
//! - [`firing`]: Heaviside, partial and integral firing fields;
//! - [`dynamics`]: the synchronous step, W-carrier application, runs, traces;
//! - [`matrix`]: connectivity/uptake/W matrices and the matrix-form step;
//! - [`dsl`]: the `.chtw` text format and CSV field data;
//! - [`cli`]: the `validate`, `run`, `matrices` and `plotdata` commands.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/`
//! directory.
//!
//! ```
//! use chtw::{CBrane, CHTWSystem, HCarrier, HKind, Schedule, Space, TBrane, WCarrier};
//! use chtw::dynamics::{run, RunOptions};
//!
//! // source --(threshold 1)--> pump (rate 2) --(gain 2)--> sink
//! let mut system = CHTWSystem::new();
//! system
//!     .add_space(Space::point("P"))
//!     .add_cbrane(CBrane::new("source", "P", vec![5.0]))
//!     .add_cbrane(CBrane::new("sink", "P", vec![0.0]))
//!     .add_tbrane(TBrane::new("pump", "P", Schedule::constant(2.0, 1)))
//!     .add_hcarrier(HCarrier::new("enable", HKind::Normal, "source", "pump",
//!                                 Schedule::constant(1.0, 1)))
//!     .add_wcarrier(WCarrier::pointwise("move", "pump", "sink",
//!                                       Schedule::constant(2.0, 1)));
//! assert!(system.validate().is_empty());
//!
//! let trace = run(&system, 2, &RunOptions::default()).unwrap();
//! let last = &trace.entries.last().unwrap().state;
//! assert_eq!(last.mark("source").unwrap().values, vec![1.0]);
//! assert_eq!(last.mark("sink").unwrap().values, vec![4.0]);
//! ```

pub mod cli;
pub mod dsl;
pub mod dynamics;
pub mod field;
pub mod firing;
pub mod matrix;
pub mod model;
pub mod numfmt;
pub mod space;

pub use field::{FieldValues, Kernel, Schedule};
pub use firing::FiringField;
pub use model::{
    CBrane, CHTWSystem, DiagCode, Diagnostic, Diagnostics, HCarrier, HKind, MarkFunction,
    Severity, TBrane, WCarrier, WPayload,
};
pub use space::{Axis, Grid, Space};
