// Index loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod heisenberg;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod mirror;
pub mod presets;
pub mod quiver;
pub mod star;
pub mod structure;
pub mod theta;
