//! Exact reconstruction of integer/rational functions on finite 2D and 3D
//! lattice grids from their line sums along a finite set of lattice
//! directions.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation over exact rationals; file formats and the command line live
//! in the companion `dtomo` crate.
//!
//! Layout:
//!
//! - [`lattice`]: grids, directions, canonical lines, forward projection.
//! - [`ghost`]: elementary switching functions, the switching union and the
//!   dimension of the solution space.
//! - [`hull`]: the convex hull of the switching union as a zonotope, its
//!   shadows on the coordinate planes, border fans and face audits.
//! - [`order2d`]: weights and weight-ordered solving schedules for 2D pages.
//! - [`recon`]: the peeling engine and the 2D / 3D reconstructors.

#![no_std]

extern crate alloc;

pub mod error;
pub mod ghost;
pub mod hull;
pub mod lattice;
pub mod ops;
pub mod order2d;
pub mod recon;

pub use error::{Error, Result};
pub use lattice::{Axis, Direction2, Direction3, Grid, Grid2, Grid3, LineKey, LineSumTable, Validity};
pub use ops::OpCounter;

/// Exact value type used for grid functions and line sums.
pub type Value = num_rational::BigRational;

/// Lattice point with signed coordinates (shifts, ghost supports, hull vertices).
pub type Point<const N: usize> = [i64; N];
