//! Simulation and analysis of compound symmetry groups generated by discrete
//! rotations of overlapping disks in the plane.

pub mod constructions;
pub mod critical;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod orbit;
pub mod render;

pub use error::{Error, Result};
pub use geometry::{DiskSpec, DiskSystem, PlanePoint, Word};
