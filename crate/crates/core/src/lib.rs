//! Exact weighted Ehrhart functions and series of lattice polytopes, weight
//! lifting polytopes, Hilbert bases, and a verification battery.

pub mod algebra;
pub mod error;
pub mod lift;
pub mod linalg;
pub mod polytope;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
