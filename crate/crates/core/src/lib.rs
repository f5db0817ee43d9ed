//! Exact, desk-scale machinery for density Ramsey problems on homogeneous
//! trees and affine buildings.
//!
//! The crate is split by the object being counted:
//!
//! * [`root_system`]: root data, Weyl groups, coweights, sphere cardinalities.
//! * [`tree_lab`]: finite balls of the homogeneous tree `T_q`, atoms, densities
//!   and balanced-star search.
//! * [`bohr_lab`]: Bohr sets, the pruned tree `T_A` and the distance-avoidance
//!   counterexample.
//! * [`spherical_lab`]: the Fano flag complex and the `GQ(2,2)` flag complex as
//!   concrete rank-2 spherical buildings.
//! * [`building_calc`]: counting formulas for atoms, density bounds and
//!   star specifications over dominant coweights.
//! * [`padic`]: Cartan coordinates of rational matrices at a prime.

pub mod bohr_lab;
pub mod building_calc;
mod error;
pub mod json;
pub mod padic;
pub mod rational;
pub mod root_system;
pub mod spherical_lab;
pub mod tree_lab;

pub use error::{Error, Result};
