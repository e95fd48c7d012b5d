//! Dual Brunn–Minkowski machinery at desk scale.
//!
//! Star bodies are represented by their radial functions sampled on a
//! spherical quadrature grid; dual mixed volumes become weighted sums,
//! multilinear body functionals become finite polymeasures (tensors over
//! partition atoms), and the characterization of the dual mixed volume
//! (vanishing on essentially disjoint tuples ⇔ orthogonally additive
//! associated polynomial ⇔ diagonal measure representation) turns into an
//! executable test harness.
//!
//! The crate is `no_std` + `alloc`; all floating-point transcendentals go
//! through `libm` so results are identical with or without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod body;
pub mod dual;
pub mod error;
pub mod functional;
pub mod grid;
pub mod polymeasure;

mod kahan;

pub use body::{RadialFunction, StarBodySpec};
pub use dual::{dual_mixed_volume, lutwak_check, polarize, polynomial_value, LutwakReport};
pub use error::{Error, Result};
pub use functional::{Backing, BodyFunctional, CheckReport, ViolationWitness};
pub use grid::{Rotation, SphereGrid};
pub use polymeasure::{FinitePartition, PolyMeasure, Semivariation, SemivariationMode};

pub(crate) use kahan::KahanSum;
