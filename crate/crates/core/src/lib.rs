//! Exact engine for fields on depth-filtered modules over vertex algebras.
//!
//! Everything here is `no_std` with `alloc`. The `std` feature adds a
//! per-field memo cache.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

mod error;

pub mod affine;
pub mod betagamma;
pub mod fields;
pub mod filtered;
pub mod induced;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod suites;

pub use error::Error;
pub use fields::Field;
pub use filtered::{FilteredVector, Monomial, Precision, VariableId};
pub use report::{CheckEntry, ModeWindow, Status};
pub use scalar::{Rational, Scalar};
