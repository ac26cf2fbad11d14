//! Kernel for a qubit coupled to a hierarchical environment, an auxiliary
//! qubit followed by a stream of ancillas, through partial-swap collisions.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computations: dense matrix routines in [`qmat`], physical states and
//! unitaries in [`model`], the collision protocol in [`dynamics`],
//! trace-distance non-Markovianity in [`nonmarkov`] and per-collision
//! thermodynamics in [`thermo`].

#![no_std]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod model;
pub mod nonmarkov;
pub mod qmat;
pub mod thermo;

pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, DensityOperator, HermitianOperator, C64};
