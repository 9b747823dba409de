//! Exact rational workbench for Clifford algebras, Kuga-Satake complex
//! structures, Weil-type endomorphisms, harmonic decompositions of symmetric
//! powers and the Betti-number bounds that follow from them.
//!
//! Everything in this crate is computed over the rationals. There is no
//! floating point anywhere in the library; complex eigenspaces are reached
//! through kernels of real polynomials in the relevant operators.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the
//! command line and the seeded verification suite live in the `ksw` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod betti;
pub mod clifford;
pub mod corr;
mod error;
pub mod hodge;
pub mod kuga_satake;
pub mod linalg;
pub mod qspace;
pub mod sympow;
pub mod weil;

pub use error::{Error, Result};
pub use linalg::{Matrix, Rational, Subspace};
