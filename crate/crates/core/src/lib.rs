//! Spectral analysis of tailless overlapped arithmetic codes.
//!
//! The crate computes the coset cardinality spectrum (CCS) and the Hamming
//! distance spectrum (HDS) of rate-`r` overlapped arithmetic codes over
//! binary sources, together with the shift-function geometry that links
//! them and an exact algebraic toolkit for the third-order distance term.
//!
//! It builds without `std` (only `alloc` is required). The default `std`
//! feature enables multi-threaded enumeration through rayon.
//!
//! Module overview:
//!
//! * [`bitseq`]: encoder, coset index, coset partition and projections.
//! * [`ccs`]: discretized CCS densities (fixed point, backward recursion,
//!   enumeration) and derived functionals.
//! * [`shift`]: shift function, coexisting intervals, active sets and the
//!   quantized shift census.
//! * [`hds`]: the exhaustive oracle and the binomial, soft, hard and fast
//!   approximations.
//! * [`algebra`]: polynomials over the rationals and real algebraic rates.
//! * [`convergence`]: closed forms for ψ(1), ψ(2) and the species calculus
//!   behind ψ(3;n).

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod algebra;
pub mod bitseq;
pub mod budget;
pub mod ccs;
pub mod convergence;
mod enumerate;
mod error;
mod fmath;
pub mod hds;
mod par;
mod params;
pub mod shift;

pub use budget::Budget;
pub use error::{Error, Result};
pub use params::{CodeParams, INTEGER_GUARD};
