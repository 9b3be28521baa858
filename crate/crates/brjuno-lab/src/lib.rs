//! A numerical laboratory for continued fractions, Diophantine growth
//! conditions on their denominators, logarithmic-kernel potential theory,
//! capacity estimation, and gauge-function cover measures.
//!
//! The crate is organized around certified computation: exact big-integer and
//! rational arithmetic wherever possible, outward-rounded MPFR intervals
//! where logarithms and real powers are unavoidable, and three-valued
//! verdicts for every rigorous comparison. Each major capability has a
//! runnable example under `examples/`, and the `brjuno-lab` binary exposes
//! the same operations as reproducible subcommands.

pub mod capacity;
pub mod cf;
pub mod cli;
pub mod config;
pub mod dioph;
pub mod error;
pub mod hausdorff;
pub mod potential;
pub mod real;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use real::{RealInterval, Verdict, DEFAULT_PREC};
