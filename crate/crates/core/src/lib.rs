//! Hyperplane nets and hyperplane sequences over finite fields.
//!
//! The crate builds digital nets from generating vectors over polynomial
//! residue rings, extends them to digital sequences, computes their quality
//! parameters through the figure of merit, and verifies equidistribution
//! properties exactly: elementary-interval counting and exact star
//! discrepancy on digit-exact point sets.

pub mod algebra;
pub mod discrepancy;
pub mod duality;
pub mod error;
pub mod lnseq;
pub mod matrix;
pub mod netgen;
pub mod points;
pub mod search;
pub mod seqgen;
pub mod verify;

pub use error::{Error, Result};
