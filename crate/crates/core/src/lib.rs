//! Algebraic hypergraphs over prime fields.
//!
//! Instances are `r`-uniform hypergraphs whose edges are decided by the zero
//! pattern of a few low-degree polynomials. The crate materializes them,
//! extracts large homogeneous sets and regular partitions with verifiable
//! witnesses, and checks the rank, zero-pattern and forbidden-pattern bounds
//! that make those algorithms work.

pub mod algebra;
pub mod bits;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod hypergraph;
pub mod oracles;
pub mod par;
pub mod patterns;
pub mod ramsey;
pub mod regularity;
pub mod rng;
pub mod sweeps;
pub mod tensor;

pub use error::{Error, Result};
