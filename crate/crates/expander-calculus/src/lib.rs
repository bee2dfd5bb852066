//! Expander-graph calculus: regular multigraphs with exact integer edge
//! multiplicities, the five graph products (tensor, zigzag, replacement,
//! balanced replacement, derandomized square), Cesàro averages and edge
//! completion, Euclidean and general-kernel Poincaré constants (exact by
//! enumeration on finite targets), metric Markov cotype checks, heat-kernel
//! base graphs on hypercube code quotients, and the iterative pipeline that
//! turns a seed expander into a 3-regular expander family.

pub mod codes;
pub mod error;
pub mod exact;
pub mod graph;
pub mod heat;
pub mod io;
pub mod matrix;
pub mod par;
pub mod pipeline;
pub mod poincare;
pub mod products;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::RegularMultigraph;
pub use matrix::StochasticMatrix;
