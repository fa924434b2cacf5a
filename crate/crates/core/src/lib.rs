//! Latent geometry detection for undirected networks.
//!
//! A network's geodesic distance matrix is embedded in the Euclidean plane
//! and in the Poincaré disk; the difference in stress between the two
//! embeddings is the test statistic. Three decision procedures are
//! provided in [`inference`]: a direct stress comparison, a permutation
//! test and a conditional parametric bootstrap under a planar Gaussian
//! latent position model.

pub mod cli;
pub mod embedding;
pub mod error;
pub mod genmodel;
pub mod geodist;
pub mod graph;
pub mod inference;
mod linalg;
pub mod report;
pub mod study;

pub use error::{Error, Result};
