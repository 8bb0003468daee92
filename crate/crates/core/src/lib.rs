//! Edge-level view of distributions over graph structures.
//!
//! A distribution over undirected graphs induces a multivariate Bernoulli
//! distribution on the `k = n(n-1)/2` vertex pairs; a distribution over DAGs
//! induces a multivariate Trinomial one (`-1`, `0`, `+1` per pair). This crate
//! estimates those distributions from graph collections, computes their first
//! and second moments and covariance eigenvalues, and derives normalised
//! structural-variability measures. Exhaustive enumeration ([`census`]) and
//! uniform sampling ([`sampler`]) supply the maximum-entropy references.

pub mod census;
pub mod edgedist;
mod error;
pub mod graph;
pub mod learn;
pub mod matrix;
pub mod measures;
pub mod sampler;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{ArcState, EdgeIndexMap, Graph};
