//! Core algorithms for stable spectral embedding of dynamic networks.
//!
//! A dynamic network is a sequence of graph snapshots over a shared node
//! set. This crate builds the unfolded operators (adjacency or normalized
//! Laplacian variants), computes truncated SVD embeddings with
//! method-specific singular-value selection, generates dynamic stochastic
//! block model data, and evaluates embeddings through clustering metrics,
//! stability reports, and Cheeger-style conductance bounds.
//!
//! The crate is `no_std` (with `alloc`); file formats and the CLI live in
//! the companion `dynspect` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cheeger;
pub mod error;
pub mod graph;
pub mod kmeans;
pub mod matrix;
pub mod metrics;
pub mod operators;
pub mod sbm;
pub mod spectral;
pub mod stability;

mod eigen;

pub use error::{Error, Result};
pub use graph::{DegreeSummary, DynamicGraph};
pub use matrix::Matrix;
pub use operators::{OperatorVariant, UnfoldedOperator};
pub use sbm::{SbmModel, SbmSample, SyntheticPreset};
pub use spectral::{EmbeddingMethod, EmbeddingResult, Selection, SvdResult};
