//! Persistent-homology summaries, exact distances between them, and
//! distance correlation between the resulting metric spaces.

pub mod complexes;
pub mod dcor;
pub mod dem;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod models;
pub mod negtype;
pub mod persistence;
pub mod rng;
pub mod summaries;

pub use error::{Error, Result};
