//! Graph polynomials, canonical forms, Feynman periods, the even graph
//! complex and Voronoi cells of quadratic forms.

pub mod error;
pub mod graph;

pub use error::{Error, Result};
pub mod cli;
pub mod forms;
pub mod gc;
pub mod period;
pub mod poly;
pub mod voronoi;
