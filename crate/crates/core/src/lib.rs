//! Exact computer algebra for noncommutative central conics.

pub mod cmap;
pub mod dataset;
pub mod elements;
pub mod findim;
pub mod freealg;
pub mod galgebra;
pub mod homog;
pub mod geometry;
pub mod linalg;
pub mod parse;
pub mod quadratic;
pub mod rewrite;
pub mod scalar;
