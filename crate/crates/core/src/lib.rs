pub mod cli;
pub mod error;
pub mod frames;
pub mod geometry;
pub mod jets;
pub mod lcf;
pub mod liegroup;
pub mod quad;
pub mod tensor;

pub use error::{Error, Result};

/// A point in chart coordinates `(x1, x2, x3)`.
pub type Point = [f64; 3];
