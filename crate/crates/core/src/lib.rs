pub mod abpe;
pub mod cauchy;
pub mod cli;
pub mod coloring;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod measure;

pub use error::{Error, Result};
pub use num_complex::Complex64;
