//! Approximate mode finding for Gaussian kernel density estimates.

pub mod coresets;
pub mod datasets;
pub mod dimred;
pub mod error;
pub mod kde;
pub mod meanshift;
pub mod oracle;
pub mod params;
pub mod points;
pub mod polysolve;
pub mod rect2d;
pub mod verify;

pub use error::{Error, Result};
pub use kde::{kde, kde_unnormalized, kernel, search_radius};
pub use params::{ModeResult, SolveParams};
pub use points::PointSet;
