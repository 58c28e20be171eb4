//! Topological entropy of braids from the exponential growth of Dynnikov
//! coordinates.
//!
//! A braid word acts on the coordinate vector of a reference lamination;
//! the number of times the image crosses the real axis grows like
//! `exp(h·m)` after `m` applications, where `h` is the braid's entropy.

pub mod analysis;
pub mod cli;
pub mod dynnikov;
pub mod entropy;
pub mod error;
pub mod export;
pub mod float_orbit;
pub mod search;
pub mod word;

pub use error::{Error, Result};
