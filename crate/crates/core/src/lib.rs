pub mod algebra;
pub mod atlas;
pub mod cli;
pub mod conjugacy;
pub mod counting;
pub mod error;
pub mod json;
pub mod perm;
pub mod verifier;

pub use error::{Error, Result};
