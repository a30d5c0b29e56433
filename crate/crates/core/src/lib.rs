pub mod error;
pub mod par;
pub mod probvec;
pub mod qudit;
pub mod cvstate;
pub mod cumulant;
pub mod cli;
pub mod quad;
pub mod random;

pub use error::{Error, Result};
