pub mod diffalg;
pub mod double_bracket;
pub mod cli;
pub mod dcd;
pub mod dpva;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod ncpoly;
pub mod rep_kr;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
