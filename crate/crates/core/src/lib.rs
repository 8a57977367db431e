pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod freespace;
pub mod green;
pub mod oscillator;
pub mod quad;
pub mod scan;
pub mod solver;
pub mod specfn;
pub mod variational;

pub use error::{Error, Result};
