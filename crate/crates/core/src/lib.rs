pub mod error;
pub mod experiment;
pub mod instances;
pub mod master;
pub mod minmax;
pub mod model;
pub mod problems;
pub mod regret;
pub mod rng;

pub use error::{Error, Result};
