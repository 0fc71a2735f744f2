pub mod algebra;
pub mod domains;
pub mod embedding;
pub mod error;
pub mod geodesic;
pub mod group;
pub mod kernel;
pub mod ptilde;

pub use error::{Error, Result};
