pub mod certificate;
pub mod dec;
mod error;
pub mod factor;
pub mod field;
pub mod flagmap;
pub mod intpoly;
pub mod lift;
pub mod norm;
pub mod plan;
pub mod psl2;
pub mod table;

pub use error::{Error, Result};
