//! Sculptability of higher-dimensional automata.

pub mod bulk;
pub mod corpus;
pub mod decide;
pub mod error;
pub mod euclid;
pub mod export;
pub mod events;
pub mod hintost;
pub mod partition;
pub mod path;
pub mod precubical;
pub mod pv;
pub mod random;
pub mod st;

pub use error::{Error, Result};
