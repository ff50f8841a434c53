pub mod arcs;
pub mod bounds;
pub mod caps;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod gf2e;
pub mod harness;
pub mod pointset;
pub mod search;
pub mod surd;

pub use error::{Error, Result};
