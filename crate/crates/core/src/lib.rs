//! Finite ring constructions and witness-producing decision procedures for
//! Armendariz-type ring properties.

pub mod constructions;
pub mod dsl;
pub mod error;
pub mod harness;
pub mod poly;
pub mod properties;
pub mod ring;
pub mod witness;

pub use constructions::{Limits, RingDescriptor};
pub use error::RingError;
pub use ring::{Element, Idx, Ring, Subset, Value};
