pub mod bits;
pub mod catalog;
pub mod closure;
pub mod dense;
pub mod entangle;
pub mod error;
pub mod genericity;
pub mod plane;
pub mod poset;
pub mod symbolic;

pub use error::{Error, Result};
