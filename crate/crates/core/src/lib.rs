//! Filtered representations of ladder quivers: exact linear algebra,
//! stability, filtrations, one-parameter subgroup limits and semi-invariants.

pub mod error;
pub mod exactla;
pub mod quiver;
pub mod rep;
pub mod stability;
pub mod filtr;
pub mod git;
pub mod semiinv;
pub mod criteria;

pub use error::{Error, Result};
