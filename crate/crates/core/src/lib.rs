//! Exact computations with representations of bound quivers: d-exact
//! sequences, relative Grothendieck groups and the index.

pub mod algebra;
pub mod approx;
pub mod dexact;
pub mod error;
pub mod exactla;
pub mod fpfun;
pub mod kgroups;
pub mod par;
pub mod repmod;
pub mod samples;

pub use error::{Error, Result};
