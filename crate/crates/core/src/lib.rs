//! Solving polynomial inequality systems and normal-form games whose data are
//! known only through convergent rational approximations.

pub mod aouc;
pub mod cad;
pub mod error;
pub mod nash;
pub mod poly;
pub mod reals;
pub mod roots;
pub mod solve;

pub use error::{Error, Result};
