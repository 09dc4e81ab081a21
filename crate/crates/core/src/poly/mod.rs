//! Degree-bounded polynomials over precision-stream reals.

mod minimize;
mod multi;
mod proj;
mod psc;
pub mod text;
mod uni;

pub use minimize::{hypercube_min_abs, make_zero, min_abs_real};
pub(crate) use multi::horner_and_power_form;
pub use multi::MultiPoly;
pub use proj::{clean_family, proj};
pub use psc::{psc, psc_candidates, sylvester, Matrix};
pub use uni::UniPoly;
