//! Instances of the all-or-unique-choice problem over the unit cube, and
//! polynomials whose coefficients they reveal.

pub mod instance;
pub mod potential;

pub use instance::{default_point, resolve_within, AoucInstance, Resolution, State, Tally};
pub use potential::{
    coefficient_bound, embed, potential_add, potential_from_unipoly, potential_mul,
    potential_root_candidates, PotentialUniPoly, RootSlots,
};
