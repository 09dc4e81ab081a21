//! Complex root multisets, real root candidates and bounded root finding.

mod broot;
mod complex;
pub mod exact;
mod real;

pub use broot::{broot, broot_instance, BrootOutcome, BrootStatus, BROOT_SLACK_BITS};
pub use complex::{monic_complex_roots, select_real_root, ComplexEnclosure, RootMultiset};
pub use real::{
    nonzero_witness, nonzero_witness_at, real_root_candidates, root_candidates, RootCandidate,
    WITNESS_PRECISION_CAP,
};
