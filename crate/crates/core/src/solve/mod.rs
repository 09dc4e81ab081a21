//! Bounded root finding and satisfiability of polynomial inequality systems
//! over the unit cube.

mod bpineq;
mod refute;
mod system;

pub use bpineq::{
    bmroot, bmroot_pair, bpineq, bpineq_survivors, min_residual_lower, SolveConfig, SolveOutcome,
    SolveStatus, Survivor, BPINEQ_SLACK_BITS,
};
pub use refute::{refute_box, Refutation, MAX_REFUTE_BOXES};
pub use system::{presolve, IneqSystem, Presolved};
