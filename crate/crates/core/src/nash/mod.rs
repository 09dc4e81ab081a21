//! Normal-form games: support selection by box refutation, equilibria from
//! the inequality solver, and epsilon-equilibrium checks.

mod game;
mod solve;
mod support;

pub use game::{Game, StrategyProfile};
pub use solve::{nash_solve, verify_epsilon_nash, NashConfig, NashOutcome};
pub use support::{
    all_supports, select_support, support_system, DepthSchedule, Support, SupportSelection,
};
