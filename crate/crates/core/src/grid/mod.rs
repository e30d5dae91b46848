//! The grid search problem model: parameters, oracles, consistency wrapping,
//! solution verification, brute-force solving, restriction classification,
//! the meet operator, and query accounting.

mod classify;
mod instance;
mod meet;
mod oracle;
mod params;
mod solution;
mod solve;

pub use classify::{
    classify_params, ProblemClass, SurplusFn, SURPLUS_DOUBLE, SURPLUS_SQUARE, SURPLUS_SUCC,
};
pub use instance::{DenseTables, Direction, GridError, GridInstance};
pub use meet::{check_meet_solution, MeetInstance, MeetPart, MeetSolution, PartSolution, Side};
pub use oracle::{wrap_consistent, wrap_forward, QueryStats, RowOracle};
pub use params::{GridParams, Node, ParamViolation};
pub use solution::{check_solution, GridSolution, Rejection};
pub use solve::{solve_brute_force, SolveMode};

/// Convenience constructor for classified instances used throughout the
/// reductions and tests.
pub fn classify_instance(inst: &GridInstance, f: Option<&SurplusFn>) -> std::collections::BTreeSet<ProblemClass> {
    classify_params(inst.params(), f)
}
