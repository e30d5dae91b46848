//! Grid search problems with oracle-presented successor/predecessor tables:
//! verification, brute-force solving, and executable reductions between the
//! parameterized restrictions, every one paired with a solution pull-back.

pub mod enumerate;
pub mod gen;
pub mod grid;
pub mod io;
pub mod line;
pub mod potential;
pub mod reductions;
pub mod render;
