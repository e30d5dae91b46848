use std::fmt;

use serde::{Deserialize, Serialize};

use super::instance::GridInstance;
use super::params::Node;

/// A tagged witness of one of the grid solution conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSolution {
    /// Start `x` in `[A]` with no outgoing edge.
    MissingSource { x: usize },
    /// Node on column M-1 whose successor lands above the valid ends.
    InvalidHolePredecessor { x: usize },
    /// Node `(x,y)` whose successor exists but is itself dead, `y <= M-2`.
    Interception { x: usize, y: usize },
    /// Non-start node with an outgoing edge and no incoming edge (r=b=1).
    GenesisSource { x: usize, y: usize },
    /// Valid end `x` in `[B]` with no incoming edge (r=b=1).
    EmptyHole { x: usize },
    /// Two distinct rows sharing a non-null successor in column y (r=0, c=1).
    Collision { x1: usize, x2: usize, y: usize },
}

impl fmt::Display for GridSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSolution::MissingSource { x } => write!(f, "missing-source({x})"),
            GridSolution::InvalidHolePredecessor { x } => write!(f, "invalid-hole-predecessor({x})"),
            GridSolution::Interception { x, y } => write!(f, "interception({x},{y})"),
            GridSolution::GenesisSource { x, y } => write!(f, "genesis-source({x},{y})"),
            GridSolution::EmptyHole { x } => write!(f, "empty-hole({x})"),
            GridSolution::Collision { x1, x2, y } => write!(f, "collision({x1},{x2},{y})"),
        }
    }
}

/// Why a candidate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// The candidate's kind is gated by flags the instance does not have.
    KindDisabled,
    /// A witness coordinate lies outside the range the kind prescribes.
    OutOfRange(&'static str),
    /// Coordinates in range, but the condition does not hold.
    ConditionFailed(&'static str),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::KindDisabled => f.write_str("kind disabled by parameters"),
            Rejection::OutOfRange(what) => write!(f, "witness out of range: {what}"),
            Rejection::ConditionFailed(what) => write!(f, "condition failed: {what}"),
        }
    }
}

/// Verifies a candidate solution verbatim against the instance's enabled
/// solution conditions.
pub fn check_solution(inst: &GridInstance, cand: &GridSolution) -> Result<(), Rejection> {
    let p = *inst.params();
    match *cand {
        GridSolution::MissingSource { x } => {
            if !(1 <= x && x <= p.a) {
                return Err(Rejection::OutOfRange("x in [A]"));
            }
            if inst.succ(Node::new(x, 1)).is_some() {
                return Err(Rejection::ConditionFailed("S(x,1) = null"));
            }
            Ok(())
        }
        GridSolution::InvalidHolePredecessor { x } => {
            if !(1 <= x && x <= p.n) {
                return Err(Rejection::OutOfRange("x in [N]"));
            }
            match inst.succ(Node::new(x, p.m - 1)) {
                Some(v) if v > p.b => Ok(()),
                _ => Err(Rejection::ConditionFailed("S(x,M-1) > B")),
            }
        }
        GridSolution::Interception { x, y } => {
            if !(1 <= x && x <= p.n) {
                return Err(Rejection::OutOfRange("x in [N]"));
            }
            if !(p.m >= 3 && 1 <= y && y <= p.m - 2) {
                return Err(Rejection::OutOfRange("y in [M-2]"));
            }
            match inst.succ(Node::new(x, y)) {
                Some(v) if inst.succ(Node::new(v, y + 1)).is_none() => Ok(()),
                Some(_) => Err(Rejection::ConditionFailed("S(S(x,y),y+1) = null")),
                None => Err(Rejection::ConditionFailed("S(x,y) != null")),
            }
        }
        GridSolution::GenesisSource { x, y } => {
            if !(p.reversible && p.bijective) {
                return Err(Rejection::KindDisabled);
            }
            let node = Node::new(x, y);
            if !(1 <= x && x <= p.n && 1 <= y && y + 1 <= p.m) {
                return Err(Rejection::OutOfRange("(x,y) in [N] x [M-1]"));
            }
            if x <= p.a && y == 1 {
                return Err(Rejection::OutOfRange("(x,y) not in [A] x {1}"));
            }
            if inst.succ(node).is_none() {
                return Err(Rejection::ConditionFailed("S(x,y) != null"));
            }
            if inst.pred(node).is_some() {
                return Err(Rejection::ConditionFailed("P(x,y) = null"));
            }
            Ok(())
        }
        GridSolution::EmptyHole { x } => {
            if !(p.reversible && p.bijective) {
                return Err(Rejection::KindDisabled);
            }
            if !(1 <= x && x <= p.b) {
                return Err(Rejection::OutOfRange("x in [B]"));
            }
            if inst.pred(Node::new(x, p.m)).is_some() {
                return Err(Rejection::ConditionFailed("P(x,M) = null"));
            }
            Ok(())
        }
        GridSolution::Collision { x1, x2, y } => {
            if !(p.collision && !p.reversible) {
                return Err(Rejection::KindDisabled);
            }
            if !(1 <= x1 && x1 <= p.n && 1 <= x2 && x2 <= p.n) {
                return Err(Rejection::OutOfRange("x1,x2 in [N]"));
            }
            if x1 == x2 {
                return Err(Rejection::OutOfRange("x1 != x2"));
            }
            if !(1 <= y && y <= p.m - 1) {
                return Err(Rejection::OutOfRange("y in [M-1]"));
            }
            let v1 = inst.succ(Node::new(x1, y));
            let v2 = inst.succ(Node::new(x2, y));
            match (v1, v2) {
                (Some(a), Some(b)) if a == b => Ok(()),
                _ => Err(Rejection::ConditionFailed("S(x1,y) = S(x2,y) != null")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::params::GridParams;

    fn sod(succ: Vec<Vec<usize>>) -> GridInstance {
        let n = succ.len();
        let m = succ[0].len();
        let params = GridParams { n, m, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        GridInstance::from_tables(params, succ, None).unwrap()
    }

    #[test]
    fn dead_distinguished_start_accepted() {
        let inst = sod(vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(check_solution(&inst, &GridSolution::MissingSource { x: 1 }), Ok(()));
    }

    #[test]
    fn wrapper_orphans_losing_pigeon() {
        // INJ-PHP, N=A=2, B=1: both pigeons point at hole 1, pred names pigeon 1.
        let params = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: true, bijective: false, collision: false };
        let inst = GridInstance::from_tables(
            params,
            vec![vec![1, 0], vec![1, 0]],
            Some(vec![vec![0, 1], vec![0, 0]]),
        )
        .unwrap();
        assert_eq!(check_solution(&inst, &GridSolution::MissingSource { x: 2 }), Ok(()));
        assert!(check_solution(&inst, &GridSolution::MissingSource { x: 1 }).is_err());
    }

    #[test]
    fn empty_hole_disabled_when_b_is_zero() {
        // EOPL-shaped instance: r=1, b=1, A=1, B=0.
        let params = GridParams { n: 2, m: 2, a: 1, b: 0, reversible: true, bijective: true, collision: false };
        let inst = GridInstance::from_tables(
            params,
            vec![vec![0, 0], vec![0, 0]],
            Some(vec![vec![0, 0], vec![0, 0]]),
        )
        .unwrap();
        assert_eq!(
            check_solution(&inst, &GridSolution::EmptyHole { x: 1 }),
            Err(Rejection::OutOfRange("x in [B]"))
        );
        // A bijective-only kind on a non-bijective instance is disabled.
        let inj = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: true, bijective: false, collision: false };
        let inst = GridInstance::from_tables(
            inj,
            vec![vec![0, 0], vec![0, 0]],
            Some(vec![vec![0, 0], vec![0, 0]]),
        )
        .unwrap();
        assert_eq!(check_solution(&inst, &GridSolution::EmptyHole { x: 1 }), Err(Rejection::KindDisabled));
    }

    #[test]
    fn collision_requires_flag() {
        let inst = sod(vec![vec![1, 0], vec![1, 0]]);
        assert_eq!(
            check_solution(&inst, &GridSolution::Collision { x1: 1, x2: 2, y: 1 }),
            Err(Rejection::KindDisabled)
        );
        let params = GridParams { n: 2, m: 2, a: 1, b: 0, reversible: false, bijective: false, collision: true };
        let inst = GridInstance::from_tables(params, vec![vec![1, 0], vec![1, 0]], None).unwrap();
        assert_eq!(check_solution(&inst, &GridSolution::Collision { x1: 1, x2: 2, y: 1 }), Ok(()));
    }
}
