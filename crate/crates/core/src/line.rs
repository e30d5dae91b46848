//! End-of-Line and Sink-of-Line instances, and the folklore reductions
//! between them and the two-column pigeonhole problems.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{
    classify_params, GridInstance, GridParams, GridSolution, Node, ProblemClass, RowOracle,
};
use crate::reductions::{PullBackError, ReductionError};

/// An evaluable vertex map `[V] -> [V] u {null}`.
#[derive(Clone)]
pub struct VertexOracle(Arc<dyn Fn(usize) -> Option<usize> + Send + Sync>);

impl fmt::Debug for VertexOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VertexOracle(..)")
    }
}

impl VertexOracle {
    pub fn new(f: impl Fn(usize) -> Option<usize> + Send + Sync + 'static) -> Self {
        VertexOracle(Arc::new(f))
    }

    /// Dense table, `table[v-1]` with 0 encoding null.
    pub fn from_table(table: Vec<usize>) -> Self {
        VertexOracle::new(move |v| match table.get(v - 1) {
            Some(0) | None => None,
            Some(&w) => Some(w),
        })
    }

    pub fn eval(&self, v: usize) -> Option<usize> {
        (self.0)(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineFlavor {
    /// Find any source or sink other than the distinguished source.
    EoL,
    /// Find a sink only.
    SoL,
}

#[derive(Debug, Error)]
pub enum LineError {
    #[error("vertex count must be positive")]
    ZeroVertices,
    #[error("distinguished source {vstar} outside [{v}]")]
    VstarOutOfRange { vstar: usize, v: usize },
}

/// A line instance: a union of directed paths over `[V]` given by mutually
/// consistent successor/predecessor oracles, with a distinguished source.
///
/// The raw oracles are wrapped analogously to the grid wrapping: an edge
/// survives only if both endpoints agree on it; self-loops are nulled.
#[derive(Debug, Clone)]
pub struct LineInstance {
    v: usize,
    raw_succ: VertexOracle,
    raw_pred: VertexOracle,
    vstar: usize,
    flavor: LineFlavor,
}

impl LineInstance {
    pub fn new(
        v: usize,
        raw_succ: VertexOracle,
        raw_pred: VertexOracle,
        vstar: usize,
        flavor: LineFlavor,
    ) -> Result<Self, LineError> {
        if v == 0 {
            return Err(LineError::ZeroVertices);
        }
        if !(1 <= vstar && vstar <= v) {
            return Err(LineError::VstarOutOfRange { vstar, v });
        }
        Ok(LineInstance { v, raw_succ, raw_pred, vstar, flavor })
    }

    pub fn from_tables(
        succ: Vec<usize>,
        pred: Vec<usize>,
        vstar: usize,
        flavor: LineFlavor,
    ) -> Result<Self, LineError> {
        let v = succ.len();
        LineInstance::new(v, VertexOracle::from_table(succ), VertexOracle::from_table(pred), vstar, flavor)
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn vstar(&self) -> usize {
        self.vstar
    }

    pub fn flavor(&self) -> LineFlavor {
        self.flavor
    }

    /// Wrapped successor view.
    pub fn succ(&self, x: usize) -> Option<usize> {
        if !(1 <= x && x <= self.v) {
            return None;
        }
        let y = self.raw_succ.eval(x)?;
        if !(1 <= y && y <= self.v) || y == x {
            return None;
        }
        if self.raw_pred.eval(y) != Some(x) {
            return None;
        }
        Some(y)
    }

    /// Wrapped predecessor view.
    pub fn pred(&self, x: usize) -> Option<usize> {
        if !(1 <= x && x <= self.v) {
            return None;
        }
        let y = self.raw_pred.eval(x)?;
        if !(1 <= y && y <= self.v) || y == x {
            return None;
        }
        if self.raw_succ.eval(y) != Some(x) {
            return None;
        }
        Some(y)
    }

    pub fn is_isolated(&self, x: usize) -> bool {
        self.succ(x).is_none() && self.pred(x).is_none()
    }

    /// Materialized wrapped tables (succ, pred), 0 = null.
    pub fn materialize(&self) -> (Vec<usize>, Vec<usize>) {
        let succ = (1..=self.v).map(|x| self.succ(x).unwrap_or(0)).collect();
        let pred = (1..=self.v).map(|x| self.pred(x).unwrap_or(0)).collect();
        (succ, pred)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineSolution {
    /// Vertex with an incoming edge and no outgoing edge.
    Sink { v: usize },
    /// Non-distinguished vertex with an outgoing edge and no incoming edge
    /// (EoL flavor only).
    UndistinguishedSource { v: usize },
    /// The distinguished vertex failing to be a source.
    DegenerateDistinguished { v: usize },
}

impl fmt::Display for LineSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineSolution::Sink { v } => write!(f, "sink({v})"),
            LineSolution::UndistinguishedSource { v } => write!(f, "undistinguished-source({v})"),
            LineSolution::DegenerateDistinguished { v } => write!(f, "degenerate-distinguished({v})"),
        }
    }
}

/// Why a line candidate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineRejection {
    OutOfRange,
    FlavorDisabled,
    ConditionFailed(&'static str),
}

impl fmt::Display for LineRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineRejection::OutOfRange => f.write_str("witness out of range"),
            LineRejection::FlavorDisabled => f.write_str("kind disabled by flavor"),
            LineRejection::ConditionFailed(what) => write!(f, "condition failed: {what}"),
        }
    }
}

pub fn check_line_solution(inst: &LineInstance, cand: &LineSolution) -> Result<(), LineRejection> {
    match *cand {
        LineSolution::Sink { v } => {
            if !(1 <= v && v <= inst.v) {
                return Err(LineRejection::OutOfRange);
            }
            if inst.pred(v).is_none() {
                return Err(LineRejection::ConditionFailed("pred(v) != null"));
            }
            if inst.succ(v).is_some() {
                return Err(LineRejection::ConditionFailed("succ(v) = null"));
            }
            Ok(())
        }
        LineSolution::UndistinguishedSource { v } => {
            if inst.flavor != LineFlavor::EoL {
                return Err(LineRejection::FlavorDisabled);
            }
            if !(1 <= v && v <= inst.v) {
                return Err(LineRejection::OutOfRange);
            }
            if v == inst.vstar {
                return Err(LineRejection::ConditionFailed("v != vstar"));
            }
            if inst.pred(v).is_some() {
                return Err(LineRejection::ConditionFailed("pred(v) = null"));
            }
            if inst.succ(v).is_none() {
                return Err(LineRejection::ConditionFailed("succ(v) != null"));
            }
            Ok(())
        }
        LineSolution::DegenerateDistinguished { v } => {
            if v != inst.vstar {
                return Err(LineRejection::ConditionFailed("v = vstar"));
            }
            if inst.succ(v).is_none() || inst.pred(v).is_some() {
                Ok(())
            } else {
                Err(LineRejection::ConditionFailed("vstar fails to be a source"))
            }
        }
    }
}

/// Deterministic exhaustive solver over `[V]`.
pub fn brute_force_solve_line(inst: &LineInstance) -> Vec<LineSolution> {
    let mut out = Vec::new();
    for v in 1..=inst.v {
        for cand in [
            LineSolution::Sink { v },
            LineSolution::UndistinguishedSource { v },
            LineSolution::DegenerateDistinguished { v },
        ] {
            if check_line_solution(inst, &cand).is_ok() {
                out.push(cand);
            }
        }
    }
    out
}

pub type LinePullBack = Box<dyn Fn(&LineSolution) -> Result<GridSolution, PullBackError> + Send + Sync>;
pub type GridPullBackToLine = Box<dyn Fn(&GridSolution) -> Result<LineSolution, PullBackError> + Send + Sync>;

/// Two-column pigeonhole to line: flattens the `[A] x [2]` grid column-major
/// into `[2A]` vertices and adds the back-edges `(x,2) -> (x,1)` for
/// `x <= A-1`; the distinguished source is the first-column node of pigeon A,
/// the unique one with no back-edge. Bijective input yields EoL, injective
/// yields SoL.
pub fn php_to_line(php: &GridInstance) -> Result<(LineInstance, LinePullBack), ReductionError> {
    let classes = classify_params(php.params(), None);
    let flavor = if classes.contains(&ProblemClass::BijPhp) {
        LineFlavor::EoL
    } else if classes.contains(&ProblemClass::InjPhp) {
        LineFlavor::SoL
    } else {
        return Err(ReductionError::Misclassified {
            expected: "inj-php or bij-php",
            found: format!("{:?}", php.params()),
        });
    };
    let a = php.params().a;
    let fwd = php.clone();
    let succ = VertexOracle::new(move |v| {
        if v <= a {
            // pigeon v -> its hole's vertex
            fwd.succ(Node::new(v, 1)).map(|h| h + a)
        } else {
            // hole (v - a): back-edge when it exists
            let x = v - a;
            (x <= a - 1).then_some(x)
        }
    });
    let bwd = php.clone();
    let pred = VertexOracle::new(move |v| {
        if v <= a {
            // pigeon v: fed by its own hole's back-edge
            (v <= a - 1).then_some(v + a)
        } else {
            bwd.pred(Node::new(v - a, 2))
        }
    });
    let line = LineInstance::new(2 * a, succ, pred, a, flavor).expect("A >= 1");

    let src = php.clone();
    let pull_back: LinePullBack = Box::new(move |sol| match *sol {
        LineSolution::Sink { v } => {
            if v <= a {
                Ok(GridSolution::MissingSource { x: v })
            } else if v == 2 * a {
                // Hole A reached: its pigeon overshot the valid ends.
                match src.pred(Node::new(a, 2)) {
                    Some(p) => Ok(GridSolution::InvalidHolePredecessor { x: p }),
                    None => Err(PullBackError::unreachable("hole A sink without a predecessor")),
                }
            } else {
                Err(PullBackError::unreachable("holes below A always have a back-edge"))
            }
        }
        LineSolution::UndistinguishedSource { v } => {
            if v > a {
                Ok(GridSolution::EmptyHole { x: v - a })
            } else {
                Err(PullBackError::unreachable("pigeons below A always have a back-edge predecessor"))
            }
        }
        LineSolution::DegenerateDistinguished { .. } => {
            if src.succ(Node::new(a, 1)).is_none() {
                Ok(GridSolution::MissingSource { x: a })
            } else {
                Err(PullBackError::unreachable("pigeon A has no incoming back-edge"))
            }
        }
    });
    Ok((line, pull_back))
}

/// Line to two-column pigeonhole: after relabelling the distinguished source
/// to vertex V, isolated vertices map straight across and edges map
/// `(x,1) -> (y,2)`. EoL yields BijPHP, SoL yields InjPHP, both with
/// `A = V`, `B = V - 1`.
pub fn line_to_php(line: &LineInstance) -> Result<(GridInstance, GridPullBackToLine), ReductionError> {
    let v = line.vertex_count();
    let vstar = line.vstar();
    // Transposition swapping vstar and V; its own inverse.
    let relabel = move |x: usize| -> usize {
        if x == vstar {
            v
        } else if x == v {
            vstar
        } else {
            x
        }
    };
    let params = GridParams {
        n: v,
        m: 2,
        a: v,
        b: v - 1,
        reversible: true,
        bijective: line.flavor() == LineFlavor::EoL,
        collision: false,
    };
    let fwd = line.clone();
    let raw_succ = RowOracle::new(move |node: Node| {
        if node.y != 1 {
            return None;
        }
        let u = relabel(node.x);
        match fwd.succ(u) {
            Some(w) => Some(relabel(w)),
            None => fwd.pred(u).is_none().then_some(node.x),
        }
    });
    let bwd = line.clone();
    let raw_pred = RowOracle::new(move |node: Node| {
        if node.y != 2 {
            return None;
        }
        let u = relabel(node.x);
        match bwd.pred(u) {
            Some(w) => Some(relabel(w)),
            None => bwd.succ(u).is_none().then_some(node.x),
        }
    });
    let php = GridInstance::new(params, raw_succ, Some(raw_pred)).map_err(ReductionError::from_grid)?;

    let src = line.clone();
    let pull_back: GridPullBackToLine = Box::new(move |sol| match *sol {
        GridSolution::MissingSource { x } => {
            let u = relabel(x);
            if u == src.vstar() {
                Ok(LineSolution::DegenerateDistinguished { v: u })
            } else {
                Ok(LineSolution::Sink { v: u })
            }
        }
        GridSolution::InvalidHolePredecessor { .. } => {
            // Only edges into hole V (= vstar relabelled) can overshoot.
            Ok(LineSolution::DegenerateDistinguished { v: src.vstar() })
        }
        GridSolution::EmptyHole { x } => {
            let u = relabel(x);
            Ok(LineSolution::UndistinguishedSource { v: u })
        }
        _ => Err(PullBackError::unreachable("kind cannot occur on a two-column pigeonhole output")),
    });
    Ok((php, pull_back))
}
