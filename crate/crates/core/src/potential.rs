//! Potential-function form: a vertex set with a successor map that strictly
//! increases a bounded potential, interconvertible with the grid form.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{
    classify_params, GridInstance, GridParams, GridSolution, Node, ProblemClass, RowOracle,
};
use crate::line::VertexOracle;
use crate::reductions::{transfer_sources_to_first_column, PullBackError, ReductionError};

/// An evaluable potential `[V] -> [max]`.
#[derive(Clone)]
pub struct PotentialOracle(Arc<dyn Fn(usize) -> usize + Send + Sync>);

impl fmt::Debug for PotentialOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PotentialOracle(..)")
    }
}

impl PotentialOracle {
    pub fn new(f: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        PotentialOracle(Arc::new(f))
    }

    pub fn from_table(table: Vec<usize>) -> Self {
        PotentialOracle::new(move |v| table.get(v - 1).copied().unwrap_or(1))
    }

    pub fn eval(&self, v: usize) -> usize {
        (self.0)(v)
    }
}

/// Which solution kinds the instance is obliged to admit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialFlavor {
    /// Forward-only: sinks witnessed by their predecessor on the walk.
    SoD,
    /// Reversible chains.
    SoPL,
    /// Reversible and bijective: unexpected sources count too.
    EoPL,
}

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("vertex count must be positive")]
    ZeroVertices,
    #[error("distinguished vertex {vstar} outside [{v}]")]
    VstarOutOfRange { vstar: usize, v: usize },
    #[error("max potential must be positive")]
    ZeroPotential,
    #[error("predecessor oracle required iff the flavor is reversible")]
    PredecessorMismatch,
}

/// A potential instance over `[V]`: edges only ever increase the (clamped)
/// potential, so walks from the distinguished vertex terminate within
/// `max_potential` steps.
#[derive(Debug, Clone)]
pub struct PotentialInstance {
    v: usize,
    raw_succ: VertexOracle,
    raw_pred: Option<VertexOracle>,
    potential: PotentialOracle,
    vstar: usize,
    max_potential: usize,
    flavor: PotentialFlavor,
}

impl PotentialInstance {
    pub fn new(
        v: usize,
        raw_succ: VertexOracle,
        raw_pred: Option<VertexOracle>,
        potential: PotentialOracle,
        vstar: usize,
        max_potential: usize,
        flavor: PotentialFlavor,
    ) -> Result<Self, PotentialError> {
        if v == 0 {
            return Err(PotentialError::ZeroVertices);
        }
        if !(1 <= vstar && vstar <= v) {
            return Err(PotentialError::VstarOutOfRange { vstar, v });
        }
        if max_potential == 0 {
            return Err(PotentialError::ZeroPotential);
        }
        if (flavor != PotentialFlavor::SoD) != raw_pred.is_some() {
            return Err(PotentialError::PredecessorMismatch);
        }
        Ok(PotentialInstance { v, raw_succ, raw_pred, potential, vstar, max_potential, flavor })
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn vstar(&self) -> usize {
        self.vstar
    }

    pub fn max_potential(&self) -> usize {
        self.max_potential
    }

    pub fn flavor(&self) -> PotentialFlavor {
        self.flavor
    }

    /// Clamped potential view.
    pub fn potential(&self, u: usize) -> usize {
        self.potential.eval(u).clamp(1, self.max_potential)
    }

    /// Wrapped successor: bounds, strict potential increase, and (when
    /// reversible) counterpart agreement.
    pub fn succ(&self, u: usize) -> Option<usize> {
        if !(1 <= u && u <= self.v) {
            return None;
        }
        let w = self.raw_succ.eval(u)?;
        if !(1 <= w && w <= self.v) || self.potential(w) <= self.potential(u) {
            return None;
        }
        if let Some(pred) = &self.raw_pred {
            if pred.eval(w) != Some(u) {
                return None;
            }
        }
        Some(w)
    }

    /// Wrapped predecessor; `None` on forward-only instances.
    pub fn pred(&self, w: usize) -> Option<usize> {
        if !(1 <= w && w <= self.v) {
            return None;
        }
        let u = self.raw_pred.as_ref()?.eval(w)?;
        if !(1 <= u && u <= self.v) || self.potential(w) <= self.potential(u) {
            return None;
        }
        if self.raw_succ.eval(u) != Some(w) {
            return None;
        }
        Some(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSolution {
    /// The distinguished vertex has no outgoing edge.
    DeadStart,
    /// `v` steps onto a vertex that itself has no outgoing edge.
    WitnessedSink { v: usize },
    /// Non-distinguished vertex with an edge out and none in (EoPL flavor).
    Genesis { v: usize },
}

impl fmt::Display for PotentialSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSolution::DeadStart => f.write_str("dead-start"),
            PotentialSolution::WitnessedSink { v } => write!(f, "witnessed-sink({v})"),
            PotentialSolution::Genesis { v } => write!(f, "genesis({v})"),
        }
    }
}

pub fn check_potential_solution(inst: &PotentialInstance, cand: &PotentialSolution) -> Result<(), String> {
    match *cand {
        PotentialSolution::DeadStart => {
            if inst.succ(inst.vstar).is_none() {
                Ok(())
            } else {
                Err("distinguished vertex has a successor".to_string())
            }
        }
        PotentialSolution::WitnessedSink { v } => {
            if !(1 <= v && v <= inst.v) {
                return Err("vertex out of range".to_string());
            }
            match inst.succ(v) {
                Some(w) if inst.succ(w).is_none() => Ok(()),
                Some(_) => Err("successor is not a sink".to_string()),
                None => Err("vertex has no successor".to_string()),
            }
        }
        PotentialSolution::Genesis { v } => {
            if inst.flavor != PotentialFlavor::EoPL {
                return Err("kind disabled by flavor".to_string());
            }
            if !(1 <= v && v <= inst.v) {
                return Err("vertex out of range".to_string());
            }
            if v == inst.vstar {
                return Err("distinguished vertex excluded".to_string());
            }
            if inst.succ(v).is_none() {
                return Err("vertex has no successor".to_string());
            }
            if inst.pred(v).is_some() {
                return Err("vertex has a predecessor".to_string());
            }
            Ok(())
        }
    }
}

/// Deterministic exhaustive solver: kinds in declaration order per vertex.
pub fn brute_force_solve_potential(inst: &PotentialInstance) -> Vec<PotentialSolution> {
    let mut out = Vec::new();
    if check_potential_solution(inst, &PotentialSolution::DeadStart).is_ok() {
        out.push(PotentialSolution::DeadStart);
    }
    for v in 1..=inst.v {
        for cand in [PotentialSolution::WitnessedSink { v }, PotentialSolution::Genesis { v }] {
            if check_potential_solution(inst, &cand).is_ok() {
                out.push(cand);
            }
        }
    }
    out
}

pub type PotentialPullBack =
    Box<dyn Fn(&PotentialSolution) -> Result<PotentialSolution, PullBackError> + Send + Sync>;
pub type GridToPotentialPull =
    Box<dyn Fn(&PotentialSolution) -> Result<GridSolution, PullBackError> + Send + Sync>;
pub type PotentialToGridPull =
    Box<dyn Fn(&GridSolution) -> Result<PotentialSolution, PullBackError> + Send + Sync>;

fn flavor_of(grid: &GridInstance) -> Result<PotentialFlavor, ReductionError> {
    let classes = classify_params(grid.params(), None);
    if classes.contains(&ProblemClass::EoPL) {
        Ok(PotentialFlavor::EoPL)
    } else if classes.contains(&ProblemClass::SoPL) {
        Ok(PotentialFlavor::SoPL)
    } else if classes.contains(&ProblemClass::SoD) {
        Ok(PotentialFlavor::SoD)
    } else {
        Err(ReductionError::Misclassified {
            expected: "sod, sopl or eopl",
            found: format!("{:?}", grid.params()),
        })
    }
}

/// Reads a single-start grid as a potential instance: vertex `x + (y-1) N`
/// has potential `y`, edges follow the grid's edges.
pub fn grid_to_potential(
    grid: &GridInstance,
) -> Result<(PotentialInstance, GridToPotentialPull), ReductionError> {
    let flavor = flavor_of(grid)?;
    let (n, m) = (grid.params().n, grid.params().m);
    let decode = move |v: usize| -> (usize, usize) { ((v - 1) % n + 1, (v - 1) / n + 1) };

    let src = grid.clone();
    let succ = VertexOracle::new(move |v| {
        let (x, y) = decode(v);
        src.succ(Node::new(x, y)).map(|w| w + y * n)
    });
    let pred = (flavor != PotentialFlavor::SoD).then(|| {
        let src = grid.clone();
        VertexOracle::new(move |v| {
            let (x, y) = decode(v);
            (y >= 2).then(|| src.pred(Node::new(x, y)).map(|p| p + (y - 2) * n)).flatten()
        })
    });
    let potential = PotentialOracle::new(move |v| (v - 1) / n + 1);
    let pi = PotentialInstance::new(n * m, succ, pred, potential, 1, m, flavor)
        .expect("grid shape is a valid potential shape");

    let pull: GridToPotentialPull = Box::new(move |sol| match *sol {
        PotentialSolution::DeadStart => Ok(GridSolution::MissingSource { x: 1 }),
        PotentialSolution::WitnessedSink { v } => {
            let (x, y) = decode(v);
            if y + 2 <= m {
                Ok(GridSolution::Interception { x, y })
            } else if y + 1 == m {
                Ok(GridSolution::InvalidHolePredecessor { x })
            } else {
                Err(PullBackError::unreachable("last-column vertices have no successors"))
            }
        }
        PotentialSolution::Genesis { v } => {
            let (x, y) = decode(v);
            Ok(GridSolution::GenesisSource { x, y })
        }
    });
    Ok((pi, pull))
}

/// Subdivides every edge so the potential increases by exactly one per step.
/// Vertex `u` owns subdivision slots `V + (u-1)(max-1) + s`; an edge with
/// potential gap `d` routes through slots `1..d-1`.
pub fn normalize_unit_potential(pi: &PotentialInstance) -> (PotentialInstance, PotentialPullBack) {
    let v = pi.v;
    let mmax = pi.max_potential;
    let span = mmax - 1;
    let slot = move |u: usize, s: usize| -> usize { v + (u - 1) * span + s };
    let base = move |id: usize| -> usize {
        if id <= v {
            id
        } else {
            (id - v - 1) / span + 1
        }
    };

    let src = pi.clone();
    let succ = VertexOracle::new(move |id| {
        if id <= v {
            let u = id;
            let w = src.succ(u)?;
            let d = src.potential(w) - src.potential(u);
            Some(if d == 1 { w } else { slot(u, 1) })
        } else {
            let u = base(id);
            let s = (id - v - 1) % span + 1;
            let w = src.succ(u)?;
            let d = src.potential(w) - src.potential(u);
            if s + 1 < d {
                Some(slot(u, s + 1))
            } else if s + 1 == d {
                Some(w)
            } else {
                None
            }
        }
    });
    let pred = (pi.flavor != PotentialFlavor::SoD).then(|| {
        let src = pi.clone();
        VertexOracle::new(move |id| {
            if id <= v {
                let w = id;
                let u = src.pred(w)?;
                let d = src.potential(w) - src.potential(u);
                Some(if d == 1 { u } else { slot(u, d - 1) })
            } else {
                let u = base(id);
                let s = (id - v - 1) % span + 1;
                let w = src.succ(u)?;
                let d = src.potential(w) - src.potential(u);
                if s + 1 <= d {
                    Some(if s == 1 { u } else { slot(u, s - 1) })
                } else {
                    None
                }
            }
        })
    });
    let src = pi.clone();
    let potential = PotentialOracle::new(move |id| {
        if id <= v {
            src.potential(id)
        } else {
            let u = base(id);
            let s = (id - v - 1) % span + 1;
            (src.potential(u) + s).min(mmax)
        }
    });
    let out = PotentialInstance::new(
        v * mmax.max(1),
        succ,
        pred,
        potential,
        pi.vstar,
        mmax,
        pi.flavor,
    )
    .expect("subdivided shape is valid");

    let src = pi.clone();
    let pull: PotentialPullBack = Box::new(move |sol| match *sol {
        PotentialSolution::DeadStart => Ok(PotentialSolution::DeadStart),
        PotentialSolution::WitnessedSink { v: id } => {
            let u = base(id);
            match src.succ(u) {
                Some(w) if src.succ(w).is_none() => Ok(PotentialSolution::WitnessedSink { v: u }),
                _ => Err(PullBackError::unreachable("subdivided chains die only at true sinks")),
            }
        }
        PotentialSolution::Genesis { v: id } => {
            if id <= v {
                Ok(PotentialSolution::Genesis { v: id })
            } else {
                Err(PullBackError::unreachable("live slots always have predecessors"))
            }
        }
    });
    (out, pull)
}

/// Places a potential instance on a grid: after unit normalization, vertex
/// `x` occupies cell `(x, potential(x))`; the distinguished vertex's row is
/// swapped with row 1 and fed by a straight run from `(1,1)`. Reversible
/// flavors additionally transfer all remaining sources to column 1.
pub fn potential_to_grid(
    pi: &PotentialInstance,
) -> Result<(GridInstance, PotentialToGridPull), ReductionError> {
    let (npi, pull_norm) = normalize_unit_potential(pi);
    let m = npi.max_potential.max(2);
    let vstar = npi.vstar;
    let pv = npi.potential(vstar);
    let nrows = npi.vertex_count();
    let reversible = npi.flavor() != PotentialFlavor::SoD;
    let params = GridParams {
        n: nrows,
        m,
        a: 1,
        b: 0,
        reversible,
        bijective: npi.flavor() == PotentialFlavor::EoPL,
        collision: false,
    };
    let swap = move |r: usize| -> usize {
        if r == 1 {
            vstar
        } else if r == vstar {
            1
        } else {
            r
        }
    };

    let src = npi.clone();
    let succ = RowOracle::new(move |node: Node| {
        let u = swap(node.x);
        if u == vstar && node.y < pv {
            Some(swap(vstar))
        } else if node.y == src.potential(u) {
            src.succ(u).map(swap)
        } else {
            None
        }
    });
    let src = npi.clone();
    let pred = reversible.then(|| {
        RowOracle::new(move |node: Node| {
            let u = swap(node.x);
            if u == vstar && 2 <= node.y && node.y <= pv {
                Some(swap(vstar))
            } else if node.y == src.potential(u) {
                src.pred(u).map(swap)
            } else {
                None
            }
        })
    });
    let placed = GridInstance::new(params, succ, pred).map_err(ReductionError::from_grid)?;

    let src = npi;
    let placed_pull = move |sol: &GridSolution| -> Result<PotentialSolution, PullBackError> {
        let dead_start = |cond: bool| {
            if cond && src.succ(vstar).is_none() {
                Ok(PotentialSolution::DeadStart)
            } else {
                Err(PullBackError::unreachable("distinguished chain continues"))
            }
        };
        match *sol {
            GridSolution::MissingSource { x: 1 } => dead_start(pv == 1),
            GridSolution::Interception { x: row, y } => {
                let u = swap(row);
                if u == vstar && y < pv {
                    dead_start(y + 1 == pv)
                } else if y == src.potential(u) {
                    let w = src
                        .succ(u)
                        .ok_or_else(|| PullBackError::unreachable("edge implies a successor"))?;
                    if src.succ(w).is_none() {
                        Ok(PotentialSolution::WitnessedSink { v: u })
                    } else {
                        Err(PullBackError::unreachable("target vertex is alive"))
                    }
                } else {
                    Err(PullBackError::unreachable("off-potential cells carry no edges"))
                }
            }
            GridSolution::InvalidHolePredecessor { x: row } => {
                let u = swap(row);
                if u == vstar && pv == m {
                    dead_start(true)
                } else if src.potential(u) == m - 1 && src.succ(u).is_some() {
                    Ok(PotentialSolution::WitnessedSink { v: u })
                } else {
                    Err(PullBackError::unreachable("no edge in the last transition column"))
                }
            }
            GridSolution::GenesisSource { x: row, y } => {
                let u = swap(row);
                if u != vstar && y == src.potential(u) {
                    Ok(PotentialSolution::Genesis { v: u })
                } else {
                    Err(PullBackError::unreachable("feeder cells always have predecessors"))
                }
            }
            _ => Err(PullBackError::unreachable("kind cannot occur on the placed grid")),
        }
    };

    if reversible {
        let (out, pull_t) = transfer_sources_to_first_column(&placed)?;
        let pull: PotentialToGridPull =
            Box::new(move |s| pull_norm(&placed_pull(&pull_t(s)?)?));
        Ok((out, pull))
    } else {
        let pull: PotentialToGridPull = Box::new(move |s| pull_norm(&placed_pull(s)?));
        Ok((placed, pull))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_solution, solve_brute_force, SolveMode};

    fn sod_grid(n: usize, m: usize, succ: Vec<Vec<usize>>) -> GridInstance {
        let params = GridParams { n, m, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        GridInstance::from_tables(params, succ, None).unwrap()
    }

    #[test]
    fn grid_reads_as_unit_potential() {
        let grid = sod_grid(2, 2, vec![vec![2, 0], vec![0, 0]]);
        let (pi, _) = grid_to_potential(&grid).unwrap();
        assert_eq!(pi.vertex_count(), 4);
        assert_eq!(pi.potential(1), 1);
        assert_eq!(pi.potential(4), 2);
        assert_eq!(pi.succ(1), Some(4)); // (1,1) -> (2,2)
        assert_eq!(
            brute_force_solve_potential(&pi),
            vec![PotentialSolution::WitnessedSink { v: 1 }]
        );
    }

    #[test]
    fn normalization_subdivides_wide_gaps() {
        // Two vertices with a potential jump of 3.
        let pi = PotentialInstance::new(
            2,
            VertexOracle::from_table(vec![2, 0]),
            None,
            PotentialOracle::from_table(vec![1, 4]),
            1,
            4,
            PotentialFlavor::SoD,
        )
        .unwrap();
        let (npi, pull) = normalize_unit_potential(&pi);
        assert_eq!(npi.vertex_count(), 8);
        // 1 -> slot(1,1)=3 -> slot(1,2)=4 -> 2
        assert_eq!(npi.succ(1), Some(3));
        assert_eq!(npi.succ(3), Some(4));
        assert_eq!(npi.succ(4), Some(2));
        let sols = brute_force_solve_potential(&npi);
        assert_eq!(sols, vec![PotentialSolution::WitnessedSink { v: 4 }]);
        assert_eq!(pull(&sols[0]).unwrap(), PotentialSolution::WitnessedSink { v: 1 });
    }

    fn roundtrip(grid: GridInstance) {
        let (pi, pull_a) = grid_to_potential(&grid).unwrap();
        let (back, pull_b) = potential_to_grid(&pi).unwrap();
        let sols = solve_brute_force(&back, SolveMode::All, 100_000).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            let mid = pull_b(s).unwrap();
            assert!(check_potential_solution(&pi, &mid).is_ok(), "{mid:?} invalid for {s:?}");
            let orig = pull_a(&mid).unwrap();
            assert!(check_solution(&grid, &orig).is_ok(), "{orig:?} invalid for {mid:?}");
        }
    }

    #[test]
    fn forward_round_trip_two_by_two() {
        roundtrip(sod_grid(2, 2, vec![vec![2, 0], vec![2, 0]]));
    }

    #[test]
    fn reversible_round_trip_two_by_three() {
        let params = GridParams { n: 2, m: 3, a: 1, b: 0, reversible: true, bijective: false, collision: false };
        let grid = GridInstance::from_tables(
            params,
            vec![vec![2, 0, 0], vec![0, 2, 0]],
            Some(vec![vec![0, 0, 0], vec![0, 1, 2]]),
        )
        .unwrap();
        roundtrip(grid);
    }

    #[test]
    fn bijective_round_trip_keeps_genesis_witnesses() {
        let params = GridParams { n: 2, m: 3, a: 1, b: 0, reversible: true, bijective: true, collision: false };
        // Genesis at (2,2) feeding (1,3).
        let grid = GridInstance::from_tables(
            params,
            vec![vec![1, 0, 0], vec![0, 1, 0]],
            Some(vec![vec![0, 1, 2], vec![0, 0, 0]]),
        )
        .unwrap();
        roundtrip(grid);
    }
}
