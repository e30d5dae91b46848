use std::sync::Arc;

use thiserror::Error;

use super::oracle::{wrap_consistent, wrap_forward, QueryStats, RowOracle};
use super::params::{GridParams, Node, ParamViolation};

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid parameters: {0}")]
    Params(#[from] ParamViolation),
    #[error("predecessor oracle required iff reversible")]
    PredecessorMismatch,
    #[error("predecessor requested on a non-reversible instance")]
    PredecessorUnavailable,
    #[error("node ({x},{y}) outside the [{n}] x [{m}] grid")]
    NodeOutOfGrid { x: usize, y: usize, n: usize, m: usize },
    #[error("instance has {cells} cells, exceeding the cell limit {limit}")]
    CellLimit { cells: usize, limit: usize },
}

/// Direction of an oracle evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Successor,
    Predecessor,
}

/// A grid search instance: parameters plus raw oracles, exposing the
/// consistency-wrapped views.
#[derive(Debug, Clone)]
pub struct GridInstance {
    params: GridParams,
    raw_succ: RowOracle,
    raw_pred: Option<RowOracle>,
    succ: RowOracle,
    pred: Option<RowOracle>,
}

impl GridInstance {
    /// Builds an instance, validating parameters and applying the wrapping
    /// pass exactly once. `raw_pred` must be present iff `reversible`.
    pub fn new(params: GridParams, raw_succ: RowOracle, raw_pred: Option<RowOracle>) -> Result<Self, GridError> {
        params.validate()?;
        if params.reversible != raw_pred.is_some() {
            return Err(GridError::PredecessorMismatch);
        }
        let (succ, pred) = match &raw_pred {
            Some(rp) => {
                let (s, p) = wrap_consistent(&raw_succ, rp, &params);
                (s, Some(p))
            }
            None => (wrap_forward(&raw_succ, &params), None),
        };
        Ok(GridInstance { params, raw_succ, raw_pred, succ, pred })
    }

    /// Dense-table constructor; tables are row-major with 0 encoding null.
    pub fn from_tables(
        params: GridParams,
        succ_table: Vec<Vec<usize>>,
        pred_table: Option<Vec<Vec<usize>>>,
    ) -> Result<Self, GridError> {
        GridInstance::new(
            params,
            RowOracle::from_table(succ_table),
            pred_table.map(RowOracle::from_table),
        )
    }

    pub fn params(&self) -> &GridParams {
        &self.params
    }

    /// Wrapped successor view.
    pub fn succ(&self, node: Node) -> Option<usize> {
        self.succ.eval(node)
    }

    /// Wrapped predecessor view. Only meaningful for reversible instances;
    /// returns `None` otherwise (use [`GridInstance::evaluate`] for the
    /// checked public surface).
    pub fn pred(&self, node: Node) -> Option<usize> {
        self.pred.as_ref().and_then(|p| p.eval(node))
    }

    pub(crate) fn raw_succ(&self) -> &RowOracle {
        &self.raw_succ
    }

    pub(crate) fn raw_pred(&self) -> Option<&RowOracle> {
        self.raw_pred.as_ref()
    }

    /// Checked oracle evaluation: rejects out-of-grid nodes and predecessor
    /// requests on non-reversible instances.
    pub fn evaluate(&self, node: Node, direction: Direction) -> Result<Option<usize>, GridError> {
        if !node.in_grid(&self.params) {
            return Err(GridError::NodeOutOfGrid {
                x: node.x,
                y: node.y,
                n: self.params.n,
                m: self.params.m,
            });
        }
        match direction {
            Direction::Successor => Ok(self.succ(node)),
            Direction::Predecessor => {
                if !self.params.reversible {
                    return Err(GridError::PredecessorUnavailable);
                }
                Ok(self.pred(node))
            }
        }
    }

    /// Counting view: observationally identical instance whose raw-oracle
    /// evaluations increment the returned handle.
    pub fn with_query_counting(&self) -> (GridInstance, Arc<QueryStats>) {
        let stats = Arc::new(QueryStats::default());
        let raw_succ = self.raw_succ.counted(stats.succ.clone());
        let raw_pred = self.raw_pred.as_ref().map(|p| p.counted(stats.pred.clone()));
        let counted = GridInstance::new(self.params, raw_succ, raw_pred)
            .expect("params already validated");
        (counted, stats)
    }

    /// Materializes the wrapped views into dense tables (0 = null), refusing
    /// above the cell limit. Re-wrapping the result is the identity.
    pub fn materialize(&self, cell_limit: usize) -> Result<DenseTables, GridError> {
        let cells = self.params.cells();
        if cells > cell_limit {
            return Err(GridError::CellLimit { cells, limit: cell_limit });
        }
        let table = |f: &dyn Fn(Node) -> Option<usize>| -> Vec<Vec<usize>> {
            (1..=self.params.n)
                .map(|x| (1..=self.params.m).map(|y| f(Node::new(x, y)).unwrap_or(0)).collect())
                .collect()
        };
        Ok(DenseTables {
            succ: table(&|n| self.succ(n)),
            pred: self.params.reversible.then(|| table(&|n| self.pred(n))),
        })
    }

    /// Rebuilds an instance from materialized tables.
    pub fn from_dense(params: GridParams, tables: DenseTables) -> Result<Self, GridError> {
        GridInstance::from_tables(params, tables.succ, tables.pred)
    }
}

/// Dense wrapped-view tables of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseTables {
    pub succ: Vec<Vec<usize>>,
    pub pred: Option<Vec<Vec<usize>>>,
}
