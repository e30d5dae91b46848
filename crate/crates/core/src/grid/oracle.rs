use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::params::{GridParams, Node};

/// An evaluable row map `[N] x [M] -> [N] u {null}`.
///
/// Oracles are pure: repeated evaluation at the same node yields the same
/// result. `None` is the null sentinel.
#[derive(Clone)]
pub struct RowOracle(Arc<dyn Fn(Node) -> Option<usize> + Send + Sync>);

impl fmt::Debug for RowOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RowOracle(..)")
    }
}

impl RowOracle {
    pub fn new(f: impl Fn(Node) -> Option<usize> + Send + Sync + 'static) -> Self {
        RowOracle(Arc::new(f))
    }

    /// Everywhere-null oracle.
    pub fn null() -> Self {
        RowOracle::new(|_| None)
    }

    /// Dense row-major table, `table[x-1][y-1]` with 0 encoding null.
    pub fn from_table(table: Vec<Vec<usize>>) -> Self {
        RowOracle::new(move |node| {
            let v = *table.get(node.x - 1)?.get(node.y - 1)?;
            if v == 0 {
                None
            } else {
                Some(v)
            }
        })
    }

    pub fn eval(&self, node: Node) -> Option<usize> {
        (self.0)(node)
    }

    /// Counting view: every evaluation bumps `counter`.
    pub(crate) fn counted(&self, counter: Arc<AtomicU64>) -> Self {
        let inner = self.clone();
        RowOracle::new(move |node| {
            counter.fetch_add(1, Ordering::Relaxed);
            inner.eval(node)
        })
    }
}

/// Applies the single consistency-wrapping pass to a raw successor/predecessor
/// pair. Each wrapped circuit consults the raw counterpart: the wrapped
/// successor nulls an edge whose target leaves the grid or whose target's raw
/// predecessor disagrees, and symmetrically for the wrapped predecessor.
pub fn wrap_consistent(raw_succ: &RowOracle, raw_pred: &RowOracle, p: &GridParams) -> (RowOracle, RowOracle) {
    let params = *p;
    let s = raw_succ.clone();
    let pr = raw_pred.clone();
    let wrapped_succ = RowOracle::new(move |node: Node| {
        if !node.in_grid(&params) {
            return None;
        }
        let target = s.eval(node)?;
        let t = Node::new(target, node.y + 1);
        if !t.in_grid(&params) {
            return None;
        }
        if pr.eval(t) != Some(node.x) {
            return None;
        }
        Some(target)
    });
    let s = raw_succ.clone();
    let pr = raw_pred.clone();
    let wrapped_pred = RowOracle::new(move |node: Node| {
        if !node.in_grid(&params) || node.y < 2 {
            return None;
        }
        let source = pr.eval(node)?;
        let t = Node::new(source, node.y - 1);
        if !t.in_grid(&params) {
            return None;
        }
        if s.eval(t) != Some(node.x) {
            return None;
        }
        Some(source)
    });
    (wrapped_succ, wrapped_pred)
}

/// Forward-only guard: nulls successors that would leave the grid.
pub fn wrap_forward(raw_succ: &RowOracle, p: &GridParams) -> RowOracle {
    let params = *p;
    let s = raw_succ.clone();
    RowOracle::new(move |node: Node| {
        if !node.in_grid(&params) {
            return None;
        }
        let target = s.eval(node)?;
        if !Node::new(target, node.y + 1).in_grid(&params) {
            return None;
        }
        Some(target)
    })
}

/// Mutable query counters for one instance's raw oracles.
#[derive(Debug, Default)]
pub struct QueryStats {
    pub(crate) succ: Arc<AtomicU64>,
    pub(crate) pred: Arc<AtomicU64>,
}

impl QueryStats {
    pub fn succ_queries(&self) -> u64 {
        self.succ.load(Ordering::Relaxed)
    }

    pub fn pred_queries(&self) -> u64 {
        self.pred.load(Ordering::Relaxed)
    }

    pub fn total(&self) -> u64 {
        self.succ_queries() + self.pred_queries()
    }

    pub fn reset(&self) {
        self.succ.store(0, Ordering::Relaxed);
        self.pred.store(0, Ordering::Relaxed);
    }
}
