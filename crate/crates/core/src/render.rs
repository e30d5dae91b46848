//! Graphviz DOT rendering of grid instances. Output is deterministic, so it
//! can be compared against golden files.

use std::fmt::Write;

use crate::grid::{GridError, GridInstance, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Fill nodes that are live but have no surviving successor (outside the
    /// last column), i.e. the places solutions point at.
    pub highlight_sinks: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { highlight_sinks: false }
    }
}

/// Emits the wrapped successor graph as DOT. Starts `[A] x {1}` are squares,
/// valid ends `[B] x {M}` are diamonds, everything else is a circle.
pub fn render_dot(
    inst: &GridInstance,
    opts: &RenderOptions,
    cell_limit: usize,
) -> Result<String, GridError> {
    let p = *inst.params();
    if p.cells() > cell_limit {
        return Err(GridError::CellLimit { cells: p.cells(), limit: cell_limit });
    }
    let mut out = String::new();
    writeln!(out, "digraph grid {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [fontsize=10];").unwrap();
    for y in 1..=p.m {
        writeln!(out, "  subgraph column_{y} {{").unwrap();
        writeln!(out, "    rank=same;").unwrap();
        for x in 1..=p.n {
            let shape = if y == 1 && x <= p.a {
                "square"
            } else if y == p.m && x <= p.b {
                "diamond"
            } else {
                "circle"
            };
            let dead_end = y < p.m && inst.succ(Node::new(x, y)).is_none();
            let entered = y == 1 && x <= p.a
                || y > 1 && (1..=p.n).any(|w| inst.succ(Node::new(w, y - 1)) == Some(x));
            let style = if opts.highlight_sinks && dead_end && entered {
                ", style=filled, fillcolor=lightcoral"
            } else {
                ""
            };
            writeln!(out, "    n_{x}_{y} [label=\"({x},{y})\", shape={shape}{style}];").unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    for y in 1..p.m {
        for x in 1..=p.n {
            if let Some(v) = inst.succ(Node::new(x, y)) {
                writeln!(out, "  n_{x}_{y} -> n_{v}_{};", y + 1).unwrap();
            }
        }
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
