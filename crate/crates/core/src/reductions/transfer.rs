use crate::grid::{GridInstance, GridParams, GridSolution, Node, RowOracle};

use super::{GridPullBack, PullBackError, ReductionError};

/// Moves every source of a reversible instance into column 1.
///
/// The output has `N * M` rows: row `x + (c-1) * N` with `c = 1` hosts the
/// original row `x`; for `c >= 2` it is a feeder that activates only when
/// `(x, c)` is a source of the input (successor present, predecessor absent).
/// An active feeder runs straight along its own row through columns
/// `1 .. c-2` and then edges into the host row at column `c`, so the host
/// cell keeps its outgoing edge but stops being a source; the feeder's own
/// column-1 cell becomes the source instead. Solutions decode by block: host
/// rows carry the input's solutions unchanged, a feeder's column-1 genesis
/// names the input source it replaced, and feeder rows admit nothing else.
pub fn transfer_sources_to_first_column(
    inst: &GridInstance,
) -> Result<(GridInstance, GridPullBack), ReductionError> {
    let p = *inst.params();
    if !p.reversible {
        return Err(ReductionError::Misclassified {
            expected: "reversible instance (r=1)",
            found: format!("{p:?}"),
        });
    }
    let (n, m) = (p.n, p.m);
    let params = GridParams { n: n * m, ..p };

    // Two lazy queries decide whether a feeder row is active.
    let src = inst.clone();
    let is_source = move |x: usize, c: usize| -> bool {
        c <= m - 1 && src.succ(Node::new(x, c)).is_some() && src.pred(Node::new(x, c)).is_none()
    };
    let decode = move |row: usize| -> (usize, usize) { ((row - 1) % n + 1, (row - 1) / n + 1) };
    let row_of = move |x: usize, c: usize| -> usize { x + (c - 1) * n };

    let src = inst.clone();
    let source = is_source.clone();
    let succ = RowOracle::new(move |node: Node| {
        let (x, c) = decode(node.x);
        if c == 1 {
            src.succ(Node::new(x, node.y))
        } else if source(x, c) {
            if node.y <= c - 2 {
                Some(node.x) // straight feeder chain
            } else if node.y == c - 1 {
                Some(x) // inject into the host row
            } else {
                None
            }
        } else {
            None
        }
    });
    let src = inst.clone();
    let source = is_source.clone();
    let pred = RowOracle::new(move |node: Node| {
        let (x, c) = decode(node.x);
        if c == 1 {
            if let Some(pp) = src.pred(Node::new(x, node.y)) {
                Some(pp)
            } else if node.y >= 2 && source(x, node.y) {
                Some(row_of(x, node.y)) // the feeder's final edge
            } else {
                None
            }
        } else if source(x, c) && 2 <= node.y && node.y <= c - 1 {
            Some(node.x)
        } else {
            None
        }
    });
    let out = GridInstance::new(params, succ, Some(pred)).map_err(ReductionError::from_grid)?;

    let pull: GridPullBack = Box::new(move |sol| match *sol {
        GridSolution::MissingSource { x } => Ok(GridSolution::MissingSource { x }),
        GridSolution::InvalidHolePredecessor { x } => {
            if x <= n {
                Ok(GridSolution::InvalidHolePredecessor { x })
            } else {
                Err(PullBackError::unreachable("feeders carry no edges in the last transition column"))
            }
        }
        GridSolution::Interception { x, y } => {
            if x <= n {
                Ok(GridSolution::Interception { x, y })
            } else {
                Err(PullBackError::unreachable("feeder chains always land on live cells"))
            }
        }
        GridSolution::GenesisSource { x, y } => {
            let (x0, c) = decode(x);
            if c == 1 {
                if y == 1 {
                    Ok(GridSolution::GenesisSource { x: x0, y: 1 })
                } else {
                    Err(PullBackError::unreachable("interior host sources are fed by their feeder"))
                }
            } else if y == 1 {
                Ok(GridSolution::GenesisSource { x: x0, y: c })
            } else {
                Err(PullBackError::unreachable("feeder interiors always have predecessors"))
            }
        }
        GridSolution::EmptyHole { x } => Ok(GridSolution::EmptyHole { x }),
        GridSolution::Collision { .. } => {
            Err(PullBackError::unreachable("collision flag is off on reversible instances"))
        }
    });
    Ok((out, pull))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_solution, solve_brute_force, SolveMode};

    #[test]
    fn output_dimensions_multiply_rows_by_columns() {
        let params =
            GridParams { n: 2, m: 3, a: 1, b: 0, reversible: true, bijective: false, collision: false };
        let inst = GridInstance::from_tables(
            params,
            vec![vec![1, 1, 0], vec![0, 2, 0]],
            Some(vec![vec![0, 1, 1], vec![0, 0, 2]]),
        )
        .unwrap();
        let (out, _) = transfer_sources_to_first_column(&inst).unwrap();
        assert_eq!((out.params().n, out.params().m), (6, 3));
    }

    #[test]
    fn interior_source_gains_a_feeder_predecessor() {
        let params =
            GridParams { n: 2, m: 3, a: 1, b: 0, reversible: true, bijective: false, collision: false };
        // (2,2) is a source: successor present, predecessor absent.
        let inst = GridInstance::from_tables(
            params,
            vec![vec![1, 1, 0], vec![0, 2, 0]],
            Some(vec![vec![0, 1, 1], vec![0, 0, 2]]),
        )
        .unwrap();
        let (out, pull) = transfer_sources_to_first_column(&inst).unwrap();
        // Feeder row <2,2> = 4 injects into host row 2 at column 2.
        assert_eq!(out.pred(Node::new(2, 2)), Some(4));
        assert_eq!(out.succ(Node::new(4, 1)), Some(2));
        let sols = solve_brute_force(&out, SolveMode::All, 1000).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            assert!(check_solution(&inst, &pull(s).unwrap()).is_ok());
        }
    }

    #[test]
    fn genesis_moves_to_the_feeder_start() {
        let params =
            GridParams { n: 2, m: 3, a: 1, b: 0, reversible: true, bijective: true, collision: false };
        // Genesis at (2,2): no predecessor, edges into (1,3).
        let inst = GridInstance::from_tables(
            params,
            vec![vec![1, 0, 0], vec![0, 1, 0]],
            Some(vec![vec![0, 1, 2], vec![0, 0, 0]]),
        )
        .unwrap();
        let before = solve_brute_force(&inst, SolveMode::All, 1000).unwrap();
        assert!(before.contains(&GridSolution::GenesisSource { x: 2, y: 2 }));

        let (out, pull) = transfer_sources_to_first_column(&inst).unwrap();
        let after = solve_brute_force(&out, SolveMode::All, 1000).unwrap();
        assert!(after.contains(&GridSolution::GenesisSource { x: 4, y: 1 }));
        assert!(!after.contains(&GridSolution::GenesisSource { x: 2, y: 2 }));
        assert_eq!(
            pull(&GridSolution::GenesisSource { x: 4, y: 1 }).unwrap(),
            GridSolution::GenesisSource { x: 2, y: 2 }
        );
        for s in &after {
            assert!(check_solution(&inst, &pull(s).unwrap()).is_ok());
        }
    }
}
