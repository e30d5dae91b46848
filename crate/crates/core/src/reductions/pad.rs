use crate::grid::{
    classify_params, GridInstance, GridParams, GridSolution, Node, ProblemClass, RowOracle,
};

use super::{GridPullBack, PullBackError, ReductionError};

/// Pads an instance to `target_n` rows and `target_m` columns without
/// changing the solution set, choosing the scheme by instance class:
///
/// * sink-of-dag shapes pad with fully-null rows and columns (a former
///   arrival at the old last column becomes an interception witness);
/// * two-column pigeonhole shapes pad rows with dummy pigeon/hole identity
///   pairs, after first nulling edges into the old invalid hole;
/// * path pigeonhole shapes pad columns by running the surviving hole rows
///   straight through the added columns.
pub fn pad_instance(
    inst: &GridInstance,
    target_n: usize,
    target_m: usize,
) -> Result<(GridInstance, GridPullBack), ReductionError> {
    let p = *inst.params();
    if target_n < p.n || target_m < p.m {
        return Err(ReductionError::ShrinkingPad(format!(
            "have {}x{}, asked for {target_n}x{target_m}",
            p.n, p.m
        )));
    }
    if target_n == p.n && target_m == p.m {
        return Ok((inst.clone(), Box::new(|s: &GridSolution| Ok(*s))));
    }
    let classes = classify_params(&p, None);
    let two_column_php = classes.contains(&ProblemClass::InjPhp)
        || classes.contains(&ProblemClass::BijPhp)
        || classes.contains(&ProblemClass::PigeonCircuit);
    if classes.contains(&ProblemClass::SoD) || classes.contains(&ProblemClass::SoDNoMerge) {
        Ok(pad_sod(inst, target_n, target_m))
    } else if two_column_php && target_m == 2 {
        Ok(pad_php_rows(inst, target_n))
    } else if p.a == p.n && target_n == p.n {
        // Path-shaped: every row is a start; only columns grow.
        Ok(pad_path_columns(inst, target_m))
    } else {
        Err(ReductionError::UnsupportedMode(format!(
            "no padding scheme for params {p:?} to {target_n}x{target_m}"
        )))
    }
}

fn pad_sod(inst: &GridInstance, target_n: usize, target_m: usize) -> (GridInstance, GridPullBack) {
    let p = *inst.params();
    let params = GridParams { n: target_n, m: target_m, ..p };
    let src = inst.clone();
    let succ = RowOracle::new(move |node: Node| {
        if node.x <= p.n && node.y <= p.m {
            src.succ(node)
        } else {
            None
        }
    });
    let out = GridInstance::new(params, succ, None).expect("padded sod params valid");

    let old = p;
    let pull: GridPullBack = Box::new(move |sol| match *sol {
        GridSolution::MissingSource { x } => Ok(GridSolution::MissingSource { x }),
        GridSolution::InvalidHolePredecessor { x } => {
            if target_m == old.m {
                Ok(GridSolution::InvalidHolePredecessor { x })
            } else {
                Err(PullBackError::unreachable("padded null columns carry no edges"))
            }
        }
        GridSolution::Interception { x, y } => {
            if y + 2 <= old.m {
                Ok(GridSolution::Interception { x, y })
            } else if y + 1 == old.m {
                // The old last-column arrival, now intercepted by a null column.
                Ok(GridSolution::InvalidHolePredecessor { x })
            } else {
                Err(PullBackError::unreachable("no edges beyond the original columns"))
            }
        }
        GridSolution::Collision { x1, x2, y } => Ok(GridSolution::Collision { x1, x2, y }),
        _ => Err(PullBackError::unreachable("kind disabled on sink-of-dag shapes")),
    });
    (out, pull)
}

fn pad_php_rows(inst: &GridInstance, target_n: usize) -> (GridInstance, GridPullBack) {
    let p = *inst.params();
    let old_invalid = p.n; // = B + 1
    let params = GridParams { n: target_n, a: target_n, b: target_n - 1, ..p };
    let src = inst.clone();
    let succ = RowOracle::new(move |node: Node| {
        if node.y != 1 {
            return None;
        }
        if node.x <= old_invalid {
            match src.succ(node) {
                Some(v) if v == old_invalid => None, // removed edge into the old invalid hole
                other => other,
            }
        } else {
            Some(node.x - 1) // dummy pigeon x -> dummy hole x-1
        }
    });
    let src = inst.clone();
    let pred = p.reversible.then(|| {
        RowOracle::new(move |node: Node| {
            if node.y != 2 {
                return None;
            }
            if node.x < old_invalid {
                src.pred(node)
            } else if node.x < target_n {
                Some(node.x + 1) // dummy hole x <- dummy pigeon x+1
            } else {
                None // the new invalid hole
            }
        })
    });
    let out = GridInstance::new(params, succ, pred).expect("padded php params valid");

    let src = inst.clone();
    let pull: GridPullBack = Box::new(move |sol| match *sol {
        GridSolution::MissingSource { x } => {
            if x >= old_invalid + 1 {
                return Err(PullBackError::unreachable("dummy pigeons always have an edge"));
            }
            match src.succ(Node::new(x, 1)) {
                Some(v) if v == old_invalid => Ok(GridSolution::InvalidHolePredecessor { x }),
                None => Ok(GridSolution::MissingSource { x }),
                Some(_) => Err(PullBackError::unreachable("pigeon with a surviving edge is not orphaned")),
            }
        }
        GridSolution::EmptyHole { x } => {
            if x < old_invalid {
                Ok(GridSolution::EmptyHole { x })
            } else {
                Err(PullBackError::unreachable("dummy holes are always filled"))
            }
        }
        GridSolution::Collision { x1, x2, y } => {
            if x1 <= old_invalid && x2 <= old_invalid {
                Ok(GridSolution::Collision { x1, x2, y })
            } else {
                Err(PullBackError::unreachable("dummy pigeons map injectively"))
            }
        }
        _ => Err(PullBackError::unreachable("kind cannot occur on padded pigeonhole output")),
    });
    (out, pull)
}

fn pad_path_columns(inst: &GridInstance, target_m: usize) -> (GridInstance, GridPullBack) {
    let p = *inst.params();
    let params = GridParams { m: target_m, ..p };
    let src = inst.clone();
    let succ = RowOracle::new(move |node: Node| {
        if node.y <= p.m - 1 {
            src.succ(node)
        } else if node.y < target_m && node.x <= p.b {
            Some(node.x) // surviving hole rows run straight through
        } else {
            None
        }
    });
    let src = inst.clone();
    let pred = p.reversible.then(|| {
        RowOracle::new(move |node: Node| {
            if node.y <= p.m {
                src.pred(node)
            } else if node.x <= p.b {
                Some(node.x)
            } else {
                None
            }
        })
    });
    let out = GridInstance::new(params, succ, pred).expect("padded path params valid");

    let src = inst.clone();
    let old = p;
    let pull: GridPullBack = Box::new(move |sol| match *sol {
        GridSolution::MissingSource { x } => Ok(GridSolution::MissingSource { x }),
        GridSolution::Interception { x, y } => {
            if y + 2 <= old.m {
                Ok(GridSolution::Interception { x, y })
            } else if y + 1 == old.m {
                match src.succ(Node::new(x, old.m - 1)) {
                    Some(v) if v > old.b => Ok(GridSolution::InvalidHolePredecessor { x }),
                    _ => Err(PullBackError::unreachable("old last-column arrival into a valid end is extended")),
                }
            } else {
                Err(PullBackError::unreachable("extension rows never die early"))
            }
        }
        GridSolution::GenesisSource { x, y } => {
            if y + 1 <= old.m {
                Ok(GridSolution::GenesisSource { x, y })
            } else if y == old.m && x <= old.b {
                Ok(GridSolution::EmptyHole { x })
            } else {
                Err(PullBackError::unreachable("extension cells always have predecessors"))
            }
        }
        GridSolution::Collision { x1, x2, y } => {
            if y <= old.m - 1 {
                Ok(GridSolution::Collision { x1, x2, y })
            } else {
                Err(PullBackError::unreachable("extension rows are disjoint"))
            }
        }
        _ => Err(PullBackError::unreachable("kind cannot occur on padded path output")),
    });
    (out, pull)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_solution, solve_brute_force, SolveMode};

    fn sod(n: usize, m: usize, succ: Vec<Vec<usize>>) -> GridInstance {
        let params = GridParams { n, m, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        GridInstance::from_tables(params, succ, None).unwrap()
    }

    #[test]
    fn sod_row_padding_adds_no_solutions() {
        let inst = sod(2, 2, vec![vec![1, 0], vec![1, 0]]);
        let (padded, pull) = pad_instance(&inst, 4, 2).unwrap();
        let before = solve_brute_force(&inst, SolveMode::All, 1000).unwrap();
        let after = solve_brute_force(&padded, SolveMode::All, 1000).unwrap();
        assert_eq!(before.len(), after.len());
        for s in &after {
            let back = pull(s).unwrap();
            assert!(check_solution(&inst, &back).is_ok());
        }
    }

    #[test]
    fn sod_column_padding_turns_arrival_into_interception() {
        // 2x2 SoD where row 1 reaches the last column.
        let inst = sod(2, 2, vec![vec![2, 0], vec![0, 0]]);
        let (padded, pull) = pad_instance(&inst, 2, 3).unwrap();
        let after = solve_brute_force(&padded, SolveMode::All, 1000).unwrap();
        assert!(after.contains(&GridSolution::Interception { x: 1, y: 1 }));
        assert_eq!(
            pull(&GridSolution::Interception { x: 1, y: 1 }).unwrap(),
            GridSolution::InvalidHolePredecessor { x: 1 }
        );
        for s in &after {
            assert!(check_solution(&inst, &pull(s).unwrap()).is_ok());
        }
    }

    #[test]
    fn inj_php_row_padding_keeps_classification_and_solutions() {
        let params = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: true, bijective: false, collision: false };
        let inst = GridInstance::from_tables(
            params,
            vec![vec![1, 0], vec![1, 0]],
            Some(vec![vec![0, 1], vec![0, 0]]),
        )
        .unwrap();
        let (padded, pull) = pad_instance(&inst, 4, 2).unwrap();
        assert!(classify_params(padded.params(), None).contains(&ProblemClass::InjPhp));
        let after = solve_brute_force(&padded, SolveMode::All, 1000).unwrap();
        assert!(!after.is_empty());
        for s in &after {
            assert!(check_solution(&inst, &pull(s).unwrap()).is_ok());
        }
    }

    #[test]
    fn shrinking_pad_rejected() {
        let inst = sod(2, 3, vec![vec![0, 0, 0], vec![0, 0, 0]]);
        assert!(matches!(pad_instance(&inst, 2, 2), Err(ReductionError::ShrinkingPad(_))));
    }
}
