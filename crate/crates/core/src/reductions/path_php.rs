use crate::grid::{
    classify_params, GridInstance, GridParams, GridSolution, Node, ProblemClass, RowOracle, SurplusFn,
};

use super::{GridPullBack, PullBackError, ReductionError};

/// Which two-column problem feeds the chaining construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathPhpFlavor {
    Inj,
    Bij,
    Collision,
}

/// Chains a two-column pigeonhole instance with `A = T+1`, `B = T` into a
/// path instance with `A = f(T)` starts: every transition column merges the
/// first `T+1` rows through the input instance while one chain row retires.
/// Output dimensions are `(N, M) = (f(T), f(T) - T + 1)` with
/// `(A, B) = (f(T), T)` exactly.
///
/// Edges into the input's invalid hole are removed first; the node that
/// pointed there stays a solution, now as a dead start.
pub fn php_to_path_php(
    php: &GridInstance,
    f: &SurplusFn,
    flavor: PathPhpFlavor,
) -> Result<(GridInstance, GridPullBack), ReductionError> {
    let classes = classify_params(php.params(), None);
    let expected = match flavor {
        PathPhpFlavor::Inj => ProblemClass::InjPhp,
        PathPhpFlavor::Bij => ProblemClass::BijPhp,
        PathPhpFlavor::Collision => ProblemClass::PigeonCircuit,
    };
    if !classes.contains(&expected) {
        return Err(ReductionError::Misclassified {
            expected: match flavor {
                PathPhpFlavor::Inj => "inj-php",
                PathPhpFlavor::Bij => "bij-php",
                PathPhpFlavor::Collision => "pigeon-circuit",
            },
            found: format!("{:?}", php.params()),
        });
    }
    let t = php.params().b;
    let ft = f.apply(t);
    if ft <= t {
        return Err(ReductionError::UnsupportedMode(format!(
            "surplus function {} fails f(t) > t at t = {t}",
            f.name
        )));
    }
    let m = ft - t + 1;
    let params = GridParams {
        n: ft,
        m,
        a: ft,
        b: t,
        reversible: flavor != PathPhpFlavor::Collision,
        bijective: flavor == PathPhpFlavor::Bij,
        collision: flavor == PathPhpFlavor::Collision,
    };

    // Input successor with edges into the invalid hole removed.
    let preprocessed = {
        let src = php.clone();
        let invalid = t + 1;
        move |x: usize| match src.succ(Node::new(x, 1)) {
            Some(v) if v == invalid => None,
            other => other,
        }
    };

    let s0 = preprocessed.clone();
    let succ = RowOracle::new(move |node: Node| {
        let Node { x, y } = node;
        if y > m - 1 {
            return None;
        }
        if x <= t + 1 {
            s0(x)
        } else if x <= ft - y + 1 {
            Some(x - 1)
        } else {
            None
        }
    });
    let pred = params.reversible.then(|| {
        let src = php.clone();
        RowOracle::new(move |node: Node| {
            let Node { x, y } = node;
            if y < 2 {
                return None;
            }
            if x <= t {
                src.pred(Node::new(x, 2))
            } else if x == t + 1 {
                (t + 2 <= ft - y + 2 && t + 2 <= ft).then_some(t + 2)
            } else {
                (x + 1 <= ft - y + 2).then_some(x + 1)
            }
        })
    });
    let out = GridInstance::new(params, succ, pred).map_err(ReductionError::from_grid)?;

    let src = php.clone();
    let s0 = preprocessed;
    let pull: GridPullBack = Box::new(move |sol| {
        // Maps a dead pigeon of the input back to its own solution kind.
        let dead_pigeon = |v: usize| match src.succ(Node::new(v, 1)) {
            None => Ok(GridSolution::MissingSource { x: v }),
            Some(w) if w == t + 1 => Ok(GridSolution::InvalidHolePredecessor { x: v }),
            Some(_) => Err(PullBackError::unreachable("pigeon with a surviving edge is alive")),
        };
        match *sol {
            GridSolution::MissingSource { x } => {
                if x <= t + 1 {
                    dead_pigeon(x)
                } else {
                    Err(PullBackError::unreachable("chain rows are alive on column 1"))
                }
            }
            GridSolution::Interception { x, y: _ } => {
                let v = if x <= t + 1 {
                    s0(x).ok_or_else(|| PullBackError::unreachable("intercepted node has a successor"))?
                } else {
                    x - 1
                };
                if v <= t + 1 {
                    dead_pigeon(v)
                } else {
                    Err(PullBackError::unreachable("interior chain targets are always alive"))
                }
            }
            GridSolution::GenesisSource { x, .. } => {
                if x <= t {
                    Ok(GridSolution::EmptyHole { x })
                } else {
                    Err(PullBackError::unreachable("chain rows always have predecessors where alive"))
                }
            }
            GridSolution::EmptyHole { x } => Ok(GridSolution::EmptyHole { x }),
            GridSolution::Collision { x1, x2, .. } => {
                if x1 <= t + 1 && x2 <= t + 1 {
                    Ok(GridSolution::Collision { x1, x2, y: 1 })
                } else {
                    Err(PullBackError::unreachable("chain rows never collide"))
                }
            }
            GridSolution::InvalidHolePredecessor { .. } => Err(PullBackError::unreachable(
                "the last transition column only carries edges into valid holes",
            )),
        }
    });
    Ok((out, pull))
}

/// Flattens a reversible path instance into a two-column injective
/// pigeonhole instance: pigeons are the cells of columns `[M-1]`, holes are
/// the reachable cells plus dummies normalizing the surplus to one. Live
/// cells map along their edge, dead non-start cells claim their own hole,
/// dead starts stay unmapped.
pub fn path_php_to_php(path: &GridInstance) -> Result<(GridInstance, GridPullBack), ReductionError> {
    let p = *path.params();
    if !p.reversible || p.bijective {
        return Err(ReductionError::Misclassified {
            expected: "path-inj-php (r=1, b=0)",
            found: format!("{p:?}"),
        });
    }
    let (n, m, a, b) = (p.n, p.m, p.a, p.b);
    let pigeons = n * (m - 1);
    let params = GridParams {
        n: pigeons,
        m: 2,
        a: pigeons,
        b: pigeons - 1,
        reversible: true,
        bijective: false,
        collision: false,
    };

    // Hole order: column-1 non-start cells, then interior cells column-major,
    // then valid ends, then dummies; the invalid hole is index `pigeons`.
    let hole_index = move |x: usize, y: usize| -> usize {
        if y == 1 {
            x - a
        } else if y < m {
            (n - a) + (y - 2) * n + x
        } else {
            (n - a) + (m - 2) * n + x
        }
    };
    let pigeon_index = move |x: usize, y: usize| -> usize { x + (y - 1) * n };
    let decode_pigeon = move |idx: usize| -> (usize, usize) { ((idx - 1) % n + 1, (idx - 1) / n + 1) };
    let first_dummy = (n - a) + n * (m - 2) + b + 1;

    let src = path.clone();
    let succ = RowOracle::new(move |node: Node| {
        if node.y != 1 {
            return None;
        }
        let (x, y) = decode_pigeon(node.x);
        match src.succ(Node::new(x, y)) {
            Some(v) => {
                if y + 1 == m && v > b {
                    Some(pigeons) // the invalid hole; its empty predecessor nulls this edge
                } else {
                    Some(hole_index(v, y + 1))
                }
            }
            None => {
                if y == 1 && x <= a {
                    None
                } else {
                    Some(hole_index(x, y))
                }
            }
        }
    });
    let src = path.clone();
    let pred = RowOracle::new(move |node: Node| {
        if node.y != 2 {
            return None;
        }
        let h = node.x;
        if h >= first_dummy {
            return None;
        }
        let (x, y) = if h <= n - a {
            (h + a, 1)
        } else if h <= (n - a) + n * (m - 2) {
            let rest = h - (n - a) - 1;
            (rest % n + 1, rest / n + 2)
        } else {
            (h - (n - a) - n * (m - 2), m)
        };
        if y >= 2 {
            if let Some(pp) = src.pred(Node::new(x, y)) {
                return Some(pigeon_index(pp, y - 1));
            }
        }
        if y <= m - 1 && src.succ(Node::new(x, y)).is_none() && !(y == 1 && x <= a) {
            return Some(pigeon_index(x, y));
        }
        None
    });
    let out = GridInstance::new(params, succ, Some(pred)).map_err(ReductionError::from_grid)?;

    let src = path.clone();
    let pull: GridPullBack = Box::new(move |sol| match *sol {
        GridSolution::MissingSource { x: idx } => {
            let (x, y) = decode_pigeon(idx);
            match src.succ(Node::new(x, y)) {
                None if y == 1 && x <= a => Ok(GridSolution::MissingSource { x }),
                None => match src.pred(Node::new(x, y)) {
                    Some(p0) => Ok(GridSolution::Interception { x: p0, y: y - 1 }),
                    None => Err(PullBackError::unreachable("dead unfed non-start keeps its own hole")),
                },
                Some(v) if y + 1 == m && v > b => Ok(GridSolution::InvalidHolePredecessor { x }),
                Some(_) => Err(PullBackError::unreachable("live edges into valid holes survive wrapping")),
            }
        }
        _ => Err(PullBackError::unreachable("two-column injective output admits only missing sources")),
    });
    Ok((out, pull))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_solution, solve_brute_force, SolveMode, SURPLUS_SQUARE, SURPLUS_SUCC};

    fn inj_php(succ: Vec<Vec<usize>>, pred: Vec<Vec<usize>>) -> GridInstance {
        let t = succ.len() - 1;
        let params =
            GridParams { n: t + 1, m: 2, a: t + 1, b: t, reversible: true, bijective: false, collision: false };
        GridInstance::from_tables(params, succ, Some(pred)).unwrap()
    }

    #[test]
    fn size_plan_matches_the_square_surplus() {
        // T = 2, f(t) = t^2 -> N=4, M=3, A=4, B=2
        let php = inj_php(
            vec![vec![1, 0], vec![2, 0], vec![0, 0]],
            vec![vec![0, 1], vec![0, 2], vec![0, 0]],
        );
        let (out, _) = php_to_path_php(&php, &SURPLUS_SQUARE, PathPhpFlavor::Inj).unwrap();
        let p = out.params();
        assert_eq!((p.n, p.m, p.a, p.b), (4, 3, 4, 2));
    }

    #[test]
    fn chain_rows_retire_one_per_column() {
        // T = 2, f(T) = 4: S(4,1) = 3 and S(4,2) = null.
        let php = inj_php(
            vec![vec![1, 0], vec![2, 0], vec![0, 0]],
            vec![vec![0, 1], vec![0, 2], vec![0, 0]],
        );
        let (out, _) = php_to_path_php(&php, &SURPLUS_SQUARE, PathPhpFlavor::Inj).unwrap();
        assert_eq!(out.succ(Node::new(4, 1)), Some(3));
        assert_eq!(out.succ(Node::new(4, 2)), None);
    }

    #[test]
    fn succ_surplus_collapses_to_two_columns() {
        let php = inj_php(vec![vec![1, 0], vec![1, 0]], vec![vec![0, 1], vec![0, 0]]);
        let (out, pull) = php_to_path_php(&php, &SURPLUS_SUCC, PathPhpFlavor::Inj).unwrap();
        assert_eq!(out.params().m, 2);
        let sols = solve_brute_force(&out, SolveMode::All, 1000).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            assert!(check_solution(&php, &pull(s).unwrap()).is_ok());
        }
    }

    #[test]
    fn path_to_php_roundtrip_pulls_back_interception() {
        // Build a path instance via Lemma 2 first, then flatten it back.
        let php = inj_php(
            vec![vec![1, 0], vec![3, 0], vec![0, 0]],
            vec![vec![0, 1], vec![0, 0], vec![0, 2]],
        );
        let (path, pull_a) = php_to_path_php(&php, &SURPLUS_SQUARE, PathPhpFlavor::Inj).unwrap();
        let (flat, pull_b) = path_php_to_php(&path).unwrap();
        assert!(classify_params(flat.params(), None).contains(&ProblemClass::InjPhp));
        let sols = solve_brute_force(&flat, SolveMode::All, 100_000).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            let mid = pull_b(s).unwrap();
            assert!(check_solution(&path, &mid).is_ok(), "{mid:?} not a path solution");
            let back = pull_a(&mid).unwrap();
            assert!(check_solution(&php, &back).is_ok(), "{back:?} not an input solution");
        }
    }
}
