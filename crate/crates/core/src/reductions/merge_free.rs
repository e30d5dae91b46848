use crate::grid::{
    classify_params, GridInstance, GridParams, GridSolution, MeetSolution, Node, ProblemClass,
    RowOracle, SURPLUS_SQUARE,
};

use super::pad::pad_instance;
use super::path_php::{php_to_path_php, PathPhpFlavor};
use super::{GridPullBack, MeetPullBack, PullBackError, ReductionError};

/// Which gadget accompanies the sink-of-dag input, and hence which flags the
/// merge-free output carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetFlavor {
    /// Injective two-column gadget; output is reversible (a potential line).
    Inj,
    /// Collision two-column gadget; output keeps the collision flag.
    Collision,
}

/// Simulates a sink-of-dag instance without merges by interleaving it with a
/// pigeonhole gadget.
///
/// Both inputs are padded to a common scale `n*`: the sink-of-dag to
/// `[n*] x [m*]`, the gadget to `n* + 1` pigeons and then chained into a path
/// instance on `[n*^2] x [m*]` with surplus `t^2`. The output walks one
/// sink-of-dag step per outer column and one full path traversal per inner
/// block, recording the stepping row in the path coordinate so former merges
/// land on distinct rows. Rows pack as `alpha + (x-1) n*^2` (path row
/// `alpha`, dag row `x`), columns as `k + (y-1) m*` (inner `k`, outer `y`),
/// giving `[n*^3] x [m*^2]` with a single start and no valid ends.
///
/// Solutions pull back to a side-tagged witness: `left` for the sink-of-dag
/// input, `right` for the gadget.
pub fn sod_meet_gadget_to_merge_free(
    sod: &GridInstance,
    gadget: &GridInstance,
    flavor: GadgetFlavor,
) -> Result<(GridInstance, MeetPullBack), ReductionError> {
    if !classify_params(sod.params(), None).contains(&ProblemClass::SoD) {
        return Err(ReductionError::Misclassified {
            expected: "sod",
            found: format!("{:?}", sod.params()),
        });
    }
    let (gadget_class, gadget_name, path_flavor) = match flavor {
        GadgetFlavor::Inj => (ProblemClass::InjPhp, "inj-php", PathPhpFlavor::Inj),
        GadgetFlavor::Collision => {
            (ProblemClass::PigeonCircuit, "pigeon-circuit", PathPhpFlavor::Collision)
        }
    };
    if !classify_params(gadget.params(), None).contains(&gadget_class) {
        return Err(ReductionError::Misclassified {
            expected: gadget_name,
            found: format!("{:?}", gadget.params()),
        });
    }

    // Common scale: the surplus function needs n* >= 2 to grow.
    let ns = sod.params().n.max(gadget.params().b).max(2);
    let n2 = ns * ns;
    let ms = sod.params().m.max(n2 - ns + 1);

    let (sod_p, pull_sod) = pad_instance(sod, ns, ms)?;
    let (gadget_p, pull_gadget) = pad_instance(gadget, ns + 1, 2)?;
    let (path_raw, pull_chain) = php_to_path_php(&gadget_p, &SURPLUS_SQUARE, path_flavor)?;
    let (path_p, pull_path_pad) = pad_instance(&path_raw, n2, ms)?;

    let reversible = flavor == GadgetFlavor::Inj;
    let params = GridParams {
        n: n2 * ns,
        m: ms * ms,
        a: 1,
        b: 0,
        reversible,
        bijective: false,
        collision: !reversible,
    };

    // Row <alpha, x>, alpha = <i, j> over [ns] x [ns]; column <k, y>.
    let decode_row = move |row: usize| -> (usize, usize) { ((row - 1) % n2 + 1, (row - 1) / n2 + 1) };
    let decode_col = move |col: usize| -> (usize, usize) { ((col - 1) % ms + 1, (col - 1) / ms + 1) };
    let split = move |alpha: usize| -> (usize, usize) { ((alpha - 1) % ns + 1, (alpha - 1) / ns + 1) };

    let (dag, path) = (sod_p.clone(), path_p.clone());
    let succ = RowOracle::new(move |node: Node| {
        let (alpha, x) = decode_row(node.x);
        let (k, y) = decode_col(node.y);
        let (i, j) = split(alpha);
        if k == ms && j == 1 {
            // Block boundary: take one dag step, remembering the stepping row.
            dag.succ(Node::new(x, y)).map(|v| (i + (x - 1) * ns) + (v - 1) * n2)
        } else if k < ms && dag.succ(Node::new(x, y)).is_some() {
            path.succ(Node::new(alpha, k)).map(|beta| beta + (x - 1) * n2)
        } else {
            None
        }
    });
    let pred = reversible.then(|| {
        let (dag, path) = (sod_p.clone(), path_p.clone());
        RowOracle::new(move |node: Node| {
            let (alpha, x) = decode_row(node.x);
            let (k, y) = decode_col(node.y);
            let (i, j) = split(alpha);
            if k == 1 {
                (y > 1 && dag.succ(Node::new(j, y - 1)) == Some(x))
                    .then(|| i + (j - 1) * n2)
            } else if dag.succ(Node::new(x, y)).is_some() {
                path.pred(Node::new(alpha, k)).map(|beta| beta + (x - 1) * n2)
            } else {
                None
            }
        })
    });
    let out = GridInstance::new(params, succ, pred).map_err(ReductionError::from_grid)?;

    let (dag, path) = (sod_p, path_p);
    let pull_right: GridPullBack = Box::new(move |s| pull_gadget(&pull_chain(&pull_path_pad(s)?)?));
    let pull: MeetPullBack = Box::new(move |sol| {
        let left = |s: GridSolution| pull_sod(&s).map(MeetSolution::left_grid);
        let right = |s: GridSolution| pull_right(&s).map(MeetSolution::right_grid);
        match *sol {
            GridSolution::MissingSource { x: 1 } => {
                if dag.succ(Node::new(1, 1)).is_none() {
                    left(GridSolution::MissingSource { x: 1 })
                } else if path.succ(Node::new(1, 1)).is_none() {
                    right(GridSolution::MissingSource { x: 1 })
                } else {
                    Err(PullBackError::unreachable("the start has a first edge"))
                }
            }
            GridSolution::Interception { x: row, y: col } => {
                let (alpha, x) = decode_row(row);
                let (k, y) = decode_col(col);
                let (i, j) = split(alpha);
                if k == ms && j == 1 {
                    let v = dag
                        .succ(Node::new(x, y))
                        .ok_or_else(|| PullBackError::unreachable("boundary edge implies a dag step"))?;
                    if dag.succ(Node::new(v, y + 1)).is_none() {
                        // The dag itself dies one step later.
                        if y + 1 <= ms - 1 {
                            left(GridSolution::Interception { x, y })
                        } else {
                            left(GridSolution::InvalidHolePredecessor { x })
                        }
                    } else {
                        // The path restarts dead in the next block; its row
                        // there is <i, x> with x the recorded stepping row.
                        right(GridSolution::MissingSource { x: i + (x - 1) * ns })
                    }
                } else if k < ms {
                    let beta = path
                        .succ(Node::new(alpha, k))
                        .ok_or_else(|| PullBackError::unreachable("in-block edge implies a path step"))?;
                    if k + 1 < ms {
                        right(GridSolution::Interception { x: alpha, y: k })
                    } else if (beta - 1) / ns + 1 != 1 {
                        // Path arrival outside its valid ends blocks the boundary.
                        right(GridSolution::InvalidHolePredecessor { x: alpha })
                    } else {
                        Err(PullBackError::unreachable("a valid path arrival continues at the boundary"))
                    }
                } else {
                    Err(PullBackError::unreachable("off-track rows carry no edges"))
                }
            }
            GridSolution::Collision { x1: r1, x2: r2, y: col } => {
                let (a1, x1) = decode_row(r1);
                let (a2, x2) = decode_row(r2);
                let (k, _) = decode_col(col);
                if k < ms && x1 == x2 && a1 != a2 {
                    right(GridSolution::Collision { x1: a1, x2: a2, y: k })
                } else {
                    Err(PullBackError::unreachable(
                        "boundary edges record the stepping row and cannot merge",
                    ))
                }
            }
            _ => Err(PullBackError::unreachable("kind cannot occur on the merge-free output")),
        }
    });
    Ok((out, pull))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_meet_solution, solve_brute_force, MeetInstance, SolveMode};

    fn sod(n: usize, m: usize, succ: Vec<Vec<usize>>) -> GridInstance {
        let params = GridParams { n, m, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        GridInstance::from_tables(params, succ, None).unwrap()
    }

    fn inj_gadget() -> GridInstance {
        // Both pigeons point at hole 1; the wrapper orphans pigeon 2.
        let params = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: true, bijective: false, collision: false };
        GridInstance::from_tables(
            params,
            vec![vec![1, 0], vec![1, 0]],
            Some(vec![vec![0, 1], vec![0, 0]]),
        )
        .unwrap()
    }

    fn collision_gadget() -> GridInstance {
        let params = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: false, bijective: false, collision: true };
        GridInstance::from_tables(params, vec![vec![1, 0], vec![1, 0]], None).unwrap()
    }

    #[test]
    fn output_dimensions_are_cubic_rows_square_columns() {
        let left = sod(2, 2, vec![vec![2, 0], vec![2, 0]]);
        let (out, _) = sod_meet_gadget_to_merge_free(&left, &inj_gadget(), GadgetFlavor::Inj).unwrap();
        // n* = 2, m* = max(2, 3) = 3.
        assert_eq!((out.params().n, out.params().m), (8, 9));
        assert!(classify_params(out.params(), None).contains(&ProblemClass::SoPL));
    }

    #[test]
    fn merging_dag_pulls_back_through_either_side() {
        let left = sod(2, 2, vec![vec![2, 0], vec![2, 0]]);
        let gadget = inj_gadget();
        let (out, pull) = sod_meet_gadget_to_merge_free(&left, &gadget, GadgetFlavor::Inj).unwrap();
        let meet = MeetInstance::of_grids(left, gadget);
        let sols = solve_brute_force(&out, SolveMode::All, 10_000).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            let back = pull(s).unwrap();
            assert!(check_meet_solution(&meet, &back).is_ok(), "{back:?} rejected for {s:?}");
        }
    }

    #[test]
    fn collision_flavor_keeps_the_collision_flag() {
        let left = sod(2, 3, vec![vec![2, 1, 0], vec![2, 1, 0]]);
        let gadget = collision_gadget();
        let (out, pull) = sod_meet_gadget_to_merge_free(&left, &gadget, GadgetFlavor::Collision).unwrap();
        assert!(classify_params(out.params(), None).contains(&ProblemClass::SoDNoMerge));
        let meet = MeetInstance::of_grids(left, gadget);
        let sols = solve_brute_force(&out, SolveMode::All, 100_000).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            let back = pull(s).unwrap();
            assert!(check_meet_solution(&meet, &back).is_ok(), "{back:?} rejected for {s:?}");
        }
    }
}
