use crate::grid::{GridInstance, GridParams, GridSolution, Node, RowOracle};

use super::{GridPullBack, PullBackError, ReductionError};

/// Flattens a collision-flagged forward instance into a two-column collision
/// instance whose only solutions are collisions.
///
/// Pigeons are the cells of columns `[M-1]` plus one extra pigeon `p0`.
/// Holes are the reachable cells (columns 2..M minus invalid ends), a shared
/// sink hole `h0`, one private hole per non-start column-1 row, and enough
/// unreferenced holes to leave a surplus of exactly one. The map is total:
/// live cells follow their edge (invalid ends divert to `h0`), dead starts
/// and `p0` go to `h0`, dead non-start cells claim their own cell's hole or
/// their private hole. Every collision then exposes an input defect: two
/// arrivals at `h0` or at a shared cell, or an arrival at a dead cell's own
/// hole.
pub fn grid_collision_to_pigeon_circuit(
    inst: &GridInstance,
) -> Result<(GridInstance, GridPullBack), ReductionError> {
    let p = *inst.params();
    if p.reversible || !p.collision {
        return Err(ReductionError::Misclassified {
            expected: "collision-flagged forward instance (r=0, c=1)",
            found: format!("{p:?}"),
        });
    }
    let (n, m, a, b) = (p.n, p.m, p.a, p.b);
    let pigeons = n * (m - 1) + 1;
    let p0 = pigeons;
    let params = GridParams {
        n: pigeons,
        m: 2,
        a: pigeons,
        b: pigeons - 1,
        reversible: false,
        bijective: false,
        collision: true,
    };

    // Hole order: interior cells column-major, valid ends, h0, private holes
    // for column-1 non-start rows, then unreferenced holes.
    let hole_of_cell = move |x: usize, y: usize| -> usize {
        if y < m {
            (y - 2) * n + x
        } else {
            n * (m - 2) + x
        }
    };
    let h0 = n * (m - 2) + b + 1;
    let private_hole = move |x: usize| -> usize { h0 + (x - a) };
    let decode = move |idx: usize| -> (usize, usize) { ((idx - 1) % n + 1, (idx - 1) / n + 1) };

    let src = inst.clone();
    let map_pigeon = move |idx: usize| -> usize {
        if idx == p0 {
            return h0;
        }
        let (x, y) = decode(idx);
        match src.succ(Node::new(x, y)) {
            Some(v) => {
                if y + 1 == m && v > b {
                    h0
                } else {
                    hole_of_cell(v, y + 1)
                }
            }
            None => {
                if y == 1 {
                    if x <= a {
                        h0
                    } else {
                        private_hole(x)
                    }
                } else {
                    hole_of_cell(x, y)
                }
            }
        }
    };

    let map = map_pigeon.clone();
    let succ = RowOracle::new(move |node: Node| (node.y == 1).then(|| map(node.x)));
    let out = GridInstance::new(params, succ, None).map_err(ReductionError::from_grid)?;

    let src = inst.clone();
    let pull: GridPullBack = Box::new(move |sol| {
        let (p1, p2) = match *sol {
            GridSolution::Collision { x1, x2, .. } => (x1, x2),
            _ => {
                return Err(PullBackError::unreachable(
                    "the pigeon map is total into the valid holes",
                ))
            }
        };
        // Names the input defect a single h0 arrival witnesses.
        let sink_defect = |idx: usize| -> Option<GridSolution> {
            if idx == p0 {
                return None;
            }
            let (x, y) = decode(idx);
            match src.succ(Node::new(x, y)) {
                Some(v) if y + 1 == m && v > b => Some(GridSolution::InvalidHolePredecessor { x }),
                None if y == 1 && x <= a => Some(GridSolution::MissingSource { x }),
                _ => None,
            }
        };
        let h = map_pigeon(p1);
        if map_pigeon(p2) != h {
            return Err(PullBackError::unreachable("colliding pigeons share a hole"));
        }
        if h == h0 {
            return sink_defect(p1)
                .or_else(|| sink_defect(p2))
                .ok_or_else(|| PullBackError::unreachable("h0 arrivals witness a start or end defect"));
        }
        let (c1, c2) = (decode(p1), decode(p2));
        let live = |(x, y): (usize, usize)| src.succ(Node::new(x, y)).is_some();
        match (live(c1), live(c2)) {
            (true, true) => Ok(GridSolution::Collision { x1: c1.0, x2: c2.0, y: c1.1 }),
            (true, false) => Ok(GridSolution::Interception { x: c1.0, y: c1.1 }),
            (false, true) => Ok(GridSolution::Interception { x: c2.0, y: c2.1 }),
            (false, false) => Err(PullBackError::unreachable("each hole has at most one dead claimant")),
        }
    });
    Ok((out, pull))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_solution, classify_params, solve_brute_force, ProblemClass, SolveMode};

    fn no_merge(n: usize, m: usize, succ: Vec<Vec<usize>>) -> GridInstance {
        let params = GridParams { n, m, a: 1, b: 0, reversible: false, bijective: false, collision: true };
        GridInstance::from_tables(params, succ, None).unwrap()
    }

    #[test]
    fn output_is_a_two_column_collision_instance() {
        let inst = no_merge(2, 3, vec![vec![2, 1, 0], vec![2, 0, 0]]);
        let (out, _) = grid_collision_to_pigeon_circuit(&inst).unwrap();
        assert_eq!((out.params().n, out.params().m), (5, 2));
        assert!(classify_params(out.params(), None).contains(&ProblemClass::PigeonCircuit));
    }

    #[test]
    fn only_collisions_appear_and_all_pull_back() {
        // A merge at (2,2) and a mid-grid death.
        let inst = no_merge(2, 3, vec![vec![2, 1, 0], vec![2, 0, 0]]);
        let (out, pull) = grid_collision_to_pigeon_circuit(&inst).unwrap();
        let sols = solve_brute_force(&out, SolveMode::All, 1000).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            assert!(matches!(s, GridSolution::Collision { .. }), "unexpected kind {s:?}");
            let back = pull(s).unwrap();
            assert!(check_solution(&inst, &back).is_ok(), "{back:?} rejected for {s:?}");
        }
    }

    #[test]
    fn dead_start_collides_with_the_extra_pigeon() {
        let inst = no_merge(1, 2, vec![vec![0, 0]]);
        let (out, pull) = grid_collision_to_pigeon_circuit(&inst).unwrap();
        let sols = solve_brute_force(&out, SolveMode::All, 1000).unwrap();
        assert_eq!(sols, vec![GridSolution::Collision { x1: 1, x2: 2, y: 1 }]);
        assert_eq!(pull(&sols[0]).unwrap(), GridSolution::MissingSource { x: 1 });
    }
}
