use crate::grid::{
    classify_params, GridInstance, GridParams, GridSolution, MeetSolution, Node, ProblemClass,
    RowOracle,
};

use super::transfer::transfer_sources_to_first_column;
use super::{MeetPullBack, PullBackError, ReductionError};

/// Combines a reversible single-start instance with a bijective two-column
/// gadget into a bijective single-start instance.
///
/// The single-start input is first normalized so all its sources sit in
/// column 1 (giving `N'` rows). The output holds `K` copies of it plus one
/// extra row `u`, over `2M` columns: columns `1..M` replay each copy
/// backwards (following predecessors from the last column down to column 1),
/// column `M` bridges through the gadget's pigeon edges, and columns
/// `M+1..2M` replay forwards. Row `u` feeds the extra pigeon's bridge, and is
/// swapped with row 1 so the distinguished start is the surplus pigeon.
/// Output dimensions: `[K N' + 1] x [2M]`, single start, no valid ends.
///
/// Solutions pull back side-tagged: `left` for the single-start input,
/// `right` for the gadget.
pub fn sopl_meet_bijphp_to_eopl(
    sopl: &GridInstance,
    gadget: &GridInstance,
) -> Result<(GridInstance, MeetPullBack), ReductionError> {
    if !classify_params(sopl.params(), None).contains(&ProblemClass::SoPL) {
        return Err(ReductionError::Misclassified {
            expected: "sopl",
            found: format!("{:?}", sopl.params()),
        });
    }
    if !classify_params(gadget.params(), None).contains(&ProblemClass::BijPhp) {
        return Err(ReductionError::Misclassified {
            expected: "bij-php",
            found: format!("{:?}", gadget.params()),
        });
    }
    let k = gadget.params().b;
    if k == 0 {
        return Err(ReductionError::UnsupportedMode(
            "bijective gadget with zero holes leaves the bridge nowhere to land".to_string(),
        ));
    }

    let (tr, pull_transfer) = transfer_sources_to_first_column(sopl)?;
    let np = tr.params().n;
    let m = tr.params().m;
    let u = k * np + 1;
    let params = GridParams {
        n: u,
        m: 2 * m,
        a: 1,
        b: 0,
        reversible: true,
        bijective: true,
        collision: false,
    };

    // Natural row labels: (i, x) = x + (i-1) N' for copy i in [K]; u extra.
    // The published labels swap rows 1 and u.
    let swap = move |r: usize| -> usize {
        if r == 1 {
            u
        } else if r == u {
            1
        } else {
            r
        }
    };
    let decode = move |r: usize| -> (usize, usize) { ((r - 1) / np + 1, (r - 1) % np + 1) };
    let row_of = move |i: usize, x: usize| -> usize { x + (i - 1) * np };

    let (t, g) = (tr.clone(), gadget.clone());
    let succ_nat = move |row: usize, col: usize| -> Option<usize> {
        if row == u {
            if col <= m - 1 {
                Some(u)
            } else if col == m {
                // A bridge into an invalid hole carries no edge; the break is
                // itself a gadget solution.
                g.succ(Node::new(k + 1, 1)).filter(|&h| h <= k).map(|h| row_of(h, 1))
            } else {
                None
            }
        } else {
            let (i, x) = decode(row);
            if col <= m - 1 {
                t.pred(Node::new(x, m - col + 1)).map(|p| row_of(i, p))
            } else if col == m {
                if x == 1 {
                    g.succ(Node::new(i, 1)).filter(|&h| h <= k).map(|h| row_of(h, 1))
                } else {
                    t.succ(Node::new(x, 1)).map(|_| row)
                }
            } else {
                t.succ(Node::new(x, col - m)).map(|v| row_of(i, v))
            }
        }
    };
    let (t, g) = (tr.clone(), gadget.clone());
    let pred_nat = move |row: usize, col: usize| -> Option<usize> {
        if row == u {
            (2 <= col && col <= m).then_some(u)
        } else {
            let (i, x) = decode(row);
            if col < 2 {
                None
            } else if col <= m {
                t.succ(Node::new(x, m - col + 1)).map(|s| row_of(i, s))
            } else if col == m + 1 {
                if x == 1 {
                    g.pred(Node::new(i, 2))
                        .map(|p| if p == k + 1 { u } else { row_of(p, 1) })
                } else {
                    t.succ(Node::new(x, 1)).map(|_| row)
                }
            } else {
                t.pred(Node::new(x, col - m)).map(|p| row_of(i, p))
            }
        }
    };
    let s = succ_nat.clone();
    let succ = RowOracle::new(move |node: Node| s(swap(node.x), node.y).map(swap));
    let p = pred_nat.clone();
    let pred = RowOracle::new(move |node: Node| p(swap(node.x), node.y).map(swap));
    let out = GridInstance::new(params, succ, Some(pred)).map_err(ReductionError::from_grid)?;

    let (t, g) = (tr, gadget.clone());
    let pull: MeetPullBack = Box::new(move |sol| {
        let left = |s: GridSolution| pull_transfer(&s).map(MeetSolution::left_grid);
        let right = |s: GridSolution| Ok(MeetSolution::right_grid(s));
        match *sol {
            GridSolution::GenesisSource { x: row, y } => {
                let nat = swap(row);
                if nat == u {
                    return Err(PullBackError::unreachable("the feeder row is fed throughout"));
                }
                let (i, x) = decode(nat);
                if y == 1 {
                    let p0 = t.pred(Node::new(x, m)).ok_or_else(|| {
                        PullBackError::unreachable("a column-1 genesis follows an arrival at the last column")
                    })?;
                    left(GridSolution::InvalidHolePredecessor { x: p0 })
                } else if y <= m - 1 {
                    let c = m - y + 1;
                    let p0 = t.pred(Node::new(x, c)).ok_or_else(|| {
                        PullBackError::unreachable("a reversed genesis follows an entered dead node")
                    })?;
                    left(GridSolution::Interception { x: p0, y: c - 1 })
                } else if y == m {
                    if x == 1 && t.succ(Node::new(1, 1)).is_none() {
                        left(GridSolution::MissingSource { x: 1 })
                    } else {
                        Err(PullBackError::unreachable("non-distinguished bridges imply a live first cell"))
                    }
                } else if y == m + 1 {
                    if x == 1 && g.pred(Node::new(i, 2)).is_none() {
                        right(GridSolution::EmptyHole { x: i })
                    } else {
                        Err(PullBackError::unreachable("non-distinguished re-entries carry their bridge"))
                    }
                } else {
                    Err(PullBackError::unreachable("interior sources were transferred to column 1"))
                }
            }
            GridSolution::Interception { x: row, y: col } => {
                let nat = swap(row);
                if nat == u {
                    if col + 1 == m {
                        return match g.succ(Node::new(k + 1, 1)) {
                            None => right(GridSolution::MissingSource { x: k + 1 }),
                            Some(h) if h > k => {
                                right(GridSolution::InvalidHolePredecessor { x: k + 1 })
                            }
                            Some(_) => {
                                Err(PullBackError::unreachable("the surplus bridge is live"))
                            }
                        };
                    } else if col == m {
                        if t.succ(Node::new(1, 1)).is_none() {
                            return left(GridSolution::MissingSource { x: 1 });
                        }
                        return Err(PullBackError::unreachable("the bridged copy starts alive"));
                    }
                    return Err(PullBackError::unreachable("the feeder runs straight to its bridge"));
                }
                let (i, x) = decode(nat);
                if col <= m - 1 {
                    let xt = t.pred(Node::new(x, m - col + 1)).ok_or_else(|| {
                        PullBackError::unreachable("reversed edges follow predecessors")
                    })?;
                    if col + 1 == m && xt == 1 {
                        match g.succ(Node::new(i, 1)) {
                            None => right(GridSolution::MissingSource { x: i }),
                            Some(h) if h > k => {
                                right(GridSolution::InvalidHolePredecessor { x: i })
                            }
                            Some(_) => Err(PullBackError::unreachable("the copy's bridge is live")),
                        }
                    } else {
                        Err(PullBackError::unreachable(
                            "reversed targets keep their forward edge after the transfer",
                        ))
                    }
                } else if col == m {
                    if x == 1 {
                        if t.succ(Node::new(1, 1)).is_none() {
                            left(GridSolution::MissingSource { x: 1 })
                        } else {
                            Err(PullBackError::unreachable("the bridged copy starts alive"))
                        }
                    } else {
                        Err(PullBackError::unreachable("plain bridges land on live cells"))
                    }
                } else {
                    let c = col - m;
                    let v = t
                        .succ(Node::new(x, c))
                        .ok_or_else(|| PullBackError::unreachable("forward edges follow successors"))?;
                    if t.succ(Node::new(v, c + 1)).is_none() {
                        left(GridSolution::Interception { x, y: c })
                    } else {
                        Err(PullBackError::unreachable("forward target is alive"))
                    }
                }
            }
            GridSolution::InvalidHolePredecessor { x: row } => {
                let nat = swap(row);
                if nat == u {
                    return Err(PullBackError::unreachable("the feeder row dies before the last column"));
                }
                let (_, x) = decode(nat);
                if t.succ(Node::new(x, m - 1)).is_some() {
                    left(GridSolution::InvalidHolePredecessor { x })
                } else {
                    Err(PullBackError::unreachable("no edge in the last transition column"))
                }
            }
            GridSolution::MissingSource { .. } => {
                Err(PullBackError::unreachable("the distinguished feeder always starts"))
            }
            _ => Err(PullBackError::unreachable("kind cannot occur on the combined output")),
        }
    });
    Ok((out, pull))
}
