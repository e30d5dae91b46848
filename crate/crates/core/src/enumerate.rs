//! Exhaustive instance families for desk-scale totality and reduction
//! sweeps, in a fixed canonical order.

use crate::grid::{GridInstance, GridParams};
use crate::line::{LineFlavor, LineInstance};

/// All forward successor tables for an `[n] x [m]` grid, row-major, cell
/// values `0..=n` (0 = null), in base-`(n+1)` counting order with the cell
/// `(1,1)` as the fastest digit.
pub fn forward_succ_tables(n: usize, m: usize) -> impl Iterator<Item = Vec<Vec<usize>>> {
    let cells = n * m;
    let base = n + 1;
    let total = base.checked_pow(cells as u32).expect("table space fits in usize");
    (0..total).map(move |idx| {
        let mut rest = idx;
        (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        let d = rest % base;
                        rest /= base;
                        d
                    })
                    .collect()
            })
            .collect()
    })
}

/// All partial injections `[n] -> [n]` as length-`n` vectors with 0 = null
/// and the non-null values pairwise distinct. Lexicographic in the vector.
pub fn partial_injections(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(n: usize, pos: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if pos == n {
            out.push(current.clone());
            return;
        }
        for v in 0..=n {
            if v > 0 && used[v - 1] {
                continue;
            }
            current[pos] = v;
            if v > 0 {
                used[v - 1] = true;
            }
            rec(n, pos + 1, current, used, out);
            if v > 0 {
                used[v - 1] = false;
            }
        }
    }
    let mut used = vec![false; n];
    rec(n, 0, &mut current, &mut used, &mut out);
    out
}

/// All mutually consistent reversible table pairs for an `[n] x [m]` grid:
/// one partial injection per transition column, predecessors derived as the
/// exact inverses. This covers every wrapped reversible instance exactly
/// once.
pub fn reversible_table_pairs(
    n: usize,
    m: usize,
) -> impl Iterator<Item = (Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let injections = partial_injections(n);
    let columns = m - 1;
    let per = injections.len();
    let total = per.checked_pow(columns as u32).expect("combination space fits in usize");
    (0..total).map(move |idx| {
        let mut rest = idx;
        let mut succ = vec![vec![0usize; m]; n];
        let mut pred = vec![vec![0usize; m]; n];
        for y in 0..columns {
            let inj = &injections[rest % per];
            rest /= per;
            for x in 0..n {
                let v = inj[x];
                succ[x][y] = v;
                if v > 0 {
                    pred[v - 1][y + 1] = x + 1;
                }
            }
        }
        (succ, pred)
    })
}

/// Instances for every forward table of the given parameter shape, capped.
/// Returns the instances and whether the family was truncated.
pub fn forward_instances(params: GridParams, cap: usize) -> (Vec<GridInstance>, bool) {
    let mut out = Vec::new();
    let mut iter = forward_succ_tables(params.n, params.m);
    for table in iter.by_ref() {
        if out.len() == cap {
            return (out, true);
        }
        out.push(GridInstance::from_tables(params, table, None).expect("valid params"));
    }
    (out, false)
}

/// Instances for every consistent reversible table pair of the given
/// parameter shape, capped.
pub fn reversible_instances(params: GridParams, cap: usize) -> (Vec<GridInstance>, bool) {
    let mut out = Vec::new();
    let mut iter = reversible_table_pairs(params.n, params.m);
    for (succ, pred) in iter.by_ref() {
        if out.len() == cap {
            return (out, true);
        }
        out.push(GridInstance::from_tables(params, succ, Some(pred)).expect("valid params"));
    }
    (out, false)
}

/// All line instances on `[v]` vertices: every fixed-point-free partial
/// injection as the successor map, its inverse as the predecessor map, and
/// every choice of distinguished vertex.
pub fn all_lines(v: usize, flavor: LineFlavor) -> Vec<LineInstance> {
    let mut out = Vec::new();
    for succ in partial_injections(v) {
        if succ.iter().enumerate().any(|(i, &s)| s == i + 1) {
            continue; // self-loops never survive wrapping; skip duplicates
        }
        let mut pred = vec![0usize; v];
        for (i, &s) in succ.iter().enumerate() {
            if s > 0 {
                pred[s - 1] = i + 1;
            }
        }
        for vstar in 1..=v {
            out.push(
                LineInstance::from_tables(succ.clone(), pred.clone(), vstar, flavor)
                    .expect("v >= 1"),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_family_size_is_a_power() {
        assert_eq!(forward_succ_tables(2, 2).count(), 3usize.pow(4));
    }

    #[test]
    fn partial_injection_counts() {
        // sum_k C(n,k)^2 k!: n=2 -> 7, n=3 -> 34
        assert_eq!(partial_injections(2).len(), 7);
        assert_eq!(partial_injections(3).len(), 34);
    }

    #[test]
    fn reversible_pairs_are_consistent() {
        let params = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: true, bijective: false, collision: false };
        for (succ, pred) in reversible_table_pairs(2, 2) {
            let inst = GridInstance::from_tables(params, succ.clone(), Some(pred)).unwrap();
            // Wrapping must not remove anything: the raw pair is consistent.
            let tables = inst.materialize(100).unwrap();
            assert_eq!(tables.succ, succ);
        }
    }

    #[test]
    fn line_family_counts_vertices_and_vstars() {
        // v=2: partial injections = 7, minus 3 with a fixed point = 4; x2 vstars.
        assert_eq!(all_lines(2, LineFlavor::EoL).len(), 8);
    }
}
