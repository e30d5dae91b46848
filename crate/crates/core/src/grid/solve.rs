use super::instance::{GridError, GridInstance};
use super::solution::{check_solution, GridSolution};

/// Stop after the first accepted witness, or collect every one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    First,
    All,
}

/// Exhaustive solver over the grid, columns ascending then rows ascending,
/// candidate kinds at each node in definition order. Every returned witness
/// passes [`check_solution`]; the scan is deterministic.
pub fn solve_brute_force(
    inst: &GridInstance,
    mode: SolveMode,
    cell_limit: usize,
) -> Result<Vec<GridSolution>, GridError> {
    let p = *inst.params();
    if p.cells() > cell_limit {
        return Err(GridError::CellLimit { cells: p.cells(), limit: cell_limit });
    }
    let mut found = Vec::new();
    'scan: for y in 1..=p.m {
        for x in 1..=p.n {
            let mut candidates: Vec<GridSolution> = Vec::new();
            if y == 1 && x <= p.a {
                candidates.push(GridSolution::MissingSource { x });
            }
            if y == p.m - 1 {
                candidates.push(GridSolution::InvalidHolePredecessor { x });
            }
            if p.m >= 3 && y <= p.m - 2 {
                candidates.push(GridSolution::Interception { x, y });
            }
            if p.reversible && p.bijective && y <= p.m - 1 && !(y == 1 && x <= p.a) {
                candidates.push(GridSolution::GenesisSource { x, y });
            }
            if p.reversible && p.bijective && y == p.m && x <= p.b {
                candidates.push(GridSolution::EmptyHole { x });
            }
            if p.collision && !p.reversible && y <= p.m - 1 {
                for x2 in (x + 1)..=p.n {
                    candidates.push(GridSolution::Collision { x1: x, x2, y });
                }
            }
            for cand in candidates {
                if check_solution(inst, &cand).is_ok() {
                    found.push(cand);
                    if mode == SolveMode::First {
                        break 'scan;
                    }
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::params::GridParams;

    #[test]
    fn forced_inj_php_finds_orphaned_pigeon() {
        let params = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: true, bijective: false, collision: false };
        let inst = GridInstance::from_tables(
            params,
            vec![vec![1, 0], vec![1, 0]],
            Some(vec![vec![0, 1], vec![0, 0]]),
        )
        .unwrap();
        let got = solve_brute_force(&inst, SolveMode::First, 1000).unwrap();
        assert_eq!(got, vec![GridSolution::MissingSource { x: 2 }]);
    }

    #[test]
    fn single_row_sod_hits_invalid_hole() {
        let params = GridParams { n: 1, m: 2, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        let inst = GridInstance::from_tables(params, vec![vec![1, 0]], None).unwrap();
        let got = solve_brute_force(&inst, SolveMode::First, 1000).unwrap();
        assert_eq!(got, vec![GridSolution::InvalidHolePredecessor { x: 1 }]);
    }

    #[test]
    fn all_mode_agrees_with_verifier() {
        let params = GridParams { n: 2, m: 3, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        let inst = GridInstance::from_tables(params, vec![vec![2, 0, 0], vec![2, 1, 0]], None).unwrap();
        let all = solve_brute_force(&inst, SolveMode::All, 1000).unwrap();
        assert!(!all.is_empty());
        for s in &all {
            assert!(check_solution(&inst, s).is_ok());
        }
    }

    #[test]
    fn refuses_above_cell_limit() {
        let params = GridParams { n: 3, m: 3, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        let inst = GridInstance::from_tables(params, vec![vec![0; 3]; 3], None).unwrap();
        assert!(matches!(
            solve_brute_force(&inst, SolveMode::First, 8),
            Err(GridError::CellLimit { cells: 9, limit: 8 })
        ));
    }
}
