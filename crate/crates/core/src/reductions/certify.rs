use std::fmt;

use crate::grid::{solve_brute_force, GridError, GridInstance, GridSolution, SolveMode};
use crate::line::{brute_force_solve_line, check_line_solution, php_to_line, LineInstance};

use super::ReductionError;

/// One reduction application queued for certification: the produced instance
/// plus a closure that pulls a target solution back and verifies it against
/// the original input.
pub struct SweepCase {
    pub label: String,
    pub output: GridInstance,
    pub check: Box<dyn Fn(&GridSolution) -> Result<(), String>>,
}

impl SweepCase {
    pub fn new(
        label: impl Into<String>,
        output: GridInstance,
        check: impl Fn(&GridSolution) -> Result<(), String> + 'static,
    ) -> Self {
        SweepCase { label: label.into(), output, check: Box::new(check) }
    }
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.case, self.detail)
    }
}

/// Outcome of sweeping a reduction over a family of inputs: every output
/// solution found by exhaustive search must pull back to a verified input
/// solution.
#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub name: String,
    pub cases: usize,
    pub solutions_checked: usize,
    pub failures: Vec<Failure>,
}

impl CertificationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} cases, {} solutions, {} failures",
            self.name,
            self.cases,
            self.solutions_checked,
            self.failures.len()
        )
    }
}

impl fmt::Display for CertificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for failure in &self.failures {
            writeln!(f, "  {failure}")?;
        }
        Ok(())
    }
}

/// Runs every case: solves the output exhaustively (every instance must have
/// at least one solution) and routes each solution through the case's
/// pull-back check.
pub fn certify_reduction(
    name: &str,
    cases: impl IntoIterator<Item = SweepCase>,
    cell_limit: usize,
) -> CertificationReport {
    let mut report = CertificationReport {
        name: name.to_string(),
        cases: 0,
        solutions_checked: 0,
        failures: Vec::new(),
    };
    for case in cases {
        report.cases += 1;
        let sols = match solve_brute_force(&case.output, SolveMode::All, cell_limit) {
            Ok(sols) => sols,
            Err(GridError::CellLimit { cells, limit }) => {
                report.failures.push(Failure {
                    case: case.label,
                    detail: format!("output too large to certify: {cells} cells > limit {limit}"),
                });
                continue;
            }
            Err(e) => {
                report.failures.push(Failure { case: case.label, detail: e.to_string() });
                continue;
            }
        };
        if sols.is_empty() {
            report.failures.push(Failure {
                case: case.label,
                detail: "output instance has no solutions (totality violated)".to_string(),
            });
            continue;
        }
        for sol in &sols {
            report.solutions_checked += 1;
            if let Err(detail) = (case.check)(sol) {
                report.failures.push(Failure {
                    case: case.label.clone(),
                    detail: format!("{sol:?}: {detail}"),
                });
            }
        }
    }
    report
}

/// Certifies both line/pigeonhole directions on a family of two-column
/// instances: forward solutions pull back to the line, and the round-tripped
/// line's solutions pull back to the two-column instance.
pub fn line_roundtrip_certify(
    name: &str,
    lines: impl IntoIterator<Item = (String, LineInstance)>,
    cell_limit: usize,
) -> CertificationReport {
    let mut report = CertificationReport {
        name: name.to_string(),
        cases: 0,
        solutions_checked: 0,
        failures: Vec::new(),
    };
    for (label, line) in lines {
        report.cases += 1;
        let (php, pull_to_line) = match crate::line::line_to_php(&line) {
            Ok(x) => x,
            Err(e) => {
                report.failures.push(Failure { case: label, detail: e.to_string() });
                continue;
            }
        };
        let sols = match solve_brute_force(&php, SolveMode::All, cell_limit) {
            Ok(s) => s,
            Err(e) => {
                report.failures.push(Failure { case: label, detail: e.to_string() });
                continue;
            }
        };
        for sol in &sols {
            report.solutions_checked += 1;
            match pull_to_line(sol) {
                Ok(ls) => {
                    if let Err(r) = check_line_solution(&line, &ls) {
                        report.failures.push(Failure {
                            case: label.clone(),
                            detail: format!("{sol:?} -> {ls:?}: {r}"),
                        });
                    }
                }
                Err(e) => {
                    report
                        .failures
                        .push(Failure { case: label.clone(), detail: format!("{sol:?}: {e}") });
                }
            }
        }
        // Round trip: back to a line and pull its solutions onto the
        // two-column instance.
        match php_to_line(&php) {
            Ok((line2, pull_to_php)) => {
                for ls in brute_force_solve_line(&line2) {
                    report.solutions_checked += 1;
                    match pull_to_php(&ls) {
                        Ok(gs) => {
                            if let Err(r) = crate::grid::check_solution(&php, &gs) {
                                report.failures.push(Failure {
                                    case: label.clone(),
                                    detail: format!("roundtrip {ls:?} -> {gs:?}: {r}"),
                                });
                            }
                        }
                        Err(e) => {
                            report.failures.push(Failure {
                                case: label.clone(),
                                detail: format!("roundtrip {ls:?}: {e}"),
                            });
                        }
                    }
                }
            }
            Err(e) => {
                report.failures.push(Failure { case: label.clone(), detail: e.to_string() });
            }
        }
    }
    report
}

/// Convenience: wraps a grid-to-grid reduction application into a sweep case.
pub fn grid_case(
    label: impl Into<String>,
    input: GridInstance,
    result: Result<(GridInstance, super::GridPullBack), ReductionError>,
) -> Result<SweepCase, ReductionError> {
    let (output, pull) = result?;
    let check = move |sol: &GridSolution| -> Result<(), String> {
        let back = pull(sol).map_err(|e| e.to_string())?;
        crate::grid::check_solution(&input, &back)
            .map_err(|r| format!("pulled back to {back:?}, rejected: {r}"))
    };
    Ok(SweepCase::new(label, output, check))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridParams;
    use crate::line::LineFlavor;
    use crate::reductions::pad_instance;

    #[test]
    fn certifier_passes_a_correct_reduction() {
        let params = GridParams { n: 2, m: 2, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        let inst = GridInstance::from_tables(params, vec![vec![2, 0], vec![0, 0]], None).unwrap();
        let case = grid_case("pad-2x2", inst.clone(), pad_instance(&inst, 3, 3)).unwrap();
        let report = certify_reduction("pad", [case], 1000);
        assert!(report.failures.is_empty(), "{report}");
        assert!(report.solutions_checked > 0);
    }

    #[test]
    fn certifier_flags_a_broken_pull_back() {
        let params = GridParams { n: 2, m: 2, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        let inst = GridInstance::from_tables(params, vec![vec![2, 0], vec![0, 0]], None).unwrap();
        let (output, _) = pad_instance(&inst, 3, 3).unwrap();
        // A pull-back that always returns a wrong witness.
        let case = SweepCase::new("broken", output, move |_s| Err("always wrong".to_string()));
        let report = certify_reduction("broken", [case], 1000);
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn line_roundtrip_on_a_single_path() {
        let line =
            LineInstance::from_tables(vec![2, 3, 0], vec![0, 1, 2], 1, LineFlavor::EoL).unwrap();
        let report = line_roundtrip_certify("line", [("path3".to_string(), line)], 1000);
        assert!(report.failures.is_empty(), "{report}");
        assert!(report.solutions_checked > 0);
    }
}
