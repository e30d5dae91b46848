use std::fmt;
use std::str::FromStr;

use crate::grid::{
    GridInstance, GridParams, GridSolution, MeetInstance, MeetPart, MeetSolution, PartSolution,
    Side,
};
use crate::line::{line_to_php, LineFlavor, LineInstance};

use super::merge_free::{sod_meet_gadget_to_merge_free, GadgetFlavor};
use super::{sopl_meet_bijphp_to_eopl, MeetPullBack, PullBackError, ReductionError};

/// End-to-end reduction chains between the named search problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineKind {
    /// sink-of-dag /\ end-of-line -> bijective single-start grid.
    EolToEopl,
    /// sink-of-dag /\ sink-of-line -> reversible single-start grid.
    SolToSopl,
    /// sink-of-dag /\ two-column collision -> merge-free sink-of-dag.
    CollisionToMergeFree,
}

impl fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PipelineKind::EolToEopl => "eol-to-eopl",
            PipelineKind::SolToSopl => "sol-to-sopl",
            PipelineKind::CollisionToMergeFree => "collision-to-merge-free",
        })
    }
}

impl FromStr for PipelineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eol-to-eopl" => Ok(PipelineKind::EolToEopl),
            "sol-to-sopl" => Ok(PipelineKind::SolToSopl),
            "collision-to-merge-free" => Ok(PipelineKind::CollisionToMergeFree),
            other => Err(format!("unknown pipeline {other:?}")),
        }
    }
}

/// A composed reduction: the meet it consumes, the grid it produces, and the
/// pull-back chaining every stage.
pub struct Pipeline {
    pub kind: PipelineKind,
    pub source: MeetInstance,
    pub output: GridInstance,
    pull: MeetPullBack,
}

impl Pipeline {
    pub fn pull_back(&self, sol: &GridSolution) -> Result<MeetSolution, PullBackError> {
        (self.pull)(sol)
    }
}

fn expect_grid(sol: MeetSolution) -> Result<(Side, GridSolution), PullBackError> {
    match sol.solution {
        PartSolution::Grid(g) => Ok((sol.side, g)),
        _ => Err(PullBackError::unreachable("stage pull-backs produce grid solutions")),
    }
}

/// Rebuilds an instance with the bijective flag cleared; its solution kinds
/// are a subset of the original's, so solutions transfer verbatim.
fn drop_bijective(inst: &GridInstance) -> Result<GridInstance, ReductionError> {
    let params = GridParams { bijective: false, ..*inst.params() };
    GridInstance::new(params, inst.raw_succ().clone(), inst.raw_pred().cloned())
        .map_err(ReductionError::from_grid)
}

pub fn build_pipeline(
    kind: PipelineKind,
    sod: &GridInstance,
    companion: &MeetPart,
) -> Result<Pipeline, ReductionError> {
    match (kind, companion) {
        (PipelineKind::EolToEopl, MeetPart::Line(line)) if line.flavor() == LineFlavor::EoL => {
            eol_to_eopl(sod, line)
        }
        (PipelineKind::SolToSopl, MeetPart::Line(line)) if line.flavor() == LineFlavor::SoL => {
            sol_to_sopl(sod, line)
        }
        (PipelineKind::CollisionToMergeFree, MeetPart::Grid(gadget)) => {
            collision_to_merge_free(sod, gadget)
        }
        _ => Err(ReductionError::Misclassified {
            expected: "companion matching the pipeline kind",
            found: format!("{kind} with mismatched companion"),
        }),
    }
}

fn eol_to_eopl(sod: &GridInstance, line: &LineInstance) -> Result<Pipeline, ReductionError> {
    let (bij, pull_line) = line_to_php(line)?;
    // The same two-column instance serves injectively for the merge gadget
    // and bijectively for the final combination.
    let inj = drop_bijective(&bij)?;
    let (sopl, pull_merge) = sod_meet_gadget_to_merge_free(sod, &inj, GadgetFlavor::Inj)?;
    let (output, pull_combine) = sopl_meet_bijphp_to_eopl(&sopl, &bij)?;

    let pull: MeetPullBack = Box::new(move |sol| {
        let line_side = |php_sol: &GridSolution| {
            pull_line(php_sol).map(|s| MeetSolution::right(PartSolution::Line(s)))
        };
        let (side, stage) = expect_grid(pull_combine(sol)?)?;
        match side {
            Side::Right => line_side(&stage),
            Side::Left => {
                let (side, inner) = expect_grid(pull_merge(&stage)?)?;
                match side {
                    Side::Left => Ok(MeetSolution::left_grid(inner)),
                    Side::Right => line_side(&inner),
                }
            }
        }
    });
    Ok(Pipeline {
        kind: PipelineKind::EolToEopl,
        source: MeetInstance::new(MeetPart::Grid(sod.clone()), MeetPart::Line(line.clone())),
        output,
        pull,
    })
}

fn sol_to_sopl(sod: &GridInstance, line: &LineInstance) -> Result<Pipeline, ReductionError> {
    let (inj, pull_line) = line_to_php(line)?;
    let (output, pull_merge) = sod_meet_gadget_to_merge_free(sod, &inj, GadgetFlavor::Inj)?;

    let pull: MeetPullBack = Box::new(move |sol| {
        let (side, stage) = expect_grid(pull_merge(sol)?)?;
        match side {
            Side::Left => Ok(MeetSolution::left_grid(stage)),
            Side::Right => {
                pull_line(&stage).map(|s| MeetSolution::right(PartSolution::Line(s)))
            }
        }
    });
    Ok(Pipeline {
        kind: PipelineKind::SolToSopl,
        source: MeetInstance::new(MeetPart::Grid(sod.clone()), MeetPart::Line(line.clone())),
        output,
        pull,
    })
}

fn collision_to_merge_free(
    sod: &GridInstance,
    gadget: &GridInstance,
) -> Result<Pipeline, ReductionError> {
    let (output, pull) = sod_meet_gadget_to_merge_free(sod, gadget, GadgetFlavor::Collision)?;
    Ok(Pipeline {
        kind: PipelineKind::CollisionToMergeFree,
        source: MeetInstance::of_grids(sod.clone(), gadget.clone()),
        output,
        pull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_meet_solution, classify_params, solve_brute_force, ProblemClass, SolveMode};

    fn sod() -> GridInstance {
        let params = GridParams { n: 2, m: 2, a: 1, b: 0, reversible: false, bijective: false, collision: false };
        GridInstance::from_tables(params, vec![vec![2, 0], vec![2, 0]], None).unwrap()
    }

    fn run_and_check(pipeline: &Pipeline, cell_limit: usize) {
        let sols = solve_brute_force(&pipeline.output, SolveMode::All, cell_limit).unwrap();
        assert!(!sols.is_empty(), "output instance should have solutions");
        for s in &sols {
            let back = pipeline.pull_back(s).unwrap();
            assert!(
                check_meet_solution(&pipeline.source, &back).is_ok(),
                "{back:?} rejected for {s:?}"
            );
        }
    }

    #[test]
    fn eol_chain_lands_in_the_bijective_single_start_class() {
        let line = LineInstance::from_tables(vec![2, 3, 0], vec![0, 1, 2], 1, LineFlavor::EoL).unwrap();
        let pipeline = build_pipeline(PipelineKind::EolToEopl, &sod(), &MeetPart::Line(line)).unwrap();
        assert!(classify_params(pipeline.output.params(), None).contains(&ProblemClass::EoPL));
        run_and_check(&pipeline, 100_000);
    }

    #[test]
    fn sol_chain_lands_in_the_reversible_single_start_class() {
        let line = LineInstance::from_tables(vec![2, 0, 0], vec![0, 1, 0], 1, LineFlavor::SoL).unwrap();
        let pipeline = build_pipeline(PipelineKind::SolToSopl, &sod(), &MeetPart::Line(line)).unwrap();
        assert!(classify_params(pipeline.output.params(), None).contains(&ProblemClass::SoPL));
        run_and_check(&pipeline, 100_000);
    }

    #[test]
    fn collision_chain_keeps_the_collision_flag() {
        let params = GridParams { n: 2, m: 2, a: 2, b: 1, reversible: false, bijective: false, collision: true };
        let gadget = GridInstance::from_tables(params, vec![vec![1, 0], vec![1, 0]], None).unwrap();
        let pipeline =
            build_pipeline(PipelineKind::CollisionToMergeFree, &sod(), &MeetPart::Grid(gadget)).unwrap();
        assert!(classify_params(pipeline.output.params(), None).contains(&ProblemClass::SoDNoMerge));
        run_and_check(&pipeline, 100_000);
    }

    #[test]
    fn mismatched_companion_is_rejected() {
        let line = LineInstance::from_tables(vec![2, 3, 0], vec![0, 1, 2], 1, LineFlavor::SoL).unwrap();
        assert!(build_pipeline(PipelineKind::EolToEopl, &sod(), &MeetPart::Line(line)).is_err());
    }
}
