use std::fmt;

use serde::{Deserialize, Serialize};

use super::instance::GridInstance;
use super::solution::{check_solution, GridSolution};
use crate::line::{check_line_solution, LineInstance, LineSolution};

/// Which component of a meet a solution addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// One component of a meet; meets nest.
#[derive(Debug, Clone)]
pub enum MeetPart {
    Grid(GridInstance),
    Line(LineInstance),
    Meet(Box<MeetInstance>),
}

/// The meet `A /\ B`: a pair of instances, solved by solving either side.
#[derive(Debug, Clone)]
pub struct MeetInstance {
    pub left: MeetPart,
    pub right: MeetPart,
}

impl MeetInstance {
    pub fn new(left: MeetPart, right: MeetPart) -> Self {
        MeetInstance { left, right }
    }

    pub fn of_grids(left: GridInstance, right: GridInstance) -> Self {
        MeetInstance::new(MeetPart::Grid(left), MeetPart::Grid(right))
    }
}

/// A solution for one component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartSolution {
    Grid(GridSolution),
    Line(LineSolution),
    Meet(Box<MeetSolution>),
}

impl fmt::Display for PartSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartSolution::Grid(s) => s.fmt(f),
            PartSolution::Line(s) => s.fmt(f),
            PartSolution::Meet(s) => s.fmt(f),
        }
    }
}

/// A side-tagged component solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetSolution {
    pub side: Side,
    pub solution: PartSolution,
}

impl MeetSolution {
    pub fn left(solution: PartSolution) -> Self {
        MeetSolution { side: Side::Left, solution }
    }

    pub fn right(solution: PartSolution) -> Self {
        MeetSolution { side: Side::Right, solution }
    }

    pub fn left_grid(s: GridSolution) -> Self {
        MeetSolution::left(PartSolution::Grid(s))
    }

    pub fn right_grid(s: GridSolution) -> Self {
        MeetSolution::right(PartSolution::Grid(s))
    }
}

impl fmt::Display for MeetSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.side, self.solution)
    }
}

fn check_part(part: &MeetPart, sol: &PartSolution) -> Result<(), String> {
    match (part, sol) {
        (MeetPart::Grid(inst), PartSolution::Grid(s)) => {
            check_solution(inst, s).map_err(|r| r.to_string())
        }
        (MeetPart::Line(inst), PartSolution::Line(s)) => {
            check_line_solution(inst, s).map_err(|r| r.to_string())
        }
        (MeetPart::Meet(inner), PartSolution::Meet(s)) => check_meet_solution(inner, s),
        _ => Err("solution shape does not match the instance on its side".to_string()),
    }
}

/// Accepts iff the component verifier on the tagged side accepts; the other
/// side is never consulted.
pub fn check_meet_solution(meet: &MeetInstance, cand: &MeetSolution) -> Result<(), String> {
    let part = match cand.side {
        Side::Left => &meet.left,
        Side::Right => &meet.right,
    };
    check_part(part, &cand.solution)
}
