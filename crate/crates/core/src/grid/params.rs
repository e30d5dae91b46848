use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parameters of a grid search instance on `[N] x [M]`.
///
/// `reversible` means a predecessor circuit is present (paths cannot merge),
/// `bijective` adds the extra source/empty-hole solution kinds, and
/// `collision` makes merging itself a solution (forward-only instances).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridParams {
    /// Row count N.
    pub n: usize,
    /// Column count M.
    pub m: usize,
    /// Start count A: paths begin at `[A] x {1}`.
    pub a: usize,
    /// Valid-end count B: paths may end at `[B] x {M}`.
    pub b: usize,
    /// r flag: predecessor circuit available, in-degree at most one.
    pub reversible: bool,
    /// b flag: only valid with `reversible`.
    pub bijective: bool,
    /// c flag: merging is a solution; only valid without `reversible`.
    pub collision: bool,
}

/// First violated syntactic condition of [`GridParams`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamViolation {
    #[error("N must be positive")]
    ZeroRows,
    #[error("M >= 2 violated (M = {0})")]
    TooFewColumns(usize),
    #[error("N >= A violated (N = {n}, A = {a})")]
    TooManyStarts { n: usize, a: usize },
    #[error("A > B violated (A = {a}, B = {b})")]
    StartsNotAboveEnds { a: usize, b: usize },
    #[error("r=0,b=1 forbidden")]
    BijectiveWithoutReversible,
    #[error("r=0,c=0 requires B=0 (B = {0})")]
    EndsWithoutReversibleOrCollision(usize),
    #[error("r=1,c=1 forbidden: collision solutions exist only for r=0")]
    CollisionWithReversible,
}

impl GridParams {
    /// Checks every syntactic condition, reporting the first violation.
    pub fn validate(&self) -> Result<(), ParamViolation> {
        if self.n == 0 {
            return Err(ParamViolation::ZeroRows);
        }
        if self.m < 2 {
            return Err(ParamViolation::TooFewColumns(self.m));
        }
        if self.n < self.a {
            return Err(ParamViolation::TooManyStarts { n: self.n, a: self.a });
        }
        if self.a <= self.b {
            return Err(ParamViolation::StartsNotAboveEnds { a: self.a, b: self.b });
        }
        if !self.reversible && self.bijective {
            return Err(ParamViolation::BijectiveWithoutReversible);
        }
        if !self.reversible && !self.collision && self.b != 0 {
            return Err(ParamViolation::EndsWithoutReversibleOrCollision(self.b));
        }
        if self.reversible && self.collision {
            return Err(ParamViolation::CollisionWithReversible);
        }
        Ok(())
    }

    /// Total number of grid cells, saturating.
    pub fn cells(&self) -> usize {
        self.n.saturating_mul(self.m)
    }
}

/// A grid node, 1-indexed in both coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    /// Row in `[N]`.
    pub x: usize,
    /// Column in `[M]`.
    pub y: usize,
}

impl Node {
    pub fn new(x: usize, y: usize) -> Self {
        Node { x, y }
    }

    pub fn in_grid(&self, p: &GridParams) -> bool {
        1 <= self.x && self.x <= p.n && 1 <= self.y && self.y <= p.m
    }
}
