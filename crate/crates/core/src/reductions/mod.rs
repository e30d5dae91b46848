//! Instance-to-instance reductions: each is a lazy forward oracle transform
//! paired with a total solution pull-back, plus composition pipelines and a
//! certification harness.

mod certify;
mod codec;
mod eopl;
mod merge_free;
mod pad;
mod path_php;
mod pigeon;
mod pipeline;
mod transfer;

pub use certify::{
    certify_reduction, grid_case, line_roundtrip_certify, CertificationReport, Failure, SweepCase,
};
pub use codec::IndexCodec;
pub use eopl::sopl_meet_bijphp_to_eopl;
pub use merge_free::{sod_meet_gadget_to_merge_free, GadgetFlavor};
pub use pad::pad_instance;
pub use path_php::{path_php_to_php, php_to_path_php, PathPhpFlavor};
pub use pigeon::grid_collision_to_pigeon_circuit;
pub use pipeline::{build_pipeline, Pipeline, PipelineKind};
pub use transfer::transfer_sources_to_first_column;

use thiserror::Error;

use crate::grid::{GridError, GridSolution, MeetSolution};

/// A reduction was handed an instance outside its declared domain, or its
/// forward construction failed.
#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("input does not classify as {expected} (params: {found})")]
    Misclassified { expected: &'static str, found: String },
    #[error("padding targets must not shrink the instance ({0})")]
    ShrinkingPad(String),
    #[error("unsupported class/mode combination: {0}")]
    UnsupportedMode(String),
    #[error(transparent)]
    Grid(GridError),
}

impl ReductionError {
    pub(crate) fn from_grid(e: GridError) -> Self {
        ReductionError::Grid(e)
    }
}

/// A target solution that the pull-back cannot map. On a correct reduction
/// this never fires for verifier-accepted solutions; the certifier reports it
/// as a failure when it does.
#[derive(Debug, Clone, Error)]
#[error("pull-back failed: {reason}")]
pub struct PullBackError {
    pub reason: String,
}

impl PullBackError {
    pub fn unreachable(reason: impl Into<String>) -> Self {
        PullBackError { reason: reason.into() }
    }
}

/// Total map from verified target grid solutions back to source grid
/// solutions.
pub type GridPullBack = Box<dyn Fn(&GridSolution) -> Result<GridSolution, PullBackError> + Send + Sync>;

/// Total map from verified target grid solutions back to side-tagged
/// solutions of a meet of source instances.
pub type MeetPullBack = Box<dyn Fn(&GridSolution) -> Result<MeetSolution, PullBackError> + Send + Sync>;
