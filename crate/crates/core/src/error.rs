//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error enum.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("y = {y} lies outside the shelf width band [0, {width}]")]
    OutsideWidthBand { y: f64, width: f64 },

    #[error("points {a} and {b} coincide within 1e-12; the filtration is degenerate")]
    DuplicatePoints { a: usize, b: usize },

    #[error("no acute tangent line exists for target ({x}, {y})")]
    NoTangent { x: f64, y: f64 },

    #[error("target is farther than the arm width from both walls; incidence angle is undefined")]
    TargetNotNearWall,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid workspace: {0}")]
    InvalidWorkspace(String),

    #[error("infeasible configuration: {0}")]
    InfeasibleConfiguration(String),

    #[error("path region has no members")]
    EmptyPathRegion,

    #[error("sweep approach blocked: the swath would cross the target disc")]
    BlockedApproach,

    #[error("scene generation failed after {attempts} attempts: {reason}")]
    Generation { attempts: u32, reason: String },

    #[error("scene format: {0}")]
    SceneFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
