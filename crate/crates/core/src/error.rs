use thiserror::Error;

use crate::geometry::Point2;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({}, {}) is not inside the domain", .0.x, .0.y)]
    PointOutsideDomain(Point2),
    #[error("invalid specification: {0}")]
    SpecInvalid(String),
    #[error("decoration {j} has no corridor {corridor}")]
    NoSuchCorridor { j: u32, corridor: u8 },
    #[error("no decoration with index {0}")]
    NoSuchDecoration(u32),
    #[error("grid window contains no admissible lattice points")]
    EmptyGrid,
    #[error("grid resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("path leaves the domain near ({}, {})", .0.x, .0.y)]
    PathExitsDomain(Point2),
    #[error("points are not connected in the grid")]
    Disconnected,
    #[error("no grid node within snapping distance of ({}, {})", .0.x, .0.y)]
    SnapFailed(Point2),
    #[error("endpoint lies in the closure of slice `{0}`")]
    EndpointInsideSlice(String),
    #[error("points are not inside decoration {0}")]
    PointsNotInDecoration(u32),
    #[error("point is closer than {0} to the boundary")]
    TooCloseToBoundary(f64),
    #[error("grid does not cover the dataset: {0}")]
    GridDoesNotCoverDataset(String),
    #[error("the slice condition is defined for alpha = 0 only (got {0})")]
    AlphaNotZero(f64),
    #[error("operation requires a {expected} domain")]
    WrongFamily { expected: &'static str },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
