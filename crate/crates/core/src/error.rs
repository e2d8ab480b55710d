use thiserror::Error;

use crate::space::PointId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid point label {0:?}")]
    InvalidLabel(String),
    #[error("self-loop on point {0}")]
    SelfLoop(PointId),
    #[error("unknown point {0}")]
    UnknownPoint(PointId),
    #[error("point {0} declared twice")]
    DuplicatePoint(PointId),
    #[error("point {0} already present")]
    PointCollision(PointId),
    #[error("operation requires a nonempty point set")]
    EmptySubspace,
    #[error("operation requires a nonempty space")]
    EmptySpace,
    #[error("space has {size} points, exceeding the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("point {0} is not simple")]
    NotSimple(PointId),
    #[error("requested rim does not induce a contractible subspace")]
    RimNotContractible,
    #[error("({0} {1}) is not a simple edge")]
    NotSimpleEdge(PointId, PointId),
    #[error("points {0} and {1} are not adjacent")]
    NotAdjacent(PointId, PointId),
    #[error("points {0} and {1} are already adjacent")]
    AlreadyAdjacent(PointId, PointId),
    #[error("{{{0}, {1}}} is not a simple pair")]
    NotSimplePair(PointId, PointId),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("malformed transform step: {0}")]
    MalformedStep(String),
}
