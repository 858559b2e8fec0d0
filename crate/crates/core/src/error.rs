use thiserror::Error;

/// Errors raised by the flat link library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed token `{0}`: expected <identifier><sign> with sign `+` or `-`")]
    MalformedToken(String),
    #[error("malformed component name `{0}`")]
    MalformedName(String),
    #[error("duplicate component name `{0}`")]
    DuplicateComponentName(String),
    #[error("crossing `{0}` appears only once")]
    CrossingAppearsOnce(String),
    #[error("crossing `{0}` appears more than twice")]
    CrossingAppearsThrice(String),
    #[error("crossing `{0}` appears twice with the same sign")]
    SameSignTwice(String),

    #[error("component index {0} out of range")]
    ComponentOutOfRange(usize),
    #[error("position {position} out of range for a codeword of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("intersection number needs two distinct positions, got {0} twice")]
    SamePosition(usize),
    #[error("unknown crossing `{0}`")]
    UnknownCrossing(String),

    #[error("components {0} and {1} are the same")]
    SameComponent(usize, usize),
    #[error("flat linking difference is {0}, pairing undefined")]
    NonzeroFlatLinking(i64),
    #[error("invalid pair partition: {0}")]
    InvalidPartition(String),
    #[error("pair ({0}, {1}) is not in the partition")]
    PairNotInPartition(String, String),

    #[error("filamentation does not cover crossing `{0}`")]
    PartitionNotCovering(String),
    #[error("crossing `{0}` lies in more than one part")]
    PartsOverlap(String),
    #[error("instance too large: {size} exceeds the cap of {cap}")]
    InstanceTooLarge { size: usize, cap: usize },

    #[error("stale move site: {0}")]
    StaleSite(String),
    #[error("malformed move log line `{0}`")]
    MalformedMoveLog(String),

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error("malformed invariant JSON: {0}")]
    MalformedJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
