//! Crate-wide error and scenario-violation types.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the allocation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("subframe {subframe} out of range 1..={max}")]
    SubframeOutOfRange { subframe: usize, max: usize },

    #[error("subchannel {subchannel} out of range 1..={max}")]
    SubchannelOutOfRange { subchannel: usize, max: usize },

    #[error("flat resource index {index} out of range 1..={max}")]
    ResourceOutOfRange { index: usize, max: usize },

    #[error("invalid scenario: {0}")]
    Scenario(#[from] ScenarioViolation),

    #[error("unknown vehicle id {0}")]
    UnknownVehicle(usize),

    #[error(
        "tensor shape {vehicles}x{subframes}x{subchannels} does not match \
         expected {expected_vehicles}x{expected_subframes}x{expected_subchannels}"
    )]
    ShapeMismatch {
        vehicles: usize,
        subframes: usize,
        subchannels: usize,
        expected_vehicles: usize,
        expected_subframes: usize,
        expected_subchannels: usize,
    },

    #[error("SINR must be nonnegative, got {0}")]
    NegativeSinr(f64),

    #[error("bandwidth must be positive, got {0}")]
    NonPositiveBandwidth(f64),

    #[error("invalid channel config: {0}")]
    InvalidChannel(String),

    #[error("tensor entry at vehicle {vehicle}, subframe {subframe}, subchannel {subchannel} is {value} (must be finite and >= 0)")]
    InvalidTensorEntry {
        vehicle: usize,
        subframe: usize,
        subchannel: usize,
        value: f64,
    },

    #[error("{path} line {line}: {msg}")]
    TensorFormat {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("smoothing exponent must be positive, got {0}")]
    NonPositiveBeta(f64),

    #[error("reduction requires at least one member row")]
    EmptyMemberList,

    #[error("assignment weight at row {row}, column {col} is not finite")]
    InvalidWeight { row: usize, col: usize },

    #[error("no conflict-free assignment exists: rows {0:?} admit fewer subframes than rows")]
    Infeasible(Vec<usize>),

    #[error("subframe {0} appears more than once in a reduced assignment")]
    DuplicateSubframe(usize),

    #[error("enumeration budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("allocation file line {line}: {msg}")]
    AllocationFormat { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    TomlParse(#[from] toml::de::Error),

    #[error("serialize error: {0}")]
    TomlSerialize(#[from] toml::ser::Error),
}

/// First violated scenario invariant, reported by [`crate::grid::validate_scenario`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioViolation {
    #[error("scenario has no vehicles")]
    NoVehicles,

    #[error("scenario has no clusters")]
    NoClusters,

    #[error("cluster {cluster} has no members")]
    EmptyCluster { cluster: usize },

    #[error("cluster {cluster} member {vehicle} is out of range for {vehicles} vehicles")]
    MemberOutOfRange {
        cluster: usize,
        vehicle: usize,
        vehicles: usize,
    },

    #[error("cluster {cluster} lists vehicle {vehicle} more than once")]
    DuplicateMember { cluster: usize, vehicle: usize },

    #[error("cluster {cluster} has {size} members but the grid has only {subframes} subframes")]
    ClusterExceedsSubframes {
        cluster: usize,
        size: usize,
        subframes: usize,
    },

    #[error("orphan vehicle: vehicle {vehicle} belongs to no cluster")]
    OrphanVehicle { vehicle: usize },
}
