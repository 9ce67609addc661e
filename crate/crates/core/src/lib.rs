//! Conflict-free time-frequency subchannel allocation for clustered V2V
//! broadcasts.
//!
//! A fleet of broadcasting vehicles shares an `L x K` lattice of time
//! subframes and frequency subchannels. Vehicles in the same communication
//! cluster must transmit in pairwise distinct subframes (a half-duplex radio
//! cannot hear its neighbours while sending), and clusters may overlap,
//! which couples their schedules. The crate provides:
//!
//! - [`grid`]: the resource lattice, scenarios, allocations and the
//!   conflict predicates;
//! - [`channel`]: capacity weight tensors, synthetic or loaded from file;
//! - [`reduction`]: the subchannel-group collapse that turns per-cluster
//!   allocation into a plain assignment problem, with its smooth-limit
//!   validator;
//! - [`assignment`]: an exact maximum-weight assignment solver and the
//!   exhaustive per-cluster oracle;
//! - [`allocator`]: the hierarchical scheme — clusters solved most
//!   constrained first, earlier grants retained and their subframes blocked;
//! - [`baselines`]: exhaustive global search, greedy and random comparison
//!   algorithms;
//! - [`metrics`]: fleet rate statistics;
//! - [`sim`]: experiment configs, deterministic scenario generation and the
//!   Monte Carlo harness behind the CLI.
//!
//! All types are plain immutable values once constructed and all operations
//! are pure functions, so instances can be shared freely across threads.

pub mod allocator;
pub mod assignment;
pub mod baselines;
pub mod channel;
pub mod error;
pub mod grid;
pub mod metrics;
pub mod reduction;
pub mod sim;

pub use allocator::{allocate, constrainedness_order, ClusterOrder, HierarchicalOutcome};
pub use assignment::{
    brute_force_cluster, solve_assignment, solve_assignment_partial, AssignmentProblem,
    AssignmentSolution,
};
pub use baselines::{exhaustive_global, greedy, random_alloc};
pub use channel::{capacity_from_sinr, sample_cost_tensor, ChannelConfig, CostTensor};
pub use error::{Error, Result, ScenarioViolation};
pub use grid::{
    find_conflicts, validate_scenario, Allocation, Conflict, Grant, ResourceGrid, Scenario,
};
pub use metrics::{allocation_objective, summarize, RateSummary};
pub use reduction::{lift_assignment, reduce_costs, smoothed_reduce, ReducedCostMatrix};
pub use sim::{generate_scenario, run_experiment, worst_rate_curve, AlgoKind, ExperimentConfig};
