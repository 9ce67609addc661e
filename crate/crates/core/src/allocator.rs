//! Hierarchical cluster-by-cluster allocation.
//!
//! Clusters are solved one at a time, most constrained first. Within a
//! cluster the K-subchannel groups are collapsed by [`reduce_costs`], the
//! remaining members are matched to subframes by the exact assignment
//! solver, and the matching is lifted back to full resource grants. Grants
//! made for shared vehicles in earlier clusters are kept verbatim; later
//! clusters see those subframes as blocked.
//!
//! A member's usable subframes exclude every subframe already granted in
//! *any* cluster containing it, not just the cluster currently being solved.
//! Two previously disjoint clusters may both have committed grants before a
//! cluster that straddles them is reached; only the stronger rule keeps the
//! final allocation conflict-free unconditionally.

use crate::assignment::{solve_assignment_partial, AssignmentProblem};
use crate::channel::CostTensor;
use crate::error::Result;
use crate::grid::{Allocation, Scenario, SubframeOccupancy};
use crate::reduction::{lift_assignment, reduce_costs};

/// Clusters in processing order with the scores that ranked them.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOrder {
    pub sequence: Vec<ClusterRank>,
}

/// Why a cluster sits where it does: load ratio first, then coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRank {
    pub cluster: usize,
    /// Members per subframe, `N_j / L`.
    pub load: f64,
    /// Members shared with at least one other cluster.
    pub overlap_degree: usize,
}

/// Orders clusters most-constrained first: higher load ratio, then higher
/// overlap degree, then lower cluster id. Deterministic.
pub fn constrainedness_order(scenario: &Scenario) -> ClusterOrder {
    let subframes = scenario.grid().subframes;
    let mut sequence: Vec<ClusterRank> = (0..scenario.cluster_count())
        .map(|j| ClusterRank {
            cluster: j,
            load: scenario.cluster(j).len() as f64 / subframes as f64,
            overlap_degree: scenario.overlap_degree(j),
        })
        .collect();
    // load compares as member count since L is shared by all clusters
    sequence.sort_by(|a, b| {
        let size_a = scenario.cluster(a.cluster).len();
        let size_b = scenario.cluster(b.cluster).len();
        size_b
            .cmp(&size_a)
            .then(b.overlap_degree.cmp(&a.overlap_degree))
            .then(a.cluster.cmp(&b.cluster))
    });
    ClusterOrder { sequence }
}

/// Per-cluster outcome of one allocation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub cluster: usize,
    /// Position in the processing order.
    pub position: usize,
    pub members: usize,
    /// Members already granted by earlier clusters.
    pub fixed: usize,
    pub newly_granted: usize,
    /// Members that could not be placed after blocking.
    pub skipped: Vec<usize>,
    /// Total rate of the grants made while solving this cluster.
    pub objective: f64,
}

/// Result of [`allocate`]: the global allocation plus per-cluster diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalOutcome {
    pub allocation: Allocation,
    pub order: ClusterOrder,
    pub reports: Vec<ClusterReport>,
    /// Total rate over all granted vehicles.
    pub objective: f64,
}

/// Runs the hierarchical scheme over every cluster.
///
/// The result is conflict-free on every input. Vehicles whose residual
/// subproblem is infeasible after blocking are left unassigned and listed in
/// their cluster's report (best-effort semantics); a vehicle skipped in one
/// cluster may still be placed when a later cluster containing it is solved.
pub fn allocate(scenario: &Scenario, costs: &CostTensor) -> Result<HierarchicalOutcome> {
    costs.matches_scenario(scenario)?;
    let order = constrainedness_order(scenario);
    let subframes = scenario.grid().subframes;
    let mut allocation = Allocation::empty(scenario.vehicle_count());
    let mut occupancy = SubframeOccupancy::new(scenario);
    let mut reports = Vec::with_capacity(order.sequence.len());

    for (position, rank) in order.sequence.iter().enumerate() {
        let members = scenario.cluster(rank.cluster);
        let free_members: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&v| allocation.grant_of(v).is_none())
            .collect();
        let fixed = members.len() - free_members.len();
        if free_members.is_empty() {
            reports.push(ClusterReport {
                cluster: rank.cluster,
                position,
                members: members.len(),
                fixed,
                newly_granted: 0,
                skipped: Vec::new(),
                objective: 0.0,
            });
            continue;
        }

        let reduced = reduce_costs(costs, &free_members)?;
        let mut problem = AssignmentProblem::new(free_members.len(), subframes);
        for (row, &vehicle) in free_members.iter().enumerate() {
            for l in 1..=subframes {
                problem.set_weight(row, l - 1, reduced.value(row, l));
                if !occupancy.usable_by(scenario, vehicle, l) {
                    problem.block(row, l - 1);
                }
            }
        }
        let solution = solve_assignment_partial(&problem)?;
        let matched: Vec<(usize, usize)> = solution
            .assigned_column
            .iter()
            .enumerate()
            .filter_map(|(row, col)| col.map(|c| (row, c + 1)))
            .collect();
        let grants = lift_assignment(&matched, &reduced)?;
        let mut objective = 0.0;
        for &(vehicle, grant) in &grants {
            allocation.grant(vehicle, grant)?;
            occupancy.occupy(scenario, vehicle, grant.subframe);
            objective += costs.value(vehicle, grant.subframe, grant.subchannel);
        }
        reports.push(ClusterReport {
            cluster: rank.cluster,
            position,
            members: members.len(),
            fixed,
            newly_granted: grants.len(),
            skipped: solution
                .unmatched_rows
                .iter()
                .map(|&row| free_members[row])
                .collect(),
            objective,
        });
    }

    let objective = allocation
        .granted()
        .map(|(v, g)| costs.value(v, g.subframe, g.subchannel))
        .sum();
    Ok(HierarchicalOutcome {
        allocation,
        order,
        reports,
        objective,
    })
}
