//! Comparison algorithms: exhaustive global search, greedy, and random.
//!
//! All three produce conflict-free allocations; they differ only in how hard
//! they try. The exhaustive search is an exact oracle for desk-scale
//! instances, greedy is the myopic max-rate heuristic, and random draws
//! uniformly among feasible cells.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::CostTensor;
use crate::error::{Error, Result};
use crate::grid::{Allocation, Grant, Scenario, SubframeOccupancy};

/// Exact global optimum by depth-first backtracking.
///
/// Vehicles are decided in id order; each in turn tries every feasible cell
/// (subframe ascending, subchannel ascending) and finally the unassigned
/// option, so the first optimum encountered — the one kept on ties — is the
/// lexicographically smallest grant vector. Branches are pruned with an
/// admissible bound: the current total plus each remaining vehicle's best
/// still-feasible cell. Refuses with a node-count diagnostic once `budget`
/// search nodes have been expanded.
pub fn exhaustive_global(
    scenario: &Scenario,
    costs: &CostTensor,
    budget: u64,
) -> Result<(Allocation, f64)> {
    costs.matches_scenario(scenario)?;
    let mut search = GlobalSearch {
        scenario,
        costs,
        occupancy: SubframeOccupancy::new(scenario),
        current: vec![None; scenario.vehicle_count()],
        best: vec![None; scenario.vehicle_count()],
        best_objective: f64::NEG_INFINITY,
        nodes: 0,
        budget,
    };
    search.descend(0, 0.0)?;
    let mut allocation = Allocation::empty(scenario.vehicle_count());
    for (vehicle, grant) in search.best.iter().enumerate() {
        if let Some(g) = grant {
            allocation.grant(vehicle, *g)?;
        }
    }
    Ok((allocation, search.best_objective))
}

struct GlobalSearch<'a> {
    scenario: &'a Scenario,
    costs: &'a CostTensor,
    occupancy: SubframeOccupancy,
    current: Vec<Option<Grant>>,
    best: Vec<Option<Grant>>,
    best_objective: f64,
    nodes: u64,
    budget: u64,
}

impl GlobalSearch<'_> {
    fn descend(&mut self, vehicle: usize, sum: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { nodes: self.nodes });
        }
        if vehicle == self.scenario.vehicle_count() {
            if sum > self.best_objective {
                self.best_objective = sum;
                self.best.clone_from(&self.current);
            }
            return Ok(());
        }
        if sum + self.remaining_bound(vehicle) <= self.best_objective {
            return Ok(());
        }
        let grid = self.scenario.grid();
        for l in 1..=grid.subframes {
            if !self.occupancy.usable_by(self.scenario, vehicle, l) {
                continue;
            }
            self.occupancy.occupy(self.scenario, vehicle, l);
            for k in 1..=grid.subchannels {
                self.current[vehicle] = Some(Grant {
                    subframe: l,
                    subchannel: k,
                });
                self.descend(vehicle + 1, sum + self.costs.value(vehicle, l, k))?;
            }
            self.occupancy.release(self.scenario, vehicle, l);
        }
        self.current[vehicle] = None;
        self.descend(vehicle + 1, sum)
    }

    // Sum over undecided vehicles of their best currently feasible cell.
    // Feasible sets only shrink deeper in the tree, so this never
    // underestimates what the subtree can still collect.
    fn remaining_bound(&self, from: usize) -> f64 {
        let grid = self.scenario.grid();
        let mut bound = 0.0;
        for v in from..self.scenario.vehicle_count() {
            let mut best = 0.0f64;
            for l in 1..=grid.subframes {
                if !self.occupancy.usable_by(self.scenario, v, l) {
                    continue;
                }
                for k in 1..=grid.subchannels {
                    best = best.max(self.costs.value(v, l, k));
                }
            }
            bound += best;
        }
        bound
    }
}

/// Myopic heuristic: vehicles ordered by their single best cell value
/// (descending, vehicle id breaking ties) each grab their best cell whose
/// subframe is still free in every cluster they belong to.
pub fn greedy(scenario: &Scenario, costs: &CostTensor) -> Result<Allocation> {
    costs.matches_scenario(scenario)?;
    let n = scenario.vehicle_count();
    let mut order: Vec<usize> = (0..n).collect();
    let peaks: Vec<f64> = (0..n).map(|v| costs.row_max(v).0).collect();
    order.sort_by(|&a, &b| {
        peaks[b]
            .partial_cmp(&peaks[a])
            .expect("tensor entries are finite")
            .then(a.cmp(&b))
    });

    let grid = scenario.grid();
    let mut allocation = Allocation::empty(n);
    let mut occupancy = SubframeOccupancy::new(scenario);
    for &vehicle in &order {
        let mut best: Option<(f64, Grant)> = None;
        for l in 1..=grid.subframes {
            if !occupancy.usable_by(scenario, vehicle, l) {
                continue;
            }
            for k in 1..=grid.subchannels {
                let value = costs.value(vehicle, l, k);
                if best.map_or(true, |(b, _)| value > b) {
                    best = Some((
                        value,
                        Grant {
                            subframe: l,
                            subchannel: k,
                        },
                    ));
                }
            }
        }
        if let Some((_, grant)) = best {
            allocation.grant(vehicle, grant)?;
            occupancy.occupy(scenario, vehicle, grant.subframe);
        }
    }
    Ok(allocation)
}

/// Uniformly random feasible allocation: vehicle order is shuffled, then each
/// vehicle draws one cell uniformly among those whose subframe is free in all
/// of its clusters. Deterministic for a given seed.
pub fn random_alloc(scenario: &Scenario, costs: &CostTensor, seed: u64) -> Result<Allocation> {
    costs.matches_scenario(scenario)?;
    let n = scenario.vehicle_count();
    let grid = scenario.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut allocation = Allocation::empty(n);
    let mut occupancy = SubframeOccupancy::new(scenario);
    for &vehicle in &order {
        let mut feasible = Vec::with_capacity(grid.resources());
        for l in 1..=grid.subframes {
            if !occupancy.usable_by(scenario, vehicle, l) {
                continue;
            }
            for k in 1..=grid.subchannels {
                feasible.push(Grant {
                    subframe: l,
                    subchannel: k,
                });
            }
        }
        if feasible.is_empty() {
            continue;
        }
        let grant = feasible[rng.random_range(0..feasible.len())];
        allocation.grant(vehicle, grant)?;
        occupancy.occupy(scenario, vehicle, grant.subframe);
    }
    Ok(allocation)
}
