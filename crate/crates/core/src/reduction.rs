//! Collapses each subframe's K subchannels to a single representative weight.
//!
//! Grouping a subframe's subchannel vertices into one node turns per-cluster
//! subchannel allocation into a plain assignment problem over subframes: a
//! vehicle that wins a subframe always takes its best subchannel there, so
//! the group weight is the max over the K cells. [`smoothed_reduce`] computes
//! the same aggregation as a log-sum-exp with sharpness `beta`; it converges
//! to the exact max as `beta` grows (within `ln(K)/beta`) and exists to
//! validate that limit, while production solving always uses [`reduce_costs`].

use crate::channel::CostTensor;
use crate::error::{Error, Result};
use crate::grid::Grant;

/// Per-cluster reduced weights: one row per member, one column per subframe,
/// each entry the member's best rate within that subframe. Back-pointers
/// remember which subchannel attained the max (lowest subchannel on ties) so
/// reduced solutions can be lifted back to full grants.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCostMatrix {
    vehicle_ids: Vec<usize>,
    subframes: usize,
    // row-major rows x subframes
    values: Vec<f64>,
    best_subchannel: Vec<usize>,
}

impl ReducedCostMatrix {
    pub fn rows(&self) -> usize {
        self.vehicle_ids.len()
    }

    pub fn subframes(&self) -> usize {
        self.subframes
    }

    /// Vehicle id behind row `row`.
    pub fn vehicle_id(&self, row: usize) -> usize {
        self.vehicle_ids[row]
    }

    /// Reduced weight of `row` in 1-based `subframe`.
    pub fn value(&self, row: usize, subframe: usize) -> f64 {
        self.values[row * self.subframes + (subframe - 1)]
    }

    /// 1-based subchannel attaining the row's max in `subframe`.
    pub fn best_subchannel(&self, row: usize, subframe: usize) -> usize {
        self.best_subchannel[row * self.subframes + (subframe - 1)]
    }
}

/// Builds the reduced matrix for `members` (rows keep the given order):
/// entry (row, l) = max over subchannels of the member's rate in subframe l.
pub fn reduce_costs(costs: &CostTensor, members: &[usize]) -> Result<ReducedCostMatrix> {
    if members.is_empty() {
        return Err(Error::EmptyMemberList);
    }
    let (l_count, k_count) = (costs.subframes(), costs.subchannels());
    let mut values = Vec::with_capacity(members.len() * l_count);
    let mut best = Vec::with_capacity(members.len() * l_count);
    for &vehicle in members {
        if vehicle >= costs.vehicles() {
            return Err(Error::UnknownVehicle(vehicle));
        }
        for l in 1..=l_count {
            let mut max = f64::NEG_INFINITY;
            let mut arg = 1;
            for k in 1..=k_count {
                let v = costs.value(vehicle, l, k);
                if v > max {
                    max = v;
                    arg = k;
                }
            }
            values.push(max);
            best.push(arg);
        }
    }
    Ok(ReducedCostMatrix {
        vehicle_ids: members.to_vec(),
        subframes: l_count,
        values,
        best_subchannel: best,
    })
}

/// Log-sum-exp aggregation at finite sharpness `beta`:
/// entry (row, l) = ln(sum_k exp(beta * c)) / beta, shifted by the group max
/// so large `beta` cannot overflow. Returns a row-major rows x subframes
/// matrix matching [`ReducedCostMatrix`] layout.
pub fn smoothed_reduce(costs: &CostTensor, members: &[usize], beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0) {
        return Err(Error::NonPositiveBeta(beta));
    }
    if members.is_empty() {
        return Err(Error::EmptyMemberList);
    }
    let (l_count, k_count) = (costs.subframes(), costs.subchannels());
    let mut out = Vec::with_capacity(members.len() * l_count);
    for &vehicle in members {
        if vehicle >= costs.vehicles() {
            return Err(Error::UnknownVehicle(vehicle));
        }
        for l in 1..=l_count {
            let mut max = f64::NEG_INFINITY;
            for k in 1..=k_count {
                max = max.max(costs.value(vehicle, l, k));
            }
            let mut sum = 0.0;
            for k in 1..=k_count {
                sum += (beta * (costs.value(vehicle, l, k) - max)).exp();
            }
            out.push(max + sum.ln() / beta);
        }
    }
    Ok(out)
}

/// Expands a reduced row -> subframe assignment into full resource grants.
///
/// Each row lands on its subframe's recorded best subchannel, so the sum of
/// full-tensor rates over the lifted grants equals the sum of reduced values
/// over the assignment. Rows must occupy pairwise distinct subframes.
pub fn lift_assignment(
    assignment: &[(usize, usize)],
    reduced: &ReducedCostMatrix,
) -> Result<Vec<(usize, Grant)>> {
    let mut used = vec![false; reduced.subframes()];
    let mut grants = Vec::with_capacity(assignment.len());
    for &(row, subframe) in assignment {
        if row >= reduced.rows() {
            return Err(Error::UnknownVehicle(row));
        }
        if subframe == 0 || subframe > reduced.subframes() {
            return Err(Error::SubframeOutOfRange {
                subframe,
                max: reduced.subframes(),
            });
        }
        if used[subframe - 1] {
            return Err(Error::DuplicateSubframe(subframe));
        }
        used[subframe - 1] = true;
        grants.push((
            reduced.vehicle_id(row),
            Grant {
                subframe,
                subchannel: reduced.best_subchannel(row, subframe),
            },
        ));
    }
    Ok(grants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::CostTensor;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tensor(n: usize, l: usize, k: usize, values: Vec<f64>) -> CostTensor {
        CostTensor::from_values(n, l, k, 1.26, values).unwrap()
    }

    fn random_tensor(n: usize, l: usize, k: usize, seed: u64) -> CostTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n * l * k).map(|_| rng.random::<f64>() * 10.0).collect();
        tensor(n, l, k, values)
    }

    #[test]
    fn single_subchannel_is_identity() {
        let t = tensor(2, 3, 1, vec![0.5, 1.5, 2.5, 3.5, 4.5, 5.5]);
        let r = reduce_costs(&t, &[0, 1]).unwrap();
        for (row, vehicle) in [(0, 0), (1, 1)] {
            for l in 1..=3 {
                assert_eq!(r.value(row, l), t.value(vehicle, l, 1));
                assert_eq!(r.best_subchannel(row, l), 1);
            }
        }
    }

    #[test]
    fn picks_max_and_argmax() {
        let t = tensor(1, 1, 3, vec![3.0, 7.0, 5.0]);
        let r = reduce_costs(&t, &[0]).unwrap();
        assert_eq!(r.value(0, 1), 7.0);
        assert_eq!(r.best_subchannel(0, 1), 2);
    }

    #[test]
    fn argmax_ties_break_to_lowest_subchannel() {
        let t = tensor(1, 1, 4, vec![2.0, 9.0, 9.0, 1.0]);
        let r = reduce_costs(&t, &[0]).unwrap();
        assert_eq!(r.best_subchannel(0, 1), 2);
    }

    #[test]
    fn matches_triple_loop_oracle_on_random_tensor() {
        let t = random_tensor(4, 4, 3, 11);
        let members = [2, 0, 3, 1];
        let r = reduce_costs(&t, &members).unwrap();
        for (row, &vehicle) in members.iter().enumerate() {
            for l in 1..=4 {
                // independent brute-force max
                let mut expected = f64::NEG_INFINITY;
                for k in 1..=3 {
                    let v = t.value(vehicle, l, k);
                    if v > expected {
                        expected = v;
                    }
                }
                assert_eq!(r.value(row, l), expected);
                assert_eq!(
                    t.value(vehicle, l, r.best_subchannel(row, l)),
                    expected
                );
            }
        }
    }

    #[test]
    fn smoothed_equals_exact_for_single_subchannel() {
        let t = tensor(1, 2, 1, vec![4.0, 6.0]);
        for beta in [0.5, 1.0, 10.0, 1000.0] {
            let s = smoothed_reduce(&t, &[0], beta).unwrap();
            assert_eq!(s, vec![4.0, 6.0]);
        }
    }

    #[test]
    fn smoothed_known_value() {
        // beta = 1, both entries 0: ln(2)
        let t = tensor(1, 1, 2, vec![0.0, 0.0]);
        let s = smoothed_reduce(&t, &[0], 1.0).unwrap();
        assert_relative_eq!(s[0], std::f64::consts::LN_2, max_relative = 1e-12);
    }

    #[test]
    fn smoothed_bounded_by_max_plus_log_k_over_beta() {
        let t = tensor(1, 1, 3, vec![3.0, 7.0, 5.0]);
        for beta in [1.0, 10.0, 100.0, 1000.0] {
            let s = smoothed_reduce(&t, &[0], beta).unwrap()[0];
            assert!(s >= 7.0);
            assert!(s <= 7.0 + (3f64).ln() / beta + 1e-15);
        }
    }

    #[test]
    fn smoothed_rejects_non_positive_beta() {
        let t = tensor(1, 1, 2, vec![1.0, 2.0]);
        assert!(matches!(
            smoothed_reduce(&t, &[0], 0.0),
            Err(Error::NonPositiveBeta(_))
        ));
        assert!(matches!(
            smoothed_reduce(&t, &[0], -3.0),
            Err(Error::NonPositiveBeta(_))
        ));
    }

    #[test]
    fn reduce_rejects_empty_members_and_unknown_vehicles() {
        let t = tensor(1, 1, 2, vec![1.0, 2.0]);
        assert!(matches!(reduce_costs(&t, &[]), Err(Error::EmptyMemberList)));
        assert!(matches!(
            reduce_costs(&t, &[3]),
            Err(Error::UnknownVehicle(3))
        ));
    }

    #[test]
    fn reduce_is_monotone_in_entries() {
        let base = random_tensor(3, 3, 2, 21);
        let reduced = reduce_costs(&base, &[0, 1, 2]).unwrap();
        // bump one entry, no reduced output may decrease
        let mut values = Vec::new();
        for i in 0..3 {
            for l in 1..=3 {
                for k in 1..=2 {
                    let bump = if i == 1 && l == 2 && k == 1 { 5.0 } else { 0.0 };
                    values.push(base.value(i, l, k) + bump);
                }
            }
        }
        let bumped = tensor(3, 3, 2, values);
        let reduced_bumped = reduce_costs(&bumped, &[0, 1, 2]).unwrap();
        for row in 0..3 {
            for l in 1..=3 {
                assert!(reduced_bumped.value(row, l) >= reduced.value(row, l));
            }
        }
    }

    #[test]
    fn lift_uses_recorded_subchannel_and_preserves_objective() {
        let t = random_tensor(3, 4, 3, 33);
        let members = [1, 2, 0];
        let r = reduce_costs(&t, &members).unwrap();
        let assignment = [(0usize, 2usize), (1, 4), (2, 1)];
        let grants = lift_assignment(&assignment, &r).unwrap();
        let lifted_total: f64 = grants
            .iter()
            .map(|&(v, g)| t.value(v, g.subframe, g.subchannel))
            .sum();
        let reduced_total: f64 = assignment.iter().map(|&(row, l)| r.value(row, l)).sum();
        assert_relative_eq!(lifted_total, reduced_total, max_relative = 1e-12);
        // vehicle ids come from the member list
        assert_eq!(grants[0].0, 1);
        assert_eq!(grants[1].0, 2);
        assert_eq!(grants[2].0, 0);
    }

    #[test]
    fn lift_rejects_duplicate_subframes() {
        let t = random_tensor(2, 3, 2, 44);
        let r = reduce_costs(&t, &[0, 1]).unwrap();
        assert!(matches!(
            lift_assignment(&[(0, 2), (1, 2)], &r),
            Err(Error::DuplicateSubframe(2))
        ));
    }

    #[test]
    fn single_vehicle_lift_lands_on_row_max() {
        let t = tensor(1, 2, 3, vec![1.0, 2.0, 3.0, 4.0, 9.0, 5.0]);
        let r = reduce_costs(&t, &[0]).unwrap();
        // best subframe is 2, best subchannel there is 2
        let grants = lift_assignment(&[(0, 2)], &r).unwrap();
        assert_eq!(grants, vec![(0, Grant { subframe: 2, subchannel: 2 })]);
    }
}
