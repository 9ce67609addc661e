//! Rate statistics over an allocation.

use crate::channel::CostTensor;
use crate::error::Result;
use crate::grid::Allocation;

/// Fleet rate statistics in Mbit/s per subchannel.
///
/// Unassigned vehicles are excluded from the rate statistics and reported
/// separately, so summaries stay comparable across algorithms that assign
/// different subsets. The standard deviation is the population form
/// (divide by the count of assigned vehicles). With no assigned vehicle all
/// four statistics are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSummary {
    pub highest_rate: f64,
    pub mean_rate: f64,
    pub worst_rate: f64,
    pub rate_stddev: f64,
    pub unassigned_count: usize,
}

/// Computes the per-allocation rate summary; the rate of a granted vehicle
/// is its tensor entry at the granted cell.
pub fn summarize(allocation: &Allocation, costs: &CostTensor) -> Result<RateSummary> {
    let mut rates = Vec::with_capacity(allocation.granted_count());
    for (vehicle, grant) in allocation.granted() {
        rates.push(costs.try_value(vehicle, grant.subframe, grant.subchannel)?);
    }
    let unassigned_count = allocation.unassigned_count();
    if rates.is_empty() {
        return Ok(RateSummary {
            highest_rate: 0.0,
            mean_rate: 0.0,
            worst_rate: 0.0,
            rate_stddev: 0.0,
            unassigned_count,
        });
    }
    let count = rates.len() as f64;
    let mut highest = f64::NEG_INFINITY;
    let mut worst = f64::INFINITY;
    let mut sum = 0.0;
    for &r in &rates {
        highest = highest.max(r);
        worst = worst.min(r);
        sum += r;
    }
    let mean = sum / count;
    let variance = rates.iter().map(|&r| (r - mean) * (r - mean)).sum::<f64>() / count;
    Ok(RateSummary {
        highest_rate: highest,
        mean_rate: mean,
        worst_rate: worst,
        rate_stddev: variance.sqrt(),
        unassigned_count,
    })
}

/// Total rate over granted vehicles — the objective every solver maximizes.
pub fn allocation_objective(allocation: &Allocation, costs: &CostTensor) -> Result<f64> {
    let mut total = 0.0;
    for (vehicle, grant) in allocation.granted() {
        total += costs.try_value(vehicle, grant.subframe, grant.subchannel)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::CostTensor;
    use crate::grid::{Allocation, Grant};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constant_tensor(n: usize, l: usize, k: usize, value: f64) -> CostTensor {
        CostTensor::from_values(n, l, k, 1.26, vec![value; n * l * k]).unwrap()
    }

    #[test]
    fn constant_rates_collapse_summary() {
        let c = constant_tensor(3, 3, 1, 5.0);
        let mut a = Allocation::empty(3);
        for v in 0..3 {
            a.grant(v, Grant { subframe: v + 1, subchannel: 1 }).unwrap();
        }
        let s = summarize(&a, &c).unwrap();
        assert_eq!(s.highest_rate, 5.0);
        assert_eq!(s.mean_rate, 5.0);
        assert_eq!(s.worst_rate, 5.0);
        assert_eq!(s.rate_stddev, 0.0);
        assert_eq!(s.unassigned_count, 0);
    }

    #[test]
    fn two_rates_by_hand() {
        // rates {2, 4}: mean 3, population stddev 1
        let values = vec![2.0, 9.0, 9.0, 4.0];
        let c = CostTensor::from_values(2, 2, 1, 1.26, values).unwrap();
        let mut a = Allocation::empty(2);
        a.grant(0, Grant { subframe: 1, subchannel: 1 }).unwrap();
        a.grant(1, Grant { subframe: 2, subchannel: 1 }).unwrap();
        let s = summarize(&a, &c).unwrap();
        assert_relative_eq!(s.mean_rate, 3.0);
        assert_relative_eq!(s.rate_stddev, 1.0);
        assert_relative_eq!(s.highest_rate, 4.0);
        assert_relative_eq!(s.worst_rate, 2.0);
    }

    #[test]
    fn matches_independent_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let (n, l, k) = (6, 4, 2);
        let values: Vec<f64> = (0..n * l * k).map(|_| rng.random::<f64>() * 9.0).collect();
        let c = CostTensor::from_values(n, l, k, 1.26, values).unwrap();
        let mut a = Allocation::empty(n);
        for v in 0..4 {
            a.grant(
                v,
                Grant {
                    subframe: v + 1,
                    subchannel: rng.random_range(1..=k),
                },
            )
            .unwrap();
        }
        let s = summarize(&a, &c).unwrap();

        // independent pass: Welford's running statistics
        let mut count = 0.0;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for (v, g) in a.granted() {
            let r = c.value(v, g.subframe, g.subchannel);
            count += 1.0;
            let d = r - mean;
            mean += d / count;
            m2 += d * (r - mean);
            hi = hi.max(r);
            lo = lo.min(r);
        }
        assert_relative_eq!(s.mean_rate, mean, max_relative = 1e-12);
        assert_relative_eq!(s.rate_stddev, (m2 / count).sqrt(), max_relative = 1e-12);
        assert_eq!(s.highest_rate, hi);
        assert_eq!(s.worst_rate, lo);
        assert_eq!(s.unassigned_count, 2);
        assert!(s.worst_rate <= s.mean_rate && s.mean_rate <= s.highest_rate);
    }

    #[test]
    fn permutation_invariant_over_vehicle_relabeling() {
        let values = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let c = CostTensor::from_values(3, 2, 1, 1.26, values.clone()).unwrap();
        let mut a = Allocation::empty(3);
        a.grant(0, Grant { subframe: 1, subchannel: 1 }).unwrap();
        a.grant(1, Grant { subframe: 2, subchannel: 1 }).unwrap();
        a.grant(2, Grant { subframe: 1, subchannel: 1 }).unwrap();

        // swap vehicles 0 and 2 in both tensor and allocation
        let swapped_values = vec![5.0, 6.0, 3.0, 4.0, 1.0, 2.0];
        let c2 = CostTensor::from_values(3, 2, 1, 1.26, swapped_values).unwrap();
        let mut a2 = Allocation::empty(3);
        a2.grant(2, Grant { subframe: 1, subchannel: 1 }).unwrap();
        a2.grant(1, Grant { subframe: 2, subchannel: 1 }).unwrap();
        a2.grant(0, Grant { subframe: 1, subchannel: 1 }).unwrap();

        let s1 = summarize(&a, &c).unwrap();
        let s2 = summarize(&a2, &c2).unwrap();
        assert_relative_eq!(s1.mean_rate, s2.mean_rate, max_relative = 1e-12);
        assert_relative_eq!(s1.rate_stddev, s2.rate_stddev, max_relative = 1e-12);
        assert_eq!(s1.highest_rate, s2.highest_rate);
        assert_eq!(s1.worst_rate, s2.worst_rate);
    }

    #[test]
    fn empty_allocation_reports_zeroes() {
        let c = constant_tensor(2, 1, 1, 3.0);
        let a = Allocation::empty(2);
        let s = summarize(&a, &c).unwrap();
        assert_eq!(s.unassigned_count, 2);
        assert_eq!(s.mean_rate, 0.0);
    }

    #[test]
    fn out_of_bounds_grant_is_domain_error() {
        let c = constant_tensor(2, 2, 1, 3.0);
        let mut a = Allocation::empty(2);
        a.grant(0, Grant { subframe: 3, subchannel: 1 }).unwrap();
        assert!(summarize(&a, &c).is_err());
    }

    #[test]
    fn objective_sums_granted_rates() {
        let c = constant_tensor(3, 3, 1, 2.5);
        let mut a = Allocation::empty(3);
        a.grant(0, Grant { subframe: 1, subchannel: 1 }).unwrap();
        a.grant(2, Grant { subframe: 3, subchannel: 1 }).unwrap();
        assert_relative_eq!(allocation_objective(&a, &c).unwrap(), 5.0);
    }
}
