//! Resource lattice, scenarios, allocations and the conflict predicates.
//!
//! An allocation period is an `L x K` lattice: `L` time subframes, each
//! carrying `K` frequency subchannels. A vehicle broadcasts once per period
//! on a single (subframe, subchannel) cell. Vehicles are grouped into
//! (possibly overlapping) clusters; because a half-duplex radio cannot
//! transmit and receive at once, two members of the same cluster must never
//! broadcast in the same subframe. That per-cluster time-orthogonality rule
//! is the single hard constraint every solver in this crate must satisfy,
//! and [`find_conflicts`] is its arbiter.
//!
//! Subframes and subchannels are 1-based throughout the public API, matching
//! the flat resource labels `r = (l-1)*K + k`. Vehicle ids are dense `0..N`,
//! cluster ids dense `0..J`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ScenarioViolation};

pub const DEFAULT_SUBFRAME_DURATION_MS: f64 = 1.0;
pub const DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ: f64 = 1.26;

/// The `L x K` time-frequency lattice of one allocation period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceGrid {
    /// Number of time subframes per period (`L`).
    pub subframes: usize,
    /// Number of frequency subchannels per subframe (`K`).
    pub subchannels: usize,
    /// Duration of one subframe in milliseconds.
    pub subframe_duration_ms: f64,
    /// Bandwidth of one subchannel in MHz.
    pub subchannel_bandwidth_mhz: f64,
}

impl ResourceGrid {
    /// Grid with the default 1 ms x 1.26 MHz cell dimensions.
    pub fn new(subframes: usize, subchannels: usize) -> Result<Self> {
        Self::with_cell(
            subframes,
            subchannels,
            DEFAULT_SUBFRAME_DURATION_MS,
            DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ,
        )
    }

    pub fn with_cell(
        subframes: usize,
        subchannels: usize,
        subframe_duration_ms: f64,
        subchannel_bandwidth_mhz: f64,
    ) -> Result<Self> {
        if subframes == 0 {
            return Err(Error::InvalidGrid("subframe count must be at least 1".into()));
        }
        if subchannels == 0 {
            return Err(Error::InvalidGrid(
                "subchannel count must be at least 1".into(),
            ));
        }
        if !(subframe_duration_ms > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "subframe duration must be positive, got {subframe_duration_ms}"
            )));
        }
        if !(subchannel_bandwidth_mhz > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "subchannel bandwidth must be positive, got {subchannel_bandwidth_mhz}"
            )));
        }
        Ok(Self {
            subframes,
            subchannels,
            subframe_duration_ms,
            subchannel_bandwidth_mhz,
        })
    }

    /// Total number of resource cells `L * K`.
    pub fn resources(&self) -> usize {
        self.subframes * self.subchannels
    }

    /// Flat resource index `r = (l-1)*K + k` for 1-based `(l, k)`.
    pub fn flat_index(&self, subframe: usize, subchannel: usize) -> Result<usize> {
        if subframe == 0 || subframe > self.subframes {
            return Err(Error::SubframeOutOfRange {
                subframe,
                max: self.subframes,
            });
        }
        if subchannel == 0 || subchannel > self.subchannels {
            return Err(Error::SubchannelOutOfRange {
                subchannel,
                max: self.subchannels,
            });
        }
        Ok((subframe - 1) * self.subchannels + subchannel)
    }

    /// Inverse of [`flat_index`](Self::flat_index): recovers 1-based `(l, k)`.
    pub fn from_flat_index(&self, index: usize) -> Result<(usize, usize)> {
        if index == 0 || index > self.resources() {
            return Err(Error::ResourceOutOfRange {
                index,
                max: self.resources(),
            });
        }
        let subframe = (index - 1) / self.subchannels + 1;
        let subchannel = (index - 1) % self.subchannels + 1;
        Ok((subframe, subchannel))
    }
}

/// A fleet of vehicles organized in clusters over a grid.
///
/// Clusters are stored as rosters (sorted member id lists); the binary
/// membership matrix is a derived view. Construction validates every
/// invariant, so a `Scenario` value is always well formed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    grid: ResourceGrid,
    vehicle_count: usize,
    clusters: Vec<Vec<usize>>,
    // vehicle -> sorted ids of clusters containing it
    clusters_of: Vec<Vec<usize>>,
}

/// Checks the scenario invariants and reports the first violation found.
///
/// Check order: fleet non-empty, cluster list non-empty, then per cluster
/// (member range, duplicates, emptiness, size vs subframes), then orphan
/// vehicles.
pub fn validate_scenario(
    grid: &ResourceGrid,
    vehicle_count: usize,
    clusters: &[Vec<usize>],
) -> std::result::Result<(), ScenarioViolation> {
    if vehicle_count == 0 {
        return Err(ScenarioViolation::NoVehicles);
    }
    if clusters.is_empty() {
        return Err(ScenarioViolation::NoClusters);
    }
    for (j, members) in clusters.iter().enumerate() {
        if members.is_empty() {
            return Err(ScenarioViolation::EmptyCluster { cluster: j });
        }
        let mut seen = vec![false; vehicle_count];
        for &v in members {
            if v >= vehicle_count {
                return Err(ScenarioViolation::MemberOutOfRange {
                    cluster: j,
                    vehicle: v,
                    vehicles: vehicle_count,
                });
            }
            if seen[v] {
                return Err(ScenarioViolation::DuplicateMember {
                    cluster: j,
                    vehicle: v,
                });
            }
            seen[v] = true;
        }
        if members.len() > grid.subframes {
            return Err(ScenarioViolation::ClusterExceedsSubframes {
                cluster: j,
                size: members.len(),
                subframes: grid.subframes,
            });
        }
    }
    let mut covered = vec![false; vehicle_count];
    for members in clusters {
        for &v in members {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(ScenarioViolation::OrphanVehicle { vehicle: v });
    }
    Ok(())
}

impl Scenario {
    pub fn new(grid: ResourceGrid, vehicle_count: usize, clusters: Vec<Vec<usize>>) -> Result<Self> {
        validate_scenario(&grid, vehicle_count, &clusters)?;
        let mut clusters: Vec<Vec<usize>> = clusters;
        for members in &mut clusters {
            members.sort_unstable();
        }
        let mut clusters_of = vec![Vec::new(); vehicle_count];
        for (j, members) in clusters.iter().enumerate() {
            for &v in members {
                clusters_of[v].push(j);
            }
        }
        Ok(Self {
            grid,
            vehicle_count,
            clusters,
            clusters_of,
        })
    }

    pub fn grid(&self) -> &ResourceGrid {
        &self.grid
    }

    pub fn vehicle_count(&self) -> usize {
        self.vehicle_count
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Sorted member ids of cluster `j`.
    pub fn cluster(&self, j: usize) -> &[usize] {
        &self.clusters[j]
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// Sorted ids of the clusters containing `vehicle`.
    pub fn clusters_of(&self, vehicle: usize) -> &[usize] {
        &self.clusters_of[vehicle]
    }

    /// The binary membership matrix `U` (clusters x vehicles).
    pub fn membership_matrix(&self) -> Vec<Vec<bool>> {
        let mut u = vec![vec![false; self.vehicle_count]; self.clusters.len()];
        for (j, members) in self.clusters.iter().enumerate() {
            for &v in members {
                u[j][v] = true;
            }
        }
        u
    }

    /// Number of a cluster's members shared with at least one other cluster.
    pub fn overlap_degree(&self, j: usize) -> usize {
        self.clusters[j]
            .iter()
            .filter(|&&v| self.clusters_of[v].len() > 1)
            .count()
    }

    pub fn to_toml_string(&self) -> Result<String> {
        let file = ScenarioFile {
            version: SCENARIO_SCHEMA_VERSION,
            subframes: self.grid.subframes,
            subchannels: self.grid.subchannels,
            subframe_duration_ms: self.grid.subframe_duration_ms,
            subchannel_bandwidth_mhz: self.grid.subchannel_bandwidth_mhz,
            vehicles: self.vehicle_count,
            clusters: self.clusters.clone(),
        };
        Ok(toml::to_string(&file)?)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text)?;
        if file.version != SCENARIO_SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported scenario schema version {} (expected {})",
                file.version, SCENARIO_SCHEMA_VERSION
            )));
        }
        let grid = ResourceGrid::with_cell(
            file.subframes,
            file.subchannels,
            file.subframe_duration_ms,
            file.subchannel_bandwidth_mhz,
        )?;
        Scenario::new(grid, file.vehicles, file.clusters)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    version: u32,
    subframes: usize,
    subchannels: usize,
    #[serde(default = "default_duration")]
    subframe_duration_ms: f64,
    #[serde(default = "default_bandwidth")]
    subchannel_bandwidth_mhz: f64,
    vehicles: usize,
    clusters: Vec<Vec<usize>>,
}

fn default_duration() -> f64 {
    DEFAULT_SUBFRAME_DURATION_MS
}

fn default_bandwidth() -> f64 {
    DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ
}

/// One granted resource cell; `subframe` and `subchannel` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grant {
    pub subframe: usize,
    pub subchannel: usize,
}

impl fmt::Display for Grant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.subframe, self.subchannel)
    }
}

/// A partial map from vehicles to resource cells.
///
/// Vehicles without a grant are unassigned; the two sets always partition
/// `0..vehicle_count` by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    vehicle_count: usize,
    grants: BTreeMap<usize, Grant>,
}

impl Allocation {
    pub fn empty(vehicle_count: usize) -> Self {
        Self {
            vehicle_count,
            grants: BTreeMap::new(),
        }
    }

    pub fn vehicle_count(&self) -> usize {
        self.vehicle_count
    }

    /// Records a grant. A vehicle may hold at most one grant per period.
    pub fn grant(&mut self, vehicle: usize, cell: Grant) -> Result<()> {
        if vehicle >= self.vehicle_count {
            return Err(Error::UnknownVehicle(vehicle));
        }
        if self.grants.insert(vehicle, cell).is_some() {
            return Err(Error::InvalidConfig(format!(
                "vehicle {vehicle} already holds a grant"
            )));
        }
        Ok(())
    }

    /// Removes and returns a vehicle's grant, if any.
    pub fn revoke(&mut self, vehicle: usize) -> Option<Grant> {
        self.grants.remove(&vehicle)
    }

    pub fn grant_of(&self, vehicle: usize) -> Option<Grant> {
        self.grants.get(&vehicle).copied()
    }

    /// Granted vehicles in ascending id order.
    pub fn granted(&self) -> impl Iterator<Item = (usize, Grant)> + '_ {
        self.grants.iter().map(|(&v, &g)| (v, g))
    }

    pub fn granted_count(&self) -> usize {
        self.grants.len()
    }

    /// Vehicles without a grant, ascending.
    pub fn unassigned(&self) -> Vec<usize> {
        (0..self.vehicle_count)
            .filter(|v| !self.grants.contains_key(v))
            .collect()
    }

    pub fn unassigned_count(&self) -> usize {
        self.vehicle_count - self.grants.len()
    }

    /// Renders the allocation as CSV with header `vehicle,subframe,subchannel`.
    /// Unassigned vehicles are simply absent.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("vehicle,subframe,subchannel\n");
        for (v, g) in self.granted() {
            out.push_str(&format!("{},{},{}\n", v, g.subframe, g.subchannel));
        }
        out
    }

    /// Parses the CSV form produced by [`to_csv_string`](Self::to_csv_string).
    pub fn from_csv_str(text: &str, vehicle_count: usize) -> Result<Self> {
        let mut alloc = Allocation::empty(vehicle_count);
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (idx == 0 && line.starts_with("vehicle")) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::AllocationFormat {
                    line: idx + 1,
                    msg: format!("expected 3 comma-separated fields, got {}", fields.len()),
                });
            }
            let parse = |s: &str, what: &str| -> Result<usize> {
                s.trim().parse::<usize>().map_err(|e| Error::AllocationFormat {
                    line: idx + 1,
                    msg: format!("bad {what} '{s}': {e}"),
                })
            };
            let vehicle = parse(fields[0], "vehicle id")?;
            let subframe = parse(fields[1], "subframe")?;
            let subchannel = parse(fields[2], "subchannel")?;
            alloc.grant(vehicle, Grant { subframe, subchannel })?;
        }
        Ok(alloc)
    }
}

/// Two or more co-cluster vehicles granted the same subframe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub cluster: usize,
    pub subframe: usize,
    pub vehicles: Vec<usize>,
}

/// Finds every (cluster, subframe) pair holding two or more granted members.
///
/// Returns an empty list exactly when the allocation is conflict-free. Grants
/// for vehicles or cells outside the scenario are domain errors.
pub fn find_conflicts(allocation: &Allocation, scenario: &Scenario) -> Result<Vec<Conflict>> {
    let grid = scenario.grid();
    for (v, g) in allocation.granted() {
        if v >= scenario.vehicle_count() {
            return Err(Error::UnknownVehicle(v));
        }
        // reuse the range checks
        grid.flat_index(g.subframe, g.subchannel)?;
    }
    let mut conflicts = Vec::new();
    for j in 0..scenario.cluster_count() {
        let mut by_subframe: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &v in scenario.cluster(j) {
            if let Some(g) = allocation.grant_of(v) {
                by_subframe.entry(g.subframe).or_default().push(v);
            }
        }
        for (l, vehicles) in by_subframe {
            if vehicles.len() >= 2 {
                conflicts.push(Conflict {
                    cluster: j,
                    subframe: l,
                    vehicles,
                });
            }
        }
    }
    Ok(conflicts)
}

/// Tracks which subframes are consumed in each cluster as grants accumulate.
///
/// Every allocator in this crate funnels its feasibility questions through
/// this tracker: a subframe is usable for a vehicle only while it is free in
/// every cluster the vehicle belongs to, which keeps any sequence of grants
/// conflict-free by construction.
#[derive(Debug, Clone)]
pub struct SubframeOccupancy {
    // row-major clusters x subframes, index j * subframes + (l - 1)
    taken: Vec<bool>,
    subframes: usize,
}

impl SubframeOccupancy {
    pub fn new(scenario: &Scenario) -> Self {
        Self {
            taken: vec![false; scenario.cluster_count() * scenario.grid().subframes],
            subframes: scenario.grid().subframes,
        }
    }

    pub fn is_taken(&self, cluster: usize, subframe: usize) -> bool {
        self.taken[cluster * self.subframes + (subframe - 1)]
    }

    /// True while `subframe` is free in every cluster containing `vehicle`.
    pub fn usable_by(&self, scenario: &Scenario, vehicle: usize, subframe: usize) -> bool {
        scenario
            .clusters_of(vehicle)
            .iter()
            .all(|&j| !self.is_taken(j, subframe))
    }

    /// Marks `subframe` as consumed in every cluster containing `vehicle`.
    pub fn occupy(&mut self, scenario: &Scenario, vehicle: usize, subframe: usize) {
        for &j in scenario.clusters_of(vehicle) {
            self.taken[j * self.subframes + (subframe - 1)] = true;
        }
    }

    /// Undoes [`occupy`](Self::occupy) for backtracking searches.
    pub fn release(&mut self, scenario: &Scenario, vehicle: usize, subframe: usize) {
        for &j in scenario.clusters_of(vehicle) {
            self.taken[j * self.subframes + (subframe - 1)] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(l: usize, k: usize) -> ResourceGrid {
        ResourceGrid::new(l, k).unwrap()
    }

    #[test]
    fn flat_index_corners() {
        let g = grid(3, 4);
        assert_eq!(g.flat_index(1, 1).unwrap(), 1);
        assert_eq!(g.flat_index(2, 1).unwrap(), 5);
        assert_eq!(g.flat_index(3, 4).unwrap(), 12);
    }

    #[test]
    fn flat_index_round_trip_exhaustive() {
        for l in 1..=16 {
            for k in 1..=16 {
                let g = grid(l, k);
                let mut seen = vec![false; g.resources()];
                for sf in 1..=l {
                    for sc in 1..=k {
                        let r = g.flat_index(sf, sc).unwrap();
                        assert!((1..=g.resources()).contains(&r));
                        assert!(!seen[r - 1], "index {r} hit twice");
                        seen[r - 1] = true;
                        assert_eq!(g.from_flat_index(r).unwrap(), (sf, sc));
                    }
                }
                assert!(seen.iter().all(|&s| s), "bijection must cover 1..=L*K");
            }
        }
    }

    #[test]
    fn flat_index_rejects_out_of_range() {
        let g = grid(2, 3);
        assert!(matches!(
            g.flat_index(0, 1),
            Err(Error::SubframeOutOfRange { .. })
        ));
        assert!(matches!(
            g.flat_index(3, 1),
            Err(Error::SubframeOutOfRange { .. })
        ));
        assert!(matches!(
            g.flat_index(1, 4),
            Err(Error::SubchannelOutOfRange { .. })
        ));
        assert!(matches!(
            g.from_flat_index(0),
            Err(Error::ResourceOutOfRange { .. })
        ));
        assert!(matches!(
            g.from_flat_index(7),
            Err(Error::ResourceOutOfRange { .. })
        ));
    }

    #[test]
    fn grid_rejects_degenerate_dimensions() {
        assert!(ResourceGrid::new(0, 1).is_err());
        assert!(ResourceGrid::new(1, 0).is_err());
        assert!(ResourceGrid::with_cell(1, 1, 0.0, 1.26).is_err());
        assert!(ResourceGrid::with_cell(1, 1, 1.0, -2.0).is_err());
    }

    #[test]
    fn validate_accepts_overlapping_pair() {
        // U = [[1,1],[0,1]] over L=2
        let g = grid(2, 1);
        assert!(validate_scenario(&g, 2, &[vec![0, 1], vec![1]]).is_ok());
    }

    #[test]
    fn validate_reports_orphan_vehicle() {
        let g = grid(2, 1);
        let err = validate_scenario(&g, 2, &[vec![1]]).unwrap_err();
        assert_eq!(err, ScenarioViolation::OrphanVehicle { vehicle: 0 });
    }

    #[test]
    fn validate_reports_oversized_cluster() {
        let g = grid(2, 1);
        let err = validate_scenario(&g, 3, &[vec![0, 1, 2]]).unwrap_err();
        assert_eq!(
            err,
            ScenarioViolation::ClusterExceedsSubframes {
                cluster: 0,
                size: 3,
                subframes: 2
            }
        );
    }

    #[test]
    fn validate_reports_duplicates_and_range() {
        let g = grid(4, 1);
        assert_eq!(
            validate_scenario(&g, 2, &[vec![0, 0]]).unwrap_err(),
            ScenarioViolation::DuplicateMember {
                cluster: 0,
                vehicle: 0
            }
        );
        assert_eq!(
            validate_scenario(&g, 2, &[vec![0, 5]]).unwrap_err(),
            ScenarioViolation::MemberOutOfRange {
                cluster: 0,
                vehicle: 5,
                vehicles: 2
            }
        );
    }

    // Two partially overlapping clusters: the shared vehicle and a
    // second-cluster vehicle land in the same subframe, on different
    // subchannels, and that still counts as a conflict.
    #[test]
    fn conflicts_detected_for_overlapping_clusters() {
        let g = grid(4, 2);
        // vehicle 2 is in both clusters, vehicle 4 only in the second
        let s = Scenario::new(g, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let mut a = Allocation::empty(5);
        a.grant(2, Grant { subframe: 3, subchannel: 1 }).unwrap();
        a.grant(4, Grant { subframe: 3, subchannel: 2 }).unwrap();
        let conflicts = find_conflicts(&a, &s).unwrap();
        assert_eq!(
            conflicts,
            vec![Conflict {
                cluster: 1,
                subframe: 3,
                vehicles: vec![2, 4]
            }]
        );
    }

    #[test]
    fn no_conflict_across_distinct_subframes() {
        let g = grid(3, 1);
        let s = Scenario::new(g, 3, vec![vec![0, 1, 2]]).unwrap();
        let mut a = Allocation::empty(3);
        for (v, l) in [(0, 1), (1, 2), (2, 3)] {
            a.grant(v, Grant { subframe: l, subchannel: 1 }).unwrap();
        }
        assert!(find_conflicts(&a, &s).unwrap().is_empty());
    }

    #[test]
    fn shared_subframe_without_shared_cluster_is_fine() {
        let g = grid(2, 2);
        let s = Scenario::new(g, 2, vec![vec![0], vec![1]]).unwrap();
        let mut a = Allocation::empty(2);
        a.grant(0, Grant { subframe: 1, subchannel: 1 }).unwrap();
        a.grant(1, Grant { subframe: 1, subchannel: 2 }).unwrap();
        assert!(find_conflicts(&a, &s).unwrap().is_empty());
    }

    #[test]
    fn conflict_check_rejects_unknown_vehicle() {
        let g = grid(2, 1);
        let s = Scenario::new(g, 2, vec![vec![0, 1]]).unwrap();
        let mut a = Allocation::empty(5);
        a.grant(4, Grant { subframe: 1, subchannel: 1 }).unwrap();
        assert!(matches!(
            find_conflicts(&a, &s),
            Err(Error::UnknownVehicle(4))
        ));
    }

    #[test]
    fn allocation_partitions_vehicles() {
        let mut a = Allocation::empty(4);
        a.grant(2, Grant { subframe: 1, subchannel: 1 }).unwrap();
        assert_eq!(a.unassigned(), vec![0, 1, 3]);
        assert_eq!(a.granted_count(), 1);
        assert_eq!(a.unassigned_count(), 3);
        // double grant is a caller bug
        assert!(a.grant(2, Grant { subframe: 2, subchannel: 1 }).is_err());
    }

    #[test]
    fn scenario_toml_round_trip() {
        let g = grid(3, 2);
        let s = Scenario::new(g, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let text = s.to_toml_string().unwrap();
        let back = Scenario::from_toml_str(&text).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn allocation_csv_round_trip() {
        let mut a = Allocation::empty(6);
        a.grant(0, Grant { subframe: 2, subchannel: 1 }).unwrap();
        a.grant(4, Grant { subframe: 1, subchannel: 3 }).unwrap();
        let text = a.to_csv_string();
        let back = Allocation::from_csv_str(&text, 6).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn occupancy_tracks_shared_vehicles() {
        let g = grid(3, 1);
        let s = Scenario::new(g, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let mut occ = SubframeOccupancy::new(&s);
        assert!(occ.usable_by(&s, 2, 1));
        // vehicle 1 sits in both clusters, so its grant blocks both
        occ.occupy(&s, 1, 1);
        assert!(!occ.usable_by(&s, 0, 1));
        assert!(!occ.usable_by(&s, 2, 1));
        assert!(occ.usable_by(&s, 0, 2));
        occ.release(&s, 1, 1);
        assert!(occ.usable_by(&s, 2, 1));
    }
}
