//! Experiment configuration, scenario generation and Monte Carlo runs.
//!
//! A run is fully determined by its config file: every trial's tensor seed
//! is derived from the master seed with a counter-based split, so trials are
//! independent, order-insensitive, and reproducible. Result tables are CSV
//! with fixed headers; the run manifest echoes the config so a results
//! directory is self-describing.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::allocator::allocate;
use crate::baselines::{exhaustive_global, greedy, random_alloc};
use crate::channel::{sample_cost_tensor, ChannelConfig, CostTensor};
use crate::error::{Error, Result};
use crate::grid::{Allocation, ResourceGrid, Scenario, DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ,
    DEFAULT_SUBFRAME_DURATION_MS};
use crate::metrics::{summarize, RateSummary};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Fixed header of the per-trial results table.
pub const TRIALS_CSV_HEADER: &str = "algo,trial,N,highest,mean,worst,stddev,unassigned";
/// Fixed header of the aggregated results table (means over trials).
pub const SUMMARY_CSV_HEADER: &str = "algo,N,trials,highest,mean,worst,stddev,unassigned";
/// Fixed header of the N-sweep table.
pub const SWEEP_CSV_HEADER: &str = "algo,N,trials,mean_worst";

/// The algorithms an experiment can exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoKind {
    Exhaustive,
    Hierarchical,
    Greedy,
    Random,
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 4] = [
        AlgoKind::Exhaustive,
        AlgoKind::Hierarchical,
        AlgoKind::Greedy,
        AlgoKind::Random,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgoKind::Exhaustive => "exhaustive",
            AlgoKind::Hierarchical => "hierarchical",
            AlgoKind::Greedy => "greedy",
            AlgoKind::Random => "random",
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exhaustive" => Ok(AlgoKind::Exhaustive),
            "hierarchical" | "proposed" => Ok(AlgoKind::Hierarchical),
            "greedy" => Ok(AlgoKind::Greedy),
            "random" => Ok(AlgoKind::Random),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm '{other}' (expected exhaustive|hierarchical|greedy|random)"
            ))),
        }
    }
}

/// Grid dimensions as written in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub subframes: usize,
    pub subchannels: usize,
    #[serde(default = "default_duration")]
    pub subframe_duration_ms: f64,
    #[serde(default = "default_bandwidth")]
    pub subchannel_bandwidth_mhz: f64,
}

fn default_duration() -> f64 {
    DEFAULT_SUBFRAME_DURATION_MS
}

fn default_bandwidth() -> f64 {
    DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ
}

impl GridSpec {
    pub fn to_grid(self) -> Result<ResourceGrid> {
        ResourceGrid::with_cell(
            self.subframes,
            self.subchannels,
            self.subframe_duration_ms,
            self.subchannel_bandwidth_mhz,
        )
    }
}

/// Chain cluster topology: `count` clusters, adjacent pairs sharing vehicles.
///
/// With explicit `sizes`, adjacent clusters `j` and `j+1` share
/// `ceil(overlap_fraction * min(size_j, size_{j+1}))` vehicles and the fleet
/// size is implied. Without `sizes`, near-uniform sizes are derived for each
/// requested fleet size (see [`ChainPlan::for_fleet`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub count: usize,
    pub overlap_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
}

/// Channel parameters as written in config files (seeds come from the
/// master seed, not the channel section).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    #[serde(default = "default_bandwidth")]
    pub bandwidth_mhz: f64,
    pub sinr_db_mean: f64,
    pub sinr_db_stddev: f64,
    #[serde(default)]
    pub frequency_correlation: f64,
}

impl ChannelSpec {
    pub fn to_config(self, seed: u64) -> ChannelConfig {
        ChannelConfig {
            bandwidth_mhz: self.bandwidth_mhz,
            sinr_db_mean: self.sinr_db_mean,
            sinr_db_stddev: self.sinr_db_stddev,
            frequency_correlation: self.frequency_correlation,
            seed,
        }
    }
}

fn default_exhaustive_budget() -> u64 {
    5_000_000
}

/// A complete, reproducible experiment description.
///
/// Scalar fields precede the nested tables so the TOML form serializes
/// cleanly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub version: u32,
    pub seed: u64,
    pub trials: usize,
    #[serde(default = "default_exhaustive_budget")]
    pub exhaustive_budget: u64,
    pub algos: Vec<AlgoKind>,
    /// Fleet sizes to sweep; ignored when `clusters.sizes` is explicit.
    pub fleet: Vec<usize>,
    pub grid: GridSpec,
    pub clusters: ClusterSpec,
    pub channel: ChannelSpec,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported config version {} (expected {CONFIG_SCHEMA_VERSION})",
                self.version
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if self.algos.is_empty() {
            return Err(Error::InvalidConfig("algos must not be empty".into()));
        }
        if self.clusters.count == 0 {
            return Err(Error::InvalidConfig("clusters.count must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.clusters.overlap_fraction) {
            return Err(Error::InvalidConfig(format!(
                "overlap_fraction must lie in [0, 1], got {}",
                self.clusters.overlap_fraction
            )));
        }
        if self.clusters.sizes.is_none() && self.fleet.is_empty() {
            return Err(Error::InvalidConfig(
                "either fleet sizes or explicit cluster sizes are required".into(),
            ));
        }
        self.grid.to_grid()?;
        self.channel.to_config(0).validate()?;
        // fail fast on unsatisfiable topologies
        for &n in self.fleet_points()?.iter() {
            let plan = self.chain_plan(n)?;
            debug_assert_eq!(plan.fleet_size(), n);
        }
        Ok(())
    }

    /// The fleet sizes this config runs: explicit cluster sizes imply a
    /// single point, otherwise each entry of `fleet`.
    pub fn fleet_points(&self) -> Result<Vec<usize>> {
        match &self.clusters.sizes {
            Some(sizes) => {
                let plan = ChainPlan::from_sizes(
                    sizes,
                    self.clusters.overlap_fraction,
                    self.grid.subframes,
                )?;
                Ok(vec![plan.fleet_size()])
            }
            None => Ok(self.fleet.clone()),
        }
    }

    fn chain_plan(&self, fleet: usize) -> Result<ChainPlan> {
        match &self.clusters.sizes {
            Some(sizes) => {
                ChainPlan::from_sizes(sizes, self.clusters.overlap_fraction, self.grid.subframes)
            }
            None => ChainPlan::for_fleet(
                fleet,
                self.clusters.count,
                self.clusters.overlap_fraction,
                self.grid.subframes,
            ),
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

/// SplitMix64 finalizer used for counter-based seed derivation: child seeds
/// depend only on `(root, counter)`, never on draw order.
pub fn derive_seed(root: u64, counter: u64) -> u64 {
    let mut z = root ^ counter.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the tensor drawn for `(fleet, trial)`.
pub fn tensor_seed(master: u64, fleet: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(master, fleet as u64), 2 * trial as u64)
}

/// Seed the random baseline uses for `(fleet, trial)`.
pub fn baseline_seed(master: u64, fleet: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(master, fleet as u64), 2 * trial as u64 + 1)
}

/// Resolved chain topology: cluster sizes plus the shared-vehicle count of
/// each adjacent pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPlan {
    pub sizes: Vec<usize>,
    pub shared: Vec<usize>,
}

impl ChainPlan {
    /// Plan from explicit sizes: adjacent pair `(j, j+1)` shares
    /// `ceil(overlap * min(sizes[j], sizes[j+1]))` vehicles.
    pub fn from_sizes(sizes: &[usize], overlap: f64, subframes: usize) -> Result<ChainPlan> {
        if sizes.is_empty() {
            return Err(Error::InvalidConfig("cluster sizes must not be empty".into()));
        }
        let shared: Vec<usize> = sizes
            .windows(2)
            .map(|w| (overlap * w[0].min(w[1]) as f64).ceil() as usize)
            .collect();
        let plan = ChainPlan {
            sizes: sizes.to_vec(),
            shared,
        };
        plan.check(subframes)?;
        Ok(plan)
    }

    /// Plan for a target fleet size with near-uniform clusters.
    ///
    /// Picks the smallest uniform size whose chain covers the fleet, then
    /// sheds surplus vehicles one per cluster from the tail. Shared counts
    /// stay at `ceil(overlap * uniform_size)` so the fleet size lands
    /// exactly on target.
    pub fn for_fleet(fleet: usize, count: usize, overlap: f64, subframes: usize) -> Result<ChainPlan> {
        if fleet == 0 {
            return Err(Error::InvalidConfig("fleet size must be >= 1".into()));
        }
        if count == 1 {
            let plan = ChainPlan {
                sizes: vec![fleet],
                shared: Vec::new(),
            };
            plan.check(subframes)?;
            return Ok(plan);
        }
        let shared_of = |size: usize| ((overlap * size as f64).ceil() as usize).min(size);
        let distinct = |size: usize| count * size - (count - 1) * shared_of(size);
        // middle clusters host a shared set on each side
        let max_degree = if count >= 3 { 2 } else { 1 };
        let hosts = |size: usize| size >= max_degree * shared_of(size);
        let size = (1..=subframes)
            .find(|&s| hosts(s) && distinct(s) >= fleet)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "no chain of {count} clusters (overlap {overlap}) over {subframes} subframes reaches {fleet} vehicles"
                ))
            })?;
        let shared = shared_of(size);
        let mut sizes = vec![size; count];
        let mut surplus = distinct(size) - fleet;
        // one vehicle per cluster per pass, starting from the tail
        while surplus > 0 {
            let before = surplus;
            for j in (0..count).rev() {
                if surplus == 0 {
                    break;
                }
                let degree = if j == 0 || j == count - 1 { 1 } else { 2 };
                if sizes[j] > (degree * shared).max(1) {
                    sizes[j] -= 1;
                    surplus -= 1;
                }
            }
            if surplus == before {
                return Err(Error::InvalidConfig(format!(
                    "cannot shrink chain of {count} clusters (overlap {overlap}) to {fleet} vehicles"
                )));
            }
        }
        let plan = ChainPlan {
            sizes,
            shared: vec![shared; count - 1],
        };
        plan.check(subframes)?;
        Ok(plan)
    }

    fn check(&self, subframes: usize) -> Result<()> {
        for (j, &size) in self.sizes.iter().enumerate() {
            if size == 0 {
                return Err(Error::InvalidConfig(format!("cluster {j} has size 0")));
            }
            if size > subframes {
                return Err(Error::InvalidConfig(format!(
                    "cluster {j} has {size} members but only {subframes} subframes"
                )));
            }
            let left = if j > 0 { self.shared[j - 1] } else { 0 };
            let right = if j < self.shared.len() { self.shared[j] } else { 0 };
            if left + right > size {
                return Err(Error::InvalidConfig(format!(
                    "cluster {j} of size {size} cannot host {left}+{right} shared vehicles"
                )));
            }
        }
        Ok(())
    }

    /// Distinct vehicles across the chain.
    pub fn fleet_size(&self) -> usize {
        self.sizes.iter().sum::<usize>() - self.shared.iter().sum::<usize>()
    }

    /// Materializes rosters with dense vehicle ids. Cluster `j+1` inherits
    /// the last `shared[j]` vehicles that first appeared in cluster `j`.
    pub fn rosters(&self) -> Vec<Vec<usize>> {
        let mut rosters: Vec<Vec<usize>> = Vec::with_capacity(self.sizes.len());
        let mut next_id = 0usize;
        let mut carry: Vec<usize> = Vec::new();
        for (j, &size) in self.sizes.iter().enumerate() {
            let mut members = carry.clone();
            let fresh_count = size - members.len();
            let fresh: Vec<usize> = (next_id..next_id + fresh_count).collect();
            next_id += fresh_count;
            members.extend_from_slice(&fresh);
            carry = if j < self.shared.len() {
                fresh[fresh.len() - self.shared[j]..].to_vec()
            } else {
                Vec::new()
            };
            rosters.push(members);
        }
        rosters
    }
}

/// Builds the trial's scenario and capacity tensor.
///
/// The cluster topology is a deterministic function of the config and fleet
/// size; the tensor seed is derived from `(master seed, fleet, trial)`, so
/// the pair is reproducible and trials are independent.
pub fn generate_scenario(
    config: &ExperimentConfig,
    fleet: usize,
    trial: usize,
) -> Result<(Scenario, CostTensor)> {
    let plan = config.chain_plan(fleet)?;
    let scenario = Scenario::new(config.grid.to_grid()?, plan.fleet_size(), plan.rosters())?;
    let channel = config
        .channel
        .to_config(tensor_seed(config.seed, fleet, trial));
    let tensor = sample_cost_tensor(&scenario, &channel)?;
    Ok((scenario, tensor))
}

/// Runs one algorithm on one instance. `Ok(None)` means the exhaustive
/// search refused its budget.
pub fn run_algorithm(
    algo: AlgoKind,
    scenario: &Scenario,
    costs: &CostTensor,
    seed: u64,
    exhaustive_budget: u64,
) -> Result<Option<Allocation>> {
    match algo {
        AlgoKind::Exhaustive => match exhaustive_global(scenario, costs, exhaustive_budget) {
            Ok((allocation, _)) => Ok(Some(allocation)),
            Err(Error::BudgetExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        },
        AlgoKind::Hierarchical => Ok(Some(allocate(scenario, costs)?.allocation)),
        AlgoKind::Greedy => Ok(Some(greedy(scenario, costs)?)),
        AlgoKind::Random => Ok(Some(random_alloc(scenario, costs, seed)?)),
    }
}

/// One row of the per-trial table.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub algo: AlgoKind,
    pub trial: usize,
    pub fleet: usize,
    pub summary: RateSummary,
}

/// One row of the aggregate table: per-trial statistics averaged over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algo: AlgoKind,
    pub fleet: usize,
    pub trials: usize,
    pub mean_highest: f64,
    pub mean_rate: f64,
    pub mean_worst: f64,
    pub mean_stddev: f64,
    pub mean_unassigned: f64,
}

/// In-memory result of [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub trial_rows: Vec<TrialRow>,
    pub summary_rows: Vec<SummaryRow>,
    /// Human-readable notes, e.g. skipped exhaustive runs.
    pub warnings: Vec<String>,
}

impl RunResult {
    pub fn trials_csv(&self) -> String {
        let mut out = String::from(TRIALS_CSV_HEADER);
        out.push('\n');
        for row in &self.trial_rows {
            let s = &row.summary;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.algo,
                row.trial,
                row.fleet,
                s.highest_rate,
                s.mean_rate,
                s.worst_rate,
                s.rate_stddev,
                s.unassigned_count
            ));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from(SUMMARY_CSV_HEADER);
        out.push('\n');
        for row in &self.summary_rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.algo,
                row.fleet,
                row.trials,
                row.mean_highest,
                row.mean_rate,
                row.mean_worst,
                row.mean_stddev,
                row.mean_unassigned
            ));
        }
        out
    }
}

/// Executes the full (fleet x trial x algorithm) grid of an experiment.
///
/// Rows are emitted sorted by fleet point (config order), then trial index,
/// then the config's algorithm order, so repeated runs of one config are
/// byte-identical. An exhaustive run that exceeds its node budget is skipped
/// with a warning; other algorithms proceed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunResult> {
    config.validate()?;
    let fleet_points = config.fleet_points()?;
    let mut trial_rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut warnings = Vec::new();
    for &fleet in &fleet_points {
        let mut per_algo: Vec<(AlgoKind, Vec<RateSummary>)> =
            config.algos.iter().map(|&a| (a, Vec::new())).collect();
        for trial in 0..config.trials {
            let (scenario, tensor) = generate_scenario(config, fleet, trial)?;
            for (algo, summaries) in per_algo.iter_mut() {
                let allocation = run_algorithm(
                    *algo,
                    &scenario,
                    &tensor,
                    baseline_seed(config.seed, fleet, trial),
                    config.exhaustive_budget,
                )?;
                match allocation {
                    Some(a) => {
                        let summary = summarize(&a, &tensor)?;
                        trial_rows.push(TrialRow {
                            algo: *algo,
                            trial,
                            fleet,
                            summary,
                        });
                        summaries.push(summary);
                    }
                    None => warnings.push(format!(
                        "exhaustive search skipped at N={fleet} trial {trial}: budget {} exceeded",
                        config.exhaustive_budget
                    )),
                }
            }
        }
        for (algo, summaries) in per_algo {
            if summaries.is_empty() {
                continue;
            }
            let count = summaries.len() as f64;
            summary_rows.push(SummaryRow {
                algo,
                fleet,
                trials: summaries.len(),
                mean_highest: summaries.iter().map(|s| s.highest_rate).sum::<f64>() / count,
                mean_rate: summaries.iter().map(|s| s.mean_rate).sum::<f64>() / count,
                mean_worst: summaries.iter().map(|s| s.worst_rate).sum::<f64>() / count,
                mean_stddev: summaries.iter().map(|s| s.rate_stddev).sum::<f64>() / count,
                mean_unassigned: summaries.iter().map(|s| s.unassigned_count as f64).sum::<f64>()
                    / count,
            });
        }
    }
    // keep trial rows grouped by fleet point, then trial, then algo order
    Ok(RunResult {
        trial_rows,
        summary_rows,
        warnings,
    })
}

/// Mean worst-rate per (algorithm, fleet size): the overload-trend table.
pub fn worst_rate_curve(config: &ExperimentConfig) -> Result<Vec<SweepPoint>> {
    let result = run_experiment(config)?;
    Ok(result
        .summary_rows
        .iter()
        .map(|row| SweepPoint {
            algo: row.algo,
            fleet: row.fleet,
            trials: row.trials,
            mean_worst: row.mean_worst,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub algo: AlgoKind,
    pub fleet: usize,
    pub trials: usize,
    pub mean_worst: f64,
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.algo, p.fleet, p.trials, p.mean_worst
        ));
    }
    out
}

/// Artifacts written by [`write_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub trials_csv: std::path::PathBuf,
    pub summary_csv: std::path::PathBuf,
    pub manifest: std::path::PathBuf,
}

/// Writes `trials.csv`, `summary.csv` and `manifest.toml` into `out_dir`.
/// The manifest echoes the resolved config plus the crate version; nothing
/// time- or host-dependent is recorded, so identical runs produce identical
/// bytes.
pub fn write_run(config: &ExperimentConfig, result: &RunResult, out_dir: &Path) -> Result<RunArtifacts> {
    std::fs::create_dir_all(out_dir)?;
    let trials_csv = out_dir.join("trials.csv");
    let summary_csv = out_dir.join("summary.csv");
    let manifest = out_dir.join("manifest.toml");
    std::fs::write(&trials_csv, result.trials_csv())?;
    std::fs::write(&summary_csv, result.summary_csv())?;
    let manifest_text = format!(
        "generator = \"sidelink-core {}\"\nseed = {}\n\n[config]\n{}",
        env!("CARGO_PKG_VERSION"),
        config.seed,
        indent_toml(&config.to_toml_string()?)
    );
    std::fs::write(&manifest, manifest_text)?;
    Ok(RunArtifacts {
        trials_csv,
        summary_csv,
        manifest,
    })
}

// Re-nests a top-level TOML document under a [config] table.
fn indent_toml(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        if line.starts_with('[') && line.ends_with(']') {
            out.push_str(&format!("[config.{}\n", &line[1..]));
        } else {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}
