//! Capacity weights: the edge weights of the vehicle/resource bipartite graph.
//!
//! Each tensor entry is the Shannon rate `B * log2(1 + SINR)` a vehicle would
//! achieve on one resource cell, in Mbit/s (bandwidth carried in MHz). The
//! synthetic generator draws log-normal SINR per cell with optional
//! correlation across the subchannels of a subframe; it exists because solver
//! behaviour must be exercised under *some* channel, and it is a pluggable
//! seam rather than a propagation model. Tensors can also be loaded verbatim
//! from a text file.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Scenario, DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ};

/// Shannon rate in Mbit/s for a linear SINR over `bandwidth_mhz` MHz.
pub fn capacity_from_sinr(sinr: f64, bandwidth_mhz: f64) -> Result<f64> {
    if !(bandwidth_mhz > 0.0) {
        return Err(Error::NonPositiveBandwidth(bandwidth_mhz));
    }
    if !(sinr >= 0.0) {
        return Err(Error::NegativeSinr(sinr));
    }
    Ok(bandwidth_mhz * (1.0 + sinr).log2())
}

/// Parameters of the synthetic SINR draw.
///
/// SINR in dB is Gaussian: `mean + stddev * x`, so the linear SINR is
/// log-normal. Within one (vehicle, subframe), draws across the K
/// subchannels share a common component weighted by
/// `frequency_correlation`; 0 means independent cells, 1 makes all K cells
/// of a subframe identical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub bandwidth_mhz: f64,
    pub sinr_db_mean: f64,
    pub sinr_db_stddev: f64,
    pub frequency_correlation: f64,
    pub seed: u64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            bandwidth_mhz: DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ,
            sinr_db_mean: 15.0,
            sinr_db_stddev: 6.0,
            frequency_correlation: 0.0,
            seed: 0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_mhz > 0.0) {
            return Err(Error::NonPositiveBandwidth(self.bandwidth_mhz));
        }
        if !(self.sinr_db_stddev >= 0.0) {
            return Err(Error::InvalidChannel(format!(
                "sinr_db_stddev must be >= 0, got {}",
                self.sinr_db_stddev
            )));
        }
        if !(0.0..=1.0).contains(&self.frequency_correlation) {
            return Err(Error::InvalidChannel(format!(
                "frequency_correlation must lie in [0, 1], got {}",
                self.frequency_correlation
            )));
        }
        Ok(())
    }
}

/// Per-cell capacity weights, shape vehicles x subframes x subchannels.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTensor {
    vehicles: usize,
    subframes: usize,
    subchannels: usize,
    bandwidth_mhz: f64,
    // row-major [vehicle][subframe][subchannel]
    values: Vec<f64>,
}

impl CostTensor {
    /// Builds a tensor from row-major values, checking shape and entry range.
    pub fn from_values(
        vehicles: usize,
        subframes: usize,
        subchannels: usize,
        bandwidth_mhz: f64,
        values: Vec<f64>,
    ) -> Result<Self> {
        if vehicles == 0 || subframes == 0 || subchannels == 0 {
            return Err(Error::ShapeMismatch {
                vehicles,
                subframes,
                subchannels,
                expected_vehicles: vehicles.max(1),
                expected_subframes: subframes.max(1),
                expected_subchannels: subchannels.max(1),
            });
        }
        if values.len() != vehicles * subframes * subchannels {
            return Err(Error::InvalidConfig(format!(
                "expected {} tensor entries, got {}",
                vehicles * subframes * subchannels,
                values.len()
            )));
        }
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                let vehicle = idx / (subframes * subchannels);
                let rem = idx % (subframes * subchannels);
                return Err(Error::InvalidTensorEntry {
                    vehicle,
                    subframe: rem / subchannels + 1,
                    subchannel: rem % subchannels + 1,
                    value: v,
                });
            }
        }
        Ok(Self {
            vehicles,
            subframes,
            subchannels,
            bandwidth_mhz,
            values,
        })
    }

    pub fn vehicles(&self) -> usize {
        self.vehicles
    }

    pub fn subframes(&self) -> usize {
        self.subframes
    }

    pub fn subchannels(&self) -> usize {
        self.subchannels
    }

    pub fn bandwidth_mhz(&self) -> f64 {
        self.bandwidth_mhz
    }

    /// Rate of `vehicle` on 1-based cell `(subframe, subchannel)`.
    /// Panics on out-of-range indices; use [`try_value`](Self::try_value)
    /// for unvalidated input.
    pub fn value(&self, vehicle: usize, subframe: usize, subchannel: usize) -> f64 {
        self.values[self.offset(vehicle, subframe, subchannel)]
    }

    pub fn try_value(&self, vehicle: usize, subframe: usize, subchannel: usize) -> Result<f64> {
        if vehicle >= self.vehicles {
            return Err(Error::UnknownVehicle(vehicle));
        }
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
        Ok(self.value(vehicle, subframe, subchannel))
    }

    /// Largest entry in a vehicle's row, with its 1-based cell.
    /// Ties break toward the lowest subframe, then subchannel.
    pub fn row_max(&self, vehicle: usize) -> (f64, usize, usize) {
        let mut best = (f64::NEG_INFINITY, 1, 1);
        for l in 1..=self.subframes {
            for k in 1..=self.subchannels {
                let v = self.value(vehicle, l, k);
                if v > best.0 {
                    best = (v, l, k);
                }
            }
        }
        best
    }

    pub fn matches_scenario(&self, scenario: &Scenario) -> Result<()> {
        let g = scenario.grid();
        if self.vehicles != scenario.vehicle_count()
            || self.subframes != g.subframes
            || self.subchannels != g.subchannels
        {
            return Err(Error::ShapeMismatch {
                vehicles: self.vehicles,
                subframes: self.subframes,
                subchannels: self.subchannels,
                expected_vehicles: scenario.vehicle_count(),
                expected_subframes: g.subframes,
                expected_subchannels: g.subchannels,
            });
        }
        Ok(())
    }

    fn offset(&self, vehicle: usize, subframe: usize, subchannel: usize) -> usize {
        (vehicle * self.subframes + (subframe - 1)) * self.subchannels + (subchannel - 1)
    }

    /// Writes the text form: header `N L K`, then `N*L` lines of `K`
    /// space-separated decimal values. The row for vehicle `i`, subframe `l`
    /// is line `i*L + l` (1-based, after the header). Values use Rust's
    /// shortest round-trip float formatting, so save/load is lossless.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.vehicles, self.subframes, self.subchannels)?;
        for i in 0..self.vehicles {
            for l in 1..=self.subframes {
                let mut line = String::new();
                for k in 1..=self.subchannels {
                    if k > 1 {
                        line.push(' ');
                    }
                    line.push_str(&format!("{}", self.value(i, l, k)));
                }
                writeln!(w, "{line}")?;
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        self.write_text(&mut file)
    }

    /// Parses the text form; `label` names the source in diagnostics.
    pub fn read_text<R: BufRead>(reader: R, label: &str) -> Result<Self> {
        let fail = |line: usize, msg: String| Error::TensorFormat {
            path: label.to_string(),
            line,
            msg,
        };
        let mut lines = reader.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| fail(1, "missing header line".into()))?;
        let header = header?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| fail(1, format!("bad header '{header}': {e}")))?;
        if dims.len() != 3 {
            return Err(fail(1, format!("header must be 'N L K', got '{header}'")));
        }
        let (n, l, k) = (dims[0], dims[1], dims[2]);
        let mut values = Vec::with_capacity(n * l * k);
        let mut rows = 0usize;
        for (idx, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if rows >= n * l {
                return Err(fail(idx + 1, format!("more than {} data rows", n * l)));
            }
            let mut cols = 0usize;
            for token in line.split_whitespace() {
                let v: f64 = token
                    .parse()
                    .map_err(|e| fail(idx + 1, format!("column {}: bad value '{token}': {e}", cols + 1)))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(fail(
                        idx + 1,
                        format!("column {}: entry {v} must be finite and >= 0", cols + 1),
                    ));
                }
                values.push(v);
                cols += 1;
            }
            if cols != k {
                return Err(fail(idx + 1, format!("expected {k} columns, got {cols}")));
            }
            rows += 1;
        }
        if rows != n * l {
            return Err(fail(0, format!("expected {} data rows, got {rows}", n * l)));
        }
        CostTensor::from_values(n, l, k, DEFAULT_SUBCHANNEL_BANDWIDTH_MHZ, values)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_text(BufReader::new(file), &path.display().to_string())
    }
}

/// Draws a capacity tensor for `scenario` from the synthetic SINR model.
///
/// Deterministic: the same `(scenario, config)` pair yields a bit-identical
/// tensor. Draw order is fixed — for each vehicle, for each subframe, one
/// shared standard normal followed by one idiosyncratic normal per
/// subchannel — so adding trailing subchannels never perturbs earlier cells
/// of the stream for a given (vehicle, subframe) pair.
pub fn sample_cost_tensor(scenario: &Scenario, config: &ChannelConfig) -> Result<CostTensor> {
    config.validate()?;
    let g = scenario.grid();
    let (n, l, k) = (scenario.vehicle_count(), g.subframes, g.subchannels);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let rho = config.frequency_correlation;
    let shared_w = rho.sqrt();
    let idio_w = (1.0 - rho).sqrt();
    let mut values = Vec::with_capacity(n * l * k);
    for _vehicle in 0..n {
        for _subframe in 0..l {
            let shared: f64 = rng.sample(StandardNormal);
            for _subchannel in 0..k {
                let idio: f64 = rng.sample(StandardNormal);
                let unit = shared_w * shared + idio_w * idio;
                let sinr_db = config.sinr_db_mean + config.sinr_db_stddev * unit;
                let sinr = 10f64.powf(sinr_db / 10.0);
                values.push(capacity_from_sinr(sinr, config.bandwidth_mhz)?);
            }
        }
    }
    CostTensor::from_values(n, l, k, config.bandwidth_mhz, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ResourceGrid;
    use approx::assert_relative_eq;

    fn scenario(n: usize, l: usize, k: usize) -> Scenario {
        // singleton clusters: membership is irrelevant to sampling
        let clusters = (0..n).map(|v| vec![v]).collect();
        Scenario::new(ResourceGrid::new(l, k).unwrap(), n, clusters).unwrap()
    }

    #[test]
    fn capacity_known_points() {
        assert_eq!(capacity_from_sinr(0.0, 1.26).unwrap(), 0.0);
        assert_relative_eq!(capacity_from_sinr(1.0, 1.26).unwrap(), 1.26, max_relative = 1e-12);
        // 1.26 * log2(128) = 1.26 * 7
        assert_relative_eq!(capacity_from_sinr(127.0, 1.26).unwrap(), 8.82, max_relative = 1e-12);
    }

    #[test]
    fn capacity_rejects_bad_domain() {
        assert!(matches!(
            capacity_from_sinr(-0.5, 1.26),
            Err(Error::NegativeSinr(_))
        ));
        assert!(matches!(
            capacity_from_sinr(1.0, 0.0),
            Err(Error::NonPositiveBandwidth(_))
        ));
    }

    #[test]
    fn capacity_monotone_in_sinr_and_linear_in_bandwidth() {
        let mut prev = -1.0;
        for i in 0..50 {
            let sinr = i as f64 * 0.7;
            let c = capacity_from_sinr(sinr, 1.26).unwrap();
            assert!(c > prev);
            prev = c;
            let doubled = capacity_from_sinr(sinr, 2.52).unwrap();
            assert_relative_eq!(doubled, 2.0 * c, max_relative = 1e-12);
        }
    }

    #[test]
    fn degenerate_stddev_gives_constant_tensor() {
        let s = scenario(3, 2, 2);
        let cfg = ChannelConfig {
            sinr_db_mean: 0.0, // SINR = 1 everywhere
            sinr_db_stddev: 0.0,
            ..ChannelConfig::default()
        };
        let t = sample_cost_tensor(&s, &cfg).unwrap();
        for i in 0..3 {
            for l in 1..=2 {
                for k in 1..=2 {
                    assert_relative_eq!(t.value(i, l, k), 1.26, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_tensor() {
        let s = scenario(4, 3, 2);
        let cfg = ChannelConfig {
            seed: 99,
            frequency_correlation: 0.4,
            ..ChannelConfig::default()
        };
        let a = sample_cost_tensor(&s, &cfg).unwrap();
        let b = sample_cost_tensor(&s, &cfg).unwrap();
        assert_eq!(a, b);
        let c = sample_cost_tensor(&s, &ChannelConfig { seed: 100, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn full_correlation_equalizes_subchannels() {
        let s = scenario(3, 4, 3);
        let cfg = ChannelConfig {
            frequency_correlation: 1.0,
            seed: 7,
            ..ChannelConfig::default()
        };
        let t = sample_cost_tensor(&s, &cfg).unwrap();
        for i in 0..3 {
            for l in 1..=4 {
                let first = t.value(i, l, 1);
                for k in 2..=3 {
                    assert_eq!(t.value(i, l, k), first);
                }
            }
        }
    }

    #[test]
    fn tensor_text_round_trip_is_lossless() {
        let s = scenario(2, 3, 2);
        let cfg = ChannelConfig { seed: 5, ..ChannelConfig::default() };
        let t = sample_cost_tensor(&s, &cfg).unwrap();
        let mut buf = Vec::new();
        t.write_text(&mut buf).unwrap();
        let back = CostTensor::read_text(buf.as_slice(), "mem").unwrap();
        assert_eq!(t.vehicles(), back.vehicles());
        for i in 0..2 {
            for l in 1..=3 {
                for k in 1..=2 {
                    assert_eq!(t.value(i, l, k), back.value(i, l, k));
                }
            }
        }
    }

    #[test]
    fn tensor_load_diagnoses_bad_rows() {
        let text = "2 1 2\n1.0 2.0\n1.0 -3.0\n";
        let err = CostTensor::read_text(text.as_bytes(), "mem").unwrap_err();
        match err {
            Error::TensorFormat { line, msg, .. } => {
                assert_eq!(line, 3);
                assert!(msg.contains("column 2"), "{msg}");
            }
            other => panic!("unexpected error {other}"),
        }

        let short = "2 2 2\n1 2\n3 4\n";
        assert!(CostTensor::read_text(short.as_bytes(), "mem").is_err());

        let wide = "1 1 2\n1 2 3\n";
        assert!(CostTensor::read_text(wide.as_bytes(), "mem").is_err());
    }

    #[test]
    fn tensor_shape_check() {
        let s = scenario(2, 2, 2);
        let t = CostTensor::from_values(2, 2, 2, 1.26, vec![1.0; 8]).unwrap();
        assert!(t.matches_scenario(&s).is_ok());
        let wrong = CostTensor::from_values(3, 2, 2, 1.26, vec![1.0; 12]).unwrap();
        assert!(matches!(
            wrong.matches_scenario(&s),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn tensor_rejects_nan_and_negative() {
        assert!(CostTensor::from_values(1, 1, 2, 1.26, vec![1.0, f64::NAN]).is_err());
        assert!(CostTensor::from_values(1, 1, 2, 1.26, vec![1.0, -0.1]).is_err());
    }
}
