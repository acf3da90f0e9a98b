//! Monte Carlo sweeps over the per-link dephasing probability.

use serde::{Deserialize, Serialize};

use crate::channels::{apply_links, ChannelConfig};
use crate::error::{Error, Result};
use crate::lattice::HoneycombTorus;
use crate::negativity::{log_purity, negativity, ten, HalfInt};
use crate::pauli::{color_code_state, StabilizerState};
use crate::region::{ComplexSpec, Region, RegionPreset, TenComplex};

pub const OBS_TEN: &str = "ten";
pub const OBS_NEGATIVITY: &str = "negativity";
pub const OBS_PURITY: &str = "purity";
/// Region label used for whole-system observables.
pub const SYSTEM: &str = "system";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub lx: usize,
    pub ly: usize,
    pub p_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub complexes: Vec<ComplexSpec>,
    #[serde(default)]
    pub regions: Vec<RegionPreset>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if self.p_grid.is_empty() {
            return Err(Error::InvalidArgument("empty p grid".into()));
        }
        if self.p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidArgument("p values must lie in [0, 1]".into()));
        }
        if self.p_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("p grid must be sorted".into()));
        }
        Ok(())
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Seed of sample `index`; shared by every p so neighbouring grid points see correlated noise.
pub fn sample_seed(base: u64, index: usize) -> u64 {
    base ^ index as u64
}

/// Observables of one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub p: f64,
    pub sample: usize,
    pub negativity: Vec<(String, HalfInt)>,
    pub ten: Vec<(String, HalfInt)>,
    pub log_purity: usize,
}

/// One line of `records.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub p: f64,
    pub sample: usize,
    pub observable: String,
    pub region: String,
    pub value: f64,
}

impl SweepRecord {
    pub fn rows(&self) -> Vec<RecordRow> {
        let row = |observable: &str, region: &str, value: f64| RecordRow {
            p: self.p,
            sample: self.sample,
            observable: observable.to_string(),
            region: region.to_string(),
            value,
        };
        let mut out = Vec::new();
        for (name, v) in &self.ten {
            out.push(row(OBS_TEN, name, v.to_f64()));
        }
        for (name, v) in &self.negativity {
            out.push(row(OBS_NEGATIVITY, name, v.to_f64()));
        }
        out.push(row(OBS_PURITY, SYSTEM, self.log_purity as f64));
        out
    }
}

/// Per-p summary of one observable. The `scaled` columns divide by `scale`:
/// the qubit count for purity, `|∂A| - 2` for region negativity, 1 for TEN.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub p: f64,
    pub observable: String,
    pub region: String,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    pub n: usize,
    pub scale: f64,
    pub mean_scaled: f64,
    pub variance_scaled: f64,
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub aggregates: Vec<AggregateRow>,
}

impl SweepOutput {
    pub fn aggregate(&self, p: f64, observable: &str, region: &str) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|a| a.p == p && a.observable == observable && a.region == region)
    }
}

/// Geometry and initial state shared by every trajectory of a sweep.
pub struct SweepContext {
    pub torus: HoneycombTorus,
    pub fresh: StabilizerState,
    pub regions: Vec<Region>,
    pub complexes: Vec<TenComplex>,
    pub channel: ChannelConfig,
}

impl SweepContext {
    pub fn new(cfg: &SweepConfig) -> Result<Self> {
        cfg.validate()?;
        let torus = HoneycombTorus::new(cfg.lx, cfg.ly)?;
        let fresh = color_code_state(&torus);
        // build the membership basis once, before workers clone the state
        fresh.basis();
        let regions = cfg
            .regions
            .iter()
            .map(|r| r.build(&torus))
            .collect::<Result<Vec<_>>>()?;
        let complexes = cfg
            .complexes
            .iter()
            .map(|c| c.build(&torus))
            .collect::<Result<Vec<_>>>()?;
        let channel = ChannelConfig::red_links(&torus, 0.0, cfg.seed)?;
        Ok(SweepContext {
            torus,
            fresh,
            regions,
            complexes,
            channel,
        })
    }

    pub fn trajectory(&self, p: f64, sample: usize, base_seed: u64) -> Result<SweepRecord> {
        let cfg = ChannelConfig {
            p,
            seed: sample_seed(base_seed, sample),
            link_set: self.channel.link_set.clone(),
        };
        let state = apply_links(&self.fresh, &self.torus, &cfg.selected_links());
        let negativity = self
            .regions
            .iter()
            .map(|r| Ok((r.name.clone(), negativity(&state, r)?)))
            .collect::<Result<Vec<_>>>()?;
        let ten = self
            .complexes
            .iter()
            .map(|c| Ok((c.name.clone(), ten(&state, c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepRecord {
            p,
            sample,
            negativity,
            ten,
            log_purity: log_purity(&state),
        })
    }

    fn scale(&self, observable: &str, region: &str) -> f64 {
        match observable {
            OBS_PURITY => self.torus.n_vertices() as f64,
            OBS_NEGATIVITY => self
                .regions
                .iter()
                .find(|r| r.name == region)
                .map_or(1.0, |r| (r.boundary_honeycomb as f64 - 2.0).max(1.0)),
            _ => 1.0,
        }
    }
}

/// Runs every `(p, sample)` trajectory and aggregates per p.
///
/// Output is identical for any worker count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let ctx = SweepContext::new(cfg)?;
    let jobs: Vec<(f64, usize)> = cfg
        .p_grid
        .iter()
        .flat_map(|&p| (0..cfg.samples).map(move |s| (p, s)))
        .collect();
    let records = run_jobs(&ctx, &jobs, cfg.seed)?;
    let aggregates = aggregate(&ctx, cfg, &records);
    Ok(SweepOutput {
        records,
        aggregates,
    })
}

#[cfg(feature = "parallel")]
fn run_jobs(ctx: &SweepContext, jobs: &[(f64, usize)], seed: u64) -> Result<Vec<SweepRecord>> {
    use rayon::prelude::*;
    jobs.par_iter()
        .map(|&(p, s)| ctx.trajectory(p, s, seed))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(ctx: &SweepContext, jobs: &[(f64, usize)], seed: u64) -> Result<Vec<SweepRecord>> {
    jobs.iter()
        .map(|&(p, s)| ctx.trajectory(p, s, seed))
        .collect()
}

/// Sequential reference path, available regardless of features.
pub fn run_sweep_sequential(cfg: &SweepConfig) -> Result<SweepOutput> {
    let ctx = SweepContext::new(cfg)?;
    let mut records = Vec::new();
    for &p in &cfg.p_grid {
        for s in 0..cfg.samples {
            records.push(ctx.trajectory(p, s, cfg.seed)?);
        }
    }
    let aggregates = aggregate(&ctx, cfg, &records);
    Ok(SweepOutput {
        records,
        aggregates,
    })
}

/// Mean, unbiased variance and standard error.
pub fn summarize(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let variance = if n > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    (mean, variance, (variance / n as f64).sqrt())
}

fn aggregate(ctx: &SweepContext, cfg: &SweepConfig, records: &[SweepRecord]) -> Vec<AggregateRow> {
    let mut out = Vec::new();
    for (pi, &p) in cfg.p_grid.iter().enumerate() {
        let chunk = &records[pi * cfg.samples..(pi + 1) * cfg.samples];
        let rows: Vec<RecordRow> = chunk.iter().flat_map(SweepRecord::rows).collect();
        let mut keys: Vec<(String, String)> = Vec::new();
        for r in &rows {
            let k = (r.observable.clone(), r.region.clone());
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        for (observable, region) in keys {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.observable == observable && r.region == region)
                .map(|r| r.value)
                .collect();
            let (mean, variance, stderr) = summarize(&values);
            let scale = ctx.scale(&observable, &region);
            out.push(AggregateRow {
                p,
                observable,
                region,
                mean,
                variance,
                stderr,
                n: values.len(),
                scale,
                mean_scaled: mean / scale,
                variance_scaled: variance / scale,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Color;

    fn cfg(p_grid: Vec<f64>, samples: usize) -> SweepConfig {
        SweepConfig {
            lx: 12,
            ly: 12,
            p_grid,
            samples,
            seed: 5,
            complexes: vec![ComplexSpec {
                size: 7,
                center: Color::Red,
            }],
            regions: vec![RegionPreset::Fig2Parallelogram],
        }
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 0.5, 21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[20], 0.5);
        assert!((g[1] - 0.025).abs() < 1e-15);
        assert_eq!(linspace(0.3, 1.0, 1), vec![0.3]);
    }

    #[test]
    fn summarize_matches_hand_computation() {
        let (m, v, se) = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-12);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
        assert_eq!(summarize(&[7.0]), (7.0, 0.0, 0.0));
    }

    #[test]
    fn endpoints_have_zero_variance() {
        let out = run_sweep(&cfg(vec![0.0, 1.0], 3)).unwrap();
        let ten0 = out.aggregate(0.0, OBS_TEN, "ten-7-red").unwrap();
        assert_eq!((ten0.mean, ten0.variance, ten0.n), (2.0, 0.0, 3));
        let ten1 = out.aggregate(1.0, OBS_TEN, "ten-7-red").unwrap();
        assert_eq!((ten1.mean, ten1.variance), (1.0, 0.0));
        let neg = out
            .aggregate(0.0, OBS_NEGATIVITY, "fig2-parallelogram")
            .unwrap();
        assert_eq!(neg.mean, 8.0);
        assert_eq!(neg.scale, 8.0);
        let pur = out.aggregate(1.0, OBS_PURITY, SYSTEM).unwrap();
        assert_eq!(pur.mean, 288.0 / 6.0 + 1.0);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let c = cfg(vec![0.1, 0.3], 6);
        let a = run_sweep(&c).unwrap();
        let b = run_sweep_sequential(&c).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.aggregates, b.aggregates);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_sweep(&cfg(vec![0.5, 0.1], 2)).is_err());
        assert!(run_sweep(&cfg(vec![1.5], 2)).is_err());
        assert!(run_sweep(&cfg(vec![0.5], 0)).is_err());
        let mut big = cfg(vec![0.0], 1);
        big.complexes[0].size = 37;
        assert!(matches!(run_sweep(&big), Err(Error::RegionTooLarge(_))));
    }
}
