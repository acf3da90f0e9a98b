//! `records.csv`, `aggregates.csv` and `manifest.json` for a sweep directory.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::sweep::{AggregateRow, RecordRow, SweepConfig, SweepRecord};

pub const RECORDS_FILE: &str = "records.csv";
pub const AGGREGATES_FILE: &str = "aggregates.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub threads: Option<usize>,
    pub config: SweepConfig,
    /// Seconds since the Unix epoch; the only field that changes between identical runs.
    pub created_unix: u64,
}

impl Manifest {
    pub fn new(config: &SweepConfig, threads: Option<usize>) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            threads,
            config: config.clone(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

fn write_csv<T: Serialize>(
    path: &Path,
    rows: impl IntoIterator<Item = T>,
    header: &[&str],
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    // Written by hand so that empty files still carry the header.
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub const RECORD_COLUMNS: [&str; 5] = ["p", "sample", "observable", "region", "value"];
pub const AGGREGATE_COLUMNS: [&str; 10] = [
    "p",
    "observable",
    "region",
    "mean",
    "variance",
    "stderr",
    "n",
    "scale",
    "mean_scaled",
    "variance_scaled",
];

/// Writes the three result files into `dir`, creating it if needed.
pub fn write_results(
    dir: &Path,
    records: &[SweepRecord],
    aggregates: &[AggregateRow],
    manifest: &Manifest,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_csv(
        &dir.join(RECORDS_FILE),
        records.iter().flat_map(SweepRecord::rows),
        &RECORD_COLUMNS,
    )?;
    write_csv(&dir.join(AGGREGATES_FILE), aggregates, &AGGREGATE_COLUMNS)?;
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(manifest)?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::csv(path, e))
}

pub fn read_records(dir: &Path) -> Result<Vec<RecordRow>> {
    read_csv(&dir.join(RECORDS_FILE))
}

pub fn read_aggregates(dir: &Path) -> Result<Vec<AggregateRow>> {
    read_csv(&dir.join(AGGREGATES_FILE))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::sweep::run_sweep;
    use crate::lattice::Color;
    use crate::region::{ComplexSpec, RegionPreset};

    fn config() -> SweepConfig {
        SweepConfig {
            lx: 12,
            ly: 12,
            p_grid: vec![0.0, 0.2],
            samples: 4,
            seed: 21,
            complexes: vec![ComplexSpec {
                size: 7,
                center: Color::Blue,
            }],
            regions: vec![RegionPreset::Fig2Parallelogram],
        }
    }

    #[test]
    fn empty_results_have_headers_only() {
        let dir = tempfile::tempdir().unwrap();
        write_results(dir.path(), &[], &[], &Manifest::new(&config(), None)).unwrap();
        let rec = fs::read_to_string(dir.path().join(RECORDS_FILE)).unwrap();
        assert_eq!(rec, "p,sample,observable,region,value\n");
        let agg = fs::read_to_string(dir.path().join(AGGREGATES_FILE)).unwrap();
        assert_eq!(agg.lines().count(), 1);
        assert!(read_aggregates(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn round_trip() {
        let cfg = config();
        let out = run_sweep(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let manifest = Manifest::new(&cfg, Some(2));
        write_results(dir.path(), &out.records, &out.aggregates, &manifest).unwrap();
        assert_eq!(read_aggregates(dir.path()).unwrap(), out.aggregates);
        let rows: Vec<RecordRow> = out.records.iter().flat_map(SweepRecord::rows).collect();
        assert_eq!(read_records(dir.path()).unwrap(), rows);
        let m = read_manifest(dir.path()).unwrap();
        assert_eq!(m.seed, cfg.seed);
        assert_eq!(m, manifest);
    }

    #[test]
    fn csv_bodies_are_reproducible() {
        let cfg = config();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for d in [&a, &b] {
            let out = run_sweep(&cfg).unwrap();
            write_results(
                d.path(),
                &out.records,
                &out.aggregates,
                &Manifest::new(&cfg, None),
            )
            .unwrap();
        }
        for f in [RECORDS_FILE, AGGREGATES_FILE] {
            assert_eq!(
                fs::read(a.path().join(f)).unwrap(),
                fs::read(b.path().join(f)).unwrap()
            );
        }
    }

    #[test]
    fn unwritable_path_reports_location() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("occupied");
        fs::write(&file, "x").unwrap();
        let err = write_results(&file, &[], &[], &Manifest::new(&config(), None)).unwrap_err();
        assert!(err.to_string().contains("occupied"), "{err}");
    }
}
