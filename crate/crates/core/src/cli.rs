//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::channels::{apply_stochastic, ChannelConfig};
use crate::error::{Error, Result};
use crate::experiments::sweep::linspace;
use crate::experiments::{oracle_check, run_sweep, write_results, Manifest, SweepConfig};
use crate::gauging::{center_matches_decohered_state, center_of, gauge_group};
use crate::lattice::{Color, Direction, HoneycombTorus};
use crate::negativity::{negativity, ten};
use crate::pauli::{color_code_state, logical_loops, LOGICAL_PATHS};
use crate::region::{ComplexSpec, RegionPreset};

/// Environment variable naming the default root for sweep output directories.
pub const OUT_ROOT_ENV: &str = "COLORCODE_OUT_ROOT";

#[derive(Debug, Parser)]
#[command(
    name = "colorcode",
    version,
    about = "Decohered color code negativity toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the lattice as JSON.
    BuildLattice(LatticeArgs),
    /// Monte Carlo sweep over the dephasing probability.
    Sweep(SweepArgs),
    /// Negativity of one region or TEN of one complex, as JSON.
    Negativity(NegativityArgs),
    /// Center of the gauge group as a tableau, with a comparison report.
    Center(CenterArgs),
    /// Compare the rank formula with dense partial transposes on random states.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    /// Linear size for both directions.
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long = "Lx")]
    pub lx: Option<usize>,
    #[arg(long = "Ly")]
    pub ly: Option<usize>,
}

impl SizeArgs {
    fn resolve(&self, default: usize) -> (usize, usize) {
        let l = self.l.unwrap_or(default);
        (self.lx.unwrap_or(l), self.ly.unwrap_or(l))
    }
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub size: SizeArgs,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub size: SizeArgs,
    /// Grid as `start:stop:count`.
    #[arg(long = "p-grid", conflicts_with = "p")]
    pub p_grid: Option<String>,
    /// Explicit probabilities, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// TEN complex, e.g. `ten-7` or `ten-19-green`; repeatable.
    #[arg(long = "complex")]
    pub complexes: Vec<ComplexSpec>,
    /// Named region, e.g. `A1` or `fig2-parallelogram`; repeatable.
    #[arg(long = "preset")]
    pub presets: Vec<RegionPreset>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    /// JSON config file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NegativityArgs {
    #[command(flatten)]
    pub size: SizeArgs,
    #[arg(long, required_unless_present = "complex", conflicts_with = "complex")]
    pub preset: Option<RegionPreset>,
    #[arg(long)]
    pub complex: Option<ComplexSpec>,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report in nats instead of bits.
    #[arg(long)]
    pub nats: bool,
}

#[derive(Debug, Args)]
pub struct CenterArgs {
    #[command(flatten)]
    pub size: SizeArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long = "max-qubits", default_value_t = 8)]
    pub max_qubits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Sweep settings read from `--config`. Every field is optional.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "L")]
    pub l: Option<usize>,
    #[serde(rename = "Lx")]
    pub lx: Option<usize>,
    #[serde(rename = "Ly")]
    pub ly: Option<usize>,
    pub p_grid: Option<PGrid>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub complexes: Option<Vec<ComplexSpec>>,
    pub regions: Option<Vec<RegionPreset>>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Either an explicit list or a `start:stop:count` string.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum PGrid {
    List(Vec<f64>),
    Spec(String),
}

impl PGrid {
    fn values(&self) -> Result<Vec<f64>> {
        match self {
            PGrid::List(v) => Ok(v.clone()),
            PGrid::Spec(s) => parse_p_grid(s),
        }
    }
}

pub fn parse_p_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("p grid must be start:stop:count, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(bad());
    };
    let start: f64 = a.trim().parse().map_err(|_| bad())?;
    let stop: f64 = b.trim().parse().map_err(|_| bad())?;
    let count: usize = n.trim().parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(bad());
    }
    Ok(linspace(start, stop, count))
}

pub const DEFAULT_SWEEP_L: usize = 24;
pub const DEFAULT_SAMPLES: usize = 1000;

/// Fully resolved sweep invocation.
#[derive(Debug)]
pub struct SweepPlan {
    pub config: SweepConfig,
    pub out: PathBuf,
    pub threads: Option<usize>,
}

/// Merges flags over the config file over defaults.
pub fn resolve_sweep(args: &SweepArgs, env_root: Option<&Path>) -> Result<SweepPlan> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str::<ConfigFile>(&text)?
        }
        None => ConfigFile::default(),
    };
    let l = args.size.l.or(file.l).unwrap_or(DEFAULT_SWEEP_L);
    let lx = args.size.lx.or(file.lx).unwrap_or(l);
    let ly = args.size.ly.or(file.ly).unwrap_or(l);
    let p_grid = if let Some(s) = &args.p_grid {
        parse_p_grid(s)?
    } else if let Some(p) = &args.p {
        p.clone()
    } else if let Some(g) = &file.p_grid {
        g.values()?
    } else {
        let mut g = linspace(0.0, 0.5, 21);
        g.push(1.0);
        g
    };
    let complexes = if !args.complexes.is_empty() {
        args.complexes.clone()
    } else {
        file.complexes.unwrap_or_else(|| {
            vec![ComplexSpec {
                size: 7,
                center: Color::Red,
            }]
        })
    };
    let regions = if !args.presets.is_empty() {
        args.presets.clone()
    } else {
        file.regions.unwrap_or_default()
    };
    let config = SweepConfig {
        lx,
        ly,
        p_grid,
        samples: args.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
        seed: args.seed.or(file.seed).unwrap_or(0),
        complexes,
        regions,
    };
    config.validate()?;
    let out = args.out.clone().or(file.out).unwrap_or_else(|| {
        env_root
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("runs"))
            .join(format!(
                "sweep-L{}x{}-seed{}",
                config.lx, config.ly, config.seed
            ))
    });
    let threads = args.threads.or(file.threads);
    if threads == Some(0) {
        return Err(Error::InvalidArgument(
            "--threads must be at least 1".into(),
        ));
    }
    Ok(SweepPlan {
        config,
        out,
        threads,
    })
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("usage error");
            let _ = writeln!(stderr, "{line}");
            return 2;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn emit_json(stdout: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(stdout, "{text}").map_err(|e| Error::io("<stdout>", e))
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::BuildLattice(a) => build_lattice(&a, stdout),
        Command::Sweep(a) => sweep(&a, stdout),
        Command::Negativity(a) => negativity_cmd(&a, stdout),
        Command::Center(a) => center(&a, stdout),
        Command::OracleCheck(a) => {
            let report = oracle_check(a.trials, a.max_qubits, a.seed)?;
            writeln!(stdout, "{}", report.summary()).map_err(|e| Error::io("<stdout>", e))?;
            for f in &report.failures {
                emit_json(stdout, &serde_json::to_value(f)?)?;
            }
            if report.all_exact() {
                Ok(())
            } else {
                Err(Error::Oracle(format!(
                    "{} mismatches",
                    report.failures.len()
                )))
            }
        }
    }
}

pub fn lattice_document(t: &HoneycombTorus) -> serde_json::Value {
    let lg = logical_loops(t);
    let mut loops = Vec::new();
    for (b, ((zc, zd), (xc, xd))) in LOGICAL_PATHS.iter().enumerate() {
        let entry = |name: String, color: &Color, dir: &Direction, op: &crate::PauliWord| json!({"name": name, "color": color, "direction": dir, "vertices": op.support()});
        loops.push(entry(format!("Z{}", b + 1), zc, zd, &lg.z[b]));
        loops.push(entry(format!("X{}", b + 1), xc, xd, &lg.x[b]));
    }
    json!({
        "Lx": t.lx(),
        "Ly": t.ly(),
        "n_vertices": t.n_vertices(),
        "n_plaquettes": t.n_plaquettes(),
        "vertices": (0..t.n_vertices())
            .map(|v| json!({"index": v, "plaquettes": t.vertex_plaquettes(v)}))
            .collect::<Vec<_>>(),
        "plaquettes": t.plaquettes().iter().enumerate()
            .map(|(i, p)| json!({"index": i, "q": p.q, "r": p.r, "color": p.color, "vertices": p.vertices}))
            .collect::<Vec<_>>(),
        "links": t.links().iter().enumerate()
            .map(|(i, l)| json!({"index": i, "endpoints": l.endpoints, "color": l.color}))
            .collect::<Vec<_>>(),
        "logical_loops": loops,
    })
}

fn build_lattice(a: &LatticeArgs, stdout: &mut dyn Write) -> Result<()> {
    let (lx, ly) = a.size.resolve(6);
    let t = HoneycombTorus::new(lx, ly)?;
    let doc = lattice_document(&t);
    match &a.out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&doc)? + "\n";
            std::fs::write(path, text).map_err(|e| Error::io(path, e))
        }
        None => emit_json(stdout, &doc),
    }
}

fn sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let env_root = std::env::var_os(OUT_ROOT_ENV).map(PathBuf::from);
    let plan = resolve_sweep(a, env_root.as_deref())?;
    let output = with_threads(plan.threads, || run_sweep(&plan.config))?;
    let manifest = Manifest::new(&plan.config, plan.threads);
    write_results(&plan.out, &output.records, &output.aggregates, &manifest)?;
    writeln!(
        stdout,
        "wrote {} records and {} aggregates to {}",
        output.records.len(),
        output.aggregates.len(),
        plan.out.display()
    )
    .map_err(|e| Error::io("<stdout>", e))
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(
    _threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    f()
}

fn negativity_cmd(a: &NegativityArgs, stdout: &mut dyn Write) -> Result<()> {
    let (lx, ly) = a.size.resolve(12);
    let t = HoneycombTorus::new(lx, ly)?;
    let cfg = ChannelConfig::red_links(&t, a.p, a.seed)?;
    let state = apply_stochastic(&color_code_state(&t), &t, &cfg);
    let (unit, factor) = if a.nats {
        ("nats", std::f64::consts::LN_2)
    } else {
        ("log2", 1.0)
    };
    let doc = if let Some(spec) = a.complex {
        let c = spec.build(&t)?;
        let mut parts = serde_json::Map::new();
        for r in c.regions() {
            let key = r.name.rsplit(':').next().unwrap_or(&r.name).to_string();
            parts.insert(key, json!(negativity(&state, r)?.to_f64() * factor));
        }
        json!({
            "Lx": lx, "Ly": ly, "p": a.p, "seed": a.seed, "units": unit,
            "complex": spec.to_string(),
            "value": ten(&state, &c)?.to_f64() * factor,
            "parts": parts,
        })
    } else {
        let preset = a.preset.expect("clap requires a preset or a complex");
        let r = preset.build(&t)?;
        json!({
            "Lx": lx, "Ly": ly, "p": a.p, "seed": a.seed, "units": unit,
            "region": preset.to_string(),
            "n_vertices": r.len(),
            "boundary_honeycomb": r.boundary_honeycomb,
            "boundary_triangular": r.boundary_triangular,
            "commensurate": r.commensurate,
            "value": negativity(&state, &r)?.to_f64() * factor,
        })
    };
    emit_json(stdout, &doc)
}

fn center(a: &CenterArgs, stdout: &mut dyn Write) -> Result<()> {
    let (lx, ly) = a.size.resolve(6);
    let t = HoneycombTorus::new(lx, ly)?;
    let basis = center_of(&gauge_group(&t));
    let report = center_matches_decohered_state(&t);
    let mut text = String::new();
    text.push_str(&format!("# matches decohered state: {}\n", report.matches));
    text.push_str(&format!("# center rank: {}\n", report.center_rank));
    text.push_str(&format!("# decohered rank: {}\n", report.state_rank));
    for w in &report.missing_from_state {
        text.push_str(&format!("# missing from state: {w}\n"));
    }
    for w in &report.missing_from_center {
        text.push_str(&format!("# missing from center: {w}\n"));
    }
    for w in &basis {
        text.push_str(&w.to_string());
        text.push('\n');
    }
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    if report.matches {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "center differs from the decohered state".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("colorcode").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn p_grid_syntax() {
        let g = parse_p_grid("0:0.5:21").unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[20], 0.5);
        assert!(parse_p_grid("0:1").is_err());
        assert!(parse_p_grid("0:1:0").is_err());
        assert!(parse_p_grid("a:1:3").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_capture(&["sweep", "--bogus"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        assert_eq!(run_capture(&[]).0, 2);
        assert_eq!(run_capture(&["negativity", "--preset", "nope"]).0, 2);
    }

    #[test]
    fn runtime_errors_exit_1() {
        let (code, _, err) = run_capture(&["build-lattice", "--L", "4"]);
        assert_eq!(code, 1);
        assert!(err.contains("3-colour"));
    }

    #[test]
    fn negativity_json() {
        let (code, out, _) = run_capture(&[
            "negativity",
            "--L",
            "12",
            "--preset",
            "fig2-parallelogram",
            "--p",
            "0",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], 8.0);
        assert_eq!(v["boundary_honeycomb"], 10);
        let (_, out, _) = run_capture(&[
            "negativity",
            "--L",
            "12",
            "--preset",
            "fig2-parallelogram",
            "--nats",
        ]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["value"].as_f64().unwrap() - 8.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn precedence_flags_over_config_over_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, r#"{"L": 12, "samples": 7, "seed": 9, "p_grid": "0:1:3", "complexes": ["ten-19-green"]}"#)
            .unwrap();
        let args = Cli::try_parse_from([
            "colorcode",
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "4",
        ])
        .unwrap();
        let Command::Sweep(a) = args.command else {
            panic!()
        };
        let plan = resolve_sweep(&a, Some(Path::new("/tmp/root"))).unwrap();
        assert_eq!(plan.config.lx, 12);
        assert_eq!(plan.config.samples, 7);
        assert_eq!(plan.config.seed, 4);
        assert_eq!(plan.config.p_grid, vec![0.0, 0.5, 1.0]);
        assert_eq!(plan.config.complexes[0].to_string(), "ten-19-green");
        assert_eq!(plan.out, PathBuf::from("/tmp/root/sweep-L12x12-seed4"));

        let defaults = Cli::try_parse_from(["colorcode", "sweep"]).unwrap();
        let Command::Sweep(a) = defaults.command else {
            panic!()
        };
        let plan = resolve_sweep(&a, None).unwrap();
        assert_eq!(plan.config.lx, DEFAULT_SWEEP_L);
        assert_eq!(plan.config.samples, DEFAULT_SAMPLES);
        assert_eq!(plan.config.p_grid.len(), 22);
    }

    #[test]
    fn unknown_config_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, r#"{"samplez": 3}"#).unwrap();
        let (code, _, err) = run_capture(&["sweep", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("samplez"), "{err}");
    }
}
