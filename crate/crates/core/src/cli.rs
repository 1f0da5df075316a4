//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 2 usage or configuration error, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dataset::{Manifest, DEFAULT_SPLIT_RATIO};
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, read_predictions};
use crate::params::FoldMode;
use crate::pipeline::{augment, bench, Method, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Overrides `--seed` when set.
pub const SEED_ENV: &str = "MIXAUG_SEED";

#[derive(Debug, Parser)]
#[command(name = "mixaug", version, about = "Deterministic mix-based image augmentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan a class-foldered image tree into a manifest.
    Ingest {
        root: PathBuf,
        /// Manifest to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Tag manifest entries train/test with a stratified seeded split.
    Split {
        manifest: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SPLIT_RATIO)]
        ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of rewriting the manifest in place.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Augment the train split and copy the test split through.
    Augment(AugmentArgs),
    /// Compute the evaluation report from a predictions file.
    Metrics {
        predictions: PathBuf,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Measure throughput on synthetic images.
    Bench(BenchArgs),
}

#[derive(Debug, Args, Default)]
struct MixFlags {
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// AugMix chain count.
    #[arg(long)]
    chains: Option<usize>,
    /// YOCO grid `MxN`, giving (M+1)×(N+1) cells.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// CropMix crop area bounds `lo:hi`.
    #[arg(long, value_parser = parse_scale)]
    crop_scale: Option<(f64, f64)>,
    #[arg(long)]
    fold_mode: Option<FoldMode>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    mix: MixFlags,
    #[arg(long)]
    multiplier: Option<usize>,
    #[arg(long)]
    resize: Option<usize>,
    #[arg(long)]
    cam_dir: Option<PathBuf>,
    /// Fail instead of using luminance when a CAM is unavailable.
    #[arg(long)]
    no_saliency_fallback: bool,
    /// Also write a second AugMix view per sample.
    #[arg(long)]
    consistency: bool,
    /// Replace an existing output tree.
    #[arg(long)]
    overwrite: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    n_images: usize,
    #[arg(long, default_value_t = 224)]
    resize: usize,
    /// Comma-separated methods; defaults to all six mixers.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    mix: MixFlags,
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected MxN, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad grid count {t:?}"));
    Ok((num(m)?, num(n)?))
}

fn parse_scale(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad scale {t:?}"));
    Ok((num(lo)?, num(hi)?))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Decode { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

impl MixFlags {
    fn apply(&self, cfg: &mut RunConfig, env_seed: Option<u64>) {
        let p = &mut cfg.augment.params;
        if let Some(m) = self.method {
            cfg.augment.method = m;
        }
        if let Some(a) = self.alpha {
            p.alpha = a;
        }
        if let Some(k) = self.chains {
            p.num_chains = k;
        }
        if let Some((m, n)) = self.grid {
            p.grid_rows = m;
            p.grid_cols = n;
        }
        if let Some((lo, hi)) = self.crop_scale {
            p.crop_scale_min = lo;
            p.crop_scale_max = hi;
        }
        if let Some(f) = self.fold_mode {
            p.fold_mode = f;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(s) = env_seed.or(self.seed) {
            cfg.seed = s;
        }
    }
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::param(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::param(format!("{SEED_ENV}: {e}"))),
    }
}

/// Parses `args` (including the program name) and runs, reading
/// `MIXAUG_SEED` from the environment.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let seed = env_seed();
    run_with(args, seed, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with the environment seed and output streams supplied.
pub fn run_with<I, T>(
    args: I,
    env_seed: Result<Option<u64>>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let env_seed = match env_seed {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, env_seed, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, env_seed: Option<u64>, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let io_out = |e: std::io::Error| Error::io("<stdout>", e);
    match cmd {
        Command::Ingest { root, out: dest } => {
            if !root.is_dir() {
                return Err(Error::param(format!("{} is not a readable directory", root.display())));
            }
            let m = Manifest::ingest(&root)?;
            for w in &m.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            m.write(&dest)?;
            writeln!(
                out,
                "{} entries in {} classes -> {}",
                m.entries.len(),
                m.num_classes(),
                dest.display()
            )
            .map_err(io_out)
        }
        Command::Split { manifest, ratio, seed, out: dest } => {
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(Error::param(format!("split ratio must lie in (0,1), got {ratio}")));
            }
            let seed = env_seed.unwrap_or(seed);
            let split = Manifest::read(&manifest)?.split(ratio, seed)?;
            let dest = dest.unwrap_or(manifest);
            split.write(&dest)?;
            let train = split.indices(crate::dataset::Split::Train).len();
            writeln!(
                out,
                "{train} train / {} test (ratio {ratio}, seed {seed}) -> {}",
                split.entries.len() - train,
                dest.display()
            )
            .map_err(io_out)
        }
        Command::Augment(a) => cmd_augment(a, env_seed, out),
        Command::Metrics { predictions, json } => {
            let records = read_predictions(&predictions)?;
            let report = compute_metrics(&records)?;
            for c in &report.auc_skipped {
                let _ = writeln!(err, "warning: class {c} has no positives or no negatives; skipped for ROC AUC");
            }
            if json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                writeln!(out, "{text}").map_err(io_out)
            } else {
                for (k, v) in report.rows() {
                    writeln!(out, "{k}: {v:.6}").map_err(io_out)?;
                }
                Ok(())
            }
        }
        Command::Bench(b) => {
            let mut cfg = RunConfig::default();
            b.mix.apply(&mut cfg, env_seed);
            let methods = if b.methods.is_empty() {
                Method::ALL.into_iter().filter(|m| *m != Method::Baseline).collect()
            } else {
                b.methods
            };
            let wide = if cfg.workers == 0 {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            } else {
                cfg.workers
            };
            let mut counts = vec![1];
            if wide > 1 {
                counts.push(wide);
            }
            let report = bench(&cfg.augment, &methods, b.n_images, b.resize, &counts, cfg.seed)?;
            if b.json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                writeln!(out, "{text}").map_err(io_out)
            } else {
                write!(out, "{report}").map_err(io_out)
            }
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::from_toml(&text)
}

fn cmd_augment(a: AugmentArgs, env_seed: Option<u64>, out: &mut dyn Write) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    a.mix.apply(&mut cfg, env_seed);
    if a.manifest.is_some() {
        cfg.manifest = a.manifest;
    }
    if a.out.is_some() {
        cfg.out = a.out;
    }
    if let Some(m) = a.multiplier {
        cfg.multiplier = m;
    }
    if let Some(r) = a.resize {
        cfg.resize = r;
    }
    if a.cam_dir.is_some() {
        cfg.cam_dir = a.cam_dir;
    }
    if a.no_saliency_fallback {
        cfg.saliency_fallback = false;
    }
    cfg.augment.consistency |= a.consistency;
    cfg.overwrite |= a.overwrite;

    cfg.validate()?;
    let manifest_path = cfg
        .manifest
        .clone()
        .ok_or_else(|| Error::param("augment needs --manifest"))?;
    if cfg.out.is_none() {
        return Err(Error::param("augment needs --out"));
    }
    let manifest = Manifest::read(&manifest_path)?;
    let summary = augment(&cfg, &manifest)?;
    writeln!(
        out,
        "{}: {} train rows, {} test rows -> {}",
        cfg.augment.method,
        summary.train_rows,
        summary.test_rows,
        cfg.out.as_ref().expect("checked").display()
    )
    .map_err(|e| Error::io("<stdout>", e))
}
