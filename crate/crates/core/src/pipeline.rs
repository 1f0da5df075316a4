//! Batch augmentation and throughput benchmarking over a rayon worker pool.
//!
//! Every output sample owns an rng stream `(seed, [entry_index, rep])`:
//! `derive(0)` picks the partner, `derive(1)` drives the method. Scheduling
//! order therefore never reaches the output.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{save_png, write_atomic, load_cam, Manifest, Split};
use crate::error::{Error, Result};
use crate::mix::{
    augmix_with, cropmix, cutmix, mixup, snapmix, yoco_grid_with, yoco_with, MixOutput, MixTrace,
    SaliencyMap,
};
use crate::ops::{build_chain, OpKind, OpRanges, PrimitiveOp};
use crate::params::MixParams;
use crate::rng::SeededRng;
use crate::tensor::{ImageTensor, SoftLabel};

pub const OUTPUT_MANIFEST: &str = "manifest.jsonl";
pub const OUTPUT_FORMAT: &str = "mixaug-augmented";

// first stream-path element for synthetic bench images
const BENCH_DOMAIN: u64 = 0x4245_4e43_4800_0000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Baseline,
    Mixup,
    Yoco,
    Cropmix,
    Cutmix,
    Augmix,
    Snapmix,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Baseline,
        Method::Mixup,
        Method::Yoco,
        Method::Cropmix,
        Method::Cutmix,
        Method::Augmix,
        Method::Snapmix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::Mixup => "mixup",
            Method::Yoco => "yoco",
            Method::Cropmix => "cropmix",
            Method::Cutmix => "cutmix",
            Method::Augmix => "augmix",
            Method::Snapmix => "snapmix",
        }
    }

    /// Whether the method mixes in a second sample.
    pub fn is_pairwise(self) -> bool {
        matches!(self, Method::Mixup | Method::Cutmix | Method::Snapmix)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::param(format!("unknown method {s:?}")))
    }
}

/// Op pools and magnitude ranges for YOCO and AugMix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OpConfig {
    pub augmix_pool: Vec<OpKind>,
    pub yoco_pool: Vec<OpKind>,
    pub ranges: OpRanges,
}

impl Default for OpConfig {
    fn default() -> Self {
        Self {
            augmix_pool: OpKind::augmix_pool(),
            yoco_pool: OpKind::yoco_pool(),
            ranges: OpRanges::default(),
        }
    }
}

/// Everything that decides the pixels of an augmented sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Augmenter {
    pub method: Method,
    pub params: MixParams,
    pub ops: OpConfig,
    /// Emit a second AugMix view per sample.
    pub consistency: bool,
}

impl Default for Augmenter {
    fn default() -> Self {
        Self {
            method: Method::Baseline,
            params: MixParams::default(),
            ops: OpConfig::default(),
            consistency: false,
        }
    }
}

/// Saliency for one SnapMix pair.
pub struct PairSaliency<'a> {
    pub anchor: &'a SaliencyMap,
    pub partner: &'a SaliencyMap,
}

impl Augmenter {
    pub fn new(method: Method) -> Self {
        Self { method, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        match self.method {
            Method::Augmix if self.ops.augmix_pool.is_empty() => {
                Err(Error::param("augmix op pool is empty"))
            }
            Method::Yoco if self.ops.yoco_pool.is_empty() => Err(Error::param("yoco op pool is empty")),
            _ => Ok(()),
        }
    }

    /// Augments `(a, ya)`. Pairwise methods use `partner`, falling back to
    /// `a` itself; SnapMix without saliency uses luminance.
    pub fn apply(
        &self,
        a: &ImageTensor,
        ya: &SoftLabel,
        partner: Option<(&ImageTensor, &SoftLabel)>,
        saliency: Option<PairSaliency<'_>>,
        rng: &mut SeededRng,
    ) -> Result<MixOutput> {
        let (b, yb) = partner.unwrap_or((a, ya));
        let p = &self.params;
        match self.method {
            Method::Baseline => Ok(MixOutput::label_preserving(a.clone(), ya.clone(), MixTrace::default())),
            Method::Mixup => mixup(a, ya, b, yb, p.alpha, rng),
            Method::Cutmix => cutmix(a, ya, b, yb, p.alpha, rng),
            Method::Snapmix => match saliency {
                Some(s) => snapmix(a, ya, s.anchor, b, yb, s.partner, p.alpha, rng),
                None => {
                    let (sa, sb) = (SaliencyMap::from_intensity(a)?, SaliencyMap::from_intensity(b)?);
                    snapmix(a, ya, &sa, b, yb, &sb, p.alpha, rng)
                }
            },
            Method::Cropmix => cropmix(a, ya, p, rng),
            Method::Augmix => augmix_with(
                a,
                ya,
                p,
                &self.ops.augmix_pool,
                &self.ops.ranges,
                rng,
                self.consistency,
            ),
            Method::Yoco => {
                let image = self.yoco(a, rng)?;
                Ok(MixOutput::label_preserving(image, ya.clone(), MixTrace::default()))
            }
        }
    }

    // chains are drawn from derive(1000 + cell) so they never overlap the
    // cell streams used while applying them
    fn yoco(&self, img: &ImageTensor, rng: &mut SeededRng) -> Result<ImageTensor> {
        let p = &self.params;
        let pool = &self.ops.yoco_pool;
        let chain = |cell: usize| -> Result<Vec<PrimitiveOp>> {
            build_chain(&mut rng.derive(1000 + cell as u64), p.chain_depth_max, pool)
        };
        if p.grid_rows == 0 && p.grid_cols == 0 {
            let (aug1, aug2) = (chain(0)?, chain(1)?);
            return yoco_with(img, &aug1, &aug2, rng, &self.ops.ranges);
        }
        let (rows, cols) = (p.grid_rows + 1, p.grid_cols + 1);
        let augs = (0..rows)
            .map(|i| (0..cols).map(|j| chain(i * cols + j)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        yoco_grid_with(img, &augs, rng, &self.ops.ranges)
    }
}

/// Batch augmentation settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(flatten)]
    pub augment: Augmenter,
    pub seed: u64,
    pub manifest: Option<PathBuf>,
    pub out: Option<PathBuf>,
    /// Augmented outputs per train sample.
    pub multiplier: usize,
    /// Square side every image is resized to on load.
    pub resize: usize,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
    /// SnapMix CAMs, laid out like the dataset root.
    pub cam_dir: Option<PathBuf>,
    /// Luminance saliency when a CAM is missing.
    pub saliency_fallback: bool,
    /// Replace an existing output tree.
    pub overwrite: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            augment: Augmenter::default(),
            seed: 0,
            manifest: None,
            out: None,
            multiplier: 1,
            resize: 224,
            workers: 0,
            cam_dir: None,
            saliency_fallback: true,
            overwrite: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::param(format!("config: {e}")))
    }

    /// Checks everything that can be checked without touching the disk.
    pub fn validate(&self) -> Result<()> {
        self.augment.validate()?;
        if self.multiplier == 0 {
            return Err(Error::param("multiplier must be >= 1"));
        }
        if self.resize < 2 {
            return Err(Error::param(format!("resize side must be >= 2, got {}", self.resize)));
        }
        let p = &self.augment.params;
        if self.augment.method == Method::Yoco && (p.grid_rows >= self.resize || p.grid_cols >= self.resize) {
            return Err(Error::param("yoco grid is finer than the resized image"));
        }
        if self.augment.method == Method::Snapmix && self.cam_dir.is_none() && !self.saliency_fallback {
            return Err(Error::param(
                "snapmix needs --cam-dir when the saliency fallback is disabled",
            ));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::param(format!("worker pool: {e}")))
    }
}

/// One line of the output manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRow {
    pub path: String,
    pub split: Split,
    /// Anchor entry, relative to the input root.
    pub source: String,
    pub partner: Option<String>,
    pub label: Vec<f64>,
    pub lambda_effective: f64,
    pub seed: u64,
    pub stream: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<String>,
    #[serde(default)]
    pub trace: MixTrace,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct OutputHeader {
    format: String,
    version: u32,
    class_names: Vec<String>,
    config: Augmenter,
    seed: u64,
    multiplier: usize,
    resize: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentSummary {
    pub train_rows: usize,
    pub test_rows: usize,
}

/// Stream for replica `rep` of manifest entry `entry`.
pub fn sample_stream(seed: u64, entry: usize, rep: usize) -> SeededRng {
    SeededRng::stream(seed, &[entry as u64, rep as u64])
}

/// Partner position within `train`, uniform over the other train entries.
pub fn pick_partner(rng: &mut SeededRng, position: usize, n_train: usize) -> usize {
    if n_train < 2 {
        return position;
    }
    let j = rng.below(n_train - 1);
    if j >= position {
        j + 1
    } else {
        j
    }
}

fn prepare_out(out: &Path, overwrite: bool) -> Result<()> {
    if out.exists() {
        let mut listing = fs::read_dir(out).map_err(|e| Error::io(out, e))?;
        if listing.next().is_some() {
            if !overwrite {
                return Err(Error::param(format!(
                    "output directory {} is not empty (use --overwrite)",
                    out.display()
                )));
            }
            for name in ["train", "test"] {
                let d = out.join(name);
                if d.exists() {
                    fs::remove_dir_all(&d).map_err(|e| Error::io(&d, e))?;
                }
            }
            let m = out.join(OUTPUT_MANIFEST);
            if m.exists() {
                fs::remove_file(&m).map_err(|e| Error::io(&m, e))?;
            }
        }
    }
    for d in [out.join("train"), out.join("test")] {
        fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
    }
    Ok(())
}

fn cam_for(cfg: &RunConfig, manifest: &Manifest, entry: usize, img: &ImageTensor) -> Result<Option<SaliencyMap>> {
    let Some(dir) = &cfg.cam_dir else {
        return Ok(None);
    };
    let path = dir.join(&manifest.entries[entry].path);
    if path.is_file() {
        return load_cam(&path).map(Some);
    }
    if cfg.saliency_fallback {
        return SaliencyMap::from_intensity(img).map(Some);
    }
    Err(Error::io(
        &path,
        std::io::Error::new(std::io::ErrorKind::NotFound, "missing CAM file"),
    ))
}

/// Augments every train entry `multiplier` times and copies test entries
/// through after resizing. Writes `out/train/*.png`, `out/test/*.png` and
/// `out/manifest.jsonl`.
pub fn augment(cfg: &RunConfig, manifest: &Manifest) -> Result<AugmentSummary> {
    cfg.validate()?;
    let out = cfg
        .out
        .as_deref()
        .ok_or_else(|| Error::param("no output directory given"))?;
    if !manifest.is_split() {
        return Err(Error::param("manifest has unsplit entries; run split first"));
    }
    let pool = cfg.pool()?;
    prepare_out(out, cfg.overwrite)?;

    let train = manifest.indices(Split::Train);
    let test = manifest.indices(Split::Test);
    let side = Some(cfg.resize);
    let aug = &cfg.augment;

    let tasks: Vec<(usize, usize)> = (0..train.len())
        .flat_map(|t| (0..cfg.multiplier).map(move |r| (t, r)))
        .collect();

    let (train_rows, test_rows) = pool.install(|| -> Result<_> {
        let train_rows = tasks
            .par_iter()
            .map(|&(t, rep)| -> Result<OutputRow> {
                let entry = train[t];
                let stream = sample_stream(cfg.seed, entry, rep);
                let a = manifest.load_sample(entry, side)?;
                let partner_entry = if aug.method.is_pairwise() {
                    Some(train[pick_partner(&mut stream.derive(0), t, train.len())])
                } else {
                    None
                };
                let b = partner_entry.map(|e| manifest.load_sample(e, side)).transpose()?;
                let cams = match (aug.method, partner_entry, &b) {
                    (Method::Snapmix, Some(pe), Some(b)) => {
                        match (cam_for(cfg, manifest, entry, &a.image)?, cam_for(cfg, manifest, pe, &b.image)?) {
                            (Some(ca), Some(cb)) => Some((ca, cb)),
                            _ => None,
                        }
                    }
                    _ => None,
                };
                let saliency = cams.as_ref().map(|(ca, cb)| PairSaliency { anchor: ca, partner: cb });
                let result = aug.apply(
                    &a.image,
                    &a.label,
                    b.as_ref().map(|s| (&s.image, &s.label)),
                    saliency,
                    &mut stream.derive(1),
                )?;
                let name = format!("train/{entry:06}_{rep}.png");
                save_png(&result.image, &out.join(&name))?;
                let mut aux = Vec::new();
                for (k, extra) in result.aux_images.iter().enumerate() {
                    let aux_name = format!("train/{entry:06}_{rep}_aux{k}.png");
                    save_png(extra, &out.join(&aux_name))?;
                    aux.push(aux_name);
                }
                Ok(OutputRow {
                    path: name,
                    split: Split::Train,
                    source: manifest.entries[entry].path.clone(),
                    partner: partner_entry.map(|e| manifest.entries[e].path.clone()),
                    label: result.label.weights().to_vec(),
                    lambda_effective: result.lambda_effective,
                    seed: cfg.seed,
                    stream: stream.stream_path().to_vec(),
                    aux,
                    trace: result.trace,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let test_rows = test
            .par_iter()
            .map(|&entry| -> Result<OutputRow> {
                let s = manifest.load_sample(entry, side)?;
                let name = format!("test/{entry:06}.png");
                save_png(&s.image, &out.join(&name))?;
                Ok(OutputRow {
                    path: name,
                    split: Split::Test,
                    source: manifest.entries[entry].path.clone(),
                    partner: None,
                    label: s.label.weights().to_vec(),
                    lambda_effective: 1.0,
                    seed: cfg.seed,
                    stream: Vec::new(),
                    aux: Vec::new(),
                    trace: MixTrace::default(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((train_rows, test_rows))
    })?;

    let header = OutputHeader {
        format: OUTPUT_FORMAT.into(),
        version: 1,
        class_names: manifest.class_names.clone(),
        config: aug.clone(),
        seed: cfg.seed,
        multiplier: cfg.multiplier,
        resize: cfg.resize,
    };
    let mut text = serde_json::to_string(&header).expect("header serializes");
    text.push('\n');
    for row in train_rows.iter().chain(&test_rows) {
        text.push_str(&serde_json::to_string(row).expect("row serializes"));
        text.push('\n');
    }
    write_atomic(&out.join(OUTPUT_MANIFEST), text.as_bytes())?;
    Ok(AugmentSummary {
        train_rows: train_rows.len(),
        test_rows: test_rows.len(),
    })
}

/// Reads the rows of an output manifest, skipping its header.
pub fn read_output_rows(path: &Path) -> Result<Vec<OutputRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Format {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: Method,
    pub workers: usize,
    pub images: usize,
    pub seconds: f64,
    pub images_per_sec: f64,
    pub checksum: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Whether every method produced one checksum across all worker counts.
    pub fn checksums_agree(&self) -> bool {
        self.rows.iter().all(|r| {
            self.rows
                .iter()
                .filter(|o| o.method == r.method)
                .all(|o| o.checksum == r.checksum)
        })
    }

    pub fn row(&self, method: Method, workers: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method && r.workers == workers)
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return writeln!(f, "no images, nothing measured");
        }
        writeln!(f, "{:<9} {:>7} {:>8} {:>10} {:>12}  checksum", "method", "workers", "images", "seconds", "images/s")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<9} {:>7} {:>8} {:>10.3} {:>12.1}  {:016x}",
                r.method.name(),
                r.workers,
                r.images,
                r.seconds,
                r.images_per_sec,
                r.checksum
            )?;
        }
        writeln!(f, "checksums agree across worker counts: {}", self.checksums_agree())
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

// FNV-1a over 32- or 64-bit words rather than bytes
#[inline]
fn fnv_word(h: u64, word: u64) -> u64 {
    (h ^ word).wrapping_mul(FNV_PRIME)
}

/// Word-wise FNV-1a over image bits then label bits.
pub fn output_digest(out: &MixOutput) -> u64 {
    let mut h = FNV_OFFSET;
    for img in std::iter::once(&out.image).chain(&out.aux_images) {
        for v in img.data() {
            h = fnv_word(h, v.to_bits() as u64);
        }
    }
    for w in out.label.weights() {
        h = fnv_word(h, w.to_bits());
    }
    h
}

/// Smooth colour gradients with a seeded phase, so no two are alike.
pub fn synthetic_image(seed: u64, index: usize, side: usize) -> ImageTensor {
    let mut rng = SeededRng::stream(seed, &[BENCH_DOMAIN, index as u64]);
    let phase: Vec<f64> = (0..6).map(|_| rng.uniform_range(0.0, std::f64::consts::TAU)).collect();
    let freq = rng.uniform_range(1.0, 6.0);
    ImageTensor::from_fn(3, side, side, |c, y, x| {
        let (u, v) = (x as f64 / side as f64, y as f64 / side as f64);
        let s = (freq * std::f64::consts::TAU * u + phase[c]).sin() * (freq * std::f64::consts::TAU * v + phase[c + 3]).cos();
        (0.5 + 0.45 * s) as f32
    })
    .expect("synthetic image is valid")
}

pub const BENCH_CLASSES: usize = 4;
// distinct synthetic sources; outputs still get one stream each
const BENCH_POOL: usize = 32;

/// Runs each method over `n_images` synthetic `side²` RGB images once per
/// worker count. The checksum combines per-image digests in index order.
pub fn bench(
    template: &Augmenter,
    methods: &[Method],
    n_images: usize,
    side: usize,
    worker_counts: &[usize],
    seed: u64,
) -> Result<BenchReport> {
    if n_images == 0 {
        return Ok(BenchReport { rows: Vec::new() });
    }
    let pool_len = n_images.min(BENCH_POOL);
    let sources: Vec<ImageTensor> = (0..pool_len).map(|i| synthetic_image(seed, i, side)).collect();
    let labels: Vec<SoftLabel> = (0..pool_len)
        .map(|i| SoftLabel::one_hot(i % BENCH_CLASSES, BENCH_CLASSES))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &method in methods {
        let aug = Augmenter { method, ..template.clone() };
        aug.validate()?;
        for &workers in worker_counts {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::param(format!("worker pool: {e}")))?;
            let start = Instant::now();
            let digests = pool.install(|| {
                (0..n_images)
                    .into_par_iter()
                    .map(|i| -> Result<u64> {
                        let stream = sample_stream(seed, i, 0);
                        let a = i % pool_len;
                        let b = pick_partner(&mut stream.derive(0), a, pool_len);
                        let out = aug.apply(
                            &sources[a],
                            &labels[a],
                            Some((&sources[b], &labels[b])),
                            None,
                            &mut stream.derive(1),
                        )?;
                        Ok(output_digest(&out))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            let seconds = start.elapsed().as_secs_f64();
            let checksum = digests
                .iter()
                .fold(FNV_OFFSET, |h, &d| fnv_word(h, d));
            rows.push(BenchRow {
                method,
                workers: pool.current_num_threads(),
                images: n_images,
                seconds,
                images_per_sec: n_images as f64 / seconds.max(1e-9),
                checksum,
            });
        }
    }
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("cutout".parse::<Method>().is_err());
    }

    #[test]
    fn partner_never_self() {
        let mut rng = SeededRng::new(3);
        for pos in 0..5 {
            for _ in 0..200 {
                let p = pick_partner(&mut rng, pos, 5);
                assert!(p < 5 && p != pos);
            }
        }
        assert_eq!(pick_partner(&mut rng, 0, 1), 0);
    }

    #[test]
    fn baseline_is_identity() {
        let img = synthetic_image(1, 0, 16);
        let y = SoftLabel::one_hot(1, 3).unwrap();
        let out = Augmenter::new(Method::Baseline)
            .apply(&img, &y, None, None, &mut SeededRng::new(0))
            .unwrap();
        assert_eq!(out.image, img);
        assert_eq!(out.label, y);
    }

    #[test]
    fn every_method_keeps_shape_and_mass() {
        let a = synthetic_image(1, 0, 24);
        let b = synthetic_image(1, 1, 24);
        let (ya, yb) = (SoftLabel::one_hot(0, 4).unwrap(), SoftLabel::one_hot(3, 4).unwrap());
        for m in Method::ALL {
            let mut aug = Augmenter::new(m);
            aug.params.grid_rows = 1;
            aug.params.grid_cols = 2;
            let out = aug.apply(&a, &ya, Some((&b, &yb)), None, &mut SeededRng::new(11)).unwrap();
            assert_eq!(out.image.shape(), a.shape(), "{m}");
            assert!((out.label.mass() - 1.0).abs() < 1e-9, "{m}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = RunConfig::default();
        cfg.validate().unwrap();
        cfg.multiplier = 0;
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            augment: Augmenter::new(Method::Snapmix),
            saliency_fallback: false,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn toml_config() {
        let cfg = RunConfig::from_toml(
            r#"
            method = "augmix"
            seed = 9
            multiplier = 2
            [params]
            alpha = 0.5
            num_chains = 4
            [ops]
            augmix_pool = ["rotate", "posterize"]
            [ops.ranges]
            rotate_max_deg = 10.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.augment.method, Method::Augmix);
        assert_eq!(cfg.augment.params.num_chains, 4);
        assert_eq!(cfg.augment.params.chain_depth_max, 3);
        assert_eq!(cfg.augment.ops.augmix_pool, vec![OpKind::Rotate, OpKind::Posterize]);
        assert_eq!(cfg.augment.ops.ranges.rotate_max_deg, 10.0);
        assert_eq!(cfg.multiplier, 2);
        assert!(RunConfig::from_toml("method = \"cutout\"").is_err());
    }

    #[test]
    fn bench_checksum_is_worker_invariant() {
        let r = bench(&Augmenter::default(), &[Method::Mixup, Method::Augmix], 12, 32, &[1, 3], 5).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.checksums_agree());
        assert!(bench(&Augmenter::default(), &[Method::Mixup], 0, 32, &[1], 5).unwrap().rows.is_empty());
    }
}
