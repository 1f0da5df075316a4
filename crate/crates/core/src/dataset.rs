//! Class-foldered corpus ingestion, stratified seeded split and the
//! line-delimited JSON manifest.
//!
//! A manifest file is one header object followed by one record per line:
//!
//! ```text
//! {"format":"mixaug-manifest","version":1,"root":"/data/eye","seed":7,"ratio":0.8,"class_names":["cataract","normal"]}
//! {"path":"cataract/001.png","class":0,"split":"train"}
//! ```

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageReader};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mix::SaliencyMap;
use crate::rng::SeededRng;
use crate::tensor::{ImageTensor, SoftLabel};

pub const MANIFEST_FORMAT: &str = "mixaug-manifest";
pub const MANIFEST_VERSION: u32 = 1;
pub const DEFAULT_SPLIT_RATIO: f64 = 0.8;

// first stream-path element for split shuffles
const SPLIT_DOMAIN: u64 = 0x5350_4c49_5400_0000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Unsplit,
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Unsplit => "unsplit",
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the manifest root, `/`-separated.
    pub path: String,
    pub class: usize,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    root: String,
    seed: Option<u64>,
    ratio: Option<f64>,
    class_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub root: PathBuf,
    pub class_names: Vec<String>,
    pub entries: Vec<ManifestEntry>,
    pub seed: Option<u64>,
    pub split_ratio: Option<f64>,
    /// Ingest diagnostics. Not persisted.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub image: ImageTensor,
    pub label: SoftLabel,
    pub source_path: PathBuf,
}

fn sorted_children(dir: &Path) -> Result<Vec<fs::DirEntry>> {
    let mut children = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(dir, e))?;
    children.retain(|c| !c.file_name().to_string_lossy().starts_with('.'));
    children.sort_by_key(|c| c.file_name());
    Ok(children)
}

fn open_image(path: &Path) -> Result<DynamicImage> {
    let decode = |message: String| Error::Decode {
        path: path.to_path_buf(),
        message,
    };
    ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| decode(e.to_string()))
}

impl Manifest {
    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn is_split(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.split != Split::Unsplit)
    }

    /// Indices of entries tagged `split`, in entry order.
    pub fn indices(&self, split: Split) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| self.entries[i].split == split).collect()
    }

    pub fn entry_path(&self, index: usize) -> PathBuf {
        self.root.join(&self.entries[index].path)
    }

    /// Scans `root/<class>/<file>`. Class names and entries are sorted
    /// lexicographically. Empty class directories keep their class and add
    /// a warning; undecodable files are skipped with a warning.
    pub fn ingest(root: &Path) -> Result<Manifest> {
        let meta = fs::metadata(root).map_err(|e| Error::io(root, e))?;
        if !meta.is_dir() {
            return Err(Error::io(
                root,
                std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
            ));
        }
        let root = fs::canonicalize(root).map_err(|e| Error::io(root, e))?;
        let mut class_names = Vec::new();
        let mut entries = Vec::new();
        let mut warnings = Vec::new();
        for class_dir in sorted_children(&root)? {
            let file_type = class_dir.file_type().map_err(|e| Error::io(class_dir.path(), e))?;
            if !file_type.is_dir() {
                continue;
            }
            let name = class_dir.file_name().to_string_lossy().into_owned();
            let class = class_names.len();
            let mut found = 0;
            for file in sorted_children(&class_dir.path())? {
                let path = file.path();
                if !path.is_file() {
                    continue;
                }
                if let Err(e) = open_image(&path) {
                    warnings.push(format!("skipping {}: {e}", path.display()));
                    continue;
                }
                found += 1;
                entries.push(ManifestEntry {
                    path: format!("{name}/{}", file.file_name().to_string_lossy()),
                    class,
                    split: Split::Unsplit,
                });
            }
            if found == 0 {
                warnings.push(format!("class directory {name:?} has no decodable images"));
            }
            class_names.push(name);
        }
        entries.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(Manifest {
            root,
            class_names,
            entries,
            seed: None,
            split_ratio: None,
            warnings,
        })
    }

    /// Per-class stratified shuffle. `floor(ratio·n_c)` entries of each class
    /// go to train, capped so at least one goes to test when `n_c ≥ 2`; a
    /// single-entry class goes to train.
    pub fn split(&self, ratio: f64, seed: u64) -> Result<Manifest> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::param(format!("split ratio must lie in (0,1), got {ratio}")));
        }
        let mut out = self.clone();
        for c in 0..self.num_classes() {
            let mut members: Vec<usize> =
                (0..self.entries.len()).filter(|&i| self.entries[i].class == c).collect();
            let n = members.len();
            let mut rng = SeededRng::stream(seed, &[SPLIT_DOMAIN, c as u64]);
            for i in (1..n).rev() {
                let j = rng.below(i + 1);
                members.swap(i, j);
            }
            let n_train = if n == 1 {
                1
            } else {
                (((ratio * n as f64) + 1e-9).floor() as usize).min(n.saturating_sub(1))
            };
            for (rank, &i) in members.iter().enumerate() {
                out.entries[i].split = if rank < n_train { Split::Train } else { Split::Test };
            }
        }
        out.seed = Some(seed);
        out.split_ratio = Some(ratio);
        Ok(out)
    }

    pub fn to_jsonl(&self) -> String {
        let header = Header {
            format: MANIFEST_FORMAT.into(),
            version: MANIFEST_VERSION,
            root: self.root.to_string_lossy().into_owned(),
            seed: self.seed,
            ratio: self.split_ratio,
            class_names: self.class_names.clone(),
        };
        let mut s = serde_json::to_string(&header).expect("header serializes");
        s.push('\n');
        for e in &self.entries {
            s.push_str(&serde_json::to_string(e).expect("entry serializes"));
            s.push('\n');
        }
        s
    }

    pub fn from_jsonl(text: &str, path: &Path) -> Result<Manifest> {
        let bad = |line: usize, message: String| Error::Format {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| bad(1, "missing manifest header".into()))?;
        let header: Header = serde_json::from_str(first).map_err(|e| bad(1, e.to_string()))?;
        if header.format != MANIFEST_FORMAT || header.version != MANIFEST_VERSION {
            return Err(bad(
                1,
                format!("unsupported manifest {:?} version {}", header.format, header.version),
            ));
        }
        let k = header.class_names.len();
        let mut entries = Vec::new();
        for (i, line) in lines {
            let e: ManifestEntry = serde_json::from_str(line).map_err(|e| bad(i + 1, e.to_string()))?;
            if e.class >= k {
                return Err(bad(i + 1, format!("class {} out of range for {k} classes", e.class)));
            }
            entries.push(e);
        }
        Ok(Manifest {
            root: PathBuf::from(header.root),
            class_names: header.class_names,
            entries,
            seed: header.seed,
            split_ratio: header.ratio,
            warnings: Vec::new(),
        })
    }

    pub fn read(path: &Path) -> Result<Manifest> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_jsonl(&text, path)
    }

    /// Writes via a sibling temp file and rename.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_jsonl().as_bytes())
    }

    /// Decodes entry `index` with a one-hot label, optionally resized to a
    /// `side × side` square.
    pub fn load_sample(&self, index: usize, resize: Option<usize>) -> Result<SampleRecord> {
        let entry = self.entries.get(index).ok_or_else(|| {
            Error::param(format!("sample index {index} out of range for {} entries", self.entries.len()))
        })?;
        let path = self.entry_path(index);
        let mut image = load_image(&path)?;
        if let Some(side) = resize {
            image = image.resize(side, side)?;
        }
        Ok(SampleRecord {
            image,
            label: SoftLabel::one_hot(entry.class, self.num_classes())?,
            source_path: path,
        })
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn to_tensor(img: DynamicImage, path: &Path) -> Result<ImageTensor> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let sixteen = matches!(
        img,
        DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA16(_)
            | DynamicImage::ImageRgb16(_)
            | DynamicImage::ImageRgba16(_)
    );
    let gray = !img.color().has_color();
    let data: Vec<f32> = match (gray, sixteen) {
        (true, false) => img.to_luma8().into_raw().into_iter().map(|v| v as f32 / 255.0).collect(),
        (true, true) => img.to_luma16().into_raw().into_iter().map(|v| v as f32 / 65535.0).collect(),
        (false, false) => planar(img.to_rgb8().into_raw(), |v| v as f32 / 255.0),
        (false, true) => planar(img.to_rgb16().into_raw(), |v| v as f32 / 65535.0),
    };
    let channels = if gray { 1 } else { 3 };
    ImageTensor::new(channels, h, w, data).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

// interleaved RGB → planar CHW
fn planar<T: Copy>(raw: Vec<T>, f: impl Fn(T) -> f32) -> Vec<f32> {
    let n = raw.len() / 3;
    let mut out = vec![0.0; raw.len()];
    for (i, px) in raw.chunks_exact(3).enumerate() {
        for c in 0..3 {
            out[c * n + i] = f(px[c]);
        }
    }
    out
}

/// Decodes to 1 channel (grayscale sources) or 3 (everything else).
/// 8-bit samples are divided by 255, 16-bit by 65535. Alpha is dropped.
pub fn load_image(path: &Path) -> Result<ImageTensor> {
    to_tensor(open_image(path)?, path)
}

/// Grayscale CAM file as raw activations.
pub fn load_cam(path: &Path) -> Result<SaliencyMap> {
    let img = load_image(path)?;
    if img.channels() == 3 {
        return SaliencyMap::from_intensity(&img);
    }
    SaliencyMap::from_image(&img)
}

/// Writes an 8-bit PNG; values are rounded from `[0,1]`.
pub fn save_png(img: &ImageTensor, path: &Path) -> Result<()> {
    let (c, h, w) = img.shape();
    let q = |v: f32| (v * 255.0).round().clamp(0.0, 255.0) as u8;
    let n = h * w;
    let result = if c == 1 {
        let buf: Vec<u8> = img.data().iter().map(|&v| q(v)).collect();
        image::GrayImage::from_raw(w as u32, h as u32, buf)
            .expect("buffer sized")
            .save_with_format(path, image::ImageFormat::Png)
    } else {
        let d = img.data();
        let mut buf = Vec::with_capacity(3 * n);
        for i in 0..n {
            buf.extend_from_slice(&[q(d[i]), q(d[n + i]), q(d[2 * n + i])]);
        }
        image::RgbImage::from_raw(w as u32, h as u32, buf)
            .expect("buffer sized")
            .save_with_format(path, image::ImageFormat::Png)
    };
    result.map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Decode {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    })
}
