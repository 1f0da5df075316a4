#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mixaug::{ImageTensor, SeededRng, SoftLabel};

/// Random image with values in [0,1].
pub fn random_image(rng: &mut SeededRng, channels: usize, h: usize, w: usize) -> ImageTensor {
    let data = (0..channels * h * w).map(|_| rng.uniform() as f32).collect();
    ImageTensor::new(channels, h, w, data).unwrap()
}

/// Random soft label over `k` classes, sometimes one-hot.
pub fn random_label(rng: &mut SeededRng, k: usize) -> SoftLabel {
    if rng.below(3) == 0 {
        return SoftLabel::one_hot(rng.below(k), k).unwrap();
    }
    let raw: Vec<f64> = (0..k).map(|_| -rng.uniform_positive().ln()).collect();
    let total: f64 = raw.iter().sum();
    SoftLabel::new(raw.iter().map(|v| v / total).collect()).unwrap()
}

/// Writes `root/<class>/<i>.png` with distinct seeded contents.
pub fn write_tree(root: &Path, classes: &[(&str, usize)], side: u32, seed: u64) {
    let mut rng = SeededRng::new(seed);
    for (name, n) in classes {
        let dir = root.join(name);
        fs::create_dir_all(&dir).unwrap();
        for i in 0..*n {
            let img = image::RgbImage::from_fn(side, side + 3, |_, _| {
                image::Rgb([rng.below(256) as u8, rng.below(256) as u8, rng.below(256) as u8])
            });
            img.save(dir.join(format!("{i:03}.png"))).unwrap();
        }
    }
}

/// Relative path → bytes for every file below `root`.
pub fn snapshot(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(base: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for e in fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(base, &p, out);
            } else {
                out.insert(p.strip_prefix(base).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

/// Runs the CLI in-process with no environment seed.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    cli_env(args, None)
}

pub fn cli_env(args: &[&str], env_seed: Option<u64>) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = mixaug::cli::run_with(
        std::iter::once("mixaug").chain(args.iter().copied()),
        Ok(env_seed),
        &mut o,
        &mut e,
    );
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

/// Ingests and splits a fresh tree, returning the manifest path.
pub fn prepared_manifest(dir: &Path, classes: &[(&str, usize)], side: u32, seed: u64) -> PathBuf {
    let root = dir.join("data");
    write_tree(&root, classes, side, seed);
    let manifest = dir.join("manifest.jsonl");
    let m = manifest.to_str().unwrap();
    assert_eq!(cli(&["ingest", root.to_str().unwrap(), "--out", m]).0, 0);
    assert_eq!(cli(&["split", m, "--ratio", "0.8", "--seed", "7"]).0, 0);
    manifest
}
