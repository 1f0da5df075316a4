//! End-to-end run: ingest, split, augment with a worker pool, replay.

use std::fs;

use mixaug::dataset::{save_png, Manifest};
use mixaug::pipeline::{augment, read_output_rows, synthetic_image, Augmenter, Method, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let root = dir.path().join("data");
    for c in 0..3u64 {
        fs::create_dir_all(root.join(format!("class_{c}")))?;
        for i in 0..6 {
            save_png(&synthetic_image(c, i, 24), &root.join(format!("class_{c}")).join(format!("{i}.png")))?;
        }
    }
    let manifest = Manifest::ingest(&root)?.split(0.8, 1)?;

    let run = |workers: usize, out: &str| -> mixaug::Result<Vec<u8>> {
        let cfg = RunConfig {
            augment: Augmenter::new(Method::Cutmix),
            seed: 99,
            out: Some(dir.path().join(out)),
            multiplier: 2,
            resize: 24,
            workers,
            ..RunConfig::default()
        };
        let summary = augment(&cfg, &manifest)?;
        println!("{workers} workers: {} train rows, {} test rows", summary.train_rows, summary.test_rows);
        Ok(fs::read(dir.path().join(out).join("manifest.jsonl")).expect("manifest written"))
    };
    let one = run(1, "out1")?;
    let four = run(4, "out4")?;
    println!("identical manifests across worker counts: {}", one == four);

    let rows = read_output_rows(&dir.path().join("out1/manifest.jsonl"))?;
    if let Some(row) = rows.iter().find(|r| r.partner.is_some()) {
        println!("{} <- {} + {:?}, lambda {:.4}", row.path, row.source, row.partner, row.lambda_effective);
    }
    Ok(())
}
