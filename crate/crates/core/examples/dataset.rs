//! Ingests a class-per-folder tree, splits it and round-trips the manifest.

use mixaug::dataset::{save_png, Manifest, Split};
use mixaug::pipeline::synthetic_image;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let root = dir.path().join("fundus");
    for (c, (class, n)) in [("cataract", 5), ("glaucoma", 3), ("normal", 8)].into_iter().enumerate() {
        std::fs::create_dir_all(root.join(class))?;
        for i in 0..n {
            save_png(&synthetic_image(c as u64, i, 16), &root.join(class).join(format!("{i:03}.png")))?;
        }
    }
    let manifest = Manifest::ingest(&root)?.split(0.8, 7)?;
    println!("classes {:?}", manifest.class_names);
    for (c, name) in manifest.class_names.iter().enumerate() {
        let count = |s| manifest.entries.iter().filter(|e| e.class == c && e.split == s).count();
        println!("{name:<10} train {} test {}", count(Split::Train), count(Split::Test));
    }
    let path = dir.path().join("manifest.jsonl");
    manifest.write(&path)?;
    let back = Manifest::read(&path)?;
    println!("round trip equal: {}", back.entries == manifest.entries);
    let sample = back.load_sample(back.indices(Split::Test)[0], Some(8))?;
    println!("first test sample {:?} shape {:?}", sample.source_path, sample.image.shape());
    Ok(())
}
