mod common;

use std::fs;

use mixaug::dataset::{load_image, save_png, Manifest, Split};
use mixaug::{ImageTensor, SeededRng};

use common::{random_image, write_tree};

#[test]
fn four_eye_classes() {
    let dir = tempfile::tempdir().unwrap();
    write_tree(
        dir.path(),
        &[("cataract", 2), ("diabetic_retinopathy", 2), ("glaucoma", 1), ("normal", 3)],
        6,
        0,
    );
    let m = Manifest::ingest(dir.path()).unwrap();
    assert_eq!(m.num_classes(), 4);
    assert_eq!(m.class_names, ["cataract", "diabetic_retinopathy", "glaucoma", "normal"]);
    assert_eq!(m.entries.len(), 8);
    assert!(m.warnings.is_empty());
}

#[test]
fn empty_root() {
    let dir = tempfile::tempdir().unwrap();
    let m = Manifest::ingest(dir.path()).unwrap();
    assert_eq!(m.num_classes(), 0);
    assert!(m.entries.is_empty());
}

#[test]
fn two_classes_five_entries() {
    let dir = tempfile::tempdir().unwrap();
    write_tree(dir.path(), &[("b", 2), ("a", 3)], 5, 1);
    let m = Manifest::ingest(dir.path()).unwrap();
    assert_eq!(m.entries.len(), 5);
    let classes: Vec<usize> = m.entries.iter().map(|e| e.class).collect();
    assert_eq!(classes, [0, 0, 0, 1, 1]);
    let paths: Vec<&str> = m.entries.iter().map(|e| e.path.as_str()).collect();
    let mut sorted = paths.clone();
    sorted.sort();
    assert_eq!(paths, sorted);
}

#[test]
fn empty_class_and_corrupt_file_warn() {
    let dir = tempfile::tempdir().unwrap();
    write_tree(dir.path(), &[("good", 2)], 5, 2);
    fs::create_dir(dir.path().join("hollow")).unwrap();
    let png = fs::read(dir.path().join("good/000.png")).unwrap();
    fs::write(dir.path().join("good/broken.png"), &png[..png.len() / 2]).unwrap();
    fs::write(dir.path().join("good/notes.txt"), "not an image").unwrap();
    let m = Manifest::ingest(dir.path()).unwrap();
    assert_eq!(m.class_names, ["good", "hollow"]);
    assert_eq!(m.entries.len(), 2);
    assert_eq!(m.warnings.len(), 3, "{:?}", m.warnings);
    assert!(m.warnings.iter().any(|w| w.contains("broken.png")));
    assert!(m.warnings.iter().any(|w| w.contains("hollow")));
}

#[test]
fn missing_root_is_io_error() {
    assert!(matches!(
        Manifest::ingest(std::path::Path::new("/no/such/root")),
        Err(mixaug::Error::Io { .. })
    ));
}

#[test]
fn load_sample_decodes_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("only");
    fs::create_dir(&class).unwrap();
    image::RgbImage::from_fn(16, 16, |x, _| image::Rgb([255, (x * 16) as u8, 0]))
        .save(class.join("rgb.png"))
        .unwrap();
    image::GrayImage::from_pixel(4, 3, image::Luma([255])).save(class.join("gray.png")).unwrap();
    image::ImageBuffer::<image::Luma<u16>, _>::from_pixel(2, 2, image::Luma([65535u16]))
        .save(class.join("deep.png"))
        .unwrap();
    let other = dir.path().join("zother");
    fs::create_dir(&other).unwrap();
    fs::copy(class.join("gray.png"), other.join("g.png")).unwrap();

    let m = Manifest::ingest(dir.path()).unwrap();
    let by_name = |n: &str| m.entries.iter().position(|e| e.path.ends_with(n)).unwrap();

    let rgb = m.load_sample(by_name("rgb.png"), None).unwrap();
    assert_eq!(rgb.image.shape(), (3, 16, 16));
    assert_eq!(rgb.image.get(0, 5, 5), 1.0);
    assert_eq!(rgb.image.get(1, 0, 1), 16.0 / 255.0);
    assert_eq!(rgb.label.weights(), [1.0, 0.0]);

    let gray = m.load_sample(by_name("gray.png"), None).unwrap();
    assert_eq!(gray.image.shape(), (1, 3, 4));
    assert!(gray.image.data().iter().all(|&v| v == 1.0));

    let deep = m.load_sample(by_name("deep.png"), Some(5)).unwrap();
    assert_eq!(deep.image.shape(), (1, 5, 5));
    assert!(deep.image.data().iter().all(|&v| v == 1.0));

    let g = m.load_sample(by_name("g.png"), None).unwrap();
    assert_eq!(g.label.weights(), [0.0, 1.0]);
    for i in 0..m.entries.len() {
        let s = m.load_sample(i, Some(8)).unwrap();
        assert_eq!(s.label.weights().iter().filter(|&&w| w != 0.0).count(), 1);
        assert_eq!(s.label.mass(), 1.0);
    }
    assert!(m.load_sample(99, None).is_err());
}

#[test]
fn png_round_trip_is_exact_on_8bit_values() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = SeededRng::new(3);
    for c in [1, 3] {
        let img = random_image(&mut rng, c, 7, 9);
        let q = img.map(|v| (v * 255.0).round() / 255.0);
        let path = dir.path().join(format!("{c}.png"));
        save_png(&q, &path).unwrap();
        assert_eq!(load_image(&path).unwrap(), q);
    }
    let white = ImageTensor::filled(3, 2, 2, 1.0).unwrap();
    save_png(&white, &dir.path().join("w.png")).unwrap();
    assert_eq!(load_image(&dir.path().join("w.png")).unwrap(), white);
}

#[test]
fn manifest_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write_tree(&dir.path().join("data"), &[("x", 4), ("y", 6)], 4, 4);
    let m = Manifest::ingest(&dir.path().join("data")).unwrap().split(0.8, 12).unwrap();
    let path = dir.path().join("m.jsonl");
    m.write(&path).unwrap();
    let bytes = fs::read(&path).unwrap();
    let back = Manifest::read(&path).unwrap();
    assert_eq!(back.entries, m.entries);
    assert_eq!(back.seed, Some(12));
    assert_eq!(back.split_ratio, Some(0.8));
    back.write(&path).unwrap();
    assert_eq!(fs::read(&path).unwrap(), bytes);
    assert_eq!(back.indices(Split::Train).len(), 3 + 4);
}
