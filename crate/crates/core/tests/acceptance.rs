//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::panic;
use std::time::Instant;

use mixaug::dataset::{Manifest, ManifestEntry, Split};
use mixaug::metrics::{binary_auc, roc_auc, PredictionRecord};
use mixaug::mix::{cutmix, js_consistency, mixup, snapmix, yoco, yoco_grid, yoco_split, SplitAxis};
use mixaug::pipeline::{bench, Augmenter, Method};
use mixaug::{BoxMask, ImageTensor, SaliencyMap, SeededRng, SoftLabel};

use common::{cli, prepared_manifest, random_image, random_label, snapshot};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn label_mass() -> Outcome {
    const RUNS: usize = 10_000;
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for method in ["mixup", "cutmix", "snapmix"] {
        for i in 0..RUNS {
            let mut g = SeededRng::stream(0xA11CE, &[i as u64]);
            let c = if g.below(2) == 0 { 1 } else { 3 };
            let (h, w) = (2 + g.below(23), 2 + g.below(23));
            let k = 2 + g.below(9);
            let a = random_image(&mut g, c, h, w);
            let b = random_image(&mut g, c, h, w);
            let (ya, yb) = (random_label(&mut g, k), random_label(&mut g, k));
            let alpha = g.uniform_range(0.1, 4.0);
            let mut rng = g.derive(1);
            let out = match method {
                "mixup" => mixup(&a, &ya, &b, &yb, alpha, &mut rng),
                "cutmix" => cutmix(&a, &ya, &b, &yb, alpha, &mut rng),
                _ => {
                    let (sa, sb) = (
                        SaliencyMap::from_intensity(&a).unwrap(),
                        SaliencyMap::from_intensity(&b).unwrap(),
                    );
                    snapmix(&a, &ya, &sa, &b, &yb, &sb, alpha, &mut rng)
                }
            }
            .map_err(|e| format!("{method} run {i}: {e}"))?;
            let dev = (out.label.mass() - 1.0).abs();
            worst = worst.max(dev);
            ensure(dev <= 1e-6, || format!("{method} run {i}: label mass {}", out.label.mass()))?;
            ensure(out.label.weights().iter().all(|&v| v >= 0.0), || format!("{method} run {i}: negative weight"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("3x{RUNS} runs, max |mass-1| = {worst:.2e}, {secs:.2}s"))
}

fn mixup_convexity() -> Outcome {
    for i in 0..1_000u64 {
        let mut g = SeededRng::stream(0xC0417, &[i]);
        let c = 1 + 2 * g.below(2);
        let (h, w) = (1 + g.below(20), 1 + g.below(20));
        let k = 2 + g.below(6);
        let a = random_image(&mut g, c, h, w);
        let b = random_image(&mut g, c, h, w);
        let (ya, yb) = (random_label(&mut g, k), random_label(&mut g, k));
        let out = mixup(&a, &ya, &b, &yb, g.uniform_range(0.1, 3.0), &mut g.derive(1)).unwrap();
        let lam = out.lambda_effective;
        ensure(out.trace.lambdas == vec![lam], || format!("pair {i}: trace λ differs"))?;
        for (p, ((&o, &x), &y)) in out.image.data().iter().zip(a.data()).zip(b.data()).enumerate() {
            ensure(o >= x.min(y) && o <= x.max(y), || format!("pair {i} pixel {p}: {o} outside [{x},{y}]"))?;
        }
        for (j, ((&t, &p), &q)) in out.label.weights().iter().zip(ya.weights()).zip(yb.weights()).enumerate() {
            let expect = lam * p + (1.0 - lam) * q;
            ensure(t == expect, || format!("pair {i} class {j}: {t} != {expect}"))?;
        }
    }
    Ok("1000 pairs inside the operand envelope, labels exact".into())
}

fn cutmix_area() -> Outcome {
    const SIDE: usize = 64;
    let tol = 2.0 * (SIDE + SIDE) as f64 / (SIDE * SIDE) as f64;
    let zeros = ImageTensor::filled(1, SIDE, SIDE, 0.0).unwrap();
    let ones = ImageTensor::filled(1, SIDE, SIDE, 1.0).unwrap();
    let (ya, yb) = (SoftLabel::one_hot(0, 2).unwrap(), SoftLabel::one_hot(1, 2).unwrap());
    let (mut unclipped, mut worst) = (0, 0.0f64);
    for i in 0..1_000u64 {
        let mut g = SeededRng::stream(0xC07, &[i]);
        let alpha = g.uniform_range(0.2, 3.0);
        let out = cutmix(&zeros, &ya, &ones, &yb, alpha, &mut g).unwrap();
        // area oracle: pixels that came from the all-ones image
        let area = out.image.data().iter().filter(|&&v| v == 1.0).count();
        let expect = 1.0 - area as f64 / (SIDE * SIDE) as f64;
        ensure(out.lambda_effective == expect, || {
            format!("run {i}: λ_eff {} != 1 - {area}/4096", out.lambda_effective)
        })?;
        ensure(out.label.weights()[0] == expect, || format!("run {i}: label {:?}", out.label.weights()))?;
        if !out.trace.box_clipped {
            unclipped += 1;
            let lam = out.trace.lambdas[0];
            let dev = (expect - lam).abs();
            worst = worst.max(dev);
            ensure(dev <= tol, || format!("run {i}: |λ_eff - λ| = {dev} > {tol}"))?;
        }
    }
    Ok(format!("1000 runs exact; {unclipped} unclipped within {tol} (worst {worst:.4})"))
}

fn yoco_identity() -> Outcome {
    let mut checked = 0;
    for i in 0..100u64 {
        let mut g = SeededRng::stream(0x70C0, &[i]);
        let c = 1 + 2 * g.below(2);
        let (h, w) = (3 + g.below(30), 3 + g.below(30));
        let img = random_image(&mut g, c, h, w);
        let mut rng = g.derive(1);
        ensure(yoco(&img, &[], &[], &mut rng).unwrap() == img, || format!("image {i}: random axis"))?;
        for axis in [SplitAxis::Height, SplitAxis::Width] {
            ensure(yoco_split(&img, axis, &[], &[], &mut rng).unwrap() == img, || format!("image {i}: {axis:?}"))?;
            checked += 1;
        }
        for rows in 1..=3 {
            for cols in 1..=3 {
                let augs = vec![vec![Vec::new(); cols]; rows];
                ensure(yoco_grid(&img, &augs, &mut rng).unwrap() == img, || format!("image {i}: {rows}x{cols} grid"))?;
                checked += 1;
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} identity checks bitwise equal"))
}

// brute-force SPM mass of the pixels satisfying `keep`
fn mass(spm: &SaliencyMap, keep: impl Fn(usize, usize) -> bool) -> f64 {
    let mut total = 0.0;
    for y in 0..spm.height() {
        for x in 0..spm.width() {
            if keep(x, y) {
                total += spm.get(y, x);
            }
        }
    }
    total
}

fn snapmix_reduction() -> Outcome {
    let (ya, yb) = (SoftLabel::one_hot(0, 2).unwrap(), SoftLabel::one_hot(1, 2).unwrap());
    let mut worst: f64 = 0.0;
    let mut noop = 0;
    for i in 0..1_000u64 {
        let mut g = SeededRng::stream(0x5AA9, &[i]);
        let (h, w) = (4 + g.below(60), 4 + g.below(60));
        let a = random_image(&mut g, 3, h, w);
        let b = random_image(&mut g, 3, h, w);
        let uniform = SaliencyMap::uniform(h, w).unwrap();
        let out = snapmix(&a, &ya, &uniform, &b, &yb, &uniform, g.uniform_range(0.2, 3.0), &mut g).unwrap();
        let (ta, sb) = (out.trace.target_box.unwrap(), out.trace.source_box.unwrap());
        if ta.is_empty() || sb.is_empty() {
            noop += 1;
            ensure(out.label == ya, || format!("run {i}: empty box changed the label"))?;
            continue;
        }
        let sr_a = mass(&uniform, |x, y| !ta.contains(x, y));
        let sr_b = mass(&uniform, |x, y| sb.contains(x, y));
        let area_a = 1.0 - ta.area() as f64 / (w * h) as f64;
        let area_b = sb.area() as f64 / (w * h) as f64;
        let area_weight = area_a / (area_a + area_b);
        let oracle = sr_a / (sr_a + sr_b);
        for got in [out.label.weights()[0], out.lambda_effective] {
            let dev = (got - area_weight).abs().max((got - oracle).abs());
            worst = worst.max(dev);
            ensure(dev <= 1e-9, || format!("run {i}: weight {got} vs area {area_weight}, oracle {oracle}"))?;
        }
        ensure((out.label.weights()[1] - (1.0 - area_weight)).abs() <= 1e-9, || format!("run {i}: partner weight"))?;
        // equal boxes: exactly the CutMix weights
        if ta.w == sb.w && ta.h == sb.h {
            let cut = 1.0 - BoxMask::new(0, 0, ta.w, ta.h, w, h).unwrap().area_fraction();
            ensure((out.lambda_effective - cut).abs() <= 1e-9, || format!("run {i}: equal boxes differ from CutMix"))?;
        }
    }
    Ok(format!("1000 runs ({noop} empty-box no-ops), max deviation {worst:.1e}"))
}

fn js_bounds() -> Outcome {
    let ln3 = 3f64.ln();
    let mut g = SeededRng::new(0x15);
    for i in 0..2_000 {
        let k = 2 + g.below(8);
        let p = random_label(&mut g, k);
        let v = js_consistency(&p, &p, &p).unwrap();
        ensure(v == 0.0, || format!("equal triple {i}: {v}"))?;
    }
    let e = |c| SoftLabel::one_hot(c, 3).unwrap();
    for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1)] {
        let v = js_consistency(&e(x), &e(y), &e(z)).unwrap();
        ensure((v - ln3).abs() <= 1e-9, || format!("point masses {x}{y}{z}: {v}"))?;
    }
    for i in 0..10_000 {
        let k = 2 + g.below(8);
        let (p, q, r) = (random_label(&mut g, k), random_label(&mut g, k), random_label(&mut g, k));
        let v = js_consistency(&p, &q, &r).unwrap();
        ensure((0.0..=ln3).contains(&v), || format!("random triple {i}: {v}"))?;
    }
    Ok(format!("equal → 0, disjoint → ln 3 = {ln3:.12}, 10000 random triples in range"))
}

fn pairwise_auc(pos: &[f64], neg: &[f64]) -> Option<f64> {
    if pos.is_empty() || neg.is_empty() {
        return None;
    }
    let mut score = 0.0;
    for &p in pos {
        for &n in neg {
            if p > n {
                score += 1.0;
            } else if p == n {
                score += 0.5;
            }
        }
    }
    Some(score / (pos.len() * neg.len()) as f64)
}

fn auc_oracle() -> Outcome {
    let mut classes_checked = 0;
    for set in 0..500u64 {
        let mut g = SeededRng::stream(0xA0C, &[set]);
        let k = 2 + g.below(4);
        let n = 2 + g.below(199);
        let levels = [3, 10, 1000][g.below(3)];
        let records: Vec<PredictionRecord> = (0..n)
            .map(|i| {
                // first two records guarantee two classes are present
                let c = if i < 2 { i } else { g.below(k) };
                let s = (0..k).map(|_| g.below(levels) as f64 / levels as f64).collect();
                PredictionRecord::new(c, s).unwrap()
            })
            .collect();
        let mut brute = Vec::new();
        for c in 0..k {
            let pos: Vec<f64> = records.iter().filter(|r| r.true_class == c).map(|r| r.scores[c]).collect();
            let neg: Vec<f64> = records.iter().filter(|r| r.true_class != c).map(|r| r.scores[c]).collect();
            let got = binary_auc(&pos, &neg);
            let want = pairwise_auc(&pos, &neg);
            ensure(got == want, || format!("set {set} class {c}: {got:?} != {want:?}"))?;
            if let Some(v) = want {
                brute.push(v);
                classes_checked += 1;
            }
        }
        let macro_brute = brute.iter().sum::<f64>() / brute.len() as f64;
        let got = roc_auc(&records).unwrap();
        ensure(got == macro_brute, || format!("set {set}: macro {got} != {macro_brute}"))?;
    }
    Ok(format!("500 sets, {classes_checked} one-vs-rest AUCs exactly equal to pairwise counts"))
}

fn split_protocol() -> Outcome {
    // byte-identical through the CLI on a real tree
    let dir = tempfile::tempdir().unwrap();
    let manifest = prepared_manifest(dir.path(), &[("a", 10), ("b", 7), ("c", 1), ("d", 3)], 8, 1);
    let first = std::fs::read(&manifest).unwrap();
    let m = manifest.to_str().unwrap();
    let (code, _, err) = cli(&["split", m, "--ratio", "0.8", "--seed", "7"]);
    ensure(code == 0, || format!("second split exit {code}: {err}"))?;
    let second = std::fs::read(&manifest).unwrap();
    ensure(first == second, || "re-split changed the manifest bytes".into())?;
    let parsed = Manifest::read(&manifest).unwrap();
    let tens = parsed.entries.iter().filter(|e| e.class == 0 && e.split == Split::Train).count();
    ensure(tens == 8, || format!("10-sample class got {tens} train"))?;

    // stratification bound over many class sizes and seeds
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let entries: Vec<ManifestEntry> = (1..=40usize)
            .flat_map(|c| {
                (0..c).map(move |i| ManifestEntry {
                    path: format!("c{c:02}/{i:03}.png"),
                    class: c - 1,
                    split: Split::Unsplit,
                })
            })
            .collect();
        let base = Manifest {
            root: "/synthetic".into(),
            class_names: (1..=40).map(|c| format!("c{c:02}")).collect(),
            entries,
            seed: None,
            split_ratio: None,
            warnings: Vec::new(),
        };
        let a = base.split(0.8, seed).unwrap();
        ensure(a.to_jsonl() == base.split(0.8, seed).unwrap().to_jsonl(), || format!("seed {seed} not replayable"))?;
        for c in 0..40 {
            let n_c = c + 1;
            let train = a.entries.iter().filter(|e| e.class == c && e.split == Split::Train).count();
            let dev = (train as f64 / n_c as f64 - 0.8).abs();
            worst = worst.max(dev * n_c as f64);
            ensure(dev <= 1.0 / n_c as f64, || format!("seed {seed} n_c={n_c}: {train} train"))?;
        }
    }
    Ok(format!("CLI re-split byte-identical; 800 classes within 1/n_c (worst {worst:.2}/n_c)"))
}

fn end_to_end_replay() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let manifest = prepared_manifest(dir.path(), &[("cataract", 6), ("glaucoma", 5), ("normal", 4)], 20, 3);
    let m = manifest.to_str().unwrap();
    let mut files = 0;
    for method in Method::ALL {
        let mut trees = Vec::new();
        for (run, workers) in [(0, "1"), (1, "1"), (2, "4")] {
            let out = dir.path().join(format!("{method}-{run}"));
            let args = [
                "augment", "--manifest", m, "--out", out.to_str().unwrap(), "--method", method.name(),
                "--seed", "11", "--multiplier", "2", "--resize", "24", "--workers", workers, "--grid", "1x1",
            ];
            let (code, _, err) = cli(&args);
            ensure(code == 0, || format!("{method} run {run}: exit {code}: {err}"))?;
            trees.push(snapshot(&out));
        }
        ensure(trees[0] == trees[1], || format!("{method}: repeat run differs"))?;
        ensure(trees[0] == trees[2], || format!("{method}: 1 vs 4 workers differ"))?;
        files += trees[0].len();
    }
    Ok(format!("7 methods x 3 runs, {files} files per run set identical (1 and 4 workers)"))
}

fn throughput() -> Outcome {
    let methods: Vec<Method> = Method::ALL.into_iter().filter(|m| *m != Method::Baseline).collect();
    let report = bench(&Augmenter::default(), &methods, 1_000, 224, &[1, 4], 2024).map_err(|e| e.to_string())?;
    ensure(report.checksums_agree(), || format!("checksums differ:\n{report}"))?;
    let mut parts = Vec::new();
    for m in &methods {
        let row = report.row(*m, 1).unwrap();
        ensure(row.seconds < 60.0, || format!("{m}: {:.1}s single-threaded", row.seconds))?;
        parts.push(format!("{m} {:.1}s", row.seconds));
    }
    Ok(format!("1000 images at 224², 1 worker: {}; checksums worker-invariant", parts.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("label mass", label_mass),
        ("mixup convexity", mixup_convexity),
        ("cutmix area/label consistency", cutmix_area),
        ("yoco identity", yoco_identity),
        ("snapmix-cutmix reduction", snapmix_reduction),
        ("js consistency bounds", js_bounds),
        ("roc auc oracle equivalence", auc_oracle),
        ("split protocol", split_protocol),
        ("end-to-end replay", end_to_end_replay),
        ("throughput sanity", throughput),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<30} {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<30} {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
