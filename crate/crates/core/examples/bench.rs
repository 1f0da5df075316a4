//! Throughput of every method on synthetic images at one and all workers.

use mixaug::pipeline::{bench, Augmenter, Method};

fn main() -> mixaug::Result<()> {
    let n_images = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let methods: Vec<Method> = Method::ALL.into_iter().filter(|m| *m != Method::Baseline).collect();
    let mut counts = vec![1, workers];
    counts.dedup();
    let report = bench(&Augmenter::default(), &methods, n_images, 224, &counts, 0)?;
    print!("{report}");
    Ok(())
}
