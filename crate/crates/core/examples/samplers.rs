//! Seeded streams, Beta and Dirichlet draws.

use mixaug::{sample_beta, sample_dirichlet, SeededRng};

fn main() -> mixaug::Result<()> {
    let root = SeededRng::stream(2024, &[17, 0]);
    let mut replay = SeededRng::stream(2024, &[17, 0]);
    let (mut x, mut y) = (root.derive(1), replay.derive(1));
    println!("same path, same draw: {}", x.next_u64() == y.next_u64());
    println!("stream path {:?}", replay.stream_path());
    let _ = replay.next_u64();

    let mut rng = SeededRng::new(1);
    for alpha in [0.1, 1.0, 10.0] {
        let n = 20_000;
        let mean = (0..n).map(|_| sample_beta(&mut rng, alpha)).sum::<mixaug::Result<f64>>()? / n as f64;
        println!("Beta({alpha}, {alpha}) mean over {n}: {mean:.4}");
    }
    for alpha in [0.1, 1.0] {
        println!("Dirichlet({alpha}) k=3: {:?}", sample_dirichlet(&mut rng, alpha, 3)?);
    }
    Ok(())
}
