//! Blends two synthetic images with a Beta-drawn coefficient.

use mixaug::mix::mixup;
use mixaug::pipeline::synthetic_image;
use mixaug::{SeededRng, SoftLabel};

fn main() -> mixaug::Result<()> {
    let a = synthetic_image(1, 0, 32);
    let b = synthetic_image(1, 1, 32);
    let ya = SoftLabel::one_hot(0, 4)?;
    let yb = SoftLabel::one_hot(2, 4)?;
    let mut rng = SeededRng::new(42);
    for alpha in [0.2, 1.0, 4.0] {
        let out = mixup(&a, &ya, &b, &yb, alpha, &mut rng)?;
        println!(
            "alpha {alpha:>4}: lambda {:.4}, label {:?}, mean pixel {:.4}",
            out.lambda_effective,
            out.label.weights(),
            out.image.mean()
        );
    }
    Ok(())
}
