//! Pastes a box from one image into another and reports the area-corrected label.

use mixaug::mix::{cut_box, cutmix, cutmix_with_box};
use mixaug::pipeline::synthetic_image;
use mixaug::{SeededRng, SoftLabel};

fn main() -> mixaug::Result<()> {
    let a = synthetic_image(2, 0, 64);
    let b = synthetic_image(2, 1, 64);
    let ya = SoftLabel::one_hot(0, 3)?;
    let yb = SoftLabel::one_hot(1, 3)?;

    // fixed lambda, box anchored well inside the image
    let (bx, clipped) = cut_box(0.7, 10.0, 12.0, 64, 64)?;
    let out = cutmix_with_box(&a, &ya, &b, &yb, &bx)?;
    println!("box {}x{} at ({}, {}), clipped {clipped}", bx.w, bx.h, bx.x0, bx.y0);
    println!("effective lambda {:.4}, label {:?}", out.lambda_effective, out.label.weights());

    let mut rng = SeededRng::new(7);
    for _ in 0..3 {
        let out = cutmix(&a, &ya, &b, &yb, 1.0, &mut rng)?;
        println!(
            "drawn lambda {:.4} -> effective {:.4} (clipped {})",
            out.trace.lambdas[0], out.lambda_effective, out.trace.box_clipped
        );
    }
    Ok(())
}
