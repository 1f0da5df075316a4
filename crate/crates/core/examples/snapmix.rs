//! Saliency-weighted box mixing with explicit boxes and sampled ones.

use mixaug::mix::{make_spm, snapmix, snapmix_with_boxes, BoxMask, SaliencyMap};
use mixaug::pipeline::synthetic_image;
use mixaug::{SeededRng, SoftLabel};

fn main() -> mixaug::Result<()> {
    let a = synthetic_image(6, 0, 32);
    let b = synthetic_image(6, 1, 32);
    let ya = SoftLabel::one_hot(0, 2)?;
    let yb = SoftLabel::one_hot(1, 2)?;

    // activation concentrated in the top-left quadrant of each image
    let cam = SaliencyMap::new(8, 8, (0..64).map(|i| if i % 8 < 4 && i / 8 < 4 { 1.0 } else { 0.05 }).collect())?;
    let spm = make_spm(&cam.resize(32, 32)?)?;
    let box_a = BoxMask::new(0, 0, 16, 16, 32, 32)?;
    let box_b = BoxMask::new(16, 16, 16, 16, 32, 32)?;
    let out = snapmix_with_boxes(&a, &ya, &spm, &b, &yb, &spm, &box_a, &box_b)?;
    println!("salient box replaced by background: label {:?}", out.label.weights());

    let uniform = SaliencyMap::uniform(32, 32)?;
    let out = snapmix_with_boxes(&a, &ya, &uniform, &b, &yb, &uniform, &box_a, &box_a)?;
    println!("uniform saliency matches area weights: label {:?}", out.label.weights());

    let out = snapmix(&a, &ya, &cam, &b, &yb, &cam, 5.0, &mut SeededRng::new(9))?;
    println!("sampled: lambdas {:?}, label {:?}", out.trace.lambdas, out.label.weights());
    Ok(())
}
