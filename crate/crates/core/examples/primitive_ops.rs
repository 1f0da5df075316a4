//! Applies every primitive op at a few magnitudes and reports the mean shift.

use mixaug::ops::{apply_primitive, OpKind, PrimitiveOp};
use mixaug::pipeline::synthetic_image;
use mixaug::SeededRng;

fn main() -> mixaug::Result<()> {
    let img = synthetic_image(8, 0, 32);
    let mut rng = SeededRng::new(1);
    println!("{:<14} {:>8} {:>8} {:>8}", "op", "m=0.1", "m=0.5", "m=1.0");
    for kind in OpKind::ALL {
        let mut cells = Vec::new();
        for m in [0.1, 0.5, 1.0] {
            let out = apply_primitive(&PrimitiveOp::new(kind, m)?, &img, &mut rng);
            cells.push(format!("{:>8.4}", out.mean() - img.mean()));
        }
        println!("{:<14} {}", kind.name(), cells.join(" "));
    }
    Ok(())
}
