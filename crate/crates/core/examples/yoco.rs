//! Augments image halves and grid cells independently.

use mixaug::mix::{yoco, yoco_grid};
use mixaug::ops::{build_chain, OpKind, PrimitiveOp};
use mixaug::pipeline::synthetic_image;
use mixaug::SeededRng;

fn main() -> mixaug::Result<()> {
    let img = synthetic_image(4, 0, 40);
    let mut rng = SeededRng::new(11);
    let pool = OpKind::yoco_pool();

    let aug1 = build_chain(&mut rng, 3, &pool)?;
    let aug2 = build_chain(&mut rng, 3, &pool)?;
    let names = |c: &[PrimitiveOp]| c.iter().map(|op| op.kind.name()).collect::<Vec<_>>();
    println!("half chains: {:?} | {:?}", names(&aug1), names(&aug2));
    let out = yoco(&img, &aug1, &aug2, &mut rng)?;
    println!("halves: shape {:?}, mean {:.4} -> {:.4}", out.shape(), img.mean(), out.mean());

    let same = yoco(&img, &[], &[], &mut rng)?;
    println!("empty chains leave the image unchanged: {}", same == img);

    let augs: Vec<Vec<Vec<PrimitiveOp>>> = (0..2)
        .map(|_| (0..3).map(|_| build_chain(&mut rng, 2, &pool)).collect())
        .collect::<mixaug::Result<_>>()?;
    let grid = yoco_grid(&img, &augs, &mut rng)?;
    println!("2x3 grid: shape {:?}, mean {:.4}", grid.shape(), grid.mean());
    Ok(())
}
