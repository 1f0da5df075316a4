//! Folds several random-resized crops of one image into a single view.

use mixaug::mix::cropmix;
use mixaug::pipeline::synthetic_image;
use mixaug::{FoldMode, MixParams, SeededRng, SoftLabel};

fn main() -> mixaug::Result<()> {
    let img = synthetic_image(3, 0, 48);
    let y = SoftLabel::one_hot(1, 2)?;
    for fold_mode in [FoldMode::Mixup, FoldMode::Cutmix] {
        let params = MixParams { num_crops: 3, fold_mode, ..MixParams::default() };
        params.validate()?;
        let out = cropmix(&img, &y, &params, &mut SeededRng::new(5))?;
        println!(
            "{fold_mode:?}: shape {:?}, label kept {:?}, fold lambdas {:?}",
            out.image.shape(),
            out.label.weights(),
            out.trace.lambdas
        );
    }
    Ok(())
}
