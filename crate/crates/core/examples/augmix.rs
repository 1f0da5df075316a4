//! Dirichlet-weighted augmentation chains plus the Jensen-Shannon consistency term.

use mixaug::mix::{augmix, js_consistency};
use mixaug::ops::OpKind;
use mixaug::pipeline::synthetic_image;
use mixaug::{MixParams, SeededRng, SoftLabel};

fn main() -> mixaug::Result<()> {
    let img = synthetic_image(5, 0, 32);
    let y = SoftLabel::one_hot(0, 3)?;
    let params = MixParams::default();
    let out = augmix(&img, &y, &params, &OpKind::augmix_pool(), &mut SeededRng::new(3), true)?;
    println!("chain weights {:?}", out.trace.chain_weights);
    println!("skip lambda {:?}", out.trace.lambdas);
    println!("views: 1 + {} aux", out.aux_images.len());

    // predictions a model might give on the clean image and both views
    let p = SoftLabel::new(vec![0.7, 0.2, 0.1])?;
    let q = SoftLabel::new(vec![0.6, 0.3, 0.1])?;
    let r = SoftLabel::new(vec![0.5, 0.2, 0.3])?;
    println!("js consistency {:.6}", js_consistency(&p, &q, &r)?);
    println!("js on identical inputs {:.6}", js_consistency(&p, &p, &p)?);
    Ok(())
}
