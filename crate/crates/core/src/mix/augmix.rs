use crate::error::{Error, Result};
use crate::ops::{apply_chain_with, build_chain, OpKind, OpRanges};
use crate::params::MixParams;
use crate::rng::{sample_beta, sample_dirichlet, SeededRng};
use crate::tensor::{convex_combine, weighted_sum, ImageTensor, SoftLabel};

use super::{MixOutput, MixTrace};

/// `x_augmix = m·x_orig + (1 − m)·Σ wᵢ·augmentedᵢ`.
pub fn augmix_blend(
    orig: &ImageTensor,
    augmented: &[ImageTensor],
    weights: &[f64],
    m: f64,
) -> Result<ImageTensor> {
    let x_aug = weighted_sum(augmented, weights)?;
    convex_combine(orig, &x_aug, m)
}

pub fn augmix(
    img: &ImageTensor,
    y: &SoftLabel,
    params: &MixParams,
    op_pool: &[OpKind],
    rng: &mut SeededRng,
    consistency: bool,
) -> Result<MixOutput> {
    augmix_with(img, y, params, op_pool, &OpRanges::default(), rng, consistency)
}

/// AugMix with explicit op ranges. The primary view draws from
/// `rng.derive(0)` and the consistency view from `rng.derive(1)`, so turning
/// consistency on never changes the primary image.
pub fn augmix_with(
    img: &ImageTensor,
    y: &SoftLabel,
    params: &MixParams,
    op_pool: &[OpKind],
    ranges: &OpRanges,
    rng: &mut SeededRng,
    consistency: bool,
) -> Result<MixOutput> {
    params.validate()?;
    if op_pool.is_empty() {
        return Err(Error::param("AugMix op pool is empty"));
    }
    let (image, trace) = one_view(img, params, op_pool, ranges, &mut rng.derive(0))?;
    let mut out = MixOutput::label_preserving(image, y.clone(), trace);
    if consistency {
        let (aux, _) = one_view(img, params, op_pool, ranges, &mut rng.derive(1))?;
        out.aux_images.push(aux);
    }
    Ok(out)
}

fn one_view(
    img: &ImageTensor,
    params: &MixParams,
    op_pool: &[OpKind],
    ranges: &OpRanges,
    rng: &mut SeededRng,
) -> Result<(ImageTensor, MixTrace)> {
    let weights = sample_dirichlet(rng, params.alpha, params.num_chains)?;
    let m = sample_beta(rng, params.alpha)?;
    let augmented = (0..params.num_chains)
        .map(|i| {
            let mut chain_rng = rng.derive(i as u64);
            let chain = build_chain(&mut chain_rng, params.chain_depth_max, op_pool)?;
            apply_chain_with(&chain, img, &mut chain_rng, ranges)
        })
        .collect::<Result<Vec<_>>>()?;
    let image = augmix_blend(img, &augmented, &weights, m)?;
    let trace = MixTrace {
        lambdas: vec![m],
        chain_weights: weights,
        ..Default::default()
    };
    Ok((image, trace))
}
