use crate::error::Result;
use crate::params::{FoldMode, MixParams};
use crate::rng::{sample_beta, SeededRng};
use crate::tensor::{convex_combine, ImageTensor, Rect, SoftLabel};

use super::cutmix::sample_box;
use super::{MixOutput, MixTrace};

/// Random resized crop: area fraction `s ~ U[s_min, s_max]` with the
/// source aspect ratio, uniform position, resized back to the source shape.
pub fn random_resized_crop(
    src: &ImageTensor,
    scale_min: f64,
    scale_max: f64,
    rng: &mut SeededRng,
) -> Result<ImageTensor> {
    let (_, h, w) = src.shape();
    let s = rng.uniform_range(scale_min, scale_max);
    let side = s.sqrt();
    let cw = ((w as f64 * side).round() as usize).clamp(1, w);
    let ch = ((h as f64 * side).round() as usize).clamp(1, h);
    let x0 = rng.below(w - cw + 1);
    let y0 = rng.below(h - ch + 1);
    src.crop(Rect::new(x0, y0, cw, ch))?.resize(h, w)
}

/// Multi-scale crops of one image folded left to right,
/// `((I₁ ⊕ I₂) ⊕ I₃) …`, with a fresh `λ ~ Beta(α, α)` per fold. The label
/// is returned unchanged.
pub fn cropmix(
    src: &ImageTensor,
    y: &SoftLabel,
    params: &MixParams,
    rng: &mut SeededRng,
) -> Result<MixOutput> {
    params.validate()?;
    let crops = (0..params.num_crops)
        .map(|i| {
            random_resized_crop(
                src,
                params.crop_scale_min,
                params.crop_scale_max,
                &mut rng.derive(i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    cropmix_with(&crops, y, params, rng)
}

/// Folds pre-computed views; each fold draws its `λ` (and, in CutMix mode,
/// its box) from `rng`.
pub fn cropmix_with(
    views: &[ImageTensor],
    y: &SoftLabel,
    params: &MixParams,
    rng: &mut SeededRng,
) -> Result<MixOutput> {
    params.validate()?;
    let (first, rest) = views
        .split_first()
        .ok_or_else(|| crate::Error::param("cropmix needs at least one view"))?;
    let mut acc = first.clone();
    let mut trace = MixTrace::default();
    for view in rest {
        acc.same_shape(view)?;
        let lambda = sample_beta(rng, params.alpha)?;
        trace.lambdas.push(lambda);
        acc = match params.fold_mode {
            FoldMode::Mixup => convex_combine(&acc, view, lambda)?,
            FoldMode::Cutmix => {
                let (bx, _) = sample_box(rng, lambda, acc.width(), acc.height())?;
                if !bx.is_empty() {
                    acc.paste(&view.crop(bx.rect())?, bx.x0, bx.y0)?;
                }
                acc
            }
        };
    }
    Ok(MixOutput::label_preserving(acc, y.clone(), trace))
}
