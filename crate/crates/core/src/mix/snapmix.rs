use crate::error::{Error, Result};
use crate::rng::{sample_beta, SeededRng};
use crate::tensor::{ImageTensor, SoftLabel};

use super::cutmix::sample_box;
use super::saliency::{make_spm, semantic_ratio, SaliencyMap};
use super::{check_pair, BoxMask, MixOutput, MixTrace};

fn spm_for(cam: &SaliencyMap, img: &ImageTensor) -> Result<SaliencyMap> {
    let cam = if cam.height() != img.height() || cam.width() != img.width() {
        cam.resize(img.height(), img.width()).map_err(|e| {
            Error::shape(
                format!("CAM resizable to {}x{}", img.height(), img.width()),
                format!("{}x{} map ({e})", cam.height(), cam.width()),
            )
        })?
    } else {
        cam.clone()
    };
    make_spm(&cam)
}

/// Saliency-weighted cut-and-paste.
///
/// Independent CutMix boxes are drawn for the target (`a`) and source (`b`);
/// the source region is resized onto the target region. CAMs of a different
/// spatial size are resized to their image first.
#[allow(clippy::too_many_arguments)]
pub fn snapmix(
    a: &ImageTensor,
    ya: &SoftLabel,
    cam_a: &SaliencyMap,
    b: &ImageTensor,
    yb: &SoftLabel,
    cam_b: &SaliencyMap,
    alpha: f64,
    rng: &mut SeededRng,
) -> Result<MixOutput> {
    check_pair(a, ya, b, yb)?;
    let spm_a = spm_for(cam_a, a)?;
    let spm_b = spm_for(cam_b, b)?;
    let (w, h) = (a.width(), a.height());
    let lambda_a = sample_beta(rng, alpha)?;
    let (box_a, _) = sample_box(rng, lambda_a, w, h)?;
    let lambda_b = sample_beta(rng, alpha)?;
    let (box_b, _) = sample_box(rng, lambda_b, w, h)?;
    let mut out = snapmix_with_boxes(a, ya, &spm_a, b, yb, &spm_b, &box_a, &box_b)?;
    out.trace.lambdas = vec![lambda_a, lambda_b];
    Ok(out)
}

/// Deterministic core: pastes `b[box_b]` resized onto `box_a` of `a`.
///
/// `SR_a` is the SPM mass of `a` outside `box_a` (what remains visible) and
/// `SR_b` the SPM mass of `b` inside `box_b`. The label is
/// `SR_a/(SR_a+SR_b)·ya + SR_b/(SR_a+SR_b)·yb`, with area fractions standing
/// in when both ratios are zero. If either box is empty nothing is pasted
/// and `(a, ya)` is returned.
#[allow(clippy::too_many_arguments)]
pub fn snapmix_with_boxes(
    a: &ImageTensor,
    ya: &SoftLabel,
    spm_a: &SaliencyMap,
    b: &ImageTensor,
    yb: &SoftLabel,
    spm_b: &SaliencyMap,
    box_a: &BoxMask,
    box_b: &BoxMask,
) -> Result<MixOutput> {
    check_pair(a, ya, b, yb)?;
    let trace = MixTrace {
        target_box: Some(*box_a),
        source_box: Some(*box_b),
        ..Default::default()
    };
    if box_a.is_empty() || box_b.is_empty() {
        return Ok(MixOutput {
            image: a.clone(),
            label: ya.clone(),
            aux_images: Vec::new(),
            lambda_effective: 1.0,
            trace,
        });
    }
    let patch = b.crop(box_b.rect())?.resize(box_a.h, box_a.w)?;
    let mut image = a.clone();
    image.paste(&patch, box_a.x0, box_a.y0)?;

    let (mut sr_a, mut sr_b) = (spm_a.complement_mass(box_a)?, semantic_ratio(spm_b, box_b)?);
    if !(sr_a + sr_b > 0.0) {
        sr_a = 1.0 - box_a.area_fraction();
        sr_b = box_b.area_fraction();
    }
    let weight_a = (sr_a / (sr_a + sr_b)).clamp(0.0, 1.0);
    Ok(MixOutput {
        image,
        label: ya.mix(yb, weight_a)?,
        aux_images: Vec::new(),
        lambda_effective: weight_a,
        trace,
    })
}
