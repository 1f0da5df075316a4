use crate::error::{Error, Result};
use crate::rng::{sample_beta, SeededRng};
use crate::tensor::{convex_combine, ImageTensor, SoftLabel};

use super::{check_pair, MixOutput, MixTrace};

/// `Ĩ = λa + (1 − λ)b`, `ỹ = λya + (1 − λ)yb` with `λ ~ Beta(α, α)`.
pub fn mixup(
    a: &ImageTensor,
    ya: &SoftLabel,
    b: &ImageTensor,
    yb: &SoftLabel,
    alpha: f64,
    rng: &mut SeededRng,
) -> Result<MixOutput> {
    check_pair(a, ya, b, yb)?;
    let lambda = sample_beta(rng, alpha)?;
    mixup_with_lambda(a, ya, b, yb, lambda)
}

pub fn mixup_with_lambda(
    a: &ImageTensor,
    ya: &SoftLabel,
    b: &ImageTensor,
    yb: &SoftLabel,
    lambda: f64,
) -> Result<MixOutput> {
    check_pair(a, ya, b, yb)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("lambda {lambda} outside [0,1]")));
    }
    Ok(MixOutput {
        image: convex_combine(a, b, lambda)?,
        label: ya.mix(yb, lambda)?,
        aux_images: Vec::new(),
        lambda_effective: lambda,
        trace: MixTrace {
            lambdas: vec![lambda],
            ..Default::default()
        },
    })
}
