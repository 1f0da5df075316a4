use crate::error::{Error, Result};
use crate::rng::{sample_beta, SeededRng};
use crate::tensor::{ImageTensor, SoftLabel};

use super::{check_pair, BoxMask, MixOutput, MixTrace};

/// Box geometry for a given `λ` and top-left anchor `(r_x, r_y)`.
///
/// Sides are `W·√(1−λ)` and `H·√(1−λ)` rounded to the nearest pixel, then
/// clipped against the right and bottom borders. A side that rounds to zero
/// yields an empty box. Returns the box and whether clipping occurred.
pub fn cut_box(lambda: f64, r_x: f64, r_y: f64, width: usize, height: usize) -> Result<(BoxMask, bool)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("lambda {lambda} outside [0,1]")));
    }
    let frac = (1.0 - lambda).sqrt();
    let side_w = (width as f64 * frac).round() as usize;
    let side_h = (height as f64 * frac).round() as usize;
    let x0 = (r_x.max(0.0).floor() as usize).min(width - 1);
    let y0 = (r_y.max(0.0).floor() as usize).min(height - 1);
    if side_w == 0 || side_h == 0 {
        return Ok((BoxMask { x0, y0, w: 0, h: 0, image_w: width, image_h: height }, false));
    }
    let w = side_w.min(width - x0);
    let h = side_h.min(height - y0);
    let clipped = w != side_w || h != side_h;
    Ok((BoxMask { x0, y0, w, h, image_w: width, image_h: height }, clipped))
}

/// Draws `r_x ~ U(0, W)`, `r_y ~ U(0, H)` and builds the box for `λ`.
pub fn sample_box(rng: &mut SeededRng, lambda: f64, width: usize, height: usize) -> Result<(BoxMask, bool)> {
    let r_x = rng.uniform() * width as f64;
    let r_y = rng.uniform() * height as f64;
    cut_box(lambda, r_x, r_y, width, height)
}

pub fn cutmix(
    a: &ImageTensor,
    ya: &SoftLabel,
    b: &ImageTensor,
    yb: &SoftLabel,
    alpha: f64,
    rng: &mut SeededRng,
) -> Result<MixOutput> {
    check_pair(a, ya, b, yb)?;
    let lambda = sample_beta(rng, alpha)?;
    let (bx, clipped) = sample_box(rng, lambda, a.width(), a.height())?;
    let mut out = cutmix_with_box(a, ya, b, yb, &bx)?;
    out.trace.lambdas = vec![lambda];
    out.trace.box_clipped = clipped;
    Ok(out)
}

/// Pastes `b`'s pixels inside `bx` over `a`; label mass follows the visible
/// pixel counts: `λ_eff = 1 − area(bx)/(W·H)`.
pub fn cutmix_with_box(
    a: &ImageTensor,
    ya: &SoftLabel,
    b: &ImageTensor,
    yb: &SoftLabel,
    bx: &BoxMask,
) -> Result<MixOutput> {
    check_pair(a, ya, b, yb)?;
    if bx.image_w != a.width() || bx.image_h != a.height() {
        return Err(Error::shape(
            format!("box over {}x{}", a.width(), a.height()),
            format!("box over {}x{}", bx.image_w, bx.image_h),
        ));
    }
    let mut image = a.clone();
    if !bx.is_empty() {
        image.paste(&b.crop(bx.rect())?, bx.x0, bx.y0)?;
    }
    let lambda_effective = 1.0 - bx.area_fraction();
    Ok(MixOutput {
        image,
        label: ya.mix(yb, lambda_effective)?,
        aux_images: Vec::new(),
        lambda_effective,
        trace: MixTrace {
            target_box: Some(*bx),
            source_box: Some(*bx),
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_fraction_at_point_seven() {
        let (bx, clipped) = cut_box(0.70, 0.0, 0.0, 1000, 1000).unwrap();
        assert!(!clipped);
        // W·√0.3 = 547.72…
        assert_eq!((bx.w, bx.h), (548, 548));
        assert!((bx.w as f64 / 1000.0 - 0.3f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn lambda_one_is_empty() {
        let a = ImageTensor::filled(1, 8, 8, 0.1).unwrap();
        let b = ImageTensor::filled(1, 8, 8, 0.9).unwrap();
        let ya = SoftLabel::one_hot(0, 2).unwrap();
        let yb = SoftLabel::one_hot(1, 2).unwrap();
        let (bx, _) = cut_box(1.0, 3.2, 4.7, 8, 8).unwrap();
        assert!(bx.is_empty());
        let out = cutmix_with_box(&a, &ya, &b, &yb, &bx).unwrap();
        assert_eq!(out.image, a);
        assert_eq!(out.label, ya);
        assert_eq!(out.lambda_effective, 1.0);
    }

    #[test]
    fn interior_quarter_box() {
        let a = ImageTensor::filled(3, 64, 64, 0.0).unwrap();
        let b = ImageTensor::filled(3, 64, 64, 1.0).unwrap();
        let ya = SoftLabel::one_hot(0, 2).unwrap();
        let yb = SoftLabel::one_hot(1, 2).unwrap();
        let bx = BoxMask::new(10, 20, 32, 32, 64, 64).unwrap();
        let out = cutmix_with_box(&a, &ya, &b, &yb, &bx).unwrap();
        let pasted = out.image.plane(0).iter().filter(|&&v| v == 1.0).count();
        assert_eq!(pasted, 1024);
        assert_eq!(out.lambda_effective, 0.75);
        assert_eq!(out.label.weights(), &[0.75, 0.25]);
    }

    #[test]
    fn overflowing_box_is_clipped() {
        let (bx, clipped) = cut_box(0.0, 50.5, 3.0, 64, 64).unwrap();
        assert!(clipped);
        assert_eq!((bx.x0, bx.y0, bx.w, bx.h), (50, 3, 14, 61));
    }
}
