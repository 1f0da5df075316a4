//! The primitive augmentation set consumed by YOCO cells and AugMix chains.
//!
//! Every op carries a magnitude in `[0, 1]` which [`OpRanges`] maps onto a
//! concrete parameter. Signed parameters (angles, shifts, brightness delta)
//! map `0.5` to the identity; scale and contrast factors map `0.5` to 1.0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::tensor::{clamp_unit, ImageTensor, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    FlipH,
    FlipV,
    Rotate,
    Translate,
    Scale,
    CropResize,
    Shear,
    Brightness,
    Contrast,
    Sharpen,
    Posterize,
    GaussianNoise,
    ColorJitter,
}

impl OpKind {
    pub const ALL: [OpKind; 13] = [
        OpKind::FlipH,
        OpKind::FlipV,
        OpKind::Rotate,
        OpKind::Translate,
        OpKind::Scale,
        OpKind::CropResize,
        OpKind::Shear,
        OpKind::Brightness,
        OpKind::Contrast,
        OpKind::Sharpen,
        OpKind::Posterize,
        OpKind::GaussianNoise,
        OpKind::ColorJitter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::FlipH => "flip_h",
            OpKind::FlipV => "flip_v",
            OpKind::Rotate => "rotate",
            OpKind::Translate => "translate",
            OpKind::Scale => "scale",
            OpKind::CropResize => "crop_resize",
            OpKind::Shear => "shear",
            OpKind::Brightness => "brightness",
            OpKind::Contrast => "contrast",
            OpKind::Sharpen => "sharpen",
            OpKind::Posterize => "posterize",
            OpKind::GaussianNoise => "gaussian_noise",
            OpKind::ColorJitter => "color_jitter",
        }
    }

    /// Whether applying this op consumes random draws.
    pub fn needs_rng(self) -> bool {
        matches!(
            self,
            OpKind::Translate | OpKind::CropResize | OpKind::GaussianNoise | OpKind::ColorJitter
        )
    }

    /// Default AugMix pool: everything except noise and sharpen.
    pub fn augmix_pool() -> Vec<OpKind> {
        Self::ALL
            .into_iter()
            .filter(|k| !matches!(k, OpKind::GaussianNoise | OpKind::Sharpen))
            .collect()
    }

    pub fn yoco_pool() -> Vec<OpKind> {
        Self::ALL.to_vec()
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OpKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param(format!("unknown op {s:?}")))
    }
}

/// Magnitude → parameter maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OpRanges {
    pub rotate_max_deg: f64,
    /// Fraction of the side length.
    pub translate_max_frac: f64,
    pub scale_min: f64,
    pub scale_max: f64,
    /// Smallest crop area kept by `crop_resize`.
    pub crop_area_min: f64,
    pub shear_max_deg: f64,
    pub brightness_max: f64,
    pub contrast_min: f64,
    pub contrast_max: f64,
    pub sharpen_max: f64,
    pub posterize_min_bits: u8,
    pub noise_sigma_max: f64,
    pub jitter_max: f64,
}

impl Default for OpRanges {
    fn default() -> Self {
        Self {
            rotate_max_deg: 30.0,
            translate_max_frac: 0.25,
            scale_min: 0.75,
            scale_max: 1.25,
            crop_area_min: 0.5,
            shear_max_deg: 16.0,
            brightness_max: 0.3,
            contrast_min: 0.5,
            contrast_max: 1.5,
            sharpen_max: 1.0,
            posterize_min_bits: 4,
            noise_sigma_max: 0.1,
            jitter_max: 0.3,
        }
    }
}

#[inline]
fn signed(m: f64, max: f64) -> f64 {
    (2.0 * m - 1.0) * max
}

#[inline]
fn unsigned_magnitude(value: f64, max: f64) -> f64 {
    (value / max + 1.0) / 2.0
}

impl OpRanges {
    /// The concrete parameter an op's magnitude maps to, for kinds that have
    /// one (`None` for flips).
    pub fn parameter(&self, kind: OpKind, m: f64) -> Option<f64> {
        let v = match kind {
            OpKind::FlipH | OpKind::FlipV => return None,
            OpKind::Rotate => signed(m, self.rotate_max_deg),
            OpKind::Translate => signed(m, self.translate_max_frac),
            OpKind::Scale => self.scale_min + m * (self.scale_max - self.scale_min),
            OpKind::CropResize => 1.0 - m * (1.0 - self.crop_area_min),
            OpKind::Shear => signed(m, self.shear_max_deg),
            OpKind::Brightness => signed(m, self.brightness_max),
            OpKind::Contrast => self.contrast_min + m * (self.contrast_max - self.contrast_min),
            OpKind::Sharpen => m * self.sharpen_max,
            OpKind::Posterize => {
                let span = 8.0 - self.posterize_min_bits as f64;
                (8.0 - (m * span).round()).max(1.0)
            }
            OpKind::GaussianNoise => m * self.noise_sigma_max,
            OpKind::ColorJitter => m * self.jitter_max,
        };
        Some(v)
    }

    /// Inverse of [`OpRanges::parameter`].
    pub fn magnitude_for(&self, kind: OpKind, value: f64) -> Option<f64> {
        let span = |lo: f64, hi: f64| (value - lo) / (hi - lo);
        let m = match kind {
            OpKind::FlipH | OpKind::FlipV => return None,
            OpKind::Rotate => unsigned_magnitude(value, self.rotate_max_deg),
            OpKind::Translate => unsigned_magnitude(value, self.translate_max_frac),
            OpKind::Scale => span(self.scale_min, self.scale_max),
            OpKind::CropResize => (1.0 - value) / (1.0 - self.crop_area_min),
            OpKind::Shear => unsigned_magnitude(value, self.shear_max_deg),
            OpKind::Brightness => unsigned_magnitude(value, self.brightness_max),
            OpKind::Contrast => span(self.contrast_min, self.contrast_max),
            OpKind::Sharpen => value / self.sharpen_max,
            OpKind::Posterize => (8.0 - value) / (8.0 - self.posterize_min_bits as f64),
            OpKind::GaussianNoise => value / self.noise_sigma_max,
            OpKind::ColorJitter => value / self.jitter_max,
        };
        Some(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveOp {
    pub kind: OpKind,
    pub magnitude: f64,
}

impl PrimitiveOp {
    pub fn new(kind: OpKind, magnitude: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&magnitude) {
            return Err(Error::param(format!(
                "{kind} magnitude {magnitude} outside [0,1]"
            )));
        }
        Ok(Self { kind, magnitude })
    }

    /// Op whose magnitude maps to `value` under `ranges`.
    pub fn with_parameter(kind: OpKind, value: f64, ranges: &OpRanges) -> Result<Self> {
        let m = ranges
            .magnitude_for(kind, value)
            .ok_or_else(|| Error::param(format!("{kind} takes no parameter")))?;
        Self::new(kind, m)
    }

    pub fn flip_h() -> Self {
        Self { kind: OpKind::FlipH, magnitude: 0.0 }
    }

    pub fn flip_v() -> Self {
        Self { kind: OpKind::FlipV, magnitude: 0.0 }
    }

    pub fn needs_rng(&self) -> bool {
        self.kind.needs_rng()
    }

    pub fn apply(&self, img: &ImageTensor, rng: &mut SeededRng, ranges: &OpRanges) -> ImageTensor {
        let m = self.magnitude;
        let p = ranges.parameter(self.kind, m).unwrap_or(0.0);
        match self.kind {
            OpKind::FlipH => flip(img, true),
            OpKind::FlipV => flip(img, false),
            OpKind::Rotate => rotate(img, p),
            OpKind::Translate => {
                let horizontal = rng.below(2) == 0;
                translate(img, p, horizontal)
            }
            OpKind::Scale => scale(img, p),
            OpKind::CropResize => crop_resize(img, p, rng),
            OpKind::Shear => shear(img, p),
            OpKind::Brightness => {
                let d = p as f32;
                img.map(|v| v + d)
            }
            OpKind::Contrast => {
                let mean = img.mean() as f32;
                let f = p as f32;
                img.map(|v| mean + f * (v - mean))
            }
            OpKind::Sharpen => sharpen(img, p as f32),
            OpKind::Posterize => posterize(img, p as u32),
            OpKind::GaussianNoise => {
                let sigma = p;
                img.map(|v| v + (sigma * rng.standard_normal()) as f32)
            }
            OpKind::ColorJitter => color_jitter(img, p, rng),
        }
    }
}

impl fmt::Display for PrimitiveOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({:.3})", self.kind, self.magnitude)
    }
}

/// Applies one primitive with the default [`OpRanges`].
pub fn apply_primitive(op: &PrimitiveOp, img: &ImageTensor, rng: &mut SeededRng) -> ImageTensor {
    op.apply(img, rng, &OpRanges::default())
}

/// Draws a chain of uniform length in `1..=depth_max`, ops sampled with
/// replacement from `pool`, magnitudes uniform in `[0, 1)`.
pub fn build_chain(
    rng: &mut SeededRng,
    depth_max: usize,
    pool: &[OpKind],
) -> Result<Vec<PrimitiveOp>> {
    if pool.is_empty() {
        return Err(Error::param("op pool is empty"));
    }
    if depth_max == 0 {
        return Err(Error::param("chain depth must be >= 1"));
    }
    let depth = 1 + rng.below(depth_max);
    Ok((0..depth)
        .map(|_| PrimitiveOp {
            kind: pool[rng.below(pool.len())],
            magnitude: rng.uniform(),
        })
        .collect())
}

/// Left-to-right composition with default ranges.
pub fn apply_chain(
    chain: &[PrimitiveOp],
    img: &ImageTensor,
    rng: &mut SeededRng,
) -> Result<ImageTensor> {
    apply_chain_with(chain, img, rng, &OpRanges::default())
}

/// Op `i` draws from `rng.derive(i)`, so an op's randomness does not depend
/// on how many draws earlier ops consumed.
pub fn apply_chain_with(
    chain: &[PrimitiveOp],
    img: &ImageTensor,
    rng: &mut SeededRng,
    ranges: &OpRanges,
) -> Result<ImageTensor> {
    let (first, rest) = chain
        .split_first()
        .ok_or_else(|| Error::param("empty augmentation chain"))?;
    let mut out = first.apply(img, &mut rng.derive(0), ranges);
    for (i, op) in rest.iter().enumerate() {
        out = op.apply(&out, &mut rng.derive(i as u64 + 1), ranges);
    }
    Ok(out)
}

fn flip(img: &ImageTensor, horizontal: bool) -> ImageTensor {
    let (c, h, w) = img.shape();
    let src = img.data();
    let mut data = Vec::with_capacity(src.len());
    for ch in 0..c {
        for y in 0..h {
            let sy = if horizontal { y } else { h - 1 - y };
            let row = &src[(ch * h + sy) * w..(ch * h + sy + 1) * w];
            if horizontal {
                data.extend(row.iter().rev());
            } else {
                data.extend_from_slice(row);
            }
        }
    }
    ImageTensor::from_raw(c, h, w, data)
}

fn centre(img: &ImageTensor) -> (f64, f64) {
    ((img.width() as f64 - 1.0) / 2.0, (img.height() as f64 - 1.0) / 2.0)
}

fn rotate(img: &ImageTensor, degrees: f64) -> ImageTensor {
    if degrees == 0.0 {
        return img.clone();
    }
    let (cx, cy) = centre(img);
    let (s, c) = degrees.to_radians().sin_cos();
    img.warp(|x, y| {
        let (dx, dy) = (x - cx, y - cy);
        (c * dx + s * dy + cx, -s * dx + c * dy + cy)
    })
}

fn translate(img: &ImageTensor, frac: f64, horizontal: bool) -> ImageTensor {
    if frac == 0.0 {
        return img.clone();
    }
    if horizontal {
        let shift = frac * img.width() as f64;
        img.warp(|x, y| (x - shift, y))
    } else {
        let shift = frac * img.height() as f64;
        img.warp(|x, y| (x, y - shift))
    }
}

fn scale(img: &ImageTensor, factor: f64) -> ImageTensor {
    if factor == 1.0 {
        return img.clone();
    }
    let (cx, cy) = centre(img);
    img.warp(|x, y| ((x - cx) / factor + cx, (y - cy) / factor + cy))
}

fn shear(img: &ImageTensor, degrees: f64) -> ImageTensor {
    if degrees == 0.0 {
        return img.clone();
    }
    let (_, cy) = centre(img);
    let k = degrees.to_radians().tan();
    img.warp(|x, y| (x - k * (y - cy), y))
}

fn crop_resize(img: &ImageTensor, area: f64, rng: &mut SeededRng) -> ImageTensor {
    let (_, h, w) = img.shape();
    let side = area.clamp(0.0, 1.0).sqrt();
    let cw = ((w as f64 * side).round() as usize).clamp(1, w);
    let ch = ((h as f64 * side).round() as usize).clamp(1, h);
    let x0 = rng.below(w - cw + 1);
    let y0 = rng.below(h - ch + 1);
    if cw == w && ch == h {
        return img.clone();
    }
    img.crop(Rect::new(x0, y0, cw, ch))
        .and_then(|c| c.resize(h, w))
        .expect("crop rectangle is inside the image")
}

fn sharpen(img: &ImageTensor, strength: f32) -> ImageTensor {
    if strength == 0.0 {
        return img.clone();
    }
    let (c, h, w) = img.shape();
    let mut data = Vec::with_capacity(img.data().len());
    for ch in 0..c {
        let p = img.plane(ch);
        for y in 0..h {
            for x in 0..w {
                let mut sum = 0.0f32;
                let mut n = 0.0f32;
                for yy in y.saturating_sub(1)..(y + 2).min(h) {
                    for xx in x.saturating_sub(1)..(x + 2).min(w) {
                        sum += p[yy * w + xx];
                        n += 1.0;
                    }
                }
                let v = p[y * w + x];
                data.push(clamp_unit(v + strength * (v - sum / n)));
            }
        }
    }
    ImageTensor::from_raw(c, h, w, data)
}

fn posterize(img: &ImageTensor, bits: u32) -> ImageTensor {
    let bits = bits.clamp(1, 8);
    let mask: u8 = !((1u16 << (8 - bits)) as u8).wrapping_sub(1);
    img.map(|v| ((v * 255.0).round() as u8 & mask) as f32 / 255.0)
}

fn color_jitter(img: &ImageTensor, strength: f64, rng: &mut SeededRng) -> ImageTensor {
    let (c, h, w) = img.shape();
    let gains: Vec<f32> = (0..c)
        .map(|_| (1.0 + (2.0 * rng.uniform() - 1.0) * strength) as f32)
        .collect();
    let n = h * w;
    let data = img
        .data()
        .iter()
        .enumerate()
        .map(|(i, &v)| clamp_unit(v * gains[i / n]))
        .collect();
    ImageTensor::from_raw(c, h, w, data)
}
