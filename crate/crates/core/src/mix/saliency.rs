use crate::error::{Error, Result};
use crate::tensor::ImageTensor;

use super::BoxMask;

/// Tolerance on the total mass of a normalized map.
const SPM_MASS_TOL: f64 = 1e-6;

/// A non-negative activation map. Once normalized to unit mass it is a
/// semantic percent map (SPM).
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    height: usize,
    width: usize,
    values: Vec<f64>,
    normalized: bool,
}

impl SaliencyMap {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || values.len() != height * width {
            return Err(Error::shape(
                format!("{height}x{width} map"),
                format!("{} values", values.len()),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::param(format!("saliency value {v} is negative or not finite")));
        }
        Ok(Self { height, width, values, normalized: false })
    }

    pub fn uniform(height: usize, width: usize) -> Result<Self> {
        make_spm(&Self::new(height, width, vec![1.0; height * width])?)
    }

    /// Luminance saliency, for when no class activation map is available.
    pub fn from_intensity(img: &ImageTensor) -> Result<Self> {
        Self::new(img.height(), img.width(), img.luminance())
    }

    /// Grayscale image as raw activations.
    pub fn from_image(img: &ImageTensor) -> Result<Self> {
        Self::new(img.height(), img.width(), img.plane(0).iter().map(|&v| v as f64).collect())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Bilinear resize (half-pixel centres). The result is not normalized.
    pub fn resize(&self, height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::param("saliency resize target must be at least 1x1"));
        }
        if height == self.height && width == self.width {
            return Ok(Self { normalized: false, ..self.clone() });
        }
        let tap = |d: usize, src: usize, dst: usize| {
            let s = ((d as f64 + 0.5) * src as f64 / dst as f64 - 0.5).clamp(0.0, (src - 1) as f64);
            let i0 = s.floor() as usize;
            (i0, (i0 + 1).min(src - 1), s - i0 as f64)
        };
        let mut values = Vec::with_capacity(height * width);
        for y in 0..height {
            let (y0, y1, fy) = tap(y, self.height, height);
            for x in 0..width {
                let (x0, x1, fx) = tap(x, self.width, width);
                let top = self.get(y0, x0) * (1.0 - fx) + self.get(y0, x1) * fx;
                let bot = self.get(y1, x0) * (1.0 - fx) + self.get(y1, x1) * fx;
                values.push(top * (1.0 - fy) + bot * fy);
            }
        }
        Self::new(height, width, values)
    }

    fn sum_where(&self, mut keep: impl FnMut(usize, usize) -> bool) -> f64 {
        let mut total = 0.0;
        for y in 0..self.height {
            for x in 0..self.width {
                if keep(x, y) {
                    total += self.values[y * self.width + x];
                }
            }
        }
        total
    }

    /// SPM mass outside `region`.
    pub(crate) fn complement_mass(&self, region: &BoxMask) -> Result<f64> {
        self.check_region(region)?;
        Ok(self.sum_where(|x, y| !region.contains(x, y)))
    }

    fn check_region(&self, region: &BoxMask) -> Result<()> {
        if !self.normalized {
            return Err(Error::param("semantic ratio needs a normalized map"));
        }
        if region.image_w != self.width || region.image_h != self.height {
            return Err(Error::shape(
                format!("region over {}x{}", self.height, self.width),
                format!("region over {}x{}", region.image_h, region.image_w),
            ));
        }
        Ok(())
    }
}

/// Normalizes a CAM to unit mass. An all-zero map becomes uniform.
pub fn make_spm(cam: &SaliencyMap) -> Result<SaliencyMap> {
    let total: f64 = cam.values.iter().sum();
    let values = if total > 0.0 {
        cam.values.iter().map(|v| v / total).collect()
    } else {
        let n = cam.values.len() as f64;
        vec![1.0 / n; cam.values.len()]
    };
    let spm = SaliencyMap {
        height: cam.height,
        width: cam.width,
        values,
        normalized: true,
    };
    debug_assert!((spm.values.iter().sum::<f64>() - 1.0).abs() < SPM_MASS_TOL);
    Ok(spm)
}

/// `SR = Σ_{p ∈ region} SPM(p)`.
pub fn semantic_ratio(spm: &SaliencyMap, region: &BoxMask) -> Result<f64> {
    spm.check_region(region)?;
    if region.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for y in region.y0..region.y0 + region.h {
        let row = &spm.values[y * spm.width + region.x0..y * spm.width + region.x0 + region.w];
        total += row.iter().sum::<f64>();
    }
    Ok(total)
}
