//! Image tensors, soft labels and the shared pixel kernels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for label mass checks.
pub const LABEL_MASS_TOL: f64 = 1e-6;

/// A `C×H×W` float image with values in `[0, 1]`, stored channel-major then
/// row-major.
#[derive(Clone, PartialEq)]
pub struct ImageTensor {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f32>,
}

impl fmt::Debug for ImageTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImageTensor")
            .field("channels", &self.channels)
            .field("height", &self.height)
            .field("width", &self.width)
            .finish_non_exhaustive()
    }
}

/// A sub-rectangle of an image in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x0: usize, y0: usize, w: usize, h: usize) -> Self {
        Self { x0, y0, w, h }
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn is_empty(&self) -> bool {
        self.w == 0 || self.h == 0
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x0 + self.w && y >= self.y0 && y < self.y0 + self.h
    }
}

impl ImageTensor {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<f32>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidTensor(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if height == 0 || width == 0 {
            return Err(Error::InvalidTensor(format!(
                "empty spatial extent {height}x{width}"
            )));
        }
        if data.len() != channels * height * width {
            return Err(Error::InvalidTensor(format!(
                "data length {} != {channels}*{height}*{width}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidTensor(format!("pixel value {bad} outside [0,1]")));
        }
        Ok(Self {
            channels,
            height,
            width,
            data,
        })
    }

    /// Builds an image from values already known to be in range.
    pub(crate) fn from_raw(channels: usize, height: usize, width: usize, data: Vec<f32>) -> Self {
        debug_assert_eq!(data.len(), channels * height * width);
        debug_assert!(data.iter().all(|v| (0.0..=1.0).contains(v)));
        Self {
            channels,
            height,
            width,
            data,
        }
    }

    pub fn filled(channels: usize, height: usize, width: usize, value: f32) -> Result<Self> {
        Self::new(channels, height, width, vec![value; channels * height * width])
    }

    /// Builds an image from `f(c, y, x)`; values are clamped into `[0, 1]`.
    pub fn from_fn(
        channels: usize,
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize, usize) -> f32,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(channels * height * width);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    data.push(clamp_unit(f(c, y, x)));
                }
            }
        }
        Self::new(channels, height, width, data)
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f32 {
        self.data[(c * self.height + y) * self.width + x]
    }

    pub fn plane(&self, c: usize) -> &[f32] {
        let n = self.height * self.width;
        &self.data[c * n..(c + 1) * n]
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::shape(
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ))
        }
    }

    pub fn full_rect(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    /// Copies out a sub-rectangle.
    pub fn crop(&self, r: Rect) -> Result<Self> {
        if r.is_empty() || r.x0 + r.w > self.width || r.y0 + r.h > self.height {
            return Err(Error::param(format!(
                "crop {r:?} outside {}x{} image",
                self.height, self.width
            )));
        }
        let mut data = Vec::with_capacity(self.channels * r.w * r.h);
        for c in 0..self.channels {
            for y in r.y0..r.y0 + r.h {
                let row = (c * self.height + y) * self.width;
                data.extend_from_slice(&self.data[row + r.x0..row + r.x0 + r.w]);
            }
        }
        Ok(Self::from_raw(self.channels, r.h, r.w, data))
    }

    /// Writes `patch` into this image with its top-left corner at `(x0, y0)`.
    pub fn paste(&mut self, patch: &Self, x0: usize, y0: usize) -> Result<()> {
        if patch.channels != self.channels
            || x0 + patch.width > self.width
            || y0 + patch.height > self.height
        {
            return Err(Error::shape(
                format!("patch fitting in {:?}", self.shape()),
                format!("{:?} at ({x0},{y0})", patch.shape()),
            ));
        }
        for c in 0..self.channels {
            for y in 0..patch.height {
                let dst = (c * self.height + y0 + y) * self.width + x0;
                let src = (c * patch.height + y) * patch.width;
                self.data[dst..dst + patch.width]
                    .copy_from_slice(&patch.data[src..src + patch.width]);
            }
        }
        Ok(())
    }

    /// Concatenates images along the height axis (all must share C and W).
    pub fn concat_rows(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::param("nothing to concatenate"))?;
        let (c, w) = (first.channels, first.width);
        if parts.iter().any(|p| p.channels != c || p.width != w) {
            return Err(Error::shape("parts with equal channels/width", "ragged parts"));
        }
        let h: usize = parts.iter().map(|p| p.height).sum();
        let mut data = Vec::with_capacity(c * h * w);
        for ch in 0..c {
            for p in parts {
                data.extend_from_slice(p.plane(ch));
            }
        }
        Ok(Self::from_raw(c, h, w, data))
    }

    /// Concatenates images along the width axis (all must share C and H).
    pub fn concat_cols(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::param("nothing to concatenate"))?;
        let (c, h) = (first.channels, first.height);
        if parts.iter().any(|p| p.channels != c || p.height != h) {
            return Err(Error::shape("parts with equal channels/height", "ragged parts"));
        }
        let w: usize = parts.iter().map(|p| p.width).sum();
        let mut data = Vec::with_capacity(c * h * w);
        for ch in 0..c {
            for y in 0..h {
                for p in parts {
                    let row = (ch * h + y) * p.width;
                    data.extend_from_slice(&p.data[row..row + p.width]);
                }
            }
        }
        Ok(Self::from_raw(c, h, w, data))
    }

    /// Grayscale images are replicated to three channels; RGB is returned as is.
    pub fn to_rgb(&self) -> Self {
        if self.channels == 3 {
            return self.clone();
        }
        let mut data = Vec::with_capacity(3 * self.data.len());
        for _ in 0..3 {
            data.extend_from_slice(&self.data);
        }
        Self::from_raw(3, self.height, self.width, data)
    }

    /// Per-pixel luminance (ITU-R BT.601 weights for RGB).
    pub fn luminance(&self) -> Vec<f64> {
        if self.channels == 1 {
            return self.data.iter().map(|&v| v as f64).collect();
        }
        let (r, g, b) = (self.plane(0), self.plane(1), self.plane(2));
        r.iter()
            .zip(g)
            .zip(b)
            .map(|((&r, &g), &b)| 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
            .collect()
    }

    /// Bilinear resize with half-pixel centres and edge clamping.
    pub fn resize(&self, height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::param("resize target must be at least 1x1"));
        }
        if height == self.height && width == self.width {
            return Ok(self.clone());
        }
        let plane_in = self.height * self.width;
        let mut data = Vec::with_capacity(self.channels * height * width);
        let xs = resize_taps(self.width, width);
        let ys = resize_taps(self.height, height);
        for c in 0..self.channels {
            let plane = &self.data[c * plane_in..(c + 1) * plane_in];
            for &(y0, y1, fy) in &ys {
                let r0 = &plane[y0 * self.width..(y0 + 1) * self.width];
                let r1 = &plane[y1 * self.width..(y1 + 1) * self.width];
                for &(x0, x1, fx) in &xs {
                    let top = r0[x0] + (r0[x1] - r0[x0]) * fx;
                    let bot = r1[x0] + (r1[x1] - r1[x0]) * fx;
                    data.push(clamp_unit(top + (bot - top) * fy));
                }
            }
        }
        Ok(Self::from_raw(self.channels, height, width, data))
    }

    /// Applies `f` to every pixel value and clamps the result into `[0, 1]`.
    pub fn map(&self, mut f: impl FnMut(f32) -> f32) -> Self {
        let data = self.data.iter().map(|&v| clamp_unit(f(v))).collect();
        Self::from_raw(self.channels, self.height, self.width, data)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().map(|&v| v as f64).sum::<f64>() / self.data.len() as f64
    }

    /// Resamples through an inverse mapping `dst (x, y) -> src (sx, sy)`
    /// with bilinear weights; samples outside the source read as 0.
    pub(crate) fn warp(&self, inverse: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let (h, w) = (self.height, self.width);
        let mut coords = Vec::with_capacity(h * w);
        for y in 0..h {
            for x in 0..w {
                coords.push(inverse(x as f64, y as f64));
            }
        }
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.channels {
            let plane = self.plane(c);
            for &(sx, sy) in &coords {
                data.push(clamp_unit(sample_zero(plane, w, h, sx, sy)));
            }
        }
        Self::from_raw(self.channels, h, w, data)
    }
}

#[inline]
pub(crate) fn clamp_unit(v: f32) -> f32 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

fn resize_taps(src: usize, dst: usize) -> Vec<(usize, usize, f32)> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|d| {
            let s = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
            let i0 = s.floor() as usize;
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, (s - i0 as f64) as f32)
        })
        .collect()
}

#[inline]
fn sample_zero(plane: &[f32], w: usize, h: usize, sx: f64, sy: f64) -> f32 {
    let fx0 = sx.floor();
    let fy0 = sy.floor();
    let tx = (sx - fx0) as f32;
    let ty = (sy - fy0) as f32;
    let (x0, y0) = (fx0 as i64, fy0 as i64);
    let at = |x: i64, y: i64| -> f32 {
        if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 {
            0.0
        } else {
            plane[y as usize * w + x as usize]
        }
    };
    if tx == 0.0 && ty == 0.0 {
        return at(x0, y0);
    }
    let top = at(x0, y0) * (1.0 - tx) + at(x0 + 1, y0) * tx;
    let bot = at(x0, y0 + 1) * (1.0 - tx) + at(x0 + 1, y0 + 1) * tx;
    top * (1.0 - ty) + bot * ty
}

/// `out[p] = λ·a[p] + (1 − λ)·b[p]`, held inside the operand envelope.
pub fn convex_combine(a: &ImageTensor, b: &ImageTensor, lambda: f64) -> Result<ImageTensor> {
    a.same_shape(b)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("lambda {lambda} outside [0,1]")));
    }
    let l = lambda as f32;
    let data = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| {
            let v = l * x + (1.0 - l) * y;
            // rounding can leave v one ulp outside [min, max]
            v.clamp(x.min(y), x.max(y))
        })
        .collect();
    Ok(ImageTensor::from_raw(a.channels, a.height, a.width, data))
}

/// Weighted pixel sum `Σ wᵢ·imgᵢ`, clamped into `[0, 1]`.
pub fn weighted_sum(images: &[ImageTensor], weights: &[f64]) -> Result<ImageTensor> {
    let first = images.first().ok_or_else(|| Error::param("no images to sum"))?;
    if images.len() != weights.len() {
        return Err(Error::param(format!(
            "{} images but {} weights",
            images.len(),
            weights.len()
        )));
    }
    let mut acc = vec![0.0f32; first.data.len()];
    for (img, &w) in images.iter().zip(weights) {
        first.same_shape(img)?;
        let w = w as f32;
        for (a, &v) in acc.iter_mut().zip(&img.data) {
            *a += w * v;
        }
    }
    for a in &mut acc {
        *a = clamp_unit(*a);
    }
    Ok(ImageTensor::from_raw(first.channels, first.height, first.width, acc))
}

/// A probability vector over classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SoftLabel {
    weights: Vec<f64>,
}

impl SoftLabel {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("label over zero classes"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::param("label weights must be finite and non-negative"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > LABEL_MASS_TOL {
            return Err(Error::param(format!("label weights sum to {sum}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn one_hot(class: usize, num_classes: usize) -> Result<Self> {
        if class >= num_classes {
            return Err(Error::param(format!(
                "class {class} out of range for {num_classes} classes"
            )));
        }
        let mut weights = vec![0.0; num_classes];
        weights[class] = 1.0;
        Ok(Self { weights })
    }

    pub fn num_classes(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `λ·self + (1 − λ)·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.num_classes() != other.num_classes() {
            return Err(Error::ClassMismatch {
                left: self.num_classes(),
                right: other.num_classes(),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::param(format!("lambda {lambda} outside [0,1]")));
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(&a, &b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Ok(Self { weights })
    }
}

impl TryFrom<Vec<f64>> for SoftLabel {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SoftLabel> for Vec<f64> {
    fn from(l: SoftLabel) -> Self {
        l.weights
    }
}
