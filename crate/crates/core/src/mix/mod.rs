//! Mix-based augmentation strategies.
//!
//! Each pairwise method comes in two layers: a sampling entry point
//! (`mixup`, `cutmix`, `snapmix`, ...) that draws its coefficients and boxes
//! from a [`SeededRng`](crate::rng::SeededRng), and a deterministic
//! `*_with_*` core that takes those draws explicitly. The sampled entry
//! points record every draw in [`MixTrace`] so a result can be audited.

mod augmix;
mod cropmix;
mod cutmix;
mod loss;
mod mixup;
mod saliency;
mod snapmix;
mod yoco;

use serde::{Deserialize, Serialize};

pub use augmix::{augmix, augmix_blend, augmix_with};
pub use cropmix::{cropmix, cropmix_with, random_resized_crop};
pub use cutmix::{cut_box, cutmix, cutmix_with_box, sample_box};
pub use loss::{batch_loss, js_consistency, soft_cross_entropy, PROB_FLOOR};
pub use mixup::{mixup, mixup_with_lambda};
pub use saliency::{make_spm, semantic_ratio, SaliencyMap};
pub use snapmix::{snapmix, snapmix_with_boxes};
pub use yoco::{yoco, yoco_grid, yoco_grid_with, yoco_split, yoco_with, SplitAxis};

use crate::error::{Error, Result};
use crate::tensor::{ImageTensor, Rect, SoftLabel};

/// An axis-aligned box inside a `image_w × image_h` image, already clipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxMask {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
    pub image_w: usize,
    pub image_h: usize,
}

impl BoxMask {
    pub fn new(x0: usize, y0: usize, w: usize, h: usize, image_w: usize, image_h: usize) -> Result<Self> {
        if x0 + w > image_w || y0 + h > image_h {
            return Err(Error::param(format!(
                "box ({x0},{y0}) {w}x{h} exceeds {image_w}x{image_h} image"
            )));
        }
        Ok(Self { x0, y0, w, h, image_w, image_h })
    }

    pub fn full(image_w: usize, image_h: usize) -> Self {
        Self { x0: 0, y0: 0, w: image_w, h: image_h, image_w, image_h }
    }

    pub fn empty(image_w: usize, image_h: usize) -> Self {
        Self { x0: 0, y0: 0, w: 0, h: 0, image_w, image_h }
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

    /// Fraction of the image covered by the box.
    pub fn area_fraction(&self) -> f64 {
        self.area() as f64 / (self.image_w * self.image_h) as f64
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.x0, self.y0, self.w, self.h)
    }
}

/// Random decisions taken while producing a [`MixOutput`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MixTrace {
    /// Every Beta draw, in order.
    pub lambdas: Vec<f64>,
    /// Region of the output that was overwritten.
    pub target_box: Option<BoxMask>,
    /// Region of the partner image the pasted content came from.
    pub source_box: Option<BoxMask>,
    /// Whether the CutMix-style box was clipped by the image border.
    pub box_clipped: bool,
    /// AugMix chain weights.
    pub chain_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixOutput {
    pub image: ImageTensor,
    pub label: SoftLabel,
    /// Second AugMix view when consistency mode is on.
    pub aux_images: Vec<ImageTensor>,
    /// Label mass carried by the anchor image's label.
    pub lambda_effective: f64,
    pub trace: MixTrace,
}

impl MixOutput {
    /// Output that leaves the anchor's label untouched.
    pub(crate) fn label_preserving(image: ImageTensor, label: SoftLabel, trace: MixTrace) -> Self {
        Self {
            image,
            label,
            aux_images: Vec::new(),
            lambda_effective: 1.0,
            trace,
        }
    }
}

pub(crate) fn check_pair(
    a: &ImageTensor,
    ya: &SoftLabel,
    b: &ImageTensor,
    yb: &SoftLabel,
) -> Result<()> {
    a.same_shape(b)?;
    if ya.num_classes() != yb.num_classes() {
        return Err(Error::ClassMismatch {
            left: ya.num_classes(),
            right: yb.num_classes(),
        });
    }
    Ok(())
}
