use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How CropMix folds successive crops together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldMode {
    #[default]
    Mixup,
    Cutmix,
}

impl FromStr for FoldMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixup" => Ok(FoldMode::Mixup),
            "cutmix" => Ok(FoldMode::Cutmix),
            other => Err(Error::param(format!(
                "unknown fold mode {other:?} (expected mixup or cutmix)"
            ))),
        }
    }
}

impl fmt::Display for FoldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldMode::Mixup => "mixup",
            FoldMode::Cutmix => "cutmix",
        })
    }
}

/// Per-method mixing parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixParams {
    /// Beta/Dirichlet concentration.
    pub alpha: f64,
    /// AugMix chain count `k`.
    pub num_chains: usize,
    /// YOCO grid: `grid_rows + 1` rows by `grid_cols + 1` columns. `0×0`
    /// selects the random two-way split.
    pub grid_rows: usize,
    pub grid_cols: usize,
    /// CropMix random-resized-crop area bounds.
    pub crop_scale_min: f64,
    pub crop_scale_max: f64,
    pub chain_depth_max: usize,
    /// Number of CropMix views folded together.
    pub num_crops: usize,
    pub fold_mode: FoldMode,
}

impl Default for MixParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            num_chains: 3,
            grid_rows: 0,
            grid_cols: 0,
            crop_scale_min: 0.25,
            crop_scale_max: 1.0,
            chain_depth_max: 3,
            num_crops: 3,
            fold_mode: FoldMode::Mixup,
        }
    }
}

impl MixParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::param(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if self.num_chains == 0 {
            return Err(Error::param("num_chains must be >= 1"));
        }
        if self.chain_depth_max == 0 {
            return Err(Error::param("chain_depth_max must be >= 1"));
        }
        if self.num_crops < 2 {
            return Err(Error::param("num_crops must be >= 2"));
        }
        let (lo, hi) = (self.crop_scale_min, self.crop_scale_max);
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return Err(Error::param(format!(
                "crop scales must satisfy 0 < min <= max <= 1, got {lo}:{hi}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        MixParams::default().validate().unwrap();
    }

    #[test]
    fn invalid_params() {
        let bad = [
            MixParams { alpha: 0.0, ..Default::default() },
            MixParams { num_chains: 0, ..Default::default() },
            MixParams { chain_depth_max: 0, ..Default::default() },
            MixParams { num_crops: 1, ..Default::default() },
            MixParams { crop_scale_min: 0.0, ..Default::default() },
            MixParams { crop_scale_min: 0.8, crop_scale_max: 0.5, ..Default::default() },
            MixParams { crop_scale_max: 1.5, ..Default::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn fold_mode_parse() {
        assert_eq!("cutmix".parse::<FoldMode>().unwrap(), FoldMode::Cutmix);
        assert!("blend".parse::<FoldMode>().is_err());
    }
}
