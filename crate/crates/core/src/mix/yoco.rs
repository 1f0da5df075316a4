use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{apply_chain_with, OpRanges, PrimitiveOp};
use crate::rng::SeededRng;
use crate::tensor::{ImageTensor, Rect};

/// Axis a YOCO split cuts along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitAxis {
    /// Top and bottom halves.
    Height,
    /// Left and right halves.
    Width,
}

// An empty op list is the identity.
fn run_cell(
    ops: &[PrimitiveOp],
    cell: ImageTensor,
    rng: &mut SeededRng,
    ranges: &OpRanges,
) -> Result<ImageTensor> {
    if ops.is_empty() {
        Ok(cell)
    } else {
        apply_chain_with(ops, &cell, rng, ranges)
    }
}

/// Two-way YOCO: `p ~ U(0,1)` picks the axis (height when `p ≤ 0.5`).
pub fn yoco(
    img: &ImageTensor,
    aug1: &[PrimitiveOp],
    aug2: &[PrimitiveOp],
    rng: &mut SeededRng,
) -> Result<ImageTensor> {
    yoco_with(img, aug1, aug2, rng, &OpRanges::default())
}

pub fn yoco_with(
    img: &ImageTensor,
    aug1: &[PrimitiveOp],
    aug2: &[PrimitiveOp],
    rng: &mut SeededRng,
    ranges: &OpRanges,
) -> Result<ImageTensor> {
    check_splittable(img)?;
    let p = rng.uniform();
    let axis = if p <= 0.5 { SplitAxis::Height } else { SplitAxis::Width };
    split_apply(img, axis, aug1, aug2, rng, ranges)
}

/// YOCO with a fixed axis. Part 1 gets `floor(len/2)`, part 2 the rest.
pub fn yoco_split(
    img: &ImageTensor,
    axis: SplitAxis,
    aug1: &[PrimitiveOp],
    aug2: &[PrimitiveOp],
    rng: &mut SeededRng,
) -> Result<ImageTensor> {
    check_splittable(img)?;
    split_apply(img, axis, aug1, aug2, rng, &OpRanges::default())
}

fn check_splittable(img: &ImageTensor) -> Result<()> {
    if img.height() < 2 || img.width() < 2 {
        return Err(Error::param(format!(
            "YOCO needs at least 2x2 pixels, got {}x{}",
            img.height(),
            img.width()
        )));
    }
    Ok(())
}

fn split_apply(
    img: &ImageTensor,
    axis: SplitAxis,
    aug1: &[PrimitiveOp],
    aug2: &[PrimitiveOp],
    rng: &SeededRng,
    ranges: &OpRanges,
) -> Result<ImageTensor> {
    let (_, h, w) = img.shape();
    let (r1, r2) = match axis {
        SplitAxis::Height => {
            let h1 = h / 2;
            (Rect::new(0, 0, w, h1), Rect::new(0, h1, w, h - h1))
        }
        SplitAxis::Width => {
            let w1 = w / 2;
            (Rect::new(0, 0, w1, h), Rect::new(w1, 0, w - w1, h))
        }
    };
    let p1 = run_cell(aug1, img.crop(r1)?, &mut rng.derive(1), ranges)?;
    let p2 = run_cell(aug2, img.crop(r2)?, &mut rng.derive(2), ranges)?;
    match axis {
        SplitAxis::Height => ImageTensor::concat_rows(&[p1, p2]),
        SplitAxis::Width => ImageTensor::concat_cols(&[p1, p2]),
    }
}

/// `(M+1)×(N+1)` YOCO where `augs` is indexed `[row][col]`. Rows and columns
/// are `floor(len/count)` pixels with the remainder going to the last one.
pub fn yoco_grid(
    img: &ImageTensor,
    augs: &[Vec<Vec<PrimitiveOp>>],
    rng: &mut SeededRng,
) -> Result<ImageTensor> {
    yoco_grid_with(img, augs, rng, &OpRanges::default())
}

pub fn yoco_grid_with(
    img: &ImageTensor,
    augs: &[Vec<Vec<PrimitiveOp>>],
    rng: &mut SeededRng,
    ranges: &OpRanges,
) -> Result<ImageTensor> {
    let rows = augs.len();
    let cols = augs.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || augs.iter().any(|r| r.len() != cols) {
        return Err(Error::param("grid augmentations must form a non-empty rectangle"));
    }
    let (_, h, w) = img.shape();
    if rows > h || cols > w {
        return Err(Error::param(format!(
            "{rows}x{cols} grid is finer than the {h}x{w} image"
        )));
    }
    let spans = |len: usize, n: usize| -> Vec<(usize, usize)> {
        let base = len / n;
        (0..n)
            .map(|i| {
                let size = if i + 1 == n { len - base * (n - 1) } else { base };
                (i * base, size)
            })
            .collect()
    };
    let row_spans = spans(h, rows);
    let col_spans = spans(w, cols);
    let mut strips = Vec::with_capacity(rows);
    for (i, &(y0, ch)) in row_spans.iter().enumerate() {
        let mut cells = Vec::with_capacity(cols);
        for (j, &(x0, cw)) in col_spans.iter().enumerate() {
            let cell = img.crop(Rect::new(x0, y0, cw, ch))?;
            let mut cell_rng = rng.derive((i * cols + j) as u64);
            cells.push(run_cell(&augs[i][j], cell, &mut cell_rng, ranges)?);
        }
        strips.push(ImageTensor::concat_cols(&cells)?);
    }
    ImageTensor::concat_rows(&strips)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{apply_chain, OpKind};

    fn ramp(h: usize, w: usize) -> ImageTensor {
        ImageTensor::from_fn(1, h, w, |_, y, x| (y * w + x) as f32 / (h * w) as f32).unwrap()
    }

    #[test]
    fn identity_augs_are_identity() {
        let img = ramp(7, 5);
        for seed in 0..10 {
            assert_eq!(yoco(&img, &[], &[], &mut SeededRng::new(seed)).unwrap(), img);
        }
        for axis in [SplitAxis::Height, SplitAxis::Width] {
            assert_eq!(yoco_split(&img, axis, &[], &[], &mut SeededRng::new(0)).unwrap(), img);
        }
    }

    #[test]
    fn halves_flipped_independently() {
        // 4x4 ramp, values 0..15 row-major
        let img = ImageTensor::from_fn(1, 4, 4, |_, y, x| (y * 4 + x) as f32 / 15.0).unwrap();
        let flip = [PrimitiveOp::flip_v()];
        let out = yoco_split(&img, SplitAxis::Height, &flip, &flip, &mut SeededRng::new(0)).unwrap();
        // oracle: rows [1,0 | 3,2]
        let order = [1, 0, 3, 2];
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(out.get(0, y, x), img.get(0, order[y], x));
            }
        }
        let flip = [PrimitiveOp::flip_h()];
        let out = yoco_split(&img, SplitAxis::Width, &flip, &flip, &mut SeededRng::new(0)).unwrap();
        let order = [1, 0, 3, 2];
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(out.get(0, y, x), img.get(0, y, order[x]));
            }
        }
    }

    #[test]
    fn odd_split_sizes() {
        let img = ramp(5, 7);
        let bright = [PrimitiveOp::new(OpKind::Brightness, 1.0).unwrap()];
        let out = yoco_split(&img, SplitAxis::Height, &bright, &[], &mut SeededRng::new(0)).unwrap();
        // first floor(5/2)=2 rows modified, remaining 3 untouched
        for y in 0..5 {
            let changed = (0..7).any(|x| out.get(0, y, x) != img.get(0, y, x));
            assert_eq!(changed, y < 2, "row {y}");
        }
    }

    #[test]
    fn degenerate_grid_is_chain() {
        let img = ramp(6, 6);
        let chain = vec![PrimitiveOp::flip_h(), PrimitiveOp::new(OpKind::Rotate, 0.7).unwrap()];
        let mut r1 = SeededRng::new(9);
        let grid = yoco_grid(&img, &[vec![chain.clone()]], &mut r1).unwrap();
        let direct = apply_chain(&chain, &img, &mut SeededRng::new(9).derive(0)).unwrap();
        assert_eq!(grid, direct);
    }

    #[test]
    fn identity_grid() {
        let img = ramp(6, 9);
        let augs = vec![vec![vec![], vec![]]];
        assert_eq!(yoco_grid(&img, &augs, &mut SeededRng::new(0)).unwrap(), img);
    }

    #[test]
    fn per_cell_brightness() {
        let img = ImageTensor::filled(3, 6, 6, 0.5).unwrap();
        let ranges = OpRanges::default();
        let b = PrimitiveOp::with_parameter(OpKind::Brightness, 0.1, &ranges).unwrap();
        let augs = vec![vec![vec![b], vec![b]], vec![vec![b], vec![b]]];
        let out = yoco_grid(&img, &augs, &mut SeededRng::new(0)).unwrap();
        assert!(out.data().iter().all(|&v| (v as f64 - 0.6).abs() < 1e-6));
    }

    #[test]
    fn grid_errors() {
        let img = ramp(2, 3);
        let cell = || vec![];
        let too_many_rows = vec![vec![cell()]; 3];
        assert!(yoco_grid(&img, &too_many_rows, &mut SeededRng::new(0)).is_err());
        let ragged = vec![vec![cell(), cell()], vec![cell()]];
        assert!(yoco_grid(&img, &ragged, &mut SeededRng::new(0)).is_err());
        let one_px = ImageTensor::filled(1, 1, 4, 0.0).unwrap();
        assert!(yoco(&one_px, &[], &[], &mut SeededRng::new(0)).is_err());
    }
}
