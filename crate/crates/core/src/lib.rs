//! Deterministic mix-based image augmentation.
//!
//! Every stochastic operation takes a [`SeededRng`] keyed by a master seed and
//! a stream path, so results replay bit-for-bit regardless of thread count.
//! Pixels are `f32` in `[0,1]`; labels are `f64` probability vectors.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod mix;
pub mod ops;
pub mod params;
pub mod pipeline;
pub mod rng;
pub mod tensor;

pub use error::{Error, Result};
pub use mix::{BoxMask, MixOutput, MixTrace, SaliencyMap};
pub use ops::{apply_chain, apply_primitive, build_chain, OpKind, OpRanges, PrimitiveOp};
pub use params::{FoldMode, MixParams};
pub use rng::{sample_beta, sample_dirichlet, SeededRng};
pub use tensor::{convex_combine, ImageTensor, Rect, SoftLabel};
