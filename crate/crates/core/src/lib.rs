//! Effects, augmented operator bases, positive cones and the reconstruction
//! of density operators from frame functions, plus exact-arithmetic tools
//! for additive functions on an interval.
//!
//! The numeric modules work in double precision with the thresholds in
//! [`tolerance::ToleranceConfig`]; [`cauchy`] is exact throughout.

// Comparisons are written as `!(x <= limit)` on purpose so that NaN fails.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augmented;
pub mod basis;
pub mod cauchy;
pub mod cli;
pub mod cone;
pub mod effect;
pub mod eigen;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod operator;
pub mod random;
pub mod tolerance;
