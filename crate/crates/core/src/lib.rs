//! Ensembles of probabilistic predictions for ordered outcomes.
//!
//! Member predictions are conditional CDFs over `K` ordered classes. Besides
//! linear and log-linear pooling they can be averaged on the scale of a
//! reference quantile function `F_Z^{-1}`. These transformation ensembles keep
//! transformation-model members inside their model class.
//!
//! See [`pooling`] for the operators and [`weights`] for tuning them against
//! a proper score. [`evalmetrics`] holds the evaluation side.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dist;
pub mod error;
pub mod evalmetrics;
pub mod minimax;
pub mod panel;
pub mod pooling;
pub mod rng;
pub mod scoring;
pub mod synth;
pub mod toytram;
pub mod weights;

pub use dist::TargetDistribution;
pub use error::{Error, Result};
pub use panel::{ContinuousCurve, DiscreteCdf, MemberPanel, Observation, OrderedSampleSpace};
pub use pooling::{PoolKind, SimplexWeights};
pub use scoring::ScoreKind;

/// Clamp applied to probabilities before they are mapped through a quantile function.
pub const PROB_CLAMP: f64 = 1e-12;

/// Clamp a probability into `[PROB_CLAMP, 1 - PROB_CLAMP]`.
#[inline]
pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}
