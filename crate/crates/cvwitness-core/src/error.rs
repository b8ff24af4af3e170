//! Error types shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while constructing states, evaluating
/// moments, or running the witness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The truncated basis cannot hold the requested state: the probability
    /// mass sitting on the boundary layer still exceeds the tolerance at the
    /// largest cutoff the policy allows.
    #[error(
        "truncation loss: tail mass {tail_mass:.3e} exceeds tolerance \
         {tolerance:.3e} at cutoff {cutoff}"
    )]
    TruncationLoss {
        tail_mass: f64,
        tolerance: f64,
        cutoff: usize,
    },

    /// Mixture weights are negative, mismatched in length, or do not sum
    /// to one.
    #[error("weight error: {0}")]
    Weight(String),

    /// Operands live on different cutoffs.
    #[error("shape mismatch: cutoffs {0} and {1} differ")]
    ShapeMismatch(usize, usize),

    /// Exactly one mode sits at vacuum while the other is excited, so the
    /// optimal scale c² = √(n₂/n₁) degenerates to 0 or ∞.
    #[error("degenerate mode occupation: n1 = {n1:.3e}, n2 = {n2:.3e}")]
    DegenerateMode { n1: f64, n2: f64 },

    /// A vector norm too small to normalize reliably (e.g. the odd
    /// entangled coherent state as α → 0).
    #[error("degenerate norm: {0:.3e} is below the 1e-8 floor")]
    DegenerateNorm(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
