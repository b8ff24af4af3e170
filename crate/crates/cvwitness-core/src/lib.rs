//! Entanglement witness toolkit for two-mode continuous-variable states.
//!
//! The witness is built from the EPR-like quadrature pair
//!
//! ```text
//! u = |c|·x₁ + x₂/c ,      v = |c|·p₁ − p₂/c ,
//! ```
//!
//! whose total variance obeys Δu² + Δv² ≥ c² + 1/c² for every separable
//! state. The gap is carried by a single scalar — the test operator
//! ⟨T⟩ = c²n₁ + n₂/c² + sgn(c)·δ on mean-subtracted moments — and the
//! violation depth maps onto a concurrence-style entanglement degree.
//!
//! Two independent engines produce the eight moments that feed the
//! criterion:
//!
//! * [`fock`] — truncated number-basis states (pure vectors or density
//!   operators) with ladder-word expectation values and adaptive cutoff
//!   growth, plus the constructors in [`states`];
//! * [`gaussian`] — quadratic Q-function kernels whose moments follow
//!   from a 2×2 matrix inversion, cross-checked by the brute-force
//!   phase-space quadrature in [`quad`].
//!
//! Closed-form predictions for every built-in family live in [`oracles`]
//! so that both engines can be validated against hand-derived values.

pub mod epr;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod oracles;
pub mod quad;
pub mod states;

pub use epr::{
    assess, concurrence, delta, entanglement_degree, gees_quick_test, optimal_c, squeezing_flags,
    t_expectation, uv_variances, CriterionReport, DegreeMode, EprScale, MomentSet, PhysicalWarning,
};
pub use error::{Error, Result};
pub use fock::{mix, Ladder, Mode, StateKind, TruncationPolicy, TwoModeState};
pub use gaussian::{minimum_correlation_form, santos_form, GaussianQForm};
pub use oracles::OracleValue;
pub use quad::{gauss_legendre, q_moments, QuadratureMoments};
pub use states::{
    coherent_product, entangled_coherent, random_separable, two_mode_squeezed_vacuum, EcsSign,
};

/// Complex scalar used throughout the crate.
pub use num_complex::Complex64;
