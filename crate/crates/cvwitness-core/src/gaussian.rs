//! Analytic moment engine for two-mode Gaussian Q-functions of the
//! quadratic-kernel family
//!
//! ```text
//! Q(α,β) = (AB−C²)·exp{−A|α|² − B|β|² − C(αβ + α*β*)} ,
//! ```
//!
//! normalized so ∫ Q d²α d²β/π² = 1. Because the kernel pairs α with β
//! (never α with β*), its moments follow from inverting M = [[A,C],[C,B]]:
//!
//! ```text
//! ⟨|α|²⟩_Q = B/det M     ⟨|β|²⟩_Q = A/det M     ⟨αβ⟩_Q = −C/det M ,
//! ```
//!
//! with ⟨α⟩_Q = ⟨α²⟩_Q = ⟨αβ*⟩_Q = 0. Q-moments are anti-normally
//! ordered, so the photon numbers are nᵢ = ⟨|·|²⟩_Q − 1 while the cross
//! moment carries over unchanged. No Fock truncation is involved anywhere;
//! this is the second, independent route to a [`MomentSet`].

use crate::epr::MomentSet;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Slack for the physical-validity flag at window boundaries.
const VALIDITY_SLACK: f64 = 1e-12;

/// A positive-definite two-mode Q-function kernel; see the module docs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianQForm {
    a: f64,
    b: f64,
    c: f64,
    physical: bool,
}

impl GaussianQForm {
    /// Build a kernel, checking convergence: A > 0, B > 0, AB − C² > 0.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a <= 0.0 || b <= 0.0 {
            return Err(Error::Domain(format!(
                "kernel coefficients must be finite with A, B > 0: A={a}, B={b}, C={c}"
            )));
        }
        if a * b - c * c <= 0.0 {
            return Err(Error::Domain(format!(
                "kernel is not positive definite: AB − C² = {:.3e}",
                a * b - c * c
            )));
        }
        let mut form = Self {
            a,
            b,
            c,
            physical: true,
        };
        let m = form.moment_set();
        // Necessary physicality: occupations ≥ 0 and the Cauchy–Schwarz
        // bound |⟨a₁a₂⟩|² ≤ n₁(n₂+1). Full ρ ⪰ 0 reconstruction is out of
        // scope; parameter points that fail here are still evaluated, just
        // flagged.
        form.physical = m.n1 >= -VALIDITY_SLACK
            && m.n2 >= -VALIDITY_SLACK
            && m.cross.norm_sqr() <= m.n1 * (m.n2 + 1.0) + VALIDITY_SLACK;
        Ok(form)
    }

    /// Coefficient of |α|².
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Coefficient of |β|².
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Coefficient of αβ + α*β*.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// det M = AB − C², which is also the normalizing prefactor.
    pub fn det(&self) -> f64 {
        self.a * self.b - self.c * self.c
    }

    /// Whether the kernel's moments can belong to a physical state.
    pub fn is_physical(&self) -> bool {
        self.physical
    }

    /// Q evaluated at a phase-space point (including the prefactor).
    pub fn q_value(&self, alpha: C64, beta: C64) -> f64 {
        let exponent = -self.a * alpha.norm_sqr()
            - self.b * beta.norm_sqr()
            - 2.0 * self.c * (alpha * beta).re;
        self.det() * exponent.exp()
    }

    /// Moments by matrix inversion (see module docs): means zero,
    /// n₁ = B/det − 1, n₂ = A/det − 1, cross = −C/det, everything else
    /// zero by the holomorphic pairing of the kernel.
    pub fn moment_set(&self) -> MomentSet {
        let det = self.det();
        MomentSet {
            n1: self.b / det - 1.0,
            n2: self.a / det - 1.0,
            cross: C64::new(-self.c / det, 0.0),
            ..MomentSet::vacuum()
        }
    }

    /// prefactor / det M — identically 1 for a convergent kernel. The
    /// interesting check is the quadrature estimate of ∫ Q d²αd²β/π²
    /// in [`crate::quad`], which verifies the same identity numerically.
    pub fn q_normalization_check(&self) -> f64 {
        self.det() / (self.a * self.b - self.c * self.c)
    }
}

/// Equal-occupation correlated kernel: A = B = K, C = Kx with
/// K = 1/((n+1)(1−x²)), giving n₁ = n₂ = n and δ = −2x(n+1). Physically
/// valid only for |x| ≤ √(n/(n+1)); the entanglement window is
/// n/(n+1) < |x| ≤ √(n/(n+1)).
pub fn santos_form(n: f64, x: f64) -> Result<GaussianQForm> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::Domain(format!(
            "mean occupation must be ≥ 0, got {n}"
        )));
    }
    if !x.is_finite() || x.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "correlation parameter needs |x| < 1, got {x}"
        )));
    }
    let k = 1.0 / ((n + 1.0) * (1.0 - x * x));
    GaussianQForm::new(k, k, k * x)
}

/// Minimum-correlation kernel: A = (1−d)γ, B = (1−d)/γ, C = d with
/// γ = tanh r, convergent for d < 1/2. Moments:
/// n₁+1 = (1−d)/(γ(1−2d)), n₂+1 = γ(1−d)/(1−2d), δ = −2d/(1−2d).
/// The n₂ ≥ 0 corner of parameter space is genuinely physical; the rest
/// is flagged.
pub fn minimum_correlation_form(r: f64, d: f64) -> Result<GaussianQForm> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain(format!(
            "squeezing parameter must be > 0, got {r}"
        )));
    }
    if !d.is_finite() || d >= 0.5 {
        return Err(Error::Domain(format!(
            "correlation weight must satisfy d < 1/2 for convergence, got {d}"
        )));
    }
    let gamma = r.tanh();
    GaussianQForm::new((1.0 - d) * gamma, (1.0 - d) / gamma, d)
}
