//! Exact numerics on a truncated two-mode Fock space.
//!
//! States live on the basis {|n₁,n₂⟩ : 0 ≤ nᵢ ≤ cutoff}, flattened
//! row-major as |n₁,n₂⟩ → n₁·(cutoff+1)+n₂, either as a pure amplitude
//! vector or as a density matrix. The truncation is explicit: every state
//! carries the probability mass sitting on the boundary layer
//! (n₁ = cutoff or n₂ = cutoff) and a convergence flag, so a cutoff that
//! is too small is always visible, never silent.
//!
//! Ladder operators act with the standard matrix elements a|n⟩ = √n|n−1⟩,
//! a†|n⟩ = √(n+1)|n+1⟩; creation out of the top layer drops the component
//! and sets a loss flag. Expectation values of ordered ladder words are
//! exact on the truncated space, and [`TwoModeState::extract_moments`]
//! reduces a state to the central [`MomentSet`] consumed by the witness
//! in [`crate::epr`].

use crate::epr::MomentSet;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Absolute tolerance for the norm, trace, and Hermiticity checks on
/// constructed states.
pub const STATE_TOL: f64 = 1e-12;

/// Smallest vector norm / matrix trace that will be normalized rather
/// than rejected.
pub const NORM_FLOOR: f64 = 1e-8;

/// How aggressively a truncated basis may grow, and when the leftover
/// boundary mass counts as converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Largest acceptable boundary-layer probability mass.
    pub tail_tolerance: f64,
    /// Hard ceiling on the per-mode cutoff.
    pub max_cutoff: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-10,
            max_cutoff: 120,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tail_tolerance: f64, max_cutoff: usize) -> Result<Self> {
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::Domain(format!(
                "tail tolerance must lie in (0, 1), got {tail_tolerance}"
            )));
        }
        if max_cutoff < 1 {
            return Err(Error::Domain("max cutoff must be at least 1".into()));
        }
        Ok(Self {
            tail_tolerance,
            max_cutoff,
        })
    }
}

/// One of the two bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

/// Annihilation or creation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Annihilate,
    Create,
}

/// A single ladder-operator factor; words read left to right as operator
/// products, e.g. `[(One, Create), (One, Annihilate)]` is a₁†a₁.
pub type LadderSymbol = (Mode, Ladder);

/// Pure vector or density operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    PureVector,
    DensityOperator,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
}

/// A two-mode state on a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    cutoff: usize,
    repr: Repr,
    tail_mass: f64,
    converged: bool,
    lossy: bool,
}

fn boundary_fraction_vec(cutoff: usize, v: &DVector<C64>) -> f64 {
    let side = cutoff + 1;
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut tail = 0.0;
    for n1 in 0..side {
        for n2 in 0..side {
            if n1 == cutoff || n2 == cutoff {
                tail += v[n1 * side + n2].norm_sqr();
            }
        }
    }
    tail / total
}

fn boundary_fraction_mat(cutoff: usize, m: &DMatrix<C64>) -> f64 {
    let side = cutoff + 1;
    let total: f64 = (0..side * side).map(|i| m[(i, i)].re).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut tail = 0.0;
    for n1 in 0..side {
        for n2 in 0..side {
            if n1 == cutoff || n2 == cutoff {
                let i = n1 * side + n2;
                tail += m[(i, i)].re;
            }
        }
    }
    tail / total
}

impl TwoModeState {
    /// Normalized pure state from raw amplitudes in the flattened basis.
    pub fn from_amplitudes(cutoff: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let dim = (cutoff + 1) * (cutoff + 1);
        if amplitudes.len() != dim {
            return Err(Error::Domain(format!(
                "expected {dim} amplitudes for cutoff {cutoff}, got {}",
                amplitudes.len()
            )));
        }
        let mut v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm < NORM_FLOOR {
            return Err(Error::DegenerateNorm(norm));
        }
        v /= C64::new(norm, 0.0);
        let tail = boundary_fraction_vec(cutoff, &v);
        Ok(Self {
            cutoff,
            repr: Repr::Pure(v),
            tail_mass: tail,
            converged: tail <= TruncationPolicy::default().tail_tolerance,
            lossy: false,
        })
    }

    /// Trace-normalized density operator from a Hermitian matrix.
    pub fn from_density(cutoff: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = (cutoff + 1) * (cutoff + 1);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Domain(format!(
                "expected a {dim}x{dim} matrix for cutoff {cutoff}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_defect = (&matrix - matrix.adjoint()).camax();
        if herm_defect > STATE_TOL {
            return Err(Error::Domain(format!(
                "density matrix is not Hermitian: defect {herm_defect:.3e}"
            )));
        }
        let mut m = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
        if tr < NORM_FLOOR {
            return Err(Error::DegenerateNorm(tr));
        }
        m /= C64::new(tr, 0.0);
        let tail = boundary_fraction_mat(cutoff, &m);
        Ok(Self {
            cutoff,
            repr: Repr::Density(m),
            tail_mass: tail,
            converged: tail <= TruncationPolicy::default().tail_tolerance,
            lossy: false,
        })
    }

    /// The basis state |n₁,n₂⟩.
    pub fn basis_state(cutoff: usize, n1: usize, n2: usize) -> Result<Self> {
        if n1 > cutoff || n2 > cutoff {
            return Err(Error::Domain(format!(
                "basis state |{n1},{n2}> does not fit below cutoff {cutoff}"
            )));
        }
        let dim = (cutoff + 1) * (cutoff + 1);
        let mut amps = vec![C64::ZERO; dim];
        amps[n1 * (cutoff + 1) + n2] = C64::ONE;
        Self::from_amplitudes(cutoff, amps)
    }

    /// The two-mode vacuum |0,0⟩.
    pub fn vacuum(cutoff: usize) -> Self {
        Self::basis_state(cutoff, 0, 0).expect("vacuum always fits")
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Flattened basis dimension (cutoff+1)².
    pub fn dim(&self) -> usize {
        (self.cutoff + 1) * (self.cutoff + 1)
    }

    /// Flattened index of |n₁,n₂⟩.
    pub fn index_of(&self, n1: usize, n2: usize) -> usize {
        n1 * (self.cutoff + 1) + n2
    }

    pub fn kind(&self) -> StateKind {
        match self.repr {
            Repr::Pure(_) => StateKind::PureVector,
            Repr::Density(_) => StateKind::DensityOperator,
        }
    }

    /// Probability fraction on the boundary layer n₁ = cutoff or
    /// n₂ = cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Whether the boundary-layer mass passed the construction-time
    /// tolerance.
    pub fn is_converged(&self) -> bool {
        self.converged
    }

    /// Whether some creation operator pushed amplitude past the cutoff
    /// along the way (only possible on [`TwoModeState::apply_ladder`]
    /// results).
    pub fn truncation_lossy(&self) -> bool {
        self.lossy
    }

    /// Re-evaluate the convergence flag against a specific tolerance
    /// (constructors with their own policy use this).
    pub(crate) fn mark_convergence(&mut self, tolerance: f64) {
        self.converged = self.tail_mass <= tolerance;
    }

    /// Σ|amplitude|² for pure states, Re tr ρ for density operators;
    /// 1 for every constructed state, but not for ladder images.
    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Pure(v) => v.iter().map(|z| z.norm_sqr()).sum(),
            Repr::Density(m) => (0..self.dim()).map(|i| m[(i, i)].re).sum(),
        }
    }

    /// Amplitude vector, if pure.
    pub fn amplitudes(&self) -> Option<&DVector<C64>> {
        match &self.repr {
            Repr::Pure(v) => Some(v),
            Repr::Density(_) => None,
        }
    }

    /// Density matrix view, if stored as one.
    pub fn density(&self) -> Option<&DMatrix<C64>> {
        match &self.repr {
            Repr::Density(m) => Some(m),
            Repr::Pure(_) => None,
        }
    }

    /// Density matrix of the state (projector |ψ⟩⟨ψ| for pure states);
    /// always owned.
    pub fn density_matrix(&self) -> DMatrix<C64> {
        match &self.repr {
            Repr::Pure(v) => v * v.adjoint(),
            Repr::Density(m) => m.clone(),
        }
    }

    /// Eigenvalues of the density matrix, sorted descending. O(dim³);
    /// meant for validation at modest cutoffs.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = nalgebra::SymmetricEigen::new(self.density_matrix());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals
    }

    /// Smallest density-matrix eigenvalue; ≥ −1e−9 for anything built by
    /// the constructors here.
    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("nonempty spectrum")
    }

    /// ⟨ψ|φ⟩ for two pure states on the same cutoff.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.cutoff != other.cutoff {
            return Err(Error::ShapeMismatch(self.cutoff, other.cutoff));
        }
        match (&self.repr, &other.repr) {
            (Repr::Pure(a), Repr::Pure(b)) => Ok(a.dotc(b)),
            _ => Err(Error::Domain("overlap requires two pure states".into())),
        }
    }

    /// The same state padded onto a larger cutoff.
    pub fn embedded(&self, cutoff: usize) -> Result<Self> {
        if cutoff < self.cutoff {
            return Err(Error::ShapeMismatch(self.cutoff, cutoff));
        }
        if cutoff == self.cutoff {
            return Ok(self.clone());
        }
        let old = self.cutoff + 1;
        let new = cutoff + 1;
        let repr = match &self.repr {
            Repr::Pure(v) => {
                let mut out = DVector::from_element(new * new, C64::ZERO);
                for n1 in 0..old {
                    for n2 in 0..old {
                        out[n1 * new + n2] = v[n1 * old + n2];
                    }
                }
                Repr::Pure(out)
            }
            Repr::Density(m) => {
                let mut out = DMatrix::from_element(new * new, new * new, C64::ZERO);
                for r1 in 0..old {
                    for r2 in 0..old {
                        for c1 in 0..old {
                            for c2 in 0..old {
                                out[(r1 * new + r2, c1 * new + c2)] =
                                    m[(r1 * old + r2, c1 * old + c2)];
                            }
                        }
                    }
                }
                Repr::Density(out)
            }
        };
        let (tail, converged) = match &repr {
            Repr::Pure(v) => (boundary_fraction_vec(cutoff, v), true),
            Repr::Density(m) => (boundary_fraction_mat(cutoff, m), true),
        };
        Ok(Self {
            cutoff,
            repr,
            tail_mass: tail,
            converged,
            lossy: self.lossy,
        })
    }

    /// Apply a single ladder operator to the designated mode. The result
    /// is unnormalized (a|0⟩ can even be the zero vector); creation on a
    /// component at the cutoff drops it and marks the result lossy.
    pub fn apply_ladder(&self, mode: Mode, which: Ladder) -> Self {
        let mut lossy = self.lossy;
        let repr = match &self.repr {
            Repr::Pure(v) => {
                let (out, dropped) = apply_symbol_vec(self.cutoff, v, mode, which);
                lossy |= dropped;
                Repr::Pure(out)
            }
            Repr::Density(m) => {
                let (out, dropped) = apply_symbol_left(self.cutoff, m, mode, which);
                lossy |= dropped;
                Repr::Density(out)
            }
        };
        let tail = match &repr {
            Repr::Pure(v) => boundary_fraction_vec(self.cutoff, v),
            Repr::Density(m) => boundary_fraction_mat(self.cutoff, m),
        };
        Self {
            cutoff: self.cutoff,
            repr,
            tail_mass: tail,
            converged: self.converged,
            lossy,
        }
    }

    /// ⟨ψ|W|ψ⟩ or Tr(ρW) for an ordered ladder word W, evaluated by
    /// repeated [`TwoModeState::apply_ladder`]; exact on the truncated
    /// space.
    pub fn expectation(&self, word: &[LadderSymbol]) -> C64 {
        let mut acted = self.clone();
        for &(mode, which) in word.iter().rev() {
            acted = acted.apply_ladder(mode, which);
        }
        match (&self.repr, &acted.repr) {
            (Repr::Pure(psi), Repr::Pure(w_psi)) => psi.dotc(w_psi),
            (Repr::Density(_), Repr::Density(w_rho)) => {
                (0..self.dim()).map(|i| w_rho[(i, i)]).sum()
            }
            _ => unreachable!("ladder application preserves the representation"),
        }
    }

    /// Central first and second moments: means ⟨a₁⟩, ⟨a₂⟩ and the
    /// mean-subtracted photon numbers, self moments ⟨aᵢ²⟩, and cross
    /// moments ⟨a₁a₂⟩, ⟨a₁a₂†⟩.
    pub fn extract_moments(&self) -> MomentSet {
        use Ladder::{Annihilate, Create};
        use Mode::{One, Two};
        let mean1 = self.expectation(&[(One, Annihilate)]);
        let mean2 = self.expectation(&[(Two, Annihilate)]);
        let n1 = self.expectation(&[(One, Create), (One, Annihilate)]).re - mean1.norm_sqr();
        let n2 = self.expectation(&[(Two, Create), (Two, Annihilate)]).re - mean2.norm_sqr();
        let sq1 = self.expectation(&[(One, Annihilate), (One, Annihilate)]) - mean1 * mean1;
        let sq2 = self.expectation(&[(Two, Annihilate), (Two, Annihilate)]) - mean2 * mean2;
        let cross = self.expectation(&[(One, Annihilate), (Two, Annihilate)]) - mean1 * mean2;
        let crossc = self.expectation(&[(One, Annihilate), (Two, Create)]) - mean1 * mean2.conj();
        MomentSet {
            mean1,
            mean2,
            n1,
            n2,
            sq1,
            sq2,
            cross,
            crossc,
        }
    }

    /// Apply the displacement unitaries D₁(β₁)D₂(β₂) = exp(βᵢaᵢ†−βᵢ*aᵢ),
    /// growing the cutoff as needed so the displaced state still passes
    /// the policy's tail tolerance, and renormalize.
    pub fn displaced(&self, beta1: C64, beta2: C64, policy: &TruncationPolicy) -> Result<Self> {
        let mut cutoff = self.cutoff.min(policy.max_cutoff);
        loop {
            let embedded = self.embedded(cutoff)?;
            let displaced = embedded.displace_exact(beta1, beta2);
            if displaced.tail_mass <= policy.tail_tolerance {
                return Ok(Self {
                    converged: true,
                    ..displaced
                });
            }
            if cutoff >= policy.max_cutoff {
                return Err(Error::TruncationLoss {
                    tail_mass: displaced.tail_mass,
                    tolerance: policy.tail_tolerance,
                    cutoff,
                });
            }
            cutoff = (2 * cutoff).max(cutoff + 8).min(policy.max_cutoff);
        }
    }

    /// Displacement at fixed cutoff, renormalized; tail is whatever it is.
    fn displace_exact(&self, beta1: C64, beta2: C64) -> Self {
        match &self.repr {
            Repr::Pure(v) => {
                let mut out = displace_vector(self.cutoff, v, beta1, beta2);
                let norm = out.norm();
                if norm > 0.0 {
                    out /= C64::new(norm, 0.0);
                }
                let tail = boundary_fraction_vec(self.cutoff, &out);
                Self {
                    cutoff: self.cutoff,
                    repr: Repr::Pure(out),
                    tail_mass: tail,
                    converged: false,
                    lossy: self.lossy,
                }
            }
            Repr::Density(m) => {
                // UρU† = (U·(U·ρ)ᴴ)ᴴ for Hermitian ρ, so one
                // column-by-column pass does each side.
                let half = displace_columns(self.cutoff, m, beta1, beta2).adjoint();
                let mut full = displace_columns(self.cutoff, &half, beta1, beta2).adjoint();
                let tr: f64 = (0..self.dim()).map(|i| full[(i, i)].re).sum();
                if tr > 0.0 {
                    full /= C64::new(tr, 0.0);
                }
                let tail = boundary_fraction_mat(self.cutoff, &full);
                Self {
                    cutoff: self.cutoff,
                    repr: Repr::Density(full),
                    tail_mass: tail,
                    converged: false,
                    lossy: self.lossy,
                }
            }
        }
    }
}

/// Mix states into the density operator Σ wᵢ ρᵢ.
pub fn mix(states: &[TwoModeState], weights: &[f64]) -> Result<TwoModeState> {
    if states.is_empty() {
        return Err(Error::Weight("nothing to mix".into()));
    }
    if states.len() != weights.len() {
        return Err(Error::Weight(format!(
            "{} states but {} weights",
            states.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| **w < 0.0 || !w.is_finite()) {
        return Err(Error::Weight(format!("weight {w} is not a probability")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > STATE_TOL {
        return Err(Error::Weight(format!("weights sum to {total}, not 1")));
    }
    let cutoff = states[0].cutoff;
    for s in states {
        if s.cutoff != cutoff {
            return Err(Error::ShapeMismatch(cutoff, s.cutoff));
        }
    }
    let dim = (cutoff + 1) * (cutoff + 1);
    let mut rho = DMatrix::from_element(dim, dim, C64::ZERO);
    for (s, &w) in states.iter().zip(weights) {
        rho += s.density_matrix() * C64::new(w, 0.0);
    }
    let tail = boundary_fraction_mat(cutoff, &rho);
    Ok(TwoModeState {
        cutoff,
        repr: Repr::Density(rho),
        tail_mass: tail,
        converged: states.iter().all(|s| s.converged),
        lossy: states.iter().any(|s| s.lossy),
    })
}

/// Action of one ladder symbol on a flattened vector; the boolean reports
/// whether creation dropped amplitude past the cutoff.
fn apply_symbol_vec(
    cutoff: usize,
    v: &DVector<C64>,
    mode: Mode,
    which: Ladder,
) -> (DVector<C64>, bool) {
    let side = cutoff + 1;
    let mut out = DVector::from_element(v.len(), C64::ZERO);
    let mut dropped = false;
    for n1 in 0..side {
        for n2 in 0..side {
            let src = n1 * side + n2;
            let z = v[src];
            if z == C64::ZERO {
                continue;
            }
            let n = match mode {
                Mode::One => n1,
                Mode::Two => n2,
            };
            match which {
                Ladder::Annihilate => {
                    if n == 0 {
                        continue;
                    }
                    let dst = match mode {
                        Mode::One => (n1 - 1) * side + n2,
                        Mode::Two => n1 * side + (n2 - 1),
                    };
                    out[dst] += z * (n as f64).sqrt();
                }
                Ladder::Create => {
                    if n == cutoff {
                        dropped = true;
                        continue;
                    }
                    let dst = match mode {
                        Mode::One => (n1 + 1) * side + n2,
                        Mode::Two => n1 * side + (n2 + 1),
                    };
                    out[dst] += z * ((n + 1) as f64).sqrt();
                }
            }
        }
    }
    (out, dropped)
}

/// Left-multiplication of a density matrix by one ladder symbol: each row
/// of the result is a scaled copy of a source row.
fn apply_symbol_left(
    cutoff: usize,
    m: &DMatrix<C64>,
    mode: Mode,
    which: Ladder,
) -> (DMatrix<C64>, bool) {
    let side = cutoff + 1;
    let dim = side * side;
    let mut out = DMatrix::from_element(dim, dim, C64::ZERO);
    let mut dropped = false;
    for n1 in 0..side {
        for n2 in 0..side {
            let src = n1 * side + n2;
            let n = match mode {
                Mode::One => n1,
                Mode::Two => n2,
            };
            let (dst, coeff) = match which {
                Ladder::Annihilate => {
                    if n == 0 {
                        continue;
                    }
                    let dst = match mode {
                        Mode::One => (n1 - 1) * side + n2,
                        Mode::Two => n1 * side + (n2 - 1),
                    };
                    (dst, (n as f64).sqrt())
                }
                Ladder::Create => {
                    if n == cutoff {
                        if m.row(src).iter().any(|z| *z != C64::ZERO) {
                            dropped = true;
                        }
                        continue;
                    }
                    let dst = match mode {
                        Mode::One => (n1 + 1) * side + n2,
                        Mode::Two => n1 * side + (n2 + 1),
                    };
                    (dst, ((n + 1) as f64).sqrt())
                }
            };
            for j in 0..dim {
                out[(dst, j)] += m[(src, j)] * coeff;
            }
        }
    }
    (out, dropped)
}

/// exp(β a† − β* a) applied to a vector for one mode, by scaling and
/// squaring with a Taylor inner loop; accurate to machine precision on
/// the truncated space.
fn exp_displacement_apply(cutoff: usize, v: &DVector<C64>, mode: Mode, beta: C64) -> DVector<C64> {
    if beta == C64::ZERO {
        return v.clone();
    }
    let norm_bound = 2.0 * beta.norm() * ((cutoff + 1) as f64).sqrt();
    let squarings = norm_bound.log2().ceil().max(0.0) as u32 + 1;
    let scale = 2.0_f64.powi(squarings as i32);
    let mut u = v.clone();
    for _ in 0..(1u64 << squarings) {
        let mut acc = u.clone();
        let mut term = u;
        for k in 1..=120 {
            let (created, _) = apply_symbol_vec(cutoff, &term, mode, Ladder::Create);
            let (annihilated, _) = apply_symbol_vec(cutoff, &term, mode, Ladder::Annihilate);
            term = (created * beta - annihilated * beta.conj()) / C64::new(scale * k as f64, 0.0);
            acc += &term;
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
        }
        u = acc;
    }
    u
}

fn displace_vector(cutoff: usize, v: &DVector<C64>, beta1: C64, beta2: C64) -> DVector<C64> {
    let mid = exp_displacement_apply(cutoff, v, Mode::One, beta1);
    exp_displacement_apply(cutoff, &mid, Mode::Two, beta2)
}

fn displace_columns(cutoff: usize, m: &DMatrix<C64>, beta1: C64, beta2: C64) -> DMatrix<C64> {
    let mut out = m.clone();
    for j in 0..m.ncols() {
        let col = DVector::from_column_slice(m.column(j).as_slice());
        out.set_column(j, &displace_vector(cutoff, &col, beta1, beta2));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epr;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

    fn random_pure(rng: &mut ChaCha8Rng, cutoff: usize, max_level: usize) -> TwoModeState {
        let side = cutoff + 1;
        let mut amps = vec![C64::ZERO; side * side];
        for n1 in 0..=max_level.min(cutoff) {
            for n2 in 0..=max_level.min(cutoff) {
                amps[n1 * side + n2] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        TwoModeState::from_amplitudes(cutoff, amps).unwrap()
    }

    #[test]
    fn annihilation_matrix_elements() {
        let s = TwoModeState::basis_state(4, 1, 0).unwrap();
        let lowered = s.apply_ladder(Mode::One, Ladder::Annihilate);
        let v = lowered.amplitudes().unwrap();
        assert_eq!(v[s.index_of(0, 0)], C64::ONE);
        assert_abs_diff_eq!(lowered.trace(), 1.0, epsilon = 1e-15);

        let vac = TwoModeState::vacuum(4).apply_ladder(Mode::One, Ladder::Annihilate);
        assert_eq!(vac.trace(), 0.0);
    }

    #[test]
    fn creation_at_cutoff_marks_loss() {
        let s = TwoModeState::basis_state(3, 3, 0).unwrap();
        let raised = s.apply_ladder(Mode::One, Ladder::Create);
        assert!(raised.truncation_lossy());
        assert_eq!(raised.trace(), 0.0);
        let fine = TwoModeState::basis_state(3, 1, 0)
            .unwrap()
            .apply_ladder(Mode::One, Ladder::Create);
        assert!(!fine.truncation_lossy());
        assert_abs_diff_eq!(fine.trace(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn vacuum_expectations_vanish() {
        let s = TwoModeState::vacuum(3);
        let n1 = s.expectation(&[(Mode::One, Ladder::Create), (Mode::One, Ladder::Annihilate)]);
        assert_eq!(n1, C64::ZERO);
    }

    #[test]
    fn basis_state_moments() {
        let m = TwoModeState::basis_state(6, 2, 3)
            .unwrap()
            .extract_moments();
        assert_abs_diff_eq!(m.n1, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.n2, 3.0, epsilon = 1e-12);
        assert_eq!(m.mean1, C64::ZERO);
        assert_eq!(m.cross, C64::ZERO);
    }

    #[test]
    fn pure_and_projector_moments_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_pure(&mut rng, 6, 3);
        let rho = TwoModeState::from_density(6, s.density_matrix()).unwrap();
        let a = s.extract_moments();
        let b = rho.extract_moments();
        assert_abs_diff_eq!(a.n1, b.n1, epsilon = 1e-12);
        assert_abs_diff_eq!(a.n2, b.n2, epsilon = 1e-12);
        assert_abs_diff_eq!((a.cross - b.cross).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((a.mean1 - b.mean1).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((a.crossc - b.crossc).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ladder_algebra_commutator() {
        // ⟨aa†⟩ − ⟨a†a⟩ = 1 per mode for states supported below cutoff−2.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let s = random_pure(&mut rng, 8, 5);
            for mode in [Mode::One, Mode::Two] {
                let aad = s.expectation(&[(mode, Ladder::Annihilate), (mode, Ladder::Create)]);
                let ada = s.expectation(&[(mode, Ladder::Create), (mode, Ladder::Annihilate)]);
                assert_abs_diff_eq!((aad - ada).re, 1.0, epsilon = 1e-10);
                assert_abs_diff_eq!((aad - ada).im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn constructed_states_are_normalized_and_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let s = random_pure(&mut rng, 5, 5);
            assert_abs_diff_eq!(s.trace(), 1.0, epsilon = 1e-12);
        }
        let a = TwoModeState::basis_state(3, 0, 0).unwrap();
        let b = TwoModeState::basis_state(3, 1, 1).unwrap();
        let rho = mix(&[a, b], &[0.3, 0.7]).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        assert!(rho.min_eigenvalue() >= -1e-9);
    }

    #[test]
    fn mix_spectral_decomposition() {
        let a = TwoModeState::basis_state(3, 0, 0).unwrap();
        let b = TwoModeState::basis_state(3, 1, 1).unwrap();
        let rho = mix(&[a, b], &[0.5, 0.5]).unwrap();
        let eig = rho.eigenvalues();
        assert_abs_diff_eq!(eig[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[2].abs(), 0.0, epsilon = 1e-12);
        assert_eq!(rho.kind(), StateKind::DensityOperator);
    }

    #[test]
    fn mix_validates_inputs() {
        let a = TwoModeState::vacuum(3);
        let b = TwoModeState::vacuum(4);
        assert!(matches!(
            mix(&[a.clone(), b], &[0.5, 0.5]),
            Err(Error::ShapeMismatch(3, 4))
        ));
        assert!(matches!(
            mix(std::slice::from_ref(&a), &[0.9]),
            Err(Error::Weight(_))
        ));
        assert!(matches!(
            mix(std::slice::from_ref(&a), &[-1.0, 2.0]),
            Err(Error::Weight(_))
        ));
        let single = mix(&[a], &[1.0]).unwrap();
        assert_abs_diff_eq!(single.eigenvalues()[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn from_density_rejects_non_hermitian() {
        let mut m = DMatrix::from_element(4, 4, C64::ZERO);
        m[(0, 1)] = C64::new(0.5, 0.0);
        assert!(TwoModeState::from_density(1, m).is_err());
    }

    #[test]
    fn boundary_support_flags_non_converged() {
        let s = TwoModeState::basis_state(4, 4, 0).unwrap();
        assert!(!s.is_converged());
        assert_abs_diff_eq!(s.tail_mass(), 1.0, epsilon = 1e-15);
        let inner = TwoModeState::basis_state(4, 1, 1).unwrap();
        assert!(inner.is_converged());
        assert_eq!(inner.tail_mass(), 0.0);
    }

    #[test]
    fn displace_vacuum_gives_poisson_amplitudes() {
        let beta = C64::new(0.8, -0.3);
        // A tight tail keeps the post-truncation renormalization shift
        // below the comparison tolerance.
        let policy = TruncationPolicy::new(1e-14, 120).unwrap();
        let s = TwoModeState::vacuum(8)
            .displaced(beta, C64::ZERO, &policy)
            .unwrap();
        let v = s.amplitudes().unwrap();
        let side = s.cutoff() + 1;
        // Brute-force coherent expansion e^(−|β|²/2) βⁿ/√n!. The clipped
        // generator deviates from the infinite-space exponential only in
        // a boundary layer a few levels wide, so the strict comparison
        // covers the interior.
        let mut expect = C64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..(side - 1) {
            let idx = n * side;
            let tol = if n + 4 < side { 1e-12 } else { 1e-8 };
            assert_abs_diff_eq!((v[idx] - expect).norm(), 0.0, epsilon = tol);
            expect *= beta / C64::new(((n + 1) as f64).sqrt(), 0.0);
        }
        assert!(s.is_converged());
    }

    #[test]
    fn displace_by_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let s = random_pure(&mut rng, 6, 3);
        let d = s
            .displaced(C64::ZERO, C64::ZERO, &TruncationPolicy::default())
            .unwrap();
        let diff = (s.amplitudes().unwrap() - d.amplitudes().unwrap()).norm();
        assert_abs_diff_eq!(diff, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn displacement_preserves_central_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let s = random_pure(&mut rng, 10, 4);
        let before = s.extract_moments();
        let beta1 = C64::new(0.4, 0.2);
        let beta2 = C64::new(-0.1, 0.5);
        let after = s
            .displaced(beta1, beta2, &TruncationPolicy::default())
            .unwrap()
            .extract_moments();
        assert_abs_diff_eq!(before.n1, after.n1, epsilon = 1e-9);
        assert_abs_diff_eq!(before.n2, after.n2, epsilon = 1e-9);
        assert_abs_diff_eq!((before.sq1 - after.sq1).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!((before.sq2 - after.sq2).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!((before.cross - after.cross).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!((before.crossc - after.crossc).norm(), 0.0, epsilon = 1e-9);
        // The means do move: by β itself.
        assert_abs_diff_eq!(
            (after.mean1 - before.mean1 - beta1).norm(),
            0.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            (after.mean2 - before.mean2 - beta2).norm(),
            0.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn displacement_of_density_matches_pure_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let s = random_pure(&mut rng, 6, 2);
        let rho = TwoModeState::from_density(6, s.density_matrix()).unwrap();
        let beta = C64::new(0.3, 0.1);
        let policy = TruncationPolicy::default();
        let a = s.displaced(beta, -beta, &policy).unwrap().extract_moments();
        let b = rho
            .displaced(beta, -beta, &policy)
            .unwrap()
            .extract_moments();
        assert_abs_diff_eq!(a.n1, b.n1, epsilon = 1e-9);
        assert_abs_diff_eq!((a.mean1 - b.mean1).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!((a.cross - b.cross).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn displacement_too_large_for_policy_errors() {
        let policy = TruncationPolicy::new(1e-10, 6).unwrap();
        let res = TwoModeState::vacuum(4).displaced(C64::new(3.0, 0.0), C64::ZERO, &policy);
        assert!(matches!(res, Err(Error::TruncationLoss { .. })));
    }

    #[test]
    fn overlap_requires_matching_shapes() {
        let a = TwoModeState::vacuum(3);
        let b = TwoModeState::vacuum(4);
        assert!(a.overlap(&b).is_err());
        let c = TwoModeState::basis_state(3, 1, 0).unwrap();
        assert_eq!(a.overlap(&c).unwrap(), C64::ZERO);
        assert_eq!(a.overlap(&a).unwrap(), C64::ONE);
    }

    #[test]
    fn embedded_preserves_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let s = random_pure(&mut rng, 5, 3);
        let big = s.embedded(9).unwrap();
        let a = s.extract_moments();
        let b = big.extract_moments();
        assert_abs_diff_eq!(a.n1, b.n1, epsilon = 1e-13);
        assert_abs_diff_eq!((a.cross - b.cross).norm(), 0.0, epsilon = 1e-13);
        assert!(s.embedded(3).is_err());
    }

    #[test]
    fn extracted_moments_satisfy_cauchy_schwarz() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let s = random_pure(&mut rng, 7, 4);
            let m = s.extract_moments();
            let c2 = m.cross.norm_sqr();
            assert!(c2 <= (m.n1 + 1.0) * m.n2 + 1e-9);
            assert!(c2 <= m.n1 * (m.n2 + 1.0) + 1e-9);
        }
    }

    #[test]
    fn variance_identity_on_fock_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let s = random_pure(&mut rng, 6, 3);
            let m = s.extract_moments();
            for cv in [-1.9, -0.7, 0.3, 1.0] {
                let c = epr::EprScale::new(cv).unwrap();
                let (du2, dv2) = epr::uv_variances(&m, c);
                assert_abs_diff_eq!(
                    du2 + dv2,
                    c.bound() + 2.0 * epr::t_expectation(&m, c),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(1e-10, 120).is_ok());
        assert!(TruncationPolicy::new(0.0, 120).is_err());
        assert!(TruncationPolicy::new(2.0, 120).is_err());
        assert!(TruncationPolicy::new(1e-10, 0).is_err());
    }
}
