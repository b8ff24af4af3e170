//! Constructors for the concrete states the witness is exercised on:
//! two-mode squeezed vacuum, coherent products, entangled coherent
//! states, and seeded random separable mixtures for property tests.
//!
//! Each constructor grows its cutoff (doubling, capped by the policy)
//! until the boundary-layer mass passes the policy's tail tolerance, and
//! fails loudly with `TruncationLoss` if the cap is not enough.

use crate::error::{Error, Result};
use crate::fock::{mix, TruncationPolicy, TwoModeState};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

/// Which entangled coherent state: |ψ⁺⟩ ∝ |α,α⟩ + |−α,−α⟩ or
/// |ψ⁻⟩ ∝ |α,α⟩ − |−α,−α⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcsSign {
    Plus,
    Minus,
}

/// Grow the cutoff until `build`'s result passes the tail tolerance.
fn grow_until_converged<F>(
    policy: &TruncationPolicy,
    start: usize,
    build: F,
) -> Result<TwoModeState>
where
    F: Fn(usize) -> Result<TwoModeState>,
{
    let mut cutoff = start.clamp(2, policy.max_cutoff);
    loop {
        let mut state = build(cutoff)?;
        if state.tail_mass() <= policy.tail_tolerance {
            state.mark_convergence(policy.tail_tolerance);
            return Ok(state);
        }
        if cutoff >= policy.max_cutoff {
            return Err(Error::TruncationLoss {
                tail_mass: state.tail_mass(),
                tolerance: policy.tail_tolerance,
                cutoff,
            });
        }
        cutoff = (2 * cutoff).min(policy.max_cutoff);
    }
}

/// Poissonian coherent amplitudes e^(−|α|²/2) αⁿ/√n! up to the cutoff.
fn coherent_amplitudes(cutoff: usize, alpha: C64) -> Vec<C64> {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..=cutoff {
        amps.push(a);
        a *= alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    amps
}

fn product_vector(cutoff: usize, alpha1: C64, alpha2: C64) -> Vec<C64> {
    let p1 = coherent_amplitudes(cutoff, alpha1);
    let p2 = coherent_amplitudes(cutoff, alpha2);
    let side = cutoff + 1;
    let mut v = vec![C64::ZERO; side * side];
    for n1 in 0..side {
        for n2 in 0..side {
            v[n1 * side + n2] = p1[n1] * p2[n2];
        }
    }
    v
}

/// Two-mode squeezed vacuum exp[r(a₁†a₂† − a₁a₂)]|0,0⟩ in Schmidt form:
/// amplitudes tanhⁿ(r)/cosh(r) on |n,n⟩, zero elsewhere. Mean photon
/// number sinh²r per mode, ⟨a₁a₂⟩ = sinh r·cosh r.
pub fn two_mode_squeezed_vacuum(r: f64, policy: &TruncationPolicy) -> Result<TwoModeState> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!(
            "squeezing parameter must be ≥ 0, got {r}"
        )));
    }
    let t = r.tanh();
    grow_until_converged(policy, 8, |cutoff| {
        let side = cutoff + 1;
        let mut v = vec![C64::ZERO; side * side];
        let mut amp = 1.0 / r.cosh();
        for n in 0..side {
            v[n * side + n] = C64::new(amp, 0.0);
            amp *= t;
        }
        TwoModeState::from_amplitudes(cutoff, v)
    })
}

/// The product coherent state |α₁⟩⊗|α₂⟩.
pub fn coherent_product(
    alpha1: C64,
    alpha2: C64,
    policy: &TruncationPolicy,
) -> Result<TwoModeState> {
    let load = alpha1.norm_sqr().max(alpha2.norm_sqr());
    let start = (load + 8.0 * (load + 1.0).sqrt() + 8.0).ceil() as usize;
    grow_until_converged(policy, start, |cutoff| {
        TwoModeState::from_amplitudes(cutoff, product_vector(cutoff, alpha1, alpha2))
    })
}

/// Entangled coherent state N±(|α,α⟩ ± |−α,−α⟩) with
/// N± = 1/√(2[1 ± e^(−4|α|²)]).
///
/// The odd combination needs |α| ≥ 0.05 so the normalization stays
/// well-conditioned; it vanishes identically as α → 0.
pub fn entangled_coherent(
    sign: EcsSign,
    alpha: C64,
    policy: &TruncationPolicy,
) -> Result<TwoModeState> {
    if sign == EcsSign::Minus && alpha.norm() < 0.05 {
        return Err(Error::Domain(format!(
            "odd entangled coherent state needs |alpha| ≥ 0.05, got {}",
            alpha.norm()
        )));
    }
    let load = alpha.norm_sqr();
    let start = (load + 8.0 * (load + 1.0).sqrt() + 8.0).ceil() as usize;
    grow_until_converged(policy, start, |cutoff| {
        let side = cutoff + 1;
        let mut v = product_vector(cutoff, alpha, alpha);
        for n1 in 0..side {
            for n2 in 0..side {
                // The |−α,−α⟩ branch is the same vector up to parity.
                let parity = if (n1 + n2) % 2 == 0 { 1.0 } else { -1.0 };
                let branch = v[n1 * side + n2] * parity;
                match sign {
                    EcsSign::Plus => v[n1 * side + n2] += branch,
                    EcsSign::Minus => v[n1 * side + n2] -= branch,
                }
            }
        }
        TwoModeState::from_amplitudes(cutoff, v)
    })
}

/// Deterministic pseudo-random separable mixture
/// Σ wᵢ |αᵢ⟩⟨αᵢ| ⊗ |βᵢ⟩⟨βᵢ| with |α|, |β| ≤ 1.5, reproducible from the
/// seed. Panics if `branches` = 0.
pub fn random_separable(seed: u64, cutoff: usize, branches: usize) -> TwoModeState {
    assert!(branches >= 1, "a mixture needs at least one branch");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disc = |rng: &mut ChaCha8Rng| {
        let radius = 1.5 * rng.gen_range(0.0..1.0_f64).sqrt();
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        C64::from_polar(radius, angle)
    };
    let mut states = Vec::with_capacity(branches);
    let mut weights = Vec::with_capacity(branches);
    for _ in 0..branches {
        let alpha = disc(&mut rng);
        let beta = disc(&mut rng);
        states.push(
            TwoModeState::from_amplitudes(cutoff, product_vector(cutoff, alpha, beta))
                .expect("coherent products normalize"),
        );
        weights.push(rng.gen_range(0.05..1.0));
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    mix(&states, &weights).expect("weights normalized by construction")
}
