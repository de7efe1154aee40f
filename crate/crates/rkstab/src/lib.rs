//! Strong-stability analysis of explicit Runge-Kutta methods on
//! semi-negative linear autonomous systems.
//!
//! A method with stability polynomial `R_s(z) = Σ α_k z^k` applied to
//! `u' = Lu` advances the solution by `u ↦ R_s(τL)u`. When the pair
//! `(L, H)` satisfies `LᵀH + HL ⪯ 0` (the energy `‖u‖²_H` is
//! non-increasing along exact solutions), the squared energy after one
//! step decomposes exactly as
//!
//! ```text
//! ‖R_s(τL)u‖²_H = Σ_k β_k τ^{2k} ‖L^k u‖²_H
//!               + Σ_{i,j} γ_{i,j} τ^{i+j+1} [L^i u, L^j u]
//! ```
//!
//! with `[v, w] = −⟨v, (LᵀH + HL)w⟩ ⪰ 0` and rational coefficients
//! `β_k`, `γ_{i,j}` depending only on the α's. The first nonzero `β_k`
//! (`k ≥ 1`) and the leading block of `Γ` decide strong stability
//! (`‖u^{n+1}‖_H ≤ ‖u^n‖_H` for all small enough `τ`):
//!
//! * leading `β > 0` — not strongly stable;
//! * leading `β < 0` and leading `Γ` block negative definite — strongly
//!   stable;
//! * otherwise the energy test is inconclusive.
//!
//! Everything on this decision path is computed in exact rational
//! arithmetic ([`energy`], [`classify`]); floating point appears only in
//! diagnostic eigenvalues and in the empirical harness ([`verify`]).
//!
//! # Quick start
//!
//! ```
//! use rkstab::classify::{classify_method, Status};
//! use rkstab::polynomial::StabilityPolynomial;
//!
//! // The 3-stage third-order method (truncated exponential series).
//! let r = StabilityPolynomial::taylor(3).unwrap();
//! let verdict = classify_method(&r);
//! assert_eq!(verdict.status, Status::StronglyStable);
//! ```

pub mod classify;
pub mod energy;
pub mod linalg;
pub mod polynomial;
pub mod presets;
pub mod rational;
pub mod verify;
