//! Computational core for the quaternionic Heisenberg group ℍⁿ × ℝ³.
//!
//! The group carries the product `(u,v)(r,s) = (u+r, v+s+2Im(r·ū))` on
//! quaternion n-tuples `u, r` and center components `v, s ∈ ℝ³`, together
//! with the anisotropic dilations `δρ(u,t) = (ρu, ρ²t)`. This crate provides:
//!
//! - exact quaternion arithmetic and the pairing `r·ū` ([`quaternion`]),
//! - the group law, inversion, dilations, and a Monte Carlo check of the
//!   Haar-measure scaling exponent `4n+6` ([`group`]),
//! - the closed-form homogeneous quasi-norm families (Korányi,
//!   Folland–Stein, α-family, box, max) with axiom-checking primitives
//!   ([`norms`]),
//! - numerical estimation of the sandwich constants between any two
//!   homogeneous quasi-norms by extremizing over unit spheres
//!   ([`equivalence`]),
//! - the Carnot–Carathéodory distance via horizontal-path optimization
//!   ([`cc`]),
//! - exact symbolic algebra of the left-invariant vector fields and the
//!   sum-of-squares sub-Laplacian at n = 1 ([`operators`]).
//!
//! All randomized procedures are deterministic functions of an explicit
//! seed.

pub mod cc;
pub mod equivalence;
pub mod error;
pub mod group;
pub mod literal;
pub mod norms;
pub mod operators;
pub mod quaternion;

pub use cc::{CcResult, HorizontalPath, SolverParams};
pub use equivalence::EquivEstimate;
pub use error::HqError;
pub use group::GroupElement;
pub use norms::NormSpec;
pub use quaternion::Quaternion;
