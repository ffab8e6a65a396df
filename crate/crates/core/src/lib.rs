//! Deformed exponential families on finite sample spaces.
//!
//! A deformation replaces the natural logarithm by a φ-logarithm
//! `ln_φ(v) = ∫₁^v dy/φ(y)` and the exponential by its inverse `exp_φ`.
//! Over a finite sample space `(X, μ)` with a strictly positive base density
//! `p` and statistics `H₁..H_m`, the φ-exponential family is
//!
//! ```text
//! p_θ(x) = exp_φ(θ·H(x) − α(θ)) p(x)
//! ```
//!
//! where the normalizer `α(θ)` makes `p_θ` a density. This crate provides:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`deformations`] | φ, ψ, ln_φ, exp_φ and derivatives for classical, Kaniadakis-κ, rate-function and σ-constructed deformations |
//! | [`state_space`] | sample spaces, densities, expectations, centering, projections |
//! | [`family`] | the normalizer α, the nonparametric chart `p_u = exp_φ(u − K(u)) p`, escort densities, DK, D²K |
//! | [`polytope`] | the marginal polytope `M = conv{H(x)}` with LP-backed membership and separation |
//! | [`conjugate`] | the convex conjugates α* and H_V with attainment status and certificates |
//! | [`oracle`] | brute-force reference computations used by the test suite |
//! | [`checks`] | executable property groups, shared by the CLI and the acceptance tests |
//!
//! ```
//! use defexp::{Deformation, PhiExponentialFamily, SampleSpace, Density, RandomVariable};
//!
//! let space = SampleSpace::new(vec!["a".into(), "b".into()], vec![0.5, 0.5]).unwrap();
//! let p = Density::new(&space, vec![1.0, 1.0]).unwrap();
//! let h = RandomVariable::new(vec![0.0, 1.0]);
//! let fam = PhiExponentialFamily::new(Deformation::classical(), space, p, vec![h]).unwrap();
//! let alpha = fam.alpha(&[2.0]).unwrap();
//! assert!((alpha - ((1.0 + 2f64.exp()) / 2.0).ln()).abs() < 1e-10);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod conjugate;
pub mod deformations;
mod error;
pub mod family;
pub mod model;
mod numeric;
pub mod oracle;
pub mod polytope;
pub mod state_space;

pub use conjugate::{ConjugateOptions, ConjugateResult, ConjugateStatus};
pub use deformations::{Deformation, DeformationKind};
pub use error::{Error, Result};
pub use family::{FamilyTolerances, PhiExponentialFamily, ThetaPoint, UCoordinate};
pub use polytope::{MarginalPolytope, MembershipCertificate, SeparationCertificate};
pub use state_space::{Density, RandomVariable, SampleSpace};
