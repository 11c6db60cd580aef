//! Additive information of projective quantum measurements at finite dimension.
//!
//! The crate models a density operator `ρ` on `ℂ^d`, partitions of unity into
//! orthogonal projections, and real functionals `I` on those partitions that are
//! additive over physically independent pairs. It provides
//!
//! * the functionals themselves ([`info`]): Shannon/Rényi symmetric parts, the
//!   general form `I(P) = I_s(ρ(P_i)) + Σ μ(P_i) log ρ(P_i)`, conditional forms
//!   and the cdf functional `J_α`;
//! * exact set algebra on `[0,1)` ([`borel`]) and boolean structures mapping
//!   cells of that algebra to projections ([`structure`]);
//! * the extraction engine ([`decompose`]) that recovers `μ` and `I_s` from a
//!   black-box additive information;
//! * the dilation construction ([`dilation`]) and executable axiom suites and
//!   counterexamples ([`gallery`]).
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod borel;
pub mod decompose;
pub mod dilation;
pub mod gallery;
pub mod info;
pub mod linalg;
pub mod math;
pub mod random;
pub mod rational;
pub mod structure;

pub use borel::{IntervalSet, MeasurablePartition};
pub use decompose::{ExtractionConfig, ExtractionReport, InformationOracle};
pub use info::{Distribution, GeneralInformation, StepCdf, SymmetricInformation};
pub use linalg::{CMat, Projection, ProjectionPartition, SignedOperator, State};
pub use rational::Rational;
pub use structure::BooleanStructure;

/// Default tolerance for operator identities at unit matrix scale.
pub const DEFAULT_TOL: f64 = 1e-10;
