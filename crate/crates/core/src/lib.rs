//! Exact computation of multiple Seshadri constants on polarized abelian
//! surfaces of type (1, d) with Picard number one, at the orbits of finite
//! subgroups.
//!
//! The pipeline: a finite subgroup G of the surface pulls back to a
//! superlattice of the period lattice ([`lattice`]); a minimal multiple nL
//! of the polarization descends along the quotient isogeny to a primitive
//! bundle of type (1, d') with d' = n^2 d / |G| ([`descent`]); the
//! single-point constant of that bundle is either sqrt(2d') or determined
//! by the fundamental solution of the Pell equation l^2 - 2d' k^2 = 1
//! ([`pell`]); dividing by n gives the multiple constant ([`seshadri`]).
//! All arithmetic is exact over arbitrary-precision rationals ([`arith`]),
//! and every step has an independent brute-force cross-check ([`oracle`]).

pub mod arith;
pub mod descent;
pub mod lattice;
mod linalg;
pub mod oracle;
pub mod pell;
pub mod seshadri;

pub use arith::{Integer, Rational};
pub use lattice::{LatticeVector, PolarizedSurface, SubgroupPresentation};
pub use linalg::RMat4;
pub use oracle::{randomized_suite, verify_pipeline, VerificationReport};
pub use seshadri::{bauer_simple, multi_at_subgroup, SeshadriResult};
