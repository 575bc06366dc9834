//! Desk-scale computational experiments on invariant random subgroups.
//!
//! The crate is organised around a handful of exact representations:
//!
//! - [`group`]: marked groups (finite multiplication tables, free groups, truncated
//!   rooted-tree groups) with canonical element forms and word arithmetic.
//! - [`subgroup`]: subgroups as element sets, coset tables or folded core graphs, with
//!   ball fingerprints and the discrete Chabauty metric.
//! - [`irs`]: finitely supported invariant random subgroups with exact rational weights.
//! - [`spectral`]: Schreier graphs, spectral radii of the Markov operator and
//!   Benjamini–Schramm local statistics.
//! - [`tdlc`]: truncated automorphism groups of rooted trees, Haar ratios by coset
//!   counting and Følner set search.
//! - [`convex`]: polytopes in the unit ball described by support functions, barycenters
//!   of measures on bodies and fixed-point sets of finite orthogonal groups.
//!
//! Probabilities, Haar ratios and polytope coordinates are exact rationals. Floating point
//! only appears in the spectral module and at the reporting layer of the convex module.

#![forbid(unsafe_code)]

pub mod convex;
pub mod error;
pub mod group;
pub mod irs;
pub mod rational;
pub mod spectral;
pub mod subgroup;
pub mod tdlc;

pub use error::{Error, Result};
pub use rational::Rational;
