//! Exact verification of S_n-invariant F-nef divisors on the moduli space of
//! stable genus-zero curves with n marked points.
//!
//! The crate is organized bottom-up:
//!
//! - [`divisor`]: symmetric divisor classes in the boundary basis and in the
//!   contraction basis `(c; a_3, ..., a_{n/2})`, F-curve inequalities, integrality.
//! - [`strata`]: boundary strata encoded by their leaf-subset family `T`,
//!   trivalent trees (F-points), canonical shape codes and `S_n` orbit sizes.
//! - [`cone`]: the symmetric F-nef cone in normalized lattice coordinates,
//!   its extremal rays and its Hilbert basis.
//! - [`feasibility`]: the multigraph constraint systems attached to a
//!   divisor and a stratum, an exact simplex with Farkas witnesses, a
//!   branch-and-bound integer search and certificate checking.
//! - [`pipeline`]: campaigns over ray generators / Hilbert bases and F-point
//!   orbits, base-locus analysis, on-disk certificates and reports.
//!
//! All arithmetic is exact; no floating point value ever decides a verdict.

pub mod cone;
pub mod divisor;
mod error;
pub mod feasibility;
pub mod pipeline;
pub mod rational;
pub mod strata;

pub use error::{Error, Result};
