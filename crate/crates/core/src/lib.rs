//! Exact symbolic engine for the free-field realization of a quantum
//! affine superalgebra of type `sl(N|1)` at generic level.
//!
//! The crate provides, bottom up:
//!
//! - [`num`]: sparse multivariate Laurent polynomials over `BigInt` and
//!   their exact fractions — the coefficient field for everything else;
//! - [`exponent`]: the `{1, k, alpha}` half-integer exponent lattice of
//!   `q`-powers;
//! - [`qcoeff`]: q-integers `[a]`, mode kernels `[a m]`, exponential-sum
//!   decomposition, and the square-root extension used by the
//!   finite-dimensional matrices;
//! - [`superlattice`]: Cartan data, classical weights and the inversion
//!   identity;
//! - [`freefield`]: the deformed Heisenberg algebra of three boson
//!   families with zero modes and cocycle signs, plus the catalog of
//!   normal-ordered exponential atoms;
//! - [`ope`]: contraction of exponential atoms, graded commutators as
//!   delta-supported distributions, specializations, and the two
//!   identity suites over the atom catalog;
//! - [`currents`]: assembly of the currents `X_i^{\pm}`, `\Psi_i^{\pm}`,
//!   `h_{i,m}` and the screening currents `S_i`, with the screening and
//!   Drinfeld relation checkers;
//! - [`elliptic`]: truncated `(w, p)` double series and the theta-weighted
//!   exchange check for products of screening currents;
//! - [`fock`]: a truncated Fock window with symbolic highest-weight
//!   charges, the eta-xi projector system and the grading operator;
//! - [`levelzero`]: exact `2^N`-dimensional evaluation modules for
//!   `N = 3, 4`, their duals, and the relation checkers;
//! - [`vertex`]: elementary vertex operators, seed-component relations,
//!   component derivation plans and the charge-balance classifier;
//! - [`report`]: plain data types for machine-readable suite reports.
//!
//! All arithmetic is exact; every identity check reduces to literal
//! equality in a rational-function field.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod num;
pub mod exponent;
pub mod qcoeff;
pub mod superlattice;
pub mod freefield;
pub mod ope;
pub mod appendix;
pub mod currents;
pub mod elliptic;
pub mod fock;
pub mod levelzero;
pub mod vertex;
pub mod report;
