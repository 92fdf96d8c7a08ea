//! A desk-scale numerical laboratory for bilateral weighted-shift dynamics.
//!
//! The crate constructs three families of bilateral weighted shifts (an
//! oscillatory family whose growth exponent swings between full exponential
//! growth and decay along dyadic subsequences, a geometric valley family, and
//! a hybrid geometric/harmonic family), lifts them to J-unitary and
//! symplectic operators on the doubled space, and measures what the lifts do
//! to finitely supported vectors: exact orbits, log-domain growth
//! trajectories, Ljapunov upper indices, operator-norm and spectral-radius
//! estimates, and horizon-limited membership verdicts for the stability sets
//! `S0` (orbits vanishing), `S` (orbits bounded) and `S+` (subexponential
//! orbits).
//!
//! Layout:
//! - [`weights`] — the weight families, always evaluated as `ln u_n`;
//! - [`fockspace`] — sparse integer-indexed vectors and paired vectors;
//! - [`shiftop`] — the shift, inverse, adjoint and adjoint-inverse powers;
//! - [`hamilton`] — the `U (+) U^{*-1}` lift and its two Gram forms;
//! - [`spectral`] — trajectories, Ljapunov estimates, membership verdicts;
//! - [`claims`] — one pass/fail report per quantitative claim;
//! - [`continuum`] — the continuous-time transport analogue.

pub mod claims;
pub mod continuum;
pub mod error;
pub mod fockspace;
pub mod hamilton;
pub mod numeric;
pub mod shiftop;
pub mod spectral;
pub mod weights;

pub use error::{Error, Result};
pub use fockspace::{harmonic_test_vector, HatVector, SparseVector};
pub use shiftop::FamilyMember;
pub use weights::WeightSequence;
