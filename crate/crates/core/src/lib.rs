//! Entanglement-assisted versus classical control of a two-agent
//! decentralized POMDP built around the Mermin–Peres magic square.
//!
//! The crate is layered bottom-up:
//!
//! - [`complexlin`]: dense complex matrices at dimensions 2, 4 and 16, with
//!   Kronecker products, a Hermitian Jacobi eigenvalue solver and tensor
//!   factor embedding.
//! - [`quantum`]: pure states, density matrices, projective measurements
//!   built from ±1 observables, collapse, Bell pairs and the
//!   partial-transpose entanglement witness.
//! - [`mermin_peres`]: the magic square itself, its validation, the quantum
//!   round on two Bell pairs, the exact outcome distribution and the
//!   classical brute force.
//! - [`dec_pomdp`]: the controlled Markov chain on `{1,2,3}²`, its kernels,
//!   classical / relaxed / entanglement-assisted policies, the simulator and
//!   the exhaustive per-step bound oracles.

#![forbid(unsafe_code)]

pub mod complexlin;
pub mod dec_pomdp;
pub mod error;
pub mod mermin_peres;
pub mod quantum;
pub mod seed;

pub use error::{Error, Result};
