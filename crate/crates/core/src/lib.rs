//! Information-theoretic indistinguishability analysis for quantum encryption
//! schemes.
//!
//! A scheme is a keyed ensemble of channels. Its security against unbounded
//! adversaries is governed by the key-averaged cipher states `ρ_x = Σ_k p_k E_k(|x><x|)`:
//! if every pair of plaintexts yields cipher states within trace distance
//! below the threshold, no measurement separates them better than that; if some
//! pair is further apart, the Helstrom measurement on that pair is an explicit
//! attack achieving success `½(1 + D)`.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: dense complex matrices and a Jacobi Hermitian eigensolver.
//! - [`state`]: pure states, density operators, channels, POVMs.
//! - [`scheme`]: encryption schemes, cipher states and built-in reference schemes.
//! - [`analysis`]: trace distance, Helstrom measurement, indistinguishability reports.
//! - [`game`]: Monte Carlo IND and semantic-security games and the reductions between them.
//! - [`selftest`]: a fixed-seed invariant suite.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod game;
pub mod linalg;
pub mod random;
pub mod rng;
pub mod scheme;
pub mod selftest;
pub mod state;

pub use error::{Error, ErrorKind, Result};
pub use exec::Execution;
