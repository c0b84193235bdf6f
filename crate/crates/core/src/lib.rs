//! Desk-scale exact models for the combinatorial layer of endoscopy:
//! based root data with Tits sections and Chevalley involutions, a-/chi-data
//! involutions, splitting-invariant cochains, theta-fixed subgroups, and
//! finite abelian Fourier inversion of packet tables.
//!
//! Everything is exact: coefficients live in a formal group mu_N x Z^k,
//! matrix oracles compute over Q(zeta_N), and lattice arithmetic is
//! integral throughout.

pub mod chevalley;
pub mod chidata;
pub mod cyclo;
pub mod endofourier;
pub mod error;
pub mod fixedgroup;
pub mod lembed;
pub mod mat;
pub mod models;
pub mod rootdatum;
pub mod snf;
pub mod splitinv;
pub mod tits;
pub mod torus;
pub mod twist;
pub mod weyl;

pub use error::{Error, Result};
