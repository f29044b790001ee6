//! Exact integer laboratory for the discrete cat map on the n×n torus.
//!
//! The lattice map `(x, y) -> (x + y, x + 2y) mod n` is a permutation of the
//! n² lattice points, so every configuration of cell values eventually
//! returns to itself. This crate computes the dynamics exactly:
//!
//! - [`map`] — point stepping, matrix powers mod n, orbits, and the exact
//!   period m_n (the order of the matrix `[1 1; 1 2]` mod n).
//! - [`bound`] — prime factorization of n and the Dyson–Falk upper bound m*
//!   on the period, with per-factor term provenance.
//! - [`image`] — n×n grayscale configurations, bulk iteration, exact
//!   recurrence via permutation cycle decomposition, and a smearing metric.
//! - [`pgm`] — square PGM images in and out (`P5` written, `P2`/`P5` read).
//! - [`qualia`] — the finite matching calculus over explicit match graphs:
//!   manors, M-paths, clans, categories, linear span arrays, and the
//!   closed-form maximum-manor sizes for square, triangular, and cubical
//!   networks, each checked against a lattice-ball oracle.
//!
//! All operations are pure functions of immutable inputs and are safe to
//! call from multiple threads.

pub mod bound;
pub mod error;
pub mod image;
pub mod map;
pub mod pgm;
pub mod qualia;

pub use error::{Error, Result};
