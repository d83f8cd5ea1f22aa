//! Exact and numeric steady states of linear dynamics on labeled digraphs
//! with zeroth-order synthesis and first-order degradation.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, rendering and
//! the command-line front end live in the `steadykernel` crate.
//!
//! Pipeline overview:
//!
//! * [`graph`] holds the labeled digraph, SCC decomposition, canonical
//!   relabeling and the complementary digraph with the extra vertex `*`.
//! * [`laplacian`] assembles the Laplacian, `D`, `s`, `F = L - D` and the
//!   `N / B / T` block partition.
//! * [`spantree`] enumerates rooted spanning trees and evaluates Laplacian
//!   minors with the Matrix-Tree Theorem.
//! * [`equilibrium`] checks existence and computes steady states.
//! * [`inverse`] inverts perturbed Laplacians from spanning-tree sums.
//! * [`verify`] integrates the bound numeric system as a dynamic witness.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod equilibrium;
pub mod error;
pub mod graph;
pub mod inverse;
pub mod laplacian;
pub mod matrix;
pub mod spantree;
pub mod symexpr;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{LabeledDigraph, SccDecomposition};
pub use matrix::SymMatrix;
pub use symexpr::{Polynomial, Rational, RationalExpr, Symbol};
