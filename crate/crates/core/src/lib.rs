//! Higher-root lattices of SU(3) quantum modules.
//!
//! The pipeline runs from a module's fundamental adjacency matrix to the
//! alcove fusion matrices ([`fusion`]), their signed periodic extension
//! ([`folding`]), the ribbon of higher roots and its Gram matrix
//! ([`ribbon`]), exact lattice invariants ([`lattice`]), theta series
//! ([`theta`]) and the Dirichlet character attached to the lattice
//! ([`numth`]). Reference values live in [`golden`] and are compared by
//! [`verify`].

pub mod catalog;
pub mod error;
pub mod folding;
pub mod fusion;
pub mod golden;
pub mod lattice;
pub mod matrix;
pub mod numth;
pub mod reduction;
pub mod ribbon;
pub mod theta;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
