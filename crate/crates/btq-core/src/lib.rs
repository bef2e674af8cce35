//! Exact combinatorics of Bruhat–Tits trees, their products over function
//! fields of the projective line, rank-2 bundle quotients and the homology
//! machinery around them. Everything is computed with exact arithmetic over
//! finite fields and the integers.

#![no_std]

extern crate alloc;

pub mod error;
pub mod exact;
pub mod model;
pub mod building;
pub mod bundles;
pub mod complex;
pub mod curve;
pub mod ellfun;
pub mod equivariant;
pub mod pic;
pub mod points;
pub mod tree;

pub use error::{Error, Result};
