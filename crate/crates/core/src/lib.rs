//! Laplace layer potentials on smooth closed planar curves.
//!
//! The crate assembles Nyström discretizations of the single layer `V`, the
//! double layer trace `K`, its adjoint `K′` and the hypersingular operator `W`,
//! pulls them back under boundary diffeomorphisms, builds the Calderón
//! projector, and implements the block-scaling and power-series
//! representations of the same operators on a domain with a small hole
//! `Ω(ε) = Ω^o ∖ εΩ̄^i`.

pub mod error;
pub mod fit;
pub mod geometry;
pub mod kernel;
pub mod operators;
pub mod perforated;
pub mod shape;
pub mod spectral;
pub mod study;

pub use error::{Error, Result};
