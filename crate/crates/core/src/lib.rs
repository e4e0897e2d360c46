#![no_std]
//! Exact computations on super-symplectic charts: Grassmann coefficients,
//! superfunctions, differential forms, Poisson brackets, super Lie algebra
//! cohomology, Heisenberg coadjoint orbits, Čech periods and prequantization.

extern crate alloc;

pub mod cech;
pub mod charts;
pub mod error;
pub mod forms;
pub mod grassmann;
pub mod heisenberg;
pub mod liecoh;
pub mod linalg;
pub mod prequant;
pub mod scalar;
pub mod symplectic;

pub use error::{Error, Result};
