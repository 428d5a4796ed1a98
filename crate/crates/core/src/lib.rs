//! Solitary waves of the fractional Schrödinger equation with a point
//! nonlinearity: `i∂_t u = (−Δ)^s u − |u|^{2σ} u δ_0` on `R^n`, `n < 2s`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod moments;
pub mod numerics;
pub mod parallel;
pub mod params;
pub mod spectrum;
pub mod variational;
pub mod verify;
pub mod waves;

pub use error::{Error, Result};
pub use params::PhysParams;
