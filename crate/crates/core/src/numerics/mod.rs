//! Scalar numerical building blocks: half-line quadrature, Gamma/Beta and
//! bracketed root finding, line fits.

pub mod fit;
pub mod quadrature;
pub mod roots;
pub mod special;

pub use fit::{linear_fit, LinearFit};
pub use quadrature::{integrate, integrate_halfline, Estimate, QuadratureSpec, TailPolicy};
pub use roots::{bisect, find_root, Bracket};
pub use special::{beta, gamma, ln_beta, ln_gamma};
