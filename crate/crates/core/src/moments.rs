//! The integrals `M_j(ω) = ∫_{R^n} dξ / ((2π|ξ|)^{2s} + ω)^j`.
//!
//! Two independent routes are provided. The closed form follows from the
//! radial substitution `t = (2πρ)^{2s}/ω`, which turns the integral into a
//! Beta integral:
//!
//! `M_j(ω) = |S^{n-1}| / ((2π)^n 2s) · ω^{a-j} · B(a, j - a)`, `a = n/(2s)`.
//!
//! The quadrature route integrates the radial form
//! `|S^{n-1}| ∫_0^∞ ρ^{n-1} ((2πρ)^{2s} + ω)^{-j} dρ` directly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{beta, gamma, integrate_halfline, QuadratureSpec};
use crate::params::PhysParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentTriple {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub method: MomentMethod,
}

/// Surface area `2π^{n/2}/Γ(n/2)` of the unit sphere in `R^n`.
pub fn sphere_area(n: u32) -> f64 {
    let half = f64::from(n) / 2.0;
    // n >= 1 keeps the Gamma argument positive
    2.0 * PI.powf(half) / gamma(half).expect("n/2 > 0")
}

fn check_order(j: f64, params: &PhysParams) -> Result<()> {
    if !(j > params.ratio()) || !j.is_finite() {
        return Err(Error::Domain { function: "moment (requires j > n/(2s))", value: j });
    }
    Ok(())
}

/// Closed form of `M_j(ω)` through the Beta function.
pub fn moment_closed(j: f64, params: &PhysParams) -> Result<f64> {
    check_order(j, params)?;
    let a = params.ratio();
    let prefactor = sphere_area(params.n) / ((2.0 * PI).powi(params.n as i32) * 2.0 * params.s);
    Ok(prefactor * params.omega.powf(a - j) * beta(a, j - a)?)
}

/// `M_j(ω)` by adaptive quadrature of the radial integral.
pub fn moment_quadrature(j: f64, params: &PhysParams, spec: &QuadratureSpec) -> Result<f64> {
    check_order(j, params)?;
    let n = params.dim();
    let two_s = 2.0 * params.s;
    let omega = params.omega;
    let integrand = |rho: f64| {
        let m = (2.0 * PI * rho).powf(two_s) + omega;
        rho.powf(n - 1.0) / m.powf(j)
    };
    let decay = two_s * j - n + 1.0;
    let est = integrate_halfline(integrand, decay, spec)?;
    Ok(sphere_area(params.n) * est.value)
}

/// `(M_1, M_2, M_3)` in closed form.
pub fn moments(params: &PhysParams) -> MomentTriple {
    // s > n/2 makes every order j >= 1 admissible
    let m = |j: f64| moment_closed(j, params).expect("j >= 1 > n/(2s)");
    MomentTriple { m1: m(1.0), m2: m(2.0), m3: m(3.0), method: MomentMethod::ClosedForm }
}

/// `(M_1, M_2, M_3)` by quadrature.
pub fn moments_quadrature(params: &PhysParams, spec: &QuadratureSpec) -> Result<MomentTriple> {
    Ok(MomentTriple {
        m1: moment_quadrature(1.0, params, spec)?,
        m2: moment_quadrature(2.0, params, spec)?,
        m3: moment_quadrature(3.0, params, spec)?,
        method: MomentMethod::Quadrature,
    })
}
