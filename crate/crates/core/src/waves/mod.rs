//! The explicit standing wave `φ_ω = G_s^ω / G_s^ω(0)^{1 + 1/(2σ)}`, the
//! sharp constant of `H^s ↪ L^∞` and the Pohozaev identities it satisfies.

mod greens;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use greens::{bessel_j0, greens_value};

use crate::error::Result;
use crate::moments::{moment_closed, moments, moments_quadrature, sphere_area};
use crate::numerics::{gamma, QuadratureSpec};
use crate::parallel::{self, Execution};
use crate::params::PhysParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Greens,
    Soliton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub params: PhysParams,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: ProfileKind,
    pub center_value: f64,
}

/// `c²(ω) = 1/M_1(ω)`, the best constant in `c² ‖u‖_∞² ≤ ‖(−Δ)^{s/2}u‖² + ω‖u‖²`.
pub fn sobolev_constant(params: &PhysParams) -> f64 {
    1.0 / moments(params).m1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevComparison {
    /// `1/M_1(1)`.
    pub corrected: f64,
    /// `2^{n−1} π^{n/2−1} Γ(n/2) sin(nπ/(2s))`, the same constant without the
    /// `2s` Jacobian factor of the radial substitution.
    pub printed: f64,
}

/// Both forms of the sharp constant at `ω = 1`; `corrected = 2s · printed`.
pub fn sobolev_constant_printed_check(n: u32, s: f64) -> Result<SobolevComparison> {
    let params = PhysParams::new(n, s, 1.0, 1.0)?;
    let nf = f64::from(n);
    let printed = 2f64.powf(nf - 1.0) * PI.powf(nf / 2.0 - 1.0) * gamma(nf / 2.0)? * (nf * PI / (2.0 * s)).sin();
    Ok(SobolevComparison { corrected: sobolev_constant(&params), printed })
}

/// `φ_ω(0) = M_1(ω)^{−1/(2σ)}`.
pub fn soliton_center(params: &PhysParams) -> f64 {
    moments(params).m1.powf(-1.0 / (2.0 * params.sigma))
}

/// Samples of `φ_ω` at the given radii (`n ∈ {1, 2, 3}`).
pub fn soliton_profile(radii: &[f64], params: &PhysParams) -> Result<RadialProfile> {
    soliton_profile_with(radii, params, Execution::default())
}

pub fn soliton_profile_with(radii: &[f64], params: &PhysParams, exec: Execution) -> Result<RadialProfile> {
    let m1 = moment_closed(1.0, params)?;
    let scale = m1.powf(-(1.0 + 1.0 / (2.0 * params.sigma)));
    let values: Result<Vec<f64>> = parallel::map(exec, radii, |&r| Ok(scale * greens_value(r, params.omega, params)?))
        .into_iter()
        .collect();
    Ok(RadialProfile {
        params: *params,
        radii: radii.to_vec(),
        values: values?,
        kind: ProfileKind::Soliton,
        center_value: soliton_center(params),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevReport {
    pub l2_mass: f64,
    pub homog_seminorm_sq: f64,
    /// `|φ(0)|^{2σ+2}`.
    pub center_pow: f64,
    pub residual_mass_identity: f64,
    pub residual_seminorm_identity: f64,
    pub residual_energy_identity: f64,
}

/// Mass and `Ḣ^s` seminorm of `φ_ω` from Plancherel with quadrature moments,
/// checked against the closed-form identities
/// `‖φ‖² = (2s−n)/(2sω)|φ(0)|^{2σ+2}`, `‖(−Δ)^{s/2}φ‖² = (n/(2s))|φ(0)|^{2σ+2}`
/// and their sum `‖(−Δ)^{s/2}φ‖² + ω‖φ‖² = |φ(0)|^{2σ+2}`.
pub fn pohozaev_check(params: &PhysParams) -> Result<PohozaevReport> {
    let quad = moments_quadrature(params, &QuadratureSpec::default())?;
    let sigma = params.sigma;
    let omega = params.omega;
    let center = soliton_center(params);
    let center_pow = center.powf(2.0 * sigma + 2.0);
    // |φ̂|² = φ(0)^{2(2σ+1)} / m(ξ)²
    let amp = center.powf(2.0 * (2.0 * sigma + 1.0));
    let l2_mass = amp * quad.m2;
    let homog_seminorm_sq = amp * (quad.m1 - omega * quad.m2);
    let n = params.dim();
    let s = params.s;
    Ok(PohozaevReport {
        l2_mass,
        homog_seminorm_sq,
        center_pow,
        residual_mass_identity: (l2_mass - (2.0 * s - n) / (2.0 * s * omega) * center_pow).abs() / center_pow,
        residual_seminorm_identity: (homog_seminorm_sq - n / (2.0 * s) * center_pow).abs() / center_pow,
        residual_energy_identity: (homog_seminorm_sq + omega * l2_mass - center_pow).abs() / center_pow,
    })
}

/// Radial `L²` norm squared of sampled values by the trapezoid rule,
/// `|S^{n−1}| ∫ r^{n−1} f(r)² dr`.
pub fn radial_mass(profile: &RadialProfile) -> f64 {
    let n = profile.params.dim();
    let mut acc = 0.0;
    for w in profile.radii.windows(2).zip(profile.values.windows(2)) {
        let (r, v) = w;
        let f0 = r[0].powf(n - 1.0) * v[0] * v[0];
        let f1 = r[1].powf(n - 1.0) * v[1] * v[1];
        acc += 0.5 * (r[1] - r[0]) * (f0 + f1);
    }
    sphere_area(profile.params.n) * acc
}
