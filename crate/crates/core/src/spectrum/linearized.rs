//! Real eigenvalues of the linearized Hamiltonian operator `JL` through the
//! scalar determinant obtained from its rank-one structure.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moments::{moments, sphere_area};
use crate::numerics::{find_root, integrate_halfline, Bracket, QuadratureSpec};
use crate::params::PhysParams;

const LOG_SCAN_POINTS: usize = 200;

/// `D(λ) = (a I_m − 1)(b I_m − 1) + ab I_λ²` with `a = c²`, `b = (2σ+1)c²`.
///
/// Both factors `a I_m − 1` and `I_λ` vanish at `λ = 0`, so the determinant is
/// evaluated through `D̃ = D/λ² = ab K² − a J (2σ − b λ² J)` where
/// `J = ∫ dξ/(m(m²+λ²))` and `K = ∫ dξ/(m²+λ²)`.
#[derive(Debug, Clone)]
pub struct SecularDeterminant {
    params: PhysParams,
    a: f64,
    b: f64,
    spec: QuadratureSpec,
}

impl SecularDeterminant {
    pub fn new(params: &PhysParams) -> Self {
        let m1 = moments(params).m1;
        let a = 1.0 / m1;
        Self {
            params: *params,
            a,
            b: (2.0 * params.sigma + 1.0) * a,
            spec: QuadratureSpec::default().with_rel_tol(1e-11),
        }
    }

    pub fn with_spec(mut self, spec: QuadratureSpec) -> Self {
        self.spec = spec;
        self
    }

    pub fn couplings(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn radial(&self, power: f64, lam: f64, decay: f64) -> Result<f64> {
        let n = self.params.dim();
        let two_s = 2.0 * self.params.s;
        let omega = self.params.omega;
        let lam2 = lam * lam;
        let f = |rho: f64| {
            let m = (2.0 * PI * rho).powf(two_s) + omega;
            rho.powf(n - 1.0) / (m.powf(power) * (m * m + lam2))
        };
        Ok(sphere_area(self.params.n) * integrate_halfline(f, decay, &self.spec)?.value)
    }

    /// `(J(λ), K(λ))`.
    pub fn integrals(&self, lam: f64) -> Result<(f64, f64)> {
        let n = self.params.dim();
        let s = self.params.s;
        let j = self.radial(1.0, lam, 6.0 * s - n + 1.0)?;
        let k = self.radial(0.0, lam, 4.0 * s - n + 1.0)?;
        Ok((j, k))
    }

    /// `D(λ)/λ²`, finite and continuous down to `λ = 0`.
    pub fn reduced(&self, lam: f64) -> Result<f64> {
        let (j, k) = self.integrals(lam)?;
        Ok(reduced_from(self.a, self.b, self.params.sigma, lam, j, k))
    }

    pub fn value(&self, lam: f64) -> Result<f64> {
        if lam == 0.0 {
            // (aM_1 − 1)(bM_1 − 1) with the closed-form moment
            let m1 = moments(&self.params).m1;
            return Ok((self.a * m1 - 1.0) * (self.b * m1 - 1.0));
        }
        Ok(lam * lam * self.reduced(lam)?)
    }

    /// `lim_{λ→0} D(λ)/λ² = −2σ c² Q`.
    pub fn small_lambda_limit(&self) -> f64 {
        -2.0 * self.params.sigma * self.a * super::vk_quantity(&self.params)
    }
}

pub(crate) fn reduced_from(a: f64, b: f64, sigma: f64, lam: f64, j: f64, k: f64) -> f64 {
    a * b * k * k - a * j * (2.0 * sigma - b * lam * lam * j)
}

/// Positive root of a reduced determinant `g`, searching `(ε, Λ]`.
///
/// Returns `None` when `g` keeps one sign over a logarithmic scan of
/// `(ε, 10³ω]` and starts nonnegative.
pub(crate) fn positive_root<G: Fn(f64) -> Result<f64>>(g: G, omega: f64, expect_root: bool) -> Result<Option<f64>> {
    let eps = 1e-8 * omega;
    let g_eps = g(eps)?;
    if g_eps < 0.0 {
        let mut hi = omega;
        let mut g_hi = g(hi)?;
        let mut grown = 0;
        while g_hi < 0.0 {
            hi *= 2.0;
            grown += 1;
            if grown > 80 {
                return Err(Error::RootSearchInconclusive);
            }
            g_hi = g(hi)?;
        }
        // refine the lower end so the bracket stays tight
        let mut lo = eps;
        let mut probe = hi * 0.5;
        while probe > eps {
            if g(probe)? < 0.0 {
                lo = probe;
                break;
            }
            probe *= 0.5;
        }
        let mut failure = None;
        let root = find_root(
            |x| match g(x) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            Bracket::new(lo, hi)?,
            1e-14 * hi,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        return Ok(Some(root));
    }
    if expect_root {
        return Err(Error::RootSearchInconclusive);
    }
    let hi = 1e3 * omega;
    let ratio = (hi / eps).powf(1.0 / (LOG_SCAN_POINTS - 1) as f64);
    let mut x = eps;
    for _ in 0..LOG_SCAN_POINTS {
        if g(x)? < 0.0 {
            return Err(Error::RootSearchInconclusive);
        }
        x *= ratio;
    }
    Ok(None)
}

/// The positive real eigenvalue of `JL` when the wave is unstable.
pub fn unstable_eigenvalue(params: &PhysParams) -> Result<Option<f64>> {
    let det = SecularDeterminant::new(params);
    let expect_root = super::vk_quantity(params) > 0.0
        && (params.sigma - params.critical_sigma()).abs() >= super::DEGENERACY_TOL;
    positive_root(|lam| det.reduced(lam), params.omega, expect_root)
}
