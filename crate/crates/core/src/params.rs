use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The parameter tuple `(n, s, ω, σ)` shared by every computation.
///
/// Construction enforces the existence conditions for the standing waves:
/// `ω > 0`, `s > n/2`, `σ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub n: u32,
    pub s: f64,
    pub omega: f64,
    pub sigma: f64,
}

impl PhysParams {
    pub fn new(n: u32, s: f64, omega: f64, sigma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("dimension n must be at least 1".into()));
        }
        if !(s.is_finite() && s > f64::from(n) / 2.0) {
            return Err(Error::InvalidParams(format!(
                "requires s > n/2 (n = {n}, s = {s})"
            )));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams(format!("requires omega > 0 (omega = {omega})")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParams(format!("requires sigma > 0 (sigma = {sigma})")));
        }
        Ok(Self { n, s, omega, sigma })
    }

    /// Same parameters at a different frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.n, self.s, omega, self.sigma)
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.n, self.s, self.omega, sigma)
    }

    pub fn dim(&self) -> f64 {
        f64::from(self.n)
    }

    /// `n / (2s)`, which lies in `(0, 1)`.
    pub fn ratio(&self) -> f64 {
        self.dim() / (2.0 * self.s)
    }

    /// The nonlinearity power `2s/n - 1` separating stable from unstable waves.
    pub fn critical_sigma(&self) -> f64 {
        2.0 * self.s / self.dim() - 1.0
    }
}
