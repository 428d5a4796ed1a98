//! Periodic-grid oracle. On `[−L, L)` with `N` points the delta becomes
//! `e_{N/2}/h`, so `L_μ` is the Fourier multiplier `d_k = (π|k|/L)^{2s} + ω`
//! minus a rank-one term and its even-sector eigenvalues solve
//! `1 = (μ/2L) Σ_k 1/(d_k − λ)`.

use serde::{Deserialize, Serialize};

use super::linearized::{positive_root, reduced_from};
use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::numerics::{find_root, Bracket};
use crate::parallel::{sum_n, Execution};
use crate::params::PhysParams;

/// Relative change of the lowest `L_+` eigenvalue under `N → 2N` that is tolerated.
pub const DOUBLING_TOL: f64 = 0.01;

/// Oracle grid `L = 20 ω^{−1/(2s)}`, `N = 2^22`. Lattice sums converge like
/// `1/N`, so the secular roots need far more modes than a dense solve holds.
pub fn oracle_grid(params: &PhysParams) -> PeriodicGrid {
    PeriodicGrid { half_length: 20.0 * params.omega.powf(-0.5 / params.s), modes: 1 << 22 }
}

/// Even-sector data of `(−Δ)^s + ω` on a [`PeriodicGrid`].
#[derive(Debug, Clone)]
pub struct LatticeOperator {
    params: PhysParams,
    grid: PeriodicGrid,
    /// distinct symbol values `d_j`, `j = 0..=N/2`
    poles: Vec<f64>,
    exec: Execution,
}

impl LatticeOperator {
    pub fn new(params: &PhysParams, grid: PeriodicGrid) -> Result<Self> {
        Self::with_execution(params, grid, Execution::default())
    }

    pub fn with_execution(params: &PhysParams, grid: PeriodicGrid, exec: Execution) -> Result<Self> {
        if params.n != 1 {
            return Err(Error::UnsupportedDimension(params.n));
        }
        let grid = PeriodicGrid::new(grid.half_length, grid.modes)?;
        let k0 = std::f64::consts::PI / grid.half_length;
        let two_s = 2.0 * params.s;
        let poles = (0..=grid.modes / 2).map(|j| (k0 * j as f64).powf(two_s) + params.omega).collect();
        Ok(Self { params: *params, grid, poles, exec })
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    fn weight(&self, j: usize) -> f64 {
        if j == 0 || j == self.poles.len() - 1 {
            1.0
        } else {
            2.0
        }
    }

    /// `(1/2L) Σ_k f(d_k)` for up to four functions at once.
    fn sums<const K: usize, F>(&self, f: F) -> [f64; K]
    where
        F: Fn(f64) -> [f64; K] + Sync + Send,
    {
        let scale = 0.5 / self.grid.half_length;
        let mut out = sum_n::<K, _>(self.exec, self.poles.len(), |j| {
            let w = self.weight(j);
            let mut v = f(self.poles[j]);
            for x in v.iter_mut() {
                *x *= w;
            }
            v
        });
        for x in out.iter_mut() {
            *x *= scale;
        }
        out
    }

    /// Lattice moments `S_j = (1/2L) Σ_k d_k^{−j}` for `j = 1, 2, 3`.
    pub fn moments(&self) -> [f64; 3] {
        self.sums(|d| {
            let r = 1.0 / d;
            [r, r * r, r * r * r]
        })
    }

    /// `|φ_h(0)|^{2σ} = 1/S_1`, the coupling of `L_−` for the lattice ground state.
    pub fn wave_coupling(&self) -> f64 {
        1.0 / self.moments()[0]
    }

    fn secular(&self, mu: f64, lam: f64) -> f64 {
        let [s] = self.sums(|d| [1.0 / (d - lam)]);
        mu * s - 1.0
    }

    /// The `count` lowest eigenvalues of `H − μ δ_h`, odd sector included.
    pub fn eigenvalues(&self, mu: f64, count: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(count + 1);
        if count == 0 {
            return Ok(out);
        }
        let d0 = self.poles[0];
        let mut lo = d0 - 1.0;
        while self.secular(mu, lo) > 0.0 {
            lo = d0 - 2.0 * (d0 - lo);
        }
        let hi = d0 - 1e-13 * d0.abs().max(1.0);
        let hi = if self.secular(mu, hi) > 0.0 { hi } else { d0 - 1e-9 * d0 };
        out.push(find_root(|x| self.secular(mu, x), Bracket::new(lo, hi)?, 1e-15 * lo.abs().max(1.0))?);
        let mut j = 0;
        while out.len() < count && j + 1 < self.poles.len() {
            let (a, b) = (self.poles[j], self.poles[j + 1]);
            let gap = b - a;
            let root = find_root(|x| self.secular(mu, x), Bracket::new(a + 1e-12 * gap, b - 1e-12 * gap)?, 1e-15 * b)?;
            out.push(root);
            // the odd mode at d_{j+1} (absent at Nyquist)
            if j + 2 < self.poles.len() {
                out.push(b);
            }
            j += 1;
        }
        out.truncate(count);
        Ok(out)
    }

    /// `(J_h(λ), K_h(λ))`, the lattice counterparts of the determinant integrals.
    pub fn integrals(&self, lam: f64) -> (f64, f64) {
        let l2 = lam * lam;
        let [j, k] = self.sums(|d| {
            let q = 1.0 / (d * d + l2);
            [q / d, q]
        });
        (j, k)
    }

    /// `D_h(λ)/λ²` for the lattice ground state.
    pub fn reduced_determinant(&self, lam: f64) -> f64 {
        let a = self.wave_coupling();
        let b = (2.0 * self.params.sigma + 1.0) * a;
        let (j, k) = self.integrals(lam);
        reduced_from(a, b, self.params.sigma, lam, j, k)
    }

    /// Positive real eigenvalue of the lattice `JL`, if any.
    pub fn unstable_root(&self) -> Result<Option<f64>> {
        let a = self.wave_coupling();
        let b = (2.0 * self.params.sigma + 1.0) * a;
        let sigma = self.params.sigma;
        positive_root(
            |lam| {
                let (j, k) = self.integrals(lam);
                Ok(reduced_from(a, b, sigma, lam, j, k))
            },
            self.params.omega,
            false,
        )
    }

    /// `min ⟨L_+ v, v⟩ / ⟨H v, v⟩` over `v ⊥ φ_h`, which is
    /// `1 − b (S_1 − S_2²/S_3)` for the rank-one `L_+`.
    pub fn coercivity_gap(&self) -> f64 {
        let [s1, s2, s3] = self.moments();
        1.0 - (2.0 * self.params.sigma + 1.0) * (1.0 - s2 * s2 / (s1 * s3))
    }
}

/// Eigenvalue lists of the lattice operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSpectrum {
    pub grid: PeriodicGrid,
    pub wave_coupling: f64,
    pub lminus: Vec<f64>,
    pub lplus: Vec<f64>,
    pub lplus_lowest_doubled: f64,
    pub jl_real: Option<f64>,
}

/// Lowest eigenvalues of the lattice `L_±` and the real eigenvalue of `JL`.
///
/// Raises `GridTooCoarse` when the lowest `L_+` eigenvalue moves by more than
/// 1% between `N` and `2N` modes.
pub fn discretized_oracle(params: &PhysParams, grid: PeriodicGrid) -> Result<OracleSpectrum> {
    const KEEP: usize = 6;
    let op = LatticeOperator::new(params, grid)?;
    let a = op.wave_coupling();
    let b = (2.0 * params.sigma + 1.0) * a;
    let lplus = op.eigenvalues(b, KEEP)?;
    let fine = LatticeOperator::new(params, grid.doubled())?;
    let b_fine = (2.0 * params.sigma + 1.0) * fine.wave_coupling();
    let lplus_lowest_doubled = fine.eigenvalues(b_fine, 1)?[0];
    let moved = (lplus_lowest_doubled - lplus[0]).abs() / lplus[0].abs();
    if moved > DOUBLING_TOL {
        return Err(Error::GridTooCoarse(format!(
            "lowest L+ eigenvalue moved by {:.2}% under mode doubling ({} → {})",
            100.0 * moved,
            lplus[0],
            lplus_lowest_doubled
        )));
    }
    Ok(OracleSpectrum {
        grid: op.grid(),
        wave_coupling: a,
        lminus: op.eigenvalues(a, KEEP)?,
        lplus,
        lplus_lowest_doubled,
        jl_real: op.unstable_root()?,
    })
}

/// Coercivity constant of `L_+` on `{φ_ω}^⊥` in the `ω`-weighted `H^s` norm.
pub fn coercivity_gap(params: &PhysParams, grid: PeriodicGrid) -> Result<f64> {
    if super::vk_quantity(params) >= 0.0 {
        return Err(Error::NotApplicable(format!(
            "coercivity requires Q < 0 (σ = {} ≥ {})",
            params.sigma,
            params.critical_sigma()
        )));
    }
    let gap = LatticeOperator::new(params, grid)?.coercivity_gap();
    Ok(gap)
}
