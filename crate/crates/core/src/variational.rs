//! Mollified minimization problem: minimize
//! `⟨((−Δ)^s + ω)u, u⟩ / (∫ N^n V(Nx)|u|^{2σ+2})^{1/(σ+1)}`
//! by Petviashvili iteration on its Euler–Lagrange equation
//! `(−Δ)^s φ + ω φ = m_N N^n V(N x)|φ|^{2σ} φ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{PeriodicGrid, Transform};
use crate::moments::sphere_area;
use crate::numerics::{integrate, QuadratureSpec};
use crate::parallel::{self, Execution};
use crate::params::PhysParams;
use crate::waves::sobolev_constant;

/// Smooth bump `V(x) = Z^{−1} exp(−1/(1−|x|²))` on the unit ball, scaled to `N^n V(N x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub scale: f64,
    pub dim: u32,
    pub normalization: f64,
}

fn bump(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r * r)).exp()
    }
}

impl MollifierSpec {
    pub fn new(scale: f64, dim: u32) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParams(format!("mollifier scale must be positive, got {scale}")));
        }
        if dim == 0 {
            return Err(Error::UnsupportedDimension(dim));
        }
        let spec = QuadratureSpec::default().with_rel_tol(1e-13);
        let n = dim as f64;
        let radial = integrate(|r| r.powf(n - 1.0) * bump(r), 0.0, 1.0, &spec)?.value;
        Ok(Self { scale, dim, normalization: sphere_area(dim) * radial })
    }
}

/// `N^n V(N|x|)` at radius `|x|`.
pub fn mollifier_value(r: f64, spec: &MollifierSpec) -> f64 {
    let n = spec.dim as f64;
    spec.scale.powf(n) * bump(spec.scale * r.abs()) / spec.normalization
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialGuess {
    /// `e^{−x²}`
    Gaussian,
    /// the grid soliton, `φ̂ ∝ 1/((π|k|/L)^{2s} + ω)`
    Soliton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_sweeps: usize,
    pub tol: f64,
    pub stabilizer_tol: f64,
    pub initial: InitialGuess,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { max_sweeps: 10_000, tol: 1e-8, stabilizer_tol: 1e-9, initial: InitialGuess::Gaussian }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalResult {
    pub m_n: f64,
    pub iterations: usize,
    pub residual: f64,
    pub stabilizer: f64,
    /// `N^n ∫ V(N x)|φ_N|^{2σ+2}`, equal to one for the returned profile
    pub constraint: f64,
    /// `m_N^{1/(2σ)} φ_N(0)`, the centre value of the matching solution of
    /// `(−Δ)^s ψ + ω ψ = N^n V(N x)|ψ|^{2σ} ψ`
    pub wave_center: f64,
    pub grid: PeriodicGrid,
    pub profile: Vec<f64>,
}

/// Grid with half-length `40 ω^{−1/(2s)}` and spacing at most `1/(8N)`, rounded up to a power of two.
pub fn variational_grid(params: &PhysParams, scale: f64) -> PeriodicGrid {
    let half_length = 40.0 * params.omega.powf(-0.5 / params.s);
    let modes = ((16.0 * half_length * scale).ceil() as usize).next_power_of_two().max(8);
    PeriodicGrid { half_length, modes }
}

struct Workspace {
    symbol: Vec<f64>,
    weight: Vec<f64>,
    transform: Transform,
    h: f64,
}

impl Workspace {
    /// `(ψ̂, (v|ψ|^{2σ}ψ)^)`, `⟨Hψ, ψ⟩` and `⟨v|ψ|^{2σ}ψ, ψ⟩`.
    fn evaluate(&self, psi: &[f64], sigma: f64) -> (Vec<Complex64>, Vec<Complex64>, f64, f64) {
        let nl: Vec<f64> = psi.iter().zip(&self.weight).map(|(&u, &v)| v * u.abs().powf(2.0 * sigma) * u).collect();
        let quartic = self.h * nl.iter().zip(psi).map(|(a, b)| a * b).sum::<f64>();
        let psi_hat = self.transform.forward_real(psi);
        let nl_hat = self.transform.forward_real(&nl);
        let scale = self.h / psi.len() as f64;
        let quad = scale * psi_hat.iter().zip(&self.symbol).map(|(z, d)| d * z.norm_sqr()).sum::<f64>();
        (psi_hat, nl_hat, quad, quartic)
    }

    /// `‖Hψ − v|ψ|^{2σ}ψ‖_{H^{−s}} / ‖Hψ‖_{H^{−s}}`.
    fn residual(&self, psi_hat: &[Complex64], nl_hat: &[Complex64]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((p, q), &d) in psi_hat.iter().zip(nl_hat).zip(&self.symbol) {
            num += (p * d - q).norm_sqr() / d;
            den += d * p.norm_sqr();
        }
        (num / den).sqrt()
    }
}

/// Solve the Euler–Lagrange equation of the mollified problem (`n = 1`).
pub fn petviashvili_solve(
    params: &PhysParams,
    mollifier: &MollifierSpec,
    grid: PeriodicGrid,
    options: &SolveOptions,
) -> Result<VariationalResult> {
    if params.n != 1 || mollifier.dim != 1 {
        return Err(Error::UnsupportedDimension(params.n.max(mollifier.dim)));
    }
    let grid = PeriodicGrid::new(grid.half_length, grid.modes)?;
    let h = grid.spacing();
    if h > 1.0 / (8.0 * mollifier.scale) {
        return Err(Error::GridTooCoarse(format!(
            "spacing {h} does not resolve a mollifier of scale {} (need h <= {})",
            mollifier.scale,
            1.0 / (8.0 * mollifier.scale)
        )));
    }
    let sigma = params.sigma;
    let gamma = (2.0 * sigma + 1.0) / (2.0 * sigma);
    let points = grid.points();
    let mut weight: Vec<f64> = points.iter().map(|&x| mollifier_value(x, mollifier)).collect();
    // discrete normalization h Σ v = 1
    let mass: f64 = h * weight.iter().sum::<f64>();
    weight.iter_mut().for_each(|v| *v /= mass);
    let ws = Workspace { symbol: grid.symbol(params), weight, transform: Transform::new(grid.modes), h };

    let mut psi: Vec<f64> = match options.initial {
        InitialGuess::Gaussian => points.iter().map(|x| (-x * x).exp()).collect(),
        InitialGuess::Soliton => {
            let mut buf: Vec<Complex64> = (0..grid.modes)
                .map(|k| Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 } / ws.symbol[k], 0.0))
                .collect();
            ws.transform.inverse(&mut buf);
            buf.iter().map(|z| z.re).collect()
        }
    };

    let mut sweeps = 0;
    loop {
        let (psi_hat, nl_hat, quad, quartic) = ws.evaluate(&psi, sigma);
        if !(quartic > 0.0) {
            return Err(Error::NonConvergence { subdivisions: sweeps, err: f64::NAN });
        }
        let stabilizer = quad / quartic;
        let residual = ws.residual(&psi_hat, &nl_hat);
        if residual < options.tol && (stabilizer - 1.0).abs() < options.stabilizer_tol {
            let kappa = quartic.powf(1.0 / (2.0 * sigma + 2.0));
            let profile: Vec<f64> = psi.iter().map(|u| u / kappa).collect();
            let m_n = kappa.powf(2.0 * sigma);
            let constraint = h * profile
                .iter()
                .zip(&ws.weight)
                .map(|(u, v)| v * u.abs().powf(2.0 * sigma + 2.0))
                .sum::<f64>();
            let center = profile[grid.center()];
            return Ok(VariationalResult {
                m_n,
                iterations: sweeps,
                residual,
                stabilizer,
                constraint,
                wave_center: m_n.powf(0.5 / sigma) * center,
                grid,
                profile,
            });
        }
        if sweeps >= options.max_sweeps {
            return Err(Error::IterationLimit { sweeps, residual });
        }
        let factor = stabilizer.powf(gamma);
        let mut next: Vec<Complex64> = nl_hat.iter().zip(&ws.symbol).map(|(z, d)| z * (factor / d)).collect();
        ws.transform.inverse(&mut next);
        psi = next.iter().map(|z| z.re).collect();
        sweeps += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    #[serde(rename = "N")]
    pub scale: f64,
    #[serde(rename = "m_N")]
    pub m_n: f64,
    pub gap: f64,
    pub iterations: usize,
    pub residual: f64,
    pub wave_center: f64,
}

/// `m_N − c²(ω)` over ascending mollifier scales, solved concurrently.
pub fn convergence_study(params: &PhysParams, scales: &[f64], options: &SolveOptions, exec: Execution) -> Result<Vec<StudyRow>> {
    if scales.is_empty() || scales.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("mollifier scales must be non-empty and strictly ascending".into()));
    }
    let c2 = sobolev_constant(params);
    parallel::map(exec, scales, |&scale| {
        let mollifier = MollifierSpec::new(scale, params.n)?;
        let res = petviashvili_solve(params, &mollifier, variational_grid(params, scale), options)?;
        Ok(StudyRow {
            scale,
            m_n: res.m_n,
            gap: res.m_n - c2,
            iterations: res.iterations,
            residual: res.residual,
            wave_center: res.wave_center,
        })
    })
    .into_iter()
    .collect()
}

/// Least-squares slope of `log gap` against `log N`.
pub fn loglog_slope(rows: &[StudyRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.gap > 0.0).map(|r| (r.scale.ln(), r.gap.ln())).collect();
    crate::numerics::linear_fit(&pts).map(|f| f.slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PhysParams {
        PhysParams::new(1, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn mollifier_support_and_normalization() {
        for dim in 1..=3 {
            let m = MollifierSpec::new(4.0, dim).unwrap();
            assert_eq!(mollifier_value(0.25, &m), 0.0);
            assert_eq!(mollifier_value(0.3, &m), 0.0);
            let n = dim as f64;
            let spec = QuadratureSpec::default();
            let total = sphere_area(dim) * integrate(|r| r.powf(n - 1.0) * mollifier_value(r, &m), 0.0, 0.25, &spec).unwrap().value;
            assert!((total - 1.0).abs() < 1e-10, "n={dim}: {total}");
        }
    }

    #[test]
    fn mollifier_shape_ratio() {
        let m = MollifierSpec::new(1.0, 1).unwrap();
        let ratio = mollifier_value(0.0, &m) / mollifier_value(0.5, &m);
        assert!((ratio - (1.0f64 / 3.0).exp()).abs() < 1e-13);
    }

    #[test]
    fn solve_from_gaussian() {
        let m = MollifierSpec::new(8.0, 1).unwrap();
        let res = petviashvili_solve(&p(), &m, variational_grid(&p(), 8.0), &SolveOptions::default()).unwrap();
        assert!(res.residual < 1e-8);
        assert!((res.stabilizer - 1.0).abs() < 1e-9);
        assert!((res.constraint - 1.0).abs() < 1e-8);
        assert!(res.m_n > 2.0 && res.m_n < 2.5, "{}", res.m_n);
        // positive up to transform roundoff in the far tail
        let peak = res.profile[res.grid.center()];
        assert!(res.profile.iter().all(|&u| u > -1e-13 * peak));
    }

    #[test]
    fn warm_start_converges_quickly() {
        let m = MollifierSpec::new(8.0, 1).unwrap();
        let opts = SolveOptions { initial: InitialGuess::Soliton, ..Default::default() };
        let res = petviashvili_solve(&p(), &m, variational_grid(&p(), 8.0), &opts).unwrap();
        assert!(res.iterations <= 50, "{}", res.iterations);
    }

    #[test]
    fn coarse_grid_rejected() {
        let m = MollifierSpec::new(8.0, 1).unwrap();
        let grid = PeriodicGrid::new(40.0, 1024).unwrap();
        let err = petviashvili_solve(&p(), &m, grid, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse(_)));
    }

    #[test]
    fn study_gap_decreases() {
        let rows = convergence_study(&p(), &[4.0, 8.0, 16.0, 32.0], &SolveOptions::default(), Execution::default()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].gap < w[0].gap);
        }
        assert!(rows.iter().all(|r| r.gap > 0.0));
        let slope = loglog_slope(&rows).unwrap();
        assert!((-1.5..=-0.2).contains(&slope), "slope {slope}");
        let phi0 = crate::waves::soliton_center(&p());
        assert!((rows[3].wave_center - phi0).abs() < 0.02 * phi0);
        assert!(convergence_study(&p(), &[8.0, 4.0], &SolveOptions::default(), Execution::Sequential).is_err());
    }
}
