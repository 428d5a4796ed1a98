//! The invariant suite: each check recomputes a family of quantities and
//! compares them with exact values or independent oracles at fixed tolerances.

use serde::{Deserialize, Serialize};

use crate::dynamics::{run_experiment, SimConfig, Simulator};
use crate::error::Result;
use crate::moments::{moment_closed, moment_quadrature, moments};
use crate::numerics::QuadratureSpec;
use crate::parallel::Execution;
use crate::params::PhysParams;
use crate::spectrum::{
    bound_state, discretized_oracle, oracle_grid, stability_map, unstable_eigenvalue, vk_quantity, Classification,
    SecularDeterminant, DEGENERACY_TOL,
};
use crate::variational::{convergence_study, loglog_slope, SolveOptions};
use crate::waves::{pohozaev_check, sobolev_constant, sobolev_constant_printed_check};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn from(id: &str, title: &str, outcome: Result<(bool, String)>) -> Self {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        Self { id: id.into(), title: title.into(), passed, detail }
    }

    pub fn line(&self) -> String {
        format!("[{}] {} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.title, self.detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn p1(sigma: f64) -> PhysParams {
    PhysParams::new(1, 1.0, 1.0, sigma).expect("valid fixture")
}

/// Closed-form moments against quadrature on the `(n, s, j, ω)` grid, plus exact values.
pub fn moment_oracle() -> CheckReport {
    CheckReport::from("1", "moment oracle", (|| {
        let spec = QuadratureSpec::default();
        let mut worst: f64 = 0.0;
        for n in 1..=3u32 {
            let nf = n as f64;
            for s in [0.6 * nf, nf, 2.0 * nf] {
                for omega in [0.5, 1.0, 3.0] {
                    let p = PhysParams::new(n, s, omega, 1.0)?;
                    for j in [1.0, 2.0, 3.0] {
                        worst = worst.max(rel(moment_closed(j, &p)?, moment_quadrature(j, &p, &spec)?));
                    }
                }
            }
        }
        let m = moments(&p1(1.0));
        let exact = rel(m.m1, 0.5).max(rel(m.m2, 0.25)).max(rel(m.m3, 3.0 / 16.0));
        Ok((worst < 1e-10 && exact < 1e-12, format!("max rel diff {worst:.2e} over 81 cases; exact-value error {exact:.2e}")))
    })())
}

/// `c²(1) = 2` for the Laplacian line and the corrected printed constant against quadrature.
pub fn sobolev_constant_check() -> CheckReport {
    CheckReport::from("2", "sharp Sobolev constant", (|| {
        let c2 = sobolev_constant(&p1(1.0));
        let spec = QuadratureSpec::default();
        let mut worst: f64 = 0.0;
        for n in 1..=3u32 {
            let nf = n as f64;
            for s in [0.6 * nf + 0.1, nf, 2.0 * nf] {
                let cmp = sobolev_constant_printed_check(n, s)?;
                let m1 = moment_quadrature(1.0, &PhysParams::new(n, s, 1.0, 1.0)?, &spec)?;
                worst = worst.max(rel(cmp.corrected, 1.0 / m1));
            }
        }
        let ok = (c2 - 2.0).abs() < 1e-12 && worst < 1e-10;
        Ok((ok, format!("c2(1;1,1) = {c2:.15}; corrected constant vs 1/M1 max rel diff {worst:.2e}")))
    })())
}

/// Pohozaev residuals over the parameter grid and the exact Laplacian case.
pub fn pohozaev_suite() -> CheckReport {
    CheckReport::from("3", "Pohozaev identities", (|| {
        let mut worst: f64 = 0.0;
        for n in 1..=3u32 {
            let nf = n as f64;
            for s in [0.6 * nf + 0.1, nf, 2.0 * nf] {
                for omega in [0.5, 1.0, 3.0] {
                    for sigma in [0.3, 1.0, 2.5] {
                        let r = pohozaev_check(&PhysParams::new(n, s, omega, sigma)?)?;
                        worst = worst
                            .max(r.residual_mass_identity)
                            .max(r.residual_seminorm_identity)
                            .max(r.residual_energy_identity);
                    }
                }
            }
        }
        let exact = pohozaev_check(&p1(1.0))?;
        let dev = (exact.l2_mass - 2.0).abs().max((exact.homog_seminorm_sq - 2.0).abs());
        Ok((
            worst < 1e-8 && dev < 1e-12,
            format!("max residual {worst:.2e} over 81 cases; exact case mass {:.15}, seminorm {:.15}", exact.l2_mass, exact.homog_seminorm_sq),
        ))
    })())
}

pub fn vk_fractions() -> CheckReport {
    let q1 = vk_quantity(&p1(1.0));
    let q2 = vk_quantity(&p1(2.0));
    let qh = vk_quantity(&p1(0.5));
    let ok = q1.abs() < 1e-12 && (q2 - 1.0 / 32.0).abs() < 1e-12 && (qh + 1.0 / 16.0).abs() < 1e-12;
    CheckReport::from("4", "Vakhitov-Kolokolov fractions", Ok((ok, format!("Q(1) = {q1:.3e}, Q(2) = {q2:.15}, Q(1/2) = {qh:.15}"))))
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

/// 25×40 maps for `n = 1, 2, 3` against the analytic threshold `σ = 2s/n − 1`.
pub fn stability_boundary(exec: Execution) -> CheckReport {
    CheckReport::from("5", "stability boundary", (|| {
        let mut wrong = 0;
        let mut cells = 0;
        let mut degenerate = 0;
        for n in 1..=3u32 {
            let nf = n as f64;
            let map = stability_map(n, 1.0, &linspace(0.6 * nf, 3.0 * nf, 25), &linspace(0.1, 4.0, 40), exec)?;
            for c in &map {
                let crit = 2.0 * c.s / nf - 1.0;
                cells += 1;
                if (c.sigma - crit).abs() < DEGENERACY_TOL {
                    degenerate += 1;
                    continue;
                }
                let want = if c.sigma < crit { Classification::Stable } else { Classification::Unstable };
                let consistent = c.k_r == u32::from(want == Classification::Unstable)
                    && c.unstable_lambda.is_some() == (want == Classification::Unstable);
                if c.classification != want || !consistent {
                    wrong += 1;
                }
            }
        }
        Ok((wrong == 0, format!("{wrong} misclassified of {cells} cells ({degenerate} on the degenerate band)")))
    })())
}

pub fn bound_state_oracle() -> CheckReport {
    CheckReport::from("6", "bound-state oracle", (|| {
        let p = p1(1.0);
        let well = bound_state(4.0, &p)?.eigenvalue;
        let lplus = bound_state(3.0 * sobolev_constant(&p), &p)?.eigenvalue;
        let oracle = discretized_oracle(&p, oracle_grid(&p))?;
        let dev = rel(oracle.lplus[0], lplus);
        let ok = (well + 3.0).abs() < 1e-10 && (lplus + 8.0).abs() < 1e-10 && dev < 0.01;
        Ok((ok, format!("L_4 eigenvalue {well:.12}; L+ lowest {lplus:.10} vs lattice {:.6} (rel {dev:.2e})", oracle.lplus[0])))
    })())
}

pub fn linearized_eigenvalue() -> CheckReport {
    CheckReport::from("7", "linearized eigenvalue", (|| {
        let mut parts = Vec::new();
        let mut ok = true;
        for sigma in [1.5, 2.0, 3.0] {
            let p = p1(sigma);
            let Some(lam) = unstable_eigenvalue(&p)? else {
                return Ok((false, format!("no real eigenvalue found at sigma = {sigma}")));
            };
            let lattice = discretized_oracle(&p, oracle_grid(&p))?.jl_real;
            let det = SecularDeterminant::new(&p);
            let small = rel(det.reduced(1e-4)?, det.small_lambda_limit());
            let dev = lattice.map_or(f64::INFINITY, |l| rel(l, lam));
            ok &= dev < 1e-4 && small < 1e-3;
            parts.push(format!("sigma {sigma}: lambda* {lam:.8} lattice rel {dev:.1e}, D/l^2 rel {small:.1e}"));
        }
        Ok((ok, parts.join("; ")))
    })())
}

pub fn variational_convergence(exec: Execution) -> CheckReport {
    CheckReport::from("8", "variational convergence", (|| {
        let p = p1(1.0);
        let rows = convergence_study(&p, &[4.0, 8.0, 16.0, 32.0], &SolveOptions::default(), exec)?;
        let c2 = sobolev_constant(&p);
        let bounded = rows.iter().all(|r| r.m_n >= c2 - 1e-8);
        let monotone = rows.windows(2).all(|w| w[1].gap < w[0].gap);
        let slope = loglog_slope(&rows).unwrap_or(f64::NAN);
        let gaps: Vec<String> = rows.iter().map(|r| format!("{:.4e}", r.gap)).collect();
        Ok((
            bounded && monotone && (-1.5..=-0.2).contains(&slope),
            format!("gaps [{}] for N = 4, 8, 16, 32; log-log slope {slope:.3}", gaps.join(", ")),
        ))
    })())
}

/// Mass drift over 10⁴ steps and the Strang order of the energy drift.
pub fn conservation() -> CheckReport {
    CheckReport::from("9a", "dynamics conservation", (|| {
        let mut mass_worst: f64 = 0.0;
        for sigma in [0.5, 1.0, 2.0] {
            let mut cfg = SimConfig::new(p1(sigma))?;
            cfg.eps = 1e-2;
            let mut sim = Simulator::new(&cfg)?;
            let m0 = sim.mass();
            sim.advance(10_000)?;
            mass_worst = mass_worst.max(rel(sim.mass(), m0));
        }
        let drift = |dt: f64| -> Result<f64> {
            let mut cfg = SimConfig::new(p1(0.5))?;
            cfg.eps = 1e-2;
            cfg.dt = dt;
            cfg.t_final = 0.2;
            cfg.sample_every = 0.01;
            Ok(run_experiment(&cfg)?.max_energy_drift())
        };
        let ratio = drift(2e-4)? / drift(1e-4)?;
        Ok((
            mass_worst < 1e-10 && (3.0..=5.0).contains(&ratio),
            format!("max mass drift {mass_worst:.2e} over 1e4 steps; energy drift ratio under dt halving {ratio:.3}"),
        ))
    })())
}

/// Orbital stability at `σ = 1/2` and the unstable growth rate at `σ = 2`.
pub fn orbits() -> CheckReport {
    CheckReport::from("9b", "dynamics orbits", (|| {
        let mut stable = SimConfig::new(p1(0.5))?;
        stable.eps = 1e-3;
        stable.t_final = 50.0;
        stable.sample_every = 0.5;
        let ts = run_experiment(&stable)?;
        let growth_ratio = ts.max_mod_distance() / ts.rows[0].mod_distance;

        let p = p1(2.0);
        let lam = unstable_eigenvalue(&p)?.unwrap_or(f64::NAN);
        let mut unstable = SimConfig::new(p)?;
        unstable.half_length = 10.0;
        unstable.modes = 1024;
        unstable.dt = 0.05 / unstable.max_symbol();
        unstable.eps = 1e-4;
        unstable.t_final = 2.5;
        unstable.sample_every = 0.01;
        let rate = run_experiment(&unstable)?.growth_rate.unwrap_or(f64::NAN);
        let dev = rel(rate, lam);
        Ok((
            growth_ratio < 5.0 && dev < 0.15,
            format!("stable max/initial distance {growth_ratio:.3}; growth rate {rate:.4} vs lambda* {lam:.4} (rel {dev:.2e})"),
        ))
    })())
}

/// Checks 1–8 and the conservation half of 9; `full` adds the long orbit runs.
pub fn suite(full: bool, exec: Execution) -> Vec<CheckReport> {
    let mut out = vec![
        moment_oracle(),
        sobolev_constant_check(),
        pohozaev_suite(),
        vk_fractions(),
        stability_boundary(exec),
        bound_state_oracle(),
        linearized_eigenvalue(),
        variational_convergence(exec),
        conservation(),
    ];
    if full {
        out.push(orbits());
    }
    out
}
