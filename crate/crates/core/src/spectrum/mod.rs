//! Spectra of the delta-perturbed operators `L_μ = (−Δ)^s + ω − μ δ_0`, the
//! Vakhitov–Kolokolov quantity and the stability classification of `φ_ω`.

mod lattice;
mod linearized;

pub mod dense;

use serde::{Deserialize, Serialize};

pub use lattice::{coercivity_gap, discretized_oracle, oracle_grid, LatticeOperator, OracleSpectrum};
pub use linearized::{unstable_eigenvalue, SecularDeterminant};

use crate::error::Result;
use crate::moments::{moment_closed, moments};
use crate::numerics::{find_root, Bracket};
use crate::parallel::Execution;
use crate::params::PhysParams;
use crate::waves::sobolev_constant;

/// `|σ − σ*|` below which the wave is reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BelowC2,
    AtC2,
    AboveC2,
}

/// Lowest eigenvalue of `L_μ` with eigenfunction `Ψ̂_0 = 1/((2π|ξ|)^{2s} + ω + eigfn_shift)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub eigenvalue: f64,
    pub mu: f64,
    pub regime: Regime,
    pub eigfn_shift: f64,
}

/// Bound state of `L_μ`: a negative eigenvalue `−λ` with `μ M_1(ω+λ) = 1`
/// when `μ > c²(ω)`, zero at `μ = c²(ω)`, and `λ ∈ (0, ω)` with
/// `μ M_1(ω−λ) = 1` when `μ < c²(ω)`.
pub fn bound_state(mu: f64, params: &PhysParams) -> Result<BoundState> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(crate::Error::Domain { function: "bound_state (mu)", value: mu });
    }
    let c2 = sobolev_constant(params);
    let omega = params.omega;
    let m1_at = |w: f64| moment_closed(1.0, &params.with_omega(w).expect("positive frequency")).expect("j = 1 admissible");
    let tol = 1e-14 * omega.max(1.0);
    let rel = (mu - c2) / c2;
    if rel.abs() < 1e-15 {
        return Ok(BoundState { eigenvalue: 0.0, mu, regime: Regime::AtC2, eigfn_shift: 0.0 });
    }
    if mu > c2 {
        // h(λ) = μ M_1(ω+λ) − 1 decreases from μ/c² − 1 > 0 to −1
        let h = |lam: f64| mu * m1_at(omega + lam) - 1.0;
        let mut hi = omega;
        while h(hi) > 0.0 {
            hi *= 2.0;
        }
        let lam = find_root(h, Bracket::new(0.0, hi)?, tol)?;
        Ok(BoundState { eigenvalue: -lam, mu, regime: Regime::AboveC2, eigfn_shift: lam })
    } else {
        // solve in the shifted frequency w = ω − λ ∈ (0, ω); μ M_1(w) − 1 blows up as w → 0
        let h = |w: f64| mu * m1_at(w) - 1.0;
        let mut lo = 0.5 * omega;
        while h(lo) < 0.0 {
            lo *= 0.5;
        }
        let w = find_root(h, Bracket::new(lo, omega)?, tol)?;
        let lam = omega - w;
        Ok(BoundState { eigenvalue: lam, mu, regime: Regime::BelowC2, eigfn_shift: -lam })
    }
}

/// `Q = M_3 − ((2σ+1)/(2σ)) M_2²/M_1`, which equals `⟨L_+^{-1} G_s^ω, G_s^ω⟩`.
pub fn vk_quantity(params: &PhysParams) -> f64 {
    let t = moments(params);
    let sigma = params.sigma;
    t.m3 - (2.0 * sigma + 1.0) / (2.0 * sigma) * t.m2 * t.m2 / t.m1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Stable,
    Unstable,
    Degenerate,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Stable => "stable",
            Classification::Unstable => "unstable",
            Classification::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub params: PhysParams,
    pub c2: f64,
    pub mu_minus: f64,
    pub mu_plus: f64,
    pub lplus_negative_eig: f64,
    pub vk_quantity: f64,
    #[serde(rename = "n_L")]
    pub n_l: u32,
    #[serde(rename = "n_D")]
    pub n_d: u32,
    pub k_r: u32,
    pub classification: Classification,
    pub unstable_lambda: Option<f64>,
}

/// Stability of `e^{iωt}φ_ω` from the sign of `Q`.
///
/// `n(L) = n(L_+) + n(L_−) = 1`; `n(D) = 1` when `Q < 0`, so the number of
/// real unstable modes is `k_r = 1 − n(D)`. At the critical power the
/// quantity vanishes and the wave is reported as degenerate with `k_r = 0`.
pub fn classify(params: &PhysParams) -> Result<SpectralReport> {
    let c2 = sobolev_constant(params);
    let mu_plus = (2.0 * params.sigma + 1.0) * c2;
    let lplus = bound_state(mu_plus, params)?;
    let q = vk_quantity(params);
    let classification = if (params.sigma - params.critical_sigma()).abs() < DEGENERACY_TOL {
        Classification::Degenerate
    } else if q < 0.0 {
        Classification::Stable
    } else {
        Classification::Unstable
    };
    let (n_d, k_r) = match classification {
        Classification::Stable => (1, 0),
        Classification::Unstable => (0, 1),
        Classification::Degenerate => (0, 0),
    };
    let unstable_lambda = if classification == Classification::Unstable { unstable_eigenvalue(params)? } else { None };
    Ok(SpectralReport {
        params: *params,
        c2,
        mu_minus: c2,
        mu_plus,
        lplus_negative_eig: lplus.eigenvalue,
        vk_quantity: q,
        n_l: 1,
        n_d,
        k_r,
        classification,
        unstable_lambda,
    })
}

/// One cell of a stability map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapCell {
    pub s: f64,
    pub sigma: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub classification: Classification,
    pub k_r: u32,
    pub unstable_lambda: Option<f64>,
}

/// Classify every `(s, σ)` pair, `s` outermost. Cells are computed
/// independently and returned in parameter order.
pub fn stability_map(n: u32, omega: f64, s_values: &[f64], sigma_values: &[f64], exec: Execution) -> Result<Vec<MapCell>> {
    let mut pairs = Vec::with_capacity(s_values.len() * sigma_values.len());
    for &s in s_values {
        for &sigma in sigma_values {
            pairs.push(PhysParams::new(n, s, omega, sigma)?);
        }
    }
    crate::parallel::map(exec, &pairs, |p| {
        let r = classify(p)?;
        Ok(MapCell {
            s: p.s,
            sigma: p.sigma,
            q: r.vk_quantity,
            classification: r.classification,
            k_r: r.k_r,
            unstable_lambda: r.unstable_lambda,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(sigma: f64) -> PhysParams {
        PhysParams::new(1, 1.0, 1.0, sigma).unwrap()
    }

    #[test]
    fn delta_well_bound_states() {
        // continuum delta well: 2√(ω+λ) = μ
        let b = bound_state(4.0, &p(1.0)).unwrap();
        assert!((b.eigenvalue + 3.0).abs() < 1e-10);
        assert_eq!(b.regime, Regime::AboveC2);
        assert!((b.eigfn_shift - 3.0).abs() < 1e-10);
        let b = bound_state(2.0, &p(1.0)).unwrap();
        assert_eq!(b.regime, Regime::AtC2);
        assert_eq!(b.eigenvalue, 0.0);
        assert_eq!(b.eigfn_shift, 0.0);
        let b = bound_state(1.0, &p(1.0)).unwrap();
        assert!((b.eigenvalue - 0.75).abs() < 1e-12);
        assert_eq!(b.regime, Regime::BelowC2);
        assert!((b.eigfn_shift + 0.75).abs() < 1e-12);
    }

    #[test]
    fn lplus_eigenvalue_laplacian() {
        let b = bound_state(6.0, &p(1.0)).unwrap();
        assert!((b.eigenvalue + 8.0).abs() < 1e-10);
    }

    #[test]
    fn vk_exact_fractions() {
        assert!(vk_quantity(&p(1.0)).abs() < 1e-12);
        assert!((vk_quantity(&p(2.0)) - 1.0 / 32.0).abs() < 1e-12);
        assert!((vk_quantity(&p(0.5)) + 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn classification_fixtures() {
        let r = classify(&p(0.5)).unwrap();
        assert_eq!(r.classification, Classification::Stable);
        assert_eq!((r.n_l, r.n_d, r.k_r), (1, 1, 0));
        assert!(r.unstable_lambda.is_none());
        assert!((r.lplus_negative_eig + 3.0).abs() < 1e-10);

        let r = classify(&p(2.0)).unwrap();
        assert_eq!(r.classification, Classification::Unstable);
        assert_eq!(r.k_r, 1);
        let lam = r.unstable_lambda.unwrap();
        assert!((lam - 4.0 * 3f64.sqrt()).abs() < 1e-6 * lam);

        let r = classify(&PhysParams::new(3, 2.0, 1.0, 0.3).unwrap()).unwrap();
        assert_eq!(r.classification, Classification::Stable);

        let r = classify(&p(1.0)).unwrap();
        assert_eq!(r.classification, Classification::Degenerate);
        assert_eq!(r.k_r, 0);
    }

    #[test]
    fn report_serializes_with_index_names() {
        let json = serde_json::to_string(&classify(&p(0.5)).unwrap()).unwrap();
        assert!(json.contains("\"n_L\":1") && json.contains("\"n_D\":1"));
        assert!(json.contains("\"classification\":\"stable\""));
    }

    #[test]
    fn small_map_matches_threshold() {
        let s_values = [0.6, 1.0, 1.5];
        let sigma_values = [0.1, 0.5, 1.0, 2.5];
        let a = stability_map(1, 1.0, &s_values, &sigma_values, Execution::Sequential).unwrap();
        let b = stability_map(1, 1.0, &s_values, &sigma_values, Execution::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        for c in &a {
            let crit = 2.0 * c.s - 1.0;
            let want = if (c.sigma - crit).abs() < DEGENERACY_TOL {
                Classification::Degenerate
            } else if c.sigma < crit {
                Classification::Stable
            } else {
                Classification::Unstable
            };
            assert_eq!(c.classification, want, "{c:?}");
            assert_eq!(c.unstable_lambda.is_some(), want == Classification::Unstable);
        }
    }

    proptest! {
        #[test]
        fn bound_state_monotone_through_c2(mu_rel in 0.05f64..4.0, s_over in 0.1f64..2.0) {
            let q = PhysParams::new(1, 0.5 + s_over, 1.3, 1.0).unwrap();
            let c2 = sobolev_constant(&q);
            let e1 = bound_state(mu_rel * c2, &q).unwrap().eigenvalue;
            let e2 = bound_state(mu_rel * 1.01 * c2, &q).unwrap().eigenvalue;
            prop_assert!(e2 < e1);
            prop_assert!(e1 < q.omega);
            prop_assert_eq!(e1 < 0.0, mu_rel > 1.0);
        }
    }
}
