use fnls::grid::PeriodicGrid;
use fnls::parallel::Execution;
use fnls::spectrum::{
    bound_state, classify, coercivity_gap, discretized_oracle, oracle_grid, stability_map, unstable_eigenvalue,
    vk_quantity, Classification, LatticeOperator, SecularDeterminant,
};
use fnls::{Error, PhysParams};
use proptest::prelude::*;

fn line(sigma: f64) -> PhysParams {
    PhysParams::new(1, 1.0, 1.0, sigma).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn delta_well_and_lplus_bound_states() {
    let p = line(1.0);
    assert!((bound_state(4.0, &p).unwrap().eigenvalue + 3.0).abs() < 1e-10);
    // ω − μ²/4 for every well deeper than c² = 2
    for mu in [2.5, 3.0, 6.0, 10.0] {
        let e = bound_state(mu, &p).unwrap().eigenvalue;
        assert!((e - (1.0 - mu * mu / 4.0)).abs() < 1e-10, "mu={mu}: {e}");
    }
    let r = classify(&p).unwrap();
    assert!((r.lplus_negative_eig + 8.0).abs() < 1e-10);
}

#[test]
fn lplus_eigenvalue_matches_lattice_oracle() {
    let p = line(1.0);
    let oracle = discretized_oracle(&p, oracle_grid(&p)).unwrap();
    assert!(rel(oracle.lplus[0], -8.0) < 0.01, "{}", oracle.lplus[0]);
    // φ spans the kernel of L−
    assert!(oracle.lminus[0].abs() < 1e-3, "{}", oracle.lminus[0]);
    assert!(oracle.jl_real.is_none());
    // the rest of the spectrum stays above ω
    assert!(oracle.lplus[1] >= 1.0 - 1e-6 && oracle.lminus[1] >= 1.0 - 1e-6, "{:?}", oracle.lplus);
}

#[test]
fn bound_state_trichotomy() {
    let p = PhysParams::new(1, 0.8, 1.5, 1.0).unwrap();
    let c2 = fnls::waves::sobolev_constant(&p);
    let mus: Vec<f64> = (1..=40).map(|i| c2 * (0.5 + 0.025 * i as f64)).collect();
    let eigs: Vec<f64> = mus.iter().map(|&mu| bound_state(mu, &p).unwrap().eigenvalue).collect();
    assert!(eigs.windows(2).all(|w| w[1] < w[0]));
    assert!(eigs.windows(2).all(|w| (w[1] - w[0]).abs() < 0.5));
    for (mu, e) in mus.iter().zip(&eigs) {
        assert_eq!(*e > 0.0, *mu < c2, "mu={mu} e={e}");
        assert!(*e < p.omega);
    }
    assert_eq!(bound_state(c2, &p).unwrap().eigenvalue, 0.0);
    assert!((bound_state(1.0, &line(1.0)).unwrap().eigenvalue - 0.75).abs() < 1e-12);
}

#[test]
fn real_eigenvalue_laplacian_closed_form() {
    for sigma in [1.5, 2.0, 3.0] {
        let lam = unstable_eigenvalue(&line(sigma)).unwrap().unwrap();
        let exact = 2.0 * sigma * (sigma * sigma - 1.0_f64).sqrt();
        assert!(rel(lam, exact) < 1e-9, "sigma={sigma}: {lam} vs {exact}");
    }
}

#[test]
fn real_eigenvalue_matches_lattice_oracle() {
    for sigma in [1.5, 2.0, 3.0] {
        let p = line(sigma);
        let lam = unstable_eigenvalue(&p).unwrap().unwrap();
        let lattice = discretized_oracle(&p, oracle_grid(&p)).unwrap().jl_real.unwrap();
        assert!(rel(lattice, lam) < 1e-4, "sigma={sigma}: {lattice} vs {lam}");
    }
}

#[test]
fn determinant_near_origin() {
    for sigma in [0.5, 1.5, 2.0, 3.0] {
        let p = line(sigma);
        let det = SecularDeterminant::new(&p);
        let (a, _) = det.couplings();
        let limit = -2.0 * sigma * a * vk_quantity(&p);
        assert!(rel(det.small_lambda_limit(), limit) < 1e-12);
        assert!(rel(det.reduced(1e-4).unwrap(), limit) < 1e-3, "sigma={sigma}");
    }
}

#[test]
fn fractional_root_is_a_sign_change() {
    let p = PhysParams::new(1, 0.8, 1.0, 1.2).unwrap();
    let lam = unstable_eigenvalue(&p).unwrap().unwrap();
    let det = SecularDeterminant::new(&p);
    let lo = det.reduced(lam * (1.0 - 1e-6)).unwrap();
    let hi = det.reduced(lam * (1.0 + 1e-6)).unwrap();
    assert!(lo * hi < 0.0, "{lo} {hi}");
    // lattice roots approach it like N^{−(2s−1)}; extrapolate out the leading term
    let root = |modes: usize| {
        let op = LatticeOperator::new(&p, PeriodicGrid::new(40.0, modes).unwrap()).unwrap();
        op.unstable_root().unwrap().unwrap()
    };
    let (l16, l18, l20) = (root(1 << 16), root(1 << 18), root(1 << 20));
    let ratio = (l18 - l16) / (l20 - l18);
    let expect = 4f64.powf(2.0 * p.s - 1.0);
    assert!(rel(ratio, expect) < 0.05, "{ratio} vs {expect}");
    let extrapolated = l20 + (l20 - l18) / (expect - 1.0);
    assert!(rel(extrapolated, lam) < 1e-3, "{extrapolated} vs {lam}");
}

#[test]
fn coercivity_gap_on_the_line() {
    let grid = PeriodicGrid::new(20.0, 1 << 18).unwrap();
    for sigma in [0.25, 0.5, 0.75] {
        let gap = coercivity_gap(&line(sigma), grid).unwrap();
        let exact = (2.0 - 2.0 * sigma) / 3.0;
        assert!((gap - exact).abs() < 1e-3, "sigma={sigma}: {gap} vs {exact}");
    }
    assert!(matches!(coercivity_gap(&line(2.0), grid), Err(Error::NotApplicable(_))));
    let trend: Vec<f64> = [0.5, 0.8, 0.95].iter().map(|&s| coercivity_gap(&line(s), grid).unwrap()).collect();
    assert!(trend.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0), "{trend:?}");
}

#[test]
fn maps_flip_at_the_threshold_in_every_dimension() {
    for n in 1..=3u32 {
        let nf = f64::from(n);
        let s: Vec<f64> = (0..6).map(|i| 0.6 * nf + 0.45 * nf * i as f64).collect();
        let sigma: Vec<f64> = (0..9).map(|i| 0.1 + 0.45 * i as f64).collect();
        let map = stability_map(n, 1.0, &s, &sigma, Execution::default()).unwrap();
        assert_eq!(map.len(), 54);
        for c in &map {
            let crit = 2.0 * c.s / nf - 1.0;
            let want = if c.sigma < crit { Classification::Stable } else { Classification::Unstable };
            assert_eq!(c.classification, want, "n={n} s={} sigma={}", c.s, c.sigma);
            assert_eq!(c.unstable_lambda.is_some(), want == Classification::Unstable);
            if let Some(lam) = c.unstable_lambda {
                assert!(lam > 0.0 && lam.is_finite());
            }
        }
    }
}

#[test]
fn degenerate_exactly_at_threshold() {
    let r = classify(&line(1.0)).unwrap();
    assert_eq!(r.classification, Classification::Degenerate);
    assert_eq!((r.n_l, r.n_d, r.k_r), (1, 0, 0));
    assert!(r.unstable_lambda.is_none());
}

#[test]
fn sequential_and_parallel_maps_agree() {
    let s = [0.7, 1.0, 1.6];
    let sigma = [0.2, 0.9, 1.7, 3.1];
    let a = stability_map(1, 1.5, &s, &sigma, Execution::Sequential).unwrap();
    let b = stability_map(1, 1.5, &s, &sigma, Execution::default()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sign_of_q_follows_threshold(n in 1u32..=3, excess in 0.05f64..2.5, sigma in 0.05f64..5.0, omega in 0.3f64..3.0) {
        let s = f64::from(n) / 2.0 + excess;
        let p = PhysParams::new(n, s, omega, sigma).unwrap();
        let crit = p.critical_sigma();
        prop_assume!((sigma - crit).abs() > 1e-6);
        prop_assert_eq!(vk_quantity(&p) < 0.0, sigma < crit);
    }
}
