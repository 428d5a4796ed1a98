use fnls::moments::moment_closed;
use fnls::waves::{
    greens_value, pohozaev_check, radial_mass, sobolev_constant, sobolev_constant_printed_check, soliton_center,
    soliton_profile,
};
use fnls::PhysParams;
use std::f64::consts::{PI, SQRT_2};

#[test]
fn laplacian_line_greens_function() {
    let p = PhysParams::new(1, 1.0, 1.0, 1.0).unwrap();
    for lam in [0.5f64, 1.0, 4.0] {
        for r in [0.0, 0.3, 1.0, 2.5, 6.0] {
            let exact = (-lam.sqrt() * r).exp() / (2.0 * lam.sqrt());
            let g = greens_value(r, lam, &p).unwrap();
            assert!((g - exact).abs() < 1e-9 * exact.max(1e-3), "lam={lam} r={r}: {g} vs {exact}");
        }
    }
}

#[test]
fn biharmonic_space_greens_function() {
    // (Δ² + k⁴)G = δ in R³: G = e^{−kr/√2} sin(kr/√2) / (4π k² r)
    let p = PhysParams::new(3, 2.0, 1.0, 1.0).unwrap();
    let k: f64 = 1.0;
    let g0 = 1.0 / (4.0 * SQRT_2 * PI * k);
    assert!((greens_value(0.0, 1.0, &p).unwrap() - g0).abs() < 1e-12 * g0);
    for r in [0.2, 1.0, 3.0, 4.5, 7.0] {
        let x = k * r / SQRT_2;
        let exact = (-x).exp() * x.sin() / (4.0 * PI * k * k * r);
        let g = greens_value(r, 1.0, &p).unwrap();
        assert!((g - exact).abs() < 1e-8 * g0, "r={r}: {g} vs {exact}");
    }
}

#[test]
fn biharmonic_plane_center_value() {
    let p = PhysParams::new(2, 2.0, 1.0, 1.0).unwrap();
    assert!((greens_value(0.0, 1.0, &p).unwrap() - 0.125).abs() < 1e-12);
}

#[test]
fn soliton_is_the_classical_exponential() {
    for sigma in [0.5, 1.0, 2.0] {
        let p = PhysParams::new(1, 1.0, 1.0, sigma).unwrap();
        let radii: Vec<f64> = (0..50).map(|i| 0.2 * i as f64).collect();
        let prof = soliton_profile(&radii, &p).unwrap();
        let amp = 2f64.powf(1.0 / (2.0 * sigma));
        for (r, v) in radii.iter().zip(&prof.values) {
            assert!((v - amp * (-r).exp()).abs() < 1e-9 * amp, "sigma={sigma} r={r}");
        }
        assert!((prof.center_value - amp).abs() < 1e-14);
    }
}

#[test]
fn center_value_scales_with_sobolev_constant() {
    for (n, s) in [(1, 0.8), (2, 1.7), (3, 4.0)] {
        for omega in [0.5, 2.0] {
            let p = PhysParams::new(n, s, omega, 0.7).unwrap();
            let expect = sobolev_constant(&p).powf(1.0 / (2.0 * p.sigma));
            assert!((soliton_center(&p) - expect).abs() < 1e-13 * expect);
        }
    }
}

#[test]
fn printed_constant_is_smaller_by_two_s() {
    for n in 1..=3u32 {
        let nf = f64::from(n);
        for s in [0.6 * nf + 0.1, nf, 2.0 * nf] {
            let cmp = sobolev_constant_printed_check(n, s).unwrap();
            assert!((cmp.corrected / cmp.printed - 2.0 * s).abs() < 1e-12 * s);
            let m1 = moment_closed(1.0, &PhysParams::new(n, s, 1.0, 1.0).unwrap()).unwrap();
            assert!((cmp.corrected * m1 - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn pohozaev_over_parameter_grid() {
    for n in 1..=3u32 {
        let nf = f64::from(n);
        for s in [0.6 * nf + 0.1, nf, 2.0 * nf] {
            for omega in [0.5, 1.0, 3.0] {
                for sigma in [0.3, 1.0, 2.5] {
                    let r = pohozaev_check(&PhysParams::new(n, s, omega, sigma).unwrap()).unwrap();
                    let worst = r.residual_mass_identity.max(r.residual_seminorm_identity).max(r.residual_energy_identity);
                    assert!(worst < 1e-8, "n={n} s={s} omega={omega} sigma={sigma}: {r:?}");
                }
            }
        }
    }
    let exact = pohozaev_check(&PhysParams::new(1, 1.0, 1.0, 1.0).unwrap()).unwrap();
    assert!((exact.l2_mass - 2.0).abs() < 1e-12);
    assert!((exact.homog_seminorm_sq - 2.0).abs() < 1e-12);
    assert!((exact.center_pow - 4.0).abs() < 1e-12);
}

#[test]
fn sampled_mass_matches_plancherel_for_fractional_order() {
    let p = PhysParams::new(1, 0.8, 1.0, 1.0).unwrap();
    // the tail decays like r^{−1−2s}, so go far out on a graded mesh
    let mut radii = vec![0.0];
    let mut r: f64 = 0.0;
    while r < 400.0 {
        r += 2e-3 * (1.0 + r);
        radii.push(r);
    }
    let prof = soliton_profile(&radii, &p).unwrap();
    let sampled = radial_mass(&prof);
    let plancherel = pohozaev_check(&p).unwrap().l2_mass;
    assert!(((sampled - plancherel) / plancherel).abs() < 1e-4, "{sampled} vs {plancherel}");
    assert!(prof.values.windows(2).all(|w| w[1] < w[0]));
}
