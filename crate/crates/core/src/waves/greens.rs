//! Pointwise values of the Green's function `G_s^λ`, the kernel of
//! `(−Δ)^s + λ`, by radial inverse Fourier transform in dimensions 1–3.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moments::moment_closed;
use crate::numerics::{integrate, QuadratureSpec};
use crate::params::PhysParams;

/// `J_0(x)`: power series below 12, Hankel asymptotic expansion above.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 12.0 {
        let q = -0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= q / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    } else {
        // t_k = Π_{i≤k} (2i−1)^2 / (k! (8x)^k)
        let mut p = 1.0;
        let mut q = 0.0;
        let mut t = 1.0_f64;
        let mut prev = f64::INFINITY;
        for k in 1..60 {
            let odd = (2 * k - 1) as f64;
            t *= odd * odd / (k as f64 * 8.0 * x);
            if t > prev {
                break;
            }
            prev = t;
            let sign = if (k + 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                p += sign * t;
            } else {
                q += sign * t;
            }
            if t < 1e-17 {
                break;
            }
        }
        let chi = x - 0.25 * PI;
        (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

/// Wynn's ε-algorithm applied to a sequence of partial sums; returns the
/// last even-column entry of the table.
fn wynn_epsilon(partials: &[f64]) -> f64 {
    let m = partials.len();
    if m < 3 {
        return *partials.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; m + 1];
    let mut cur: Vec<f64> = partials.to_vec();
    let mut best = *partials.last().unwrap();
    for col in 1..m {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                // converged exactly
                return if (col - 1) % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
        if cur.len() < 2 {
            break;
        }
    }
    best
}

enum Kernel {
    Cosine,
    Bessel,
    Sine,
}

impl Kernel {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Kernel::Cosine => x.cos(),
            Kernel::Bessel => bessel_j0(x),
            Kernel::Sine => x.sin(),
        }
    }

    /// Approximate k-th positive zero of the kernel (k ≥ 1).
    fn zero(&self, k: usize) -> f64 {
        let k = k as f64;
        match self {
            Kernel::Cosine => (k - 0.5) * PI,
            Kernel::Bessel => (k - 0.25) * PI,
            Kernel::Sine => k * PI,
        }
    }
}

/// `∫_0^∞ K(qρ) g(ρ) dρ` for a non-oscillatory, algebraically decaying
/// amplitude `g`: adaptive quadrature up to a kernel zero beyond `r0`, then
/// half-period panels whose partial sums are extrapolated with Wynn's ε.
fn oscillatory_halfline<G: Fn(f64) -> f64>(kernel: Kernel, q: f64, g: G, r0: f64, tol: f64) -> Result<f64> {
    let head_spec = QuadratureSpec { rel_tol: tol * 0.1, abs_tol: 1e-300, max_subdivisions: 20_000, ..Default::default() };
    let f = |rho: f64| kernel.eval(q * rho) * g(rho);
    let mut k = 1;
    while kernel.zero(k) / q < r0 {
        k += 1;
    }
    let mut z = kernel.zero(k) / q;
    let head_est = integrate(f, 0.0, z, &QuadratureSpec { abs_tol: tol * 1e-3 * g(0.0).abs().max(1e-300), ..head_spec })?;
    let head = head_est.value;
    // panels are small; measure their accuracy against the head
    let spec = QuadratureSpec { abs_tol: tol * 1e-3 * head.abs().max(head_est.err).max(1e-300), ..head_spec };
    let mut partials = vec![head];
    let mut last = f64::NAN;
    let mut stable = 0;
    const MAX_PANELS: usize = 4000;
    const WINDOW: usize = 40;
    for _ in 0..MAX_PANELS {
        k += 1;
        let z_next = kernel.zero(k) / q;
        let panel = integrate(f, z, z_next, &spec)?.value;
        z = z_next;
        let s = partials.last().unwrap() + panel;
        partials.push(s);
        if partials.len() < 8 {
            continue;
        }
        let start = partials.len().saturating_sub(WINDOW);
        let est = wynn_epsilon(&partials[start..]);
        let scale = est.abs().max(head.abs()).max(1e-300);
        if (est - last).abs() <= tol * scale {
            stable += 1;
            if stable >= 3 {
                return Ok(est);
            }
        } else {
            stable = 0;
        }
        last = est;
    }
    Err(Error::NonConvergence { subdivisions: MAX_PANELS, err: f64::NAN })
}

/// `G_s^λ(r)` for `n ∈ {1, 2, 3}`, the radial inverse Fourier transform of
/// `1/((2π|ξ|)^{2s} + λ)`. At `r = 0` this is `M_1(λ)`.
pub fn greens_value(r: f64, lam: f64, params: &PhysParams) -> Result<f64> {
    if !(lam > 0.0) {
        return Err(Error::Domain { function: "greens_value (lambda)", value: lam });
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain { function: "greens_value (radius)", value: r });
    }
    if !(1..=3).contains(&params.n) {
        return Err(Error::UnsupportedDimension(params.n));
    }
    let at_lam = params.with_omega(lam)?;
    if r == 0.0 {
        return moment_closed(1.0, &at_lam);
    }
    let two_s = 2.0 * params.s;
    let symbol = move |rho: f64| 1.0 / ((2.0 * PI * rho).powf(two_s) + lam);
    let q = 2.0 * PI * r;
    // beyond this radius the symbol is in its power-law regime
    let r0 = 4.0 * lam.powf(1.0 / two_s) / (2.0 * PI);
    const TOL: f64 = 1e-11;
    match params.n {
        1 => Ok(2.0 * oscillatory_halfline(Kernel::Cosine, q, symbol, r0, TOL)?),
        2 => Ok(2.0 * PI * oscillatory_halfline(Kernel::Bessel, q, |rho| rho * symbol(rho), r0, TOL)?),
        3 => Ok(2.0 / r * oscillatory_halfline(Kernel::Sine, q, |rho| rho * symbol(rho), r0, TOL)?),
        _ => unreachable!(),
    }
}
