//! Adaptive Gauss–Kronrod quadrature on finite intervals and on `[0, ∞)` for
//! integrands with a known algebraic decay rate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights at the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// How the half-line integral is truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// Extend the cutoff geometrically until the tail bound is below tolerance.
    Auto,
    /// Integrate up to a fixed cutoff and account for the rest analytically.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail: TailPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_subdivisions: 20_000,
            tail: TailPolicy::Auto,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_subdivisions >= 1) {
            return Err(Error::InvalidParams(format!(
                "quadrature tolerances must be positive and the subdivision budget at least 1: {self:?}"
            )));
        }
        if let TailPolicy::Fixed(r) = self.tail {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParams(format!("tail cutoff must be positive, got {r}")));
            }
        }
        Ok(())
    }
}

/// Integral value together with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    abs_sum: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    Panel { a, b, value, err, abs_sum }
}

/// Globally adaptive bisection; `budget` is decremented by the number of
/// panels created.
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    budget: &mut usize,
) -> Result<Estimate> {
    let first = kronrod15(f, a, b);
    if !first.value.is_finite() {
        return Err(Error::NonConvergence { subdivisions: 0, err: f64::INFINITY });
    }
    let mut heap = BinaryHeap::new();
    let mut settled = Estimate { value: 0.0, err: 0.0 };
    let mut value = first.value;
    let mut err = first.err;
    let mut abs_total = first.abs_sum;
    heap.push(first);
    let mut used = 0usize;
    loop {
        // splitting cannot push the error below the rounding floor
        if err <= abs_tol.max(rel_tol * value.abs()).max(100.0 * f64::EPSILON * abs_total) {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // interval can no longer be split in floating point
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(worst.b.abs()) {
            settled.value += worst.value;
            settled.err += worst.err;
            continue;
        }
        if *budget < 2 {
            return Err(Error::NonConvergence { subdivisions: used, err });
        }
        *budget -= 2;
        used += 2;
        let left = kronrod15(f, worst.a, mid);
        let right = kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        abs_total += left.abs_sum + right.abs_sum - worst.abs_sum;
        heap.push(left);
        heap.push(right);
    }
    // resum to avoid drift from the running updates
    let (v, e) = heap
        .iter()
        .fold((settled.value, settled.err), |(v, e), p| (v + p.value, e + p.err));
    Ok(Estimate { value: v, err: e })
}

/// `∫_a^b f` by adaptive 15-point Gauss–Kronrod.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    let mut budget = spec.max_subdivisions;
    adaptive(&f, a, b, spec.rel_tol, spec.abs_tol, &mut budget)
}

/// `∫_0^∞ f` for an integrand with `|f(ρ)| ≤ C ρ^{-decay}` at large `ρ`.
///
/// The finite part is integrated over `[0, 1]` and dyadic panels
/// `[2^k, 2^{k+1}]`. Beyond the cutoff `R` the integrand is treated as the
/// power law through `f(R)`: its integral `f(R) R / (decay - 1)` is added to
/// the value and its magnitude to the error estimate. Under `TailPolicy::Auto`
/// the cutoff grows until the integrand decays locally at the declared rate
/// and that bound is below the requested tolerance.
pub fn integrate_halfline<F: Fn(f64) -> f64>(f: F, decay: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(decay > 1.0) {
        return Err(Error::BadDecay(decay));
    }
    spec.validate()?;
    let mut budget = spec.max_subdivisions;
    let mut total = Estimate { value: 0.0, err: 0.0 };
    let tail_at = |r: f64| f(r) * r / (decay - 1.0);
    let add_panel = |a: f64, b: f64, total: &mut Estimate, budget: &mut usize| -> Result<()> {
        let tol_abs = spec.abs_tol.max(spec.rel_tol * total.value.abs()) * 1e-3;
        let p = adaptive(&f, a, b, spec.rel_tol, tol_abs, budget)?;
        total.value += p.value;
        total.err += p.err;
        Ok(())
    };

    match spec.tail {
        TailPolicy::Fixed(cutoff) => {
            let mut lo = 0.0;
            let mut hi = cutoff.min(1.0);
            loop {
                add_panel(lo, hi, &mut total, &mut budget)?;
                if hi >= cutoff {
                    break;
                }
                lo = hi;
                hi = (2.0 * hi).min(cutoff);
            }
            let tail = tail_at(cutoff);
            total.value += tail;
            total.err += tail.abs();
            Ok(total)
        }
        TailPolicy::Auto => {
            const MIN_CUTOFF: f64 = 16.0;
            add_panel(0.0, 1.0, &mut total, &mut budget)?;
            let mut r = 1.0_f64;
            for _ in 0..1000 {
                add_panel(r, 2.0 * r, &mut total, &mut budget)?;
                r *= 2.0;
                if r < MIN_CUTOFF {
                    continue;
                }
                // the power law must already hold locally: f(r/2)/f(r) ≈ 2^decay
                let (f_half, f_r) = (f(0.5 * r), f(r));
                if f_half * f_r > 0.0 && (f_half / f_r).log2() < 0.9 * decay {
                    continue;
                }
                let tail = tail_at(r);
                if !tail.is_finite() {
                    break;
                }
                let target = spec.abs_tol.max(spec.rel_tol * (total.value + tail).abs());
                if tail.abs() <= 0.5 * target {
                    total.value += tail;
                    total.err += tail.abs();
                    return Ok(total);
                }
            }
            Err(Error::NonConvergence { subdivisions: spec.max_subdivisions - budget, err: total.err })
        }
    }
}
