//! Bracketed root finding: Brent's method with a bisection fallback.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParams(format!("bracket requires lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

const MAX_ITER: usize = 500;

fn endpoint_values<F: FnMut(f64) -> f64>(f: &mut F, bracket: Bracket) -> Result<(f64, f64)> {
    let flo = f(bracket.lo);
    let fhi = f(bracket.hi);
    if flo.is_nan() || fhi.is_nan() || flo.signum() * fhi.signum() > 0.0 && flo != 0.0 && fhi != 0.0 {
        return Err(Error::NoSignChange { lo: bracket.lo, hi: bracket.hi });
    }
    Ok((flo, fhi))
}

/// Root of `f` in `bracket` to absolute tolerance `tol`.
///
/// Brent's combination of inverse quadratic interpolation, secant and
/// bisection steps; every iterate stays inside the current bracket so
/// convergence is guaranteed.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    let (mut fa, mut fb) = endpoint_values(&mut f, bracket)?;
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Plain bisection to bracket width `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    let (flo, _) = endpoint_values(&mut f, bracket)?;
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    let lo_sign = flo.signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn fixtures() {
        let tol = 1e-14;
        let r = find_root(|x| x * x - 2.0, Bracket::new(1.0, 2.0).unwrap(), tol).unwrap();
        assert!((r - SQRT_2).abs() < 1e-13);
        let r = find_root(|x| 2.0 * (1.0 + x).sqrt() - 4.0, Bracket::new(0.0, 10.0).unwrap(), tol).unwrap();
        assert!((r - 3.0).abs() < 1e-13);
        let r = find_root(f64::cos, Bracket::new(1.0, 2.0).unwrap(), tol).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), 1e-12).unwrap_err();
        assert_eq!(err, Error::NoSignChange { lo: -1.0, hi: 1.0 });
        assert!(bisect(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), 1e-12).is_err());
        assert!(Bracket::new(1.0, 1.0).is_err());
    }

    #[test]
    fn exact_endpoint_root() {
        let r = find_root(|x| x - 1.0, Bracket::new(1.0, 3.0).unwrap(), 1e-12).unwrap();
        assert_eq!(r, 1.0);
    }

    proptest! {
        #[test]
        fn brent_agrees_with_bisection(root in -5.0f64..5.0, k in 0.1f64..4.0, cubic in 0.0f64..1.0) {
            let f = |x: f64| k * (x - root) + cubic * (x - root).powi(3);
            let br = Bracket::new(-10.0, 10.0).unwrap();
            let tol = 1e-12;
            let a = find_root(f, br, tol).unwrap();
            let b = bisect(f, br, tol).unwrap();
            prop_assert!((a - b).abs() <= 2.0 * tol + 1e-14);
        }
    }
}
