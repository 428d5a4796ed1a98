//! Dense matrices of the lattice operators, used to cross-check the secular
//! solvers at small mode counts.

use nalgebra::{DMatrix, DVector};

use crate::grid::PeriodicGrid;
use crate::error::{Error, Result};
use crate::params::PhysParams;

/// Largest mode count accepted for dense assembly.
pub const MAX_DENSE_MODES: usize = 2048;

fn check(params: &PhysParams, grid: &PeriodicGrid) -> Result<()> {
    if params.n != 1 {
        return Err(Error::UnsupportedDimension(params.n));
    }
    PeriodicGrid::new(grid.half_length, grid.modes)?;
    if grid.modes > MAX_DENSE_MODES {
        return Err(Error::InvalidParams(format!("dense assembly limited to {MAX_DENSE_MODES} modes, got {}", grid.modes)));
    }
    Ok(())
}

/// Circulant matrix of the multiplier `g(d_k)`, indexed by grid points.
fn circulant(params: &PhysParams, grid: &PeriodicGrid, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let n = grid.modes;
    let k0 = std::f64::consts::PI / grid.half_length;
    let sym: Vec<f64> = (0..=n / 2).map(|j| g((k0 * j as f64).powf(2.0 * params.s) + params.omega)).collect();
    let col: Vec<f64> = (0..n)
        .map(|m| {
            let mut acc = sym[0] + sym[n / 2] * if m % 2 == 0 { 1.0 } else { -1.0 };
            for (j, v) in sym.iter().enumerate().take(n / 2).skip(1) {
                acc += 2.0 * v * (2.0 * std::f64::consts::PI * (j * m % n) as f64 / n as f64).cos();
            }
            acc / n as f64
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| col[(i + n - j) % n])
}

/// `H − μ δ_h` on the grid, with the delta at the centre point.
pub fn delta_operator(params: &PhysParams, grid: &PeriodicGrid, mu: f64) -> Result<DMatrix<f64>> {
    check(params, grid)?;
    let mut h = circulant(params, grid, |d| d);
    let c = grid.modes / 2;
    h[(c, c)] -= mu / grid.spacing();
    Ok(h)
}

/// Sorted eigenvalues of `H − μ δ_h`.
pub fn delta_operator_eigenvalues(params: &PhysParams, grid: &PeriodicGrid, mu: f64) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = delta_operator(params, grid, mu)?.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Largest real eigenvalue of `JL = [[0, L_−], [−L_+, 0]]` from a dense
/// nonsymmetric eigensolve, given the lattice wave coupling `a_h`.
pub fn jl_real_eigenvalue(params: &PhysParams, grid: &PeriodicGrid, wave_coupling: f64) -> Result<Option<f64>> {
    let lminus = delta_operator(params, grid, wave_coupling)?;
    let lplus = delta_operator(params, grid, (2.0 * params.sigma + 1.0) * wave_coupling)?;
    let n = grid.modes;
    let mut jl = DMatrix::<f64>::zeros(2 * n, 2 * n);
    jl.view_mut((0, n), (n, n)).copy_from(&lminus);
    jl.view_mut((n, 0), (n, n)).copy_from(&(-lplus));
    let best = jl
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.re > 1e-6 && z.im.abs() < 1e-8 * z.re.max(1.0))
        .map(|z| z.re)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    Ok(best)
}

/// `min ⟨L_+ v, v⟩/⟨H v, v⟩` over `v ⊥ φ_h` from a dense projected eigensolve.
pub fn coercivity_gap(params: &PhysParams, grid: &PeriodicGrid, wave_coupling: f64) -> Result<f64> {
    check(params, grid)?;
    let n = grid.modes;
    let c = n / 2;
    let inv_sqrt = circulant(params, grid, |d| d.powf(-0.5));
    let lplus = delta_operator(params, grid, (2.0 * params.sigma + 1.0) * wave_coupling)?;
    let m = &inv_sqrt * lplus * &inv_sqrt;
    // H^{-1/2} φ_h is proportional to H^{-3/2} e_c
    let p: DVector<f64> = circulant(params, grid, |d| d.powf(-1.5)).column(c).into_owned().normalize();
    let proj = DMatrix::<f64>::identity(n, n) - &p * p.transpose();
    let reduced = &proj * m * &proj;
    let eig = reduced.symmetric_eigen();
    let gap = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .filter(|(_, v)| v.dot(&p).abs() < 0.5)
        .map(|(e, _)| *e)
        .fold(f64::INFINITY, f64::min);
    Ok(gap)
}
