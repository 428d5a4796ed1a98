//! Periodic one-dimensional grids on `[−L, L)` and their Fourier symbols.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysParams;

/// `modes` equispaced points `x_j = −L + j h`, `h = 2L/modes`; the point
/// `j = modes/2` sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    pub half_length: f64,
    pub modes: usize,
}

impl PeriodicGrid {
    pub fn new(half_length: f64, modes: usize) -> Result<Self> {
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::InvalidParams(format!("half_length must be positive, got {half_length}")));
        }
        if modes < 8 || !modes.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("modes must be even and at least 8, got {modes}")));
        }
        Ok(Self { half_length, modes })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.modes as f64
    }

    pub fn center(&self) -> usize {
        self.modes / 2
    }

    pub fn doubled(&self) -> Self {
        Self { modes: 2 * self.modes, ..*self }
    }

    pub fn point(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.modes).map(|j| self.point(j)).collect()
    }

    /// `π|k|/L` for the DFT index `j` (standard FFT ordering).
    pub fn wavenumber(&self, j: usize) -> f64 {
        let k = if j <= self.modes / 2 { j } else { self.modes - j };
        PI * k as f64 / self.half_length
    }

    /// `(π|k|/L)^{2s}` in FFT ordering.
    pub fn kinetic_symbol(&self, s: f64) -> Vec<f64> {
        (0..self.modes).map(|j| self.wavenumber(j).powf(2.0 * s)).collect()
    }

    /// `(π|k|/L)^{2s} + ω` in FFT ordering.
    pub fn symbol(&self, params: &PhysParams) -> Vec<f64> {
        self.kinetic_symbol(params.s).into_iter().map(|m| m + params.omega).collect()
    }
}

/// Forward and inverse transforms of one size. The forward transform is the
/// plain DFT `U_k = Σ_j u_j e^{−2πi jk/N}` taken with the origin at `j = N/2`,
/// so `U_k` carries the sign `(−1)^k` relative to a centred transform.
#[derive(Clone)]
pub struct Transform {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    len: usize,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform").field("len", &self.len).finish()
    }
}

impl Transform {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len), len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/N` factor.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / self.len as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }

    pub fn forward_real(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }
}
