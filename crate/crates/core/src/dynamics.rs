//! Split-step integration of `i u_t = (−Δ)^s u − |u|^{2σ} u δ_0` on a periodic
//! grid, with the delta represented by the node at the origin with weight `1/h`.
//!
//! The delta substep changes a single node, whose effect on every Fourier
//! coefficient is `ΔU_k = Δ (−1)^k`, so a full step costs `O(N)` and no
//! transform is needed inside the time loop.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{PeriodicGrid, Transform};
use crate::numerics::linear_fit;
use crate::params::PhysParams;
use crate::spectrum::vk_quantity;
use crate::waves::soliton_profile;

/// `dt·μ_max` used when no step is given. Strang splitting with a grid delta
/// deforms the standing wave by `O((dt·μ_max)²)`.
pub const AUTO_DT_STIFFNESS: f64 = 0.003;
/// `|u| > BLOW_UP_MODULUS` ends a run.
pub const BLOW_UP_MODULUS: f64 = 1e8;
/// Growth fits use samples with `GROWTH_FLOOR·d(0) < d(t) < GROWTH_CEILING·‖φ‖`.
pub const GROWTH_FLOOR: f64 = 10.0;
pub const GROWTH_CEILING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `G_s^{2ω}` on the grid, centred at the origin
    GreensBump,
    /// seeded white noise smoothed by `((−Δ)^s + 2ω)^{−1}`
    Noise,
}

impl FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greens-bump" => Ok(Shape::GreensBump),
            "noise" => Ok(Shape::Noise),
            other => Err(Error::InvalidParams(format!("unknown perturbation shape '{other}' (expected greens-bump or noise)"))),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::GreensBump => "greens-bump",
            Shape::Noise => "noise",
        })
    }
}

/// Unperturbed initial profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// the standing wave of the grid equation, `φ̂_k ∝ (−1)^k/((π|k|/L)^{2s} + ω)`
    Lattice,
    /// samples of the continuum soliton
    Continuum,
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(Profile::Lattice),
            "continuum" => Ok(Profile::Continuum),
            other => Err(Error::InvalidParams(format!("unknown profile '{other}' (expected lattice or continuum)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: PhysParams,
    pub half_length: f64,
    pub modes: usize,
    pub dt: f64,
    pub t_final: f64,
    pub eps: f64,
    pub shape: Shape,
    pub seed: u64,
    pub sample_every: f64,
    pub profile: Profile,
}

impl SimConfig {
    /// Defaults: `L = 20`, `N = 256`, automatic step, `t_final = 50`, no perturbation.
    pub fn new(params: PhysParams) -> Result<Self> {
        let mut cfg = Self {
            params,
            half_length: 20.0,
            modes: 256,
            dt: f64::NAN,
            t_final: 50.0,
            eps: 0.0,
            shape: Shape::GreensBump,
            seed: 0,
            sample_every: 0.1,
            profile: Profile::Lattice,
        };
        cfg.dt = cfg.auto_dt();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn grid(&self) -> PeriodicGrid {
        PeriodicGrid { half_length: self.half_length, modes: self.modes }
    }

    /// Largest symbol value `(π/h)^{2s}`.
    pub fn max_symbol(&self) -> f64 {
        (std::f64::consts::PI / self.grid().spacing()).powf(2.0 * self.params.s)
    }

    pub fn auto_dt(&self) -> f64 {
        AUTO_DT_STIFFNESS / self.max_symbol()
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.n != 1 {
            return Err(Error::UnsupportedDimension(self.params.n));
        }
        PeriodicGrid::new(self.half_length, self.modes)?;
        if !self.modes.is_power_of_two() {
            return Err(Error::InvalidParams(format!("modes must be a power of two, got {}", self.modes)));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("dt", self.dt)?;
        positive("t_final", self.t_final)?;
        positive("sample_every", self.sample_every)?;
        if !(0.0..=0.5).contains(&self.eps) {
            return Err(Error::InvalidParams(format!("eps must lie in [0, 0.5], got {}", self.eps)));
        }
        if !(self.dt * self.max_symbol()).is_finite() {
            return Err(Error::InvalidParams("phase per step is not finite".into()));
        }
        Ok(())
    }

    /// Parse `key = value` lines; `#` starts a comment. `dt = auto` selects
    /// [`SimConfig::auto_dt`], which is also the default.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("line {}: expected key = value", lineno + 1)))?;
            let key = k.trim().to_string();
            if kv.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::InvalidParams(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        fn num<T: FromStr>(kv: &std::collections::BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
            kv.get(key)
                .map(|v| v.parse::<T>().map_err(|_| Error::InvalidParams(format!("cannot parse {key} = {v}"))))
                .transpose()
        }
        const KEYS: [&str; 13] = [
            "n", "s", "omega", "sigma", "half_length", "modes", "dt", "t_final", "eps", "shape", "seed", "sample_every", "profile",
        ];
        if let Some(bad) = kv.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::InvalidParams(format!("unknown key '{bad}'")));
        }
        let params = PhysParams::new(
            num(&kv, "n")?.unwrap_or(1),
            num(&kv, "s")?.unwrap_or(1.0),
            num(&kv, "omega")?.unwrap_or(1.0),
            num(&kv, "sigma")?.unwrap_or(1.0),
        )?;
        if params.n != 1 {
            return Err(Error::UnsupportedDimension(params.n));
        }
        let mut cfg = Self::new(params)?;
        if let Some(v) = num(&kv, "half_length")? {
            cfg.half_length = v;
        }
        if let Some(v) = num(&kv, "modes")? {
            cfg.modes = v;
        }
        PeriodicGrid::new(cfg.half_length, cfg.modes)?;
        cfg.dt = match kv.get("dt").map(String::as_str) {
            None | Some("auto") => cfg.auto_dt(),
            Some(_) => num(&kv, "dt")?.unwrap(),
        };
        if let Some(v) = num(&kv, "t_final")? {
            cfg.t_final = v;
        }
        if let Some(v) = num(&kv, "eps")? {
            cfg.eps = v;
        }
        if let Some(v) = kv.get("shape") {
            cfg.shape = v.parse()?;
        }
        if let Some(v) = num(&kv, "seed")? {
            cfg.seed = v;
        }
        if let Some(v) = num(&kv, "sample_every")? {
            cfg.sample_every = v;
        }
        if let Some(v) = kv.get("profile") {
            cfg.profile = v.parse()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Snapshot of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub t: f64,
    /// `u_j` at the grid nodes; node `N/2` is the origin
    pub field: Vec<Complex64>,
    pub mass: f64,
    pub energy: f64,
    pub center_modulus: f64,
    pub mod_distance: f64,
}

/// Integrator owning the Fourier coefficients of the field.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    h: f64,
    kinetic: Vec<f64>,
    /// `1 + μ_k`, the `H^s` weights
    hs_weight: Vec<f64>,
    half_phase: Vec<Complex64>,
    full_phase: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    reference: Vec<Complex64>,
    reference_norm_sq: f64,
    transform: Transform,
    t: f64,
    steps: u64,
}

fn alt(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl Simulator {
    /// Build the initial state: profile plus the configured perturbation.
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid();
        let n = grid.modes;
        let h = grid.spacing();
        let params = config.params;
        let kinetic = grid.kinetic_symbol(params.s);
        let transform = Transform::new(n);
        let phase = |tau: f64| -> Vec<Complex64> { kinetic.iter().map(|m| Complex64::from_polar(1.0, -m * tau)).collect() };

        let reference: Vec<Complex64> = match config.profile {
            Profile::Lattice => {
                let symbol: Vec<f64> = kinetic.iter().map(|m| m + params.omega).collect();
                let s1 = symbol.iter().map(|d| 1.0 / d).sum::<f64>() / (2.0 * grid.half_length);
                let amp = s1.powf(-1.0 - 0.5 / params.sigma) / h;
                symbol.iter().enumerate().map(|(k, d)| Complex64::new(amp * alt(k) / d, 0.0)).collect()
            }
            Profile::Continuum => {
                let radii: Vec<f64> = grid.points().iter().map(|x| x.abs()).collect();
                let prof = soliton_profile(&radii, &params)?;
                transform.forward_real(&prof.values)
            }
        };
        let hs_weight: Vec<f64> = kinetic.iter().map(|m| 1.0 + m).collect();
        let norm = |v: &[Complex64]| h / n as f64 * v.iter().zip(&hs_weight).map(|(z, w)| w * z.norm_sqr()).sum::<f64>();
        let reference_norm_sq = norm(&reference);

        let mut coeffs = reference.clone();
        if config.eps > 0.0 {
            let shape: Vec<Complex64> = match config.shape {
                Shape::GreensBump => (0..n).map(|k| Complex64::new(alt(k) / (kinetic[k] + 2.0 * params.omega), 0.0)).collect(),
                Shape::Noise => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    let white: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let mut buf = transform.forward_real(&white);
                    for (z, m) in buf.iter_mut().zip(&kinetic) {
                        *z /= m + 2.0 * params.omega;
                    }
                    buf
                }
            };
            let scale = config.eps * (reference_norm_sq / norm(&shape)).sqrt();
            for (c, p) in coeffs.iter_mut().zip(&shape) {
                *c += p * scale;
            }
        }
        Ok(Self {
            config: *config,
            h,
            half_phase: phase(0.5 * config.dt),
            full_phase: phase(config.dt),
            kinetic,
            hs_weight,
            coeffs,
            reference,
            reference_norm_sq,
            transform,
            t: 0.0,
            steps: 0,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn scale(&self) -> f64 {
        self.h / self.config.modes as f64
    }

    /// `u(0) = (1/N) Σ_k U_k (−1)^k`.
    pub fn center_value(&self) -> Complex64 {
        center_of(&self.coeffs)
    }

    pub fn mass(&self) -> f64 {
        self.scale() * self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `(½⟨(−Δ)^s u, u⟩_h, −|u(0)|^{2σ+2}/(2σ+2))`.
    pub fn energy_parts(&self) -> (f64, f64) {
        let kin = 0.5 * self.scale() * self.coeffs.iter().zip(&self.kinetic).map(|(z, m)| m * z.norm_sqr()).sum::<f64>();
        let p = 2.0 * self.config.params.sigma + 2.0;
        (kin, -self.center_value().norm().powf(p) / p)
    }

    pub fn energy(&self) -> f64 {
        let (k, p) = self.energy_parts();
        k + p
    }

    /// `‖φ‖_{H^s,h}` of the unperturbed profile.
    pub fn reference_norm(&self) -> f64 {
        self.reference_norm_sq.sqrt()
    }

    /// `inf_θ ‖u − e^{iθ} φ‖_{H^s,h} = (‖u‖² + ‖φ‖² − 2|⟨u, φ⟩|)^{1/2}`.
    pub fn modulated_distance(&self) -> f64 {
        modulated_distance(&self.coeffs, &self.reference, &self.hs_weight, self.scale())
    }

    /// Field values at the grid nodes.
    pub fn field(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        self.transform.inverse(&mut buf);
        buf
    }

    pub fn state(&self) -> SimState {
        SimState {
            t: self.t,
            field: self.field(),
            mass: self.mass(),
            energy: self.energy(),
            center_modulus: self.center_value().norm(),
            mod_distance: self.modulated_distance(),
        }
    }

    /// One Strang step: half linear flow, delta rotation, half linear flow.
    pub fn step(&mut self) -> Result<()> {
        self.advance(1)
    }

    /// `count` Strang steps, fusing the adjacent linear half steps.
    pub fn advance(&mut self, count: u64) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let rate = self.config.dt / self.h;
        let sigma = self.config.params.sigma;
        for (c, p) in self.coeffs.iter_mut().zip(&self.half_phase) {
            *c *= p;
        }
        let mut u0 = center_of(&self.coeffs);
        for i in 0..count {
            let modulus = u0.norm();
            if !(modulus <= BLOW_UP_MODULUS) {
                return Err(Error::Overflow { t: self.t + i as f64 * self.config.dt });
            }
            let delta = u0 * (Complex64::from_polar(1.0, modulus.powf(2.0 * sigma) * rate) - 1.0);
            let last = i + 1 == count;
            let phase = if last { &self.half_phase } else { &self.full_phase };
            // U_k ← P_k (U_k + Δ(−1)^k), accumulating Σ (−1)^k U_k for the next step
            let mut even = Complex64::new(0.0, 0.0);
            let mut odd = Complex64::new(0.0, 0.0);
            for (pair, ph) in self.coeffs.chunks_exact_mut(2).zip(phase.chunks_exact(2)) {
                pair[0] = (pair[0] + delta) * ph[0];
                pair[1] = (pair[1] - delta) * ph[1];
                even += pair[0];
                odd += pair[1];
            }
            u0 = (even - odd) / self.config.modes as f64;
        }
        self.steps += count;
        self.t = self.steps as f64 * self.config.dt;
        Ok(())
    }
}

fn center_of(coeffs: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, z) in coeffs.iter().enumerate() {
        acc += z * alt(k);
    }
    acc / coeffs.len() as f64
}

/// Phase-modulated `H^s` distance between two coefficient vectors.
pub fn modulated_distance(u: &[Complex64], phi: &[Complex64], weight: &[f64], scale: f64) -> f64 {
    let mut uu = 0.0;
    let mut pp = 0.0;
    let mut up = Complex64::new(0.0, 0.0);
    for ((a, b), w) in u.iter().zip(phi).zip(weight) {
        uu += w * a.norm_sqr();
        pp += w * b.norm_sqr();
        up += a * b.conj() * w;
    }
    (scale * (uu + pp - 2.0 * up.norm())).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub center_modulus: f64,
    pub mod_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub rows: Vec<SeriesRow>,
    pub dt: f64,
    pub steps: u64,
    pub reference_norm: f64,
    pub growth_rate: Option<f64>,
    pub blow_up_time: Option<f64>,
}

impl TimeSeries {
    pub fn max_mod_distance(&self) -> f64 {
        self.rows.iter().map(|r| r.mod_distance).fold(0.0, f64::max)
    }

    pub fn max_mass_drift(&self) -> f64 {
        self.rows.iter().map(|r| r.mass_drift.abs()).fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.rows.iter().map(|r| r.energy_drift.abs()).fold(0.0, f64::max)
    }
}

/// Least-squares rate of `log d(t)` over samples with `floor < d < ceiling`,
/// cut at the first sample that leaves the window from below.
pub fn fit_growth_rate(rows: &[SeriesRow], floor: f64, ceiling: f64) -> Option<f64> {
    let start = rows.iter().position(|r| r.mod_distance > floor)?;
    let pts: Vec<(f64, f64)> = rows[start..]
        .iter()
        .take_while(|r| r.mod_distance < ceiling)
        .map(|r| (r.t, r.mod_distance.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    linear_fit(&pts).map(|f| f.slope)
}

/// Integrate to `t_final`, sampling every `sample_every`. A run whose centre
/// modulus exceeds the blow-up guard ends with `blow_up_time` set.
///
/// The step is shrunk to `sample_every / ⌈sample_every/dt⌉` so samples land
/// exactly on multiples of `sample_every`.
pub fn run_experiment(config: &SimConfig) -> Result<TimeSeries> {
    config.validate()?;
    let per_sample = (config.sample_every / config.dt * (1.0 - 1e-12)).ceil().max(1.0) as u64;
    let config = &SimConfig { dt: config.sample_every / per_sample as f64, ..*config };
    let samples = (config.t_final / config.sample_every * (1.0 - 1e-12)).ceil() as u64;
    let mut sim = Simulator::new(config)?;
    let m0 = sim.mass();
    let e0 = sim.energy();
    let (k0, p0) = sim.energy_parts();
    let e_scale = k0 + p0.abs();
    let row = |sim: &Simulator| SeriesRow {
        t: sim.time(),
        mass_drift: (sim.mass() - m0) / m0,
        energy_drift: (sim.energy() - e0) / e_scale,
        center_modulus: sim.center_value().norm(),
        mod_distance: sim.modulated_distance(),
    };
    let mut rows = vec![row(&sim)];
    let mut blow_up_time = None;
    for _ in 0..samples {
        match sim.advance(per_sample) {
            Ok(()) => rows.push(row(&sim)),
            Err(Error::Overflow { t }) => {
                blow_up_time = Some(t);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let unstable = vk_quantity(&config.params) > 0.0;
    let growth_rate = if unstable && config.eps > 0.0 {
        fit_growth_rate(&rows, GROWTH_FLOOR * rows[0].mod_distance, GROWTH_CEILING * sim.reference_norm())
    } else {
        None
    };
    Ok(TimeSeries {
        rows,
        dt: config.dt,
        steps: sim.steps(),
        reference_norm: sim.reference_norm(),
        growth_rate,
        blow_up_time,
    })
}
