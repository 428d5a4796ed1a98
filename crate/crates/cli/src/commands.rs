use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

use fnls::dynamics::{run_experiment, SimConfig};
use fnls::moments::{moments, moments_quadrature};
use fnls::numerics::QuadratureSpec;
use fnls::parallel::Execution;
use fnls::spectrum::{classify, stability_map, unstable_eigenvalue, Classification};
use fnls::variational::{convergence_study, loglog_slope, SolveOptions};
use fnls::verify::suite;
use fnls::waves::{pohozaev_check, sobolev_constant, sobolev_constant_printed_check, soliton_profile_with};
use fnls::PhysParams;

use crate::args::{Format, Physical, Range};
use crate::output::{csv, json, num, opt, report_csv, Artifact};

/// Bad flags or inputs; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub parameters: BTreeMap<String, Value>,
    pub summary: BTreeMap<String, Value>,
    /// Names of invariants that did not hold.
    pub failed: Vec<String>,
}

impl Outcome {
    fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.into(), json!(value));
        self
    }

    fn note(mut self, key: &str, value: impl Serialize) -> Self {
        self.summary.insert(key.into(), json!(value));
        self
    }
}

fn physical(p: &Physical) -> Result<PhysParams> {
    Ok(PhysParams::new(p.n, p.s, p.omega, p.sigma)?)
}

fn with_params(outcome: Outcome, p: &PhysParams) -> Outcome {
    outcome.param("n", p.n).param("s", p.s).param("omega", p.omega).param("sigma", p.sigma)
}

/// A report rendered as JSON (default) or as `key,value` CSV.
fn report<T: Serialize>(stem: &str, value: &T, format: Option<Format>) -> Result<Artifact> {
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => Artifact { file_name: format!("{stem}.json"), body: json(value)? },
        Format::Csv => Artifact { file_name: format!("{stem}.csv"), body: report_csv(&serde_json::to_value(value)?) },
    })
}

/// A table rendered as CSV (default) or as a JSON array of records.
fn table<T: Serialize>(stem: &str, records: &[T], csv_body: impl FnOnce() -> String, format: Option<Format>) -> Result<Artifact> {
    Ok(match format.unwrap_or(Format::Csv) {
        Format::Csv => Artifact { file_name: format!("{stem}.csv"), body: csv_body() },
        Format::Json => Artifact { file_name: format!("{stem}.json"), body: json(&records)? },
    })
}

#[derive(Serialize)]
struct Constants {
    n: u32,
    s: f64,
    omega: f64,
    m1: f64,
    m2: f64,
    m3: f64,
    m1_quadrature: f64,
    m2_quadrature: f64,
    m3_quadrature: f64,
    max_rel_diff: f64,
    c2: f64,
    /// `1/M_1(1)`
    c2_unit: f64,
    /// the unit-frequency constant without the `2s` Jacobian factor
    c2_unit_printed: f64,
    printed_factor: f64,
}

pub fn constants(n: u32, s: f64, omega: f64, tol: Option<f64>, format: Option<Format>) -> Result<Outcome> {
    let p = PhysParams::new(n, s, omega, 1.0)?;
    let spec = QuadratureSpec::default().with_rel_tol(tol.unwrap_or(1e-12));
    let closed = moments(&p);
    let quad = moments_quadrature(&p, &spec)?;
    let cmp = sobolev_constant_printed_check(n, s)?;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let c = Constants {
        n,
        s,
        omega,
        m1: closed.m1,
        m2: closed.m2,
        m3: closed.m3,
        m1_quadrature: quad.m1,
        m2_quadrature: quad.m2,
        m3_quadrature: quad.m3,
        max_rel_diff: rel(closed.m1, quad.m1).max(rel(closed.m2, quad.m2)).max(rel(closed.m3, quad.m3)),
        c2: sobolev_constant(&p),
        c2_unit: cmp.corrected,
        c2_unit_printed: cmp.printed,
        printed_factor: cmp.corrected / cmp.printed,
    };
    let out = Outcome { artifacts: vec![report("constants", &c, format)?], ..Default::default() };
    Ok(out.param("n", n).param("s", s).param("omega", omega).param("tol", spec.rel_tol).note("c2", c.c2).note("max_rel_diff", c.max_rel_diff))
}

pub fn profile(params: &Physical, r_range: &Range, exec: Execution, format: Option<Format>) -> Result<Outcome> {
    let p = physical(params)?;
    let radii = r_range.values();
    if radii[0] < 0.0 {
        return Err(UsageError(format!("radii must be non-negative, got {}", radii[0])).into());
    }
    let prof = soliton_profile_with(&radii, &p, exec)?;
    let body = || csv(&["r", "phi"], prof.radii.iter().zip(&prof.values).map(|(r, v)| vec![num(*r), num(*v)]));
    let artifact = match format.unwrap_or(Format::Csv) {
        Format::Csv => Artifact { file_name: "profile.csv".into(), body: body() },
        Format::Json => Artifact { file_name: "profile.json".into(), body: json(&prof)? },
    };
    let out = Outcome { artifacts: vec![artifact], ..Default::default() };
    Ok(with_params(out, &p).param("r_range", format!("{}:{}:{}", r_range.lo, r_range.hi, r_range.count)).note("center_value", prof.center_value))
}

pub fn pohozaev(params: &Physical, format: Option<Format>) -> Result<Outcome> {
    const TOL: f64 = 1e-8;
    let p = physical(params)?;
    let r = pohozaev_check(&p)?;
    let worst = r.residual_mass_identity.max(r.residual_seminorm_identity).max(r.residual_energy_identity);
    let mut out = Outcome { artifacts: vec![report("pohozaev", &r, format)?], ..Default::default() };
    if worst.is_nan() || worst >= TOL {
        out.failed.push(format!("Pohozaev residual {worst:.3e} exceeds {TOL:e}"));
    }
    Ok(with_params(out, &p).note("max_residual", worst))
}

pub fn spectrum(params: &Physical, format: Option<Format>) -> Result<Outcome> {
    let p = physical(params)?;
    let r = classify(&p)?;
    let out = Outcome { artifacts: vec![report("spectrum", &r, format)?], ..Default::default() };
    Ok(with_params(out, &p)
        .note("classification", r.classification.as_str())
        .note("unstable_lambda", r.unstable_lambda))
}

pub fn stability(n: u32, omega: f64, s_range: &Range, sigma_range: &Range, exec: Execution, format: Option<Format>) -> Result<Outcome> {
    let cells = stability_map(n, omega, &s_range.values(), &sigma_range.values(), exec)?;
    let body = || {
        csv(
            &["s", "sigma", "Q", "classification", "k_r", "unstable_lambda"],
            cells.iter().map(|c| {
                vec![num(c.s), num(c.sigma), num(c.q), c.classification.as_str().into(), c.k_r.to_string(), opt(c.unstable_lambda)]
            }),
        )
    };
    let count = |k: Classification| cells.iter().filter(|c| c.classification == k).count();
    let out = Outcome { artifacts: vec![table("stability_map", &cells, body, format)?], ..Default::default() };
    Ok(out
        .param("n", n)
        .param("omega", omega)
        .param("s_range", format!("{}:{}:{}", s_range.lo, s_range.hi, s_range.count))
        .param("sigma_range", format!("{}:{}:{}", sigma_range.lo, sigma_range.hi, sigma_range.count))
        .note("cells", cells.len())
        .note("stable", count(Classification::Stable))
        .note("unstable", count(Classification::Unstable))
        .note("degenerate", count(Classification::Degenerate)))
}

pub fn variational(params: &Physical, scales: &[f64], tol: Option<f64>, exec: Execution, format: Option<Format>) -> Result<Outcome> {
    let p = physical(params)?;
    if scales.is_empty() || scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(UsageError("--scales must be a strictly ascending list".into()).into());
    }
    let mut options = SolveOptions::default();
    if let Some(t) = tol {
        options.tol = t;
    }
    let rows = convergence_study(&p, scales, &options, exec)?;
    let c2 = sobolev_constant(&p);
    let body = || {
        csv(
            &["N", "m_N", "gap", "iterations", "residual"],
            rows.iter().map(|r| vec![num(r.scale), num(r.m_n), num(r.gap), r.iterations.to_string(), num(r.residual)]),
        )
    };
    let mut out = Outcome { artifacts: vec![table("variational", &rows, body, format)?], ..Default::default() };
    if let Some(r) = rows.iter().find(|r| r.m_n < c2 - 1e-8) {
        out.failed.push(format!("lower bound m_N >= c2 violated at N = {}", r.scale));
    }
    Ok(with_params(out, &p)
        .param("scales", scales)
        .param("tol", options.tol)
        .note("c2", c2)
        .note("loglog_slope", loglog_slope(&rows)))
}

pub fn simulate(config_path: &Path, format: Option<Format>) -> Result<Outcome> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", config_path.display())))?;
    let cfg = SimConfig::parse(&text)?;
    let ts = run_experiment(&cfg)?;
    let body = || {
        csv(
            &["t", "mass_drift", "energy_drift", "center_modulus", "mod_distance"],
            ts.rows.iter().map(|r| vec![num(r.t), num(r.mass_drift), num(r.energy_drift), num(r.center_modulus), num(r.mod_distance)]),
        )
    };
    let mut out = Outcome { artifacts: vec![table("series", &ts.rows, body, format)?], ..Default::default() };
    out.parameters = crate::output::to_map(&cfg);
    out.parameters.remove("params");
    out = with_params(out, &cfg.params)
        .note("steps", ts.steps)
        .note("dt", ts.dt)
        .note("reference_norm", ts.reference_norm)
        .note("max_mass_drift", ts.max_mass_drift())
        .note("max_energy_drift", ts.max_energy_drift())
        .note("max_mod_distance", ts.max_mod_distance());
    if let Some(rate) = ts.growth_rate {
        out = out.note("growth_rate", rate);
        if let Some(lam) = unstable_eigenvalue(&cfg.params)? {
            out = out.note("unstable_lambda", lam);
        }
    }
    if let Some(t) = ts.blow_up_time {
        out = out.note("blow_up_time", t);
    }
    Ok(out)
}

/// Prints one line per check; the structured report is only written to a file.
pub fn verify(full: bool, exec: Execution, format: Option<Format>, to_file: bool) -> Result<Outcome> {
    let reports = suite(full, exec);
    let mut out = Outcome::default().param("full", full);
    for r in &reports {
        println!("{}", r.line());
        out.summary.insert(format!("check_{}", r.id), json!(r.passed));
        if !r.passed {
            out.failed.push(format!("{} {}", r.id, r.title));
        }
    }
    if to_file {
        out.artifacts.push(report("verify", &reports, format)?);
    }
    Ok(out)
}
