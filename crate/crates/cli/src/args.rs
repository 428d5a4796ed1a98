use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fnls", version, about = "Solitary waves of the fractional NLS with a point nonlinearity")]
pub struct Cli {
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Directory for data files and manifest.json (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps; 1 runs sequentially
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Relative tolerance for quadrature (constants) or the solver residual (variational)
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Physical {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments, the sharp constant and its printed variant
    Constants {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },
    /// Radial samples of the standing wave
    Profile {
        #[command(flatten)]
        params: Physical,
        /// Radii as lo:hi:count
        #[arg(long, default_value = "0:10:201")]
        r_range: Range,
    },
    /// Mass, seminorm and Pohozaev residuals
    Pohozaev {
        #[command(flatten)]
        params: Physical,
    },
    /// Spectral report and stability classification
    Spectrum {
        #[command(flatten)]
        params: Physical,
    },
    /// Classification over an (s, sigma) grid
    StabilityMap {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long)]
        s_range: Range,
        #[arg(long)]
        sigma_range: Range,
    },
    /// Mollified minimization for a list of scales N
    Variational {
        #[command(flatten)]
        params: Physical,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        scales: Vec<f64>,
    },
    /// Split-step run from a key = value config file
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the invariant suite; exits 1 if any check fails
    Verify {
        /// Also run the long orbit experiments
        #[arg(long)]
        full: bool,
    },
}

/// `lo:hi:count` with inclusive endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.hi } else { self.lo + step * i as f64 }).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(format!("expected lo:hi:count, got '{text}'"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("cannot parse '{v}' as a number"));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let count: usize = count.trim().parse().map_err(|_| format!("cannot parse count '{count}'"))?;
        if !(lo.is_finite() && hi.is_finite()) || count == 0 || (count == 1 && lo != hi) || (count > 1 && hi <= lo) {
            return Err(format!("range '{text}' needs lo < hi and count >= 2 (or lo = hi with count 1)"));
        }
        Ok(Self { lo, hi, count })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_endpoints_inclusive() {
        let r: Range = "0.6:3:25".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 25);
        assert_eq!(v[0], 0.6);
        assert_eq!(v[24], 3.0);
        assert!((v[1] - 0.7).abs() < 1e-15);
        assert_eq!("2:2:1".parse::<Range>().unwrap().values(), vec![2.0]);
    }

    #[test]
    fn range_rejects_garbage() {
        for bad in ["1:2", "1:2:0", "2:1:5", "a:2:3", "1:2:3:4", "1:1:3"] {
            assert!(bad.parse::<Range>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
