//! CSV samples for external plotting.

use std::io::Write;
use std::path::PathBuf;

use clap::Subcommand;
use pnlab_core::cramer::{closed_theta, ThetaKind};
use pnlab_core::freq::expand;
use pnlab_core::zeta::{prime_support, psi_archimedean, w0_closed};
use pnlab_core::NumericsConfig;

use crate::io::read_series;
use crate::Failure;

#[derive(Subcommand, Debug)]
pub enum PlotCommand {
    /// Closed-form theta distribution, (t, value).
    Theta {
        #[arg(long, default_value = "inverse_gamma_shift")]
        kind: ThetaKind,
        #[command(flatten)]
        grid: Grid,
    },
    /// Trivial-zero distribution W0, (t, value).
    W0 {
        #[command(flatten)]
        grid: Grid,
    },
    /// Archimedean weight Psi, (t, value).
    Psi {
        #[command(flatten)]
        grid: Grid,
    },
    /// Prime-power atoms k log p <= tmax, (position, weight).
    Primes {
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Atomic side of a series, (position, weight) with weight <lambda,k> b_k.
    Atomic {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
pub struct Grid {
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Grid {
    fn points(&self) -> Result<Vec<f64>, Failure> {
        if self.n < 2 || self.to.partial_cmp(&self.from) != Some(std::cmp::Ordering::Greater) {
            return Err(Failure::Usage("need n >= 2 and from < to".into()));
        }
        let h = (self.to - self.from) / (self.n - 1) as f64;
        Ok((0..self.n).map(|j| self.from + h * j as f64).collect())
    }
}

fn writer(out: &Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    Ok(match out {
        Some(p) => csv::Writer::from_writer(Box::new(std::fs::File::create(p)?)),
        None => csv::Writer::from_writer(Box::new(std::io::stdout())),
    })
}

fn sample<F: Fn(f64) -> Result<f64, Failure>>(grid: &Grid, f: F) -> Result<(), Failure> {
    let mut w = writer(&grid.out)?;
    w.write_record(["t", "value"])?;
    for t in grid.points()? {
        w.write_record([t.to_string(), f(t)?.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn atoms(out: &Option<PathBuf>, rows: impl Iterator<Item = (f64, f64)>) -> Result<(), Failure> {
    let mut w = writer(out)?;
    w.write_record(["position", "weight"])?;
    for (p, v) in rows {
        w.write_record([p.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(cmd: &PlotCommand, cfg: &NumericsConfig) -> Result<(), Failure> {
    match cmd {
        PlotCommand::Theta { kind, grid } => sample(grid, |t| Ok(closed_theta(*kind, t)?)),
        PlotCommand::W0 { grid } => sample(grid, |t| Ok(w0_closed(t))),
        PlotCommand::Psi { grid } => sample(grid, |t| Ok(psi_archimedean(t))),
        PlotCommand::Primes { tmax, out } => {
            let ps = prime_support(*tmax, cfg)?;
            atoms(out, ps.terms.iter().map(|t| (t.position, t.weight)))
        }
        PlotCommand::Atomic { series, tmax, out } => {
            let f = read_series(series)?;
            let terms = expand(&f, *tmax, cfg.enumeration_cap)?;
            // Real part only: complex series plot the real component.
            atoms(out, terms.iter().map(|t| (t.value, (t.value * t.b.unwrap_or_default()).re)))
        }
    }
}
