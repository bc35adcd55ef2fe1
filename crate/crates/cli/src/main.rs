//! `pnlab`: command-line front end for pnlab-core.

mod io;
mod plot;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pnlab_core::cramer::{pair_atomic_side, pair_zero_side, PairingConfig};
use pnlab_core::discrepancy::{detect_functional_equation, discrepancy_poly};
use pnlab_core::freq::expand;
use pnlab_core::summation::{abel_plana, em_finite, em_infinite, ramanujan_constant, EmConfig};
use pnlab_core::verify::{verify_classical_poisson, verify_lifting, verify_newton_equivalence, verify_pn, PnOptions, VerificationReport};
use pnlab_core::zeros::find_zeros_auto;
use pnlab_core::zeta::{default_c0_gaussians, explicit_formula_check, extract_c0, load_zero_table, ZeroTable};
use pnlab_core::{Complex64, Error, NumericsConfig, TestFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::io::{parse_complex, parse_complex_list, read_series, read_zeros, write_zeros, ZerosFile};

#[derive(Parser, Debug)]
#[command(name = "pnlab", version, about = "Poisson-Newton formula for finite Dirichlet series")]
struct Cli {
    /// Print the effective configuration as JSON and exit.
    #[arg(long, global = true)]
    show_config: bool,
    /// JSON file overriding numerical tolerances and caps.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate f and f'/f at a point.
    Eval {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
    },
    /// Frequency terms <lambda,k> <= tmax with their coefficients, as CSV.
    Expand {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zeros with |Im| <= ymax, as JSON.
    Zeros {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 80.0)]
        ymax: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zero-side pairing, with the atomic side alongside.
    Pair {
        #[command(flatten)]
        div: DivisorArgs,
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
        sigma: Complex64,
        #[arg(long, default_value_t = 2)]
        dprime: u32,
        /// Cutoff of the atomic side; defaults to the support of phi.
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Discrepancy polynomial at sigma.
    Discrepancy {
        #[command(flatten)]
        div: DivisorArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
        sigma: Complex64,
    },
    /// Functional equation g(-s) = g(s), if one holds.
    FeDetect {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Euler-Maclaurin sum over 0..N, or over all n >= 0 without --n.
    Em {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
        sigma: Complex64,
    },
    /// Abel-Plana sum over n >= 0.
    AbelPlana {
        #[arg(long)]
        phi: String,
    },
    /// Ramanujan constant of the divergent sum over n >= 0.
    Rc {
        #[arg(long)]
        phi: String,
    },
    /// Explicit formula for zeta with a gaussian.
    Explicit {
        /// Zero ordinates, one per line; the built-in table of 100 if absent.
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 4.0)]
        tmax: f64,
        /// Use only the first N ordinates.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Estimate of c_0(zeta, beta) from zeros and primes.
    C0 {
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
    },
    /// End-to-end verifications; exit status 1 when any fails.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Sampled data for external plotting, as CSV.
    Plot {
        #[command(subcommand)]
        which: plot::PlotCommand,
    },
}

#[derive(Args, Debug)]
struct DivisorArgs {
    #[arg(long)]
    series: PathBuf,
    /// Zeros written by `pnlab zeros`; recomputed when absent.
    #[arg(long)]
    zeros: Option<PathBuf>,
    #[arg(long, default_value_t = 80.0)]
    ymax: f64,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Zero side against atomic side.
    Pn {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
        sigma: Complex64,
        #[arg(long, default_value_t = 2)]
        dprime: u32,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 80.0)]
        ymax: f64,
    },
    /// Power sums of polynomial roots, directly and through frequency coefficients.
    Newton {
        /// Coefficients from the leading one down, comma separated.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "random")]
        poly: Option<String>,
        /// Random monic polynomial of this degree, drawn with --seed.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 8)]
        m: u32,
    },
    /// Lifting formula over levels 1..=M+1.
    Lifting {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 60.0)]
        ymax: f64,
    },
    /// f = 1 - e^{-s} with a gaussian centred at 3.
    ClassicalPoisson,
}

/// Failure of a run, split by exit status.
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSeries(_)
            | Error::InvalidTestFunction(_)
            | Error::InvalidLevel
            | Error::OutOfRange(_)
            | Error::ParseError { .. }
            | Error::MonotonicityError(_)
            | Error::SanityGateError(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::NonpositiveT => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<bool, Failure>;

#[derive(Serialize)]
struct RunConfig<'a> {
    numerics: &'a NumericsConfig,
    seed: u64,
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = std::env::var("PNLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli, threads) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("pnlab: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("pnlab: {m}");
            ExitCode::from(1)
        }
    }
}

fn load_config(cli: &Cli) -> std::result::Result<NumericsConfig, Failure> {
    match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        None => Ok(NumericsConfig::default()),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(p) = &cli.report {
        std::fs::write(p, format!("{text}\n"))?;
    }
    Ok(())
}

fn emit_report(cli: &Cli, r: &VerificationReport) -> Outcome {
    emit(cli, r)?;
    eprintln!("{}: {} (residual {:.3e}, budget {:.3e})", r.name, if r.pass { "PASS" } else { "FAIL" }, r.residual, r.budget);
    Ok(r.pass)
}

fn phi_arg(text: &str) -> std::result::Result<TestFunction, Failure> {
    Ok(TestFunction::parse(text)?)
}

fn zero_table(path: &Option<PathBuf>) -> std::result::Result<ZeroTable, Failure> {
    Ok(match path {
        Some(p) => load_zero_table(p)?,
        None => ZeroTable::builtin(),
    })
}

fn run(cli: &Cli, threads: Option<usize>) -> Outcome {
    let cfg = load_config(cli)?;
    if cli.show_config {
        emit(cli, &RunConfig { numerics: &cfg, seed: cli.seed, threads })?;
        return Ok(true);
    }
    let Some(command) = &cli.command else {
        return Err(Failure::Usage("no command given; see --help".into()));
    };
    match command {
        Command::Eval { series, s } => {
            let f = read_series(series)?;
            let (v, d) = f.eval_with_derivative(*s);
            emit(cli, &json!({ "s": s, "f": v, "df": d, "log_derivative": d / v }))?;
        }
        Command::Expand { series, tmax, out } => {
            let f = read_series(series)?;
            let terms = expand(&f, *tmax, cfg.enumeration_cap)?;
            let mut w: csv::Writer<Box<dyn std::io::Write>> = match out {
                Some(p) => csv::Writer::from_writer(Box::new(std::fs::File::create(p)?)),
                None => csv::Writer::from_writer(Box::new(std::io::stdout())),
            };
            w.write_record(["value", "k", "b_re", "b_im"])?;
            for t in &terms {
                let b = t.b.unwrap_or_default();
                w.write_record([t.value.to_string(), t.k.to_string(), b.re.to_string(), b.im.to_string()])?;
            }
            w.flush()?;
        }
        Command::Zeros { series, ymax, out } => {
            let f = read_series(series)?;
            let div = find_zeros_auto(&f, *ymax, &cfg)?;
            let file = ZerosFile::from(&div);
            match out {
                Some(p) => write_zeros(p, &file)?,
                None => emit(cli, &file)?,
            }
        }
        Command::Pair { div, phi, sigma, dprime, tmax } => {
            let f = read_series(&div.series)?;
            let d = match &div.zeros {
                Some(p) => read_zeros(p)?,
                None => find_zeros_auto(&f, div.ymax, &cfg)?,
            };
            let phi = phi_arg(phi)?;
            let pc = PairingConfig::new(*sigma, *dprime);
            let zero_side = pair_zero_side(&d, &phi, &pc, &cfg)?;
            let c = if phi.supported_in_positive_axis() { Vec::new() } else { discrepancy_poly(&f, &d, *sigma, &cfg)?.coeffs };
            let t_max = tmax.unwrap_or_else(|| phi.support().hi.max(1.0));
            let atomic = pair_atomic_side(&f, &phi, &c, t_max, &cfg)?;
            emit(cli, &json!({ "zero_side": zero_side, "atomic_side": atomic, "c": c, "T": t_max }))?;
        }
        Command::Discrepancy { div, sigma } => {
            let f = read_series(&div.series)?;
            let d = match &div.zeros {
                Some(p) => read_zeros(p)?,
                None => find_zeros_auto(&f, div.ymax, &cfg)?,
            };
            emit(cli, &discrepancy_poly(&f, &d, *sigma, &cfg)?)?;
        }
        Command::FeDetect { series, tol } => {
            let f = read_series(series)?;
            emit(cli, &detect_functional_equation(&f, *tol))?;
        }
        Command::Em { phi, n, m, sigma } => {
            let phi = phi_arg(phi)?;
            let mut em = EmConfig::new(*m)?.with_sigma(*sigma);
            em.remainder_quad_tol = em.remainder_quad_tol.max(cfg.quad_abs_tol);
            let r = match n {
                Some(n) => em_finite(&phi, *n, &em)?,
                None => em_infinite(&phi, &em)?,
            };
            emit(cli, &r)?;
        }
        Command::AbelPlana { phi } => emit(cli, &abel_plana(&phi_arg(phi)?, &cfg)?)?,
        Command::Rc { phi } => emit(cli, &ramanujan_constant(&phi_arg(phi)?, &cfg)?)?,
        Command::Explicit { zeros, phi, tmax, count } => {
            let mut zt = zero_table(zeros)?;
            if let Some(n) = count {
                zt = zt.truncated(*n);
            }
            let r = explicit_formula_check(&phi_arg(phi)?, &zt, *tmax, &cfg)?;
            emit(cli, &r)?;
        }
        Command::C0 { zeros, beta, tmax } => {
            let zt = zero_table(zeros)?;
            emit(cli, &extract_c0(&zt, *beta, &default_c0_gaussians(), *tmax, &cfg)?)?;
        }
        Command::Verify { which } => return verify(cli, which, &cfg),
        Command::Plot { which } => plot::run(which, &cfg)?,
    }
    Ok(true)
}

fn verify(cli: &Cli, which: &VerifyCommand, cfg: &NumericsConfig) -> Outcome {
    let report = match which {
        VerifyCommand::Pn { series, phi, sigma, dprime, tmax, ymax } => {
            let f = read_series(series)?;
            let phi = phi_arg(phi)?;
            let mut opts = PnOptions::for_phi(&phi);
            opts.pairing = PairingConfig::new(*sigma, *dprime);
            opts.ymax = *ymax;
            if let Some(t) = tmax {
                opts.t_max = *t;
            }
            verify_pn(&f, &phi, &opts, cfg)?
        }
        VerifyCommand::Newton { poly, random, m } => {
            let poly = match (poly, random) {
                (Some(p), _) => parse_complex_list(p).map_err(Failure::Usage)?,
                (None, Some(deg)) => random_monic(*deg, cli.seed),
                (None, None) => return Err(Failure::Usage("give --poly or --random".into())),
            };
            verify_newton_equivalence(&poly, *m)?
        }
        VerifyCommand::Lifting { series, m, phi, ymax } => verify_lifting(&read_series(series)?, *m, &phi_arg(phi)?, *ymax, cfg)?,
        VerifyCommand::ClassicalPoisson => verify_classical_poisson(cfg)?,
    };
    emit_report(cli, &report)
}

/// Monic polynomial with coefficients uniform in the unit square.
fn random_monic(deg: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = vec![Complex64::new(1.0, 0.0)];
    p.extend((0..deg).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    p
}
