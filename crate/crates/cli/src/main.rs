//! `quantumness`: baselines, squeezed-thermal sweeps, crossings, Fock-mixture
//! scans and the verification batteries from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quantumness::experiments::{self, sig7, VerifySuite};
use quantumness::quantifier::DEFAULT_TOL;
use quantumness::{ChannelSpec, FunctionalSpec};

#[derive(Parser)]
#[command(
    name = "quantumness",
    version,
    about = "Norm-based optical quantumness certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// N of the vacuum under the classicalizer.
    Baseline {
        /// Ordering parameter (<= 0).
        #[arg(long, default_value_t = 0.0, value_parser = ordering, allow_hyphen_values = true)]
        s: f64,
        /// Norm order (>= 1).
        #[arg(long, default_value_t = 1.0, value_parser = norm_order)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
    },
    /// CSV of M over squeezed thermal states.
    Sweep {
        #[arg(long, value_parser = nonnegative)]
        nbar: f64,
        #[arg(long, value_parser = nonnegative)]
        r_min: f64,
        #[arg(long, value_parser = nonnegative)]
        r_max: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        steps: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
    },
    /// Squeezing at which M returns to zero.
    Crossing {
        #[arg(long, value_parser = nonnegative)]
        nbar: f64,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
    },
    /// CSV of M over seeded mixtures of |0>, |1>, |2>.
    Mixtures {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        count: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Append the pure states |0>, |1>, |2>.
        #[arg(long)]
        include_corners: bool,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
    },
    /// Property batteries; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Axioms,
    Oracles,
    All,
}

impl From<Suite> for VerifySuite {
    fn from(s: Suite) -> Self {
        match s {
            Suite::Axioms => VerifySuite::Axioms,
            Suite::Oracles => VerifySuite::Oracles,
            Suite::All => VerifySuite::All,
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn ordering(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v <= 0.0 {
        Ok(v)
    } else {
        Err(format!("ordering must be <= 0, got {v}"))
    }
}

fn norm_order(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 1.0 {
        Ok(v)
    } else {
        Err(format!("norm order must be >= 1, got {v}"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be nonnegative, got {v}"))
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, String> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run(command: Command) -> Result<bool, String> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |e: io::Error| e.to_string();
    match command {
        Command::Baseline { s, p, tol } => {
            let f = FunctionalSpec::new(s, p).map_err(|e| e.to_string())?;
            let b = quantumness::quantifier::baseline(&ChannelSpec::classicalizer(), f, tol)
                .map_err(|e| e.to_string())?;
            writeln!(out, "baseline,{},{}", sig7(b.value), sig7(b.err)).map_err(io_err)?;
        }
        Command::Sweep {
            nbar,
            r_min,
            r_max,
            steps,
            out: path,
            tol,
        } => {
            let rows = experiments::sweep(nbar, r_min, r_max, steps as usize, tol)
                .map_err(|e| e.to_string())?;
            let file = create(&path)?;
            experiments::write_sweep_csv(&rows, file).map_err(io_err)?;
        }
        Command::Crossing { nbar, tol } => {
            let c = experiments::crossing(nbar, tol).map_err(|e| e.to_string())?;
            writeln!(out, "onset,{}", sig7(c.onset)).map_err(io_err)?;
            writeln!(out, "r_star,{}", sig7(c.r_star)).map_err(io_err)?;
            writeln!(out, "m_at_r_star,{}", sig7(c.m_at_r_star)).map_err(io_err)?;
            writeln!(
                out,
                "bracket,{},{},{},{}",
                sig7(c.lo),
                sig7(c.hi),
                sig7(c.m_lo),
                sig7(c.m_hi)
            )
            .map_err(io_err)?;
        }
        Command::Mixtures {
            count,
            seed,
            out: path,
            include_corners,
            tol,
        } => {
            let rows = experiments::mixtures(count as usize, seed, include_corners, tol)
                .map_err(|e| e.to_string())?;
            let file = create(&path)?;
            experiments::write_mixtures_csv(&rows, file).map_err(io_err)?;
        }
        Command::Verify { suite, tol } => {
            let outcomes = experiments::run_verify(suite.into(), tol);
            let failed = outcomes.iter().filter(|c| !c.passed).count();
            for c in &outcomes {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "check,{},{},{}", c.name, verdict, c.detail).map_err(io_err)?;
            }
            writeln!(out, "summary,{},{}", outcomes.len() - failed, failed).map_err(io_err)?;
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
