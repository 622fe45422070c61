//! `padic`: run any padic-core operation from the command line.
//!
//! Reports go to stdout (or `--out`) as JSON, a short summary to stderr.
//! Exit status: 0 success, 1 invariant violation, 2 usage or parse error,
//! 3 resource cap.

mod input;
mod verbs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "padic", version, about = "Exact non-archimedean analysis over Q_p")]
struct Cli {
    /// Worker threads for parallel sections (reports do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// p-adic digits carried by parsed inputs.
    #[arg(long, global = true, default_value_t = padic_core::padic::DEFAULT_PREC)]
    prec: u32,
    #[command(subcommand)]
    verb: Verb,
}

/// A function given as an expression over `x0, x1, ...`.
#[derive(Args, Clone)]
pub struct FnArgs {
    #[arg(long)]
    pub p: u32,
    /// Expression, `;` between output components, e.g. `x0^2; ch(0|1;2)`.
    #[arg(long)]
    pub f: String,
    /// Input dimension (defaults to the highest variable used).
    #[arg(long)]
    pub m: Option<usize>,
}

/// A grid: `--domain ball(c;k)` (default `ball(0;0)`) at resolution `--k`.
#[derive(Args, Clone)]
pub struct GridArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub k: i64,
}

#[derive(Subcommand)]
pub enum Verb {
    /// Evaluate f at one or more points.
    Eval {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, required = true)]
        x: Vec<String>,
    },
    /// Difference quotient: one `--v/--t` pair per order, or `--limit` for t -> 0.
    Quotient {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        x: String,
        #[arg(long, required = true)]
        v: Vec<String>,
        #[arg(long)]
        t: Vec<String>,
        #[arg(long)]
        limit: bool,
    },
    /// Taylor sum of order n at y evaluated at x, with its residual.
    Taylor {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Density ratios of a set on shrinking balls around a point.
    Density {
        #[arg(long)]
        p: u32,
        /// `ball(c;k)+...`, `sphere(l)` or `sparse`.
        #[arg(long)]
        set: String,
        #[arg(long)]
        at: String,
        /// Ball exponents j, `1,2,3` or `1..4`.
        #[arg(long, default_value = "1..4")]
        j: String,
        /// Enumeration resolution `scale*j + offset`.
        #[arg(long, default_value = "1,1")]
        rule: String,
        #[arg(long, default_value = "1")]
        theta: String,
        /// Emit the ratio table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Approximate limit of f at a point against a candidate value.
    Aplimit {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        at: String,
        #[arg(long)]
        y: String,
        /// Tolerance, a rational or `p^k`.
        #[arg(long)]
        eps: String,
        #[arg(long, default_value = "1..4")]
        j: String,
        #[arg(long, default_value = "1,1")]
        rule: String,
        #[arg(long, default_value = "1")]
        theta: String,
    },
    /// Series of characteristic functions reproducing a step function.
    Decompose {
        #[command(flatten)]
        f: FnArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Residual target p^-tol (defaults to the resolution).
        #[arg(long)]
        tol: Option<i64>,
    },
    /// Check a sample file against its claimed Hölder bound.
    Certify {
        #[arg(long)]
        samples: PathBuf,
    },
    /// Nearest-site extension of a certified sample file to a grid.
    Extend {
        #[arg(long)]
        samples: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Chebyshev radius of weighted sites `--site z:x`.
    Cheb {
        #[arg(long)]
        p: u32,
        #[arg(long, required = true)]
        site: Vec<String>,
        #[arg(long, default_value = "1")]
        r: String,
    },
    /// Split grid points into the level classes E_j.
    Ej {
        #[command(flatten)]
        f: FnArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "1")]
        r: String,
        /// Range of levels `a..b`.
        #[arg(long, default_value = "0..3")]
        j: String,
    },
    /// Whitney jets, extension and verification.
    Whitney {
        #[command(subcommand)]
        action: WhitneyVerb,
    },
    /// Grid-wide smoothness scans.
    Scan {
        #[command(subcommand)]
        kind: ScanVerb,
    },
    /// Seeded randomized run of the chain, telescoping and product identities.
    Identities {
        #[arg(long, default_value_t = 5)]
        p: u32,
        #[arg(long)]
        seed: u64,
        /// Instances per identity and function family.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Args, Clone)]
pub struct WhitneyParamArgs {
    #[arg(long, default_value_t = 2)]
    pub s0: i64,
    #[arg(long, default_value_t = 0)]
    pub s1: i64,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub s2: i64,
}

#[derive(Subcommand)]
pub enum WhitneyVerb {
    /// Jet field of f on a union of balls.
    Build {
        #[command(flatten)]
        f: FnArgs,
        /// Closed set `ball(c;k)+ball(c;k)+...`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        order: u32,
        /// Resolution of the jet sites inside A.
        #[arg(long)]
        jet_resolution: i64,
        /// Jet degree (defaults to order + 1).
        #[arg(long)]
        truncation: Option<u32>,
    },
    /// Evaluate the glued extension of a jet file.
    Eval {
        #[arg(long)]
        jets: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        params: WhitneyParamArgs,
        #[arg(long, required = true)]
        x: Vec<String>,
    },
    /// Compare quotients of the extension with the jets at seeded samples.
    Verify {
        #[arg(long)]
        jets: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        params: WhitneyParamArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Emit the error table as CSV.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand)]
pub enum ScanVerb {
    /// Fraction of grid points where the approximate derivative is confirmed.
    Stepanoff {
        #[command(flatten)]
        f: FnArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        eps: String,
    },
    /// Exact Hölder constant of f on the grid.
    Holder {
        #[command(flatten)]
        f: FnArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "1")]
        r: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| verbs::run(&cli.verb, cli.prec));
    match result {
        Ok(out) => {
            if let Err(e) = verbs::emit(&out, cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            for line in &out.summary {
                eprintln!("{line}");
            }
            match &out.violation {
                None => ExitCode::SUCCESS,
                Some(v) => {
                    eprintln!("invariant violation: {v}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(verbs::exit_code(&e))
        }
    }
}
