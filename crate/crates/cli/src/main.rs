mod artifact;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use artifact::Sink;

#[derive(Parser, Debug)]
#[command(name = "lpreps", version, about = "Query-oracle representations of C, Lp and Sobolev spaces")]
pub struct Cli {
    /// Artifact path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Oracle query budget; defaults to LPREPS_BUDGET or 10^7.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RepArgs {
    /// Function spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// One of xc, xs, xp, xpd, xmp, cauchy.
    #[arg(long, default_value = "xp")]
    pub rep: String,
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Integral over a box with dyadic corners `lo:hi` (comma-separated coordinates).
    Integrate {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long = "box")]
        bx: String,
        #[arg(long)]
        prec: usize,
    },
    /// Point value from a xc name.
    Evaluate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        prec: usize,
    },
    /// Translation between representations.
    Translate {
        #[command(flatten)]
        rep: RepArgs,
        /// xp-to-cauchy, cauchy-to-xp, xmp-to-xc or xmp-to-xp.
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 2)]
        prec: usize,
    },
    /// Integral of the k-th derivative over a box, from a xmp name.
    Differentiate {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long = "box")]
        bx: String,
        #[arg(long)]
        prec: usize,
    },
    /// Lp norm from a xpd name.
    Norm {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long)]
        prec: usize,
    },
    /// Entropy table as CSV.
    Entropy {
        /// aa, fk or lipschitz.
        #[arg(long, default_value = "aa")]
        class: String,
        /// Slope and offset of the affine modulus `n -> a n + b`.
        #[arg(long, default_value_t = 1)]
        la: u64,
        #[arg(long, default_value_t = 0)]
        lb: i64,
        #[arg(long, default_value_t = 0)]
        c: u32,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 4)]
        to: usize,
    },
    /// Oscillator names that agree with the zero name on short queries.
    DemoDiscontinuity {
        #[arg(long, default_value_t = 3)]
        m: u32,
    },
    /// Query counts per precision as CSV.
    Profile {
        /// integrate or norm.
        #[arg(long)]
        op: String,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 10)]
        to: usize,
    },
    /// Validates a generated name against the exact oracle.
    Validate {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Subtracts this many bits from the declared length (fault injection).
        #[arg(long, default_value_t = 0)]
        shorten: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let sink = Sink { out: cli.out.clone() };
    match commands::run(&cli, &sink) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lpreps: {}", f.message());
            ExitCode::from(f.code() as u8)
        }
    }
}
