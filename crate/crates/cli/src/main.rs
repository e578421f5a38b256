mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delta_lab::acceptance::DEFAULT_SEED;

/// Exact exponential sums, dual geometry, densities and point counts for x1 y1² + x2 y2² + x3 y3² = 0.
#[derive(Parser, Debug)]
#[command(name = "delta-lab", version)]
pub struct Cli {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    /// Worker threads; overrides DELTA_LAB_WORKERS.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// S_q(m, n) for one modulus and frequency.
    Expsum {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        m: [i64; 3],
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        n: [i64; 3],
        #[arg(long, value_enum, default_value_t = ExpsumMethod::Auto)]
        method: ExpsumMethod,
    },
    /// Checks one structural statement over a frequency box and all moduli up to qmax.
    Audit {
        #[arg(long)]
        lemma: String,
        #[arg(long = "box", default_value_t = 2)]
        box_h: i64,
        #[arg(long, default_value_t = 100)]
        qmax: u64,
    },
    /// Dual-variety points: counts by class, a listing, or one classification.
    Dual {
        #[arg(long)]
        height: Option<i64>,
        #[arg(long)]
        list: bool,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        m: Option<[i64; 3]>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        n: Option<[i64; 3]>,
    },
    /// Singular densities and predicted constants.
    Density {
        #[arg(long, value_enum, default_value_t = DensityKind::Leray)]
        method: DensityKind,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        t: Option<[i64; 3]>,
        #[arg(long, default_value_t = 100)]
        h: u32,
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Weighted point count in boxes of size B, split by gcd(y).
    Count {
        /// One or more comma-separated box sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u32>,
        #[arg(long, default_value_t = delta_lab::counting::DEFAULT_STRATUM_EXPONENT)]
        theta: f64,
        /// Full-box enumeration (B <= 16).
        #[arg(long)]
        naive: bool,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Partial sums Σ(t) of q⁻⁶ S_q(0,0) and their log-slope.
    Series {
        #[arg(long)]
        x: u64,
        /// Lower end of the fit window; defaults to x/100.
        #[arg(long)]
        lo: Option<u64>,
    },
    /// Hooley-weighted sums over the dual box.
    Hooley {
        #[arg(long)]
        t: u32,
        #[arg(long, value_parser = parse_utriple, default_value = "1,1,1")]
        d: [u32; 3],
    },
    /// Point counts of G_d^ε mod p against the three-case prediction.
    Rho {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, default_value = "1,1,1")]
        d: [i64; 3],
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, default_value = "1,1,1")]
        eps: [i64; 3],
    },
    /// The second cubic at one prime: S_p, point counts, identity check; or a family member.
    Appendix {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        m: Option<[i64; 3]>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        n: Option<[i64; 3]>,
        /// Evaluate the family member with these c1,c2 instead.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', num_args = 2)]
        family: Option<Vec<i64>>,
    },
    /// sup |S_p(b)|/p³ over primes and a frequency box, off the exceptional locus.
    Diamond {
        #[arg(long, value_enum, default_value_t = CubicKind::F)]
        cubic: CubicKind,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        c2: i64,
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        #[arg(long = "box", default_value_t = 2)]
        box_h: i64,
    },
    /// Runs the acceptance criteria and emits a pass/fail table.
    Report {
        /// Subset of criterion ids; all by default.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        /// Zero the runtimes so identical runs give identical output.
        #[arg(long)]
        no_timings: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct WeightArgs {
    #[arg(long, default_value_t = 0.25)]
    pub delta0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, value_enum, default_value_t = ProfileKind::Bump)]
    pub profile: ProfileKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpsumMethod {
    Auto,
    Brute,
    Naive,
    Reduced,
    Closed,
    PrimePower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityKind {
    Leray,
    Slab,
    Extrapolated,
    Lattice,
    LatticeLimit,
    Theta,
    Constants,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileKind {
    Bump,
    Plateau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CubicKind {
    F,
    F2,
    Family,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed '{s}': {e}"))
}

fn parse_triple(s: &str) -> Result<[i64; 3], String> {
    let v: Vec<i64> = s.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    v.try_into().map_err(|_| format!("expected three comma-separated integers, got '{s}'"))
}

fn parse_utriple(s: &str) -> Result<[u32; 3], String> {
    let t = parse_triple(s)?;
    let mut out = [0u32; 3];
    for (o, v) in out.iter_mut().zip(t) {
        *o = u32::try_from(v).map_err(|_| format!("expected positive entries, got '{s}'"))?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let args = match config::merge_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(cli))
}
