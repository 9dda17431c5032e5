//! `qcoin`: exact counts, probabilities, simulations and identity checks for
//! repeated quantum-coin measurements.

mod commands;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

/// Exit code for arguments that are malformed or out of domain.
pub const EXIT_USAGE: u8 = 2;
/// Exit code when two independent routes disagree.
pub const EXIT_VERIFY: u8 = 3;
/// Exit code when a work budget would be exceeded.
pub const EXIT_RESOURCE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "qcoin", version, about = "Quantum coin pattern probabilities, computed exactly")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Significant digits for rendered floats.
    #[arg(long, global = true, default_value_t = 12)]
    digits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct PatternArgs {
    /// Number of trials (string length).
    #[arg(long, short = 'n')]
    n: Option<u32>,

    /// Number of trials; alias of --n for qudit coins.
    #[arg(long = "M")]
    m: Option<u32>,

    /// Where the single 11 must occur.
    #[arg(long, default_value = "end", value_parser = ["end", "start", "position", "anywhere-once"])]
    place: String,

    /// 1-based position of the pair; implies --place position.
    #[arg(long)]
    k: Option<u32>,

    /// Alphabet size of the coin.
    #[arg(long, short = 'd', conflicts_with = "n_coin")]
    d: Option<u32>,

    /// Qubits per coin; the alphabet size is 2^n-coin.
    #[arg(long = "n-coin")]
    n_coin: Option<u32>,

    /// Comma-separated segment lengths of a separable (partitioned) state.
    #[arg(long, value_delimiter = ',')]
    partition: Vec<u32>,

    /// Comma-separated per-segment pair positions.
    #[arg(long, value_delimiter = ',')]
    positions: Vec<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count allowed outcome strings.
    Count {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Also enumerate every string and compare.
        #[arg(long)]
        verify: bool,
        /// Emit one row per length in the inclusive range A..B.
        #[arg(long)]
        scan: Option<String>,
    },
    /// Probability of the allowed set.
    Prob {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Probability of the distinguished outcome for a biased coin (e.g. 1/3).
        #[arg(long)]
        p1: Option<String>,
        /// Also check against exhaustive enumeration.
        #[arg(long)]
        verify: bool,
        /// Emit one row per length in the inclusive range A..B.
        #[arg(long)]
        scan: Option<String>,
    },
    /// Monte Carlo estimate of a pattern probability.
    Simulate {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Probability of the distinguished outcome (e.g. 1/2).
        #[arg(long, conflicts_with = "profile")]
        p1: Option<String>,
        /// Full outcome distribution, comma separated (e.g. 1/2,1/3,1/6).
        #[arg(long)]
        profile: Option<String>,
        /// Number of simulated strings.
        #[arg(long, default_value_t = 100_000)]
        runs: u64,
        /// Generator seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated increasing run counts for a convergence report.
        #[arg(long, value_delimiter = ',', conflicts_with = "runs")]
        schedule: Vec<u64>,
        /// Run on a single thread.
        #[arg(long)]
        serial: bool,
    },
    /// Shannon entropy of a state's measurement distribution.
    Entropy {
        /// Amplitudes as "re,im;re,im;..." (imaginary part optional).
        #[arg(long, conflicts_with_all = ["state_file", "max_random"])]
        amps: Option<String>,
        /// JSON file with {"qubit_count": n, "amplitudes": [[index, re, im], ...]}.
        #[arg(long)]
        state_file: Option<std::path::PathBuf>,
        /// Use the maximally random state on this many qubits (zero phases).
        #[arg(long)]
        max_random: Option<u32>,
        /// Rescale the amplitudes to unit norm first.
        #[arg(long)]
        normalize: bool,
        /// Also report the additivity gap across this split.
        #[arg(long)]
        split: Option<u32>,
    },
    /// Bloch-sphere cap fraction and single-qubit measurement probabilities.
    Bloch {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
    /// Geometric probability of a box of basis states.
    Box {
        /// Axes as "k,l,n;k,l,n;..." with half-open [k, l) inside 2^n states.
        #[arg(long = "box")]
        region: String,
    },
    /// Generalized Hadamard matrix and its checks.
    Hadamard {
        #[arg(long, short = 'n')]
        n: u32,
        /// Report residuals instead of printing the matrix.
        #[arg(long)]
        check: bool,
    },
    /// Run exact identity suites.
    Identities {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Upper index bound (suite-specific default when omitted).
        #[arg(long)]
        max: Option<u32>,
    },
    /// Sequence values: fibonacci, lucas, qudit, binet, ratio.
    Seq {
        #[arg(long, default_value = "fibonacci", value_parser = ["fibonacci", "lucas", "qudit", "binet", "ratio-count", "ratio-probability"])]
        kind: String,
        #[arg(long, short = 'n', allow_hyphen_values = true)]
        n: Option<i64>,
        /// Alphabet size for the qudit sequence.
        #[arg(long, short = 'd', default_value_t = 2)]
        d: u64,
        /// Decimal digits for real-valued output.
        #[arg(long, default_value_t = qcoin_core::sequences::DEFAULT_PRECISION)]
        precision: u32,
        /// Inclusive index range A..B.
        #[arg(long)]
        scan: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count { pattern, verify, scan } => commands::count(&pattern, verify, scan.as_deref()),
        Command::Prob { pattern, p1, verify, scan } => {
            commands::prob(&pattern, p1.as_deref(), verify, scan.as_deref())
        }
        Command::Simulate { pattern, p1, profile, runs, seed, schedule, serial } => {
            commands::simulate(&pattern, p1.as_deref(), profile.as_deref(), runs, seed, &schedule, serial)
        }
        Command::Entropy { amps, state_file, max_random, normalize, split } => {
            commands::entropy(amps.as_deref(), state_file.as_deref(), max_random, normalize, split)
        }
        Command::Bloch { theta, phi } => commands::bloch(theta, phi),
        Command::Box { region } => commands::box_region(&region),
        Command::Hadamard { n, check } => commands::hadamard(n, check),
        Command::Identities { suite, max } => commands::identities(&suite, max),
        Command::Seq { kind, n, d, precision, scan } => {
            commands::seq(&kind, n, d, precision, scan.as_deref())
        }
    };
    match result {
        Ok(outcome) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if outcome.report.render(cli.format, cli.digits, &mut lock).is_err() {
                return ExitCode::FAILURE;
            }
            let _ = lock.flush();
            if let Some(msg) = &outcome.failure {
                eprintln!("verification failed: {msg}");
                return ExitCode::from(EXIT_VERIFY);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
