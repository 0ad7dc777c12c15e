//! `linpres`: construct and certify constant-rank linear pencils.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linpres::FieldSpec;

use crate::error::EXIT_USAGE;

#[derive(Parser, Debug)]
#[command(name = "linpres", version, about = "Constant-rank linear pencils from truncated graded modules")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for rank scans and tree expansion.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Betti table of a window document.
    Betti {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Truncation `M_{>=degree}` of a window document.
    Truncate {
        input: String,
        #[arg(allow_hyphen_values = true)]
        degree: i64,
    },
    /// Linear strand of the truncation `k` degrees above a linear strand.
    Predict {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Row of the input strand.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(required = true)]
        strand: Vec<usize>,
    },
    /// Minimal pure Betti numbers for a degree sequence.
    Hk {
        #[arg(required = true, allow_hyphen_values = true)]
        degrees: Vec<i64>,
    },
    /// Artinian modules that can be subtracted from a linear strand.
    Catalog {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        /// Rank of the sheaf, enabling the `b >= a - r` filter.
        #[arg(long)]
        rank: Option<i64>,
        #[arg(long, default_value_t = 16)]
        max_multiplicity: usize,
        #[arg(long, default_value_t = 12)]
        max_power: usize,
        /// Include sums of two pure types.
        #[arg(long)]
        mixed: bool,
        #[arg(required = true)]
        strand: Vec<usize>,
    },
    /// The pencil of the bundle `W_{n,k}`.
    Westwick {
        n: usize,
        k: usize,
        #[arg(long, default_value = "QQ")]
        field: FieldSpec,
    },
    /// Build a module window or pencil.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Kernel of a sampled surjection `E -> G` and its linear part.
    Reduce {
        e: String,
        g: String,
        #[arg(long, default_value_t = 8)]
        attempts: usize,
    },
    /// Construction tree rooted at a linearly presented window.
    Tree {
        input: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        attempts: usize,
        #[arg(long, value_enum, default_value_t = TreeFormat::Text)]
        format: TreeFormat,
        #[arg(long, default_value_t = 12)]
        max_power: usize,
        #[arg(long)]
        mixed: bool,
    },
    /// Certify that a pencil has constant rank.
    Rankcheck {
        #[arg(default_value = "-")]
        input: String,
        /// Prime for an exhaustive scan of `P^n(F_q)`; repeatable.
        #[arg(long = "exhaustive")]
        exhaustive: Vec<u64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Expected rank; defaults to the generic rank.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Skew-symmetry checks.
    Skew {
        #[command(subcommand)]
        action: SkewAction,
    },
    /// Rebuild and re-certify the built-in pencils.
    Examples {
        /// Directory for the pencil documents.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Free module `⊕ R(-t)` on `[lo, hi]`.
    Free {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long)]
        hi: i64,
        #[arg(long, default_values_t = [0], allow_hyphen_values = true, value_delimiter = ',')]
        twists: Vec<i64>,
        #[arg(long, default_value = "QQ")]
        field: FieldSpec,
    },
    /// Cokernel of a random `R(-m-1)^s -> R^{s+r}`.
    Steiner {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        m: i64,
        #[arg(long, default_value_t = 7)]
        hi: i64,
        #[arg(long)]
        truncate: Option<i64>,
        #[arg(long, default_value = "QQ")]
        field: FieldSpec,
    },
    /// Square pencil of constant rank `2s` from `R_{>=s}` on `P^2`.
    Linebundle {
        #[arg(long)]
        s: usize,
        #[arg(long, default_value = "QQ")]
        field: FieldSpec,
    },
    /// Section module of an instanton monad on `P^3`.
    Instanton {
        /// The fixed charge-2 monad instead of a random one.
        #[arg(long)]
        special: bool,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 6)]
        hi: i64,
        #[arg(long)]
        truncate: Option<i64>,
        #[arg(long, default_value = "QQ")]
        field: FieldSpec,
    },
    /// Pure Artinian module generated in degree `m`: copies of the residue
    /// field, or of the dual of `R/m^t` with `--power t`.
    Artinian {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 1)]
        multiplicity: usize,
        #[arg(long)]
        power: Option<usize>,
        #[arg(long)]
        hi: i64,
        #[arg(long, default_value = "QQ")]
        field: FieldSpec,
    },
    /// Section module of a null-correlation bundle on `P^3`.
    Nullcorrelation {
        #[arg(long, default_value_t = 6)]
        hi: i64,
        #[arg(long)]
        truncate: Option<i64>,
        #[arg(long, default_value = "QQ")]
        field: FieldSpec,
    },
}

#[derive(Subcommand, Debug)]
pub enum SkewAction {
    /// Exit 0 when every coefficient matrix is skew.
    Verify {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Find an invertible `S` with `S·A(x)` skew.
    Symmetrize {
        #[arg(default_value = "-")]
        input: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeFormat {
    Text,
    Json,
    Dot,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CliError;

    #[test]
    fn parses_repeated_primes_and_globals() {
        let cli = Cli::try_parse_from(["linpres", "rankcheck", "--exhaustive", "5", "--exhaustive", "7", "--seed", "3"]).unwrap();
        assert_eq!(cli.seed, 3);
        match cli.command {
            Command::Rankcheck { exhaustive, input, .. } => {
                assert_eq!(exhaustive, vec![5, 7]);
                assert_eq!(input, "-");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn field_flag_parses() {
        let cli = Cli::try_parse_from(["linpres", "westwick", "2", "2", "--field", "GF(7)"]).unwrap();
        assert!(matches!(cli.command, Command::Westwick { field, .. } if field == FieldSpec::prime(7).unwrap()));
        assert!(Cli::try_parse_from(["linpres", "westwick", "2", "2", "--field", "GF(4)"]).is_err());
    }

    #[test]
    fn negative_degrees_are_values() {
        let cli = Cli::try_parse_from(["linpres", "hk", "-1", "0", "2"]).unwrap();
        assert!(matches!(cli.command, Command::Hk { degrees } if degrees == vec![-1, 0, 2]));
    }

    #[test]
    fn usage_errors_are_reported() {
        let err = CliError::Usage("bad".into());
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }
}
