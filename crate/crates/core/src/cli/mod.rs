//! Command-line interface: argument parsing, thread pool setup and exit codes.

mod commands;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::embed::{parse_override, Preset, SizeMode};
use crate::error::{Error, Result};
use crate::experiment::HostSpec;

/// Environment variable holding the default thread count.
pub const THREADS_ENV: &str = "GRIDRAMSEY_THREADS";

/// Exit codes.
pub const EXIT_OK: i32 = 0;
/// The subcommand ran but its primary assertion failed.
pub const EXIT_FAILED: i32 = 1;
/// Bad arguments or configuration.
pub const EXIT_USAGE: i32 = 2;
/// I/O errors and internal invariant violations.
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gridramsey",
    version,
    about = "Grid embeddings in sparse random graphs and their colourings"
)]
pub struct Cli {
    /// Worker threads (default: $GRIDRAMSEY_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print stage diagnostics to stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    /// Constant preset for the embedding chain.
    #[arg(long, global = true, default_value = "desk")]
    pub preset: Preset,

    /// Pin a chain constant, `key=value`; repeatable.
    #[arg(long = "override", global = true, value_parser = parse_override_arg)]
    pub overrides: Vec<(String, f64)>,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_override_arg(s: &str) -> std::result::Result<(String, f64), String> {
    parse_override(s).map_err(|e| e.to_string())
}

fn parse_host(s: &str) -> std::result::Result<HostSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<SizeMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct HostArgs {
    /// `gnp:n,p[,seed]`, `grid:s,t`, `complete:n`, `empty:n` or an edge-list file.
    #[arg(long, value_parser = parse_host)]
    pub host: HostSpec,

    /// Seed for hosts that do not carry one.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Density `p` (default: the model density, or the edge density of a file).
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a host graph in edge-list format.
    Gen {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Colour the edges of a host and report the colour classes.
    Colour {
        #[command(flatten)]
        host: HostArgs,
        /// random, greedy-antigrid, balanced-by-vertex or all-red.
        #[arg(long, default_value = "random")]
        strategy: String,
        /// Also count monochromatic 4-cycles.
        #[arg(long)]
        c4: bool,
        /// Write the majority colour class as an edge list.
        #[arg(long)]
        majority_out: Option<PathBuf>,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Check the random-graph properties on a host.
    VerifyProps {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 0.15)]
        delta: f64,
        /// δ for codegrees and neighbourhood edge counts.
        #[arg(long, default_value_t = 0.2)]
        delta_pairs: f64,
        /// Vertex pairs sampled for neighbourhood edge counts.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        /// Comma-separated property ids or `all`.
        #[arg(long, default_value = "all")]
        properties: String,
        /// Fail on unmet size preconditions instead of recording them.
        #[arg(long)]
        enforce: bool,
        /// Check codegrees of at most this many vertices.
        #[arg(long)]
        codegree_limit: Option<usize>,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Build a sparse regular partition and pick the densest regular pair.
    Regularity {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 2)]
        t0: usize,
        #[arg(long = "tmax", default_value_t = 64)]
        tmax: usize,
        #[arg(long, default_value_t = 4)]
        refine_rounds: usize,
        /// Sampled regularity budget per class pair.
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// Also select the dense pair for this α′.
        #[arg(long)]
        alpha_prime: Option<f64>,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Classify the edges between two vertex sets into R and Q.
    Classify {
        #[command(flatten)]
        host: HostArgs,
        /// Vertex ids of A, e.g. `0-99,150`.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        /// Use the bipartition of the host as (A, B).
        #[arg(long, conflicts_with_all = ["a", "b"])]
        bipartition: bool,
        #[arg(long)]
        eps_prime: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.01)]
        nu: f64,
        #[arg(long, default_value_t = 0.01)]
        gamma: f64,
        #[arg(long, default_value_t = 200)]
        dense_trials: usize,
        /// Classify at most this many edges.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Embed a square grid into a host.
    Embed {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 0.5)]
        alpha_prime: f64,
        /// `fixed:<s>` or `auto`.
        #[arg(long, default_value = "auto", value_parser = parse_mode)]
        mode: SizeMode,
        /// Take (A₁, B₁) from the host's bipartition instead of a partition.
        #[arg(long)]
        bipartition: bool,
        /// Colour the host first and embed into the majority class.
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long)]
        randomized: bool,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Decide G → (F)₂ by enumerating colourings.
    Arrows {
        /// Host: edge-list file or pattern.
        #[arg(long = "G")]
        g: String,
        /// Pattern: grid:s,t | cycle:k | complete:k | path:k.
        #[arg(long = "F")]
        f: String,
        /// Maximum colourings to test.
        #[arg(long)]
        budget: Option<u64>,
        /// Enumerate both members of each colour-swap pair.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Host size at which the random graph is Ramsey for the n×n grid.
    WitnessSize {
        /// Grid side; repeatable.
        #[arg(long, required = true)]
        n: Vec<u64>,
        #[arg(long, default_value_t = 0.5)]
        alpha_prime: f64,
        /// Density constant `C` (default `7/δ³` from the chain).
        #[arg(long = "C")]
        big_c: Option<f64>,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Run the colour-and-embed pipeline over several seeds.
    Experiment {
        /// JSON config; its fields override the flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_parser = parse_host)]
        host: Option<HostSpec>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<SizeMode>,
        /// Record wall time per trial.
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value = "-")]
        json: String,
    },
}

impl Cli {
    pub fn override_map(&self) -> BTreeMap<String, f64> {
        self.overrides.iter().cloned().collect()
    }
}

/// Thread count from the flag, then the environment.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(k) = flag {
        return if k == 0 {
            Err(Error::param("--threads must be positive"))
        } else {
            Ok(Some(k))
        };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(Error::param(format!(
                "{THREADS_ENV}={v:?} is not a positive integer"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::EdgeListParse { .. }
        | Error::TooLarge(_)
        | Error::Precondition(_) => EXIT_USAGE,
        _ => EXIT_ERROR,
    }
}

/// Runs a parsed command inside a pool of the requested size.
pub fn run(cli: Cli) -> i32 {
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_ERROR;
        }
    };
    match pool.install(|| commands::dispatch(&cli)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_embed_host_spec() {
        let cli = Cli::try_parse_from([
            "gridramsey",
            "embed",
            "--host",
            "gnp:1000,0.1,7",
            "--mode",
            "auto",
        ])
        .unwrap();
        match cli.command {
            Command::Embed { host, mode, .. } => {
                assert_eq!(
                    host.host,
                    HostSpec::Gnp {
                        n: 1000,
                        p: 0.1,
                        seed: Some(7)
                    }
                );
                assert_eq!(mode, SizeMode::Auto);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_override_is_a_usage_error() {
        let e = Cli::try_parse_from(["gridramsey", "--override", "zeta=1"]).unwrap_err();
        assert!(e.to_string().contains("unknown constant \"zeta\""), "{e}");
        let e = Cli::try_parse_from([
            "gridramsey",
            "witness-size",
            "--n",
            "10",
            "--override",
            "zeta=1",
        ])
        .unwrap_err();
        assert!(e.to_string().contains("unknown constant \"zeta\""), "{e}");
    }

    #[test]
    fn experiment_config_flag() {
        let cli = Cli::try_parse_from(["gridramsey", "experiment", "--config", "c.json"]).unwrap();
        assert!(matches!(
            cli.command,
            Command::Experiment {
                config: Some(_),
                ..
            }
        ));
    }
}
