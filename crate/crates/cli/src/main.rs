//! `diffspn` command-line entry point.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 when a description or
//! argument fails validation or a file cannot be read. Machine output goes
//! to stdout and diagnostics to stderr.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diffspn::exhaustive::with_workers;
use diffspn::{parse_description, parse_difference, CipherDescription, KeyAssignment, Objective, SBox4};

#[derive(Parser)]
#[command(name = "diffspn", version, about = "Exact differential analysis of 16-bit SPN ciphers")]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "DIFFSPN_JOBS", default_value_t = 0)]
    jobs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    out: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Difference distribution table of an S-box.
    Ddt {
        /// S-box id from --desc, or 16 hex digits.
        #[arg(long)]
        sbox: Option<String>,
        #[arg(long)]
        desc: Option<PathBuf>,
    },
    /// Exhaustive block differential scan.
    Scan {
        #[arg(long)]
        desc: PathBuf,
        /// Defaults to the description's round count.
        #[arg(long)]
        rounds: Option<usize>,
        /// List every (a, b) with at least this count instead of the maxima.
        #[arg(long)]
        threshold: Option<u32>,
        /// Also export every entry with at least this count (8 when given
        /// without a value, the library default).
        #[arg(long, num_args = 0..=1, default_missing_value = "8")]
        floor: Option<u32>,
        #[arg(long, value_parser = parse_key)]
        key: Option<Vec<u16>>,
    },
    /// Minimum active S-boxes and best differential trail.
    Trails {
        #[arg(long)]
        desc: PathBuf,
        #[arg(long)]
        rounds: usize,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::BestProb)]
        objective: ObjectiveArg,
        #[arg(long)]
        enumerate_all_optimal: bool,
        /// Cap for --enumerate-all-optimal.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Re-count one differential by direct encryption.
    Verify {
        #[arg(long)]
        desc: PathBuf,
        /// Input difference: 0x0424 or "0000, 0100, 0010, 0100".
        #[arg(long, value_parser = parse_diff)]
        a: u16,
        #[arg(long, value_parser = parse_diff)]
        b: u16,
        /// Average over this many splitmix64 keys instead of one fixed key.
        #[arg(long)]
        keys: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Fixed key words (comma-separated hex); zero key by default.
        #[arg(long, value_parser = parse_key, conflicts_with = "keys")]
        key: Option<Vec<u16>>,
    },
    /// Table reproduction bundle.
    Report {
        #[arg(long)]
        desc: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_rounds: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    MinActive,
    BestProb,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::MinActive => Objective::MinActive,
            ObjectiveArg::BestProb => Objective::BestProb,
        }
    }
}

fn parse_diff(s: &str) -> Result<u16, String> {
    parse_difference(s).map_err(|e| e.to_string())
}

fn parse_key(s: &str) -> Result<Vec<u16>, String> {
    s.split(',')
        .map(|w| {
            let w = w.trim();
            let w = w.strip_prefix("0x").or_else(|| w.strip_prefix("0X")).unwrap_or(w);
            u16::from_str_radix(w, 16).map_err(|_| format!("invalid key word `{w}`"))
        })
        .collect()
}

type Failure = String;

fn load(path: &PathBuf) -> Result<CipherDescription, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_description(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn key_for(desc: &CipherDescription, words: Option<Vec<u16>>) -> Result<KeyAssignment, Failure> {
    match words {
        None => Ok(desc.zero_key()),
        Some(w) if w.len() == desc.key_slots() => Ok(KeyAssignment(w)),
        Some(w) => Err(format!("key has {} words, description needs {}", w.len(), desc.key_slots())),
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let fmt = cli.out;
    let err = |e: diffspn::Error| e.to_string();
    match cli.command {
        Command::Ddt { sbox, desc } => {
            let desc = desc.as_ref().map(load).transpose()?;
            let sboxes: Vec<SBox4> = match (&sbox, &desc) {
                (Some(id), Some(d)) if d.sbox(id).is_some() => vec![d.sbox(id).unwrap().clone()],
                (Some(s), _) if s.len() == 16 => {
                    vec![SBox4::from_hex(s.clone(), s).ok_or(format!("`{s}` is not a 4-bit permutation"))?]
                }
                (Some(s), _) => return Err(format!("unknown S-box `{s}`")),
                (None, Some(d)) => d.sboxes().cloned().collect(),
                (None, None) => return Err("ddt needs --sbox or --desc".into()),
            };
            Ok(render::ddt(&sboxes, fmt))
        }
        Command::Scan {
            desc,
            rounds,
            threshold,
            floor,
            key,
        } => {
            let desc = load(&desc)?;
            let key = key_for(&desc, key)?;
            let desc = desc.with_rounds(rounds.unwrap_or(desc.rounds()));
            with_workers(cli.jobs, || render::scan(&desc, &key, threshold, floor, fmt)).map_err(err)
        }
        Command::Trails {
            desc,
            rounds,
            objective,
            enumerate_all_optimal,
            limit,
        } => {
            let desc = load(&desc)?;
            let limit = enumerate_all_optimal.then_some(limit);
            with_workers(cli.jobs, || render::trails(&desc, rounds, objective.into(), limit, fmt)).map_err(err)
        }
        Command::Verify {
            desc,
            a,
            b,
            keys,
            seed,
            key,
        } => {
            let desc = load(&desc)?;
            let result = match keys {
                Some(n) => with_workers(cli.jobs, || diffspn::verify_keyed(&desc, a, b, n, seed)),
                None => diffspn::verify_exhaustive(&desc, &key_for(&desc, key)?, a, b),
            }
            .map_err(err)?;
            Ok(render::verification(&result, fmt))
        }
        Command::Report { desc, max_rounds } => {
            let desc = load(&desc)?;
            let bundle = with_workers(cli.jobs, || diffspn::report::build_report(&desc, max_rounds)).map_err(err)?;
            Ok(render::report(&bundle, fmt))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version exit 0, everything else 2
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
