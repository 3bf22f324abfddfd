use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use minishogi_reach::codec::{rank, total_space, unrank};
use minishogi_reach::estimator::{self, CiMethod, SampleConfig};
use minishogi_reach::legality::{classify, Rejection, StageVerdict};
use minishogi_reach::oracle::{forward_enumerate, verify};
use minishogi_reach::retro::{HeuristicParams, SearchBudget};
use minishogi_reach::rules::{from_sfen, Position};
use minishogi_reach::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

/// Count, index and sample the Minishogi candidate space.
#[derive(Parser)]
#[command(name = "minishogi-reach", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the size of the candidate space.
    Count {
        #[arg(long)]
        json: bool,
    },
    /// Print the rank of a position (SFEN from arguments or stdin).
    Rank {
        sfen: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the position with the given rank.
    Unrank {
        rank: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the legality funnel on one position.
    Check {
        sfen: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Estimate the number of reachable positions by sampling.
    Estimate {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// Progress file; an existing file is resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        batch_size: u64,
        #[arg(long, value_enum, default_value_t = Interval::Wald)]
        ci: Interval,
        #[command(flatten)]
        search: SearchArgs,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate forward from the start and cross-check every position.
    OracleVerify {
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the enumerated positions as sorted SFEN lines.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Node expansion limit per search.
    #[arg(long = "budget", default_value_t = SearchBudget::default().max_nodes)]
    max_nodes: u64,
    #[arg(long)]
    max_open: Option<usize>,
    /// Heuristic weights a,b,c,d.
    #[arg(long, value_delimiter = ',', default_values_t = [10.0, 10.0, 1.0, 1.0])]
    weights: Vec<f64>,
}

impl SearchArgs {
    fn resolve(&self) -> Result<(HeuristicParams, SearchBudget), Error> {
        let [a, b, c, d] = self.weights[..] else {
            return Err(Error::Config("expected four weights".into()));
        };
        Ok((
            HeuristicParams::new(a, b, c, d)?,
            SearchBudget::new(self.max_nodes, self.max_open)?,
        ))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Interval {
    Wald,
    Wilson,
}

enum Failure {
    Usage(String),
    Verification,
    Exhausted,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_sfen(words: &[String]) -> Result<Position, Failure> {
    let text = if words.is_empty() {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        words.join(" ")
    };
    Ok(from_sfen(text.trim())?)
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn verdict_json(v: &StageVerdict) -> serde_json::Value {
    let mut out = json!({ "verdict": v.to_string(), "stage": v.stage_reached() });
    match v {
        StageVerdict::Rejected(Rejection::Reachability { max_ply }) => {
            out["max_ply"] = json!(max_ply)
        }
        StageVerdict::Exhausted { nodes_expanded } => out["nodes_expanded"] = json!(nodes_expanded),
        _ => {}
    }
    out
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Count { json } => {
            if json {
                print_json(&json!({ "total": total_space() }));
            } else {
                println!("{}", total_space());
            }
        }
        Command::Rank { sfen, json } => {
            let r = rank(&read_sfen(&sfen)?)?.get();
            if json {
                print_json(&json!({ "rank": r }));
            } else {
                println!("{r}");
            }
        }
        Command::Unrank { rank, json } => {
            let pos = unrank(rank)?;
            if json {
                print_json(&json!({ "sfen": pos.to_string() }));
            } else {
                println!("{pos}");
            }
        }
        Command::Check { sfen, search, json } => {
            let pos = read_sfen(&sfen)?;
            let (params, budget) = search.resolve()?;
            let v = classify(&pos, &params, &budget);
            if json {
                print_json(&verdict_json(&v));
            } else {
                println!("{v}");
            }
            if matches!(v, StageVerdict::Exhausted { .. }) {
                return Err(Failure::Exhausted);
            }
        }
        Command::Estimate {
            samples,
            seed,
            workers,
            checkpoint,
            batch_size,
            ci,
            search,
            report,
            json,
        } => {
            let (params, budget) = search.resolve()?;
            let mut config = SampleConfig::new(samples, seed);
            if let Some(w) = workers {
                config.worker_count = w;
            }
            config.checkpoint_path = checkpoint;
            config.batch_size = batch_size;
            config.params = params;
            config.budget = budget;
            config.ci_method = match ci {
                Interval::Wald => CiMethod::Wald,
                Interval::Wilson => CiMethod::Wilson,
            };
            let result = estimator::run(&config)?;
            if let Some(path) = report {
                let mut w = BufWriter::new(File::create(path)?);
                serde_json::to_writer_pretty(&mut w, &result).map_err(io::Error::from)?;
                writeln!(w)?;
            }
            if json {
                print_json(&result);
            } else {
                print!("{}", result.render_table());
            }
            if result.funnel.exhausted > 0 {
                eprintln!(
                    "error: {} searches exhausted their budget",
                    result.funnel.exhausted
                );
                return Err(Failure::Exhausted);
            }
        }
        Command::OracleVerify {
            depth,
            search,
            dump,
            json,
        } => {
            let (params, budget) = search.resolve()?;
            let set = forward_enumerate(depth);
            if let Some(path) = dump {
                set.dump(BufWriter::new(File::create(path)?))?;
            }
            let violations = verify(&set, &params, &budget);
            if json {
                let listed: Vec<_> = violations
                    .iter()
                    .map(|v| json!({ "sfen": v.position.to_string(), "reason": v.reason }))
                    .collect();
                print_json(&json!({
                    "depth": depth,
                    "layer_sizes": set.layer_sizes(),
                    "total": set.len(),
                    "violations": listed,
                }));
            } else {
                println!("{:<6} | {:>12}", "Ply", "New");
                println!("{:-<6}-+-{:-<12}", "", "");
                for (d, n) in set.layer_sizes().iter().enumerate() {
                    println!("{d:<6} | {n:>12}");
                }
                println!(
                    "total {} positions, {} violations",
                    set.len(),
                    violations.len()
                );
                for v in &violations {
                    println!("{}  {}", v.position, v.reason);
                }
            }
            if !violations.is_empty() {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFICATION),
        Err(Failure::Exhausted) => ExitCode::from(EXIT_EXHAUSTED),
    }
}
