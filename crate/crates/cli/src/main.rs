use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tdcodes::channel::ChannelMode;
use tdcodes::codes::{Construction, DEFAULT_BUDGET};
use tdcodes_cli::{run, Command, RunConfig};

/// Codes correcting t tandem duplications of length l over Z_p.
#[derive(Parser)]
#[command(name = "tdcodes", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Redundancy of every bound for each n, as CSV.
    Bounds,
    /// List the codewords of each code.
    Enumerate,
    /// Check ball disjointness and decode every ball member.
    Verify,
    /// Monte Carlo channel simulation.
    Simulate,
    /// Decode words read from --input or stdin, one per line.
    Decode,
}

#[derive(ValueEnum, Clone, Copy)]
enum CodeArg {
    C1,
    C2,
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    /// Exactly --channel-t duplications per trial.
    Exact,
    /// A uniform number of duplications in 0..=channel-t.
    UpTo,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 2)]
    p: u8,
    #[arg(long, global = true, default_value_t = 1)]
    t: usize,
    #[arg(long, global = true, default_value_t = 1)]
    l: usize,
    #[arg(long, global = true, default_value_t = 5)]
    n_min: usize,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = CodeArg::C1)]
    construction: CodeArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true)]
    residue_table: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Skip the modulus checks when loading --residue-table.
    #[arg(long, global = true)]
    allow_invalid_table: bool,
    /// Duplications applied by the simulated channel (default: t).
    #[arg(long, global = true)]
    channel_t: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::UpTo)]
    mode: ModeArg,
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

fn config(cli: Cli) -> RunConfig {
    let c = cli.common;
    RunConfig {
        command: match cli.command {
            Cmd::Bounds => Command::Bounds,
            Cmd::Enumerate => Command::Enumerate,
            Cmd::Verify => Command::Verify,
            Cmd::Simulate => Command::Simulate,
            Cmd::Decode => Command::Decode,
        },
        p: c.p,
        t: c.t,
        dup_length: c.l,
        n_min: c.n_min,
        n_max: c.n_max.unwrap_or(c.n_min),
        construction: match c.construction {
            CodeArg::C1 => Construction::C1,
            CodeArg::C2 => Construction::C2,
        },
        seed: c.seed,
        trials: c.trials,
        budget: c.budget,
        residue_table: c.residue_table,
        output_path: c.out,
        allow_invalid_table: c.allow_invalid_table,
        channel_t: c.channel_t,
        channel_mode: match c.mode {
            ModeArg::Exact => ChannelMode::ExactlyT,
            ModeArg::UpTo => ChannelMode::UpToT,
        },
        input: c.input,
    }
}

fn main() -> ExitCode {
    let config = config(Cli::parse());
    let outcome = match run(&config) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match &config.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.csv) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.csv),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("check failed");
        ExitCode::FAILURE
    }
}
