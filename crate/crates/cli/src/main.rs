use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rnamatch::{
    align, best_fit_ends, derive_element_scores, exact_occurrences, load_scheme, oracle_best,
    parse_structure, phase1_pair_table, window_dp, AlignMode, RnaStructure, ScoringScheme, Window,
};
use rnamatch_cli::OutputRecord;

/// Compare RNA structures: exact structural pattern matching and
/// affine-gap structural alignment (global, fit, local).
#[derive(Parser)]
#[command(name = "rnamatch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print all positions where structure 1 occurs exactly in structure 2
    Exact(ExactArgs),
    /// Align both structures end to end
    Global(AlignArgs),
    /// Fit all of structure 1 into the best window of structure 2
    Fit(FitArgs),
    /// Align the best window of structure 1 to the best window of structure 2
    Local(AlignArgs),
    /// Brute-force reference score for tiny inputs (testing aid)
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args)]
struct InputArgs {
    /// First structure file (the pattern)
    #[arg(short = '1', value_name = "FILE")]
    first: PathBuf,
    /// Second structure file (the text)
    #[arg(short = '2', value_name = "FILE")]
    second: PathBuf,
    /// Warn about pairs outside AU/UA/GC/CG/GU/UG
    #[arg(long)]
    strict_pairs: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Args)]
struct AlignArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Scoring scheme file (key = value lines); defaults apply otherwise
    #[arg(long, value_name = "FILE")]
    scheme: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    align: AlignArgs,
    /// Also list every text column where the optimum is reached
    #[arg(long)]
    all_ends: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FILE")]
    scheme: Option<PathBuf>,
    /// Alignment mode
    #[arg(long)]
    mode: AlignMode,
}

struct CliError(String);

impl<E: std::fmt::Display> From<(E, &Path)> for CliError {
    fn from((e, path): (E, &Path)) -> CliError {
        CliError(format!("{}: {}", path.display(), e))
    }
}

fn read_structure(path: &Path, strict_pairs: bool) -> Result<RnaStructure, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| (e, path))?;
    let r = parse_structure(&text).map_err(|e| (e, path))?;
    if strict_pairs {
        for (i, j) in r.chemistry_violations() {
            eprintln!(
                "warning: {}: non-canonical pair ({}, {}) {}-{} in '{}'",
                path.display(),
                i,
                j,
                r.base(i),
                r.base(j),
                r.name()
            );
        }
    }
    Ok(r)
}

fn read_scheme(path: &Option<PathBuf>) -> Result<ScoringScheme, CliError> {
    match path {
        None => Ok(ScoringScheme::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| (e, p.as_path()))?;
            load_scheme(&text).map_err(|e| (e, p.as_path()).into())
        }
    }
}

fn run_exact(args: &ExactArgs) -> Result<ExitCode, CliError> {
    let r1 = read_structure(&args.input.first, args.input.strict_pairs)?;
    let r2 = read_structure(&args.input.second, args.input.strict_pairs)?;
    let hits = exact_occurrences(&r1, &r2).map_err(|e| (e, args.input.first.as_path()))?;
    for pos in &hits {
        println!("{}", pos);
    }
    Ok(if hits.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    input: InputArgs,
}

fn run_align(args: &AlignArgs, mode: AlignMode, all_ends: bool) -> Result<ExitCode, CliError> {
    let r1 = read_structure(&args.input.first, args.input.strict_pairs)?;
    let r2 = read_structure(&args.input.second, args.input.strict_pairs)?;
    let scheme = read_scheme(&args.scheme)?;
    let result =
        align(&r1, &r2, mode, &scheme).map_err(|e| (e, args.input.first.as_path()))?;
    let ends = if all_ends {
        let scores = derive_element_scores(&scheme, &r1, &r2);
        let pair_table = phase1_pair_table(&scores);
        let tables = window_dp(
            &scores,
            &pair_table,
            Window::full(r1.len()),
            Window::full(r2.len()),
            AlignMode::Fit,
        );
        Some(best_fit_ends(&tables))
    } else {
        None
    };
    let record = OutputRecord::new(&result, &r1, &r2, ends);
    match args.format {
        Format::Text => print!("{}", record.to_text()),
        Format::Tsv => print!("{}", record.to_tsv()),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(args: &OracleArgs) -> Result<ExitCode, CliError> {
    let r1 = read_structure(&args.input.first, args.input.strict_pairs)?;
    let r2 = read_structure(&args.input.second, args.input.strict_pairs)?;
    let scheme = read_scheme(&args.scheme)?;
    let score =
        oracle_best(&r1, &r2, args.mode, &scheme).map_err(|e| (e, args.input.first.as_path()))?;
    println!("{}", score);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Exact(args) => run_exact(args),
        Command::Global(args) => run_align(args, AlignMode::Global, false),
        Command::Fit(args) => run_align(&args.align, AlignMode::Fit, args.all_ends),
        Command::Local(args) => run_align(args, AlignMode::Local, false),
        Command::Oracle(args) => run_oracle(args),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("rnamatch: {}", msg);
            ExitCode::from(2)
        }
    }
}
