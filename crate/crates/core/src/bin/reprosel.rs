use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reprosel::commands::{self, SelectInput, StudyInput};
use reprosel::pipeline::AnalysisOptions;
use reprosel::synth::{Scenario, SyntheticStudySpec};
use reprosel::RankingMode;

#[derive(Parser)]
#[command(
    name = "reprosel",
    version,
    about = "Reproducibility matrices, scores and model selection from per-biomarker weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a study config and its JSONL weight files, reporting every problem.
    Validate(StudyArgs),
    /// Full pipeline: heatmaps, scores, report, winner weights, manifest.
    Run(AnalysisArgs),
    /// Score tables only.
    Scores(AnalysisArgs),
    /// Select a model from precomputed matrix CSVs.
    Select(SelectArgs),
    /// Write a seeded synthetic study (weights.jsonl + config.json).
    Gen(GenArgs),
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    config: PathBuf,
    /// JSONL weight file; repeat for several files.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Accept an incomplete model × view × mode grid.
    #[arg(long)]
    allow_missing: bool,
    /// Comma-separated thresholds replacing the config's.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<usize>>,
}

impl StudyArgs {
    fn input(&self) -> StudyInput {
        StudyInput {
            config: self.config.clone(),
            inputs: self.input.clone(),
            allow_missing: self.allow_missing,
            thresholds: self.thresholds.clone(),
        }
    }
}

#[derive(Args)]
struct AnalysisArgs {
    #[command(flatten)]
    study: StudyArgs,
    #[arg(long)]
    out: PathBuf,
    /// Min-max scale both summands before building the overall matrix.
    #[arg(long)]
    normalize_overall: bool,
    /// Rank biomarkers by signed weight instead of |w|.
    #[arg(long)]
    signed_ranking: bool,
}

impl AnalysisArgs {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            ranking: if self.signed_ranking {
                RankingMode::Signed
            } else {
                RankingMode::Absolute
            },
            normalize_overall: self.normalize_overall,
        }
    }
}

#[derive(Args)]
struct SelectArgs {
    /// Precomputed overall matrix CSV.
    #[arg(long, conflicts_with_all = ["view_average", "rank_correlation"], required_unless_present_all = ["view_average", "rank_correlation"])]
    overall: Option<PathBuf>,
    #[arg(long, requires = "rank_correlation")]
    view_average: Option<PathBuf>,
    #[arg(long, requires = "view_average")]
    rank_correlation: Option<PathBuf>,
    #[arg(long)]
    normalize_overall: bool,
    /// Directory for selection.json and its manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    RandomIndependent,
    PlantedConsensus,
    IdenticalModels,
    ScaledCopies,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "random-independent")]
    scenario: ScenarioArg,
    #[arg(long, default_value_t = 35)]
    n_r: usize,
    #[arg(long, default_value_t = 5)]
    models: usize,
    #[arg(long, default_value_t = 4)]
    views: usize,
    #[arg(long, default_value_t = 2)]
    modes: usize,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20")]
    thresholds: Vec<usize>,
    /// Planted model index (planted-consensus only).
    #[arg(long, default_value_t = 0)]
    planted: usize,
    /// Fraction of top-k shared with the planted model (planted-consensus only).
    #[arg(long, default_value_t = 0.6)]
    consensus: f64,
}

impl GenArgs {
    fn spec(&self) -> SyntheticStudySpec {
        let scenario = match self.scenario {
            ScenarioArg::RandomIndependent => Scenario::RandomIndependent,
            ScenarioArg::PlantedConsensus => Scenario::PlantedConsensus {
                planted: self.planted,
                consensus: self.consensus,
            },
            ScenarioArg::IdenticalModels => Scenario::IdenticalModels,
            ScenarioArg::ScaledCopies => Scenario::ScaledCopies,
        };
        SyntheticStudySpec {
            seed: self.seed,
            n_r: self.n_r,
            n_models: self.models,
            n_views: self.views,
            n_modes: self.modes,
            thresholds: self.thresholds.clone(),
            runs_per_cell: self.runs,
            scenario,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> reprosel::Result<bool> {
    match command {
        Command::Validate(args) => {
            let outcome = commands::validate(&args.input())?;
            for w in &outcome.diagnostics.warnings {
                eprintln!("warning: {w}");
            }
            for e in &outcome.diagnostics.errors {
                eprintln!("error: {e}");
            }
            eprintln!("{}", outcome.summary());
            Ok(outcome.diagnostics.is_ok())
        }
        Command::Run(args) => {
            let outcome = commands::run(&args.study.input(), args.options(), &args.out)?;
            let a = &outcome.analysis;
            for m in &a.modes {
                eprintln!(
                    "mode {}: winner {}{}",
                    m.mode,
                    m.selection.winner,
                    if m.selection.tie { " (tie)" } else { "" }
                );
            }
            eprintln!(
                "overall winner {}{}; modes agree: {}; {} files in {}",
                a.selection.winner,
                if a.selection.tie { " (tie)" } else { "" },
                a.modes_agree,
                outcome.outputs.len() + 1,
                args.out.display()
            );
            Ok(true)
        }
        Command::Scores(args) => {
            commands::scores(&args.study.input(), args.options(), &args.out)?;
            eprintln!("scores written to {}", args.out.display());
            Ok(true)
        }
        Command::Select(args) => {
            let input = match (args.overall, args.view_average, args.rank_correlation) {
                (Some(o), _, _) => SelectInput::Overall(o),
                (None, Some(view_average), Some(rank_correlation)) => SelectInput::Parts {
                    view_average,
                    rank_correlation,
                },
                _ => unreachable!("clap enforces the argument groups"),
            };
            let outcome = commands::select(&input, args.normalize_overall, args.out.as_deref())?;
            let s = &outcome.selection;
            eprintln!("winner {}{}", s.winner, if s.tie { " (tie)" } else { "" });
            Ok(true)
        }
        Command::Gen(args) => {
            let outcome = commands::gen(&args.spec(), &args.out)?;
            eprintln!(
                "wrote {} records to {}",
                outcome.records,
                outcome.weights.display()
            );
            Ok(true)
        }
    }
}
