//! `gbgc` command-line front end.
//!
//! Exit codes: 0 on success, 1 on input or per-graph failures, 2 on usage
//! errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use gbgc::{Ablation, CoarsenConfig, EvalConfig, LaplacianKind, Mode, SdMode};

#[derive(Debug, Parser)]
#[command(name = "gbgc", version, about = "Granular-ball graph coarsening")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coarsen every graph of the input and write mapping, superedges and report.
    Coarsen(CommonArgs),
    /// Recompute spectral distance and Rayleigh diagnostics for an existing mapping.
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        /// Mapping produced by `coarsen` [default: <output>/mapping.jsonl]
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Time coarsening on synthetic Erdős–Rényi graphs.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Node counts to benchmark.
        #[arg(long, value_delimiter = ',', default_values_t = gbgc::pipeline::BENCH_SIZES)]
        sizes: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tudataset,
    Edgelist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Adaptive,
    Ratio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AblationArg {
    None,
    NoInit,
    NoSplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LaplacianArg {
    Combinatorial,
    Normalized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SdModeArg {
    Projected,
    Unweighted,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Edge-list file or TUDataset directory.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
    /// TUDataset name prefix [default: the input directory's name]
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Adaptive)]
    mode: ModeArg,
    /// Target ratio in (0, 1); required with `--mode ratio`.
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long, value_enum, default_value_t = AblationArg::None)]
    ablation: AblationArg,
    #[arg(long, value_enum, default_value_t = LaplacianArg::Combinatorial)]
    laplacian: LaplacianArg,
    #[arg(long = "sd-mode", value_enum, default_value_t = SdModeArg::Projected)]
    sd_mode: SdModeArg,
    /// Output directory.
    #[arg(long, default_value = "gbgc-out")]
    output: PathBuf,
    /// Parallel width for per-graph work.
    #[arg(long, env = "GBGC_JOBS", default_value_t = gbgc::par::default_jobs(),
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    jobs: usize,
    /// Skip spectral distance.
    #[arg(long = "skip-sd")]
    skip_sd: bool,
}

/// Validated settings shared by all subcommands.
#[derive(Debug)]
pub struct Invocation {
    pub input: Option<PathBuf>,
    pub format: Format,
    pub name: Option<String>,
    pub coarsen: CoarsenConfig,
    pub eval: EvalConfig,
    pub output: PathBuf,
    pub jobs: usize,
    pub skip_sd: bool,
}

impl CommonArgs {
    fn validate(self) -> Result<Invocation, String> {
        let mode = match (self.mode, self.ratio) {
            (ModeArg::Adaptive, None) => Mode::Adaptive,
            (ModeArg::Adaptive, Some(_)) => return Err("--ratio is only valid with --mode ratio".into()),
            (ModeArg::Ratio, None) => return Err("--mode ratio requires --ratio".into()),
            (ModeArg::Ratio, Some(r)) if r > 0.0 && r < 1.0 => Mode::Ratio(r),
            (ModeArg::Ratio, Some(r)) => return Err(format!("--ratio {r} must lie strictly between 0 and 1")),
        };
        let ablation = match self.ablation {
            AblationArg::None => Ablation::None,
            AblationArg::NoInit => Ablation::NoInit,
            AblationArg::NoSplit => Ablation::NoSplit,
        };
        let laplacian = match self.laplacian {
            LaplacianArg::Combinatorial => LaplacianKind::Combinatorial,
            LaplacianArg::Normalized => LaplacianKind::Normalized,
        };
        let sd_mode = match self.sd_mode {
            SdModeArg::Projected => SdMode::Projected,
            SdModeArg::Unweighted => SdMode::Unweighted,
        };
        Ok(Invocation {
            input: self.input,
            format: self.format,
            name: self.name,
            coarsen: CoarsenConfig {
                mode,
                ablation,
                init_ball_target: None,
            },
            eval: EvalConfig {
                laplacian,
                sd_mode,
                ..EvalConfig::default()
            },
            output: self.output,
            jobs: self.jobs,
            skip_sd: self.skip_sd,
        })
    }
}

fn usage_error(message: String) -> ! {
    Cli::command()
        .error(clap::error::ErrorKind::ArgumentConflict, message)
        .exit()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let validate = |common: CommonArgs, needs_input: bool| {
        if needs_input && common.input.is_none() {
            usage_error("--input is required".into());
        }
        common.validate().unwrap_or_else(|m| usage_error(m))
    };
    let result = match cli.command {
        Command::Coarsen(common) => commands::run_coarsen(&validate(common, true)),
        Command::Evaluate { common, mapping } => {
            let inv = validate(common, true);
            let mapping = mapping.unwrap_or_else(|| inv.output.join(gbgc::io::MAPPING_FILE));
            commands::run_evaluate(&inv, &mapping)
        }
        Command::Bench { common, sizes } => commands::run_bench(&validate(common, false), &sizes),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
