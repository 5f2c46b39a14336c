use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use ecs_lab::lab::{load_config, random_model_sweep, run_suite, Report, Task};
use ecs_lab::scalar::Mode;

#[derive(Parser)]
#[command(name = "ecs-lab", version, about = "Verify curvature identities and symmetries of Roter-type ECS metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Arithmetic mode; overrides the config.
    #[arg(long)]
    mode: Option<Mode>,
    /// Seed for sampling; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text report.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task listed in the config.
    Run(ConfigArgs),
    Verify(ConfigArgs),
    Classify(ConfigArgs),
    Homogeneity(ConfigArgs),
    Holonomy(ConfigArgs),
    Functions(ConfigArgs),
    BasisDemo(ConfigArgs),
    /// Check random admissible models.
    Sweep {
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Comma-separated dimensions in 4..=8.
        #[arg(long, default_value = "4,5", value_delimiter = ',')]
        dims: Vec<usize>,
        /// Sample points per model.
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(report: &Report, common: &Common) -> Result<(), String> {
    if common.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(path) = &common.out {
        std::fs::write(path, report.to_json() + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (report, common) = match cli.command {
        Command::Sweep {
            count,
            dims,
            points,
            common,
        } => {
            if let Some(bad) = dims.iter().find(|d| !(4..=8).contains(*d)) {
                eprintln!("error: dimension {bad} is outside 4..=8");
                return ExitCode::from(2);
            }
            let mode = common.mode.unwrap_or(Mode::Exact);
            (random_model_sweep(count, &dims, common.seed.unwrap_or(1), mode, points), common)
        }
        Command::Run(args)
        | Command::Verify(args)
        | Command::Classify(args)
        | Command::Homogeneity(args)
        | Command::Holonomy(args)
        | Command::Functions(args)
        | Command::BasisDemo(args) => {
            let task = std::env::args().nth(1).and_then(|s| s.parse::<Task>().ok());
            let mut config = match load_config(&args.config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", args.config.display());
                    return ExitCode::from(2);
                }
            };
            if let Some(task) = task {
                config.tasks = vec![task];
            }
            if let Some(mode) = args.common.mode {
                config.mode = mode;
            }
            if let Some(seed) = args.common.seed {
                config.seed = seed;
            }
            (run_suite(&config), args.common)
        }
    };
    if let Err(e) = emit(&report, &common) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprintln!("runtime: {:.3} s", start.elapsed().as_secs_f64());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
