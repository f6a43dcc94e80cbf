use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rwlab::config::RunConfig;
use rwlab::harness::CheckName;
use rwlab::{commands, mesh, RunError};

/// Space-like surfaces in Robertson-Walker spacetimes: meshes, predicate
/// checks and the verification suite.
#[derive(Parser)]
#[command(name = "rwlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dotted-path override, e.g. `grid.n_u=64` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a family on a grid and write a CSV mesh plus metadata.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Mesh path (default mesh.csv).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Keep only three coordinates, e.g. `t,x,y`.
        #[arg(long)]
        project: Option<String>,
    },
    /// Run residual predicates on a configured family.
    Check {
        #[command(flatten)]
        common: Common,
        /// Report path (default check_report.json).
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Report path (default verify_report.json).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Restrict to these checks (repeatable).
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<CheckName>,
        /// Replace every upper-bound tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// List families, function kinds and check names.
    ListFamilies,
}

fn load(common: &Common, extra: Vec<String>) -> Result<RunConfig, RunError> {
    let mut overrides = common.set.clone();
    overrides.extend(extra);
    RunConfig::load(common.config.as_deref(), &overrides)
}

fn quoted(p: &std::path::Path) -> String {
    serde_json::to_string(&p.to_string_lossy()).expect("string serializes")
}

fn run(cli: Cli) -> Result<u8, RunError> {
    if let Ok(n) = std::env::var("RWLAB_THREADS") {
        let n: usize = n
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| RunError::Config(format!("RWLAB_THREADS must be a positive integer, got `{n}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| RunError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Generate { common, output, project } => {
            let extra = output.iter().map(|p| format!("output.mesh={}", quoted(p))).collect();
            let cfg = load(&common, extra)?;
            let projection = project.as_deref().map(mesh::parse_projection).transpose()?;
            commands::generate(&cfg, projection)
        }
        Command::Check {
            common,
            output,
            tolerance,
        } => {
            let mut extra: Vec<String> = output.iter().map(|p| format!("output.report={}", quoted(p))).collect();
            extra.extend(tolerance.map(|t| format!("tolerance={t:e}")));
            commands::check(&load(&common, extra)?)
        }
        Command::Verify {
            common,
            output,
            checks,
            tolerance,
        } => {
            let mut extra: Vec<String> = output.iter().map(|p| format!("output.report={}", quoted(p))).collect();
            extra.extend(tolerance.map(|t| format!("tolerance={t:e}")));
            if !checks.is_empty() {
                let names: Vec<&str> = checks.iter().map(|c| c.as_str()).collect();
                extra.push(format!("checks={}", serde_json::to_string(&names).expect("names serialize")));
            }
            commands::verify(&load(&common, extra)?)
        }
        Command::ListFamilies => {
            print!("{}", commands::list_families());
            Ok(rwlab::exit::PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
