use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weakfan_cli::render::{render_json, render_text};
use weakfan_cli::{parse, resolve, run_pipeline, DegenerationDescription, Stages};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "weakfan", version, about = "Exact checks for nilpotent cones, weak fans and nilpotent orbits on K3-type lattices")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Weight filtration center, overriding the description.
    #[arg(long, global = true)]
    center: Option<i32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on a degeneration description.
    Validate { file: PathBuf },
    /// Run every check on the built-in two-ray example on the K3 lattice.
    #[command(name = "paper-example")]
    TwoRayExample,
    /// Nilpotency index and Kulikov type of each operator.
    Classify { file: PathBuf },
    /// Orbit condition and limiting mixed Hodge structure for each period vector.
    OrbitCheck { file: PathBuf },
}

fn load(path: &PathBuf) -> Result<DegenerationDescription, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse(&text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (description, stages) = match &cli.command {
        Command::Validate { file } => (load(file), Stages::All),
        Command::TwoRayExample => (Ok(DegenerationDescription::two_ray_example()), Stages::All),
        Command::Classify { file } => (load(file), Stages::Classify),
        Command::OrbitCheck { file } => (load(file), Stages::Orbits),
    };
    let mut description = match description {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(c) = cli.center {
        description.center = c;
    }
    let resolved = match resolve(&description) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run_pipeline(&resolved, stages);
    match cli.format {
        Format::Text => print!("{}", render_text(&report)),
        Format::Json => println!("{}", render_json(&report)),
    }
    for f in report.failures() {
        eprintln!("fail: {f}");
    }
    if report.overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
