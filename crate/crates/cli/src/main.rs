use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use topress_cli::config::{Experiment, ExperimentConfig};
use topress_cli::experiments::run;
use topress_cli::rows::write_rows;
use topress_cli::svg;

#[derive(Parser)]
#[command(name = "topress", version, about = "Pressure experiments on finite and discretized systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Random tilings of boxes against the residue bound
    LatticeCheck,
    /// Circle doubling with the half-arc partition
    Doubling,
    /// Leaking and admissible covers on the disk grid
    Leakage,
    /// Variational principle on random functional graphs
    FiniteVp,
    /// Full shift with a single-site potential
    Fullshift,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::LatticeCheck => Experiment::LatticeCheck,
            Command::Doubling => Experiment::Doubling,
            Command::Leakage => Experiment::Leakage,
            Command::FiniteVp => Experiment::FiniteVp,
            Command::Fullshift => Experiment::Fullshift,
        }
    }
}

#[derive(Args)]
struct Common {
    /// TOML file overriding the experiment defaults
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for the CSV and SVG outputs
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true)]
    n_max: Option<u64>,
    #[arg(long, global = true)]
    exact_limit: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write an SVG plot of rate against n
    #[arg(long, global = true)]
    svg: bool,
}

fn configure(experiment: Experiment, common: &Common) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_file(experiment, path)
            .with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentConfig::defaults(experiment),
    };
    if let Some(n) = common.n_max {
        cfg.n_max = n;
    }
    if let Some(e) = common.exact_limit {
        cfg.exact_limit = e;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let experiment = Experiment::from(cli.command);
    let cfg = configure(experiment, &cli.common)?;
    let report = run(&cfg)?;

    fs::create_dir_all(&cli.common.out).with_context(|| format!("creating {}", cli.common.out.display()))?;
    let csv_path = cli.common.out.join(&cfg.csv_name);
    let file = File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    write_rows(&report.rows, BufWriter::new(file))?;
    println!("wrote {} rows to {}", report.rows.len(), csv_path.display());
    if cli.common.svg {
        let svg_path = cli.common.out.join(&cfg.svg_name);
        fs::write(&svg_path, svg::render(experiment.id(), &report.rows))
            .with_context(|| format!("writing {}", svg_path.display()))?;
        println!("wrote {}", svg_path.display());
    }
    for line in &report.summary {
        println!("{line}");
    }
    for v in &report.verdicts {
        println!("{v}");
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
