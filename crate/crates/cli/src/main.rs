use clap::{Parser, Subcommand, ValueEnum};
use qkm_cli::{
    cmd_counts, cmd_expand, cmd_free_energy, cmd_omega, cmd_solve, cmd_sweep, cmd_verify, write_artifact, CliError, Outcome,
    Overrides, RunConfig, Suite, SweepKind,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "qkm", about = "Quartic Kontsevich model: graph counts, exact forms, recursion checks and curve sweeps")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format for table commands.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; defaults to the configured output directory, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count table at d = 1, e = 1/2.
    Counts,
    /// Run a verification suite: propT, omega-poly, pert-vs-exact, btr, critical.
    Verify { suite: String },
    /// Sweep a curve family over its λ grid: beta, cuts, topology.
    Sweep { what: String },
    /// Exact series coefficients of a target.
    Expand {
        target: String,
        /// Boundary cycles for target `correlator`, e.g. "1/2,3/2|1/2,1/2".
        #[arg(long)]
        cycles: Option<String>,
    },
    /// Solve the spectral curve of the configured model.
    Solve,
    /// Evaluate a form at points "re,im;re,im".
    Omega {
        kind: String,
        #[arg(long)]
        at: String,
    },
    /// Planar free energy of a one-value model.
    FreeEnergy,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Counts => "counts",
        Command::Verify { .. } => "verify",
        Command::Sweep { .. } => "sweep",
        Command::Expand { .. } => "expand",
        Command::Solve => "solve",
        Command::Omega { .. } => "omega",
        Command::FreeEnergy => "free-energy",
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Argument("--config is required".into()))?;
    let overrides = Overrides { lambda: cli.lambda, order: cli.order, seed: cli.seed };
    let cfg = RunConfig::load(path, &overrides)?;
    let Outcome { artifact, pass } = match &cli.command {
        Command::Counts => cmd_counts(&cfg)?,
        Command::Verify { suite } => cmd_verify(&cfg, Suite::parse(suite)?),
        Command::Sweep { what } => cmd_sweep(&cfg, SweepKind::parse(what)?)?,
        Command::Expand { target, cycles } => cmd_expand(&cfg, target, cycles.as_deref())?,
        Command::Solve => cmd_solve(&cfg)?,
        Command::Omega { kind, at } => cmd_omega(&cfg, kind, at)?,
        Command::FreeEnergy => cmd_free_energy(&cfg)?,
    };
    let hash = cfg.hash();
    let artifact = if cli.format == Some(Format::Json) { artifact.into_json(&hash) } else { artifact };
    let text = artifact.render(&hash)?;
    let target = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir().map(|d| d.join(format!("{}.{}", command_name(&cli.command), artifact.extension()))));
    match target {
        Some(p) => write_artifact(&text, &p)?,
        None => print!("{text}"),
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("qkm: {e}");
            ExitCode::FAILURE
        }
    }
}
