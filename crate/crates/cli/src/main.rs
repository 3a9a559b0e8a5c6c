use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rocbound_cli::{load, render, CliError, Command, Overrides};

#[derive(Parser)]
#[command(name = "rocbound", version, about = "ROC lower bounds and energy-detector curves from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lower bound on the missed-detection probability versus false alarms.
    Bound(Common),
    /// Energy-detector ROC, optionally with Monte-Carlo estimates.
    EnergyRoc(Common),
    /// Equilibrium probability (Pfa = Pmd) of the bound versus SNR.
    Equilibrium(Common),
    /// Large-SNR series against the quadrature mutual information.
    Asymptotic(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Series depth for `asymptotic`.
    #[arg(long)]
    depth: Option<usize>,
    /// Add Monte-Carlo columns (energy-roc only).
    #[arg(long)]
    simulate: bool,
    /// Print the scenario with all defaults filled in and exit.
    #[arg(long)]
    dump_config: bool,
}

fn execute(cmd: Command, args: &Common) -> Result<(), CliError> {
    let ov = Overrides { seed: args.seed, trials: args.trials, depth: args.depth };
    let file = load(&args.scenario, ov)?;
    let text = if args.dump_config {
        file.resolve()?;
        file.to_json() + "\n"
    } else {
        render(cmd, &file, args.simulate)?
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match &cli.command {
        Cmd::Bound(a) => (Command::Bound, a),
        Cmd::EnergyRoc(a) => (Command::EnergyRoc, a),
        Cmd::Equilibrium(a) => (Command::Equilibrium, a),
        Cmd::Asymptotic(a) => (Command::Asymptotic, a),
    };
    match execute(cmd, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rocbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
