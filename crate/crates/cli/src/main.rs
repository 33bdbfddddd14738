mod cli;
mod commands;
mod errors;
mod output;
mod resolve;
mod sweep;

use clap::Parser;

use cli::{Cli, Command};

fn main() {
    let parsed = Cli::parse();
    let config = parsed.config.as_deref();
    let result = match &parsed.command {
        Command::Orbit(args) => commands::run_orbit(args, config),
        Command::FixedPoints(args) => commands::run_fixed_points(args, config),
        Command::Scan(args) => commands::run_scan(args, config),
        Command::Poincare(args) => commands::run_poincare(args, config),
        Command::Attractor(args) => commands::run_attractor(args, config),
        Command::Spectrum(args) => commands::run_spectrum(args, config),
        Command::Energy(args) => commands::run_energy(args, false, config),
        Command::Transfer(args) => commands::run_energy(args, true, config),
        Command::Eigen(args) => commands::run_eigen(args, config),
        Command::PairCorrelation(args) => commands::run_pair_correlation(args, config),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
