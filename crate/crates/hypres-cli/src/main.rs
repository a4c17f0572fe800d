//! `hypres`: resonances, counting functions, sharp constants and scattering
//! phases of radial perturbations of hyperbolic space, written as CSV or JSON.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use config::RunConfig;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "hypres", version, about = "Resonances and scattering phases for radial perturbations of hyperbolic space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Resonances within distance tmax of n/2.
    Resonances,
    /// Counting functions N_P(t) and N_0(t) on [0, tmax].
    Counting,
    /// Sharp constants B0, B1, B2 and their sum.
    Constants,
    /// Scattering phase on [0, xi-max] with the quadratic fit.
    Phase,
    /// Both sides of the relative counting formula at radius a.
    Relcount,
    /// Legendre P and Q at a single point.
    LegendreEval,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Resonances => "resonances",
            Command::Counting => "counting",
            Command::Constants => "constants",
            Command::Phase => "phase",
            Command::Relcount => "relcount",
            Command::LegendreEval => "legendre-eval",
        }
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("hypres: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config;
    if let Err(e) = cfg.validate() {
        return fail(2, e);
    }
    let result = match cli.command {
        Command::Resonances => commands::resonances(&cfg),
        Command::Counting => commands::counting(&cfg),
        Command::Constants => commands::constants(&cfg),
        Command::Phase => commands::phase(&cfg),
        Command::Relcount => commands::relcount(&cfg),
        Command::LegendreEval => commands::legendre_eval(&cfg),
    };
    let table = match result {
        Ok(t) => t,
        Err(hypres::Error::Config(m)) => return fail(2, m),
        Err(e) => return fail(3, e),
    };
    let bytes = match output::render(cli.command.name(), &cfg, &table) {
        Ok(b) => b,
        Err(e) => return fail(3, e),
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(2, format!("cannot write output: {e}")),
    }
}
