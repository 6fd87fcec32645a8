use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use halpern::cli::{cmd_certify, cmd_path, cmd_print_config, cmd_run, Overrides};

#[derive(Parser)]
#[command(
    name = "halpern",
    version,
    about = "Anchored iterations for nonexpansive-type maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured scheme and write its trace as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the parsed config as TOML and exit.
        #[arg(long)]
        print_config: bool,
    },
    /// Check the operator-class inequalities on random samples.
    Certify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Trace the Browder path z_t for the configured t values.
    Path {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            print_config,
        } => {
            let ov = Overrides {
                out,
                seed,
                workers: None,
            };
            if print_config {
                cmd_print_config(&config, &ov).map(|text| {
                    print!("{text}");
                    ExitCode::SUCCESS
                })
            } else {
                cmd_run(&config, &ov).map(|summary| {
                    println!("{summary}");
                    ExitCode::SUCCESS
                })
            }
        }
        Command::Certify {
            config,
            out,
            seed,
            workers,
        } => {
            let ov = Overrides {
                out,
                seed,
                workers: Some(workers),
            };
            cmd_certify(&config, &ov).map(|report| {
                let mut stdout = std::io::stdout().lock();
                let _ = report.write(&mut stdout);
                if report.all_passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            })
        }
        Command::Path { config, out } => {
            let ov = Overrides {
                out,
                seed: None,
                workers: None,
            };
            cmd_path(&config, &ov).map(|(rows, output)| {
                println!("{} path points written to {}", rows.len(), output.display());
                ExitCode::SUCCESS
            })
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
