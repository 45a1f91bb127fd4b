use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use saddle_pressure_cli::{default_out, execute, Command};

#[derive(Parser, Debug)]
#[command(name = "spress", version, about = "Saddle-point pressure experiments")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to ./spress-<command>.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel stages.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let out = args.out.unwrap_or_else(|| default_out(args.command));
    match execute(args.command, &args.config, &out, args.seed) {
        Ok((bundle, emitted)) => {
            for row in &bundle.ledger {
                println!("{row}");
            }
            println!("wrote {} files to {}", emitted.files.len(), emitted.dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
