use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use coopdecay::config::parse_config;
use coopdecay::run::{error_record, run};
use coopdecay::Error;

/// Run one cooperative-decay experiment described by a config file.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Experiment config (`key = value` lines).
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; overrides `threads` in the config and COOPDECAY_THREADS.
    #[arg(long)]
    threads: Option<usize>,
}

fn env_threads() -> Result<Option<usize>, Error> {
    match std::env::var("COOPDECAY_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Error::Validation {
            field: "COOPDECAY_THREADS".into(),
            reason: format!("not a thread count: {v:?}"),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = cli.out.clone();
    let result = (|| {
        let text = std::fs::read_to_string(&cli.config).map_err(|e| Error::Io {
            path: cli.config.clone(),
            source: e,
        })?;
        let mut config = parse_config(&text)?;
        if let Some(seed) = cli.seed {
            config.seed = seed;
        }
        let threads = match cli.threads.or(config.threads) {
            Some(t) => Some(t),
            None => env_threads()?,
        };
        if threads == Some(0) {
            return Err(Error::Validation {
                field: "threads".into(),
                reason: "threads must be ≥ 1".into(),
            });
        }
        config.threads = threads;
        let dir = out
            .get_or_insert_with(|| config.output_dir.clone().unwrap_or_else(|| "out".into()))
            .clone();
        run(&config, &dir, threads)
    })();

    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let record = error_record(&err);
            eprintln!("{record}");
            if let Some(dir) = &out {
                if std::fs::create_dir_all(dir).is_ok() {
                    let _ = std::fs::write(dir.join("error.json"), format!("{record:#}\n"));
                }
            }
            ExitCode::FAILURE
        }
    }
}
