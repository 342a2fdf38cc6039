mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;
use sha2::{Digest, Sha256};

use commands::{Output, RunContext, RunError};

/// Runs one lacelab experiment described by a TOML config.
#[derive(Parser, Debug)]
#[command(name = "lacelab", version)]
struct Cli {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Directory for cached SAW enumerations.
    #[arg(long, env = "LACELAB_CACHE_DIR", default_value = ".lacelab-cache")]
    cache_dir: PathBuf,
    /// Report directory; overrides `output_dir` in the config.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let cfg = match config::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error at {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let dir = cli.output.clone().or(cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let mut out = match Output::new(dir) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot create output directory: {e}");
            return ExitCode::from(1);
        }
    };
    let mut ctx = RunContext { seed: cfg.seed, cache_dir: &cli.cache_dir, cache_hit: None };
    let result = commands::run(&cfg.params, &mut ctx, &mut out);
    let hash: String = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    let manifest = json!({
        "command": cfg.command.name(),
        "config": cli.config.display().to_string(),
        "config_sha256": hash,
        "seed": cfg.seed,
        "lacelab_version": env!("CARGO_PKG_VERSION"),
        "code_version": lacelab::CODE_VERSION,
        "threads": rayon::current_num_threads(),
        "cache_dir": cli.cache_dir.display().to_string(),
        "cache_hit": ctx.cache_hit,
        "files": out.files,
        "status": match &result { Ok(()) => "ok".to_string(), Err(e) => e.to_string() },
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    let manifest = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    if let Err(e) = std::fs::write(out.dir.join("manifest.json"), manifest) {
        eprintln!("error: cannot write manifest: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ RunError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
