use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zkfp_cli::commands::{self, Source};
use zkfp_cli::{Config, Failure};

/// Cancelable fingerprint templates with zero-knowledge threshold proofs.
#[derive(Parser)]
#[command(name = "zkfp", version)]
struct Cli {
    /// Settings file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a setting, e.g. `--set threshold=40`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, global = true)]
    threshold: Option<u64>,
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    #[arg(long, global = true)]
    ledger: Option<PathBuf>,
    #[arg(long, global = true)]
    keys: Option<PathBuf>,
    /// Upscale small-sensor images before extraction.
    #[arg(long, global = true)]
    resize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Minutiae text file.
    #[arg(long)]
    minutiae: Option<PathBuf>,
    /// Grayscale fingerprint image.
    #[arg(long)]
    image: Option<PathBuf>,
}

impl Input {
    fn source(&self) -> Source {
        match (&self.minutiae, &self.image) {
            (Some(m), _) => Source::Minutiae(m.clone()),
            (_, Some(i)) => Source::Image(i.clone()),
            _ => unreachable!("clap requires one input"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the trusted setup for a score-matrix shape and cache its keys.
    Setup {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Register a fingerprint and print the new user key.
    Enroll {
        #[command(flatten)]
        input: Input,
        /// Projection seed as 64 hex characters; random when omitted.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Match a probe against an enrollment and prove the threshold statement.
    Authenticate {
        #[arg(long)]
        user_key: String,
        #[command(flatten)]
        input: Input,
        /// Where to write the proof envelope.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prove that a fixed-point score matrix meets a threshold.
    Prove {
        #[arg(long)]
        lsm: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a proof envelope against a verification key.
    Verify {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        vk: PathBuf,
    },
    /// Check the ledger hash chain and every registered store object.
    VerifyChain,
    /// Measure proof size, proving time and verification time.
    Bench {
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long, default_value_t = 10)]
        cols: usize,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 5)]
        prove_runs: usize,
    },
}

fn config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Failure::Parse(format!("--set {kv:?}: expected KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim()).map_err(|e| Failure::Parse(format!("--set: {e}")))?;
    }
    if let Some(t) = cli.threshold {
        cfg.threshold = t;
    }
    if let Some(p) = &cli.store {
        cfg.store = p.clone();
    }
    if let Some(p) = &cli.ledger {
        cfg.ledger = p.clone();
    }
    if let Some(p) = &cli.keys {
        cfg.keys = p.clone();
    }
    cfg.resize |= cli.resize;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    let cfg = config(cli)?;
    match &cli.command {
        Command::Setup { rows, cols } => commands::setup(&cfg, *rows, *cols, out),
        Command::Enroll { input, seed } => commands::enroll(&cfg, &input.source(), seed.as_deref(), out),
        Command::Authenticate { user_key, input, out: proof } => {
            commands::authenticate(&cfg, user_key, &input.source(), proof.as_deref(), out)
        }
        Command::Prove { lsm, out: proof } => commands::prove_lsm(&cfg, lsm, cfg.threshold, proof, out),
        Command::Verify { proof, vk } => commands::verify_files(proof, vk, out),
        Command::VerifyChain => commands::verify_chain(&cfg, out),
        Command::Bench { rows, cols, runs, prove_runs } => commands::bench(&cfg, *rows, *cols, *prove_runs, *runs, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = out.flush();
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
