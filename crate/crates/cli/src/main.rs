use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use lascar_core::report::{list_suites, replay, run, Inject, RunConfig, Verdict};
use lascar_core::Status;

#[derive(Parser)]
#[command(name = "lascar-lab", version, about = "Exact checks of automorphism-group correspondences on finite windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites from a JSON config.
    Run(RunArgs),
    /// List suites with one-line descriptions.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Restrict to these suites (repeatable); overrides the config list.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    #[arg(long, value_name = "OUT")]
    md: Option<PathBuf>,
    /// Re-evaluate the counterexample in a report or payload file.
    #[arg(long, value_name = "CEX")]
    replay: Option<PathBuf>,
    /// Corrupt one axiom: rank or exchange.
    #[arg(long, value_name = "AXIOM")]
    inject: Option<String>,
}

const USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn load_config(args: &RunArgs) -> std::result::Result<RunConfig, String> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| format!("reading {}: {e}", args.config.display()))?;
    let mut cfg = RunConfig::parse(&text).map_err(|e| e.to_string())?;
    if !args.suites.is_empty() {
        cfg.suites = args.suites.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    if let Some(f) = &args.inject {
        cfg.inject = Some(f.parse::<Inject>().map_err(|e| e.to_string())?);
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run_command(args: RunArgs) -> ExitCode {
    let cfg = match load_config(&args) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    if let Some(path) = &args.replay {
        let payload = match std::fs::read_to_string(path).map_err(anyhow::Error::from).and_then(|t| Ok(serde_json::from_str(&t)?)) {
            Ok(v) => v,
            Err(e) => return usage(format!("reading {}: {e}", path.display())),
        };
        return match replay(&payload) {
            Ok(out) => {
                println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
                let word = if out.reproduced { "reproduced" } else { "not reproduced" };
                eprintln!("{} / {}: {word}", out.suite, out.check);
                ExitCode::from(u8::from(out.reproduced))
            }
            Err(e) => usage(e),
        };
    }
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    for s in &report.canonical.suites {
        let verdict = match s.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIP",
        };
        let ms = report.timings.get(&s.suite).map_or(0.0, |t| t.total_ms);
        println!("{verdict} {:<26} {:>3} checks {:>9.1} ms", s.suite, s.checks.len(), ms);
        if let Some(n) = &s.note {
            println!("     note: {n}");
        }
        for c in s.checks.iter().filter(|c| c.status == Status::Fail) {
            let cex = c.counterexample.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            println!("     {} failed: {cex}", c.name);
        }
    }
    let outputs = [(args.json.as_deref(), report.to_json()), (args.md.as_deref(), report.to_markdown())];
    for (path, text) in outputs {
        if let Some(p) = path {
            if let Err(e) = write(p, &text) {
                return usage(format!("{e:#}"));
            }
        }
    }
    if !report.passed() {
        if let Some(p) = &args.json {
            eprintln!("replay the first failure with: lascar-lab run --config {} --replay {}", args.config.display(), p.display());
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for (name, desc) in list_suites() {
                println!("{name:<26} {desc}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => run_command(args),
    }
}
