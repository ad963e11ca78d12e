//! Batch front-end: one subcommand per module, configured by a TOML file.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use biharmlab::acceptance::{Acceptance, Check, CriterionResult};
use biharmlab::config::RunConfig;
use biharmlab::output::{json_string, unix_now, OutputDir, RunManifest};
use biharmlab::reports::{self, Payload};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "biharmlab", version, about = "Numerical experiments for fourth-order problems on the unit ball of R^4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Path of the TOML configuration.
    config: PathBuf,
    /// Overrides the sampling seed.
    #[arg(long, value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve once at the configured lambda.
    Solve(Common),
    /// Trace the branch by continuation in the maximum.
    Branch(Common),
    /// Rescale concentrating branch points against the bubble.
    Blowup(Common),
    /// Pohozaev bookkeeping for the configured solution.
    Pohozaev(Common),
    /// Kernel samples and the kernel property suite.
    Green(Common),
    /// Certificate of the unbounded solution.
    Counterexample(Common),
    /// Run every acceptance criterion.
    VerifyAll(Common),
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::Solve(c) => ("solve", c),
            Command::Branch(c) => ("branch", c),
            Command::Blowup(c) => ("blowup", c),
            Command::Pohozaev(c) => ("pohozaev", c),
            Command::Green(c) => ("green", c),
            Command::Counterexample(c) => ("counterexample", c),
            Command::VerifyAll(c) => ("verify-all", c),
        }
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    Config(anyhow::Error),
    Run(anyhow::Error),
}

fn load_config(common: &Common) -> std::result::Result<RunConfig, Failure> {
    let mut cfg = RunConfig::load(&common.config).map_err(|e| Failure::Config(e.into()))?;
    if let Some(seed) = common.seed {
        cfg.green.seed = seed;
    }
    if let Some(dir) = &common.out_dir {
        cfg.output.dir = dir.clone();
    }
    Ok(cfg)
}

fn payload_for(name: &str, cfg: &RunConfig) -> biharmlab::Result<Payload> {
    match name {
        "solve" => reports::solve_payload(cfg),
        "branch" => reports::branch_payload(cfg),
        "blowup" => reports::blowup_payload(cfg),
        "pohozaev" => reports::pohozaev_payload(cfg),
        "green" => reports::green_payload(cfg),
        "counterexample" => reports::counterexample_payload(cfg),
        other => unreachable!("no payload for {other}"),
    }
}

const MODULE_COMMANDS: [&str; 6] = ["solve", "branch", "blowup", "pohozaev", "green", "counterexample"];

fn write_payload(out: &mut OutputDir, payload: &Payload) -> Result<()> {
    for (name, contents) in payload {
        out.write(name, contents).with_context(|| format!("writing {name}"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AcceptanceFile<'a> {
    passed: bool,
    criteria: &'a [CriterionResult],
}

fn print_details(r: &CriterionResult) {
    for c in r.checks.iter().chain(&r.timings) {
        let Check { label, value, limit, passed } = c;
        let mark = if *passed { "ok" } else { "FAILED" };
        println!("    [{mark}] {label}: {value:e} ({limit})");
    }
}

/// Module payloads for every command, generated twice and compared byte by byte.
fn all_payloads(cfg: &RunConfig) -> biharmlab::Result<Payload> {
    let mut all = Payload::new();
    for name in MODULE_COMMANDS {
        all.extend(payload_for(name, cfg)?);
    }
    Ok(all)
}

fn verify_all(cfg: &RunConfig, out: &mut OutputDir) -> Result<bool> {
    let acceptance = Acceptance::new(cfg.green.seed);
    let mut results = Vec::new();
    for id in 1..=10 {
        let r = acceptance.run(id);
        println!("{}", r.line());
        print_details(&r);
        results.push(r);
    }
    let first = all_payloads(cfg)?;
    let second = all_payloads(cfg)?;
    let mut det = CriterionResult {
        id: 11,
        name: "deterministic payloads",
        passed: true,
        checks: Vec::new(),
        timings: Vec::new(),
    };
    let names_match = first.len() == second.len() && first.iter().zip(&second).all(|(a, b)| a.0 == b.0);
    let differing = first.iter().zip(&second).filter(|(a, b)| a.1 != b.1).count();
    let passed = names_match && differing == 0;
    det.passed = passed;
    det.checks.push(Check {
        label: format!("payload files differing between two generations (of {})", first.len()),
        value: differing as f64,
        limit: "= 0".into(),
        passed,
    });
    println!("{}", det.line());
    print_details(&det);
    results.push(det);
    write_payload(out, &first)?;
    let all_passed = results.iter().all(|r| r.passed);
    out.write(
        "acceptance.json",
        &json_string(&AcceptanceFile {
            passed: all_passed,
            criteria: &results,
        })?,
    )?;
    Ok(all_passed)
}

fn run(command: &Command) -> std::result::Result<bool, Failure> {
    let (name, common) = command.parts();
    let started = unix_now();
    let cfg = load_config(common)?;
    let mut out = OutputDir::new(&cfg.output.dir)
        .with_context(|| format!("creating {}", cfg.output.dir.display()))
        .map_err(Failure::Run)?;
    let outcome: Result<bool> = if name == "verify-all" {
        verify_all(&cfg, &mut out)
    } else {
        payload_for(name, &cfg)
            .map_err(anyhow::Error::from)
            .and_then(|p| write_payload(&mut out, &p))
            .map(|_| true)
    };
    let status = match &outcome {
        Ok(true) => "passed".to_string(),
        Ok(false) => "failed".to_string(),
        Err(e) => format!("error: {e:#}"),
    };
    let files = out.written().to_vec();
    let manifest = RunManifest::new(name, &cfg, started, &files, &status);
    let manifest_text = json_string(&manifest).map_err(|e| Failure::Run(e.into()))?;
    out.write("run.json", &manifest_text).map_err(|e| Failure::Run(e.into()))?;
    outcome.map_err(Failure::Run)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("{e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
