use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand};
use kgdamp_cli::{cmd_audit, cmd_classify, cmd_ground_state, cmd_simulate, cmd_sweep, Context, Settings};

#[derive(Parser, Debug)]
#[command(name = "kgdamp", version, about = "Damped focusing cubic Klein-Gordon laboratory (radial, 3D)")]
struct Cli {
    /// key = value configuration file; defaults apply to missing keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// record every time step instead of the output interval
    #[arg(long, global = true)]
    dense: bool,
    /// switch the cubic term off
    #[arg(long, global = true)]
    linear: bool,
    /// accepted for interface stability; runs are deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shoot for Q and write the profile and its checks
    GroundState,
    /// Run one configuration
    Simulate,
    /// Classify the initial data against the threshold h0
    Classify,
    /// Run with the multiplier, Morawetz and energy audits
    Audit,
    /// Run the Cartesian product of the sweep.* lists
    Sweep,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::defaults(),
    }
    .with_flags(cli.linear, cli.dense);
    settings.run.validate().context("invalid configuration")?;
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("setting up the worker pool")?;
    }
    let ctx = Context {
        settings,
        out: cli.out,
        seed: cli.seed,
    };
    std::fs::create_dir_all(&ctx.out).with_context(|| format!("creating {}", ctx.out.display()))?;

    match cli.command {
        Command::GroundState => {
            let s = cmd_ground_state(&ctx)?;
            println!("Q(0) = {}  h0 = {}  residual = {:e}", s.q0, s.h0, s.report.residual_sup);
        }
        Command::Simulate => {
            let s = cmd_simulate(&ctx)?;
            println!("{} after {} samples, E(T) = {:e}", s.outcome.name(), s.samples, s.energy_final);
        }
        Command::Classify => {
            let c = cmd_classify(&ctx)?;
            println!("{}  E/h0 = {}  K = {:e}", c.label.name(), c.energy_ratio(), c.nehari);
        }
        Command::Audit => {
            let (s, a) = cmd_audit(&ctx)?;
            println!(
                "{}: energy residual {:e}, multiplier sum {:e} of {:e}",
                s.outcome.name(),
                a.energy_residual,
                a.multiplier.sum,
                a.multiplier.scale
            );
        }
        Command::Sweep => {
            let runs = cmd_sweep(&ctx)?;
            println!("{} runs, summary in {}", runs.len(), ctx.out.join("summary.csv").display());
        }
    }
    Ok(())
}
