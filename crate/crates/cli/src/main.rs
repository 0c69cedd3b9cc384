use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pinching_noma::placement::bisection_solve;
use pinching_noma::sim::{
    delta_table, oracle_table, power_table, run_delta_sweep, run_oracle_comparison,
    run_power_sweep, scenario_for, write_figures,
};
use pinching_noma::table::{write_table, Format};
use pinching_noma::RunConfig;

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

/// Pinching-antenna NOMA placement solver and experiment runner.
#[derive(Debug, Parser)]
#[command(name = "pinch", version)]
struct Cli {
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override a configuration entry, e.g. `system.pt_dbm=20`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Random seed for scenario draws; replaces `sweep.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, env = "PINCH_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one scenario and print the placement as JSON.
    Solve {
        /// Also write the JSON to this file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run one experiment and write its table (CSV, or JSON for `.json`).
    Sweep {
        #[arg(value_enum)]
        which: Which,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Run all three experiments into a directory.
    Figures {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Power,
    Delta,
    Oracle,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let cfg = effective_config(&cli)?;
    match &cli.command {
        Command::Solve { out } => solve(&cfg, cli.seed, out.as_deref()),
        Command::Sweep { which, out } => sweep(&cfg, *which, out).map(|()| ExitCode::SUCCESS),
        Command::Figures { out } => figures(&cfg, out).map(|()| ExitCode::SUCCESS),
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut cfg = base.with_overrides(&cli.overrides)?;
    if let Some(seed) = cli.seed {
        cfg.sweep.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn solve(cfg: &RunConfig, seed: Option<u64>, out: Option<&Path>) -> Result<ExitCode> {
    let scenario = match (cfg.scenario, seed) {
        (Some(s), _) => s,
        (None, Some(seed)) => scenario_for(seed, 0, cfg.system.side_d)?,
        (None, None) => bail!("no scenario to solve: set `scenario` in the config or pass --seed"),
    };
    let users = scenario.users();
    let sol = bisection_solve(&cfg.system, &users, &cfg.qos, &cfg.algo)?;
    let report = json!({
        "users": { "user1": users[0], "user2": users[1] },
        "antenna_positions_m": sol.layout.xs,
        "feed_x_m": sol.layout.feed_x,
        "alpha1": sol.split.alpha1,
        "alpha2": sol.split.alpha2,
        "alpha2_clamp": sol.clamp,
        "rates_bpshz": {
            "user1": sol.rates.r1,
            "user2": sol.rates.r2,
            "user2_decoding_user1": sol.rates.r2_to_1,
        },
        "sum_rate_bpshz": sol.rates.sum,
        "gain_sq": sol.gain_sq,
        "feasible": sol.feasible_found,
        "feasibility": sol.feasibility,
        "iterations": sol.iterations,
    });
    let text = serde_json::to_string_pretty(&report)?;
    println!("{text}");
    if let Some(path) = out {
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if sol.feasible_found {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INFEASIBLE)
    })
}

/// `dir/fig.csv` → `dir/fig.<suffix>`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn sweep(cfg: &RunConfig, which: Which, out: &Path) -> Result<()> {
    let format = Format::from_path(out);
    let spec = &cfg.sweep;
    let summary = match which {
        Which::Power => {
            let s = run_power_sweep(cfg)?;
            write_table(&power_table(&s.rows), out, format)?;
            format!(
                "power sweep: {} rows ({} D x {} Pt x {} schemes, {} trials each)",
                s.rows.len(),
                spec.d_values.len(),
                spec.pt_dbm_values.len(),
                spec.schemes.len(),
                spec.trials
            )
        }
        Which::Delta => {
            let s = run_delta_sweep(cfg)?;
            write_table(&delta_table(&s.rows), out, format)?;
            format!(
                "delta sweep: {} rows ({} tolerance pairs x {} Pt, D = {} m, {} trials each)",
                s.rows.len(),
                spec.delta_pairs.len(),
                spec.pt_dbm_values.len(),
                cfg.system.side_d,
                spec.trials
            )
        }
        Which::Oracle => {
            let c = run_oracle_comparison(cfg)?;
            write_table(&oracle_table(&c.rows()), out, format)?;
            let path = sibling(out, "summary.json");
            fs::write(&path, serde_json::to_string_pretty(&c.summary)? + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            let s = c.summary;
            format!(
                "oracle comparison: {} trials, relative gap mean {:.3e}, min {:.3e}, median {:.3e}, max {:.3e}",
                s.trials, s.mean_rel_gap, s.min_rel_gap, s.median_rel_gap, s.max_rel_gap
            )
        }
    };
    cfg.write_json(&sibling(out, "config.json"))?;
    println!("{summary} -> {}", out.display());
    Ok(())
}

fn figures(cfg: &RunConfig, out: &Path) -> Result<()> {
    let o = write_figures(cfg, out)?;
    let s = o.summary;
    println!(
        "wrote {}, {}, {} and {}; oracle relative gap mean {:.3e}, max {:.3e}",
        o.power.display(),
        o.delta.display(),
        o.oracle.display(),
        o.config.display(),
        s.mean_rel_gap,
        s.max_rel_gap
    );
    Ok(())
}
