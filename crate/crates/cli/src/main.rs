mod config;
mod output;
mod sweep;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fracpme::barenblatt::{profile, profile_mass, ProfileParams};
use fracpme::evolve::{run, SolverConfig};
use fracpme::verify;

#[derive(Parser)]
#[command(name = "fracpme", version, about = "Nonlocal porous medium equation: profiles, solver and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed of the randomized batteries.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a self-similar profile.
    Profile {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long = "R", default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Run the solver; writes diag.csv and u_<t>.csv.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        /// `key=value` overrides of the config.
        overrides: Vec<String>,
    },
    /// Run a verification suite; writes verify_report.csv.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        m: f64,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Run a base config over a grid of parameters; writes sweep_report.csv and limits.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `name=v1,v2,...` with name one of alpha, m, delta, eps, n. Repeatable.
        #[arg(long = "axis")]
        axes: Vec<String>,
    },
    /// Summarize the reports found in the output directory.
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    SpecialFunctions,
    Profile,
    Operators,
    Inequalities,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when the command ran but some check or run failed.
fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Profile { alpha, m, d, radius, samples, emit } => {
            cmd_profile(*alpha, *m, *d, *radius, *samples, emit.as_deref())?;
            Ok(true)
        }
        Command::Evolve { config, overrides } => cmd_evolve(config, overrides, &cli.out),
        Command::Verify { suite, alpha, m, d } => cmd_verify(*suite, *alpha, *m, *d, cli.seed, &cli.out),
        Command::Sweep { config, axes } => cmd_sweep(config, axes, &cli.out),
        Command::Report => cmd_report(&cli.out),
    }
}

fn cmd_profile(alpha: f64, m: f64, d: usize, radius: f64, samples: usize, emit: Option<&Path>) -> Result<()> {
    let p = ProfileParams::new(alpha, m, d, radius)?;
    if samples < 2 {
        bail!("need at least two samples");
    }
    let c = p.constants();
    eprintln!(
        "lambda = {:.16e}  k = {:.16e}  K = {:.16e}  mass = {:.16e}",
        c.lambda,
        c.k,
        c.k_getoor,
        profile_mass(&p)
    );
    let mut text = String::from("y,phi\n");
    let reach = 1.2 * radius;
    for i in 0..samples {
        let y = -reach + 2.0 * reach * i as f64 / (samples - 1) as f64;
        let mut pt = vec![0.0; d];
        pt[0] = y;
        text.push_str(&format!("{y:.16e},{:.16e}\n", profile(&pt, &p)));
    }
    match emit {
        Some(path) => {
            let mut w = output::create(path)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_evolve(config: &Path, overrides: &[String], out: &Path) -> Result<bool> {
    let mut pairs = config::load_pairs(config)?;
    config::apply_overrides(&mut pairs, overrides)?;
    let cfg = SolverConfig::from_pairs(&pairs).with_context(|| format!("in config '{}'", config.display()))?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    let tr = run(&cfg)?;
    output::write_diagnostics(&out.join("diag.csv"), &tr)?;
    for (t, u) in &tr.snapshots {
        output::write_field(&out.join(output::snapshot_name(*t)), u)?;
    }
    eprintln!(
        "{} steps, {} records, mass drift {:.3e}, min u {:.3e}",
        tr.steps,
        tr.records.len(),
        tr.mass_drift(),
        tr.min_value()
    );
    Ok(true)
}

fn cmd_verify(suite: Suite, alpha: f64, m: f64, d: usize, seed: u64, out: &Path) -> Result<bool> {
    let rows = match suite {
        Suite::SpecialFunctions => verify::special_functions(seed),
        Suite::Profile => {
            ProfileParams::new(alpha, m, d, 1.0)?;
            verify::profile(alpha, m, d)
        }
        Suite::Operators => verify::operators(),
        Suite::Inequalities => verify::inequalities(seed),
        Suite::All => verify::all(seed),
    };
    for r in &rows {
        println!("{r}");
    }
    output::write_report(&out.join("verify_report.csv"), &rows)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    println!("{} checks, {} failed", rows.len(), failed);
    Ok(failed == 0)
}

fn cmd_sweep(config: &Path, axes: &[String], out: &Path) -> Result<bool> {
    let base = config::load_pairs(config)?;
    let axes = axes.iter().map(|a| sweep::parse_axis(a)).collect::<Result<Vec<_>>>()?;
    let runs = sweep::run_all(&base, &axes);
    sweep::write_report(&out.join("sweep_report.csv"), &axes, &runs)?;
    sweep::write_limits(&out.join("limits.csv"), &axes, &runs)?;
    let failed = runs.iter().filter(|r| r.result.is_err()).count();
    for r in runs.iter().filter_map(|r| r.result.as_ref().err().map(|e| (&r.point, e))) {
        eprintln!("run {:?} failed: {}", r.0, r.1);
    }
    println!("{} runs, {} failed", runs.len(), failed);
    Ok(failed == 0)
}

fn cmd_report(dir: &Path) -> Result<bool> {
    let mut found = false;
    let mut ok = true;
    let verify_path = dir.join("verify_report.csv");
    if let Ok(text) = fs::read_to_string(&verify_path) {
        found = true;
        let rows: Vec<&str> = text.lines().skip(1).collect();
        let failed: Vec<&str> = rows.iter().copied().filter(|l| l.ends_with(",false")).collect();
        println!("verify_report.csv: {} checks, {} failed", rows.len(), failed.len());
        for l in &failed {
            println!("  FAIL {}", l.split(',').next().unwrap_or(""));
        }
        ok &= failed.is_empty();
    }
    let sweep_path = dir.join("sweep_report.csv");
    if let Ok(text) = fs::read_to_string(&sweep_path) {
        found = true;
        let rows: Vec<&str> = text.lines().skip(1).collect();
        let failed = rows.iter().filter(|l| l.contains(",failed,")).count();
        println!("sweep_report.csv: {} runs, {} failed", rows.len(), failed);
        ok &= failed == 0;
    }
    if let Ok(text) = fs::read_to_string(dir.join("limits.csv")) {
        found = true;
        println!("limits.csv:");
        for l in text.lines().skip(1) {
            println!("  {l}");
        }
    }
    if let Ok(text) = fs::read_to_string(dir.join("diag.csv")) {
        found = true;
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
        let parse = |l: &str| l.split(',').map(|v| v.parse::<f64>().unwrap_or(f64::NAN)).collect::<Vec<_>>();
        let rows: Vec<Vec<f64>> = lines.map(parse).collect();
        if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
            println!("diag.csv: {} records, t = {} .. {}", rows.len(), first[0], last[0]);
            println!("  relative mass drift {:.3e}", ((last[1] - first[1]) / first[1]).abs());
            for (k, name) in header.iter().enumerate().skip(5) {
                println!("  {name}: {:.6e} -> {:.6e}", first[k], last[k]);
            }
        }
    }
    if !found {
        bail!("no reports found in '{}'", dir.display());
    }
    Ok(ok)
}
