//! `forest-lll`: criteria reports, seeded solver runs and closed-form bounds.
//!
//! Exit codes: 0 success, 1 criterion fails or is on the boundary, 2 solver
//! exhausted, 3 input error.

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use forest_lll::applications::{facial_thue_spectrum, frugal_bound, frugal_spectrum, nonrepetitive_bounds, nonrepetitive_spectrum};
use forest_lll::criteria::{
    evaluate_instance, evaluate_spectrum, min_ratio, step_threshold, CriterionReport, PowerSpectrum, Verdict,
};
use forest_lll::experiment::{rows_to_csv, run_trials, summarize, timing_csv, RunMeta, SolverKind, TrialSettings};

use config::{ExperimentConfig, Kind};

const EXIT_CRITERION: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Size-to-power ratio used by the spectrum-level global condition; paths
/// of `2n` atoms have power `n`, edges and stars at most 2.
const Q_APPLICATIONS: f64 = 2.0;

#[derive(Parser, Debug)]
#[command(name = "forest-lll", version, about = "Local-lemma criteria and seeded resampling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML experiment file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// mt, forest or ec.
    #[arg(long, global = true)]
    solver: Option<String>,
    #[arg(long, global = true)]
    step_cap: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, env = "FOREST_LLL_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every applicable criterion; exit 0 iff the requested one holds.
    Criteria {
        /// Criterion deciding the exit code; `series-` names refer to the
        /// analytic spectrum over all lengths.
        #[arg(long)]
        criterion: Option<String>,
        /// Skip the finite truncated family even if a graph is given.
        #[arg(long)]
        series_only: bool,
    },
    /// Run the solver for every trial and write results, metadata and timings.
    Solve {
        /// Build and check the witness forest of every Forest-Algorithm run.
        #[arg(long)]
        check_forests: bool,
    },
    /// b0, the two nonrepetitive bounds and optionally the frugal bound.
    Bounds {
        #[arg(long, required = true, num_args = 1..)]
        delta: Vec<usize>,
        #[arg(long)]
        beta: Option<usize>,
    },
    /// Run all three solvers on the configured instance and tabulate them.
    Bench,
}

enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = match &cli.common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    match cli.command {
        Command::Criteria { criterion, series_only } => cmd_criteria(&cfg, &cli.common, criterion, series_only),
        Command::Solve { check_forests } => cmd_solve(&cfg, &cli.common, check_forests || cfg.check_forests),
        Command::Bounds { delta, beta } => cmd_bounds(&delta, beta),
        Command::Bench => cmd_bench(&cfg, &cli.common),
    }
}

fn out_dir(cfg: &ExperimentConfig, common: &Common) -> Result<PathBuf, Failure> {
    let dir = common.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("forest-lll-out"));
    std::fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    Ok(dir)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let p = dir.join(name);
    std::fs::write(&p, contents).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
}

fn settings(cfg: &ExperimentConfig, common: &Common) -> Result<TrialSettings, Failure> {
    let solver: SolverKind = common.solver.as_deref().or(cfg.solver.as_deref()).unwrap_or("forest").parse()?;
    let trials = common.trials.or(cfg.trials).unwrap_or(100);
    if trials == 0 {
        return Err(Failure::Input("trial count must be at least 1".into()));
    }
    let mut s = TrialSettings::new(solver, trials, common.seed.or(cfg.seed).unwrap_or(0));
    s.step_cap = common.step_cap.or(cfg.step_cap);
    Ok(s)
}

fn series_spectrum(cfg: &ExperimentConfig, delta: Option<usize>) -> Result<PowerSpectrum, Failure> {
    let delta = || delta.or(cfg.delta).ok_or_else(|| Failure::Input("config: `graph` or `delta` is required".into()));
    let k = cfg.k()? as f64;
    Ok(match cfg.kind()? {
        Kind::Nonrepetitive => nonrepetitive_spectrum(delta()?, k)?,
        Kind::FacialThue => facial_thue_spectrum(k)?,
        Kind::Frugal => frugal_spectrum(delta()?, cfg.beta.ok_or("config: `beta` is required")?, k)?,
    })
}

fn cmd_criteria(cfg: &ExperimentConfig, common: &Common, criterion: Option<String>, series_only: bool) -> Outcome {
    let graph = if series_only { None } else { cfg.load_graph()? };
    let mut text = String::new();
    let mut lines = Vec::new();
    let mut m = 1;
    let mut delta = None;
    if let Some(g) = &graph {
        delta = Some(g.max_degree());
        let inst = cfg.application()?.build_instance()?;
        m = inst.num_atoms();
        let report = evaluate_instance(&inst)?;
        let _ = writeln!(text, "# truncated family: {} atoms, {} events", m, inst.events().len());
        text.push_str(&report.to_text());
        lines.extend(report.lines);
    }
    let series = evaluate_spectrum(&series_spectrum(cfg, delta)?, m, Q_APPLICATIONS);
    let _ = writeln!(text, "# full series");
    text.push_str(&series.to_text());
    lines.extend(series.lines.into_iter().map(|mut l| {
        l.name = format!("series-{}", l.name);
        l
    }));
    let combined = CriterionReport { lines, rho: series.rho, xi_star: series.xi_star, step_threshold: series.step_threshold };
    print!("{text}");
    write(&out_dir(cfg, common)?, "criteria.csv", &combined.to_csv())?;

    let name = criterion.or_else(|| cfg.criterion.clone()).unwrap_or_else(|| "series-min-ratio".into());
    let verdict = combined
        .verdict(&name)
        .ok_or_else(|| Failure::Input(format!("criterion `{name}` was not evaluated")))?;
    println!("{name}: {verdict}");
    Ok(if verdict == Verdict::Holds { 0 } else { EXIT_CRITERION })
}

fn solution_text(config: &forest_lll::Configuration) -> String {
    let mut s = String::from("# atom value\n");
    for (i, v) in config.values().iter().enumerate() {
        let _ = writeln!(s, "{i} {v}");
    }
    s
}

fn cmd_solve(cfg: &ExperimentConfig, common: &Common, check_forests: bool) -> Outcome {
    let app = cfg.application()?;
    let inst = app.build_instance()?;
    let mut settings = settings(cfg, common)?;
    settings.check_forests = check_forests && settings.solver == SolverKind::Forest;
    let rows = run_trials(&inst, |c| app.verify(c), &settings)?;
    let dir = out_dir(cfg, common)?;
    write(&dir, "results.csv", &rows_to_csv(&rows))?;
    write(&dir, "results.meta.json", &RunMeta::new(&inst, &settings, &rows).to_json())?;
    write(&dir, "timing.csv", &timing_csv(&rows))?;
    if let Some(c) = rows.iter().find_map(|r| r.config.as_ref()) {
        write(&dir, "solution.txt", &solution_text(c))?;
    }
    let s = summarize(&rows);
    println!(
        "{} on {}: {} atoms, {} events; {}/{} succeeded, {} verified; steps mean {:.3} sd {:.3}; max phases {}",
        settings.solver.as_str(),
        app.name(),
        inst.num_atoms(),
        inst.events().len(),
        s.successes,
        s.trials,
        s.verified,
        s.mean_steps,
        s.sd_steps,
        s.max_phases
    );
    let rho = min_ratio(&PowerSpectrum::from_instance(&inst)).rho;
    match step_threshold(rho, inst.num_atoms()) {
        Ok(t) => println!("rho {rho:.6}: step threshold N {} expected steps <= {:.3}", t.n, t.expected_steps),
        Err(_) => println!("rho {rho:.6}: no step threshold"),
    }
    Ok(if s.successes == 0 { EXIT_EXHAUSTED } else { 0 })
}

fn cmd_bench(cfg: &ExperimentConfig, common: &Common) -> Outcome {
    let app = cfg.application()?;
    let inst = app.build_instance()?;
    let base = settings(cfg, common)?;
    let mut csv = String::from("solver,trials,successes,verified,mean_steps,sd_steps,max_phases,mean_wall_us\n");
    let mut exhausted = false;
    for solver in [SolverKind::Mt, SolverKind::Forest, SolverKind::Ec] {
        let s = TrialSettings { solver, ..base.clone() };
        let rows = run_trials(&inst, |c| app.verify(c), &s)?;
        let sum = summarize(&rows);
        let wall = rows.iter().map(|r| r.wall_time.as_secs_f64() * 1e6).sum::<f64>() / rows.len() as f64;
        exhausted |= sum.successes == 0;
        let _ = writeln!(
            csv,
            "{},{},{},{},{:.6},{:.6},{},{:.1}",
            solver.as_str(),
            sum.trials,
            sum.successes,
            sum.verified,
            sum.mean_steps,
            sum.sd_steps,
            sum.max_phases,
            wall
        );
    }
    print!("{csv}");
    write(&out_dir(cfg, common)?, "bench.csv", &csv)?;
    Ok(if exhausted { EXIT_EXHAUSTED } else { 0 })
}

fn cmd_bounds(deltas: &[usize], beta: Option<usize>) -> Outcome {
    if let Some(d) = deltas.iter().find(|&&d| d < 2) {
        return Err(Failure::Input(format!("delta must be at least 2, got {d}")));
    }
    let fmt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.9}"));
    let mut out = String::from("delta,b0,residual,pi_bound,gmp_bound,better");
    if let Some(b) = beta {
        let _ = write!(out, ",frugal_closed_beta{b},frugal_k_beta{b}");
    }
    out.push('\n');
    for &d in deltas {
        let nb = nonrepetitive_bounds(d)?;
        let better = match nb.gmp_bound {
            Some(g) if nb.pi_bound < g => "a",
            Some(_) => "b",
            None => "",
        };
        let _ = write!(out, "{d},{:.12},{:.3e},{:.9},{},{better}", nb.b0, nb.residual, nb.pi_bound, fmt(nb.gmp_bound));
        if let Some(b) = beta {
            let fb = frugal_bound(d, b)?;
            let _ = write!(out, ",{},{}", fmt(fb.closed_form), fb.generic_k.map_or(String::new(), |k| k.to_string()));
        }
        out.push('\n');
    }
    print!("{out}");
    if beta == Some(1) {
        println!("# beta = 1: closed form undefined, k from the generic search only");
    }
    let crossover = (3..10_000usize).find(|&d| {
        nonrepetitive_bounds(d).is_ok_and(|nb| nb.gmp_bound.is_some_and(|g| nb.pi_bound >= g))
    });
    match crossover {
        Some(d) => println!("# (a) is smaller than (b) for 3 <= delta < {d}"),
        None => println!("# (a) is smaller than (b) for every delta checked"),
    }
    Ok(0)
}
