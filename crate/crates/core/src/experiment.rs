//! Seeded batches of solver trials with deterministic CSV output.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::BOUNDARY_TOL;
use crate::error::{Error, Result};
use crate::model::{Configuration, Instance};
use crate::solvers::{
    default_step_cap, entropy_compression, forest_algorithm, moser_tardos_resampling, trial_rng,
};
use crate::witness::{build_forest, check_properties};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Mt,
    Forest,
    Ec,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Mt => "mt",
            SolverKind::Forest => "forest",
            SolverKind::Ec => "ec",
        }
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mt" => Ok(SolverKind::Mt),
            "forest" => Ok(SolverKind::Forest),
            "ec" => Ok(SolverKind::Ec),
            other => Err(Error::InvalidArgument(format!("unknown solver `{other}` (mt, forest, ec)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSettings {
    pub solver: SolverKind,
    pub trials: u64,
    pub master_seed: u64,
    /// Step cap for the resampling solvers; defaults to
    /// [`default_step_cap`].
    pub step_cap: Option<u64>,
    /// Length `t` of the entropy-compression vector; defaults to `50 m`.
    pub ec_steps: Option<usize>,
    /// Also build and check the witness forest of every Forest-Algorithm run.
    pub check_forests: bool,
}

impl TrialSettings {
    pub fn new(solver: SolverKind, trials: u64, master_seed: u64) -> Self {
        TrialSettings { solver, trials, master_seed, step_cap: None, ec_steps: None, check_forests: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub trial: u64,
    pub seed: u64,
    pub steps: u64,
    pub phases: u64,
    pub success: bool,
    /// Output passed the verifier; false for unsuccessful runs.
    pub verified: bool,
    /// Witness forest satisfied every property, when checked.
    pub forest_ok: Option<bool>,
    pub wall_time: Duration,
    pub config: Option<Configuration>,
}

/// Runs every trial on its own stream `trial_rng(master, trial)`; rows come
/// back in trial order whatever the scheduling.
pub fn run_trials<V>(instance: &Instance, verify: V, settings: &TrialSettings) -> Result<Vec<ResultRow>>
where
    V: Fn(&Configuration) -> bool + Sync,
{
    if settings.trials == 0 {
        return Err(Error::InvalidArgument("trial count must be at least 1".into()));
    }
    if settings.solver == SolverKind::Ec && instance.uniform_k().is_none() {
        return Err(Error::NonUniformInstance);
    }
    let cap = settings.step_cap.unwrap_or_else(|| default_step_cap(instance));
    let t = settings.ec_steps.unwrap_or(50 * instance.num_atoms());
    (0..settings.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(settings.master_seed, trial);
            let (steps, phases, success, wall_time, config, forest_ok) = match settings.solver {
                SolverKind::Mt => {
                    let s = moser_tardos_resampling(instance, &mut rng, cap);
                    (s.steps, s.phases, s.success, s.wall_time, Some(s.config), None)
                }
                SolverKind::Forest => {
                    let (rec, s) = forest_algorithm(instance, &mut rng, cap);
                    let forest_ok = settings.check_forests.then(|| {
                        build_forest(&rec, instance).is_ok_and(|f| check_properties(&f, instance).ok())
                    });
                    (s.steps, s.phases, s.success, s.wall_time, Some(s.config), forest_ok)
                }
                SolverKind::Ec => {
                    let out = entropy_compression(instance, &mut rng, t)?;
                    (out.steps_used as u64, 0, out.success(), out.wall_time, out.config, None)
                }
            };
            let config = if success { config } else { None };
            let verified = config.as_ref().is_some_and(&verify);
            Ok(ResultRow {
                trial,
                seed: settings.master_seed,
                steps,
                phases,
                success,
                verified,
                forest_ok,
                wall_time,
                config,
            })
        })
        .collect()
}

/// `trial,seed,steps,phases,success,verified,forest_ok`; no timing, so the
/// output depends only on the inputs and the master seed.
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("trial,seed,steps,phases,success,verified,forest_ok\n");
    for r in rows {
        let forest = r.forest_ok.map_or(String::new(), |b| b.to_string());
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.trial, r.seed, r.steps, r.phases, r.success, r.verified, forest);
    }
    out
}

/// `trial,wall_time_us`.
pub fn timing_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("trial,wall_time_us\n");
    for r in rows {
        let _ = writeln!(out, "{},{}", r.trial, r.wall_time.as_micros());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: u64,
    pub successes: u64,
    pub verified: u64,
    pub mean_steps: f64,
    pub sd_steps: f64,
    pub max_phases: u64,
}

pub fn summarize(rows: &[ResultRow]) -> Summary {
    let n = rows.len().max(1) as f64;
    let mean = rows.iter().map(|r| r.steps as f64).sum::<f64>() / n;
    let var = rows.iter().map(|r| (r.steps as f64 - mean).powi(2)).sum::<f64>() / n;
    Summary {
        trials: rows.len() as u64,
        successes: rows.iter().filter(|r| r.success).count() as u64,
        verified: rows.iter().filter(|r| r.verified).count() as u64,
        mean_steps: mean,
        sd_steps: var.sqrt(),
        max_phases: rows.iter().map(|r| r.phases).max().unwrap_or(0),
    }
}

/// Sidecar written next to a results CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub rng: &'static str,
    pub settings: TrialSettings,
    pub effective_step_cap: u64,
    pub boundary_tolerance: f64,
    pub summary: Summary,
}

impl RunMeta {
    pub fn new(instance: &Instance, settings: &TrialSettings, rows: &[ResultRow]) -> Self {
        RunMeta {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            rng: "ChaCha8, stream = trial index",
            settings: settings.clone(),
            effective_step_cap: settings.step_cap.unwrap_or_else(|| default_step_cap(instance)),
            boundary_tolerance: BOUNDARY_TOL,
            summary: summarize(rows),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}
