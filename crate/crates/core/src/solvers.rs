//! The constructive algorithms: baseline resampling, the Forest-Algorithm
//! and entropy compression.
//!
//! Every choice follows the id order on atoms and events. Variables are
//! always resampled in ascending atom order so that a run is a function of
//! the RNG stream alone.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::{min_ratio, step_threshold, PowerSpectrum};
use crate::error::{Error, Result};
use crate::model::{AtomId, Configuration, EventId, Instance, PartialConfiguration};

/// Cap used when no finite step threshold is available.
pub const FALLBACK_STEP_CAP: u64 = 1_000_000;

/// Independent stream `trial` of the generator seeded with `master`.
pub fn trial_rng(master: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng
}

/// `10 N` from the step threshold when `rho < 1`, otherwise
/// [`FALLBACK_STEP_CAP`].
pub fn default_step_cap(instance: &Instance) -> u64 {
    let sp = PowerSpectrum::from_instance(instance);
    if sp.is_empty() {
        return FALLBACK_STEP_CAP;
    }
    match step_threshold(min_ratio(&sp).rho, instance.num_atoms()) {
        Ok(t) => t.n.saturating_mul(10).max(1),
        Err(_) => FALLBACK_STEP_CAP,
    }
}

/// Atoms lying in the support of some occurring event, ascending.
pub fn bad_atoms(instance: &Instance, config: &Configuration) -> Vec<AtomId> {
    let mut bad = BTreeSet::new();
    for ev in instance.events() {
        if ev.occurs_in(instance.domains(), config.values()) {
            bad.extend(ev.support().iter().copied());
        }
    }
    bad.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub steps: u64,
    pub phases: u64,
    pub wall_time: Duration,
    pub config: Configuration,
    pub success: bool,
}

/// Incremental occurrence bookkeeping over a total assignment.
struct Tracker<'a> {
    instance: &'a Instance,
    values: Vec<usize>,
    occurring: BTreeSet<EventId>,
    bad: Vec<u32>,
    stamp: Vec<u64>,
    epoch: u64,
}

impl<'a> Tracker<'a> {
    fn new(instance: &'a Instance, config: Configuration) -> Self {
        let mut t = Tracker {
            instance,
            values: config.0,
            occurring: BTreeSet::new(),
            bad: vec![0; instance.num_atoms()],
            stamp: vec![0; instance.events().len()],
            epoch: 0,
        };
        for ev in instance.events() {
            if ev.occurs_in(instance.domains(), &t.values) {
                t.set(ev.id(), true);
            }
        }
        t
    }

    fn set(&mut self, e: EventId, on: bool) {
        let changed = if on { self.occurring.insert(e) } else { self.occurring.remove(&e) };
        if changed {
            for &x in self.instance.event(e).support() {
                if on {
                    self.bad[x] += 1;
                } else {
                    self.bad[x] -= 1;
                }
            }
        }
    }

    fn resample<R: Rng + ?Sized>(&mut self, atoms: &[AtomId], rng: &mut R) {
        let domains = self.instance.domains();
        for &y in atoms {
            self.values[y] = domains[y].sample(rng);
        }
        self.epoch += 1;
        for &y in atoms {
            for &e in self.instance.events_containing(y) {
                if self.stamp[e] != self.epoch {
                    self.stamp[e] = self.epoch;
                    let on = self.instance.event(e).occurs_in(domains, &self.values);
                    self.set(e, on);
                }
            }
        }
    }

    fn is_bad(&self, x: AtomId) -> bool {
        self.bad[x] > 0
    }

    fn smallest_bad(&self) -> Option<AtomId> {
        self.bad.iter().position(|&c| c > 0)
    }

    fn smallest_bad_in(&self, atoms: &[AtomId]) -> Option<AtomId> {
        atoms.iter().copied().find(|&x| self.is_bad(x))
    }

    fn smallest_occurring_containing(&self, x: AtomId) -> EventId {
        *self
            .instance
            .events_containing(x)
            .iter()
            .find(|e| self.occurring.contains(e))
            .expect("bad atom has an occurring event")
    }

    fn into_config(self) -> Configuration {
        Configuration(self.values)
    }
}

/// Resampling: while some event occurs, resample the support of the
/// smallest occurring one.
pub fn moser_tardos_resampling<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, step_cap: u64) -> RunStats {
    let start = Instant::now();
    let mut tr = Tracker::new(instance, instance.sample(rng));
    let mut steps = 0u64;
    let mut success = true;
    while let Some(&e) = tr.occurring.iter().next() {
        if steps >= step_cap {
            success = false;
            break;
        }
        steps += 1;
        tr.resample(instance.event(e).support(), rng);
    }
    RunStats { steps, phases: 0, wall_time: start.elapsed(), config: tr.into_config(), success }
}

/// The step list `L` of a Forest-Algorithm run.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Record {
    pub steps: Vec<(AtomId, EventId)>,
    /// Indices into `steps` where a top-level call starts.
    pub phase_starts: Vec<usize>,
    pub rng_seed: u64,
    pub terminated: bool,
}

impl Record {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn num_phases(&self) -> usize {
        self.phase_starts.len()
    }

    /// Step range of every phase.
    pub fn phases(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.phase_starts.len());
        for (i, &s) in self.phase_starts.iter().enumerate() {
            let end = self.phase_starts.get(i + 1).copied().unwrap_or(self.steps.len());
            out.push(s..end);
        }
        out
    }

    /// One line per step, `phase step atom event`, after a header line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# seed {} terminated {}\n", self.rng_seed, self.terminated);
        for (p, range) in self.phases().into_iter().enumerate() {
            for i in range {
                let (x, e) = self.steps[i];
                let _ = writeln!(out, "{p} {i} {x} {e}");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut rec = Record::default();
        let mut last_phase: Option<usize> = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            let perr = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
            if let Some(h) = line.strip_prefix('#') {
                let f: Vec<&str> = h.split_whitespace().collect();
                if let ["seed", s, "terminated", t] = f.as_slice() {
                    rec.rng_seed = s.parse().map_err(|_| perr("bad seed"))?;
                    rec.terminated = t.parse().map_err(|_| perr("bad flag"))?;
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| perr("expected integers")))
                .collect::<Result<_>>()?;
            let [p, i, x, e] = nums.as_slice() else {
                return Err(perr("expected `phase step atom event`"));
            };
            if *i != rec.steps.len() {
                return Err(perr("step indices must be consecutive from 0"));
            }
            match last_phase {
                Some(q) if q == *p => {}
                Some(q) if q + 1 == *p => rec.phase_starts.push(*i),
                None if *p == 0 => rec.phase_starts.push(*i),
                _ => return Err(perr("phase numbers must increase by one")),
            }
            last_phase = Some(*p);
            rec.steps.push((*x, *e));
        }
        Ok(rec)
    }
}

/// Hooks into the Forest-Algorithm for instrumented runs. `bad[x] > 0`
/// iff atom `x` is bad.
pub trait ForestObserver {
    /// A call `Resample(x, e)` starts; `caller` is the frame that made it.
    fn on_call(&mut self, _atom: AtomId, _event: EventId, _caller: Option<(AtomId, EventId)>, _bad: &[u32]) {}
    fn on_return(&mut self, _atom: AtomId, _event: EventId, _bad: &[u32]) {}
}

impl ForestObserver for () {}

pub fn forest_algorithm<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, step_cap: u64) -> (Record, RunStats) {
    forest_algorithm_observed(instance, rng, step_cap, &mut ())
}

/// Forest-Algorithm with the recursive `Resample` realised on an explicit
/// stack. Inside `Resample(x, e)` only `supp(e) \ S_x(e)` is resampled and
/// rescanned.
pub fn forest_algorithm_observed<R: Rng + ?Sized, O: ForestObserver>(
    instance: &Instance,
    rng: &mut R,
    step_cap: u64,
    observer: &mut O,
) -> (Record, RunStats) {
    let start = Instant::now();
    let mut tr = Tracker::new(instance, instance.sample(rng));
    let mut rec = Record::default();
    let mut stack: Vec<(AtomId, EventId)> = Vec::new();
    let mut capped = false;

    'outer: while let Some(x) = tr.smallest_bad() {
        if rec.steps.len() as u64 >= step_cap {
            capped = true;
            break;
        }
        let e = tr.smallest_occurring_containing(x);
        rec.phase_starts.push(rec.steps.len());
        rec.steps.push((x, e));
        observer.on_call(x, e, None, &tr.bad);
        tr.resample(instance.event(e).resample_set(x).expect("x in supp"), rng);
        stack.push((x, e));
        while let Some(&(fx, fe)) = stack.last() {
            let set = instance.event(fe).resample_set(fx).expect("x in supp");
            match tr.smallest_bad_in(set) {
                Some(y) => {
                    if rec.steps.len() as u64 >= step_cap {
                        capped = true;
                        break 'outer;
                    }
                    let e2 = tr.smallest_occurring_containing(y);
                    rec.steps.push((y, e2));
                    observer.on_call(y, e2, Some((fx, fe)), &tr.bad);
                    tr.resample(instance.event(e2).resample_set(y).expect("y in supp"), rng);
                    stack.push((y, e2));
                }
                None => {
                    stack.pop();
                    observer.on_return(fx, fe, &tr.bad);
                }
            }
        }
    }
    rec.terminated = !capped;
    let stats = RunStats {
        steps: rec.steps.len() as u64,
        phases: rec.phase_starts.len() as u64,
        wall_time: start.elapsed(),
        config: tr.into_config(),
        success: !capped,
    };
    (rec, stats)
}

/// Forest-Algorithm driven by `trial_rng(master, trial)`; the record
/// carries the derived stream id as its seed.
pub fn forest_trial(instance: &Instance, master: u64, trial: u64, step_cap: u64) -> (Record, RunStats) {
    let mut rng = trial_rng(master, trial);
    let (mut rec, stats) = forest_algorithm(instance, &mut rng, step_cap);
    rec.rng_seed = master;
    (rec, stats)
}

/// One step of entropy compression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EcStep {
    pub atom: AtomId,
    pub value: usize,
    /// The flaw that was undone, if the new value completed one.
    pub flaw: Option<EventId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EcOutcome {
    pub config: Option<Configuration>,
    pub steps_used: usize,
    pub trace: Vec<EcStep>,
    pub wall_time: Duration,
}

impl EcOutcome {
    pub fn success(&self) -> bool {
        self.config.is_some()
    }
}

/// Entropy compression with `t` random entries.
pub fn entropy_compression<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, t: usize) -> Result<EcOutcome> {
    let k = instance.uniform_k().ok_or(Error::NonUniformInstance)?;
    let v: Vec<usize> = (0..t).map(|_| rng.gen_range(0..k)).collect();
    entropy_compression_with(instance, &v, |_| {})
}

/// Entropy compression on a given vector `V_t`; `observe` sees the partial
/// coloring after every step.
pub fn entropy_compression_with<F: FnMut(&PartialConfiguration)>(
    instance: &Instance,
    v: &[usize],
    mut observe: F,
) -> Result<EcOutcome> {
    let start = Instant::now();
    let k = instance.uniform_k().ok_or(Error::NonUniformInstance)?;
    if v.is_empty() {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if let Some(&bad) = v.iter().find(|&&c| c >= k) {
        return Err(Error::InvalidArgument(format!("entry {bad} outside [0, {k})")));
    }
    let m = instance.num_atoms();
    let mut w = PartialConfiguration::unassigned(m);
    let mut uncolored: BTreeSet<AtomId> = (0..m).collect();
    let mut trace = Vec::new();
    let domains = instance.domains();
    for (i, &c) in v.iter().enumerate() {
        let Some(&y) = uncolored.iter().next() else { break };
        uncolored.remove(&y);
        w.0[y] = Some(c);
        let flaw = instance
            .events_containing(y)
            .iter()
            .copied()
            .find(|&e| instance.event(e).occurs_by(domains, |x| w.0[x]) == Some(true));
        if let Some(e) = flaw {
            for &z in instance.event(e).resample_set(y)? {
                w.0[z] = None;
                uncolored.insert(z);
            }
        }
        trace.push(EcStep { atom: y, value: c, flaw });
        observe(&w);
        if uncolored.is_empty() {
            return Ok(EcOutcome { config: w.to_total(), steps_used: i + 1, trace, wall_time: start.elapsed() });
        }
    }
    Ok(EcOutcome { config: None, steps_used: trace.len(), trace, wall_time: start.elapsed() })
}

/// Some event occurs on a fully colored support of `w`.
pub fn partial_has_flaw(instance: &Instance, w: &PartialConfiguration) -> bool {
    instance.events().iter().any(|ev| ev.occurs_by(instance.domains(), |x| w.get(x)) == Some(true))
}
