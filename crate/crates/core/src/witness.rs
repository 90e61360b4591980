//! Witness forests of Forest-Algorithm records, the S-check, and the
//! counting recurrence `Q_n` for unlabeled forests.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use rand::Rng;

use crate::criteria::{min_ratio, PowerSpectrum};
use crate::error::{Error, Result};
use crate::model::{AtomId, EventId, Instance};
use crate::solvers::Record;

/// A vertex of a witness tree. Leaves carry `event == None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub atom: AtomId,
    pub event: Option<EventId>,
    pub children: Vec<Node>,
}

impl Node {
    pub fn leaf(atom: AtomId) -> Self {
        Node { atom, event: None, children: Vec::new() }
    }

    pub fn is_internal(&self) -> bool {
        self.event.is_some()
    }

    /// Internal labels in depth-first order.
    pub fn internal_preorder(&self) -> Vec<(AtomId, EventId)> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if let Some(e) = n.event {
                out.push((n.atom, e));
            }
        });
        out
    }

    fn walk<F: FnMut(&Node)>(&self, f: &mut F) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    fn dump(&self, depth: usize, out: &mut String) {
        let label = match self.event {
            Some(e) => format!("({}, e{e})", self.atom),
            None => format!("({}, -)", self.atom),
        };
        let _ = writeln!(out, "{}{label}", "  ".repeat(depth));
        for c in &self.children {
            c.dump(depth + 1, out);
        }
    }
}

/// `m` plane trees ordered by root atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WitnessForest {
    pub trees: Vec<Node>,
}

impl WitnessForest {
    pub fn num_internal(&self) -> usize {
        self.trees.iter().map(|t| t.internal_preorder().len()).sum()
    }

    /// Indented text tree, one vertex per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for t in &self.trees {
            t.dump(0, &mut out);
        }
        out
    }
}

fn check_record(record: &Record, instance: &Instance) -> Result<()> {
    for (i, &(x, e)) in record.steps.iter().enumerate() {
        if e >= instance.events().len() || !instance.event(e).contains(x) {
            return Err(Error::Integrity(format!("step {i}: atom {x} not in support of event {e}")));
        }
    }
    if record.phase_starts.first().is_some_and(|&s| s != 0)
        || record.phase_starts.windows(2).any(|w| w[0] >= w[1])
        || record.phase_starts.last().is_some_and(|&s| s >= record.steps.len())
        || (record.phase_starts.is_empty() && !record.steps.is_empty())
    {
        return Err(Error::Integrity("phase starts must be increasing indices starting at 0".into()));
    }
    Ok(())
}

/// Parent step of every step under the attachment rule: the most recent
/// vertex `j` on the current root path with `x_i ∈ supp(e_j) \ S_{x_j}(e_j)`.
/// Phase roots get `None`.
pub fn attachment_parents(record: &Record, instance: &Instance) -> Result<Vec<Option<usize>>> {
    check_record(record, instance)?;
    let mut parents = vec![None; record.steps.len()];
    for range in record.phases() {
        let mut last = range.start;
        for i in range.clone().skip(1) {
            let x = record.steps[i].0;
            let mut cur = Some(last);
            let parent = loop {
                let Some(j) = cur else {
                    return Err(Error::Integrity(format!("step {i}: no ancestor admits atom {x}")));
                };
                let (xj, ej) = record.steps[j];
                if instance.event(ej).resample_set(xj)?.binary_search(&x).is_ok() {
                    break j;
                }
                cur = parents[j];
            };
            parents[i] = Some(parent);
            last = i;
        }
    }
    Ok(parents)
}

fn materialize(record: &Record, kids: &[Vec<usize>], i: usize, instance: &Instance) -> Node {
    let (x, e) = record.steps[i];
    let mut children: Vec<Node> = kids[i].iter().map(|&c| materialize(record, kids, c, instance)).collect();
    let used: Vec<AtomId> = children.iter().map(|c| c.atom).collect();
    let resample = instance.event(e).resample_set(x).expect("checked during build");
    children.extend(resample.iter().filter(|y| !used.contains(y)).map(|&y| Node::leaf(y)));
    Node { atom: x, event: Some(e), children }
}

/// Witness forest of a record.
///
/// Steps are attached by [`attachment_parents`]. Every internal vertex is
/// then padded with leaves for the unused atoms of its resample set, in
/// atom order, and atoms that root no phase become isolated vertices.
pub fn build_forest(record: &Record, instance: &Instance) -> Result<WitnessForest> {
    let parents = attachment_parents(record, instance)?;
    let mut kids = vec![Vec::new(); record.steps.len()];
    for (i, p) in parents.iter().enumerate() {
        if let Some(p) = p {
            kids[*p].push(i);
        }
    }
    let mut roots: Vec<Option<Node>> = vec![None; instance.num_atoms()];
    for &s in &record.phase_starts {
        let rx = record.steps[s].0;
        if roots[rx].is_some() {
            return Err(Error::Integrity(format!("atom {rx} roots two phases")));
        }
        roots[rx] = Some(materialize(record, &kids, s, instance));
    }
    let trees = roots.into_iter().enumerate().map(|(x, t)| t.unwrap_or_else(|| Node::leaf(x))).collect();
    Ok(WitnessForest { trees })
}

/// Violations of the five structural properties, as `(property, message)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub violations: Vec<(u8, String)>,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, property: u8) -> bool {
        self.violations.iter().any(|(p, _)| *p == property)
    }
}

pub fn check_properties(forest: &WitnessForest, instance: &Instance) -> PropertyReport {
    let mut rep = PropertyReport::default();
    let m = instance.num_atoms();
    if forest.trees.len() != m {
        rep.violations.push((1, format!("{} trees for {m} atoms", forest.trees.len())));
    }
    for (i, t) in forest.trees.iter().enumerate() {
        if t.atom != i {
            rep.violations.push((1, format!("tree {i} has root atom {}", t.atom)));
        }
    }
    fn visit(n: &Node, instance: &Instance, rep: &mut PropertyReport) {
        if n.atom >= instance.num_atoms() {
            rep.violations.push((3, format!("atom {} out of range", n.atom)));
            return;
        }
        let Some(e) = n.event else {
            if !n.children.is_empty() {
                rep.violations.push((3, format!("leaf ({}, -) has children", n.atom)));
            }
            return;
        };
        if e >= instance.events().len() {
            rep.violations.push((3, format!("event {e} out of range")));
            return;
        }
        let ev = instance.event(e);
        if !ev.contains(n.atom) {
            rep.violations.push((3, format!("internal ({}, e{e}) with atom outside support", n.atom)));
        }
        for c in &n.children {
            if !ev.contains(c.atom) {
                let p = if c.is_internal() { 2 } else { 3 };
                rep.violations.push((p, format!("child {} of ({}, e{e}) outside support", c.atom, n.atom)));
            }
        }
        let mut atoms: Vec<AtomId> = n.children.iter().map(|c| c.atom).collect();
        atoms.sort_unstable();
        if atoms.windows(2).any(|w| w[0] == w[1]) {
            rep.violations.push((4, format!("repeated sibling atom under ({}, e{e})", n.atom)));
        }
        if n.children.len() != ev.power() {
            rep.violations.push((
                5,
                format!("({}, e{e}) has {} children, power {}", n.atom, n.children.len(), ev.power()),
            ));
        }
        for c in &n.children {
            visit(c, instance, rep);
        }
    }
    for t in &forest.trees {
        visit(t, instance, &mut rep);
    }
    rep
}

/// Shape of a forest: per tree, the child counts in depth-first order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnlabeledForest {
    pub trees: Vec<Vec<usize>>,
}

impl UnlabeledForest {
    /// Child counts `s_v` of the internal vertices.
    pub fn internal_counts(&self) -> Vec<usize> {
        self.trees.iter().flatten().copied().filter(|&c| c > 0).collect()
    }
}

pub fn strip_labels(forest: &WitnessForest) -> UnlabeledForest {
    UnlabeledForest {
        trees: forest
            .trees
            .iter()
            .map(|t| {
                let mut v = Vec::new();
                t.walk(&mut |n| v.push(n.children.len()));
                v
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub records: usize,
    pub distinct_forests: usize,
    /// Pairs of distinct records with equal forests.
    pub collisions: Vec<(usize, usize)>,
    /// Records for which no forest could be built.
    pub unbuildable: Vec<usize>,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Compares the forests of all records pairwise (through hashing).
pub fn injectivity_probe(records: &[Record], instance: &Instance) -> InjectivityReport {
    let mut seen: HashMap<WitnessForest, usize> = HashMap::new();
    let mut collisions = Vec::new();
    let mut unbuildable = Vec::new();
    for (i, r) in records.iter().enumerate() {
        match build_forest(r, instance) {
            Ok(f) => match seen.get(&f) {
                Some(&j) if records[j].steps != r.steps || records[j].phase_starts != r.phase_starts => {
                    collisions.push((j, i))
                }
                Some(_) => {}
                None => {
                    seen.insert(f, i);
                }
            },
            Err(_) => unbuildable.push(i),
        }
    }
    InjectivityReport { records: records.len(), distinct_forests: seen.len(), collisions, unbuildable }
}

/// All records with at most `max_len` steps that build into a forest
/// satisfying every property and whose phase roots strictly increase.
pub fn candidate_records(instance: &Instance, max_len: usize) -> Vec<Record> {
    let pairs: Vec<(AtomId, EventId)> =
        instance.events().iter().flat_map(|ev| ev.support().iter().map(move |&x| (x, ev.id()))).collect();
    let mut out = vec![Record { terminated: true, ..Record::default() }];
    let mut seqs: Vec<Vec<(AtomId, EventId)>> = vec![vec![]];
    for _ in 0..max_len {
        seqs = seqs
            .iter()
            .flat_map(|s| {
                pairs.iter().map(move |p| {
                    let mut t = s.clone();
                    t.push(*p);
                    t
                })
            })
            .collect();
        for s in &seqs {
            let n = s.len();
            // phase 0 starts at 0; every other index may start a phase
            for mask in 0..(1u32 << (n - 1)) {
                let mut starts = vec![0];
                starts.extend((1..n).filter(|i| mask & (1 << (i - 1)) != 0));
                let roots: Vec<AtomId> = starts.iter().map(|&i| s[i].0).collect();
                if roots.windows(2).any(|w| w[0] >= w[1]) {
                    continue;
                }
                let rec = Record { steps: s.clone(), phase_starts: starts, rng_seed: 0, terminated: true };
                if build_forest(&rec, instance).is_ok_and(|f| check_properties(&f, instance).ok()) {
                    out.push(rec);
                }
            }
        }
    }
    out
}

/// A sequence of `(x_i, e_i)` with `x_i ∈ supp(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSequence(Vec<(AtomId, EventId)>);

impl AdmissibleSequence {
    pub fn new(items: Vec<(AtomId, EventId)>, instance: &Instance) -> Result<Self> {
        for &(x, e) in &items {
            if e >= instance.events().len() {
                return Err(Error::InvalidArgument(format!("event {e} out of range")));
            }
            if !instance.event(e).contains(x) {
                return Err(Error::NotInSupport { atom: x, event: e });
            }
        }
        Ok(AdmissibleSequence(items))
    }

    pub fn items(&self) -> &[(AtomId, EventId)] {
        &self.0
    }

    /// `Π Prob(e_i)`.
    pub fn probability_bound(&self, instance: &Instance) -> f64 {
        self.0.iter().map(|&(_, e)| instance.event_probability(e)).product()
    }
}

/// Samples every variable, then for each `(x_i, e_i)` fails unless `e_i`
/// occurs, resampling `supp(e_i) \ S_{x_i}(e_i)` when it does.
pub fn s_check<R: Rng + ?Sized>(seq: &AdmissibleSequence, instance: &Instance, rng: &mut R) -> bool {
    let mut values = instance.sample(rng).0;
    for &(x, e) in seq.items() {
        let ev = instance.event(e);
        if !ev.occurs_in(instance.domains(), &values) {
            return false;
        }
        for &y in ev.resample_set(x).expect("admissible") {
            values[y] = instance.domains()[y].sample(rng);
        }
    }
    true
}

/// `Q_0..=Q_{n_max}` for `Q_n = Σ_s w_s Σ_{n_1+..+n_s = n-1} Π Q_{n_i}`.
pub fn q_n_sequence<T>(weights: &[(usize, T)], n_max: usize) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    let smax = weights.iter().map(|(s, _)| *s).max().unwrap_or(0);
    // pow[j][n] = [z^n] Q(z)^j
    let mut pow: Vec<Vec<T>> = vec![Vec::with_capacity(n_max + 1); smax + 1];
    let mut q: Vec<T> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let qn = if n == 0 {
            T::one()
        } else {
            weights.iter().fold(T::zero(), |acc, (s, w)| acc + w.clone() * pow[*s][n - 1].clone())
        };
        q.push(qn);
        pow[0].push(if n == 0 { T::one() } else { T::zero() });
        for j in 1..=smax {
            let mut c = T::zero();
            for i in 0..=n {
                c = c + q[i].clone() * pow[j - 1][n - i].clone();
            }
            pow[j].push(c);
        }
    }
    q
}

/// Above this `n` the plain floating-point recurrence is replaced by the
/// rescaled one.
pub const LOG_SPACE_FROM: usize = 200;

/// `ln Q_n` for `n = 0..=n_max`.
///
/// For `n_max > LOG_SPACE_FROM` the recurrence runs on `Q_n / c^n`, which
/// satisfies the same recurrence with weights `w_s / c`; `c` is the
/// minimised ratio of the spectrum.
pub fn q_n_log(weights: &[(usize, f64)], n_max: usize) -> Vec<f64> {
    let c = if n_max > LOG_SPACE_FROM && !weights.is_empty() {
        match PowerSpectrum::from_weights(weights.iter().copied().filter(|(_, w)| *w > 0.0)) {
            Ok(sp) if !sp.is_empty() => {
                let r = min_ratio(&sp).rho;
                if r.is_finite() && r > 0.0 {
                    r
                } else {
                    1.0
                }
            }
            _ => 1.0,
        }
    } else {
        1.0
    };
    let scaled: Vec<(usize, f64)> = weights.iter().map(|&(s, w)| (s, w / c)).collect();
    q_n_sequence(&scaled, n_max)
        .into_iter()
        .enumerate()
        .map(|(n, v)| v.ln() + n as f64 * c.ln())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoBoundReport {
    pub rho: f64,
    pub holds: bool,
    /// Largest `ln Q_n - n ln rho` over the range, with its `n`.
    pub worst: (usize, f64),
}

/// Checks `Q_n <= rho^n (1 + 1e-9)` for `n <= n_max` on a finite spectrum.
pub fn rho_bound_check(spectrum: &PowerSpectrum, n_max: usize) -> Result<RhoBoundReport> {
    if spectrum.tail().is_some() {
        return Err(Error::InvalidArgument("the counting recurrence needs a finite spectrum".into()));
    }
    let weights: Vec<(usize, f64)> = spectrum.finite_weights().into_iter().collect();
    let rho = if spectrum.is_empty() { 0.0 } else { min_ratio(spectrum).rho };
    let lq = q_n_log(&weights, n_max);
    let slack = 1e-9f64.ln_1p();
    let mut worst = (0, f64::NEG_INFINITY);
    let mut holds = true;
    for (n, &l) in lq.iter().enumerate() {
        let gap = if l == f64::NEG_INFINITY { f64::NEG_INFINITY } else { l - n as f64 * rho.ln() };
        if gap > worst.1 || (n == 0 && worst.1 == f64::NEG_INFINITY) {
            worst = (n, gap);
        }
        if gap > slack {
            holds = false;
        }
    }
    Ok(RhoBoundReport { rho, holds, worst })
}
