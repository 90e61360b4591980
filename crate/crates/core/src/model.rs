//! Atoms, domains, configurations and tempered events.
//!
//! Atoms are dense indices `0..m`; the total order on atoms is the index
//! order, and the total order on events is their id order inside an
//! [`Instance`]. Every event carries a precomputed seed `S_x` for each atom
//! `x` of its support together with the complementary resample set
//! `supp \ S_x`, so solvers never recompute seeds on the hot path.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};

pub type AtomId = usize;
pub type EventId = usize;

/// Largest support for which extension-backed events are inspected by
/// exhaustive subset search.
pub const EXTENSION_SUPPORT_CAP: usize = 20;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Finite value set `0..size` of one atom.
///
/// Values are sampled uniformly unless explicit weights are given. Optional
/// labels map value indices to the colour they represent; events compare
/// labels, which lets two atoms draw from different lists of equal size.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    size: usize,
    weights: Option<Vec<f64>>,
    labels: Option<Vec<u32>>,
}

impl Domain {
    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidDomain("size must be at least 1".into()));
        }
        Ok(Domain { size, weights: None, labels: None })
    }

    pub fn weighted(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDomain("size must be at least 1".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDomain("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidDomain(format!("weights sum to {total}, expected 1")));
        }
        Ok(Domain { size: weights.len(), weights: Some(weights), labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::InvalidDomain(format!(
                "{} labels for a domain of size {}",
                labels.len(),
                self.size
            )));
        }
        let distinct: BTreeSet<_> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidDomain("labels must be distinct".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.is_none()
    }

    pub fn prob(&self, value: usize) -> f64 {
        match &self.weights {
            Some(w) => w[value],
            None => 1.0 / self.size as f64,
        }
    }

    /// Colour carried by `value`; the value index itself when unlabeled.
    #[inline]
    pub fn label(&self, value: usize) -> u32 {
        match &self.labels {
            Some(l) => l[value],
            None => value as u32,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.weights {
            None => rng.gen_range(0..self.size),
            Some(w) => {
                let mut u: f64 = rng.gen();
                for (v, p) in w.iter().enumerate() {
                    if u < *p {
                        return v;
                    }
                    u -= p;
                }
                // rounding slack: fall back to the last value with mass
                w.iter().rposition(|p| *p > 0.0).unwrap_or(self.size - 1)
            }
        }
    }
}

/// Total assignment atom -> value index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration(pub Vec<usize>);

impl Configuration {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, atom: AtomId) -> usize {
        self.0[atom]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Assignment where `None` marks an unassigned (uncoloured) atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialConfiguration(pub Vec<Option<usize>>);

impl PartialConfiguration {
    pub fn unassigned(m: usize) -> Self {
        PartialConfiguration(vec![None; m])
    }

    pub fn get(&self, atom: AtomId) -> Option<usize> {
        self.0[atom]
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn to_total(&self) -> Option<Configuration> {
        self.0.iter().copied().collect::<Option<Vec<_>>>().map(Configuration)
    }
}

impl From<&Configuration> for PartialConfiguration {
    fn from(c: &Configuration) -> Self {
        PartialConfiguration(c.0.iter().map(|v| Some(*v)).collect())
    }
}

/// How an event decides occurrence on its scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Scope `(v_1, .., v_2n)` in path order; occurs iff the label of `v_i`
    /// equals the label of `v_{i+n}` for every `i`. Seed of `x` is the half
    /// of the scope not containing `x`.
    Repetitive,
    /// Occurs iff every scope atom carries the same label. Seed of `x` is the
    /// smallest scope atom other than `x`.
    Monochromatic,
    /// Explicit set of value tuples aligned with the scope order. Seeds are
    /// found by subset search; the canonical seed is the lexicographically
    /// smallest valid one.
    Extension(Vec<Vec<usize>>),
}

impl EventKind {
    pub fn tag(&self) -> &'static str {
        match self {
            EventKind::Repetitive => "repetitive",
            EventKind::Monochromatic => "monochromatic",
            EventKind::Extension(_) => "extension",
        }
    }
}

/// A tempered event with its seed rule resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    id: EventId,
    scope: Vec<AtomId>,
    support: Vec<AtomId>,
    kind: EventKind,
    kappa: usize,
    tidy: bool,
    // aligned with `support`
    seeds: Vec<Vec<AtomId>>,
    resample: Vec<Vec<AtomId>>,
}

impl Event {
    fn new(id: EventId, scope: Vec<AtomId>, kind: EventKind, domains: &[Domain]) -> Result<Self> {
        let m = domains.len();
        if scope.is_empty() {
            return Err(Error::InvalidEvent(format!("event {id}: empty support")));
        }
        for &x in &scope {
            if x >= m {
                return Err(Error::AtomOutOfRange { atom: x, m });
            }
        }
        let support: Vec<AtomId> = scope.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if support.len() != scope.len() {
            return Err(Error::InvalidEvent(format!("event {id}: repeated atom in support")));
        }
        if support.len() >= m {
            return Err(Error::InvalidEvent(format!(
                "event {id}: support must be a proper subset of the atoms"
            )));
        }
        let kind = match kind {
            EventKind::Repetitive if scope.len() % 2 != 0 => {
                return Err(Error::InvalidEvent(format!(
                    "event {id}: repetitive support must have even size"
                )))
            }
            EventKind::Monochromatic if scope.len() < 2 => {
                return Err(Error::InvalidEvent(format!(
                    "event {id}: monochromatic support needs at least two atoms"
                )))
            }
            EventKind::Extension(tuples) => {
                EventKind::Extension(normalize_tuples(id, &scope, tuples, domains)?)
            }
            k => k,
        };

        let mut ev = Event {
            id,
            scope,
            support,
            kind,
            kappa: 0,
            tidy: true,
            seeds: Vec::new(),
            resample: Vec::new(),
        };
        ev.resolve_seeds(domains)?;
        Ok(ev)
    }

    fn resolve_seeds(&mut self, domains: &[Domain]) -> Result<()> {
        let seeds: Vec<Vec<AtomId>> = match &self.kind {
            EventKind::Repetitive => {
                let n = self.scope.len() / 2;
                let (first, second) = self.scope.split_at(n);
                let sorted = |h: &[AtomId]| {
                    let mut v = h.to_vec();
                    v.sort_unstable();
                    v
                };
                let (first, second) = (sorted(first), sorted(second));
                self.support
                    .iter()
                    .map(|x| if first.binary_search(x).is_ok() { second.clone() } else { first.clone() })
                    .collect()
            }
            EventKind::Monochromatic => self
                .support
                .iter()
                .map(|&x| {
                    let y = *self.support.iter().find(|&&y| y != x).expect("support has two atoms");
                    vec![y]
                })
                .collect(),
            EventKind::Extension(tuples) => {
                if tuples.len() == 1 {
                    vec![Vec::new(); self.support.len()]
                } else {
                    match extension_seeds(&self.scope, &self.support, tuples, domains)? {
                        Some(s) => s,
                        None => {
                            self.tidy = false;
                            vec![Vec::new(); self.support.len()]
                        }
                    }
                }
            }
        };
        self.kappa = seeds.first().map_or(0, Vec::len);
        self.resample = self
            .support
            .iter()
            .zip(&seeds)
            .map(|(_, s)| self.support.iter().copied().filter(|y| s.binary_search(y).is_err()).collect())
            .collect();
        self.seeds = seeds;
        Ok(())
    }

    pub fn id(&self) -> EventId {
        self.id
    }

    /// Support in the event's own order (path order for path events).
    pub fn scope(&self) -> &[AtomId] {
        &self.scope
    }

    /// Support sorted by atom order.
    pub fn support(&self) -> &[AtomId] {
        &self.support
    }

    pub fn kind(&self) -> &EventKind {
        &self.kind
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.support.binary_search(&atom).is_ok()
    }

    /// Size of the seeds; 0 for elementary or non-tidy events.
    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn is_tidy(&self) -> bool {
        self.tidy
    }

    pub fn is_elementary(&self) -> bool {
        matches!(&self.kind, EventKind::Extension(t) if t.len() == 1)
    }

    /// `|supp| - kappa`.
    pub fn power(&self) -> usize {
        self.support.len() - self.kappa
    }

    pub fn seed_for(&self, atom: AtomId) -> Result<&[AtomId]> {
        let i = self.position(atom)?;
        Ok(&self.seeds[i])
    }

    /// `supp \ S_x`, sorted; always contains `atom`.
    pub fn resample_set(&self, atom: AtomId) -> Result<&[AtomId]> {
        let i = self.position(atom)?;
        Ok(&self.resample[i])
    }

    fn position(&self, atom: AtomId) -> Result<usize> {
        self.support
            .binary_search(&atom)
            .map_err(|_| Error::NotInSupport { atom, event: self.id })
    }

    /// Occurrence under an assignment given by `value`; `None` as soon as a
    /// support atom is unassigned.
    pub fn occurs_by<F>(&self, domains: &[Domain], value: F) -> Option<bool>
    where
        F: Fn(AtomId) -> Option<usize>,
    {
        let mut vals = Vec::with_capacity(self.scope.len());
        for &x in &self.scope {
            vals.push(value(x)?);
        }
        Some(self.occurs_on(domains, &vals))
    }

    /// Occurrence on a total assignment indexed by atom.
    #[inline]
    pub fn occurs_in(&self, domains: &[Domain], values: &[usize]) -> bool {
        let label = |x: AtomId| domains[x].label(values[x]);
        match &self.kind {
            EventKind::Repetitive => {
                let n = self.scope.len() / 2;
                (0..n).all(|i| label(self.scope[i]) == label(self.scope[i + n]))
            }
            EventKind::Monochromatic => {
                let c = label(self.scope[0]);
                self.scope[1..].iter().all(|&x| label(x) == c)
            }
            EventKind::Extension(tuples) => tuples
                .binary_search_by(|t| {
                    t.iter()
                        .zip(&self.scope)
                        .map(|(v, x)| v.cmp(&values[*x]))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .is_ok(),
        }
    }

    // values aligned with scope
    fn occurs_on(&self, domains: &[Domain], vals: &[usize]) -> bool {
        let label = |i: usize| domains[self.scope[i]].label(vals[i]);
        match &self.kind {
            EventKind::Repetitive => {
                let n = self.scope.len() / 2;
                (0..n).all(|i| label(i) == label(i + n))
            }
            EventKind::Monochromatic => (1..self.scope.len()).all(|i| label(i) == label(0)),
            EventKind::Extension(tuples) => tuples.binary_search_by(|t| t.as_slice().cmp(vals)).is_ok(),
        }
    }

    /// Exact probability under independent sampling of the atoms.
    pub fn probability(&self, domains: &[Domain]) -> f64 {
        match &self.kind {
            EventKind::Repetitive => {
                let n = self.scope.len() / 2;
                (0..n)
                    .map(|i| label_agreement(&domains[self.scope[i]], &domains[self.scope[i + n]]))
                    .product()
            }
            EventKind::Monochromatic => {
                let first = &domains[self.scope[0]];
                let colours: BTreeSet<u32> = (0..first.size()).map(|v| first.label(v)).collect();
                colours
                    .into_iter()
                    .map(|c| {
                        self.scope
                            .iter()
                            .map(|&x| {
                                let d = &domains[x];
                                (0..d.size()).filter(|&v| d.label(v) == c).map(|v| d.prob(v)).sum::<f64>()
                            })
                            .product::<f64>()
                    })
                    .sum()
            }
            EventKind::Extension(tuples) => tuples
                .iter()
                .map(|t| t.iter().zip(&self.scope).map(|(v, x)| domains[*x].prob(*v)).product::<f64>())
                .sum(),
        }
    }
}

fn label_agreement(a: &Domain, b: &Domain) -> f64 {
    let mut p = 0.0;
    for u in 0..a.size() {
        for v in 0..b.size() {
            if a.label(u) == b.label(v) {
                p += a.prob(u) * b.prob(v);
            }
        }
    }
    p
}

fn normalize_tuples(
    id: EventId,
    scope: &[AtomId],
    tuples: Vec<Vec<usize>>,
    domains: &[Domain],
) -> Result<Vec<Vec<usize>>> {
    if tuples.is_empty() {
        return Err(Error::InvalidEvent(format!("event {id}: empty configuration set")));
    }
    for t in &tuples {
        if t.len() != scope.len() {
            return Err(Error::InvalidEvent(format!(
                "event {id}: tuple of length {} for support of size {}",
                t.len(),
                scope.len()
            )));
        }
        for (v, &x) in t.iter().zip(scope) {
            if *v >= domains[x].size() {
                return Err(Error::ValueOutOfDomain { atom: x, value: *v });
            }
        }
    }
    let set: BTreeSet<Vec<usize>> = tuples.into_iter().collect();
    let total: usize = scope.iter().map(|&x| domains[x].size()).product();
    if set.len() == total {
        return Err(Error::InvalidEvent(format!("event {id}: complement is empty")));
    }
    Ok(set.into_iter().collect())
}

/// Canonical seeds for an extension event, or `None` when it is not tidy.
fn extension_seeds(
    scope: &[AtomId],
    support: &[AtomId],
    tuples: &[Vec<usize>],
    domains: &[Domain],
) -> Result<Option<Vec<Vec<AtomId>>>> {
    if support.len() > EXTENSION_SUPPORT_CAP {
        return Err(Error::EnumerationCap { size: support.len(), cap: EXTENSION_SUPPORT_CAP });
    }
    let pos = |x: AtomId| scope.iter().position(|&y| y == x).expect("atom in scope");
    let mut out = Vec::with_capacity(support.len());
    for &y in support {
        let others: Vec<AtomId> = support.iter().copied().filter(|&z| z != y).collect();
        let mut best: Option<Vec<AtomId>> = None;
        for mask in 1u32..(1u32 << others.len()) {
            let cand: Vec<AtomId> =
                others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &z)| z).collect();
            if best.as_ref().is_some_and(|b| *b <= cand) {
                continue;
            }
            let idx: Vec<usize> = cand.iter().map(|&z| pos(z)).collect();
            let cells: usize = cand.iter().map(|&z| domains[z].size()).product();
            if cells != tuples.len() {
                continue;
            }
            let projected: BTreeSet<Vec<usize>> =
                tuples.iter().map(|t| idx.iter().map(|&i| t[i]).collect()).collect();
            if projected.len() == cells {
                best = Some(cand);
            }
        }
        match best {
            Some(s) => out.push(s),
            None => return Ok(None),
        }
    }
    let kappa = out[0].len();
    if out.iter().any(|s| s.len() != kappa) {
        return Ok(None);
    }
    Ok(Some(out))
}

/// Simple graph on events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventGraph {
    adj: Vec<Vec<EventId>>,
}

impl EventGraph {
    /// Builds a graph from an edge list; self-loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: &[(EventId, EventId)]) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        EventGraph { adj: adj.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, e: EventId) -> &[EventId] {
        &self.adj[e]
    }

    pub fn adjacent(&self, a: EventId, b: EventId) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// `Γ*(e)`: the neighbours of `e` together with `e`, sorted.
    pub fn closed_neighborhood(&self, e: EventId) -> Vec<EventId> {
        let mut v = self.adj[e].clone();
        let at = v.binary_search(&e).unwrap_err();
        v.insert(at, e);
        v
    }
}

/// Atoms with their domains plus an ordered family of events.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    domains: Vec<Domain>,
    events: Vec<Event>,
    atom_events: Vec<Vec<EventId>>,
}

impl Instance {
    /// Assigns event ids in the given order.
    pub fn new(domains: Vec<Domain>, events: Vec<(Vec<AtomId>, EventKind)>) -> Result<Self> {
        if domains.is_empty() {
            return Err(Error::InvalidArgument("instance needs at least one atom".into()));
        }
        let events = events
            .into_iter()
            .enumerate()
            .map(|(id, (scope, kind))| Event::new(id, scope, kind, &domains))
            .collect::<Result<Vec<_>>>()?;
        let mut atom_events = vec![Vec::new(); domains.len()];
        for ev in &events {
            for &x in ev.support() {
                atom_events[x].push(ev.id());
            }
        }
        Ok(Instance { domains, events, atom_events })
    }

    pub fn uniform(m: usize, k: usize, events: Vec<(Vec<AtomId>, EventKind)>) -> Result<Self> {
        let d = Domain::uniform(k)?;
        Instance::new(vec![d; m], events)
    }

    pub fn num_atoms(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id]
    }

    /// `F(y)`: ids of events whose support contains `atom`, ascending.
    pub fn events_containing(&self, atom: AtomId) -> &[EventId] {
        &self.atom_events[atom]
    }

    /// Common domain size when every atom is uniform over the same number
    /// of values.
    pub fn uniform_k(&self) -> Option<usize> {
        let k = self.domains[0].size();
        self.domains.iter().all(|d| d.is_uniform() && d.size() == k).then_some(k)
    }

    pub fn occurs(&self, event: EventId, config: &PartialConfiguration) -> Result<bool> {
        let ev = &self.events[event];
        for &x in ev.scope() {
            match config.get(x) {
                None => return Err(Error::PartialConfiguration(x)),
                Some(v) if v >= self.domains[x].size() => {
                    return Err(Error::ValueOutOfDomain { atom: x, value: v })
                }
                Some(_) => {}
            }
        }
        Ok(ev.occurs_by(&self.domains, |x| config.get(x)).expect("support assigned"))
    }

    pub fn event_probability(&self, event: EventId) -> f64 {
        self.events[event].probability(&self.domains)
    }

    /// Edge `{e, e'}` iff the supports intersect.
    pub fn natural_dependency_graph(&self) -> EventGraph {
        let mut edges = Vec::new();
        for list in &self.atom_events {
            for (i, &a) in list.iter().enumerate() {
                for &b in &list[i + 1..] {
                    edges.push((a, b));
                }
            }
        }
        EventGraph::from_edges(self.events.len(), &edges)
    }

    pub fn validate(&self, config: &Configuration) -> Result<()> {
        if config.len() != self.num_atoms() {
            return Err(Error::InvalidArgument(format!(
                "configuration has {} atoms, instance has {}",
                config.len(),
                self.num_atoms()
            )));
        }
        for (x, &v) in config.values().iter().enumerate() {
            if v >= self.domains[x].size() {
                return Err(Error::ValueOutOfDomain { atom: x, value: v });
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        Configuration(self.domains.iter().map(|d| d.sample(rng)).collect())
    }

    /// Text form with `[atoms]`, `[domains]` and `[events]` sections.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("[atoms]\n");
        let _ = writeln!(s, "count {}", self.num_atoms());
        s.push_str("[domains]\n");
        if self.domains.iter().all(|d| *d == self.domains[0]) {
            let _ = writeln!(s, "all {}", domain_text(&self.domains[0]));
        } else {
            for (x, d) in self.domains.iter().enumerate() {
                let _ = writeln!(s, "atom {x} {}", domain_text(d));
            }
        }
        s.push_str("[events]\n");
        for ev in &self.events {
            s.push_str(ev.kind.tag());
            for x in &ev.scope {
                let _ = write!(s, " {x}");
            }
            if let EventKind::Extension(tuples) = &ev.kind {
                s.push_str(" :");
                for (i, t) in tuples.iter().enumerate() {
                    if i > 0 {
                        s.push_str(" ;");
                    }
                    for v in t {
                        let _ = write!(s, " {v}");
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Atoms,
            Domains,
            Events,
        }
        let mut section = Section::None;
        let mut count: Option<usize> = None;
        let mut default: Option<Domain> = None;
        let mut per_atom: Vec<(usize, Domain, usize)> = Vec::new();
        let mut events = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            match line {
                "[atoms]" => {
                    section = Section::Atoms;
                    continue;
                }
                "[domains]" => {
                    section = Section::Domains;
                    continue;
                }
                "[events]" => {
                    section = Section::Events;
                    continue;
                }
                _ => {}
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match section {
                Section::None => return Err(err("content before the first section".into())),
                Section::Atoms => match toks.as_slice() {
                    ["count", n] => count = Some(parse_num(n, line_no)?),
                    _ => return Err(err(format!("expected `count <m>`, got `{line}`"))),
                },
                Section::Domains => match toks.first() {
                    Some(&"all") => default = Some(parse_domain(&toks[1..], line_no)?),
                    Some(&"atom") if toks.len() >= 3 => {
                        let x = parse_num(toks[1], line_no)?;
                        per_atom.push((x, parse_domain(&toks[2..], line_no)?, line_no));
                    }
                    _ => return Err(err(format!("unrecognised domain line `{line}`"))),
                },
                Section::Events => events.push(parse_event(&toks, line_no)?),
            }
        }
        let m = count.ok_or(Error::Parse { line: 0, msg: "missing [atoms] count".into() })?;
        let mut domains: Vec<Option<Domain>> = vec![default; m];
        for (x, d, line) in per_atom {
            if x >= m {
                return Err(Error::Parse { line, msg: format!("atom {x} out of range") });
            }
            domains[x] = Some(d);
        }
        let domains = domains
            .into_iter()
            .enumerate()
            .map(|(x, d)| d.ok_or(Error::Parse { line: 0, msg: format!("atom {x} has no domain") }))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(domains, events)
    }
}

fn domain_text(d: &Domain) -> String {
    let mut s = format!("size {}", d.size());
    if let Some(w) = d.weights() {
        s.push_str(" weights");
        for p in w {
            let _ = write!(s, " {p}");
        }
    }
    if let Some(l) = d.labels() {
        s.push_str(" labels");
        for c in l {
            let _ = write!(s, " {c}");
        }
    }
    s
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad number `{tok}`") })
}

fn parse_domain(toks: &[&str], line: usize) -> Result<Domain> {
    let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut it = toks.iter().peekable();
    if it.next() != Some(&"size") {
        return Err(err("domain must start with `size <k>`"));
    }
    let size: usize = parse_num(it.next().ok_or_else(|| err("missing size"))?, line)?;
    let mut weights = None;
    let mut labels = None;
    while let Some(key) = it.next() {
        let mut vals = Vec::new();
        while let Some(t) = it.peek() {
            if **t == "weights" || **t == "labels" {
                break;
            }
            vals.push(*it.next().unwrap());
        }
        match *key {
            "weights" => weights = Some(vals.iter().map(|t| parse_num::<f64>(t, line)).collect::<Result<Vec<_>>>()?),
            "labels" => labels = Some(vals.iter().map(|t| parse_num::<u32>(t, line)).collect::<Result<Vec<_>>>()?),
            other => return Err(err(&format!("unknown domain key `{other}`"))),
        }
    }
    let d = match weights {
        Some(w) => {
            if w.len() != size {
                return Err(err("weight count differs from size"));
            }
            Domain::weighted(w)
        }
        None => Domain::uniform(size),
    }
    .map_err(|e| err(&e.to_string()))?;
    match labels {
        Some(l) => d.with_labels(l).map_err(|e| err(&e.to_string())),
        None => Ok(d),
    }
}

fn parse_event(toks: &[&str], line: usize) -> Result<(Vec<AtomId>, EventKind)> {
    let err = |msg: String| Error::Parse { line, msg };
    let (tag, rest) = toks.split_first().ok_or_else(|| err("empty event".into()))?;
    match *tag {
        "repetitive" | "monochromatic" => {
            let scope = rest.iter().map(|t| parse_num(t, line)).collect::<Result<Vec<_>>>()?;
            let kind = if *tag == "repetitive" { EventKind::Repetitive } else { EventKind::Monochromatic };
            Ok((scope, kind))
        }
        "extension" => {
            let colon = rest.iter().position(|t| *t == ":").ok_or_else(|| err("extension needs `:`".into()))?;
            let scope = rest[..colon].iter().map(|t| parse_num(t, line)).collect::<Result<Vec<_>>>()?;
            let tuples = rest[colon + 1..]
                .split(|t| *t == ";")
                .map(|chunk| chunk.iter().map(|t| parse_num(t, line)).collect::<Result<Vec<usize>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok((scope, EventKind::Extension(tuples)))
        }
        other => Err(err(format!("unknown event kind `{other}`"))),
    }
}

/// Probability of `event` by enumerating every assignment of its support.
/// Independent of the closed forms used by [`Event::probability`].
pub fn enumerate_probability(instance: &Instance, event: EventId, cap: usize) -> Result<f64> {
    let ev = instance.event(event);
    let doms: Vec<&Domain> = ev.scope().iter().map(|&x| &instance.domains()[x]).collect();
    let cells = doms.iter().try_fold(1usize, |acc, d| acc.checked_mul(d.size()));
    match cells {
        Some(c) if c <= cap => {}
        _ => return Err(Error::EnumerationCap { size: ev.scope().len(), cap }),
    }
    let mut vals = vec![0usize; doms.len()];
    let mut total = 0.0;
    loop {
        if ev.occurs_on(instance.domains(), &vals) {
            total += vals.iter().zip(&doms).map(|(v, d)| d.prob(*v)).product::<f64>();
        }
        let mut i = 0;
        loop {
            if i == vals.len() {
                return Ok(total);
            }
            vals[i] += 1;
            if vals[i] < doms[i].size() {
                break;
            }
            vals[i] = 0;
            i += 1;
        }
    }
}
