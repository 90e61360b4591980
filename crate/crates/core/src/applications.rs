//! Nonrepetitive vertex coloring, facial Thue edge list-coloring and
//! frugal coloring: instance builders, analytic spectra and bounds, and
//! solution checkers that do not reuse the builders' enumerators.

use std::collections::{BTreeMap, BTreeSet};

use crate::criteria::{min_ratio, GeometricTail, PowerSpectrum, Verdict};
use crate::error::{Error, Result};
use crate::graph::{FaceSet, SimpleGraph};
use crate::model::{Configuration, Domain, EventKind, Instance};

#[derive(Clone, Debug, PartialEq)]
pub struct NonrepetitiveSpec {
    pub graph: SimpleGraph,
    pub k: usize,
    pub l_max: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FacialThueSpec {
    pub graph: SimpleGraph,
    pub faces: FaceSet,
    /// One list of `k` distinct colors per edge, indexed by edge id.
    pub lists: Vec<Vec<u32>>,
    pub l_max: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrugalSpec {
    pub graph: SimpleGraph,
    pub k: usize,
    pub beta: usize,
}

fn check_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    Ok(())
}

impl NonrepetitiveSpec {
    pub fn new(graph: SimpleGraph, k: usize, l_max: usize) -> Result<Self> {
        check_positive("k", k)?;
        check_positive("L_max", l_max)?;
        Ok(NonrepetitiveSpec { graph, k, l_max })
    }
}

impl FacialThueSpec {
    pub fn new(graph: SimpleGraph, faces: FaceSet, lists: Vec<Vec<u32>>, l_max: usize) -> Result<Self> {
        check_positive("L_max", l_max)?;
        if lists.len() != graph.edges().len() {
            return Err(Error::InvalidArgument(format!(
                "{} lists for {} edges",
                lists.len(),
                graph.edges().len()
            )));
        }
        let k = lists.first().map_or(0, Vec::len);
        if k == 0 || lists.iter().any(|l| l.len() != k) {
            return Err(Error::InvalidArgument("all lists must have the same positive size".into()));
        }
        Ok(FacialThueSpec { graph, faces, lists, l_max })
    }

    /// Every edge gets the list `0..k`.
    pub fn identical_lists(graph: SimpleGraph, faces: FaceSet, k: usize, l_max: usize) -> Result<Self> {
        let lists = vec![(0..k as u32).collect(); graph.edges().len()];
        FacialThueSpec::new(graph, faces, lists, l_max)
    }

    pub fn k(&self) -> usize {
        self.lists[0].len()
    }
}

impl FrugalSpec {
    pub fn new(graph: SimpleGraph, k: usize, beta: usize) -> Result<Self> {
        check_positive("k", k)?;
        check_positive("beta", beta)?;
        Ok(FrugalSpec { graph, k, beta })
    }
}

/// One event per simple path with `2n` vertices, `n <= L_max`, shortest
/// paths first. The seed of a path event is the half not containing the
/// queried vertex.
pub fn build_nonrepetitive_instance(spec: &NonrepetitiveSpec) -> Result<Instance> {
    let mut events = Vec::new();
    for n in 1..=spec.l_max {
        events.extend(spec.graph.even_paths(n).into_iter().map(|p| (p, EventKind::Repetitive)));
    }
    Instance::uniform(spec.graph.num_vertices(), spec.k, events)
}

/// Atoms are edges (by edge id) choosing from their lists. One event per
/// facial path with `2n` edges, `n <= L_max`; windows that impose the same
/// equalities on the same edges are merged.
pub fn build_facial_thue_instance(spec: &FacialThueSpec) -> Result<Instance> {
    let mut seen = BTreeSet::new();
    let mut events = Vec::new();
    for n in 1..=spec.l_max {
        for p in spec.faces.facial_paths(&spec.graph, n) {
            let mut edges = p.clone();
            edges.sort_unstable();
            let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (p[i].min(p[i + n]), p[i].max(p[i + n]))).collect();
            pairs.sort_unstable();
            if seen.insert((edges, pairs)) {
                events.push((p, EventKind::Repetitive));
            }
        }
    }
    let domains = spec
        .lists
        .iter()
        .map(|l| Domain::uniform(l.len())?.with_labels(l.clone()))
        .collect::<Result<Vec<_>>>()?;
    Instance::new(domains, events)
}

/// Monochromatic edges (power 1) followed by monochromatic `β`-stars
/// (power `β`).
pub fn build_frugal_instance(spec: &FrugalSpec) -> Result<Instance> {
    let mut events: Vec<_> = spec.graph.edges().iter().map(|&(u, v)| (vec![u, v], EventKind::Monochromatic)).collect();
    events.extend(spec.graph.all_stars(spec.beta).into_iter().map(|s| (s, EventKind::Monochromatic)));
    Instance::uniform(spec.graph.num_vertices(), spec.k, events)
}

/// `d_s = s Δ^{2s-1}`, `p_s = k^{-s}` for all `s >= 1`.
pub fn nonrepetitive_spectrum(delta: usize, k: f64) -> Result<PowerSpectrum> {
    check_positive("delta", delta)?;
    let d = delta as f64;
    PowerSpectrum::uniform(k, std::iter::empty())?.with_tail(GeometricTail {
        start: 1,
        d_coeff: 1.0 / d,
        d_poly: vec![0.0, 1.0],
        d_ratio: d * d,
        p_coeff: 1.0,
        p_ratio: 1.0 / k,
    })
}

/// `d_s = 4s`, `p_s = k^{-s}` for all `s >= 1`.
pub fn facial_thue_spectrum(k: f64) -> Result<PowerSpectrum> {
    PowerSpectrum::uniform(k, std::iter::empty())?.with_tail(GeometricTail {
        start: 1,
        d_coeff: 4.0,
        d_poly: vec![0.0, 1.0],
        d_ratio: 1.0,
        p_coeff: 1.0,
        p_ratio: 1.0 / k,
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `d_1 = Δ`, `d_β = Δ^{1+β}/β!` (merged into one term when `β = 1`),
/// `p_s = k^{-s}`.
pub fn frugal_spectrum(delta: usize, beta: usize, k: f64) -> Result<PowerSpectrum> {
    check_positive("beta", beta)?;
    let d = delta as f64;
    let mut deg: BTreeMap<usize, f64> = BTreeMap::new();
    *deg.entry(1).or_default() += d;
    *deg.entry(beta).or_default() += d.powi(beta as i32 + 1) / factorial(beta);
    PowerSpectrum::uniform(k, deg)
}

/// `(sqrt((8b+9)^3) + 8b^2 + 36b + 27) / (8b^3)`, strictly decreasing in `b`.
pub fn b0_lhs(b: f64) -> f64 {
    ((8.0 * b + 9.0).powf(1.5) + 8.0 * b * b + 36.0 * b + 27.0) / (8.0 * b * b * b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonrepetitiveBounds {
    pub delta: usize,
    pub b0: f64,
    /// `|b0_lhs(b0) - Δ|`.
    pub residual: f64,
    /// `(1 + b0) Δ²`.
    pub pi_bound: f64,
    /// `Δ² + Δ^{3/2} [3/2^{2/3} + 2^{2/3}/(Δ^{1/3} - 2^{1/3})]`; `None` for
    /// `Δ <= 2`.
    pub gmp_bound: Option<f64>,
}

pub fn nonrepetitive_bounds(delta: usize) -> Result<NonrepetitiveBounds> {
    check_positive("delta", delta)?;
    let d = delta as f64;
    // bisection in ln b
    let (mut lo, mut hi) = ((1e-9f64).ln(), (1e9f64).ln());
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if b0_lhs(mid.exp()) > d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b0 = [lo.exp(), hi.exp()]
        .into_iter()
        .min_by(|a, b| (b0_lhs(*a) - d).abs().total_cmp(&(b0_lhs(*b) - d).abs()))
        .expect("two candidates");
    let gmp_bound = (delta > 2).then(|| {
        let c = 2f64.powf(2.0 / 3.0);
        d * d + d.powf(1.5) * (3.0 / c + c / (d.cbrt() - 2f64.cbrt()))
    });
    Ok(NonrepetitiveBounds { delta, b0, residual: (b0_lhs(b0) - d).abs(), pi_bound: (1.0 + b0) * d * d, gmp_bound })
}

/// `ξ_0 = (sqrt(9 + 8b) - 3)/4`.
pub fn nonrepetitive_xi0(b: f64) -> f64 {
    ((9.0 + 8.0 * b).sqrt() - 3.0) / 4.0
}

/// Smallest integer `k >= 1` whose spectrum passes the strict min-ratio
/// criterion; `None` when none does up to `k_max`.
pub fn smallest_k<F>(spectrum_at: F, k_max: u64) -> Option<u64>
where
    F: Fn(f64) -> Result<PowerSpectrum>,
{
    let holds = |k: u64| spectrum_at(k as f64).is_ok_and(|sp| min_ratio(&sp).verdict() == Verdict::Holds);
    // the criterion is monotone in k: find a passing k, then bisect
    let mut hi = 1u64;
    while !holds(hi) {
        if hi >= k_max {
            return None;
        }
        hi = (hi * 2).min(k_max);
    }
    if hi == 1 {
        return Some(1);
    }
    // hi / 2 failed, or lies below a value that failed
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrugalBound {
    pub delta: usize,
    pub beta: usize,
    /// `Δ^{1+1/β}/(β!)^{1/β} · β(β-1)^{1/β-1} + Δ`; `None` for `β = 1`.
    pub closed_form: Option<f64>,
    /// Smallest `k` passing the min-ratio criterion on [`frugal_spectrum`].
    pub generic_k: Option<u64>,
}

pub fn frugal_bound(delta: usize, beta: usize) -> Result<FrugalBound> {
    check_positive("delta", delta)?;
    check_positive("beta", beta)?;
    let d = delta as f64;
    let b = beta as f64;
    let closed_form = (beta >= 2)
        .then(|| d.powf(1.0 + 1.0 / b) / factorial(beta).powf(1.0 / b) * b * (b - 1.0).powf(1.0 / b - 1.0) + d);
    let generic_k = smallest_k(|k| frugal_spectrum(delta, beta, k), 1 << 40);
    Ok(FrugalBound { delta, beta, closed_form, generic_k })
}

/// A specification of any of the three problems.
#[derive(Clone, Debug, PartialEq)]
pub enum Application {
    Nonrepetitive(NonrepetitiveSpec),
    FacialThue(FacialThueSpec),
    Frugal(FrugalSpec),
}

impl Application {
    pub fn name(&self) -> &'static str {
        match self {
            Application::Nonrepetitive(_) => "nonrepetitive",
            Application::FacialThue(_) => "facial-thue",
            Application::Frugal(_) => "frugal",
        }
    }

    pub fn build_instance(&self) -> Result<Instance> {
        match self {
            Application::Nonrepetitive(s) => build_nonrepetitive_instance(s),
            Application::FacialThue(s) => build_facial_thue_instance(s),
            Application::Frugal(s) => build_frugal_instance(s),
        }
    }

    /// Spectrum from the analytic degree bounds (over all path lengths for
    /// the path problems).
    pub fn analytic_spectrum(&self) -> Result<PowerSpectrum> {
        match self {
            Application::Nonrepetitive(s) => nonrepetitive_spectrum(s.graph.max_degree().max(1), s.k as f64),
            Application::FacialThue(s) => facial_thue_spectrum(s.k() as f64),
            Application::Frugal(s) => frugal_spectrum(s.graph.max_degree(), s.beta, s.k as f64),
        }
    }

    pub fn verify(&self, config: &Configuration) -> bool {
        match self {
            Application::Nonrepetitive(s) => verify_nonrepetitive(s, config),
            Application::FacialThue(s) => verify_facial_thue(s, config),
            Application::Frugal(s) => verify_frugal(s, config),
        }
    }
}

fn repetitive<T: PartialEq>(seq: &[T]) -> bool {
    let n = seq.len() / 2;
    seq.len() % 2 == 0 && n > 0 && (0..n).all(|i| seq[i] == seq[i + n])
}

/// Exhaustive scan of every simple path with at most `2 L_max` vertices.
pub fn verify_nonrepetitive(spec: &NonrepetitiveSpec, config: &Configuration) -> bool {
    let g = &spec.graph;
    if config.len() != g.num_vertices() {
        return false;
    }
    fn dfs(g: &SimpleGraph, colors: &[usize], path: &mut Vec<usize>, limit: usize) -> bool {
        let c: Vec<usize> = path.iter().map(|&v| colors[v]).collect();
        if repetitive(&c) {
            return false;
        }
        if path.len() == limit {
            return true;
        }
        let tip = *path.last().expect("nonempty");
        for &w in g.neighbors(tip) {
            if !path.contains(&w) {
                path.push(w);
                let ok = dfs(g, colors, path, limit);
                path.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    (0..g.num_vertices()).all(|v| dfs(g, config.values(), &mut vec![v], 2 * spec.l_max))
}

/// Every window of `2n <= 2 L_max` consecutive distinct edges on a face
/// boundary, colored through the lists.
pub fn verify_facial_thue(spec: &FacialThueSpec, config: &Configuration) -> bool {
    let m = spec.graph.edges().len();
    if config.len() != m || (0..m).any(|e| config.get(e) >= spec.lists[e].len()) {
        return false;
    }
    let color = |e: usize| spec.lists[e][config.get(e)];
    for f in spec.faces.faces() {
        let l = f.len();
        let ring: Vec<usize> = (0..l)
            .map(|j| {
                let (u, v) = (f[j], f[(j + 1) % l]);
                spec.graph.edges().iter().position(|&(a, b)| (a, b) == (u.min(v), u.max(v))).expect("face edge")
            })
            .collect();
        for n in 1..=spec.l_max {
            if 2 * n > l {
                break;
            }
            for start in 0..l {
                let window: Vec<usize> = (0..2 * n).map(|t| ring[(start + t) % l]).collect();
                let mut sorted = window.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != window.len() {
                    continue;
                }
                let colors: Vec<u32> = window.iter().map(|&e| color(e)).collect();
                if repetitive(&colors) {
                    return false;
                }
            }
        }
    }
    true
}

/// Proper, and no color appears more than `β` times around any vertex.
pub fn verify_frugal(spec: &FrugalSpec, config: &Configuration) -> bool {
    let g = &spec.graph;
    if config.len() != g.num_vertices() {
        return false;
    }
    for v in 0..g.num_vertices() {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for &w in g.neighbors(v) {
            if config.get(w) == config.get(v) {
                return false;
            }
            *count.entry(config.get(w)).or_default() += 1;
        }
        if count.values().any(|&c| c > spec.beta) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::d_s_exact;

    fn binom(n: usize, r: usize) -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn nonrepetitive_builder_examples() {
        let single = SimpleGraph::path(3);
        let inst = build_nonrepetitive_instance(&NonrepetitiveSpec::new(SimpleGraph::path(2), 3, 1).unwrap());
        // a single edge has both vertices in its only event
        assert!(inst.is_err());
        let inst = build_nonrepetitive_instance(&NonrepetitiveSpec::new(single, 3, 1).unwrap()).unwrap();
        assert_eq!(inst.events().len(), 2);
        assert!(inst.events().iter().all(|e| e.power() == 1));
        let c4 = build_nonrepetitive_instance(&NonrepetitiveSpec::new(SimpleGraph::cycle(4), 5, 1).unwrap()).unwrap();
        assert_eq!(c4.events().len(), 4);
        let g = SimpleGraph::grid(3, 3);
        let inst = build_nonrepetitive_instance(&NonrepetitiveSpec::new(g, 5, 2).unwrap()).unwrap();
        for ev in inst.events() {
            let n = ev.support().len() / 2;
            assert_eq!(ev.power(), n);
            assert!((inst.event_probability(ev.id()) - 5f64.powi(-(n as i32))).abs() < 1e-15);
        }
    }

    #[test]
    fn analytic_degree_bounds_hold() {
        for (w, h) in [(3, 3), (4, 2), (5, 4)] {
            let g = SimpleGraph::grid(w, h);
            let delta = g.max_degree();
            let inst = build_nonrepetitive_instance(&NonrepetitiveSpec::new(g.clone(), 4, 2).unwrap()).unwrap();
            for s in 1..=2 {
                assert!(d_s_exact(&inst, s) <= s * delta.pow(2 * s as u32 - 1));
            }
            for beta in 1..=3 {
                let fr = build_frugal_instance(&FrugalSpec::new(g.clone(), 4, beta).unwrap()).unwrap();
                let stars = fr.events().iter().filter(|e| e.support().len() == beta + 1).count();
                assert_eq!(stars, g.all_stars(beta).len() + if beta == 1 { g.edges().len() } else { 0 });
                if beta >= 2 {
                    assert!(d_s_exact(&fr, beta) <= delta * binom(delta, beta));
                    assert_eq!(d_s_exact(&fr, 1), delta);
                }
            }
        }
    }

    fn square_faces() -> (SimpleGraph, FaceSet) {
        // two squares sharing edge 1-4: 0-1-4-3 and 1-2-5-4
        let g = SimpleGraph::grid(3, 2);
        let faces = FaceSet::new(&g, vec![vec![0, 1, 4, 3], vec![1, 2, 5, 4], vec![0, 1, 2, 5, 4, 3]]).unwrap();
        (g, faces)
    }

    #[test]
    fn facial_builder() {
        let (g, faces) = square_faces();
        let spec = FacialThueSpec::identical_lists(g.clone(), faces, 4, 2).unwrap();
        let inst = build_facial_thue_instance(&spec).unwrap();
        for ev in inst.events() {
            let n = ev.support().len() / 2;
            assert_eq!(ev.power(), n);
            assert!((inst.event_probability(ev.id()) - 4f64.powi(-(n as i32))).abs() < 1e-15);
        }
        for n in 1..=2 {
            for e in 0..g.edges().len() {
                let count = spec.faces.facial_paths(&g, n).iter().filter(|p| p.contains(&e)).count();
                assert!(count <= 4 * n);
            }
        }
        let tri = SimpleGraph::complete(3);
        let tri_faces = FaceSet::new(&tri, vec![vec![0, 1, 2]]).unwrap();
        let one = build_facial_thue_instance(&FacialThueSpec::identical_lists(tri, tri_faces, 3, 1).unwrap()).unwrap();
        assert_eq!(one.events().len(), 3);
    }

    #[test]
    fn facial_lists_lower_probability() {
        let (g, faces) = square_faces();
        let m = g.edges().len();
        let lists: Vec<Vec<u32>> = (0..m).map(|e| (0..3).map(|c| (c + e as u32) % 5).collect()).collect();
        let spec = FacialThueSpec::new(g, faces, lists, 1).unwrap();
        let inst = build_facial_thue_instance(&spec).unwrap();
        for ev in inst.events() {
            let brute = crate::model::enumerate_probability(&inst, ev.id(), 1 << 12).unwrap();
            assert!((inst.event_probability(ev.id()) - brute).abs() < 1e-15);
            assert!(brute <= 1.0 / 3.0 + 1e-15);
        }
    }

    #[test]
    fn frugal_builder() {
        let tri = SimpleGraph::complete(3);
        let inst = build_frugal_instance(&FrugalSpec::new(SimpleGraph::complete(4), 3, 1).unwrap()).unwrap();
        assert_eq!(inst.events().iter().filter(|e| e.support().len() == 2).count(), 6 + 6);
        assert!(build_frugal_instance(&FrugalSpec::new(tri, 3, 1).unwrap()).is_ok());
        let star = build_frugal_instance(&FrugalSpec::new(SimpleGraph::star(4), 4, 2).unwrap()).unwrap();
        for ev in star.events() {
            let p = star.event_probability(ev.id());
            if ev.support().len() == 2 {
                assert!((p - 0.25).abs() < 1e-15);
            } else {
                assert_eq!(ev.power(), 2);
                assert!((p - 1.0 / 16.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn b0_values() {
        for delta in [3usize, 4, 10, 100] {
            let b = nonrepetitive_bounds(delta).unwrap();
            assert!(b.residual < 1e-9, "delta {delta}: {}", b.residual);
        }
        assert!((nonrepetitive_bounds(4).unwrap().b0 - 2.0).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for delta in 2..60 {
            let b = nonrepetitive_bounds(delta).unwrap().b0;
            assert!(b < prev);
            prev = b;
        }
        assert!(nonrepetitive_bounds(2).unwrap().gmp_bound.is_none());
    }

    #[test]
    fn pi_bound_beats_gmp_for_small_delta() {
        for delta in 3..=5 {
            let b = nonrepetitive_bounds(delta).unwrap();
            assert!(b.pi_bound < b.gmp_bound.unwrap(), "delta {delta}");
        }
        let b = nonrepetitive_bounds(10).unwrap();
        assert!(b.pi_bound > b.gmp_bound.unwrap());
    }

    #[test]
    fn xi0_matches_min_ratio() {
        for b in [0.5, 1.0, 2.0] {
            for delta in [3usize, 7] {
                let k = (1.0 + b) * (delta * delta) as f64;
                let r = min_ratio(&nonrepetitive_spectrum(delta, k).unwrap());
                assert!((r.xi_star - nonrepetitive_xi0(b)).abs() < 1e-6, "b {b}");
            }
        }
    }

    #[test]
    fn frugal_generic_search_within_closed_form() {
        for (d, b, expect) in [(10usize, 2usize, 55u64), (20, 3, 77), (50, 4, 156)] {
            let fb = frugal_bound(d, b).unwrap();
            assert_eq!(fb.generic_k, Some(expect));
            assert!(expect <= fb.closed_form.unwrap().ceil() as u64);
        }
        let one = frugal_bound(5, 1).unwrap();
        assert!(one.closed_form.is_none() && one.generic_k.is_some());
    }

    #[test]
    fn frugal_phi_matches_displayed_bound() {
        let (d, b, k) = (6usize, 3usize, 40.0f64);
        let sp = frugal_spectrum(d, b, k).unwrap();
        for xi in [0.5f64, 2.0, 5.0] {
            let expect = d as f64 / k * (xi + 1.0) + (d as f64).powi(4) / (6.0 * k.powi(3)) * (xi + 1.0).powi(3);
            assert!((sp.phi(xi).unwrap() - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn verifiers() {
        let p4 = SimpleGraph::path(4);
        let spec = NonrepetitiveSpec::new(p4.clone(), 3, 2).unwrap();
        assert!(!verify_nonrepetitive(&spec, &Configuration(vec![0, 1, 0, 1])));
        assert!(verify_nonrepetitive(&spec, &Configuration(vec![0, 1, 2, 3])));
        assert!(verify_nonrepetitive(&spec, &Configuration(vec![0, 1, 0, 2])));
        let fr = FrugalSpec::new(SimpleGraph::star(3), 3, 2).unwrap();
        assert!(!verify_frugal(&fr, &Configuration(vec![0, 1, 1, 1])));
        assert!(verify_frugal(&fr, &Configuration(vec![0, 1, 1, 2])));
        assert!(!verify_frugal(&fr, &Configuration(vec![0, 0, 1, 2])));
        let (g, faces) = square_faces();
        let m = g.edges().len();
        let fs = FacialThueSpec::identical_lists(g, faces, m, 2).unwrap();
        assert!(verify_facial_thue(&fs, &Configuration((0..m).collect())));
        assert!(!verify_facial_thue(&fs, &Configuration(vec![0; m])));
    }
}
