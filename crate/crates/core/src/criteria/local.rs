//! Per-event criteria on a dependency graph: the independent-set
//! polynomial `Xi`, its Dobrushin and Kotecky-Preiss majorants, and the
//! clique-cover bound.

use crate::error::{Error, Result};
use crate::model::{EventGraph, EventId, Instance};

/// Largest `|Γ*(e)|` for which independent sets are enumerated.
pub const NEIGHBORHOOD_CAP: usize = 25;

/// `μ`: one nonnegative weight per event.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
        }
        Ok(WeightVector(mu))
    }

    pub fn constant(n: usize, mu: f64) -> Result<Self> {
        WeightVector::new(vec![mu; n])
    }

    /// `μ_e = Prob(e) e^{a |supp(e)|}`.
    pub fn subset_gas(instance: &Instance, a: f64) -> Self {
        WeightVector(
            instance
                .events()
                .iter()
                .map(|ev| ev.probability(instance.domains()) * (a * ev.support().len() as f64).exp())
                .collect(),
        )
    }

    pub fn get(&self, e: EventId) -> f64 {
        self.0[e]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `Xi_e(μ, G)`: sum over independent subsets of `Γ*(e)` of the product of
/// their weights.
pub fn xi_cell(event: EventId, weights: &WeightVector, graph: &EventGraph) -> Result<f64> {
    let hood = graph.closed_neighborhood(event);
    if hood.len() > NEIGHBORHOOD_CAP {
        return Err(Error::NeighborhoodCap { event, size: hood.len(), cap: NEIGHBORHOOD_CAP });
    }
    fn rec(hood: &[EventId], i: usize, chosen: &mut Vec<EventId>, prod: f64, w: &WeightVector, g: &EventGraph) -> f64 {
        if i == hood.len() {
            return prod;
        }
        let e = hood[i];
        let mut total = rec(hood, i + 1, chosen, prod, w, g);
        if chosen.iter().all(|&c| !g.adjacent(c, e)) {
            chosen.push(e);
            total += rec(hood, i + 1, chosen, prod * w.get(e), w, g);
            chosen.pop();
        }
        total
    }
    Ok(rec(&hood, 0, &mut Vec::new(), 1.0, weights, graph))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalBounds {
    /// `Π_{Γ*(e)} (1 + μ)`
    pub dobrushin: f64,
    /// `exp(Σ_{Γ*(e)} μ)`
    pub kp: f64,
}

pub fn classical_bounds(event: EventId, weights: &WeightVector, graph: &EventGraph) -> ClassicalBounds {
    let hood = graph.closed_neighborhood(event);
    ClassicalBounds {
        dobrushin: hood.iter().map(|&e| 1.0 + weights.get(e)).product(),
        kp: hood.iter().map(|&e| weights.get(e)).sum::<f64>().exp(),
    }
}

/// `Π_{y ∈ supp(e)} [1 + Σ_{e' ∈ F(y)} μ_{e'}]`.
pub fn xi_clique(event: EventId, weights: &WeightVector, instance: &Instance) -> f64 {
    instance
        .event(event)
        .support()
        .iter()
        .map(|&y| 1.0 + instance.events_containing(y).iter().map(|&e| weights.get(e)).sum::<f64>())
        .product()
}

/// Where the `Xi` value of a CELL entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiSource {
    Exact,
    /// Neighbourhood above [`NEIGHBORHOOD_CAP`]; the clique bound was used.
    CliqueFallback,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellEntry {
    pub event: EventId,
    pub probability: f64,
    pub mu: f64,
    pub xi: f64,
    pub xi_source: XiSource,
    pub dobrushin: f64,
    pub xi_clique: f64,
    pub cell_ok: bool,
    pub lll_ok: bool,
    pub clique_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellReport {
    pub entries: Vec<CellEntry>,
    /// `Prob(e) Xi_e <= μ_e` for every event.
    pub cell: bool,
    /// Same with the Dobrushin denominator (classical local lemma).
    pub lll: bool,
    /// Same with the clique-cover denominator.
    pub clique: bool,
    pub fallback_used: bool,
    /// `Σ μ_e`, the expected-steps bound for the resampling algorithm when
    /// `cell` holds.
    pub steps_bound: f64,
}

// relative slack for the non-strict inequalities
const REL_SLACK: f64 = 1e-12;

fn leq(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + REL_SLACK)
}

/// Checks `Prob(e) <= μ_e / D_e` for `D` in {Xi, Dobrushin, clique} on the
/// natural dependency graph.
pub fn check_cell(instance: &Instance, weights: &WeightVector) -> Result<CellReport> {
    if weights.len() != instance.events().len() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} events",
            weights.len(),
            instance.events().len()
        )));
    }
    let graph = instance.natural_dependency_graph();
    let mut entries = Vec::with_capacity(weights.len());
    let mut fallback_used = false;
    for ev in instance.events() {
        let e = ev.id();
        let probability = ev.probability(instance.domains());
        let mu = weights.get(e);
        let clique = xi_clique(e, weights, instance);
        let (xi, xi_source) = match xi_cell(e, weights, &graph) {
            Ok(v) => (v, XiSource::Exact),
            Err(Error::NeighborhoodCap { .. }) => {
                fallback_used = true;
                (clique, XiSource::CliqueFallback)
            }
            Err(other) => return Err(other),
        };
        let dobrushin = classical_bounds(e, weights, &graph).dobrushin;
        entries.push(CellEntry {
            event: e,
            probability,
            mu,
            xi,
            xi_source,
            dobrushin,
            xi_clique: clique,
            cell_ok: leq(probability * xi, mu),
            lll_ok: leq(probability * dobrushin, mu),
            clique_ok: leq(probability * clique, mu),
        });
    }
    Ok(CellReport {
        cell: entries.iter().all(|c| c.cell_ok),
        lll: entries.iter().all(|c| c.lll_ok),
        clique: entries.iter().all(|c| c.clique_ok),
        fallback_used,
        steps_bound: weights.total(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EventKind;

    #[test]
    fn xi_cell_examples() {
        let single = EventGraph::from_edges(1, &[]);
        let w = WeightVector::constant(1, 0.5).unwrap();
        assert!((xi_cell(0, &w, &single).unwrap() - 1.5).abs() < 1e-15);

        let tri = EventGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let w = WeightVector::constant(3, 0.1).unwrap();
        assert!((xi_cell(0, &w, &tri).unwrap() - 1.3).abs() < 1e-15);
        assert!((classical_bounds(0, &w, &tri).dobrushin - 1.331).abs() < 1e-12);

        // Γ*(b) = {a, b, c} with a - b - c: sets ∅, a, b, c, {a, c}
        let path = EventGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!((xi_cell(1, &w, &path).unwrap() - 1.31).abs() < 1e-15);
    }

    #[test]
    fn classical_single() {
        let g = EventGraph::from_edges(1, &[]);
        let w = WeightVector::constant(1, 0.5).unwrap();
        let b = classical_bounds(0, &w, &g);
        assert!((b.dobrushin - 1.5).abs() < 1e-15);
        assert!((b.kp - 0.5f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn neighborhood_cap() {
        let edges: Vec<_> = (1..30).map(|i| (0, i)).collect();
        let g = EventGraph::from_edges(30, &edges);
        let w = WeightVector::constant(30, 0.1).unwrap();
        assert!(matches!(xi_cell(0, &w, &g), Err(Error::NeighborhoodCap { size: 30, .. })));
    }

    #[test]
    fn xi_clique_examples() {
        let inst = Instance::uniform(
            3,
            2,
            vec![(vec![0, 1], EventKind::Extension(vec![vec![0, 0]]))],
        )
        .unwrap();
        let w = WeightVector::constant(1, 0.2).unwrap();
        assert!((xi_clique(0, &w, &inst) - 1.44).abs() < 1e-12);
        let one = Instance::uniform(2, 2, vec![(vec![0], EventKind::Extension(vec![vec![1]]))]).unwrap();
        let w = WeightVector::constant(1, 0.3).unwrap();
        assert!((xi_clique(0, &w, &one) - 1.3).abs() < 1e-15);
    }

    #[test]
    fn clique_bound_strict_when_cliques_overlap() {
        // two events on the same pair of atoms: the clique cover counts the
        // pair twice
        let inst = Instance::uniform(
            3,
            2,
            vec![
                (vec![0, 1], EventKind::Extension(vec![vec![0, 0]])),
                (vec![0, 1], EventKind::Extension(vec![vec![1, 1]])),
            ],
        )
        .unwrap();
        let w = WeightVector::constant(2, 0.2).unwrap();
        let g = inst.natural_dependency_graph();
        let cell = xi_cell(0, &w, &g).unwrap();
        let clique = xi_clique(0, &w, &inst);
        assert!((cell - 1.4).abs() < 1e-15);
        assert!((clique - 1.96).abs() < 1e-12);
        assert!(clique > cell);
    }

    #[test]
    fn check_cell_examples() {
        // Prob = 1/5 via a 5-valued atom, μ = 0.3: 0.2 <= 0.3/1.3
        let inst = Instance::uniform(2, 5, vec![(vec![0], EventKind::Extension(vec![vec![4]]))]).unwrap();
        let w = WeightVector::constant(1, 0.3).unwrap();
        let r = check_cell(&inst, &w).unwrap();
        assert!(r.cell && r.lll);
        let zero = WeightVector::constant(1, 0.0).unwrap();
        assert!(!check_cell(&inst, &zero).unwrap().cell);
        // Prob = 0 through a zero-mass value
        let d = crate::model::Domain::weighted(vec![1.0, 0.0]).unwrap();
        let inst0 = Instance::new(vec![d.clone(), d], vec![(vec![0], EventKind::Extension(vec![vec![1]]))]).unwrap();
        assert!(check_cell(&inst0, &zero).unwrap().cell);
    }

    #[test]
    fn fallback_to_clique() {
        let events: Vec<_> = (0..30).map(|i| (vec![0, i + 1], EventKind::Extension(vec![vec![0, 0]]))).collect();
        let inst = Instance::uniform(32, 2, events).unwrap();
        let w = WeightVector::constant(30, 0.01).unwrap();
        let r = check_cell(&inst, &w).unwrap();
        assert!(r.fallback_used);
        assert!(r.entries.iter().all(|e| e.xi_source == XiSource::CliqueFallback));
    }
}
