//! Simple graphs and the enumerators that generate event families.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::Instance;

/// Undirected simple graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Duplicate edges are merged; self-loops are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(SimpleGraph { adj, edges: set.into_iter().collect() })
    }

    /// Parses `u v` lines (0-indexed). Blank lines and `#` comments are
    /// skipped. The vertex count is one more than the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parse = |t: &str| {
                t.parse::<usize>().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex `{t}`") })
            };
            match toks.as_slice() {
                [u, v] => edges.push((parse(u)?, parse(v)?)),
                _ => return Err(Error::Parse { line: i + 1, msg: format!("expected `u v`, got `{line}`") }),
            }
        }
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        SimpleGraph::new(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        SimpleGraph::new(n, &edges).expect("path graph")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::new(n, &edges).expect("cycle graph")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SimpleGraph::new(n, &edges).expect("complete graph")
    }

    /// `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        SimpleGraph::new(leaves + 1, &edges).expect("star graph")
    }

    /// `w x h` grid, vertex `(i, j)` at index `j * w + i`.
    pub fn grid(w: usize, h: usize) -> Self {
        let mut edges = Vec::new();
        for j in 0..h {
            for i in 0..w {
                let v = j * w + i;
                if i + 1 < w {
                    edges.push((v, v + 1));
                }
                if j + 1 < h {
                    edges.push((v, v + w));
                }
            }
        }
        SimpleGraph::new(w * h, &edges).expect("grid graph")
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted; the position is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Simple paths with `2n` vertices that contain `vertex`, each listed
    /// once with its smaller endpoint first.
    pub fn even_paths_through(&self, vertex: usize, n: usize) -> Vec<Vec<usize>> {
        let len = 2 * n;
        let mut out = BTreeSet::new();
        let mut on_path = vec![false; self.num_vertices()];
        on_path[vertex] = true;
        // `left` vertices before `vertex`, the rest after
        for left in 0..len {
            let right = len - 1 - left;
            let mut left_arm = Vec::new();
            self.arms(vertex, left, &mut on_path, &mut left_arm, &mut |g, on_path, larm| {
                let mut right_arm = Vec::new();
                g.arms(vertex, right, on_path, &mut right_arm, &mut |_, _, rarm| {
                    let mut p: Vec<usize> = larm.iter().rev().copied().collect();
                    p.push(vertex);
                    p.extend_from_slice(rarm);
                    if p[0] < p[len - 1] {
                        out.insert(p);
                    }
                });
            });
        }
        out.into_iter().collect()
    }

    // Visits every simple walk of exactly `len` further vertices from `from`
    // avoiding `on_path`.
    fn arms<F>(&self, from: usize, len: usize, on_path: &mut [bool], arm: &mut Vec<usize>, visit: &mut F)
    where
        F: FnMut(&Self, &mut [bool], &[usize]),
    {
        if arm.len() == len {
            visit(self, on_path, arm);
            return;
        }
        let tip = arm.last().copied().unwrap_or(from);
        for &w in &self.adj[tip] {
            if !on_path[w] {
                on_path[w] = true;
                arm.push(w);
                self.arms(from, len, on_path, arm, visit);
                arm.pop();
                on_path[w] = false;
            }
        }
    }

    /// Every simple path with `2n` vertices, smaller endpoint first, sorted.
    pub fn even_paths(&self, n: usize) -> Vec<Vec<usize>> {
        let len = 2 * n;
        let mut out = Vec::new();
        let mut on_path = vec![false; self.num_vertices()];
        for s in 0..self.num_vertices() {
            on_path[s] = true;
            let mut arm = Vec::new();
            self.arms(s, len - 1, &mut on_path, &mut arm, &mut |_, _, a| {
                if s < a[len - 2] {
                    let mut p = Vec::with_capacity(len);
                    p.push(s);
                    p.extend_from_slice(a);
                    out.push(p);
                }
            });
            on_path[s] = false;
        }
        out.sort();
        out
    }

    /// Sets of `beta + 1` vertices inside a common neighbourhood that contain
    /// `vertex`, each sorted, the list sorted.
    pub fn stars(&self, vertex: usize, beta: usize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for &c in &self.adj[vertex] {
            let others: Vec<usize> = self.adj[c].iter().copied().filter(|&u| u != vertex).collect();
            for_each_combination(&others, beta, &mut |comb| {
                let mut s = comb.to_vec();
                s.push(vertex);
                s.sort_unstable();
                out.insert(s);
            });
        }
        out.into_iter().collect()
    }

    /// All `beta`-stars of the graph, sorted.
    pub fn all_stars(&self, beta: usize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for c in 0..self.num_vertices() {
            for_each_combination(&self.adj[c], beta + 1, &mut |comb| {
                out.insert(comb.to_vec());
            });
        }
        out.into_iter().collect()
    }
}

pub(crate) fn for_each_combination<F: FnMut(&[usize])>(items: &[usize], size: usize, f: &mut F) {
    fn rec<F: FnMut(&[usize])>(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut F) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut Vec::with_capacity(size), f);
}

/// Face boundaries of an embedded graph, each a cyclic vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    faces: Vec<Vec<usize>>,
}

impl FaceSet {
    /// Checks that consecutive vertices (cyclically) are adjacent. Planarity
    /// of the embedding is not checked.
    pub fn new(graph: &SimpleGraph, faces: Vec<Vec<usize>>) -> Result<Self> {
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(Error::InvalidFaces(format!("face {i} has fewer than 3 vertices")));
            }
            for j in 0..f.len() {
                let (u, v) = (f[j], f[(j + 1) % f.len()]);
                if u >= graph.num_vertices() || v >= graph.num_vertices() || !graph.adjacent(u, v) {
                    return Err(Error::InvalidFaces(format!("face {i}: {u} and {v} are not adjacent")));
                }
            }
        }
        Ok(FaceSet { faces })
    }

    /// One face per line, vertices separated by spaces.
    pub fn parse(graph: &SimpleGraph, text: &str) -> Result<Self> {
        let mut faces = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let face = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex `{t}`") }))
                .collect::<Result<Vec<_>>>()?;
            faces.push(face);
        }
        FaceSet::new(graph, faces)
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Edge-id sequences of `2n` consecutive, pairwise distinct boundary
    /// edges. A sequence and its reversal count once; the lexicographically
    /// smaller orientation is kept.
    pub fn facial_paths(&self, graph: &SimpleGraph, n: usize) -> Vec<Vec<usize>> {
        let len = 2 * n;
        let mut out = BTreeSet::new();
        for f in &self.faces {
            let l = f.len();
            if len > l {
                continue;
            }
            let ring: Vec<usize> = (0..l)
                .map(|j| graph.edge_index(f[j], f[(j + 1) % l]).expect("validated face"))
                .collect();
            for start in 0..l {
                let seq: Vec<usize> = (0..len).map(|t| ring[(start + t) % l]).collect();
                let distinct: BTreeSet<_> = seq.iter().collect();
                if distinct.len() != len {
                    continue;
                }
                let rev: Vec<usize> = seq.iter().rev().copied().collect();
                out.insert(seq.min(rev));
            }
        }
        out.into_iter().collect()
    }
}

/// `d_s`: the largest number of power-`s` events sharing one atom.
pub fn d_s_exact(instance: &Instance, s: usize) -> usize {
    (0..instance.num_atoms())
        .map(|x| instance.events_containing(x).iter().filter(|&&e| instance.event(e).power() == s).count())
        .max()
        .unwrap_or(0)
}

/// `d_s` for every power present in the family.
pub fn degree_profile(instance: &Instance) -> BTreeMap<usize, usize> {
    let mut per_atom: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); instance.num_atoms()];
    for ev in instance.events() {
        for &x in ev.support() {
            *per_atom[x].entry(ev.power()).or_default() += 1;
        }
    }
    let mut out = BTreeMap::new();
    for m in per_atom {
        for (s, c) in m {
            let e = out.entry(s).or_insert(0);
            *e = (*e).max(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EventKind;

    /// Brute-force path enumerator: every ordered tuple of distinct vertices
    /// with consecutive adjacency, kept in canonical orientation.
    fn brute_paths(g: &SimpleGraph, len: usize) -> Vec<Vec<usize>> {
        fn rec(g: &SimpleGraph, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                if cur[0] < cur[len - 1] {
                    out.push(cur.clone());
                }
                return;
            }
            for v in 0..g.num_vertices() {
                if cur.contains(&v) {
                    continue;
                }
                if let Some(&t) = cur.last() {
                    if !g.adjacent(t, v) {
                        continue;
                    }
                }
                cur.push(v);
                rec(g, len, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(g, len, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    #[test]
    fn max_degrees() {
        assert_eq!(SimpleGraph::path(2).max_degree(), 1);
        assert_eq!(SimpleGraph::cycle(5).max_degree(), 2);
        assert_eq!(SimpleGraph::star(4).max_degree(), 4);
        assert_eq!(SimpleGraph::new(0, &[]).unwrap().max_degree(), 0);
    }

    #[test]
    fn even_paths_small_cases() {
        assert_eq!(SimpleGraph::path(2).even_paths_through(0, 1), vec![vec![0, 1]]);
        let c4 = SimpleGraph::cycle(4);
        assert_eq!(c4.even_paths_through(0, 1), vec![vec![0, 1], vec![0, 3]]);
        // C_6, n = 3: Hamiltonian paths of C_6 are the 6 ways of deleting one edge
        let c6 = SimpleGraph::cycle(6);
        let brute: Vec<_> = brute_paths(&c6, 6).into_iter().filter(|p| p.contains(&0)).collect();
        assert_eq!(brute.len(), 6);
        assert_eq!(c6.even_paths_through(0, 3), brute);
    }

    #[test]
    fn even_paths_match_brute_force() {
        let graphs = [
            SimpleGraph::grid(3, 3),
            SimpleGraph::complete(5),
            SimpleGraph::star(4),
            SimpleGraph::new(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)]).unwrap(),
        ];
        for g in &graphs {
            for n in 1..=3 {
                let brute = brute_paths(g, 2 * n);
                assert_eq!(g.even_paths(n), brute);
                for v in 0..g.num_vertices() {
                    let through: Vec<_> = brute.iter().filter(|p| p.contains(&v)).cloned().collect();
                    assert_eq!(g.even_paths_through(v, n), through, "v={v} n={n}");
                }
            }
        }
    }

    #[test]
    fn facial_paths_on_single_faces() {
        let tri = SimpleGraph::cycle(3);
        let faces = FaceSet::new(&tri, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(faces.facial_paths(&tri, 1).len(), 3);
        let quad = SimpleGraph::cycle(4);
        let faces = FaceSet::new(&quad, vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(faces.facial_paths(&quad, 2).len(), 4);
        assert!(faces.facial_paths(&quad, 3).is_empty());
    }

    #[test]
    fn faces_must_follow_edges() {
        let g = SimpleGraph::path(3);
        assert!(FaceSet::new(&g, vec![vec![0, 1, 2]]).is_err());
        assert!(FaceSet::parse(&g, "0 x 1\n").is_err());
    }

    #[test]
    fn stars_small_cases() {
        // K_{1,3}: centre 0, leaves 1 2 3
        let k13 = SimpleGraph::star(3);
        assert_eq!(k13.stars(1, 2), vec![vec![1, 2, 3]]);
        let tri = SimpleGraph::cycle(3);
        assert_eq!(tri.stars(0, 1), vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(tri.all_stars(1).len(), 3);
    }

    #[test]
    fn stars_agree_with_all_stars() {
        let g = SimpleGraph::grid(3, 4);
        for beta in 1..=3 {
            let all = g.all_stars(beta);
            for v in 0..g.num_vertices() {
                let mine: Vec<_> = all.iter().filter(|s| s.contains(&v)).cloned().collect();
                assert_eq!(g.stars(v, beta), mine);
            }
        }
    }

    #[test]
    fn d_s_counts() {
        let c4 = SimpleGraph::cycle(4);
        let events = c4.edges().iter().map(|&(u, v)| (vec![u, v], EventKind::Monochromatic)).collect();
        let inst = Instance::uniform(5, 3, events).unwrap();
        assert_eq!(d_s_exact(&inst, 1), 2);
        assert_eq!(d_s_exact(&inst, 2), 0);
        let empty = Instance::uniform(3, 2, vec![]).unwrap();
        assert_eq!(d_s_exact(&empty, 1), 0);
        assert!(degree_profile(&empty).is_empty());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = SimpleGraph::grid(3, 2);
        let back = SimpleGraph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(back, g);
        assert!(SimpleGraph::parse_edge_list("0 0\n").is_err());
        assert!(SimpleGraph::parse_edge_list("0 1 2\n").is_err());
    }
}
