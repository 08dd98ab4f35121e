//! Loopless multigraphs whose edges are individually identified instances.
//!
//! Parallel edges are distinct values that share endpoints; every matching,
//! cut and witness in the crate refers to edge ids, never to vertex pairs.

mod builder;
pub mod document;
pub mod graph6;
mod provenance;

use std::collections::BTreeSet;

use crate::error::{invalid, Result};

pub use builder::{Builder, CopyHandle, Finished};
pub use provenance::{CopyInfo, Part, Provenance};

pub type VertexId = usize;
pub type EdgeId = usize;

/// An immutable loopless multigraph on vertices `0..n` with edge ids `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    labels: Option<Vec<String>>,
    ends: Vec<[VertexId; 2]>,
    incidence: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    /// Builds a graph from an edge list; the i-th pair becomes edge `i`.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut ends = Vec::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return invalid(format!("edge {i} = ({u},{v}) has an endpoint outside 0..{n}"));
            }
            if u == v {
                return invalid(format!("edge {i} is a loop at vertex {u}"));
            }
            ends.push([u, v]);
        }
        Ok(Self::from_checked(n, ends))
    }

    pub(crate) fn from_checked(n: usize, ends: Vec<[VertexId; 2]>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (e, &[u, v]) in ends.iter().enumerate() {
            incidence[u].push(e);
            incidence[v].push(e);
        }
        Multigraph { n, labels: None, ends, incidence }
    }

    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_checked(n, Vec::new())
    }

    /// `t` parallel edges between two vertices.
    pub fn theta(t: usize) -> Self {
        Self::from_checked(2, vec![[0, 1]; t])
    }

    pub fn complete(n: usize) -> Self {
        let mut ends = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                ends.push([u, v]);
            }
        }
        Self::from_checked(n, ends)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2, "a cycle needs at least two vertices");
        Self::from_checked(n, (0..n).map(|i| [i, (i + 1) % n]).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return invalid(format!("{} labels for {} vertices", labels.len(), self.n));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.ends.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let [u, v] = self.ends[e];
        (u, v)
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.ends[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// Iterates `(id, u, v)` in id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.ends.iter().enumerate().map(|(e, &[u, v])| (e, u, v))
    }

    /// Edge instances incident with `v`, in increasing id order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(r)` if every vertex has degree `r`.
    pub fn regularity(&self) -> Option<usize> {
        let d = self.incidence.first().map_or(0, Vec::len);
        self.incidence.iter().all(|inc| inc.len() == d).then_some(d)
    }

    pub fn is_regular(&self, r: usize) -> bool {
        self.incidence.iter().all(|inc| inc.len() == r)
    }

    /// Number of edge instances joining `u` and `v`.
    pub fn mu(&self, u: VertexId, v: VertexId) -> usize {
        self.incidence[u].iter().filter(|&&e| self.other(e, u) == v).count()
    }

    pub fn max_multiplicity(&self) -> usize {
        let mut best = 0;
        for u in 0..self.n {
            let mut counts = std::collections::HashMap::new();
            for &e in &self.incidence[u] {
                *counts.entry(self.other(e, u)).or_insert(0usize) += 1;
            }
            best = best.max(counts.values().copied().max().unwrap_or(0));
        }
        best
    }

    /// Edge ids joining `u` and `v`, ascending.
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.incidence[u].iter().copied().filter(|&e| self.other(e, u) == v).collect()
    }

    /// Distinct neighbours of `v`, ascending.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let set: BTreeSet<_> = self.incidence[v].iter().map(|&e| self.other(e, v)).collect();
        set.into_iter().collect()
    }

    /// Dense multiplicity matrix, row-major.
    pub fn weight_matrix(&self) -> Vec<u32> {
        let mut w = vec![0u32; self.n * self.n];
        for &[u, v] in &self.ends {
            w[u * self.n + v] += 1;
            w[v * self.n + u] += 1;
        }
        w
    }

    pub fn membership(&self, set: &[VertexId]) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        inside
    }

    /// The edge cut of `X`, given as a membership mask.
    pub fn boundary_mask(&self, inside: &[bool]) -> Vec<EdgeId> {
        self.edges().filter(|&(_, u, v)| inside[u] != inside[v]).map(|(e, _, _)| e).collect()
    }

    pub fn boundary(&self, set: &[VertexId]) -> Vec<EdgeId> {
        self.boundary_mask(&self.membership(set))
    }

    pub fn boundary_size(&self, set: &[VertexId]) -> usize {
        let inside = self.membership(set);
        self.ends.iter().filter(|[u, v]| inside[*u] != inside[*v]).count()
    }

    /// `[U, W]`: edges with one end in each of two disjoint sets.
    pub fn between(&self, us: &[VertexId], ws: &[VertexId]) -> Vec<EdgeId> {
        let a = self.membership(us);
        let b = self.membership(ws);
        self.edges()
            .filter(|&(_, u, v)| (a[u] && b[v]) || (a[v] && b[u]))
            .map(|(e, _, _)| e)
            .collect()
    }

    /// Connected components of the subgraph induced by `alive` (all vertices if `None`).
    pub fn components(&self, alive: Option<&[bool]>) -> Vec<Vec<VertexId>> {
        let keep = |v: VertexId| alive.is_none_or(|a| a[v]);
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] || !keep(s) {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &e in &self.incidence[x] {
                    let y = self.other(e, x);
                    if keep(y) && !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components(None).len() == 1
    }

    /// Vertex ids that are endpoints of the given edges (deduplicated, ascending).
    pub fn covered_vertices(&self, edges: &[EdgeId]) -> Vec<VertexId> {
        let set: BTreeSet<_> = edges.iter().flat_map(|&e| self.ends[e]).collect();
        set.into_iter().collect()
    }

    /// `G + N`: appends `t` instances of every pair; the new instances are
    /// marked as new in the provenance.
    pub fn add_edge_family(&self, pairs: &[(VertexId, VertexId)], t: usize) -> Result<(Multigraph, Provenance)> {
        let mut b = Builder::new();
        let base = b.add_copy("G", self);
        for &(u, v) in pairs {
            if u == v {
                return invalid(format!("pair ({u},{v}) would be a loop"));
            }
            if u >= self.n || v >= self.n {
                return invalid(format!("pair ({u},{v}) is outside 0..{}", self.n));
            }
        }
        for _ in 0..t {
            for &(u, v) in pairs {
                b.add_edge(base.vertex(u), base.vertex(v), Vec::new());
            }
        }
        let f = b.finish();
        Ok((f.graph, f.provenance))
    }

    /// `2G = G + E(G)`.
    pub fn doubled(&self) -> Result<(Multigraph, Provenance)> {
        let pairs: Vec<_> = self.edges().map(|(_, u, v)| (u, v)).collect();
        self.add_edge_family(&pairs, 1)
    }

    /// Identifies `u` and `v` into one vertex and drops the resulting loops.
    /// The merged vertex keeps the smaller of the two ids' position in the
    /// dense renumbering.
    pub fn identify_vertices(&self, u: VertexId, v: VertexId) -> Result<(Multigraph, Provenance)> {
        if u == v {
            return invalid("cannot identify a vertex with itself");
        }
        if u >= self.n || v >= self.n {
            return invalid(format!("vertices ({u},{v}) outside 0..{}", self.n));
        }
        let mut b = Builder::new();
        let base = b.add_copy("G", self);
        let (keep, gone) = (u.min(v), u.max(v));
        b.identify(base.vertex(keep), base.vertex(gone));
        let f = b.finish();
        Ok((f.graph, f.provenance))
    }

    /// Deletes a vertex set (and incident edges), renumbering densely.
    pub fn remove_vertices(&self, set: &[VertexId]) -> (Multigraph, Provenance) {
        let mut b = Builder::new();
        let base = b.add_copy("G", self);
        for &v in set {
            b.remove_vertex(base.vertex(v));
        }
        let f = b.finish();
        (f.graph, f.provenance)
    }

    /// `G[U]`.
    pub fn induced(&self, set: &[VertexId]) -> (Multigraph, Provenance) {
        let inside = self.membership(set);
        let rest: Vec<_> = (0..self.n).filter(|&v| !inside[v]).collect();
        self.remove_vertices(&rest)
    }

    /// Disjoint union of the given graphs, in order.
    pub fn disjoint_union(parts: &[(&str, &Multigraph)]) -> (Multigraph, Provenance) {
        let mut b = Builder::new();
        for (name, g) in parts {
            b.add_copy(*name, g);
        }
        let f = b.finish();
        (f.graph, f.provenance)
    }

    /// The simple graph with an edge wherever `G` has at least one.
    pub fn underlying_simple(&self) -> Multigraph {
        let mut pairs = BTreeSet::new();
        for &[u, v] in &self.ends {
            pairs.insert((u.min(v), u.max(v)));
        }
        Multigraph::from_checked(self.n, pairs.into_iter().map(|(u, v)| [u, v]).collect())
    }

    /// Whether every vertex has exactly three distinct neighbours.
    pub fn is_underlying_cubic(&self) -> bool {
        (0..self.n).all(|v| self.neighbors(v).len() == 3)
    }

    pub fn is_simple(&self) -> bool {
        self.max_multiplicity() <= 1
    }

    /// Maps a set of edge ids to sorted vertex pairs (with repetition).
    pub fn pairs_of(&self, edges: &[EdgeId]) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = edges
            .iter()
            .map(|&e| {
                let [u, v] = self.ends[e];
                (u.min(v), u.max(v))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// A set of edge instances. Stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Matching(Vec<EdgeId>);

impl Matching {
    pub fn new(mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Matching(edges)
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn is_matching_of(&self, g: &Multigraph) -> bool {
        let mut seen = vec![false; g.n()];
        for &e in &self.0 {
            if e >= g.m() {
                return false;
            }
            let (u, v) = g.endpoints(e);
            if seen[u] || seen[v] {
                return false;
            }
            seen[u] = true;
            seen[v] = true;
        }
        true
    }

    pub fn is_perfect_in(&self, g: &Multigraph) -> bool {
        2 * self.0.len() == g.n() && self.is_matching_of(g)
    }
}

impl FromIterator<EdgeId> for Matching {
    fn from_iter<T: IntoIterator<Item = EdgeId>>(iter: T) -> Self {
        Matching::new(iter.into_iter().collect())
    }
}
