use std::sync::Arc;

use super::provenance::{CopyInfo, Part, Provenance};
use super::{EdgeId, Multigraph, VertexId};
use crate::error::{invalid, Result};

/// Mutable scratch space for constructions. Vertices and edges keep their
/// builder ids until [`Builder::finish`] compacts them.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    copies: Vec<CopyInfo>,
    vertex_origin: Vec<Part>,
    vertex_alive: Vec<bool>,
    ends: Vec<[VertexId; 2]>,
    edge_parts: Vec<Vec<Part>>,
    edge_alive: Vec<bool>,
}

/// Offsets of one copy inside a [`Builder`].
#[derive(Clone, Copy, Debug)]
pub struct CopyHandle {
    pub copy: usize,
    v_offset: usize,
    e_offset: usize,
    n: usize,
    m: usize,
}

impl CopyHandle {
    pub fn vertex(&self, v: VertexId) -> VertexId {
        debug_assert!(v < self.n);
        self.v_offset + v
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        debug_assert!(e < self.m);
        self.e_offset + e
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        self.v_offset..self.v_offset + self.n
    }
}

/// Result of [`Builder::finish`].
#[derive(Clone, Debug)]
pub struct Finished {
    pub graph: Multigraph,
    pub provenance: Provenance,
    /// builder vertex id -> output vertex id
    pub vertex_map: Vec<Option<VertexId>>,
    /// builder edge id -> output edge id
    pub edge_map: Vec<Option<EdgeId>>,
}

impl Finished {
    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v].expect("vertex was removed during construction")
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        self.edge_map[e].expect("edge was removed during construction")
    }

    pub fn edges(&self, es: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: Vec<_> = es.iter().map(|&e| self.edge(e)).collect();
        out.sort_unstable();
        out
    }
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a disjoint copy of `g`.
    pub fn add_copy(&mut self, name: impl Into<String>, g: &Multigraph) -> CopyHandle {
        let copy = self.copies.len();
        self.copies.push(CopyInfo { name: name.into(), source: Arc::new(g.clone()) });
        let v_offset = self.vertex_origin.len();
        let e_offset = self.ends.len();
        for v in 0..g.n() {
            self.vertex_origin.push(Part { copy, item: v });
            self.vertex_alive.push(true);
        }
        for (e, u, v) in g.edges() {
            self.ends.push([v_offset + u, v_offset + v]);
            self.edge_parts.push(vec![Part { copy, item: e }]);
            self.edge_alive.push(true);
        }
        CopyHandle { copy, v_offset, e_offset, n: g.n(), m: g.m() }
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, parts: Vec<Part>) -> EdgeId {
        assert!(u != v, "builder edge would be a loop");
        assert!(self.vertex_alive[u] && self.vertex_alive[v]);
        self.ends.push([u, v]);
        self.edge_parts.push(parts);
        self.edge_alive.push(true);
        self.ends.len() - 1
    }

    pub fn add_edges(&mut self, u: VertexId, v: VertexId, t: usize) -> Vec<EdgeId> {
        (0..t).map(|_| self.add_edge(u, v, Vec::new())).collect()
    }

    pub fn remove_edge(&mut self, e: EdgeId) {
        self.edge_alive[e] = false;
    }

    /// Removes every instance between `u` and `v`, returning their ids.
    pub fn remove_bundle(&mut self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        let bundle = self.bundle(u, v);
        for &e in &bundle {
            self.edge_alive[e] = false;
        }
        bundle
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        for e in self.incident(v) {
            self.edge_alive[e] = false;
        }
        self.vertex_alive[v] = false;
    }

    /// Moves every edge of `gone` onto `keep`; edges between them vanish.
    pub fn identify(&mut self, keep: VertexId, gone: VertexId) {
        for e in self.incident(gone) {
            let [a, b] = self.ends[e];
            let other = if a == gone { b } else { a };
            if other == keep {
                self.edge_alive[e] = false;
            } else {
                self.ends[e] = if a == gone { [keep, b] } else { [a, keep] };
            }
        }
        self.vertex_alive[gone] = false;
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.vertex_alive[v]
    }

    /// Live edges at `v`, ascending by builder id.
    pub fn incident(&self, v: VertexId) -> Vec<EdgeId> {
        (0..self.ends.len())
            .filter(|&e| self.edge_alive[e] && self.ends[e].contains(&v))
            .collect()
    }

    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.ends[e]
    }

    pub fn parts(&self, e: EdgeId) -> &[Part] {
        &self.edge_parts[e]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    pub fn bundle(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.incident(u).into_iter().filter(|&e| self.other(e, u) == v).collect()
    }

    /// Vertex replacement: deletes `u` and `v` and, for every pair `(a, b)`
    /// of a stub `a` at `u` with a stub `b` at `v`, joins the far endpoints of
    /// `a` and `b` by a new edge that inherits both provenances. Returns the
    /// new edge ids in pairing order.
    pub fn splice(&mut self, u: VertexId, v: VertexId, pairing: &[(EdgeId, EdgeId)]) -> Result<Vec<EdgeId>> {
        let at_u = self.incident(u);
        let at_v = self.incident(v);
        if at_u.len() != at_v.len() {
            return invalid(format!("degree mismatch in vertex replacement: {} vs {}", at_u.len(), at_v.len()));
        }
        if pairing.len() != at_u.len() {
            return invalid(format!("pairing has {} entries for {} stubs", pairing.len(), at_u.len()));
        }
        let mut used_a: Vec<EdgeId> = pairing.iter().map(|p| p.0).collect();
        let mut used_b: Vec<EdgeId> = pairing.iter().map(|p| p.1).collect();
        used_a.sort_unstable();
        used_b.sort_unstable();
        if used_a != at_u || used_b != at_v {
            return invalid("pairing is not a bijection between the two stub sets");
        }
        let mut created = Vec::with_capacity(pairing.len());
        for &(a, b) in pairing {
            let x = self.other(a, u);
            let y = self.other(b, v);
            if x == v || y == u || x == y {
                return invalid("replaced vertices must lie in different components");
            }
            let mut parts = self.edge_parts[a].clone();
            parts.extend_from_slice(&self.edge_parts[b]);
            parts.sort_unstable();
            created.push(self.add_edge(x, y, parts));
        }
        self.remove_vertex(u);
        self.remove_vertex(v);
        Ok(created)
    }

    /// Compacts live vertices and edges into a [`Multigraph`].
    pub fn finish(self) -> Finished {
        let mut vertex_map = vec![None; self.vertex_alive.len()];
        let mut vertices = Vec::new();
        for (v, &alive) in self.vertex_alive.iter().enumerate() {
            if alive {
                vertex_map[v] = Some(vertices.len());
                vertices.push(self.vertex_origin[v]);
            }
        }
        let mut edge_map = vec![None; self.ends.len()];
        let mut ends = Vec::new();
        let mut parts = Vec::new();
        for e in 0..self.ends.len() {
            if !self.edge_alive[e] {
                continue;
            }
            let [a, b] = self.ends[e];
            let (Some(x), Some(y)) = (vertex_map[a], vertex_map[b]) else {
                continue;
            };
            edge_map[e] = Some(ends.len());
            ends.push([x, y]);
            parts.push(self.edge_parts[e].clone());
        }
        let graph = Multigraph::from_checked(vertices.len(), ends);
        Finished {
            graph,
            provenance: Provenance { copies: self.copies, vertices, edges: parts },
            vertex_map,
            edge_map,
        }
    }
}
