use std::fmt::Write as _;
use std::sync::Arc;

use super::{EdgeId, Multigraph, VertexId};

/// A reference to an element (vertex or edge) of one declared source copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Part {
    pub copy: usize,
    pub item: usize,
}

/// A declared copy of a source graph inside a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyInfo {
    pub name: String,
    pub source: Arc<Multigraph>,
}

/// Where every output vertex and edge came from.
///
/// Each output vertex descends from exactly one source vertex. An output edge
/// carries the list of source edges it was spliced from: one part for a copied
/// edge, one part per joined stub after a vertex replacement, and no parts for
/// an edge introduced by the construction itself.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Provenance {
    pub copies: Vec<CopyInfo>,
    pub vertices: Vec<Part>,
    pub edges: Vec<Vec<Part>>,
}

impl Provenance {
    pub fn copy_index(&self, name: &str) -> Option<usize> {
        self.copies.iter().position(|c| c.name == name)
    }

    /// The source edge of `copy` that output edge `e` stands for, if any.
    pub fn edge_in_copy(&self, e: EdgeId, copy: usize) -> Option<EdgeId> {
        self.edges[e].iter().find(|p| p.copy == copy).map(|p| p.item)
    }

    /// Output vertices descending from `copy`, ascending.
    pub fn vertices_of_copy(&self, copy: usize) -> Vec<VertexId> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].copy == copy).collect()
    }

    /// Output edges that carry a part of `copy`, ascending.
    pub fn edges_of_copy(&self, copy: usize) -> Vec<EdgeId> {
        (0..self.edges.len()).filter(|&e| self.edges[e].iter().any(|p| p.copy == copy)).collect()
    }

    /// Projects a set of output edges onto the source edges of `copy`.
    pub fn restrict(&self, edges: &[EdgeId], copy: usize) -> Vec<EdgeId> {
        let mut out: Vec<_> = edges.iter().filter_map(|&e| self.edge_in_copy(e, copy)).collect();
        out.sort_unstable();
        out
    }

    /// Line-oriented sidecar document, stable across runs.
    pub fn to_document(&self) -> String {
        let mut s = String::from("prov 1\n");
        for (i, c) in self.copies.iter().enumerate() {
            let _ = writeln!(s, "copy {i} {} {} {}", c.name, c.source.n(), c.source.m());
        }
        for (v, p) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "v {v} {} {}", p.copy, p.item);
        }
        for (e, parts) in self.edges.iter().enumerate() {
            let _ = write!(s, "e {e}");
            if parts.is_empty() {
                s.push_str(" new");
            }
            for p in parts {
                let _ = write!(s, " {}:{}", p.copy, p.item);
            }
            s.push('\n');
        }
        s
    }
}
