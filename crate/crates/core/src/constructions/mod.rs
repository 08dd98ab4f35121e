//! Named constructions and gadgets, each returned with full provenance.
//!
//! Builders that promise regularity or edge-connectivity re-verify it on the
//! output and fail with an internal error otherwise; a construction never
//! hands out a graph whose advertised properties were assumed.

mod certificate;
mod family;
mod lifting;
mod pullback;
mod replace;
mod split;

use std::collections::BTreeMap;

use crate::connectivity::edge_connectivity;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, Part, Provenance, VertexId};

pub use certificate::{certify_gk, check_gk_certificate, GkCertificate, TripleCount};
pub use family::{build_gk, build_pk, build_qk, build_qk_closure, build_sk, edge_swap_join, SkLayout};
pub use lifting::{find_admissible_lifting, lift, Lifted};
pub use pullback::{pullback_pdpm, CopyPullback, PullbackFailure};
pub use replace::{
    default_pairing, gadget_cycle, gadget_cycle_embed, gadget_halfstar, gadget_k4, gadget_k4_embed, gadget_wheel_caps,
    k4_attachment_count, replace_vertex, stub_order, wheel, Pairing, WHEEL_HUB,
};
pub(crate) use replace::splice_with;
pub use split::{
    combine_pdpm, cut_coefficients, planted_three_cut, split_on_3cut, CombineRoute, Combined, H2Edge, PlantedCut, ThreeCutSplit,
};

/// A copy inside a gadget whose perfect matchings can be read back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackCopy {
    /// Index into `provenance.copies`.
    pub copy: usize,
    /// Source edge whose containment is reported per pullback.
    pub tracked: Option<EdgeId>,
}

/// A constructed graph together with where everything came from and the
/// named edge and vertex sets the construction singles out.
#[derive(Clone, Debug)]
pub struct GadgetOutput {
    pub graph: Multigraph,
    pub provenance: Provenance,
    pub designated: BTreeMap<String, Vec<EdgeId>>,
    pub marked: BTreeMap<String, Vec<VertexId>>,
    pub pullbacks: Vec<PullbackCopy>,
}

impl GadgetOutput {
    pub(crate) fn plain(graph: Multigraph, provenance: Provenance) -> Self {
        GadgetOutput { graph, provenance, designated: BTreeMap::new(), marked: BTreeMap::new(), pullbacks: Vec::new() }
    }

    /// A designated edge set; empty when the name is unknown.
    pub fn edges(&self, name: &str) -> &[EdgeId] {
        self.designated.get(name).map_or(&[], Vec::as_slice)
    }

    /// A marked vertex set; empty when the name is unknown.
    pub fn vertices(&self, name: &str) -> &[VertexId] {
        self.marked.get(name).map_or(&[], Vec::as_slice)
    }

    /// The single vertex of a one-element marked set.
    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        match self.vertices(name) {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub(crate) fn designate(&mut self, name: impl Into<String>, mut edges: Vec<EdgeId>) {
        edges.sort_unstable();
        self.designated.insert(name.into(), edges);
    }

    pub(crate) fn mark(&mut self, name: impl Into<String>, mut vertices: Vec<VertexId>) {
        vertices.sort_unstable();
        self.marked.insert(name.into(), vertices);
    }
}

/// Fails unless `g` is `r`-regular and `r`-edge-connected.
pub(crate) fn ensure_regular_connected(g: &Multigraph, r: usize, what: &str) -> Result<()> {
    if !g.is_regular(r) {
        return Err(Error::Internal(format!("{what} is not {r}-regular")));
    }
    let (lambda, cut) = edge_connectivity(g)?;
    if lambda < r {
        return Err(Error::Internal(format!("{what} has an edge cut of size {lambda} around {:?}", cut.side)));
    }
    Ok(())
}

/// Like [`ensure_regular_connected`] but blames the caller's input.
pub(crate) fn require_regular_connected(g: &Multigraph, r: usize, what: &str) -> Result<()> {
    ensure_regular_connected(g, r, what).map_err(|e| match e {
        Error::Internal(m) => Error::Precondition(m),
        other => other,
    })
}

/// Rewrites `outer`, in which copy `inner_copy` is a graph that itself has
/// provenance `inner`, so that every part refers to the copies of `inner`
/// directly. The other copies of `outer` are appended after those of `inner`.
fn compose(outer: &Provenance, inner_copy: usize, inner: &Provenance) -> Provenance {
    let base = inner.copies.len();
    let others: Vec<usize> = (0..outer.copies.len()).filter(|&c| c != inner_copy).collect();
    let remap = |c: usize| base + others.iter().position(|&o| o == c).expect("listed");
    let mut copies = inner.copies.clone();
    copies.extend(others.iter().map(|&c| outer.copies[c].clone()));
    let vertices = outer
        .vertices
        .iter()
        .map(|p| if p.copy == inner_copy { inner.vertices[p.item] } else { Part { copy: remap(p.copy), item: p.item } })
        .collect();
    let edges = outer
        .edges
        .iter()
        .map(|parts| {
            let mut out: Vec<Part> = parts
                .iter()
                .flat_map(|p| {
                    if p.copy == inner_copy {
                        inner.edges[p.item].clone()
                    } else {
                        vec![Part { copy: remap(p.copy), item: p.item }]
                    }
                })
                .collect();
            out.sort_unstable();
            out
        })
        .collect();
    Provenance { copies, vertices, edges }
}

#[cfg(test)]
mod tests;
