//! Blow-ups turning 5-graph PDPMs into cubic covers.
//!
//! `wheel_blowup` replaces every vertex of a 5-edge-connected 5-graph by the
//! rim of `W_5 + E(C_5)`; `k_gadget_blowup` replaces every vertex of `2G`, for
//! a cubic `G`, by the gadget `K` minus its degree-6 vertex.

use super::{require_bridgeless_cubic, verify_5cdc, CycleDoubleCover5};
use crate::connectivity::{cyclic_edge_connectivity_at_least, is_k_edge_connected};
use crate::constructions::{ensure_regular_connected, require_regular_connected, splice_with, wheel, GadgetOutput, WHEEL_HUB};
use crate::error::{invalid, precondition, Error, Result};
use crate::matching::{verify_pdpm, Constraints, PdpmWitness};
use crate::multigraph::{Builder, EdgeId, Matching, Multigraph, VertexId};

/// Copy index of the blown-up graph (`G` or `2G`) in both blow-ups.
const BASE: usize = 0;

/// Every vertex `v` of `g` becomes the rim `C5/<v>`; the original edges keep
/// a part in copy 0 (`G`).
pub fn wheel_blowup(g: &Multigraph) -> Result<GadgetOutput> {
    require_regular_connected(g, 5, "the input")?;
    let w = wheel();
    let mut b = Builder::new();
    let base = b.add_copy("G", g);
    let mut rims = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let h = b.add_copy(format!("W{v}"), &w);
        splice_with(&mut b, base.vertex(v), h.vertex(WHEEL_HUB), &[])?;
        rims.push(h.copy);
    }
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph, f.provenance);
    for (v, &copy) in rims.iter().enumerate() {
        let rim = out.provenance.vertices_of_copy(copy);
        out.mark(format!("C5/{v}"), rim);
    }
    if !out.graph.is_underlying_cubic() {
        return Err(Error::Internal("wheel blow-up is not underlying cubic".into()));
    }
    ensure_regular_connected(&out.graph, 5, "the wheel blow-up")?;
    Ok(out)
}

fn base_graph(blowup: &GadgetOutput) -> Result<&Multigraph> {
    match blowup.provenance.copies.get(BASE) {
        Some(c) => Ok(&c.source),
        None => invalid("the blow-up has no base copy"),
    }
}

/// Reads each matching of a 5-PDPM of the wheel blow-up in `G`.
pub fn restrict_pdpm_wheel(blowup: &GadgetOutput, witness: &PdpmWitness) -> Result<PdpmWitness> {
    let g = base_graph(blowup)?;
    let h = &blowup.graph;
    if let Err(why) = verify_pdpm(h, 5, &witness.constraints, &witness.matchings) {
        return invalid(format!("not a 5-PDPM of the blow-up: {why}"));
    }
    let mut matchings = Vec::with_capacity(5);
    for (i, n) in witness.matchings.iter().enumerate() {
        for v in 0..g.n() {
            let cut = h.boundary(blowup.vertices(&format!("C5/{v}")));
            let hits = cut.iter().filter(|&&e| n.contains(e)).count();
            if hits != 1 {
                return Err(Error::Internal(format!("matching {i} meets ∂(C5/{v}) {hits} times")));
            }
        }
        matchings.push(Matching::new(blowup.provenance.restrict(n.edges(), BASE)));
    }
    if let Err(why) = verify_pdpm(g, 5, &Constraints::none(), &matchings) {
        return Err(Error::Internal(format!("restriction is not a 5-PDPM of G: {why}")));
    }
    Ok(PdpmWitness { matchings, constraints: Constraints::none() })
}

/// The degree-6 vertex of [`k_gadget`].
pub const K_GADGET_W: VertexId = 0;

/// The 4-wheel with rim `r_1 r_2 r_3 r_4` doubled and the spoke `h r_1`
/// doubled. Vertices are `r_1..r_4 = 0..4` and `h = 4`; `r_1` has degree 6,
/// the others 5.
pub fn k_gadget() -> Multigraph {
    let mut e: Vec<(usize, usize)> = Vec::new();
    for _ in 0..2 {
        e.extend((0..4).map(|i| (i, (i + 1) % 4)));
    }
    e.extend((0..4).map(|i| (i, 4)));
    e.push((0, 4));
    let labels = ["r1", "r2", "r3", "r4", "h"].map(String::from).to_vec();
    Multigraph::new(5, e).and_then(|g| g.with_labels(labels)).expect("static graph")
}

/// Replaces every vertex `v` of `2G` by `K^v - w^v`: the two instances of
/// each edge of `G` at `v` go to one neighbour of `w`. Instances of `G`-edge
/// `j` are edges `j` and `m + j` of `2G` (copy 0).
pub fn k_gadget_blowup(g: &Multigraph) -> Result<GadgetOutput> {
    require_bridgeless_cubic(g)?;
    if !cyclic_edge_connectivity_at_least(g, 4)?.holds() {
        return precondition("the graph is not cyclically 4-edge-connected");
    }
    let m = g.m();
    let pairs: Vec<(VertexId, VertexId)> = g.edges().map(|(_, a, b)| (a, b)).collect();
    let doubled = Multigraph::new(g.n(), pairs.iter().chain(&pairs).copied())?;
    if !is_k_edge_connected(&doubled, 6)?.holds() {
        return precondition("2G is not 6-edge-connected");
    }
    let k = k_gadget();
    let mut groups: Vec<Vec<EdgeId>> = Vec::new();
    for t in [1, 3, 4] {
        groups.push(k.edges_between(K_GADGET_W, t));
    }
    let mut b = Builder::new();
    let base = b.add_copy("2G", &doubled);
    // builder id currently carrying each instance of 2G
    let mut current: Vec<EdgeId> = (0..2 * m).map(|e| base.edge(e)).collect();
    let mut gadgets = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let h = b.add_copy(format!("K{v}"), &k);
        let mut at_v: Vec<EdgeId> = g.incident(v).to_vec();
        at_v.sort_unstable();
        let mut pairing = Vec::with_capacity(6);
        for (slot, &j) in at_v.iter().enumerate() {
            for (r, inst) in [j, m + j].into_iter().enumerate() {
                pairing.push((current[inst], h.edge(groups[slot][r])));
            }
        }
        let created = b.splice(base.vertex(v), h.vertex(K_GADGET_W), &pairing)?;
        for (idx, e) in created.into_iter().enumerate() {
            let slot = idx / 2;
            let inst = at_v[slot] + if idx % 2 == 0 { 0 } else { m };
            current[inst] = e;
        }
        gadgets.push(h.copy);
    }
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph, f.provenance);
    for (v, &copy) in gadgets.iter().enumerate() {
        let verts = out.provenance.vertices_of_copy(copy);
        out.mark(format!("K{v}"), verts);
    }
    if out.graph.n() != 4 * g.n() {
        return Err(Error::Internal(format!("K blow-up has {} vertices, expected {}", out.graph.n(), 4 * g.n())));
    }
    ensure_regular_connected(&out.graph, 5, "the K blow-up")?;
    Ok(out)
}

/// For every vertex `v` of `G`, how often each member of `witness` meets
/// `∂(K^v - w^v)`.
pub fn k_cut_hits(blowup: &GadgetOutput, witness: &PdpmWitness) -> Result<Vec<Vec<usize>>> {
    let g = base_graph(blowup)?;
    let h = &blowup.graph;
    if let Err(why) = verify_pdpm(h, 5, &witness.constraints, &witness.matchings) {
        return invalid(format!("not a 5-PDPM of the blow-up: {why}"));
    }
    Ok((0..g.n())
        .map(|v| {
            let cut = h.boundary(blowup.vertices(&format!("K{v}")));
            witness.matchings.iter().map(|n| cut.iter().filter(|&&e| n.contains(e)).count()).collect()
        })
        .collect())
}

/// `C_j` = edges of `G` with an instance in `N_j`.
pub fn cdc_from_pdpm(blowup: &GadgetOutput, witness: &PdpmWitness) -> Result<CycleDoubleCover5> {
    let doubled = base_graph(blowup)?;
    let m = doubled.m() / 2;
    for (v, hits) in k_cut_hits(blowup, witness)?.iter().enumerate() {
        let twice = hits.iter().filter(|&&x| x == 2).count();
        if twice != 3 || hits.iter().any(|&x| x != 0 && x != 2) {
            return Err(Error::Internal(format!("hits on ∂(K{v} - w) are {hits:?}, not three 2s")));
        }
    }
    let g = Multigraph::new(doubled.n(), (0..m).map(|j| doubled.endpoints(j)))?;
    let cycles = witness
        .matchings
        .iter()
        .map(|n| {
            let mut c: Vec<EdgeId> = blowup.provenance.restrict(n.edges(), BASE).into_iter().map(|h| h % m).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let cdc = CycleDoubleCover5 { cycles };
    if let Err(why) = verify_5cdc(&g, &cdc) {
        return Err(Error::Internal(format!("projected cover is invalid: {why}")));
    }
    Ok(cdc)
}
