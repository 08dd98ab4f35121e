//! Vertex replacement `(G,u)|(H,v)` and the gadgets assembled from it.

use super::{compose, ensure_regular_connected, require_regular_connected, GadgetOutput, PullbackCopy};
use crate::error::{invalid, Error, Result};
use crate::multigraph::{Builder, CopyHandle, EdgeId, Multigraph, VertexId};

/// `(stub at the replaced vertex of G, stub at the replaced vertex of H)`.
pub type Pairing = Vec<(EdgeId, EdgeId)>;

/// `∂(v)` ordered by `(neighbour, id)`; the default enumeration of stubs.
pub fn stub_order(g: &Multigraph, v: VertexId) -> Vec<EdgeId> {
    let mut s = g.incident(v).to_vec();
    s.sort_by_key(|&e| (g.other(e, v), e));
    s
}

fn builder_stub_order(b: &Builder, v: VertexId) -> Vec<EdgeId> {
    let mut s = b.incident(v);
    s.sort_by_key(|&e| (b.other(e, v), e));
    s
}

/// Zips the two stub orders.
pub fn default_pairing(g: &Multigraph, u: VertexId, h: &Multigraph, v: VertexId) -> Result<Pairing> {
    if g.degree(u) != h.degree(v) {
        return invalid(format!("degree mismatch in vertex replacement: {} vs {}", g.degree(u), h.degree(v)));
    }
    Ok(stub_order(g, u).into_iter().zip(stub_order(h, v)).collect())
}

/// Splices builder vertices `x` and `y`: the `forced` pairs first, then the
/// remaining stubs of both sides zipped in stub order. Returns the new
/// edges in the same order.
pub(crate) fn splice_with(b: &mut Builder, x: VertexId, y: VertexId, forced: &[(EdgeId, EdgeId)]) -> Result<Vec<EdgeId>> {
    let rest_x: Vec<EdgeId> = builder_stub_order(b, x).into_iter().filter(|e| !forced.iter().any(|p| p.0 == *e)).collect();
    let rest_y: Vec<EdgeId> = builder_stub_order(b, y).into_iter().filter(|e| !forced.iter().any(|p| p.1 == *e)).collect();
    let mut pairing = forced.to_vec();
    pairing.extend(rest_x.into_iter().zip(rest_y));
    b.splice(x, y, &pairing)
}

/// One member of `(G,u)|(H,v)`. `pairing` uses edge ids of `G` and `H`;
/// `None` takes [`default_pairing`]. Copies are `G` and `H`; the new edges
/// are designated `joined`. When both inputs are r-regular and
/// r-edge-connected the output is verified to be as well.
pub fn replace_vertex(
    g: &Multigraph,
    u: VertexId,
    h: &Multigraph,
    v: VertexId,
    pairing: Option<&[(EdgeId, EdgeId)]>,
) -> Result<GadgetOutput> {
    if u >= g.n() || v >= h.n() {
        return invalid("replaced vertices must exist");
    }
    let pairing = match pairing {
        Some(p) => p.to_vec(),
        None => default_pairing(g, u, h, v)?,
    };
    let mut b = Builder::new();
    let a = b.add_copy("G", g);
    let c = b.add_copy("H", h);
    let mapped: Pairing = pairing
        .iter()
        .map(|&(x, y)| if x < g.m() && y < h.m() { Ok((a.edge(x), c.edge(y))) } else { invalid("pairing names a missing edge") })
        .collect::<Result<_>>()?;
    let joined = b.splice(a.vertex(u), c.vertex(v), &mapped)?;
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph.clone(), f.provenance.clone());
    out.designate("joined", f.edges(&joined));
    if let (Some(r), Some(s)) = (g.regularity(), h.regularity()) {
        if r == s && r > 0 && both_connected(g, h, r)? {
            ensure_regular_connected(&out.graph, r, "vertex replacement")?;
        }
    }
    Ok(out)
}

fn both_connected(g: &Multigraph, h: &Multigraph, r: usize) -> Result<bool> {
    use crate::connectivity::edge_connectivity;
    Ok(edge_connectivity(g)?.0 >= r && edge_connectivity(h)?.0 >= r)
}

/// `W_5 + E(C_5)`: rim `0..5` with every rim edge doubled, hub `5`.
pub fn wheel() -> Multigraph {
    let mut e: Vec<(usize, usize)> = Vec::new();
    for _ in 0..2 {
        e.extend((0..5).map(|i| (i, (i + 1) % 5)));
    }
    e.extend((0..5).map(|i| (i, 5)));
    let labels = (1..=5).map(|i| format!("c{i}")).chain(["w".to_string()]).collect();
    Multigraph::new(6, e).and_then(|g| g.with_labels(labels)).expect("static graph")
}

/// The hub of [`wheel`].
pub const WHEEL_HUB: VertexId = 5;

/// `C_2r` with multiplied edges plus hubs `u` (joined to odd `u_i`) and `u'`
/// (joined to even `u_i`). Vertices `u_1..u_2r` are `0..2r`, then `u`, `u'`.
pub fn gadget_cycle(r: usize) -> Result<GadgetOutput> {
    if r < 3 {
        return invalid("the cycle gadget needs r ≥ 3");
    }
    let (hu, hu2) = (2 * r, 2 * r + 1);
    let mut e = Vec::new();
    for i in 0..2 * r {
        // i is 0-based, so u_{i+1} is odd exactly when i is even.
        let mult = if r % 2 == 1 {
            (r - 1) / 2
        } else if i % 2 == 0 {
            r / 2
        } else {
            (r - 2) / 2
        };
        e.extend(std::iter::repeat_n((i, (i + 1) % (2 * r)), mult));
    }
    let hub_u: Vec<EdgeId> = (0..r).map(|j| e.len() + j).collect();
    e.extend((0..2 * r).step_by(2).map(|i| (hu, i)));
    let hub_u2: Vec<EdgeId> = (0..r).map(|j| e.len() + j).collect();
    e.extend((1..2 * r).step_by(2).map(|i| (hu2, i)));
    let labels = (1..=2 * r).map(|i| format!("u{i}")).chain(["u".into(), "u'".into()]).collect();
    let g = Multigraph::new(2 * r + 2, e)?.with_labels(labels)?;
    let (prov_g, prov) = Multigraph::disjoint_union(&[("H", &g)]);
    let mut out = GadgetOutput::plain(prov_g, prov);
    out.designate("hub_u", hub_u);
    out.designate("hub_u'", hub_u2);
    out.mark("u", vec![hu]);
    out.mark("u'", vec![hu2]);
    out.mark("odd", (0..2 * r).step_by(2).collect());
    out.mark("even", (1..2 * r).step_by(2).collect());
    ensure_regular_connected(&out.graph, r, "cycle gadget")?;
    Ok(out)
}

fn check_edge_at(g: &Multigraph, v: VertexId, e: EdgeId) -> Result<()> {
    if v >= g.n() || e >= g.m() {
        return invalid("vertex or edge out of range");
    }
    let (a, b) = g.endpoints(e);
    if a != v && b != v {
        return invalid(format!("edge {e} is not incident with vertex {v}"));
    }
    Ok(())
}

/// `H'`: every odd `u_i` of [`gadget_cycle`] replaced by a copy `G<i>` of `G`
/// at `v`, with the stub `e = vv_1` joined to `u`.
///
/// Designated: `tracked` = `{uv_1^i}`. Marked: `u`, `u'`, and `G<i>` for the
/// vertices of each copy.
pub fn gadget_cycle_embed(g: &Multigraph, v: VertexId, e: EdgeId, r: usize) -> Result<GadgetOutput> {
    check_edge_at(g, v, e)?;
    require_regular_connected(g, r, "G")?;
    let base = gadget_cycle(r)?;
    let (hu, hu2) = (2 * r, 2 * r + 1);
    let mut b = Builder::new();
    let h = b.add_copy("H", &base.graph);
    let mut tracked = Vec::new();
    let mut copies: Vec<(usize, CopyHandle)> = Vec::new();
    for i in (1..=2 * r).step_by(2) {
        let gi = b.add_copy(format!("G{i}"), g);
        let ui = h.vertex(i - 1);
        let to_hub = b.bundle(ui, h.vertex(hu));
        let created = splice_with(&mut b, ui, gi.vertex(v), &[(to_hub[0], gi.edge(e))])?;
        tracked.push(created[0]);
        copies.push((i, gi));
    }
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph.clone(), f.provenance.clone());
    out.designate("tracked", f.edges(&tracked));
    out.mark("u", vec![f.vertex(h.vertex(hu))]);
    out.mark("u'", vec![f.vertex(h.vertex(hu2))]);
    for (i, gi) in &copies {
        out.mark(format!("G{i}"), gi.vertices().filter_map(|x| f.vertex_map[x]).collect());
        out.pullbacks.push(PullbackCopy { copy: gi.copy, tracked: Some(e) });
    }
    ensure_regular_connected(&out.graph, r, "cycle embedding")?;
    if out.graph.n() % 2 == 1 {
        return Err(Error::Internal("cycle embedding has odd order".into()));
    }
    Ok(out)
}

/// `K_4` on `u_1..u_4 = 0..4` with the boundary 4-cycle multiplied to make
/// it r-regular and single diagonals `u_1u_3`, `u_2u_4`.
pub fn gadget_k4(r: usize) -> Result<GadgetOutput> {
    if r < 3 {
        return invalid("the K4 gadget needs r ≥ 3");
    }
    let (m12, m23) = if r % 2 == 1 { ((r - 1) / 2, (r - 1) / 2) } else { (r / 2, (r - 2) / 2) };
    let mut e = Vec::new();
    e.extend(std::iter::repeat_n((0, 1), m12));
    e.extend(std::iter::repeat_n((1, 2), m23));
    e.extend(std::iter::repeat_n((2, 3), m12));
    e.extend(std::iter::repeat_n((3, 0), m23));
    let d13 = e.len();
    e.push((0, 2));
    let d24 = e.len();
    e.push((1, 3));
    let labels = (1..=4).map(|i| format!("u{i}")).collect();
    let g = Multigraph::new(4, e)?.with_labels(labels)?;
    let (graph, prov) = Multigraph::disjoint_union(&[("H", &g)]);
    let mut out = GadgetOutput::plain(graph, prov);
    out.designate("u1u3", vec![d13]);
    out.designate("u2u4", vec![d24]);
    ensure_regular_connected(&out.graph, r, "K4 gadget")?;
    Ok(out)
}

/// `⌊(r−k)/2⌋ + 1`.
pub fn k4_attachment_count(r: usize, k: usize) -> usize {
    r.saturating_sub(k) / 2 + 1
}

/// `H'` from [`gadget_k4`]: `u_1` and `u_3` replaced by copies `G1`, `G3` of
/// `G` at `v` so that `v_1^1v_1^3` is an edge (`e_1 = vv_1`), and as many of
/// the chosen stubs `e_2..e_{t+1}` as the bundles allow are routed to `u_2`.
///
/// Designated: `u2u4`, `v1v3`, and `attach_u2` = `[u_2, V^1 ∪ V^3]`.
pub fn gadget_k4_embed(g: &Multigraph, v: VertexId, e1: EdgeId, chosen: &[EdgeId], k: usize) -> Result<GadgetOutput> {
    check_edge_at(g, v, e1)?;
    let r = g.degree(v);
    require_regular_connected(g, r, "G")?;
    let t = k4_attachment_count(r, k);
    if k == 0 || k > r {
        return invalid(format!("k = {k} is outside 1..={r}"));
    }
    if chosen.len() != t {
        return invalid(format!("expected t = {t} chosen edges, got {}", chosen.len()));
    }
    let mut sorted = chosen.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != t || chosen.iter().any(|&c| c == e1 || check_edge_at(g, v, c).is_err()) {
        return invalid("chosen edges must be distinct edges at v other than e_1");
    }
    let base = gadget_k4(r)?;
    let mut b = Builder::new();
    let h = b.add_copy("H", &base.graph);
    let (u1, u2, u3) = (h.vertex(0), h.vertex(1), h.vertex(2));
    let g1 = b.add_copy("G1", g);
    let g3 = b.add_copy("G3", g);
    let diag = b.bundle(u1, u3)[0];
    let mut forced = vec![(diag, g1.edge(e1))];
    forced.extend(b.bundle(u1, u2).into_iter().zip(chosen.iter().map(|&c| g1.edge(c))));
    let created = splice_with(&mut b, u1, g1.vertex(v), &forced)?;
    let diag = created[0];
    let mut forced = vec![(diag, g3.edge(e1))];
    forced.extend(b.bundle(u3, u2).into_iter().zip(chosen.iter().map(|&c| g3.edge(c))));
    let created = splice_with(&mut b, u3, g3.vertex(v), &forced)?;
    let v1v3 = created[0];
    let d24 = h.edge(base.edges("u2u4")[0]);
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph.clone(), f.provenance.clone());
    out.designate("u2u4", vec![f.edge(d24)]);
    out.designate("v1v3", vec![f.edge(v1v3)]);
    let far: Vec<VertexId> = chosen
        .iter()
        .flat_map(|&c| {
            let w = g.other(c, v);
            [f.vertex(g1.vertex(w)), f.vertex(g3.vertex(w))]
        })
        .collect();
    let attach = out.graph.between(&[f.vertex(u2)], &far);
    out.designate("attach_u2", attach);
    out.mark("u2", vec![f.vertex(u2)]);
    out.mark("u4", vec![f.vertex(h.vertex(3))]);
    for (name, gi) in [("G1", &g1), ("G3", &g3)] {
        out.mark(name, gi.vertices().filter_map(|x| f.vertex_map[x]).collect());
        out.pullbacks.push(PullbackCopy { copy: gi.copy, tracked: Some(e1) });
    }
    ensure_regular_connected(&out.graph, r, "K4 embedding")?;
    Ok(out)
}

/// `H` from `G` and a copy `G1`: `v` is replaced by `(G1, v^1)` with new
/// edges `{v_{2k+1}v^1_{2k+1}} ∪ E_1 ∪ E_2`, where `e_1..e_{2k+1}` is
/// [`stub_order`] at `v`, `E_1 = {v_iv^1_{i+k}}` and `E_2 = {v^1_iv_{i+k}}`.
///
/// Designated: `single`, `E1`, `E2`.
pub fn gadget_halfstar(g: &Multigraph, v: VertexId, k: usize) -> Result<GadgetOutput> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if v >= g.n() {
        return invalid("vertex out of range");
    }
    let r = 2 * k + 1;
    if g.degree(v) != r {
        return invalid(format!("the half-star gadget needs odd degree 2k+1 = {r} at v"));
    }
    require_regular_connected(g, r, "G")?;
    let stubs = stub_order(g, v);
    let mut b = Builder::new();
    let a = b.add_copy("G", g);
    let c = b.add_copy("G1", g);
    let mut pairing = vec![(a.edge(stubs[2 * k]), c.edge(stubs[2 * k]))];
    pairing.extend((0..k).map(|i| (a.edge(stubs[i]), c.edge(stubs[i + k]))));
    pairing.extend((0..k).map(|i| (a.edge(stubs[i + k]), c.edge(stubs[i]))));
    let created = b.splice(a.vertex(v), c.vertex(v), &pairing)?;
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph.clone(), f.provenance.clone());
    out.designate("single", vec![f.edge(created[0])]);
    out.designate("E1", f.edges(&created[1..=k]));
    out.designate("E2", f.edges(&created[k + 1..]));
    for h in [&a, &c] {
        out.pullbacks.push(PullbackCopy { copy: h.copy, tracked: Some(stubs[2 * k]) });
    }
    ensure_regular_connected(&out.graph, r, "half-star gadget")?;
    Ok(out)
}

/// `H''`: the hubs `u` and `u'` of a [`gadget_cycle_embed`] output at `r = 5`
/// replaced by wheel copies `W1` and `W2` at their hubs. Provenance and
/// pullbacks refer to the copies of the input gadget.
pub fn gadget_wheel_caps(hp: &GadgetOutput) -> Result<GadgetOutput> {
    let g = &hp.graph;
    let (Some(u), Some(u2)) = (hp.vertex("u"), hp.vertex("u'")) else {
        return invalid("input does not mark the hubs u and u'");
    };
    if !g.is_regular(5) {
        return invalid("wheel caps need a 5-regular cycle embedding");
    }
    if let Some(x) = (0..g.n()).find(|&x| x != u && x != u2 && g.neighbors(x).len() != 3) {
        return Err(Error::Precondition(format!("vertex {x} of H' does not have exactly three neighbours")));
    }
    let w = wheel();
    let mut b = Builder::new();
    let base = b.add_copy("H'", g);
    let w1 = b.add_copy("W1", &w);
    let w2 = b.add_copy("W2", &w);
    splice_with(&mut b, base.vertex(u), w1.vertex(WHEEL_HUB), &[])?;
    splice_with(&mut b, base.vertex(u2), w2.vertex(WHEEL_HUB), &[])?;
    let f = b.finish();
    let provenance = compose(&f.provenance, base.copy, &hp.provenance);
    let mut out = GadgetOutput::plain(f.graph.clone(), provenance);
    // Spliced edges inherit the H' edge they replace as a part.
    let mut successor = vec![None; g.m()];
    for (e, parts) in f.provenance.edges.iter().enumerate() {
        for p in parts.iter().filter(|p| p.copy == base.copy) {
            successor[p.item] = Some(e);
        }
    }
    for (name, edges) in &hp.designated {
        out.designate(name.clone(), edges.iter().filter_map(|&e| successor[e]).collect());
    }
    for (name, vs) in &hp.marked {
        if name == "u" || name == "u'" {
            continue;
        }
        out.mark(name.clone(), vs.iter().filter_map(|&x| f.vertex_map[base.vertex(x)]).collect());
    }
    let rim = |h: &CopyHandle| (0..5).map(|i| f.vertex(h.vertex(i))).collect::<Vec<_>>();
    out.mark("W1", rim(&w1));
    out.mark("W2", rim(&w2));
    out.pullbacks = hp.pullbacks.clone();
    ensure_regular_connected(&out.graph, 5, "wheel caps")?;
    if !out.graph.is_underlying_cubic() {
        return Err(Error::Internal("wheel caps output is not underlying cubic".into()));
    }
    Ok(out)
}
