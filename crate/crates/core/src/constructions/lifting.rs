//! Liftings `vx, vy → xy` that keep every local edge connectivity away
//! from `v`.

use crate::connectivity::GomoryHuTree;
use crate::error::{invalid, Error, Result};
use crate::multigraph::{Builder, EdgeId, Multigraph, VertexId};

/// The result of one lifting. Vertex ids are unchanged.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub graph: Multigraph,
    /// The removed instances `vx` and `vy` (input ids).
    pub removed: (EdgeId, EdgeId),
    /// The new edge `xy` (output id).
    pub new_edge: EdgeId,
    /// input edge id -> output edge id
    pub edge_map: Vec<Option<EdgeId>>,
}

/// Removes one instance of `vx` and one of `vy` (the lowest ids) and adds
/// `xy`.
pub fn lift(g: &Multigraph, v: VertexId, x: VertexId, y: VertexId) -> Result<Lifted> {
    if v.max(x).max(y) >= g.n() {
        return invalid("lifting vertices out of range");
    }
    if x == y {
        return invalid(format!("lifting at {v} onto {x} twice would create a loop"));
    }
    if x == v || y == v {
        return invalid("lifting endpoints must differ from the lifted vertex");
    }
    let (Some(&ex), Some(&ey)) = (g.edges_between(v, x).first(), g.edges_between(v, y).first()) else {
        return invalid(format!("{x} and {y} must both be neighbours of {v}"));
    };
    let mut b = Builder::new();
    let h = b.add_copy("G", g);
    b.remove_edge(h.edge(ex));
    b.remove_edge(h.edge(ey));
    let added = b.add_edge(h.vertex(x), h.vertex(y), Vec::new());
    let f = b.finish();
    let edge_map = (0..g.m()).map(|e| f.edge_map[h.edge(e)]).collect();
    Ok(Lifted { graph: f.graph.clone(), removed: (ex, ey), new_edge: f.edge(added), edge_map })
}

/// All-pairs local edge connectivity restricted to pairs avoiding `v`.
fn connectivity_away_from(g: &Multigraph, v: VertexId) -> Vec<u64> {
    let all = GomoryHuTree::build(g).all_pairs();
    let n = g.n();
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            out.push(if a == v || b == v || a == b { 0 } else { all[a * n + b] });
        }
    }
    out
}

/// The first neighbour pair `(x, y)`, `x < y`, whose lifting at `v`
/// preserves the local edge connectivity of every pair in `V ∖ {v}`.
///
/// Requires `d(v) ≥ 4`, `|N(v)| ≥ 2` and `G − v` connected; under these
/// hypotheses such a pair always exists, so not finding one is an internal
/// error.
pub fn find_admissible_lifting(g: &Multigraph, v: VertexId) -> Result<(VertexId, VertexId)> {
    if v >= g.n() {
        return invalid("vertex out of range");
    }
    if g.degree(v) < 4 {
        return Err(Error::Precondition(format!("d({v}) = {} < 4", g.degree(v))));
    }
    let nbrs = g.neighbors(v);
    if nbrs.len() < 2 {
        return Err(Error::Precondition(format!("vertex {v} has fewer than two neighbours")));
    }
    let mut alive = vec![true; g.n()];
    alive[v] = false;
    if g.components(Some(&alive)).len() != 1 {
        return Err(Error::Precondition(format!("G − {v} is disconnected")));
    }
    let before = connectivity_away_from(g, v);
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            let lifted = lift(g, v, x, y)?;
            if connectivity_away_from(&lifted.graph, v) == before {
                return Ok((x, y));
            }
        }
    }
    Err(Error::Internal(format!("no admissible lifting at {v} although the hypotheses hold")))
}
