//! Splitting a 5-edge-connected 5-graph along a 3-vertex-cut `X` into `H_1`
//! (the odd side kept, the even side replaced by edges inside `X`) and `H_2`
//! (the odd side contracted, then lifted back to degree 5), and gluing
//! 5-PDPMs of the two parts back together.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ensure_regular_connected, lift, require_regular_connected};
use super::lifting::find_admissible_lifting;
use crate::connectivity::edge_connectivity;
use crate::error::{invalid, precondition, Error, Result};
use crate::matching::{find_pdpm, verify_pdpm, Constraints, PdpmWitness, SearchOptions, SearchOutcome};
use crate::multigraph::{Builder, EdgeId, Finished, Matching, Multigraph, VertexId};

/// An edge of `H_2` in terms of `H'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H2Edge {
    Original(EdgeId),
    /// A lifting edge and the two `H'` edges at `u` it replaced.
    Lifted(EdgeId, EdgeId),
}

/// The pieces of a split along `X = {v_1, v_2, v_3}`.
#[derive(Clone, Debug)]
pub struct ThreeCutSplit {
    pub x: [VertexId; 3],
    /// Odd component of `G − X`.
    pub a_side: Vec<VertexId>,
    /// Even component of `G − X`.
    pub b_side: Vec<VertexId>,
    /// `n_i = |∂(B) ∩ ∂(v_i)|`.
    pub n: [usize; 3],
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// `(G − B) + a{v_1v_2} + b{v_2v_3} + c{v_3v_1}`.
    pub h1: Multigraph,
    /// `H_1` vertex -> `G` vertex.
    pub h1_vertices: Vec<VertexId>,
    /// `H_1` edge -> `G` edge; `None` for the added edges inside `X`.
    pub h1_edges: Vec<Option<EdgeId>>,
    /// `G` with `A` identified to `u`, loops removed.
    pub h_prime: Multigraph,
    /// `H'` vertex -> `G` vertex; `None` for `u`.
    pub hp_vertices: Vec<Option<VertexId>>,
    /// `H'` edge -> `G` edge.
    pub hp_edges: Vec<EdgeId>,
    /// The contracted vertex, in `H'` and `H_2` numbering alike.
    pub u: VertexId,
    /// `H'` after `(d(u) − 5)/2` admissible liftings at `u`.
    pub h2: Multigraph,
    pub h2_edges: Vec<H2Edge>,
    /// The lifted neighbour pairs, in the order they were applied.
    pub liftings: Vec<(VertexId, VertexId)>,
}

impl ThreeCutSplit {
    /// `∂_G(A)`.
    pub fn boundary_a(&self, g: &Multigraph) -> Vec<EdgeId> {
        g.boundary(&self.a_side)
    }

    /// The lifting edges of `H_2`.
    pub fn lifting_edges(&self) -> Vec<EdgeId> {
        (0..self.h2_edges.len()).filter(|&e| matches!(self.h2_edges[e], H2Edge::Lifted(..))).collect()
    }
}

/// `(a, b, c)` from `(n_1, n_2, n_3)`. Fails when the sum is odd or a
/// coefficient is negative, naming the cut that would be too small.
pub fn cut_coefficients(n: [usize; 3]) -> Result<(usize, usize, usize)> {
    if (n[0] + n[1] + n[2]) % 2 == 1 {
        return precondition(format!("|∂(B)| = {} is odd although |B| is even", n[0] + n[1] + n[2]));
    }
    let [n1, n2, n3] = n.map(|v| v as i64);
    let half = |p: i64, q: i64, r: i64| (p + q - r) / 2;
    let (a, b, c) = (half(n1, n2, n3), half(n2, n3, n1), half(n1, n3, n2));
    for (val, name, v) in [(a, "a", 3), (b, "b", 1), (c, "c", 2)] {
        if val < 0 {
            return precondition(format!("{name} = {val} < 0: |∂(B ∪ {{v_{v}}})| < 5"));
        }
    }
    Ok((a as usize, b as usize, c as usize))
}

fn g_edges(f: &Finished) -> Vec<Option<EdgeId>> {
    f.provenance.edges.iter().map(|parts| parts.first().map(|p| p.item)).collect()
}

/// Splits `g` along the 3-vertex-cut `x`.
pub fn split_on_3cut(g: &Multigraph, x: [VertexId; 3]) -> Result<ThreeCutSplit> {
    if x.iter().any(|&v| v >= g.n()) || x[0] == x[1] || x[1] == x[2] || x[0] == x[2] {
        return invalid("the cut must consist of three distinct vertices");
    }
    require_regular_connected(g, 5, "G")?;
    if g.n() % 2 == 1 {
        return precondition("G has odd order");
    }
    let mut alive = vec![true; g.n()];
    for &v in &x {
        alive[v] = false;
    }
    let comps = g.components(Some(&alive));
    if comps.len() != 2 {
        return precondition(format!("G − X has {} components, not 2", comps.len()));
    }
    let (a_side, b_side) = if comps[0].len() % 2 == 1 {
        (comps[0].clone(), comps[1].clone())
    } else {
        (comps[1].clone(), comps[0].clone())
    };
    if b_side.len() % 2 == 1 {
        return Err(Error::Internal("both sides of X are odd in a graph of even order".into()));
    }
    let in_b = g.membership(&b_side);
    let n = x.map(|v| g.incident(v).iter().filter(|&&e| in_b[g.other(e, v)]).count());
    let (a, b, c) = cut_coefficients(n)?;

    let mut bld = Builder::new();
    let h = bld.add_copy("G", g);
    for &v in &b_side {
        bld.remove_vertex(h.vertex(v));
    }
    bld.add_edges(h.vertex(x[0]), h.vertex(x[1]), a);
    bld.add_edges(h.vertex(x[1]), h.vertex(x[2]), b);
    bld.add_edges(h.vertex(x[2]), h.vertex(x[0]), c);
    let f = bld.finish();
    let h1 = f.graph.clone();
    let h1_vertices = f.provenance.vertices.iter().map(|p| p.item).collect();
    let h1_edges = g_edges(&f);
    ensure_regular_connected(&h1, 5, "H_1")?;

    let mut bld = Builder::new();
    let h = bld.add_copy("G", g);
    for &v in &a_side[1..] {
        bld.identify(h.vertex(a_side[0]), h.vertex(v));
    }
    let f = bld.finish();
    let h_prime = f.graph.clone();
    let u = f.vertex(h.vertex(a_side[0]));
    let hp_vertices = (0..h_prime.n()).map(|v| (v != u).then(|| f.provenance.vertices[v].item)).collect();
    let hp_edges: Vec<EdgeId> = g_edges(&f).into_iter().map(|e| e.expect("every H' edge comes from G")).collect();
    let du = h_prime.degree(u);
    if du < 5 || du % 2 == 0 {
        return Err(Error::Internal(format!("d_H'(u) = {du} is not an odd number ≥ 5")));
    }

    let mut h2 = h_prime.clone();
    let mut h2_edges: Vec<H2Edge> = (0..h2.m()).map(H2Edge::Original).collect();
    let mut liftings = Vec::new();
    for _ in 0..(du - 5) / 2 {
        let (p, q) = find_admissible_lifting(&h2, u)?;
        let lifted = lift(&h2, u, p, q)?;
        let original = |e: EdgeId| match h2_edges[e] {
            H2Edge::Original(o) => o,
            H2Edge::Lifted(..) => unreachable!("lifting edges avoid u"),
        };
        let mut next = vec![H2Edge::Original(0); lifted.graph.m()];
        for (old, new) in lifted.edge_map.iter().enumerate() {
            if let Some(new) = new {
                next[*new] = h2_edges[old];
            }
        }
        next[lifted.new_edge] = H2Edge::Lifted(original(lifted.removed.0), original(lifted.removed.1));
        h2 = lifted.graph;
        h2_edges = next;
        liftings.push((p, q));
    }
    ensure_regular_connected(&h2, 5, "H_2")?;

    Ok(ThreeCutSplit {
        x,
        a_side,
        b_side,
        n,
        a,
        b,
        c,
        h1,
        h1_vertices,
        h1_edges,
        h_prime,
        hp_vertices,
        hp_edges,
        u,
        h2,
        h2_edges,
        liftings,
    })
}

/// How [`combine_pdpm`] obtained its `H_1` side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombineRoute {
    /// The boundary patterns on `∂(A)` of the two witnesses coincide up to
    /// reordering.
    Direct,
    /// They did not; `H_1` was re-solved with the `H_2` patterns pinned.
    Resolved { nodes: u64 },
}

#[derive(Clone, Debug)]
pub struct Combined {
    pub witness: PdpmWitness,
    pub route: CombineRoute,
}

/// Glues a PDPM `w1` of `H_1` and a PDPM `w2` of `H_2` of the same size
/// into a verified PDPM of `g`.
///
/// Member `i` of `w2`, with its lifting edge expanded, covers `∂(A)` in some
/// set `S_i`. Equal counts of 3-edge patterns do not make the sets equal, so
/// when no member of `w1` meets `∂(A)` in exactly `S_i`, `H_1` is searched
/// again with every `S_i` pinned to member `i` and the rest of `∂(A)`
/// avoided.
pub fn combine_pdpm(
    split: &ThreeCutSplit,
    g: &Multigraph,
    w1: &PdpmWitness,
    w2: &PdpmWitness,
    opts: &SearchOptions,
) -> Result<Combined> {
    let k = w1.k();
    if w2.k() != k {
        return invalid(format!("witness sizes differ: {k} for H_1, {} for H_2", w2.k()));
    }
    if let Err(why) = verify_pdpm(&split.h1, k, &w1.constraints, &w1.matchings) {
        return invalid(format!("not a PDPM of H_1: {why}"));
    }
    if let Err(why) = verify_pdpm(&split.h2, k, &w2.constraints, &w2.matchings) {
        return invalid(format!("not a PDPM of H_2: {why}"));
    }
    let in_a = g.membership(&split.a_side);
    let on_boundary = |e: EdgeId| {
        let (p, q) = g.endpoints(e);
        in_a[p] != in_a[q]
    };
    let inside_a = |e: EdgeId| {
        let (p, q) = g.endpoints(e);
        in_a[p] && in_a[q]
    };

    // N_i in G edge ids.
    let n_sets: Vec<Vec<EdgeId>> = w2
        .matchings
        .iter()
        .map(|m| {
            let mut out = Vec::new();
            for &e in m.edges() {
                match split.h2_edges[e] {
                    H2Edge::Original(o) => out.push(split.hp_edges[o]),
                    H2Edge::Lifted(p, q) => out.extend([split.hp_edges[p], split.hp_edges[q]]),
                }
            }
            out.sort_unstable();
            out
        })
        .collect();
    let s_sets: Vec<Vec<EdgeId>> =
        n_sets.iter().map(|n| n.iter().copied().filter(|&e| on_boundary(e)).collect()).collect();

    let project = |m: &Matching| -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut boundary = Vec::new();
        let mut internal = Vec::new();
        for &e in m.edges() {
            if let Some(ge) = split.h1_edges[e] {
                if on_boundary(ge) {
                    boundary.push(ge);
                } else if inside_a(ge) {
                    internal.push(ge);
                }
            }
        }
        boundary.sort_unstable();
        (boundary, internal)
    };
    let mut parts: Vec<(Vec<EdgeId>, Vec<EdgeId>)> = w1.matchings.iter().map(project).collect();

    let mut order = Vec::with_capacity(k);
    for s in &s_sets {
        match (0..k).find(|&j| !order.contains(&j) && parts[j].0 == *s) {
            Some(j) => order.push(j),
            None => break,
        }
    }
    let route = if order.len() == k {
        CombineRoute::Direct
    } else {
        let g_to_h1 = {
            let mut map = vec![None; g.m()];
            for (he, ge) in split.h1_edges.iter().enumerate() {
                if let Some(ge) = ge {
                    map[*ge] = Some(he);
                }
            }
            map
        };
        let mut constraints = Constraints::none();
        let mut used = vec![false; g.m()];
        for (i, s) in s_sets.iter().enumerate() {
            for &e in s {
                used[e] = true;
                constraints = constraints.pin(g_to_h1[e].expect("∂(A) lies in H_1"), i);
            }
        }
        let unused = g.boundary(&split.a_side).into_iter().filter(|&e| !used[e]);
        constraints = constraints.avoiding(unused.map(|e| g_to_h1[e].expect("∂(A) lies in H_1")));
        let report = find_pdpm(&split.h1, k, &constraints, opts)?;
        match report.outcome {
            SearchOutcome::Found(w) => {
                parts = w.matchings.iter().map(project).collect();
                order = (0..k).collect();
                CombineRoute::Resolved { nodes: report.nodes }
            }
            SearchOutcome::None => {
                return precondition("no PDPM of H_1 realises the boundary patterns of the H_2 witness")
            }
            SearchOutcome::BudgetExhausted => {
                return Err(Error::Resource("budget exhausted while re-solving H_1 with pinned boundary".into()))
            }
        }
    };

    let matchings: Vec<Matching> = (0..k)
        .map(|i| {
            let mut edges = n_sets[i].clone();
            edges.extend_from_slice(&parts[order[i]].1);
            Matching::new(edges)
        })
        .collect();
    let witness = PdpmWitness { matchings, constraints: Constraints::none() };
    if let Err(why) = witness.verify(g) {
        return Err(Error::Internal(format!("combined PDPM fails verification: {why}")));
    }
    Ok(Combined { witness, route })
}

/// A generated 5-edge-connected 5-graph with a non-trivial 3-vertex-cut.
#[derive(Clone, Debug)]
pub struct PlantedCut {
    pub graph: Multigraph,
    pub x: [VertexId; 3],
    /// Odd side, `|A| ∈ {3, 5, 7}`.
    pub a_side: Vec<VertexId>,
    /// Even side, `|B| ∈ {4, 6, 8}`.
    pub b_side: Vec<VertexId>,
}

const PLANT_ATTEMPTS: usize = 20_000;

/// A random 5-regular 5-edge-connected multigraph on `n` vertices with
/// multiplicities at most 2, by stub pairing with rejection.
fn random_piece(rng: &mut ChaCha8Rng, n: usize) -> Result<Option<Multigraph>> {
    let mut stubs: Vec<VertexId> = (0..n).flat_map(|v| [v; 5]).collect();
    for _ in 0..PLANT_ATTEMPTS {
        stubs.shuffle(rng);
        let pairs: Vec<(VertexId, VertexId)> = stubs.chunks(2).map(|p| (p[0], p[1])).collect();
        if pairs.iter().any(|p| p.0 == p.1) {
            continue;
        }
        let g = Multigraph::new(n, pairs)?;
        if g.max_multiplicity() <= 2 && edge_connectivity(&g)?.0 >= 5 {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Vertices `0..|A|` form `A`, the next three `X`, the rest `B`. No edge
/// joins `A` to `B`. Deterministic in `seed`.
///
/// `A` is a random 5-regular graph `K` minus a vertex `a*`, `B` is a random
/// 5-regular graph `L` minus two non-adjacent vertices `b*, b**`; the five
/// stubs of `a*` and the ten of `b*, b**` are dealt to `X` so that every
/// cut vertex receives five. Candidates failing 5-edge-connectivity are
/// redrawn.
pub fn planted_three_cut(seed: u64) -> Result<PlantedCut> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let na = [3, 5, 7][rng.random_range(0..3)];
    let nb = [4, 6, 8][rng.random_range(0..3)];
    let n = na + 3 + nb;
    let x = [na, na + 1, na + 2];
    let a_side: Vec<VertexId> = (0..na).collect();
    let b_side: Vec<VertexId> = (na + 3..n).collect();
    for _ in 0..PLANT_ATTEMPTS {
        let (Some(k), Some(l)) = (random_piece(&mut rng, na + 1)?, random_piece(&mut rng, nb + 2)?) else {
            continue;
        };
        // a* = na in K; b*, b** = nb, nb + 1 in L.
        if l.mu(nb, nb + 1) > 0 {
            continue;
        }
        let mut alpha = [1usize; 3];
        for _ in 0..2 {
            alpha[rng.random_range(0..3)] += 1;
        }
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        let mut a_stubs = Vec::new();
        for (_, p, q) in k.edges() {
            match (p == na, q == na) {
                (false, false) => edges.push((p, q)),
                (true, _) => a_stubs.push(q),
                (_, true) => a_stubs.push(p),
            }
        }
        let mut b_stubs = Vec::new();
        let b_of = |v: VertexId| na + 3 + v;
        for (_, p, q) in l.edges() {
            match (p >= nb, q >= nb) {
                (false, false) => edges.push((b_of(p), b_of(q))),
                (true, _) => b_stubs.push(b_of(q)),
                (_, true) => b_stubs.push(b_of(p)),
            }
        }
        a_stubs.shuffle(&mut rng);
        b_stubs.shuffle(&mut rng);
        let (mut ia, mut ib) = (a_stubs.into_iter(), b_stubs.into_iter());
        for (i, &xv) in x.iter().enumerate() {
            edges.extend(ia.by_ref().take(alpha[i]).map(|w| (xv, w)));
            edges.extend(ib.by_ref().take(5 - alpha[i]).map(|w| (xv, w)));
        }
        let g = Multigraph::new(n, edges)?;
        debug_assert!(g.is_regular(5));
        let mut alive = vec![true; n];
        for &v in &x {
            alive[v] = false;
        }
        if g.components(Some(&alive)).len() != 2 || edge_connectivity(&g)?.0 < 5 {
            continue;
        }
        return Ok(PlantedCut { graph: g, x, a_side, b_side });
    }
    Err(Error::Resource(format!("no planted 3-cut graph after {PLANT_ATTEMPTS} attempts for seed {seed}")))
}
