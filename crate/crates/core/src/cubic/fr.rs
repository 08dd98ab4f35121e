//! FR-triples, special 2-factors, the 2-edge-cut reduction, the pipeline
//! through `G + E(F)`, and BF-covers.

use super::{
    require_bridgeless_cubic, verify_bf_cover, verify_fr_triple, BfCover, CubicOutcome, CubicSearch, FrTriple, Meter,
};
use crate::connectivity::{edge_connectivity, enumerate_edge_cuts_upto, is_k_edge_connected};
use crate::error::{invalid, precondition, Error, Result};
use crate::matching::{enumerate_perfect_matchings, find_pdpm, verify_pdpm, Budget, Constraints, PdpmWitness, SearchOptions, SearchOutcome};
use crate::multigraph::{Builder, EdgeId, Multigraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(m: usize, edges: &[EdgeId]) -> Self {
        let mut b = vec![0u64; m.div_ceil(64).max(1)];
        for &e in edges {
            b[e / 64] |= 1 << (e % 64);
        }
        Bits(b)
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn disjoint(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == 0)
    }

    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    fn has(&self, e: EdgeId) -> bool {
        self.0[e / 64] >> (e % 64) & 1 == 1
    }
}

/// An FR-triple of `g`, optionally with `ν(e) = i` for `target = (e, i)`.
/// Members are taken from the perfect matchings of `g` in enumeration
/// order, repetitions allowed.
pub fn find_fr_triple(g: &Multigraph, target: Option<(EdgeId, usize)>, budget: Budget) -> Result<CubicSearch<FrTriple>> {
    require_bridgeless_cubic(g)?;
    if let Some((e, i)) = target {
        if e >= g.m() || i > 2 {
            return invalid(format!("target (edge {e}, ν = {i}) is out of range"));
        }
    }
    let mut meter = Meter::new(budget);
    let mut pms = Vec::new();
    for m in enumerate_perfect_matchings(g) {
        if !meter.tick() {
            return Ok(meter.finish(None));
        }
        pms.push(m.edges().to_vec());
    }
    let bits: Vec<Bits> = pms.iter().map(|m| Bits::of(g.m(), m)).collect();
    let count = |idx: [usize; 3], e: EdgeId| idx.iter().filter(|&&j| bits[j].has(e)).count();
    for a in 0..pms.len() {
        for b in a..pms.len() {
            let both = bits[a].and(&bits[b]);
            for c in b..pms.len() {
                if !meter.tick() {
                    return Ok(meter.finish(None));
                }
                if !both.disjoint(&bits[c]) {
                    continue;
                }
                if target.is_some_and(|(e, i)| count([a, b, c], e) != i) {
                    continue;
                }
                let t = FrTriple { matchings: [pms[a].clone(), pms[b].clone(), pms[c].clone()] };
                if let Err(why) = verify_fr_triple(g, &t) {
                    return Err(Error::Internal(format!("FR-triple search produced an invalid triple: {why}")));
                }
                return Ok(meter.finish(Some(t)));
            }
        }
    }
    Ok(meter.finish(None))
}

/// `H_1 = G[X] + uv` and `H_2 = (G − X) + xy` for `∂(X) = {ux, vy}`.
#[derive(Clone, Debug)]
pub struct FrSplit {
    pub x_side: Vec<VertexId>,
    /// `[ux, vy]` in `G`, with `u, v ∈ X`.
    pub cut: [EdgeId; 2],
    pub h1: Multigraph,
    /// `H_1` edge -> `G` edge; `None` for `uv`.
    pub h1_edges: Vec<Option<EdgeId>>,
    pub h1_new: EdgeId,
    pub h2: Multigraph,
    pub h2_edges: Vec<Option<EdgeId>>,
    pub h2_new: EdgeId,
}

fn side_graph(g: &Multigraph, drop: &[VertexId], a: VertexId, b: VertexId) -> (Multigraph, Vec<Option<EdgeId>>, EdgeId) {
    let mut bld = Builder::new();
    let h = bld.add_copy("G", g);
    for &v in drop {
        bld.remove_vertex(h.vertex(v));
    }
    let added = bld.add_edge(h.vertex(a), h.vertex(b), Vec::new());
    let f = bld.finish();
    let edges = f.provenance.edges.iter().map(|p| p.first().map(|p| p.item)).collect();
    (f.graph.clone(), edges, f.edge(added))
}

/// Splits `g` along a 2-edge-cut `∂(X)`.
pub fn fr_reduction_split(g: &Multigraph, x: &[VertexId]) -> Result<FrSplit> {
    if !g.is_regular(3) {
        return invalid("the graph is not cubic");
    }
    let mut x_side = x.to_vec();
    x_side.sort_unstable();
    x_side.dedup();
    if x_side.is_empty() || x_side.len() >= g.n() || x_side.iter().any(|&v| v >= g.n()) {
        return invalid("X must be a nonempty proper vertex subset");
    }
    let cut = g.boundary(&x_side);
    if cut.len() != 2 {
        return invalid(format!("∂(X) has {} edges, not 2", cut.len()));
    }
    let inside = g.membership(&x_side);
    let split_end = |e: EdgeId| {
        let (p, q) = g.endpoints(e);
        if inside[p] {
            (p, q)
        } else {
            (q, p)
        }
    };
    let ((u, xo), (v, yo)) = (split_end(cut[0]), split_end(cut[1]));
    if u == v || xo == yo {
        return precondition("the two cut edges share an endpoint, so uv or xy would be a loop");
    }
    let outside: Vec<VertexId> = (0..g.n()).filter(|&w| !inside[w]).collect();
    let (h1, h1_edges, h1_new) = side_graph(g, &outside, u, v);
    let (h2, h2_edges, h2_new) = side_graph(g, &x_side, xo, yo);
    require_bridgeless_cubic(&h1)?;
    require_bridgeless_cubic(&h2)?;
    Ok(FrSplit { x_side, cut: [cut[0], cut[1]], h1, h1_edges, h1_new, h2, h2_edges, h2_new })
}

/// Glues FR-triples of `H_1` and `H_2` with `ν(uv) = ν(xy)` into one of `g`.
pub fn recombine_fr(split: &FrSplit, g: &Multigraph, t1: &FrTriple, t2: &FrTriple) -> Result<FrTriple> {
    if let Err(why) = verify_fr_triple(&split.h1, t1) {
        return invalid(format!("not an FR-triple of H_1: {why}"));
    }
    if let Err(why) = verify_fr_triple(&split.h2, t2) {
        return invalid(format!("not an FR-triple of H_2: {why}"));
    }
    let order = |t: &FrTriple, e: EdgeId| {
        let mut idx = [0usize, 1, 2];
        idx.sort_by_key(|&i| !t.matchings[i].contains(&e));
        idx
    };
    let count = |t: &FrTriple, e: EdgeId| t.matchings.iter().filter(|m| m.contains(&e)).count();
    let (n1, n2) = (count(t1, split.h1_new), count(t2, split.h2_new));
    if n1 != n2 {
        return invalid(format!("ν(uv) = {n1} in H_1 but ν(xy) = {n2} in H_2"));
    }
    let (o1, o2) = (order(t1, split.h1_new), order(t2, split.h2_new));
    let members: Vec<Vec<EdgeId>> = (0..3)
        .map(|i| {
            let m1 = &t1.matchings[o1[i]];
            let m2 = &t2.matchings[o2[i]];
            let mut out: Vec<EdgeId> = m1.iter().filter_map(|&e| split.h1_edges[e]).collect();
            out.extend(m2.iter().filter_map(|&e| split.h2_edges[e]));
            if m1.contains(&split.h1_new) {
                out.extend(split.cut);
            }
            out.sort_unstable();
            out
        })
        .collect();
    let t = FrTriple { matchings: [members[0].clone(), members[1].clone(), members[2].clone()] };
    if let Err(why) = verify_fr_triple(g, &t) {
        return Err(Error::Internal(format!("recombined triple is invalid: {why}")));
    }
    Ok(t)
}

/// A 2-factor `F` given with the perfect matching `E(G) ∖ F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactor {
    pub edges: Vec<EdgeId>,
    pub complement: Vec<EdgeId>,
}

/// A 2-factor meeting every 3- and 4-edge-cut, containing `contain` and
/// avoiding `avoid`.
pub fn special_2factor_with(
    g: &Multigraph,
    contain: &[EdgeId],
    avoid: &[EdgeId],
    budget: Budget,
) -> Result<CubicSearch<TwoFactor>> {
    require_bridgeless_cubic(g)?;
    if contain.iter().chain(avoid).any(|&e| e >= g.m()) {
        return invalid("edge out of range");
    }
    let m = g.m();
    let cuts: Vec<Bits> = enumerate_edge_cuts_upto(g, 4)?
        .into_iter()
        .filter(|c| c.boundary >= 3)
        .map(|c| Bits::of(m, &g.boundary(&c.side)))
        .collect();
    let (contain_b, avoid_b) = (Bits::of(m, contain), Bits::of(m, avoid));
    let mut meter = Meter::new(budget);
    for pm in enumerate_perfect_matchings(g) {
        if !meter.tick() {
            return Ok(meter.finish(None));
        }
        let b = Bits::of(m, pm.edges());
        if !b.disjoint(&contain_b) || !avoid_b.subset_of(&b) || cuts.iter().any(|c| c.subset_of(&b)) {
            continue;
        }
        let complement = pm.edges().to_vec();
        let edges = (0..m).filter(|&e| !b.has(e)).collect();
        return Ok(meter.finish(Some(TwoFactor { edges, complement })));
    }
    Ok(meter.finish(None))
}

/// A 2-factor meeting every 3- and 4-edge-cut, extending the adjacent
/// pair when one is given.
pub fn find_special_2factor(g: &Multigraph, pair: Option<(EdgeId, EdgeId)>, budget: Budget) -> Result<CubicSearch<TwoFactor>> {
    let contain = match pair {
        None => Vec::new(),
        Some((a, b)) => {
            if a >= g.m() || b >= g.m() || a == b {
                return invalid("the pair must name two distinct edges");
            }
            let (p, q) = g.endpoints(a);
            let (r, s) = g.endpoints(b);
            if ![r, s].contains(&p) && ![r, s].contains(&q) {
                return invalid(format!("edges {a} and {b} are not adjacent"));
            }
            vec![a, b]
        }
    };
    special_2factor_with(g, &contain, &[], budget)
}

/// `G + E(F)`: the edges of `g` keep their ids, the copy of `F[j]` is
/// edge `m + j`.
#[derive(Clone, Debug)]
pub struct PlusFactor {
    pub graph: Multigraph,
    /// The 2-factor, ascending.
    pub factor: Vec<EdgeId>,
    /// Edge of `graph` -> edge of `g`.
    pub origin: Vec<EdgeId>,
}

pub fn plus_two_factor(g: &Multigraph, f: &[EdgeId]) -> Result<PlusFactor> {
    let mut factor = f.to_vec();
    factor.sort_unstable();
    factor.dedup();
    if factor.iter().any(|&e| e >= g.m()) {
        return invalid("2-factor names a missing edge");
    }
    let mut deg = vec![0; g.n()];
    for &e in &factor {
        let (a, b) = g.endpoints(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    if deg.iter().any(|&d| d != 2) {
        return invalid("the edge set is not a 2-factor");
    }
    let pairs = g.edges().map(|(_, a, b)| (a, b)).chain(factor.iter().map(|&e| g.endpoints(e)));
    let graph = Multigraph::new(g.n(), pairs)?;
    let origin = (0..g.m()).chain(factor.iter().copied()).collect();
    Ok(PlusFactor { graph, factor, origin })
}

#[derive(Clone, Debug)]
pub struct FrPipelineReport {
    pub two_factor: TwoFactor,
    pub h: PlusFactor,
    pub h_connectivity: usize,
    pub pdpm_nodes: u64,
    /// `None` means `H` has no 2-PDPM with the required constraints.
    pub outcome: CubicOutcome<FrTriple>,
}

/// An FR-triple with `ν(e) = i` obtained from a 2-PDPM of `H = G + E(F)`
/// and `N_3 = E(G) ∖ E(F)`.
pub fn fr_pipeline(g: &Multigraph, e: EdgeId, i: usize, opts: &SearchOptions) -> Result<FrPipelineReport> {
    require_bridgeless_cubic(g)?;
    if e >= g.m() || i > 2 {
        return invalid(format!("target (edge {e}, ν = {i}) is out of range"));
    }
    if !is_k_edge_connected(g, 3)?.holds() {
        return precondition("stage input: the graph is not 3-edge-connected");
    }
    let (contain, avoid) = if i == 0 { (vec![e], vec![]) } else { (vec![], vec![e]) };
    let search = special_2factor_with(g, &contain, &avoid, opts.budget)?;
    let two_factor = match search.outcome {
        CubicOutcome::Found(f) => f,
        CubicOutcome::None => {
            return Err(Error::Internal(format!(
                "stage 2-factor: no 2-factor meeting all 3- and 4-cuts with edge {e} {}",
                if i == 0 { "inside" } else { "outside" }
            )))
        }
        CubicOutcome::BudgetExhausted => return Err(Error::Resource("stage 2-factor: budget exhausted".into())),
    };
    let h = plus_two_factor(g, &two_factor.edges)?;
    let (h_connectivity, _) = edge_connectivity(&h.graph)?;
    if h_connectivity < 5 {
        return Err(Error::Internal(format!("stage H: G + E(F) is only {h_connectivity}-edge-connected")));
    }
    let copy_of_e = h.factor.iter().position(|&f| f == e).map(|j| g.m() + j);
    let constraints = match i {
        0 => Constraints::none().avoiding([e].into_iter().chain(copy_of_e)),
        1 => Constraints::none().avoiding([e]),
        _ => Constraints::none().containing([e]),
    };
    let report = find_pdpm(&h.graph, 2, &constraints, opts)?;
    let outcome = match report.outcome {
        SearchOutcome::Found(w) => {
            let project = |m: &[EdgeId]| {
                let mut out: Vec<EdgeId> = m.iter().map(|&x| h.origin[x]).collect();
                out.sort_unstable();
                out
            };
            let n3 = two_factor.complement.clone();
            let t = FrTriple { matchings: [project(w.matchings[0].edges()), project(w.matchings[1].edges()), n3] };
            if let Err(why) = verify_fr_triple(g, &t) {
                return Err(Error::Internal(format!("stage projection: {why}")));
            }
            let nu_e = t.matchings.iter().filter(|m| m.contains(&e)).count();
            if nu_e != i {
                return Err(Error::Internal(format!("stage projection: ν(e) = {nu_e}, wanted {i}")));
            }
            CubicOutcome::Found(t)
        }
        SearchOutcome::None => CubicOutcome::None,
        SearchOutcome::BudgetExhausted => CubicOutcome::BudgetExhausted,
    };
    Ok(FrPipelineReport { two_factor, h, h_connectivity, pdpm_nodes: report.nodes, outcome })
}

/// A BF-cover from a 6-PDPM of `2G`, where edge `j` and `m + j` of `2G`
/// are the two instances of edge `j` of `g`.
pub fn find_bf_cover(g: &Multigraph, opts: &SearchOptions) -> Result<CubicSearch<BfCover>> {
    require_bridgeless_cubic(g)?;
    let m = g.m();
    let pairs: Vec<(VertexId, VertexId)> = g.edges().map(|(_, a, b)| (a, b)).collect();
    let doubled = Multigraph::new(g.n(), pairs.iter().chain(&pairs).copied())?;
    let report = find_pdpm(&doubled, 6, &Constraints::none(), opts)?;
    let outcome = match report.outcome {
        SearchOutcome::Found(w) => {
            let matchings = w
                .matchings
                .iter()
                .map(|x| {
                    let mut out: Vec<EdgeId> = x.edges().iter().map(|&h| h % m).collect();
                    out.sort_unstable();
                    out
                })
                .collect();
            let c = BfCover { matchings };
            if let Err(why) = verify_bf_cover(g, &c) {
                return Err(Error::Internal(format!("projected 6-PDPM of 2G is not a BF-cover: {why}")));
            }
            CubicOutcome::Found(c)
        }
        SearchOutcome::None => CubicOutcome::None,
        SearchOutcome::BudgetExhausted => CubicOutcome::BudgetExhausted,
    };
    Ok(CubicSearch { outcome, nodes: report.nodes, elapsed: report.elapsed })
}

/// The five matchings of a 5-PDPM of `G + E(F)` read in `g`, plus
/// `E(G) ∖ E(F)`.
pub fn bf_from_pdpm(g: &Multigraph, h: &PlusFactor, witness: &PdpmWitness) -> Result<BfCover> {
    if let Err(why) = verify_pdpm(&h.graph, 5, &witness.constraints, &witness.matchings) {
        return invalid(format!("not a 5-PDPM of G + E(F): {why}"));
    }
    let mut matchings: Vec<Vec<EdgeId>> = witness
        .matchings
        .iter()
        .map(|x| {
            let mut out: Vec<EdgeId> = x.edges().iter().map(|&e| h.origin[e]).collect();
            out.sort_unstable();
            out
        })
        .collect();
    let in_f = crate::multigraph::Matching::new(h.factor.clone());
    matchings.push((0..g.m()).filter(|&e| !in_f.contains(e)).collect());
    let c = BfCover { matchings };
    if let Err(why) = verify_bf_cover(g, &c) {
        return Err(Error::Internal(format!("projected cover is invalid: {why}")));
    }
    Ok(c)
}
