//! Issuing and re-checking certificates.
//!
//! Re-checking reads nothing but the graph and the certificate: witnesses
//! are run through the core verifiers, property claims are recomputed, and
//! negative search results are searched again.

use std::time::Instant;

use pdpm_core::connectivity::{
    cyclic_edge_connectivity_at_least, enumerate_edge_cuts_upto, is_k_edge_connected, is_r_graph, min_odd_cut_gomory_hu,
    vertex_connectivity_at_least, GomoryHuTree, RGraphViolation,
};
use pdpm_core::cubic::{
    find_5cdc, find_bf_cover, find_fr_triple, find_special_2factor, fr_pipeline, verify_5cdc, verify_bf_cover,
    verify_fr_triple, BfCover, CubicOutcome, CycleDoubleCover5, FrTriple,
};
use pdpm_core::matching::{find_pdpm, verify_pdpm, Constraints, SearchOptions, SearchOutcome};
use pdpm_core::multigraph::document::document_digest;
use pdpm_core::{Matching, Multigraph, Result};

use crate::cert::{Certificate, Claim, Outcome};
use crate::input::{join_ids, join_slots, parse_ids, parse_slots};

fn base(g: &Multigraph, claim: Claim, opts: &SearchOptions) -> Certificate {
    let mut c = Certificate::new(claim, document_digest(g));
    c.seed = opts.seed;
    c
}

/// Evaluates a property claim (`regular`, connectivity, `r-graph`, ...).
pub fn property(g: &Multigraph, claim: Claim) -> Result<Certificate> {
    let start = Instant::now();
    let mut c = base(g, claim, &SearchOptions::default());
    let (holds, cross_ok) = match claim {
        Claim::Regular(r) => {
            if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != r) {
                c.witness.push(("vertex".into(), vec![v]));
            }
            let holds = c.witness.is_empty();
            (holds, holds == g.degrees().iter().all(|&d| d == r))
        }
        Claim::EdgeConnectivity(r) => {
            let check = is_k_edge_connected(g, r)?;
            if let Some(cut) = check.witness() {
                c.witness.push(("side".into(), cut.side.clone()));
            }
            // Gomory–Hu values as a second opinion.
            let tree_min = match g.n() {
                0 | 1 => 0,
                n => {
                    let tree = GomoryHuTree::build(g);
                    (1..n).map(|v| tree.min_cut_value(0, v)).min().unwrap_or(0)
                }
            };
            (check.holds(), check.holds() == (tree_min >= r as u64 || g.n() < 2))
        }
        Claim::RGraph(r) => {
            let check = is_r_graph(g, r)?;
            match check.witness() {
                Some(RGraphViolation::Degree { vertex, .. }) => c.witness.push(("vertex".into(), vec![*vertex])),
                Some(RGraphViolation::OddCut(cut)) => c.witness.push(("side".into(), cut.side.clone())),
                None => {}
            }
            let cross = !check.holds() || g.n() < 2 || min_odd_cut_gomory_hu(g)?.0 >= r;
            (check.holds(), cross)
        }
        Claim::ThreeConnected => {
            let check = vertex_connectivity_at_least(g, 3)?;
            if let Some(sep) = check.witness() {
                c.witness.push(("separator".into(), sep.clone()));
            }
            (check.holds(), true)
        }
        Claim::UnderlyingCubic => (g.is_underlying_cubic(), true),
        Claim::CyclicEdgeConnectivity(k) => {
            let check = cyclic_edge_connectivity_at_least(g, k)?;
            if let Some(cut) = check.witness() {
                c.witness.push(("side".into(), cut.side.clone()));
            }
            (check.holds(), true)
        }
        other => unreachable!("{other} is not a property claim"),
    };
    c.outcome = if holds { Outcome::Holds } else { Outcome::Refuted };
    c.verified = holds && cross_ok;
    c.wall_time = start.elapsed();
    Ok(c)
}

pub fn constraints_of(c: &Certificate) -> std::result::Result<Constraints, String> {
    let mut cons = Constraints::none();
    cons.contain = parse_ids(c.param("contain").unwrap_or(""))?;
    cons.avoid = parse_ids(c.param("avoid").unwrap_or(""))?;
    cons.slots = parse_slots(c.param("slots").unwrap_or(""))?;
    Ok(cons)
}

fn with_constraints(mut c: Certificate, cons: &Constraints) -> Certificate {
    if !cons.contain.is_empty() {
        c = c.with_param("contain", join_ids(&cons.contain));
    }
    if !cons.avoid.is_empty() {
        c = c.with_param("avoid", join_ids(&cons.avoid));
    }
    if !cons.slots.is_empty() {
        c = c.with_param("slots", join_slots(&cons.slots));
    }
    c
}

/// Runs the k-PDPM search and states the result as a certificate.
pub fn pdpm(g: &Multigraph, k: usize, cons: &Constraints, opts: &SearchOptions) -> Result<Certificate> {
    let report = find_pdpm(g, k, cons, opts)?;
    let claim = if report.outcome == SearchOutcome::None { Claim::NoPdpm(k) } else { Claim::Pdpm(k) };
    let mut c = with_constraints(base(g, claim, opts).with_param("k", k), cons);
    c.nodes = report.nodes;
    c.wall_time = report.elapsed;
    match report.outcome {
        SearchOutcome::Found(w) => {
            c.verified = verify_pdpm(g, k, cons, &w.matchings).is_ok();
            c.witness = w.matchings.iter().map(|m| ("matching".to_string(), m.edges().to_vec())).collect();
        }
        SearchOutcome::None => {
            c = c.with_param("proof", "exhaustive-search");
            c.verified = true;
        }
        SearchOutcome::BudgetExhausted => c.outcome = Outcome::Exhausted,
    }
    Ok(c)
}

/// The cubic operations exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicOp {
    Fr,
    Bf,
    Cdc5,
    TwoFactor,
    FrPipeline,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CubicParams {
    pub edge: Option<usize>,
    pub nu: Option<usize>,
    pub pair: Option<(usize, usize)>,
}

impl CubicParams {
    fn of(c: &Certificate) -> std::result::Result<Self, String> {
        let num = |k: &str| c.param(k).map(|v| v.parse::<usize>().map_err(|_| format!("param {k} is not a number"))).transpose();
        let pair = match c.param("pair") {
            None => None,
            Some(v) => match parse_ids(v)?.as_slice() {
                [a, b] => Some((*a, *b)),
                _ => return Err("param pair needs two ids".into()),
            },
        };
        Ok(CubicParams { edge: num("edge")?, nu: num("nu")?, pair })
    }
}

fn fill<T>(c: &mut Certificate, outcome: CubicOutcome<T>, witness: impl FnOnce(&T) -> (bool, Vec<(String, Vec<usize>)>)) {
    match outcome {
        CubicOutcome::Found(t) => {
            let (ok, w) = witness(&t);
            c.verified = ok;
            c.witness = w;
        }
        CubicOutcome::None => c.outcome = Outcome::Refuted,
        CubicOutcome::BudgetExhausted => c.outcome = Outcome::Exhausted,
    }
}

fn tagged(kind: &str, sets: &[Vec<usize>]) -> Vec<(String, Vec<usize>)> {
    sets.iter().map(|s| (kind.to_string(), s.clone())).collect()
}

fn nu_ok(t: &FrTriple, p: &CubicParams) -> bool {
    match (p.edge, p.nu) {
        (Some(e), Some(i)) => t.matchings.iter().filter(|m| m.contains(&e)).count() == i,
        _ => true,
    }
}

pub fn cubic(g: &Multigraph, op: CubicOp, p: CubicParams, opts: &SearchOptions) -> Result<Certificate> {
    let claim = match op {
        CubicOp::Fr | CubicOp::FrPipeline => Claim::FrTriple,
        CubicOp::Bf => Claim::BfCover,
        CubicOp::Cdc5 => Claim::Cdc5,
        CubicOp::TwoFactor => Claim::Special2Factor,
    };
    let mut c = base(g, claim, opts);
    if let Some(e) = p.edge {
        c = c.with_param("edge", e);
    }
    if let Some(i) = p.nu {
        c = c.with_param("nu", i);
    }
    if let Some((a, b)) = p.pair {
        c = c.with_param("pair", format!("{a},{b}"));
    }
    match op {
        CubicOp::Fr => {
            let s = find_fr_triple(g, p.edge.zip(p.nu), opts.budget)?;
            (c.nodes, c.wall_time) = (s.nodes, s.elapsed);
            fill(&mut c, s.outcome, |t| (verify_fr_triple(g, t).is_ok() && nu_ok(t, &p), tagged("matching", &t.matchings)));
        }
        CubicOp::FrPipeline => {
            let (Some(e), Some(i)) = (p.edge, p.nu) else {
                return Err(pdpm_core::Error::InvalidInput("fr-pipeline needs --edge and --nu".into()));
            };
            let start = Instant::now();
            let r = fr_pipeline(g, e, i, opts)?;
            c = c.with_param("route", "pipeline").with_param("h-edge-connectivity", r.h_connectivity);
            (c.nodes, c.wall_time) = (r.pdpm_nodes, start.elapsed());
            fill(&mut c, r.outcome, |t| (verify_fr_triple(g, t).is_ok() && nu_ok(t, &p), tagged("matching", &t.matchings)));
        }
        CubicOp::Bf => {
            let s = find_bf_cover(g, opts)?;
            (c.nodes, c.wall_time) = (s.nodes, s.elapsed);
            fill(&mut c, s.outcome, |t| (verify_bf_cover(g, t).is_ok(), tagged("matching", &t.matchings)));
        }
        CubicOp::Cdc5 => {
            let s = find_5cdc(g, opts.budget)?;
            (c.nodes, c.wall_time) = (s.nodes, s.elapsed);
            fill(&mut c, s.outcome, |t| (verify_5cdc(g, t).is_ok(), tagged("cycle", &t.cycles)));
        }
        CubicOp::TwoFactor => {
            let s = find_special_2factor(g, p.pair, opts.budget)?;
            (c.nodes, c.wall_time) = (s.nodes, s.elapsed);
            fill(&mut c, s.outcome, |f| (special_factor_ok(g, &f.edges, p.pair).is_ok(), vec![("factor".into(), f.edges.clone())]));
        }
    }
    Ok(c)
}

fn special_factor_ok(g: &Multigraph, f: &[usize], pair: Option<(usize, usize)>) -> std::result::Result<(), String> {
    let mut deg = vec![0; g.n()];
    let mut inside = vec![false; g.m()];
    for &e in f {
        if e >= g.m() || inside[e] {
            return Err(format!("factor lists edge {e} twice or out of range"));
        }
        inside[e] = true;
        let (a, b) = g.endpoints(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    if let Some(v) = deg.iter().position(|&d| d != 2) {
        return Err(format!("vertex {v} has degree {} in the factor", deg[v]));
    }
    for cut in enumerate_edge_cuts_upto(g, 4).map_err(|e| e.to_string())? {
        if cut.boundary >= 3 && g.boundary(&cut.side).iter().all(|&e| !inside[e]) {
            return Err(format!("the {}-cut around {:?} misses the factor", cut.boundary, cut.side));
        }
    }
    if let Some((a, b)) = pair {
        if !(a < g.m() && b < g.m() && inside[a] && inside[b]) {
            return Err("the requested pair is not in the factor".into());
        }
    }
    Ok(())
}

/// Verdict of re-checking one certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recheck {
    Confirmed,
    Mismatch(String),
    Exhausted,
}

fn verdict(ok: std::result::Result<(), String>) -> Recheck {
    match ok {
        Ok(()) => Recheck::Confirmed,
        Err(why) => Recheck::Mismatch(why),
    }
}

fn expect_outcome(c: &Certificate, fresh: &Certificate) -> Recheck {
    match (c.outcome, fresh.outcome) {
        (_, Outcome::Exhausted) => Recheck::Exhausted,
        (a, b) if a == b => Recheck::Confirmed,
        (a, b) => Recheck::Mismatch(format!("certificate says {a:?}, recomputation says {b:?}")),
    }
}

/// Re-checks `c` against `g` from the graph and the payload alone.
pub fn recheck(g: &Multigraph, c: &Certificate, opts: &SearchOptions) -> std::result::Result<Recheck, String> {
    if c.graph_digest != document_digest(g) {
        return Ok(Recheck::Mismatch("graph digest differs".into()));
    }
    if c.outcome == Outcome::Exhausted {
        return Ok(Recheck::Exhausted);
    }
    let sets = |kind: &str| c.witnesses(kind).map(<[usize]>::to_vec).collect::<Vec<_>>();
    let core = |e: pdpm_core::Error| e.to_string();
    Ok(match c.claim {
        Claim::Regular(_)
        | Claim::EdgeConnectivity(_)
        | Claim::RGraph(_)
        | Claim::ThreeConnected
        | Claim::UnderlyingCubic
        | Claim::CyclicEdgeConnectivity(_) => expect_outcome(c, &property(g, c.claim).map_err(core)?),
        Claim::Pdpm(k) => {
            let cons = constraints_of(c)?;
            let ms: Vec<Matching> = sets("matching").into_iter().map(Matching::new).collect();
            verdict(verify_pdpm(g, k, &cons, &ms))
        }
        Claim::NoPdpm(k) => {
            let cons = constraints_of(c)?;
            let fresh = pdpm(g, k, &cons, opts).map_err(core)?;
            match fresh.claim {
                Claim::NoPdpm(_) => Recheck::Confirmed,
                _ if fresh.outcome == Outcome::Exhausted => Recheck::Exhausted,
                _ => Recheck::Mismatch(format!("a {k}-PDPM exists")),
            }
        }
        Claim::FrTriple | Claim::BfCover | Claim::Cdc5 | Claim::Special2Factor if c.outcome == Outcome::Refuted => {
            let p = CubicParams::of(c)?;
            let op = match c.claim {
                Claim::FrTriple => CubicOp::Fr,
                Claim::BfCover => CubicOp::Bf,
                Claim::Cdc5 => CubicOp::Cdc5,
                _ => CubicOp::TwoFactor,
            };
            expect_outcome(c, &cubic(g, op, p, opts).map_err(core)?)
        }
        Claim::FrTriple => {
            let p = CubicParams::of(c)?;
            match <[Vec<usize>; 3]>::try_from(sets("matching")) {
                Err(v) => Recheck::Mismatch(format!("{} matchings instead of 3", v.len())),
                Ok(matchings) => {
                    let t = FrTriple { matchings };
                    match verify_fr_triple(g, &t) {
                        Err(why) => Recheck::Mismatch(why),
                        Ok(()) if !nu_ok(&t, &p) => Recheck::Mismatch("ν(edge) differs from the stated nu".into()),
                        Ok(()) => Recheck::Confirmed,
                    }
                }
            }
        }
        Claim::BfCover => verdict(verify_bf_cover(g, &BfCover { matchings: sets("matching") })),
        Claim::Cdc5 => verdict(verify_5cdc(g, &CycleDoubleCover5 { cycles: sets("cycle") })),
        Claim::Special2Factor => {
            let p = CubicParams::of(c)?;
            match sets("factor").as_slice() {
                [f] => verdict(special_factor_ok(g, f, p.pair)),
                other => Recheck::Mismatch(format!("{} factor lines instead of 1", other.len())),
            }
        }
    })
}
