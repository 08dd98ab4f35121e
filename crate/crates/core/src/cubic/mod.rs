//! Cubic-graph covers (FR-triples, BF-covers, 5-cycle double covers), the
//! 2-factors they are built from, and the blow-ups that turn 5-graph PDPMs
//! into such covers.
//!
//! Every witness is checked by the verifiers in this module, which recount
//! `ν(e)` from the raw edge lists and do not call into the matching engine.

mod blowup;
mod cdc;
mod fr;

use std::time::{Duration, Instant};

use crate::connectivity::is_k_edge_connected;
use crate::error::{invalid, precondition, Result};
use crate::matching::Budget;
use crate::multigraph::{EdgeId, Multigraph};

pub use blowup::{cdc_from_pdpm, k_cut_hits, k_gadget, k_gadget_blowup, restrict_pdpm_wheel, wheel_blowup, K_GADGET_W};
pub use cdc::find_5cdc;
pub use fr::{
    bf_from_pdpm, find_bf_cover, find_fr_triple, find_special_2factor, fr_pipeline, fr_reduction_split,
    plus_two_factor, recombine_fr, special_2factor_with, FrPipelineReport, FrSplit, PlusFactor, TwoFactor,
};

/// Result of a budgeted cubic search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubicOutcome<T> {
    Found(T),
    /// The search space was exhausted without a witness.
    None,
    BudgetExhausted,
}

impl<T> CubicOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            CubicOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_found(self) -> Option<T> {
        match self {
            CubicOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CubicSearch<T> {
    pub outcome: CubicOutcome<T>,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Node and wall-clock accounting for the sequential cubic searches.
pub(crate) struct Meter {
    nodes: u64,
    limit: Option<u64>,
    deadline: Option<Instant>,
    start: Instant,
    pub exhausted: bool,
}

impl Meter {
    pub fn new(budget: Budget) -> Self {
        let start = Instant::now();
        Meter { nodes: 0, limit: budget.nodes, deadline: budget.time.map(|d| start + d), start, exhausted: false }
    }

    /// Counts one node; false once the budget is spent.
    pub fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.limit.is_some_and(|l| self.nodes > l)
            || (self.nodes % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d))
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub fn finish<T>(self, found: Option<T>) -> CubicSearch<T> {
        let outcome = match found {
            Some(t) => CubicOutcome::Found(t),
            None if self.exhausted => CubicOutcome::BudgetExhausted,
            None => CubicOutcome::None,
        };
        CubicSearch { outcome, nodes: self.nodes, elapsed: self.start.elapsed() }
    }
}

/// Three perfect matchings (edge-id lists) with `ν(e) ≤ 2` everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrTriple {
    pub matchings: [Vec<EdgeId>; 3],
}

/// Six perfect matchings with `ν(e) = 2` everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfCover {
    pub matchings: Vec<Vec<EdgeId>>,
}

/// Five even edge sets (possibly empty) with `ν(e) = 2` everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDoubleCover5 {
    pub cycles: Vec<Vec<EdgeId>>,
}

/// `ν_F(e)` for every edge, counting each member once per occurrence.
pub fn nu(m: usize, family: &[Vec<EdgeId>]) -> std::result::Result<Vec<usize>, String> {
    let mut out = vec![0; m];
    for (i, f) in family.iter().enumerate() {
        let mut seen = vec![false; m];
        for &e in f {
            if e >= m {
                return Err(format!("member {i} names edge {e} but m = {m}"));
            }
            if seen[e] {
                return Err(format!("member {i} lists edge {e} twice"));
            }
            seen[e] = true;
            out[e] += 1;
        }
    }
    Ok(out)
}

fn degrees_in(g: &Multigraph, edges: &[EdgeId]) -> Vec<usize> {
    let mut d = vec![0; g.n()];
    for &e in edges {
        let (a, b) = g.endpoints(e);
        d[a] += 1;
        d[b] += 1;
    }
    d
}

fn check_perfect(g: &Multigraph, i: usize, m: &[EdgeId]) -> std::result::Result<(), String> {
    if let Some(v) = degrees_in(g, m).iter().position(|&d| d != 1) {
        return Err(format!("member {i} is not a perfect matching (vertex {v})"));
    }
    Ok(())
}

pub fn verify_fr_triple(g: &Multigraph, t: &FrTriple) -> std::result::Result<(), String> {
    let nus = nu(g.m(), &t.matchings)?;
    for (i, m) in t.matchings.iter().enumerate() {
        check_perfect(g, i, m)?;
    }
    match nus.iter().position(|&x| x > 2) {
        Some(e) => Err(format!("edge {e} lies in all three matchings")),
        None => Ok(()),
    }
}

pub fn verify_bf_cover(g: &Multigraph, c: &BfCover) -> std::result::Result<(), String> {
    if c.matchings.len() != 6 {
        return Err(format!("{} matchings instead of 6", c.matchings.len()));
    }
    let nus = nu(g.m(), &c.matchings)?;
    for (i, m) in c.matchings.iter().enumerate() {
        check_perfect(g, i, m)?;
    }
    match nus.iter().position(|&x| x != 2) {
        Some(e) => Err(format!("edge {e} is covered {} times", nus[e])),
        None => Ok(()),
    }
}

pub fn verify_5cdc(g: &Multigraph, c: &CycleDoubleCover5) -> std::result::Result<(), String> {
    if c.cycles.len() != 5 {
        return Err(format!("{} cycles instead of 5", c.cycles.len()));
    }
    let nus = nu(g.m(), &c.cycles)?;
    for (i, cyc) in c.cycles.iter().enumerate() {
        if let Some(v) = degrees_in(g, cyc).iter().position(|d| d % 2 == 1) {
            return Err(format!("cycle {i} has odd degree at vertex {v}"));
        }
    }
    match nus.iter().position(|&x| x != 2) {
        Some(e) => Err(format!("edge {e} is covered {} times", nus[e])),
        None => Ok(()),
    }
}

/// Fails unless `g` is cubic and bridgeless (2-edge-connected).
pub fn require_bridgeless_cubic(g: &Multigraph) -> Result<()> {
    if g.n() == 0 || !g.is_regular(3) {
        return invalid("the graph is not cubic");
    }
    if !is_k_edge_connected(g, 2)?.holds() {
        return precondition("the graph has a bridge or is disconnected");
    }
    Ok(())
}
