//! 5-cycle double covers as edge labellings.
//!
//! Cycle `c` is the set of edges whose label contains colour `c`; every edge
//! gets a 2-subset of five colours. Cycle `c` is even at `v` exactly when the
//! three labels at `v` use every colour 0 or 2 times, which for 2-subsets
//! means they form a triangle `{a,b}, {b,c}, {a,c}`. So two labels at a vertex
//! must share exactly one colour and force the third.

use std::collections::VecDeque;

use super::{require_bridgeless_cubic, verify_5cdc, CubicSearch, CycleDoubleCover5, Meter};
use crate::error::{Error, Result};
use crate::matching::Budget;
use crate::multigraph::{EdgeId, Multigraph};

type Label = u8;

fn pair(a: usize, b: usize) -> Label {
    (1 << a) | (1 << b)
}

/// Edges in BFS order from vertex 0, so vertices close early.
fn edge_order(g: &Multigraph) -> Vec<EdgeId> {
    let mut seen_v = vec![false; g.n()];
    let mut seen_e = vec![false; g.m()];
    let mut order = Vec::with_capacity(g.m());
    let mut queue = VecDeque::from([0]);
    seen_v[0] = true;
    while let Some(v) = queue.pop_front() {
        for &e in g.incident(v) {
            if !seen_e[e] {
                seen_e[e] = true;
                order.push(e);
            }
            let w = g.other(e, v);
            if !seen_v[w] {
                seen_v[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

struct Search<'g> {
    g: &'g Multigraph,
    order: Vec<EdgeId>,
    label: Vec<Label>,
    meter: Meter,
}

impl Search<'_> {
    /// The label forced at `v` by its two other labelled edges, `Some(0)` if
    /// they clash, `None` if fewer than two are labelled.
    fn forced_at(&self, v: usize, e: EdgeId) -> Option<Label> {
        let others: Vec<Label> = self.g.incident(v).iter().filter(|&&f| f != e).map(|&f| self.label[f]).collect();
        if others.contains(&0) {
            return None;
        }
        let (a, b) = (others[0], others[1]);
        if (a & b).count_ones() != 1 {
            return Some(0);
        }
        Some(a ^ b)
    }

    fn fits(&self, v: usize, e: EdgeId, l: Label) -> bool {
        self.g
            .incident(v)
            .iter()
            .filter(|&&f| f != e && self.label[f] != 0)
            .all(|&f| (self.label[f] & l).count_ones() == 1)
    }

    fn dfs(&mut self, depth: usize, used: usize) -> Option<bool> {
        if !self.meter.tick() {
            return None;
        }
        if depth == self.order.len() {
            return Some(true);
        }
        let e = self.order[depth];
        let (a, b) = self.g.endpoints(e);
        let mut candidates = Vec::new();
        match (self.forced_at(a, e), self.forced_at(b, e)) {
            (Some(0), _) | (_, Some(0)) => return Some(false),
            (Some(x), Some(y)) if x != y => return Some(false),
            (Some(x), _) | (_, Some(x)) => candidates.push(x),
            (None, None) => {
                // Colours 0..used are in play; a new colour must be `used`,
                // and a label of two new colours must be `{used, used + 1}`.
                for hi in 1..5 {
                    for lo in 0..hi {
                        let ok = if lo < used { hi <= used } else { lo == used && hi == used + 1 };
                        if ok {
                            candidates.push(pair(lo, hi));
                        }
                    }
                }
            }
        }
        for l in candidates {
            if !self.fits(a, e, l) || !self.fits(b, e, l) {
                continue;
            }
            let top = 8 - l.leading_zeros() as usize;
            self.label[e] = l;
            match self.dfs(depth + 1, used.max(top)) {
                Some(false) => self.label[e] = 0,
                other => return other,
            }
        }
        Some(false)
    }
}

/// Five even subgraphs covering every edge twice. Members may be empty.
pub fn find_5cdc(g: &Multigraph, budget: Budget) -> Result<CubicSearch<CycleDoubleCover5>> {
    require_bridgeless_cubic(g)?;
    let mut s = Search { g, order: edge_order(g), label: vec![0; g.m()], meter: Meter::new(budget) };
    let found = match s.dfs(0, 0) {
        Some(true) => {
            let cycles = (0..5).map(|c| (0..g.m()).filter(|&e| s.label[e] >> c & 1 == 1).collect()).collect();
            let cdc = CycleDoubleCover5 { cycles };
            if let Err(why) = verify_5cdc(g, &cdc) {
                return Err(Error::Internal(format!("labelling search produced an invalid cover: {why}")));
            }
            Some(cdc)
        }
        _ => None,
    };
    Ok(s.meter.finish(found))
}
