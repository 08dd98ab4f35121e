//! Backtracking search for k pairwise disjoint perfect matchings.
//!
//! Edge instances are assigned to slots `0..k`; slot `s` must end up a
//! perfect matching. Each node picks one branching step:
//!
//! 1. while some slot is still empty, a vertex `v0` of least free degree has
//!    its edges for all empty slots chosen at once, as a subset placed in
//!    rank order (empty slots are interchangeable);
//! 2. otherwise an unassigned `contain` edge with the fewest feasible slots;
//! 3. otherwise the (slot, vertex) pair with the fewest candidate edges.
//!
//! Pruning uses remaining-degree counts per vertex and slot, and parity on a
//! family of small odd cuts: every slot needs an odd number of edges on each.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{oddsets, Constraints};
use crate::error::{invalid, Result};
use crate::multigraph::{EdgeId, Multigraph};
use crate::par::{self, Workers};

const FREE: u8 = u8::MAX;
const BANNED: u8 = u8::MAX - 1;
/// Frontier size for parallel runs; fixed so results do not depend on the
/// worker count.
const FRONTIER: usize = 256;

/// Work limit for one search. `None` fields are unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { nodes: None, time: None };

    pub fn nodes(n: u64) -> Self {
        Budget { nodes: Some(n), time: None }
    }

    pub fn time(d: Duration) -> Self {
        Budget { nodes: None, time: Some(d) }
    }
}

pub(crate) enum Raw {
    Found(Vec<Vec<EdgeId>>),
    None,
    Exhausted,
}

pub(crate) struct RawReport {
    pub outcome: Raw,
    pub nodes: u64,
    pub elapsed: Duration,
}

struct Control {
    nodes: AtomicU64,
    limit: u64,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
    found_min: AtomicUsize,
}

impl Control {
    fn new(budget: Budget) -> Self {
        Control {
            nodes: AtomicU64::new(0),
            limit: budget.nodes.unwrap_or(u64::MAX),
            deadline: budget.time.map(|d| Instant::now() + d),
            exhausted: AtomicBool::new(false),
            found_min: AtomicUsize::new(usize::MAX),
        }
    }

    /// Counts a node; `false` means stop (budget gone or an earlier subtree
    /// already holds a witness).
    fn tick(&self, index: usize) -> bool {
        if self.exhausted.load(Ordering::Relaxed) || self.found_min.load(Ordering::Relaxed) < index {
            return false;
        }
        let c = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if c > self.limit || (c & 1023 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d)) {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

#[derive(Clone)]
struct State {
    unc: Vec<u64>,
    slot: Vec<u8>,
    parity: Vec<u64>,
    free: Vec<u32>,
    used: u64,
}

type Step = Vec<(EdgeId, u8)>;

enum Branching {
    Complete,
    Dead,
    Children(Vec<Step>),
}

enum Dfs {
    Found(Vec<u8>),
    None,
    Stopped,
}

struct Problem<'g> {
    g: &'g Multigraph,
    k: usize,
    full: u64,
    /// Non-banned incident edges per vertex, in rank order.
    inc: Vec<Vec<EdgeId>>,
    cuts: Vec<Vec<EdgeId>>,
    cuts_of: Vec<Vec<u32>>,
    contain: Vec<EdgeId>,
    must_use_all: bool,
}

pub(crate) fn run(
    g: &Multigraph,
    k: usize,
    c: &Constraints,
    budget: Budget,
    seed: u64,
    workers: Workers,
) -> Result<RawReport> {
    let start = Instant::now();
    let report = |outcome, nodes| RawReport { outcome, nodes, elapsed: start.elapsed() };
    if k == 0 || k > 64 {
        return invalid(format!("k must lie in 1..=64, got {k}"));
    }
    let n = g.n();
    if n % 2 == 1 {
        return Ok(report(Raw::None, 0));
    }
    let m = g.m();
    let mut slot = vec![FREE; m];
    for &e in &c.avoid {
        slot[e] = BANNED;
    }
    let mut rank: Vec<u32> = (0..m as u32).collect();
    if seed != 0 {
        rank.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut inc: Vec<Vec<EdgeId>> =
        (0..n).map(|v| g.incident(v).iter().copied().filter(|&e| slot[e] != BANNED).collect()).collect();
    for list in &mut inc {
        list.sort_by_key(|&e| rank[e]);
    }
    let usable = slot.iter().filter(|&&s| s != BANNED).count();
    let must_use_all = usable * 2 == k * n;
    let cuts = oddsets::small_odd_cuts(g, k + 2);
    let mut cuts_of = vec![Vec::new(); m];
    for (i, cut) in cuts.iter().enumerate() {
        for &e in cut {
            cuts_of[e].push(i as u32);
        }
    }
    let pinned: Vec<EdgeId> = c.slots.iter().map(|&(e, _)| e).collect();
    let contain: Vec<EdgeId> = c.contain.iter().copied().filter(|e| !pinned.contains(e)).collect();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let problem = Problem { g, k, full, inc, cuts, cuts_of, contain, must_use_all };
    let mut root = State {
        unc: vec![full; n],
        parity: vec![0; problem.cuts.len()],
        free: problem.cuts.iter().map(|cut| cut.iter().filter(|&&e| slot[e] != BANNED).count() as u32).collect(),
        slot,
        used: 0,
    };
    let ctl = Control::new(budget);
    let mut feasible = problem.cuts_feasible(&root, 0..problem.cuts.len());
    for &(e, s) in &c.slots {
        let (u, v) = g.endpoints(e);
        let bit = 1u64 << s;
        if root.unc[u] & bit == 0 || root.unc[v] & bit == 0 {
            return invalid(format!("pinned edge {e} meets another edge pinned to slot {s}"));
        }
        feasible &= problem.assign(&mut root, e, s as u8);
    }
    if !feasible {
        return Ok(report(Raw::None, 0));
    }

    let finish = |res: Dfs, ctl: &Control| {
        let nodes = ctl.nodes.load(Ordering::Relaxed);
        match res {
            Dfs::Found(slots) => report(Raw::Found(problem.collect(&slots)), nodes),
            _ if ctl.exhausted.load(Ordering::Relaxed) => report(Raw::Exhausted, nodes),
            _ => report(Raw::None, nodes),
        }
    };

    if workers.is_sequential() {
        let mut st = root;
        let res = problem.dfs(&mut st, &ctl, 0);
        return Ok(finish(res, &ctl));
    }

    // Breadth-first expansion into an ordered frontier of prefixes, then the
    // prefixes are searched in parallel and the first witness in order wins.
    let mut frontier: Vec<Step> = vec![Vec::new()];
    for _round in 0..64 {
        if frontier.len() >= FRONTIER {
            break;
        }
        let mut next = Vec::new();
        let mut grew = false;
        for prefix in frontier {
            let mut st = root.clone();
            if !problem.apply(&mut st, &prefix) {
                continue;
            }
            if !ctl.tick(0) {
                return Ok(finish(Dfs::Stopped, &ctl));
            }
            match problem.branches(&st) {
                Branching::Complete => next.push(prefix),
                Branching::Dead => grew = true,
                Branching::Children(children) => {
                    grew = true;
                    for child in children {
                        let mut p = prefix.clone();
                        p.extend(child);
                        next.push(p);
                    }
                }
            }
        }
        frontier = next;
        if !grew || frontier.is_empty() {
            break;
        }
    }
    let hit = par::find_map_first(workers, &frontier.iter().enumerate().collect::<Vec<_>>(), |&(i, prefix)| {
        let mut st = root.clone();
        if !problem.apply(&mut st, prefix) {
            return None;
        }
        match problem.dfs(&mut st, &ctl, i) {
            Dfs::Found(s) => {
                ctl.found_min.fetch_min(i, Ordering::Relaxed);
                Some(s)
            }
            _ => None,
        }
    });
    Ok(finish(hit.map_or(Dfs::None, Dfs::Found), &ctl))
}

impl Problem<'_> {
    fn collect(&self, slots: &[u8]) -> Vec<Vec<EdgeId>> {
        let mut out = vec![Vec::new(); self.k];
        for (e, &s) in slots.iter().enumerate() {
            if (s as usize) < self.k {
                out[s as usize].push(e);
            }
        }
        out
    }

    /// Assigns `e` to slot `s` and reports whether the touched cuts stay feasible.
    fn assign(&self, st: &mut State, e: EdgeId, s: u8) -> bool {
        let (u, v) = self.g.endpoints(e);
        let bit = 1u64 << s;
        debug_assert!(st.slot[e] == FREE && st.unc[u] & bit != 0 && st.unc[v] & bit != 0);
        st.slot[e] = s;
        st.unc[u] &= !bit;
        st.unc[v] &= !bit;
        st.used |= bit;
        for &c in &self.cuts_of[e] {
            st.parity[c as usize] ^= bit;
            st.free[c as usize] -= 1;
        }
        self.cuts_feasible(st, self.cuts_of[e].iter().map(|&c| c as usize))
    }

    fn unassign(&self, st: &mut State, e: EdgeId, used_before: u64) {
        let s = st.slot[e];
        let (u, v) = self.g.endpoints(e);
        let bit = 1u64 << s;
        st.slot[e] = FREE;
        st.unc[u] |= bit;
        st.unc[v] |= bit;
        st.used = used_before;
        for &c in &self.cuts_of[e] {
            st.parity[c as usize] ^= bit;
            st.free[c as usize] += 1;
        }
    }

    fn apply(&self, st: &mut State, step: &[(EdgeId, u8)]) -> bool {
        let mut ok = true;
        for &(e, s) in step {
            ok &= self.assign(st, e, s);
        }
        ok
    }

    fn cuts_feasible(&self, st: &State, cuts: impl Iterator<Item = usize>) -> bool {
        for c in cuts {
            let even = self.full & !st.parity[c];
            let need = even.count_ones();
            let free = st.free[c];
            if need > free || (self.must_use_all && (free - need) % 2 == 1) {
                return false;
            }
            if need > 0 {
                let mut avail = 0u64;
                for &e in &self.cuts[c] {
                    if st.slot[e] == FREE {
                        let (u, v) = self.g.endpoints(e);
                        avail |= st.unc[u] & st.unc[v];
                    }
                }
                if even & !avail != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn branches(&self, st: &State) -> Branching {
        let n = self.g.n();
        if st.unc.iter().all(|&u| u == 0) {
            return if self.contain.iter().all(|&e| st.slot[e] != FREE) { Branching::Complete } else { Branching::Dead };
        }
        let g = self.g;

        let empty = self.full & !st.used;
        if empty != 0 {
            let need = empty.count_ones() as usize;
            let free_at = |v: usize| self.inc[v].iter().copied().filter(|&e| st.slot[e] == FREE).collect::<Vec<_>>();
            let v0 = (0..n)
                .filter(|&v| st.unc[v] & empty == empty)
                .min_by_key(|&v| self.inc[v].iter().filter(|&&e| st.slot[e] == FREE).count());
            let Some(v0) = v0 else { return Branching::Dead };
            let edges = free_at(v0);
            if edges.len() < need {
                return Branching::Dead;
            }
            let slots: Vec<u8> = (0..self.k as u8).filter(|&s| empty >> s & 1 == 1).collect();
            let mut children = Vec::new();
            let mut pick = Vec::with_capacity(need);
            combinations(&edges, need, 0, &mut pick, &mut |subset| {
                children.push(subset.iter().zip(&slots).map(|(&e, &s)| (e, s)).collect());
            });
            return Branching::Children(children);
        }

        let mut best_contain: Option<(u32, EdgeId, u64)> = None;
        for &e in &self.contain {
            if st.slot[e] != FREE {
                continue;
            }
            let (u, v) = g.endpoints(e);
            let opts = st.unc[u] & st.unc[v];
            if opts == 0 {
                return Branching::Dead;
            }
            let c = opts.count_ones();
            if best_contain.is_none_or(|(b, _, _)| c < b) {
                best_contain = Some((c, e, opts));
            }
        }
        if let Some((_, e, opts)) = best_contain {
            let children = (0..self.k as u8).filter(|&s| opts >> s & 1 == 1).map(|s| vec![(e, s)]).collect();
            return Branching::Children(children);
        }

        if self.must_use_all {
            for (e, u, v) in g.edges() {
                if st.slot[e] == FREE && st.unc[u] & st.unc[v] == 0 {
                    return Branching::Dead;
                }
            }
        }

        let mut best: Option<(u32, usize, u8)> = None;
        let mut count = [0u32; 64];
        for v in 0..n {
            let need = st.unc[v];
            if need == 0 {
                continue;
            }
            let mut usable = 0u32;
            for s in bits(need) {
                count[s] = 0;
            }
            for &e in &self.inc[v] {
                if st.slot[e] != FREE {
                    continue;
                }
                let common = need & st.unc[g.other(e, v)];
                if common != 0 {
                    usable += 1;
                    for s in bits(common) {
                        count[s] += 1;
                    }
                }
            }
            if usable < need.count_ones() {
                return Branching::Dead;
            }
            for s in bits(need) {
                let c = count[s];
                if c == 0 {
                    return Branching::Dead;
                }
                if best.is_none_or(|(b, _, _)| c < b) {
                    best = Some((c, v, s as u8));
                }
            }
        }
        let (_, v, s) = best.expect("some vertex still needs a slot");
        let bit = 1u64 << s;
        let children = self.inc[v]
            .iter()
            .copied()
            .filter(|&e| st.slot[e] == FREE && st.unc[g.other(e, v)] & bit != 0)
            .map(|e| vec![(e, s)])
            .collect();
        Branching::Children(children)
    }

    fn dfs(&self, st: &mut State, ctl: &Control, index: usize) -> Dfs {
        if !ctl.tick(index) {
            return Dfs::Stopped;
        }
        match self.branches(st) {
            Branching::Complete => Dfs::Found(st.slot.clone()),
            Branching::Dead => Dfs::None,
            Branching::Children(children) => {
                for child in children {
                    let used_before = st.used;
                    let ok = self.apply(st, &child);
                    let res = if ok { self.dfs(st, ctl, index) } else { Dfs::None };
                    for &(e, _) in child.iter().rev() {
                        self.unassign(st, e, used_before);
                    }
                    if !matches!(res, Dfs::None) {
                        return res;
                    }
                }
                Dfs::None
            }
        }
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(b)
    })
}

fn combinations(items: &[EdgeId], need: usize, from: usize, pick: &mut Vec<EdgeId>, emit: &mut impl FnMut(&[EdgeId])) {
    if pick.len() == need {
        emit(pick);
        return;
    }
    for i in from..items.len() {
        if items.len() - i < need - pick.len() {
            break;
        }
        pick.push(items[i]);
        combinations(items, need, i + 1, pick, emit);
        pick.pop();
    }
}
