//! Perfect matchings, k-PDPM search and class determination.
//!
//! Disjointness is always between edge instances: two parallel edges may sit
//! in different matchings of one PDPM.

mod oddsets;
mod search;
pub mod verify;

use std::time::Duration;

use crate::error::{invalid, Error, Result};
use crate::multigraph::{EdgeId, Matching, Multigraph, VertexId};
use crate::par::Workers;

pub use search::Budget;
pub use verify::verify_pdpm;

/// Side conditions on a PDPM. `contain` edges must lie in some member,
/// `avoid` edges in none, and each `slots` pair `(e, i)` puts `e` in member `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub contain: Vec<EdgeId>,
    pub avoid: Vec<EdgeId>,
    pub slots: Vec<(EdgeId, usize)>,
}

impl Constraints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn containing(mut self, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        self.contain.extend(edges);
        self
    }

    pub fn avoiding(mut self, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        self.avoid.extend(edges);
        self
    }

    pub fn pin(mut self, e: EdgeId, slot: usize) -> Self {
        self.slots.push((e, slot));
        self
    }

    fn normalized(&self, g: &Multigraph, k: usize) -> Result<Constraints> {
        let m = g.m();
        let mut c = self.clone();
        for list in [&mut c.contain, &mut c.avoid] {
            list.sort_unstable();
            list.dedup();
        }
        c.slots.sort_unstable();
        c.slots.dedup();
        let named = c.contain.iter().chain(&c.avoid).chain(c.slots.iter().map(|(e, _)| e));
        if let Some(e) = named.copied().find(|&e| e >= m) {
            return invalid(format!("edge {e} does not exist (m = {m})"));
        }
        if let Some(e) = c.contain.iter().find(|e| c.avoid.binary_search(e).is_ok()) {
            return invalid(format!("edge {e} is both required and avoided"));
        }
        for w in c.slots.windows(2) {
            if w[0].0 == w[1].0 {
                return invalid(format!("edge {} is pinned to matchings {} and {}", w[0].0, w[0].1, w[1].1));
            }
        }
        for &(e, s) in &c.slots {
            if s >= k {
                return invalid(format!("edge {e} is pinned to matching {s} but only {k} are requested"));
            }
            if c.avoid.binary_search(&e).is_ok() {
                return invalid(format!("edge {e} is both pinned and avoided"));
            }
        }
        Ok(c)
    }
}

/// Pairwise instance-disjoint perfect matchings with the constraints they meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdpmWitness {
    pub matchings: Vec<Matching>,
    pub constraints: Constraints,
}

impl PdpmWitness {
    pub fn k(&self) -> usize {
        self.matchings.len()
    }

    pub fn verify(&self, g: &Multigraph) -> std::result::Result<(), String> {
        verify_pdpm(g, self.matchings.len(), &self.constraints, &self.matchings)
    }

    /// Edges used by some member.
    pub fn union(&self) -> Vec<EdgeId> {
        let mut all: Vec<EdgeId> = self.matchings.iter().flat_map(|m| m.edges().iter().copied()).collect();
        all.sort_unstable();
        all
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(PdpmWitness),
    /// The whole search space was covered without a witness.
    None,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn witness(&self) -> Option<&PdpmWitness> {
        match &self.outcome {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_none(&self) -> bool {
        self.outcome == SearchOutcome::None
    }
}

/// Engine knobs. With `Workers::SEQUENTIAL` and a fixed seed both the outcome
/// and the node count are deterministic.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Permutes edge priority; 0 keeps edge-id order.
    pub seed: u64,
    pub workers: Workers,
}

impl SearchOptions {
    pub fn with_budget(budget: Budget) -> Self {
        SearchOptions { budget, ..Default::default() }
    }

    pub fn sequential(mut self) -> Self {
        self.workers = Workers::SEQUENTIAL;
        self
    }
}

/// Searches for `k` pairwise disjoint perfect matchings meeting `constraints`.
/// A returned witness has passed [`verify_pdpm`].
pub fn find_pdpm(g: &Multigraph, k: usize, constraints: &Constraints, opts: &SearchOptions) -> Result<SearchReport> {
    let c = constraints.normalized(g, k)?;
    let raw = search::run(g, k, &c, opts.budget, opts.seed, opts.workers)?;
    let outcome = match raw.outcome {
        search::Raw::Found(sets) => {
            let witness = PdpmWitness { matchings: sets.into_iter().map(Matching::new).collect(), constraints: c };
            if let Err(why) = witness.verify(g) {
                return Err(Error::Internal(format!("search produced an invalid witness: {why}")));
            }
            SearchOutcome::Found(witness)
        }
        search::Raw::None => SearchOutcome::None,
        search::Raw::Exhausted => SearchOutcome::BudgetExhausted,
    };
    Ok(SearchReport { outcome, nodes: raw.nodes, elapsed: raw.elapsed })
}

/// The largest `k ≤ upper` with a k-PDPM.
#[derive(Clone, Debug)]
pub struct MaxPdpm {
    pub value: usize,
    pub witness: Option<PdpmWitness>,
    /// `false` when the level above `value` ran out of budget.
    pub exact: bool,
    pub nodes: u64,
}

pub fn max_pdpm(g: &Multigraph, upper: usize, opts: &SearchOptions) -> Result<MaxPdpm> {
    let mut best = MaxPdpm { value: 0, witness: None, exact: true, nodes: 0 };
    for k in 1..=upper {
        let report = find_pdpm(g, k, &Constraints::none(), opts)?;
        best.nodes += report.nodes;
        match report.outcome {
            SearchOutcome::Found(w) => {
                best.value = k;
                best.witness = Some(w);
            }
            SearchOutcome::None => break,
            SearchOutcome::BudgetExhausted => {
                best.exact = false;
                break;
            }
        }
    }
    Ok(best)
}

/// Proof token for a class 2 verdict: the exhaustive search at `k = r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhaustion {
    pub k: usize,
    pub nodes: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassVerdict {
    One(PdpmWitness),
    Two(Exhaustion),
    Indeterminate { nodes: u64 },
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub r: usize,
    pub verdict: ClassVerdict,
    pub elapsed: Duration,
}

/// Class 1 iff an r-PDPM exists.
pub fn classify(g: &Multigraph, opts: &SearchOptions) -> Result<Classification> {
    let Some(r) = g.regularity() else {
        return invalid("classification needs a regular graph");
    };
    if r == 0 {
        return invalid("classification needs positive degree");
    }
    let report = find_pdpm(g, r, &Constraints::none(), opts)?;
    let verdict = match report.outcome {
        SearchOutcome::Found(w) => ClassVerdict::One(w),
        SearchOutcome::None => ClassVerdict::Two(Exhaustion { k: r, nodes: report.nodes, seed: opts.seed }),
        SearchOutcome::BudgetExhausted => ClassVerdict::Indeterminate { nodes: report.nodes },
    };
    Ok(Classification { r, verdict, elapsed: report.elapsed })
}

/// `|∂(X) ∩ M| ≡ |X| (mod 2)` for a perfect matching `M`.
pub fn parity_check(g: &Multigraph, m: &Matching, x: &[VertexId]) -> Result<bool> {
    if !verify::is_perfect_matching(g, m.edges()) {
        return invalid("parity check needs a perfect matching");
    }
    Ok(boundary_hits(g, m, x) % 2 == g.membership(x).iter().filter(|&&b| b).count() % 2)
}

/// `|∂(X) ∩ M|`.
pub fn boundary_hits(g: &Multigraph, m: &Matching, x: &[VertexId]) -> usize {
    let inside = g.membership(x);
    m.edges()
        .iter()
        .filter(|&&e| {
            let (u, v) = g.endpoints(e);
            inside[u] != inside[v]
        })
        .count()
}

/// Every perfect matching, each exactly once, in lexicographic order of the
/// sorted edge-id sequences.
pub fn enumerate_perfect_matchings(g: &Multigraph) -> PerfectMatchings<'_> {
    let n = g.n();
    let maxinc = (0..n).map(|v| g.incident(v).iter().copied().max()).collect();
    PerfectMatchings {
        g,
        maxinc,
        matched: vec![false; n],
        chosen: Vec::new(),
        cursor: 0,
        state: if n % 2 == 1 {
            EnumState::Done
        } else if n == 0 {
            EnumState::EmitEmpty
        } else {
            EnumState::Running
        },
    }
}

enum EnumState {
    Running,
    EmitEmpty,
    Done,
}

pub struct PerfectMatchings<'g> {
    g: &'g Multigraph,
    maxinc: Vec<Option<EdgeId>>,
    matched: Vec<bool>,
    chosen: Vec<EdgeId>,
    cursor: EdgeId,
    state: EnumState,
}

impl PerfectMatchings<'_> {
    fn toggle(&mut self, e: EdgeId, on: bool) {
        let (u, v) = self.g.endpoints(e);
        self.matched[u] = on;
        self.matched[v] = on;
    }
}

impl Iterator for PerfectMatchings<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        match self.state {
            EnumState::Done => return None,
            EnumState::EmitEmpty => {
                self.state = EnumState::Done;
                return Some(Matching::default());
            }
            EnumState::Running => {}
        }
        let g = self.g;
        let half = g.n() / 2;
        loop {
            // Later picks have larger ids, so every unmatched vertex needs an
            // incident edge at or above the next pick.
            let bound = (0..g.n())
                .filter(|&v| !self.matched[v])
                .map(|v| self.maxinc[v])
                .min()
                .flatten();
            let pick = bound.and_then(|b| {
                (self.cursor..=b).find(|&e| {
                    let (u, v) = g.endpoints(e);
                    !self.matched[u] && !self.matched[v]
                })
            });
            match pick {
                Some(e) => {
                    self.toggle(e, true);
                    self.chosen.push(e);
                    self.cursor = e + 1;
                    if self.chosen.len() == half {
                        let out = Matching::new(self.chosen.clone());
                        self.chosen.pop();
                        self.toggle(e, false);
                        return Some(out);
                    }
                }
                None => {
                    let Some(e) = self.chosen.pop() else {
                        self.state = EnumState::Done;
                        return None;
                    };
                    self.toggle(e, false);
                    self.cursor = e + 1;
                }
            }
        }
    }
}
