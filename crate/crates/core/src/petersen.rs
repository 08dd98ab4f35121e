//! The Petersen graph `P` with its six labelled perfect matchings and the
//! family `P^𝓜 = P + Σ N_j` obtained by adding copies of them.
//!
//! Vertices: `v_i = i − 1` and `u_i = i + 4` for `i = 1..5`. Edge ids: the
//! outer circuit `v_iv_{i+1}` is `0..5`, the spoke `u_iv_i` is `5..10`, and
//! the inner edge `u_iu_{i+2}` is `10..15`.

use std::fmt;

use crate::connectivity::edge_connectivity;
use crate::error::{precondition, Error, Result};
use crate::matching::{classify, verify_pdpm, ClassVerdict, Constraints, PdpmWitness, SearchOptions};
use crate::multigraph::{Builder, EdgeId, Matching, Multigraph, Provenance, VertexId};
use crate::par::{self, Workers};

pub const V: [VertexId; 5] = [0, 1, 2, 3, 4];
pub const U: [VertexId; 5] = [5, 6, 7, 8, 9];

/// Largest `|𝓜|` accepted by [`check_lemma_2_2`].
pub const LEMMA_2_2_MAX_FAMILY: usize = 4;

/// The canonical Petersen graph, labelled `v1..v5,u1..u5`.
pub fn petersen() -> Multigraph {
    let mut e = Vec::with_capacity(15);
    for i in 0..5 {
        e.push((V[i], V[(i + 1) % 5]));
    }
    for i in 0..5 {
        e.push((V[i], U[i]));
    }
    for i in 0..5 {
        e.push((U[i], U[(i + 2) % 5]));
    }
    let labels = (1..=5).map(|i| format!("v{i}")).chain((1..=5).map(|i| format!("u{i}"))).collect();
    Multigraph::new(10, e).and_then(|g| g.with_labels(labels)).expect("static graph")
}

/// `M_0..M_5` as sorted vertex pairs. `M_0` is the spoke set and, for
/// `j ≥ 1`, `M_j` is the other perfect matching through `u_jv_j`.
pub fn petersen_matchings() -> [Vec<(VertexId, VertexId)>; 6] {
    let pair = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
    let m0: Vec<_> = (0..5).map(|i| pair(V[i], U[i])).collect();
    let mj = |j: usize| {
        let at = |d: usize| (j + d) % 5;
        let mut m = vec![
            pair(U[j], V[j]),
            pair(V[at(1)], V[at(2)]),
            pair(V[at(3)], V[at(4)]),
            pair(U[at(1)], U[at(3)]),
            pair(U[at(2)], U[at(4)]),
        ];
        m.sort_unstable();
        m
    };
    let mut m0 = m0;
    m0.sort_unstable();
    [m0, mj(0), mj(1), mj(2), mj(3), mj(4)]
}

/// Index `j` of `M_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchingType(pub usize);

impl fmt::Display for MatchingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.0)
    }
}

/// A multiset over `{M_0..M_5}` as six multiplicities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeCounts(pub [usize; 6]);

impl TypeCounts {
    pub fn from_types(types: &[usize]) -> Result<Self> {
        let mut c = [0; 6];
        for &t in types {
            if t >= 6 {
                return Err(Error::InvalidInput(format!("matching type {t} is not in 0..=5")));
            }
            c[t] += 1;
        }
        Ok(TypeCounts(c))
    }

    /// `k(M_0+M_1+M_2)+(k−1)M_5`.
    pub fn p_k(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        Ok(TypeCounts([k, k, k, 0, 0, k - 1]))
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Members in ascending type order, with repetition.
    pub fn types(&self) -> Vec<usize> {
        (0..6).flat_map(|j| std::iter::repeat_n(j, self.0[j])).collect()
    }

    /// Multiset inclusion.
    pub fn contains(&self, other: &TypeCounts) -> bool {
        (0..6).all(|j| self.0[j] >= other.0[j])
    }

    /// Every multiset of the given size, in lexicographic order of `types()`.
    pub fn all_of_size(size: usize) -> Vec<TypeCounts> {
        fn go(from: usize, left: usize, cur: &mut [usize; 6], out: &mut Vec<TypeCounts>) {
            if left == 0 {
                out.push(TypeCounts(*cur));
                return;
            }
            for j in from..6 {
                cur[j] += 1;
                go(j, left - 1, cur, out);
                cur[j] -= 1;
            }
        }
        let mut out = Vec::new();
        go(0, size, &mut [0; 6], &mut out);
        out
    }
}

impl fmt::Display for TypeCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() == 0 {
            return f.write_str("∅");
        }
        let mut first = true;
        for (j, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if c > 1 {
                write!(f, "{c}")?;
            }
            write!(f, "M{j}")?;
        }
        Ok(())
    }
}

/// `P^𝓜`. Edges `0..15` are those of `P`; then, for each type in ascending
/// order and each copy, five new instances in the order of
/// [`petersen_matchings`].
#[derive(Clone, Debug)]
pub struct PetersenFamily {
    pub graph: Multigraph,
    pub provenance: Provenance,
    pub family: TypeCounts,
    /// Type of the copy each added instance belongs to; `None` on `E(P)`.
    pub added_type: Vec<Option<MatchingType>>,
}

pub fn build_p_m(family: &TypeCounts) -> PetersenFamily {
    let p = petersen();
    let ms = petersen_matchings();
    let mut b = Builder::new();
    let base = b.add_copy("P", &p);
    let mut added_type = vec![None; p.m()];
    for t in family.types() {
        for &(x, y) in &ms[t] {
            b.add_edge(base.vertex(x), base.vertex(y), Vec::new());
            added_type.push(Some(MatchingType(t)));
        }
    }
    let f = b.finish();
    let labels = p.labels().expect("labelled").to_vec();
    PetersenFamily {
        graph: f.graph.with_labels(labels).expect("same order"),
        provenance: f.provenance,
        family: *family,
        added_type,
    }
}

/// The type of a perfect matching `n` of a graph on the vertex set of `P`
/// whose edges all join adjacent vertices of `P`.
pub fn matching_type(g: &Multigraph, n: &Matching) -> Result<MatchingType> {
    if g.n() != 10 {
        return Err(Error::InvalidInput(format!("expected 10 vertices, got {}", g.n())));
    }
    if !n.is_perfect_in(g) {
        return Err(Error::InvalidInput("not a perfect matching of the graph".into()));
    }
    let pairs = g.pairs_of(n.edges());
    petersen_matchings()
        .iter()
        .position(|m| *m == pairs)
        .map(MatchingType)
        .ok_or_else(|| Error::Internal(format!("{pairs:?} projects onto no perfect matching of P")))
}

#[derive(Clone, Debug)]
pub enum Lemma22Outcome {
    /// Every realizable type multiset of size `|𝓜|+1` contains `𝓜`.
    Verified { realizable: Vec<TypeCounts> },
    Counterexample { types: TypeCounts, witness: PdpmWitness },
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct Lemma22Report {
    pub family: TypeCounts,
    pub outcome: Lemma22Outcome,
    pub nodes: u64,
}

impl Lemma22Report {
    pub fn verified(&self) -> bool {
        matches!(self.outcome, Lemma22Outcome::Verified { .. })
    }
}

/// Decides, for every type multiset `T` with `|T| = |𝓜|+1`, whether `P^𝓜`
/// has a `(|𝓜|+1)`-PDPM of types `T`, by searching edge instances. Since
/// every perfect matching of `P^𝓜` has a type this covers all PDPMs. The
/// instance search is cross-checked against the bundle capacities
/// `Σ_{j∈T} [xy ∈ M_j] ≤ μ(x,y)`; a disagreement is an internal error.
pub fn check_lemma_2_2(family: &TypeCounts, node_budget: Option<u64>, workers: Workers) -> Result<Lemma22Report> {
    let k = family.size();
    if k > LEMMA_2_2_MAX_FAMILY {
        return precondition(format!("|𝓜| = {k} exceeds the exhaustive limit {LEMMA_2_2_MAX_FAMILY}"));
    }
    let pm = build_p_m(family);
    let g = &pm.graph;
    let instances = typed_instances(g);
    let candidates = TypeCounts::all_of_size(k + 1);
    let results = par::map(workers, &candidates, |t| realize(g, &instances, t, node_budget));
    let mut nodes = 0;
    let mut realizable = Vec::new();
    let mut counterexample = None;
    let mut exhausted = false;
    for (t, (found, spent)) in candidates.iter().zip(results) {
        nodes += spent;
        let fits = capacity_fits(g, t);
        match found {
            Realized::Yes(sets) => {
                if !fits {
                    return Err(Error::Internal(format!("{t} realized beyond bundle capacity")));
                }
                let witness = PdpmWitness { matchings: sets.into_iter().map(Matching::new).collect(), constraints: Constraints::none() };
                if let Err(why) = verify_pdpm(g, k + 1, &witness.constraints, &witness.matchings) {
                    return Err(Error::Internal(format!("invalid realization of {t}: {why}")));
                }
                if !t.contains(family) && counterexample.is_none() {
                    counterexample = Some((*t, witness));
                }
                realizable.push(*t);
            }
            Realized::No => {
                if fits {
                    return Err(Error::Internal(format!("{t} fits the bundles but no instances were found")));
                }
            }
            Realized::Exhausted => exhausted = true,
        }
    }
    let outcome = match (counterexample, exhausted) {
        (Some((types, witness)), _) => Lemma22Outcome::Counterexample { types, witness },
        (None, true) => Lemma22Outcome::BudgetExhausted,
        (None, false) => Lemma22Outcome::Verified { realizable },
    };
    Ok(Lemma22Report { family: *family, outcome, nodes })
}

/// For each type, every perfect matching of `g` of that type.
fn typed_instances(g: &Multigraph) -> [Vec<Vec<EdgeId>>; 6] {
    let ms = petersen_matchings();
    std::array::from_fn(|j| {
        let mut out: Vec<Vec<EdgeId>> = vec![Vec::new()];
        for &(x, y) in &ms[j] {
            let bundle = g.edges_between(x, y);
            out = out
                .into_iter()
                .flat_map(|pre| {
                    bundle.iter().map(move |&e| {
                        let mut next = pre.clone();
                        next.push(e);
                        next
                    })
                })
                .collect();
        }
        for m in &mut out {
            m.sort_unstable();
        }
        out
    })
}

fn capacity_fits(g: &Multigraph, t: &TypeCounts) -> bool {
    let ms = petersen_matchings();
    let p = petersen();
    let fits = p.edges().all(|(_, x, y)| {
        let key = (x.min(y), x.max(y));
        let demand: usize = (0..6).filter(|&j| ms[j].contains(&key)).map(|j| t.0[j]).sum();
        demand <= g.mu(x, y)
    });
    fits
}

enum Realized {
    Yes(Vec<Vec<EdgeId>>),
    No,
    Exhausted,
}

/// Instance-level search for pairwise disjoint matchings of the types in `t`.
/// Equal types take instances in increasing index order.
fn realize(g: &Multigraph, instances: &[Vec<Vec<EdgeId>>; 6], t: &TypeCounts, budget: Option<u64>) -> (Realized, u64) {
    struct Dfs<'a> {
        instances: &'a [Vec<Vec<EdgeId>>; 6],
        types: Vec<usize>,
        used: Vec<bool>,
        chosen: Vec<usize>,
        nodes: u64,
        budget: Option<u64>,
    }
    impl Dfs<'_> {
        fn go(&mut self, depth: usize) -> Option<bool> {
            if depth == self.types.len() {
                return Some(true);
            }
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                return None;
            }
            let t = self.types[depth];
            let start = if depth > 0 && self.types[depth - 1] == t { self.chosen[depth - 1] + 1 } else { 0 };
            for i in start..self.instances[t].len() {
                let m = &self.instances[t][i];
                if m.iter().any(|&e| self.used[e]) {
                    continue;
                }
                for &e in m {
                    self.used[e] = true;
                }
                self.chosen.push(i);
                match self.go(depth + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                self.chosen.pop();
                for &e in m {
                    self.used[e] = false;
                }
            }
            Some(false)
        }
    }
    let mut dfs = Dfs { instances, types: t.types(), used: vec![false; g.m()], chosen: Vec::new(), nodes: 0, budget };
    let outcome = match dfs.go(0) {
        Some(true) => {
            let sets = dfs.types.iter().zip(&dfs.chosen).map(|(&ty, &i)| instances[ty][i].clone()).collect();
            Realized::Yes(sets)
        }
        Some(false) => Realized::No,
        None => Realized::Exhausted,
    };
    (outcome, dfs.nodes)
}

/// Hypothesis and conclusions of the class 2 statement for `P^𝓜`.
#[derive(Clone, Debug)]
pub struct Lemma23Report {
    pub family: TypeCounts,
    /// `|𝓜|`.
    pub k: usize,
    pub max_multiplicity: usize,
    /// `μ(P^𝓜) ≤ ⌊(k+3)/2⌋`.
    pub hypothesis_holds: bool,
    /// The conclusions are evaluated only when the hypothesis holds.
    pub regular: Option<bool>,
    pub edge_connectivity: Option<usize>,
    pub class: Option<ClassVerdict>,
}

impl Lemma23Report {
    /// The hypothesis holds and every conclusion was verified.
    pub fn confirmed(&self) -> bool {
        let r = self.k + 3;
        self.hypothesis_holds
            && self.regular == Some(true)
            && self.edge_connectivity == Some(r)
            && matches!(self.class, Some(ClassVerdict::Two(_)))
    }
}

pub fn check_lemma_2_3(family: &TypeCounts, opts: &SearchOptions) -> Result<Lemma23Report> {
    let k = family.size();
    let pm = build_p_m(family);
    let g = &pm.graph;
    let max_multiplicity = g.max_multiplicity();
    let hypothesis_holds = max_multiplicity <= (k + 3) / 2;
    let mut report = Lemma23Report {
        family: *family,
        k,
        max_multiplicity,
        hypothesis_holds,
        regular: None,
        edge_connectivity: None,
        class: None,
    };
    if hypothesis_holds {
        report.regular = Some(g.is_regular(k + 3));
        report.edge_connectivity = Some(edge_connectivity(g)?.0);
        report.class = Some(classify(g, opts)?.verdict);
    }
    Ok(report)
}
