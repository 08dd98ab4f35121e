//! A mechanical certificate that `G_k` has no `4k` pairwise disjoint perfect
//! matchings.
//!
//! Ingredients, all recomputed from the graph at hand:
//! 1. every `4k`-PDPM of `P_k` projects onto a family containing
//!    `k(M_0+M_1+M_2)` (checked exhaustively);
//! 2. every `Q<j>` is an induced copy of `Q_k` whose cut is exactly
//!    `E1/<j> ∪ E2/<j>`, so the union `N` of a `4k`-PDPM meets each of them
//!    in `2k` edges;
//! 3. every edge at `w` goes to a distinct `z_i`, so some `wz_i` lies in `N`.
//!
//! Around `T_i = {x_i, y_i, z_i}` the cut then consists of that edge plus
//! whole attachment sets, forcing `|N ∩ ∂(T_i)| = 1 + 2k·(#sets)`, which is
//! odd, while `4k` matchings meeting the odd set `T_i` an odd number of
//! times each give an even total.

use std::collections::BTreeSet;

use super::{build_gk, build_qk, GadgetOutput};
use crate::error::{invalid, Result};
use crate::multigraph::{EdgeId, Multigraph};
use crate::par::Workers;
use crate::petersen::{check_lemma_2_2, Lemma22Report, TypeCounts};

/// The recount around one triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCount {
    pub i: usize,
    /// `|∂(T_i)|`.
    pub boundary: usize,
    /// Edges of `∂(T_i)` at `w`.
    pub w_edges: usize,
    /// Attachment sets `E1/<j>`, `E2/<j>` contained in `∂(T_i)`.
    pub attachment_sets: Vec<String>,
    /// Edges of `∂(T_i)` that are neither at `w` nor in an attachment set.
    pub stray_edges: usize,
    /// `|N ∩ ∂(T_i)|` forced by the ingredients: `w_edges + 2k·#sets`.
    pub forced: usize,
    /// `4k · 1 (mod 2)`: the parity every union of `4k` perfect matchings has.
    pub required_parity_even: bool,
}

impl TripleCount {
    /// The recount contradicts the parity requirement.
    pub fn contradicts(&self) -> bool {
        self.w_edges == 1 && self.stray_edges == 0 && self.forced % 2 == 1 && self.required_parity_even
    }
}

#[derive(Clone, Debug)]
pub struct GkCertificate {
    pub k: usize,
    pub family: TypeCounts,
    pub lemma_verified: bool,
    /// Copies of `Q_k` found intact, out of `|D_k ∪ E_k|`.
    pub q_copies_checked: usize,
    pub q_copies_expected: usize,
    pub triples: Vec<TripleCount>,
    /// True only when every ingredient holds and every triple contradicts.
    pub verified: bool,
    pub failures: Vec<String>,
}

fn edge_pairs(g: &Multigraph) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = g.edges().map(|(_, a, b)| (a.min(b), a.max(b))).collect();
    out.sort_unstable();
    out
}

/// Checks that `Q<j>` is an induced copy of `q` attached through exactly
/// `E1/<j>` at its `v_1^1` and `E2/<j>` at its `v_1^2`.
fn check_q_copy(gadget: &GadgetOutput, q: &GadgetOutput, j: usize, k: usize) -> std::result::Result<(), String> {
    let g = &gadget.graph;
    let prov = &gadget.provenance;
    let name = format!("Q{j}");
    let set = gadget.vertices(&name);
    if set.len() != q.graph.n() {
        return Err(format!("{name} has {} vertices, Q_k has {}", set.len(), q.graph.n()));
    }
    let copy = prov.copy_index(&name).ok_or(format!("{name} is not a declared copy"))?;
    if edge_pairs(&prov.copies[copy].source) != edge_pairs(&q.graph) {
        return Err(format!("{name} is not built from Q_k"));
    }
    if prov.vertices_of_copy(copy) != set {
        return Err(format!("{name} does not consist of the vertices of its copy"));
    }
    let item = |v: usize| prov.vertices[v].item;
    let inside = g.membership(set);
    let mut induced: Vec<(usize, usize)> = Vec::new();
    for (e, a, b) in g.edges() {
        if inside[a] && inside[b] {
            if prov.edge_in_copy(e, copy).is_none() {
                return Err(format!("{name} contains edge {e} that is not part of the copy"));
            }
            let (p, r) = (item(a), item(b));
            induced.push((p.min(r), p.max(r)));
        }
    }
    induced.sort_unstable();
    if induced != edge_pairs(&q.graph) {
        return Err(format!("{name} is not an induced copy of Q_k"));
    }
    let t = 2 * k + 1;
    let mut cut = g.boundary(set);
    cut.sort_unstable();
    let (e1, e2) = (gadget.edges(&format!("E1/{j}")), gadget.edges(&format!("E2/{j}")));
    let mut both: Vec<EdgeId> = e1.iter().chain(e2).copied().collect();
    both.sort_unstable();
    if cut != both {
        return Err(format!("∂({name}) is not E1/{j} ∪ E2/{j}"));
    }
    for (side, attach, marker) in [(e1, "E1", "v1^1"), (e2, "E2", "v1^2")] {
        if side.len() != t {
            return Err(format!("|{attach}/{j}| = {}, expected {t}", side.len()));
        }
        let target = q.vertex(marker).expect("marked");
        let ok = side.iter().all(|&e| {
            let (a, b) = g.endpoints(e);
            let inner = if inside[a] { a } else { b };
            item(inner) == target
        });
        if !ok {
            return Err(format!("{attach}/{j} does not end at {marker} of {name}"));
        }
    }
    Ok(())
}

/// Replays the counting argument on `gadget` (claimed to be `G_k`) using
/// the exhaustive projection report `lemma` for `P_k`.
pub fn certify_gk(gadget: &GadgetOutput, k: usize, lemma: &Lemma22Report) -> Result<GkCertificate> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let family = TypeCounts::p_k(k)?;
    let mut failures = Vec::new();
    let lemma_verified = lemma.family == family && lemma.verified();
    if lemma.family != family {
        failures.push(format!("the exhaustive check covers {} instead of {family}", lemma.family));
    } else if !lemma.verified() {
        failures.push(format!("the exhaustive check for {family} did not verify"));
    }

    let g = &gadget.graph;
    let q = build_qk(k)?;
    let copies = 6 * k + 3;
    let mut q_copies_checked = 0;
    for j in 0..copies {
        match check_q_copy(gadget, &q, j, k) {
            Ok(()) => q_copies_checked += 1,
            Err(why) => failures.push(why),
        }
    }

    let a_set = gadget.edges("A");
    let Some(w) = gadget.vertex("w") else {
        failures.push("no vertex w is marked".into());
        return Ok(GkCertificate {
            k,
            family,
            lemma_verified,
            q_copies_checked,
            q_copies_expected: copies,
            triples: Vec::new(),
            verified: false,
            failures,
        });
    };
    let at_w: Vec<EdgeId> = g.incident(w).to_vec();
    if at_w != a_set {
        failures.push("the edges at w are not the designated set A".into());
    }
    let far: BTreeSet<usize> = at_w.iter().map(|&e| g.other(e, w)).collect();
    if far.len() != at_w.len() || at_w.len() != 4 * k + 2 {
        failures.push(format!("w has {} edges to {} distinct neighbours, expected 4k+2 of each", at_w.len(), far.len()));
    }

    let attach: Vec<(String, BTreeSet<EdgeId>)> = gadget
        .designated
        .iter()
        .filter(|(name, _)| name.starts_with("E1/") || name.starts_with("E2/"))
        .map(|(name, es)| (name.clone(), es.iter().copied().collect()))
        .collect();
    let mut triples = Vec::new();
    for i in 1..=4 * k + 2 {
        let set = gadget.vertices(&format!("triple/{i}"));
        if set.len() != 3 {
            failures.push(format!("triple {i} is not marked with 3 vertices"));
            continue;
        }
        let cut: BTreeSet<EdgeId> = g.boundary(set).into_iter().collect();
        let w_edges = cut.iter().filter(|&&e| g.endpoints(e).0 == w || g.endpoints(e).1 == w).count();
        let mut covered = BTreeSet::new();
        let mut attachment_sets = Vec::new();
        for (name, es) in &attach {
            if !es.is_empty() && es.is_subset(&cut) {
                attachment_sets.push(name.clone());
                covered.extend(es.iter().copied());
            }
        }
        let stray_edges = cut.len() - w_edges - covered.len();
        let forced = w_edges + 2 * k * attachment_sets.len();
        let tc = TripleCount {
            i,
            boundary: cut.len(),
            w_edges,
            attachment_sets,
            stray_edges,
            forced,
            required_parity_even: (4 * k) % 2 == 0,
        };
        if !tc.contradicts() {
            failures.push(format!(
                "triple {i}: forced count {} with {} w-edges and {} stray edges yields no parity contradiction",
                tc.forced, tc.w_edges, tc.stray_edges
            ));
        }
        triples.push(tc);
    }

    let verified = failures.is_empty() && q_copies_checked == copies && triples.len() == 4 * k + 2;
    Ok(GkCertificate { k, family, lemma_verified, q_copies_checked, q_copies_expected: copies, triples, verified, failures })
}

/// Builds `G_k`, runs the exhaustive ingredient for `P_k` and certifies.
pub fn check_gk_certificate(k: usize, workers: Workers) -> Result<GkCertificate> {
    let gadget = build_gk(k)?;
    let lemma = check_lemma_2_2(&TypeCounts::p_k(k)?, None, workers)?;
    certify_gk(&gadget, k, &lemma)
}
