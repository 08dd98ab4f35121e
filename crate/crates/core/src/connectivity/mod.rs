//! Exact connectivity engines.
//!
//! Every cut returned by this module is a [`CutCertificate`] whose boundary
//! size has been recomputed from the edge list before it is handed out.

mod cuts;
mod flow;

use crate::error::{invalid, Error, Result};
use crate::multigraph::{Multigraph, VertexId};
use crate::par::{self, Workers};

pub use cuts::{cyclic_edge_connectivity_at_least, enumerate_edge_cuts_upto, vertex_connectivity_at_least};
pub use flow::{FlowNetwork, GomoryHuTree};

/// Largest order for which [`min_odd_cut`] enumerates subsets directly.
pub const BRUTE_FORCE_ODD_CUT_MAX_N: usize = 24;

/// A vertex set `X` together with `|∂(X)|` and `|X| mod 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutCertificate {
    pub side: Vec<VertexId>,
    pub boundary: usize,
    pub parity: usize,
}

impl CutCertificate {
    /// Measures `X` in `g`; `X` must be nonempty and proper.
    pub fn new(g: &Multigraph, mut side: Vec<VertexId>) -> Result<Self> {
        side.sort_unstable();
        side.dedup();
        if side.is_empty() || side.len() >= g.n() || side.iter().any(|&v| v >= g.n()) {
            return invalid(format!("cut side of size {} is not a nonempty proper subset of 0..{}", side.len(), g.n()));
        }
        let boundary = g.boundary_size(&side);
        let parity = side.len() % 2;
        Ok(CutCertificate { side, boundary, parity })
    }

    fn from_mask(g: &Multigraph, inside: &[bool]) -> Result<Self> {
        Self::new(g, (0..g.n()).filter(|&v| inside[v]).collect())
    }

    /// Recomputes every field from the edge list.
    pub fn verify(&self, g: &Multigraph) -> bool {
        CutCertificate::new(g, self.side.clone()).is_ok_and(|c| c == *self)
    }
}

/// Outcome of a property check that produces a witness when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Violated(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Violated(w) => Some(w),
        }
    }
}

/// Global edge connectivity `λ(G)` with a minimum cut (Stoer–Wagner).
pub fn edge_connectivity(g: &Multigraph) -> Result<(usize, CutCertificate)> {
    let n = g.n();
    if n < 2 {
        return invalid("edge connectivity needs at least two vertices");
    }
    let comps = g.components(None);
    if comps.len() > 1 {
        return Ok((0, CutCertificate::new(g, comps[0].clone())?));
    }
    let mut w: Vec<u64> = g.weight_matrix().into_iter().map(u64::from).collect();
    let mut groups: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = (u64::MAX, Vec::new());
    while active.len() > 1 {
        let k = active.len();
        let mut added = vec![false; k];
        let mut key = vec![0u64; k];
        let (mut prev, mut last) = (usize::MAX, usize::MAX);
        for _ in 0..k {
            let mut sel = usize::MAX;
            for i in 0..k {
                if !added[i] && (sel == usize::MAX || key[i] > key[sel]) {
                    sel = i;
                }
            }
            added[sel] = true;
            prev = last;
            last = sel;
            let a = active[sel];
            for i in 0..k {
                if !added[i] {
                    key[i] += w[a * n + active[i]];
                }
            }
        }
        let (s, t) = (active[prev], active[last]);
        if key[last] < best.0 {
            best = (key[last], groups[t].clone());
        }
        let moved = std::mem::take(&mut groups[t]);
        groups[s].extend(moved);
        for &x in &active {
            w[s * n + x] += w[t * n + x];
            w[x * n + s] = w[s * n + x];
        }
        w[s * n + s] = 0;
        active.remove(last);
    }
    let cert = CutCertificate::new(g, best.1)?;
    if cert.boundary as u64 != best.0 {
        return Err(Error::Internal(format!("minimum cut {} re-measured as {}", best.0, cert.boundary)));
    }
    Ok((cert.boundary, cert))
}

/// Number of pairwise edge-disjoint `u`–`w` paths.
pub fn local_edge_connectivity(g: &Multigraph, u: VertexId, w: VertexId) -> Result<usize> {
    if u == w {
        return invalid("local edge connectivity needs two distinct vertices");
    }
    if u >= g.n() || w >= g.n() {
        return invalid(format!("vertices ({u},{w}) outside 0..{}", g.n()));
    }
    Ok(flow::local(g, u, w) as usize)
}

/// Minimum `|∂(X)|` over odd `X`, by subset enumeration for small orders and
/// by the Gomory–Hu tree otherwise.
pub fn min_odd_cut(g: &Multigraph) -> Result<(usize, CutCertificate)> {
    if g.n() <= BRUTE_FORCE_ODD_CUT_MAX_N {
        min_odd_cut_brute(g, Workers::default())
    } else {
        min_odd_cut_gomory_hu(g)
    }
}

/// Exhaustive minimum odd cut over a Gray-code walk of all subsets.
pub fn min_odd_cut_brute(g: &Multigraph, workers: Workers) -> Result<(usize, CutCertificate)> {
    let n = g.n();
    if n < 2 {
        return invalid("an odd cut needs at least two vertices");
    }
    if n > 32 {
        return Err(Error::Resource(format!("subset enumeration over {n} vertices")));
    }
    // For even n, X and V∖X have the same parity, so fixing the last vertex
    // outside X loses nothing.
    let bits = if n % 2 == 0 { n - 1 } else { n };
    let full: u64 = if bits == n { (1u64 << n) - 1 } else { u64::MAX };
    let w = g.weight_matrix();
    let adj: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|u| (0..n).filter(|&v| w[u * n + v] > 0).map(|v| (v, w[u * n + v] as i64)).collect())
        .collect();
    let split = bits.saturating_sub(16).min(8);
    let low = bits - split;
    let results = par::map_range(workers, 1usize << split, |chunk| {
        let prefix = (chunk as u64) << low;
        let mut inside = vec![false; n];
        let mut size = 0usize;
        for v in low..bits {
            if prefix >> v & 1 == 1 {
                inside[v] = true;
                size += 1;
            }
        }
        let mut boundary: i64 =
            g.edges().filter(|&(_, u, v)| inside[u] != inside[v]).count() as i64;
        let mut best: Option<(i64, u64)> = None;
        let mut mask = prefix;
        let consider = |boundary: i64, size: usize, mask: u64, best: &mut Option<(i64, u64)>| {
            if size % 2 == 1 && mask != full && best.is_none_or(|(b, _)| boundary < b) {
                *best = Some((boundary, mask));
            }
        };
        consider(boundary, size, mask, &mut best);
        for i in 1u64..(1u64 << low) {
            let v = i.trailing_zeros() as usize;
            let now_in = !inside[v];
            for &(x, mu) in &adj[v] {
                if inside[x] == now_in {
                    boundary -= mu;
                } else {
                    boundary += mu;
                }
            }
            inside[v] = now_in;
            mask ^= 1 << v;
            if now_in {
                size += 1;
            } else {
                size -= 1;
            }
            consider(boundary, size, mask, &mut best);
        }
        best
    });
    let (value, mask) = results
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .ok_or_else(|| Error::Internal("no odd subset enumerated".into()))?;
    let cert = CutCertificate::new(g, (0..n).filter(|&v| mask >> v & 1 == 1).collect())?;
    if cert.boundary as i64 != value || cert.parity != 1 {
        return Err(Error::Internal(format!("odd cut {value} re-measured as {}", cert.boundary)));
    }
    Ok((cert.boundary, cert))
}

/// Minimum odd cut among the fundamental cuts of a Gomory–Hu tree. Every tree
/// cut is re-measured in `g` so a flawed tree cannot produce a wrong value.
pub fn min_odd_cut_gomory_hu(g: &Multigraph) -> Result<(usize, CutCertificate)> {
    let n = g.n();
    if n < 2 {
        return invalid("an odd cut needs at least two vertices");
    }
    if n % 2 == 1 {
        return Err(Error::Resource(format!(
            "odd order {n} above {BRUTE_FORCE_ODD_CUT_MAX_N}: the tree method covers even orders only"
        )));
    }
    let tree = GomoryHuTree::build(g);
    let mut best: Option<CutCertificate> = None;
    for s in 1..n {
        let side = tree.fundamental_side(s);
        let cert = CutCertificate::from_mask(g, &side)?;
        if cert.boundary as u64 != tree.weight[s] {
            return Err(Error::Internal(format!(
                "tree edge ({s},{}) has weight {} but its cut measures {}",
                tree.parent[s], tree.weight[s], cert.boundary
            )));
        }
        if cert.parity == 1 && best.as_ref().is_none_or(|b| cert.boundary < b.boundary) {
            best = Some(cert);
        }
    }
    let cert = best.ok_or_else(|| Error::Internal("tree has no odd fundamental cut".into()))?;
    Ok((cert.boundary, cert))
}

/// Why a graph fails to be an r-graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RGraphViolation {
    Degree { vertex: VertexId, degree: usize },
    OddCut(CutCertificate),
}

/// r-regular and every odd set has at least `r` boundary edges.
pub fn is_r_graph(g: &Multigraph, r: usize) -> Result<Check<RGraphViolation>> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != r) {
        return Ok(Check::Violated(RGraphViolation::Degree { vertex: v, degree: g.degree(v) }));
    }
    if g.n() < 2 {
        return Ok(Check::Holds);
    }
    let (value, cert) = min_odd_cut(g)?;
    Ok(if value < r { Check::Violated(RGraphViolation::OddCut(cert)) } else { Check::Holds })
}

/// `λ(G) ≥ k`, with a violating cut otherwise.
pub fn is_k_edge_connected(g: &Multigraph, k: usize) -> Result<Check<CutCertificate>> {
    let (value, cert) = edge_connectivity(g)?;
    Ok(if value < k { Check::Violated(cert) } else { Check::Holds })
}
