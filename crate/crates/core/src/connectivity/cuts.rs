//! Exhaustive small-cut machinery for desk-scale graphs.

use super::{Check, CutCertificate};
use crate::error::{invalid, Error, Result};
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use crate::par::{self, Workers};

/// Upper bound on the number of edge subsets [`enumerate_edge_cuts_upto`] visits.
pub const CUT_ENUMERATION_BUDGET: u64 = 50_000_000;

/// Largest order accepted by [`cyclic_edge_connectivity_at_least`].
pub const CYCLIC_MAX_N: usize = 32;

/// Whether removing fewer than `k` vertices always leaves `G` connected;
/// on failure the witness is a separating set of minimum size.
pub fn vertex_connectivity_at_least(g: &Multigraph, k: usize) -> Result<Check<Vec<VertexId>>> {
    let n = g.n();
    if k > 3 {
        return invalid(format!("vertex connectivity checks are limited to k ≤ 3, got {k}"));
    }
    if n <= k {
        return invalid(format!("{n} vertices cannot be {k}-connected"));
    }
    if k == 0 {
        return Ok(Check::Holds);
    }
    if !g.is_connected() {
        return Ok(Check::Violated(Vec::new()));
    }
    let separates = |removed: &[VertexId]| {
        let mut alive = vec![true; n];
        for &v in removed {
            alive[v] = false;
        }
        g.components(Some(&alive)).len() > 1
    };
    if k >= 2 {
        if let Some(v) = (0..n).find(|&v| separates(&[v])) {
            return Ok(Check::Violated(vec![v]));
        }
    }
    if k >= 3 {
        let hit = par::map_range(Workers::default(), n, |u| {
            (u + 1..n).find(|&w| separates(&[u, w])).map(|w| vec![u, w])
        });
        if let Some(pair) = hit.into_iter().flatten().next() {
            return Ok(Check::Violated(pair));
        }
    }
    Ok(Check::Holds)
}

fn binomial_prefix_sum(m: u64, c: u64) -> u64 {
    let mut total = 0u64;
    let mut term = 1u64;
    for i in 0..=c.min(m) {
        total = total.saturating_add(term);
        term = term.saturating_mul(m - i) / (i + 1);
    }
    total
}

/// The cut `S` determines, if `S = ∂(X)` for some `X`: the components of
/// `G − S` must 2-colour along `S` with every `S` edge bichromatic.
fn cut_of(g: &Multigraph, in_s: &[bool], s: &[EdgeId]) -> Option<Vec<VertexId>> {
    let n = g.n();
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for (e, u, v) in g.edges() {
        if !in_s[e] {
            let (a, b) = (find(&mut root, u), find(&mut root, v));
            if a != b {
                root[a] = b;
            }
        }
    }
    let comp: Vec<usize> = (0..n).map(|v| find(&mut root, v)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in s {
        let (u, v) = g.endpoints(e);
        let (a, b) = (comp[u], comp[v]);
        if a == b {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut colour = vec![u8::MAX; n];
    let start = comp[0];
    colour[start] = 0;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if colour[y] == u8::MAX {
                colour[y] = 1 - colour[x];
                stack.push(y);
            } else if colour[y] == colour[x] {
                return None;
            }
        }
    }
    if (0..n).any(|v| colour[comp[v]] == u8::MAX) {
        return None;
    }
    Some((0..n).filter(|&v| colour[comp[v]] == 1).collect())
}

/// Every distinct edge cut `∂(X)` with `|∂(X)| ≤ c` of a connected graph,
/// one certificate per unordered bipartition. The certificate side is the
/// smaller part (the part avoiding vertex 0 on ties).
pub fn enumerate_edge_cuts_upto(g: &Multigraph, c: usize) -> Result<Vec<CutCertificate>> {
    if g.n() < 2 {
        return invalid("cuts need at least two vertices");
    }
    if !g.is_connected() {
        return invalid("cut enumeration requires a connected graph");
    }
    let m = g.m();
    let work = binomial_prefix_sum(m as u64, c as u64);
    if work > CUT_ENUMERATION_BUDGET {
        return Err(Error::Resource(format!(
            "enumerating cuts up to {c} visits {work} edge subsets of {m} edges (limit {CUT_ENUMERATION_BUDGET})"
        )));
    }
    let n = g.n();
    let per_first = par::map_range(Workers::default(), m, |first| {
        let mut found = Vec::new();
        if c == 0 {
            return found;
        }
        let mut in_s = vec![false; m];
        let mut s = vec![first];
        in_s[first] = true;
        // `next[i]` is the next edge id that may extend `s[..=i]`.
        let mut next = vec![first + 1];
        if let Some(side) = cut_of(g, &in_s, &s) {
            found.push(side);
        }
        loop {
            let depth = s.len() - 1;
            let cand = next[depth];
            if s.len() < c && cand < m {
                next[depth] = cand + 1;
                s.push(cand);
                in_s[cand] = true;
                next.push(cand + 1);
                if let Some(side) = cut_of(g, &in_s, &s) {
                    found.push(side);
                }
                continue;
            }
            next.pop();
            let e = s.pop().expect("cursor and subset stay aligned");
            in_s[e] = false;
            if s.is_empty() {
                break;
            }
        }
        found
    });
    let mut out = Vec::new();
    for side in per_first.into_iter().flatten() {
        let other: Vec<VertexId> = {
            let inside = g.membership(&side);
            (0..n).filter(|&v| !inside[v]).collect()
        };
        let pick = if side.len() < other.len() || (side.len() == other.len() && other.contains(&0)) {
            side
        } else {
            other
        };
        out.push(CutCertificate::new(g, pick)?);
    }
    Ok(out)
}

fn has_circuit(g: &Multigraph, inside: &[bool]) -> bool {
    let nv = inside.iter().filter(|&&b| b).count();
    let me = g.edges().filter(|&(_, u, v)| inside[u] && inside[v]).count();
    me + g.components(Some(inside)).len() > nv
}

/// For a cubic graph: no edge cut with fewer than `k` edges separates two
/// circuit-containing sides.
pub fn cyclic_edge_connectivity_at_least(g: &Multigraph, k: usize) -> Result<Check<CutCertificate>> {
    if !g.is_regular(3) {
        return invalid("cyclic edge connectivity is defined here for cubic graphs only");
    }
    if g.n() > CYCLIC_MAX_N {
        return Err(Error::Resource(format!("cyclic connectivity limited to {CYCLIC_MAX_N} vertices, got {}", g.n())));
    }
    if k <= 1 {
        return Ok(Check::Holds);
    }
    if !g.is_connected() {
        let comp = g.components(None).swap_remove(0);
        return Ok(Check::Violated(CutCertificate::new(g, comp)?));
    }
    for cert in enumerate_edge_cuts_upto(g, k - 1)? {
        let inside = g.membership(&cert.side);
        let outside: Vec<bool> = inside.iter().map(|b| !b).collect();
        if has_circuit(g, &inside) && has_circuit(g, &outside) {
            return Ok(Check::Violated(cert));
        }
    }
    Ok(Check::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn petersen() -> Multigraph {
        let mut e = vec![];
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Multigraph::new(10, e).unwrap()
    }

    /// Every bipartition with boundary ≤ c, as sorted edge sets.
    fn oracle_cuts(g: &Multigraph, c: usize) -> BTreeSet<Vec<EdgeId>> {
        let n = g.n();
        (1u32..1 << (n - 1))
            .map(|m| g.edges().filter(|&(_, u, v)| (m >> u & 1) != (m >> v & 1)).map(|(e, _, _)| e).collect::<Vec<_>>())
            .filter(|s| s.len() <= c)
            .collect()
    }

    #[test]
    fn petersen_three_cuts_are_stars() {
        let p = petersen();
        let cuts = enumerate_edge_cuts_upto(&p, 3).unwrap();
        assert_eq!(cuts.len(), 10);
        assert!(cuts.iter().all(|c| c.side.len() == 1 && c.boundary == 3));
    }

    #[test]
    fn small_fixed_cases() {
        assert!(enumerate_edge_cuts_upto(&Multigraph::theta(5), 4).unwrap().is_empty());
        let k4 = Multigraph::complete(4);
        let cuts = enumerate_edge_cuts_upto(&k4, 3).unwrap();
        assert_eq!(cuts.len(), 4);
        assert!(cuts.iter().all(|c| c.side.len() == 1));
    }

    #[test]
    fn cyclic_connectivity() {
        let p = petersen();
        assert!(cyclic_edge_connectivity_at_least(&p, 5).unwrap().holds());
        let Check::Violated(c) = cyclic_edge_connectivity_at_least(&p, 6).unwrap() else {
            panic!("Petersen is not cyclically 6-edge-connected");
        };
        assert_eq!(c.boundary, 5);
        assert!(cyclic_edge_connectivity_at_least(&Multigraph::complete(4), 4).unwrap().holds());
        assert!(cyclic_edge_connectivity_at_least(&Multigraph::complete(5), 4).is_err());
    }

    #[test]
    fn vertex_connectivity() {
        assert!(vertex_connectivity_at_least(&Multigraph::complete(6), 3).unwrap().holds());
        let path = Multigraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(vertex_connectivity_at_least(&path, 2).unwrap(), Check::Violated(vec![1]));
        assert!(vertex_connectivity_at_least(&path, 3).is_err());
        let c6 = Multigraph::cycle(6);
        let Check::Violated(pair) = vertex_connectivity_at_least(&c6, 3).unwrap() else { panic!() };
        assert_eq!(pair.len(), 2);
    }

    #[test]
    fn over_budget_is_an_error() {
        let g = Multigraph::complete(30);
        assert!(matches!(enumerate_edge_cuts_upto(&g, 8), Err(Error::Resource(_))));
    }

    proptest! {
        #[test]
        fn enumeration_matches_oracle(n in 3usize..=8, raw in proptest::collection::vec((0usize..8, 0usize..8), 4..16), c in 0usize..5) {
            let mut e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            e.extend(raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v));
            let g = Multigraph::new(n, e).unwrap();
            let got: BTreeSet<Vec<EdgeId>> = enumerate_edge_cuts_upto(&g, c)
                .unwrap()
                .into_iter()
                .map(|cert| {
                    prop_assert!(cert.verify(&g));
                    Ok(g.boundary(&cert.side))
                })
                .collect::<std::result::Result<_, TestCaseError>>()?;
            prop_assert_eq!(got, oracle_cuts(&g, c));
        }
    }
}
