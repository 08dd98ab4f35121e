//! Witness checking that shares no code with the search: every property is
//! recounted from the raw endpoint list.

use super::Constraints;
use crate::multigraph::{Matching, Multigraph};

/// `Ok(())` iff `matchings` is a k-PDPM of `g` meeting `constraints`;
/// otherwise the first violated property.
pub fn verify_pdpm(g: &Multigraph, k: usize, constraints: &Constraints, matchings: &[Matching]) -> Result<(), String> {
    if matchings.len() != k {
        return Err(format!("expected {k} matchings, got {}", matchings.len()));
    }
    let n = g.n();
    let m = g.m();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    for (i, mat) in matchings.iter().enumerate() {
        let mut hits = vec![0u32; n];
        for &e in mat.edges() {
            if e >= m {
                return Err(format!("matching {i} names edge {e} but the graph has {m}"));
            }
            if let Some(j) = owner[e] {
                return Err(format!("edge {e} is in matchings {j} and {i}"));
            }
            owner[e] = Some(i);
            let (u, v) = g.endpoints(e);
            hits[u] += 1;
            hits[v] += 1;
        }
        if let Some(v) = (0..n).find(|&v| hits[v] != 1) {
            return Err(format!("matching {i} covers vertex {v} {} times", hits[v]));
        }
    }
    for &e in &constraints.contain {
        if e >= m || owner[e].is_none() {
            return Err(format!("required edge {e} is in no matching"));
        }
    }
    for &e in &constraints.avoid {
        if e < m && owner[e].is_some() {
            return Err(format!("avoided edge {e} is used"));
        }
    }
    for &(e, s) in &constraints.slots {
        if e >= m || owner[e] != Some(s) {
            return Err(format!("edge {e} must sit in matching {s}"));
        }
    }
    Ok(())
}

/// Whether every listed set is a perfect matching of `g`, recounted directly.
pub fn is_perfect_matching(g: &Multigraph, edges: &[usize]) -> bool {
    let mut hits = vec![0u32; g.n()];
    for &e in edges {
        if e >= g.m() {
            return false;
        }
        let (u, v) = g.endpoints(e);
        hits[u] += 1;
        hits[v] += 1;
    }
    hits.iter().all(|&h| h == 1)
}
