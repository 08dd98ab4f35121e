//! Small odd cuts used as parity constraints by the search.
//!
//! A perfect matching meets `∂(X)` an odd number of times whenever `|X|` is
//! odd, so every slot of a partial assignment must end up with an odd count
//! on each cut collected here.

use crate::multigraph::{EdgeId, Multigraph};

/// Orders up to this use exhaustive subset enumeration.
const EXHAUSTIVE_MAX_N: usize = 20;
/// Largest connected odd set collected on bigger graphs.
const CONNECTED_MAX_SIZE: usize = 5;
/// Keep at most this many cuts (the smallest boundaries win).
const MAX_CUTS: usize = 4096;

/// Odd sets `X` with `2 ≤ |X| ≤ n − 2` and `|∂(X)| ≤ limit`, as boundary edge
/// lists. `n` must be even.
pub(crate) fn small_odd_cuts(g: &Multigraph, limit: usize) -> Vec<Vec<EdgeId>> {
    let n = g.n();
    if n < 4 || n % 2 == 1 {
        return Vec::new();
    }
    let sides = if n <= EXHAUSTIVE_MAX_N { exhaustive(g, limit) } else { connected(g, limit) };
    let mut cuts: Vec<Vec<EdgeId>> = sides.into_iter().map(|inside| g.boundary_mask(&inside)).collect();
    cuts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cuts.dedup();
    cuts.truncate(MAX_CUTS);
    cuts
}

fn exhaustive(g: &Multigraph, limit: usize) -> Vec<Vec<bool>> {
    let n = g.n();
    let w = g.weight_matrix();
    let bits = n - 1;
    let mut inside = vec![false; n];
    let mut size = 0usize;
    let mut boundary = 0i64;
    let mut out = Vec::new();
    for i in 1u64..(1u64 << bits) {
        let v = i.trailing_zeros() as usize;
        let now_in = !inside[v];
        for x in 0..n {
            let mu = w[v * n + x] as i64;
            if mu > 0 {
                boundary += if inside[x] == now_in { -mu } else { mu };
            }
        }
        inside[v] = now_in;
        if now_in {
            size += 1;
        } else {
            size -= 1;
        }
        if size % 2 == 1 && size >= 3 && n - size >= 3 && boundary as usize <= limit {
            out.push(inside.clone());
        }
    }
    out
}

/// Connected odd sets of size 3..=5 by ESU-style extension (each set once).
fn connected(g: &Multigraph, limit: usize) -> Vec<Vec<bool>> {
    let n = g.n();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut out = Vec::new();
    let mut inside = vec![false; n];
    fn extend(
        g: &Multigraph,
        nbrs: &[Vec<usize>],
        root: usize,
        set: &mut Vec<usize>,
        inside: &mut [bool],
        ext: Vec<usize>,
        limit: usize,
        out: &mut Vec<Vec<bool>>,
    ) {
        if set.len() % 2 == 1 && set.len() >= 3 && g.n() - set.len() >= 3 && g.boundary_mask(inside).len() <= limit {
            out.push(inside.to_vec());
        }
        if set.len() == CONNECTED_MAX_SIZE {
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in &nbrs[w] {
                if u > root && !inside[u] && !next.contains(&u) && !set.iter().any(|&s| nbrs[s].contains(&u)) {
                    next.push(u);
                }
            }
            set.push(w);
            inside[w] = true;
            extend(g, nbrs, root, set, inside, next, limit, out);
            inside[w] = false;
            set.pop();
        }
    }
    for v in 0..n {
        let ext: Vec<usize> = nbrs[v].iter().copied().filter(|&u| u > v).collect();
        let mut set = vec![v];
        inside[v] = true;
        extend(g, &nbrs, v, &mut set, &mut inside, ext, limit, &mut out);
        inside[v] = false;
    }
    out
}
