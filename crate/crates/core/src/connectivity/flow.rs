//! Dinic max-flow on the undirected multiplicity network and the Gomory–Hu
//! tree built from it.

use std::collections::VecDeque;

use crate::multigraph::{Multigraph, VertexId};

/// Undirected network: one arc pair per adjacent vertex pair, capacity `μ`
/// in each direction (equivalent to unit capacity per edge instance).
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    n: usize,
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    base: Vec<u64>,
    cap: Vec<u64>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(g: &Multigraph) -> Self {
        let n = g.n();
        let w = g.weight_matrix();
        let mut net = FlowNetwork {
            n,
            head: vec![Vec::new(); n],
            to: Vec::new(),
            base: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        };
        for u in 0..n {
            for v in u + 1..n {
                let mu = w[u * n + v] as u64;
                if mu > 0 {
                    let a = net.to.len();
                    net.to.extend([v, u]);
                    net.base.extend([mu, mu]);
                    net.head[u].push(a);
                    net.head[v].push(a + 1);
                }
            }
        }
        net.cap = net.base.clone();
        net
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.head[x] {
                let y = self.to[a];
                if self.cap[a] > 0 && self.level[y] == u32::MAX {
                    self.level[y] = self.level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, x: usize, t: usize, pushed: u64) -> u64 {
        if x == t {
            return pushed;
        }
        while self.iter[x] < self.head[x].len() {
            let a = self.head[x][self.iter[x]];
            let y = self.to[a];
            if self.cap[a] > 0 && self.level[y] == self.level[x] + 1 {
                let got = self.dfs(y, t, pushed.min(self.cap[a]));
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            self.iter[x] += 1;
        }
        0
    }

    /// Maximum `s`–`t` flow, i.e. the number of edge-disjoint `s`–`t` paths.
    pub fn max_flow(&mut self, s: VertexId, t: VertexId) -> u64 {
        self.cap.copy_from_slice(&self.base);
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Source side of a minimum cut after the last `max_flow` call.
    pub fn source_side(&self, s: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.head[x] {
                let y = self.to[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

/// A Gomory–Hu cut tree: vertex `s > 0` hangs below `parent[s]` with an edge
/// of weight `weight[s]`; vertex 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GomoryHuTree {
    pub parent: Vec<VertexId>,
    pub weight: Vec<u64>,
}

impl GomoryHuTree {
    /// Gusfield's cut-tree construction: `n − 1` max-flow computations, no
    /// contraction, with the parent swap that keeps fundamental cuts minimal.
    pub fn build(g: &Multigraph) -> Self {
        let n = g.n();
        let mut net = FlowNetwork::new(g);
        let mut parent = vec![0; n];
        let mut weight = vec![0; n];
        for s in 1..n {
            let t = parent[s];
            let f = net.max_flow(s, t);
            weight[s] = f;
            let side = net.source_side(s);
            for i in 0..n {
                if i != s && side[i] && parent[i] == t {
                    parent[i] = s;
                }
            }
            if t != 0 && side[parent[t]] {
                parent[s] = parent[t];
                parent[t] = s;
                weight[s] = weight[t];
                weight[t] = f;
            }
        }
        GomoryHuTree { parent, weight }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Vertices on the `s` side when the tree edge `(s, parent[s])` is removed.
    pub fn fundamental_side(&self, s: VertexId) -> Vec<bool> {
        let n = self.n();
        let mut children = vec![Vec::new(); n];
        for v in 1..n {
            children[self.parent[v]].push(v);
        }
        let mut inside = vec![false; n];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            inside[x] = true;
            stack.extend(children[x].iter().copied());
        }
        inside
    }

    /// `λ(x, y)`: the minimum weight on the tree path.
    pub fn min_cut_value(&self, x: VertexId, y: VertexId) -> u64 {
        if x == y {
            return u64::MAX;
        }
        let depth = |mut v: usize| {
            let mut d = 0;
            while v != 0 {
                v = self.parent[v];
                d += 1;
            }
            d
        };
        let (mut a, mut b) = (x, y);
        let (mut da, mut db) = (depth(a), depth(b));
        let mut best = u64::MAX;
        while da > db {
            best = best.min(self.weight[a]);
            a = self.parent[a];
            da -= 1;
        }
        while db > da {
            best = best.min(self.weight[b]);
            b = self.parent[b];
            db -= 1;
        }
        while a != b {
            best = best.min(self.weight[a]).min(self.weight[b]);
            a = self.parent[a];
            b = self.parent[b];
        }
        best
    }

    /// All-pairs `λ` as a dense row-major matrix (diagonal is 0).
    pub fn all_pairs(&self) -> Vec<u64> {
        let n = self.n();
        let mut out = vec![0; n * n];
        let mut adj = vec![Vec::new(); n];
        for v in 1..n {
            adj[v].push((self.parent[v], self.weight[v]));
            adj[self.parent[v]].push((v, self.weight[v]));
        }
        for s in 0..n {
            let mut stack = vec![(s, usize::MAX, u64::MAX)];
            while let Some((x, from, m)) = stack.pop() {
                if x != s {
                    out[s * n + x] = m;
                }
                for &(y, w) in &adj[x] {
                    if y != from {
                        stack.push((y, x, m.min(w)));
                    }
                }
            }
        }
        out
    }
}

/// Number of pairwise edge-disjoint `u`–`w` paths.
pub(crate) fn local(g: &Multigraph, u: VertexId, w: VertexId) -> u64 {
    FlowNetwork::new(g).max_flow(u, w)
}
