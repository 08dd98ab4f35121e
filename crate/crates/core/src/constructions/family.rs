//! `P_k`, `Q_k`, `S_k` and `G_k`: (4k+2)-edge-connected (4k+2)-graphs built
//! around copies of `P_k` with the bundle at `u_1v_1` cut open.

use super::{ensure_regular_connected, GadgetOutput};
use crate::error::{invalid, Result};
use crate::multigraph::{Builder, Finished, Multigraph, VertexId};
use crate::petersen::{build_p_m, TypeCounts, U, V};

/// `P_k = P + k(M_0+M_1+M_2) + (k−1)M_5`.
pub fn build_pk(k: usize) -> Result<Multigraph> {
    Ok(build_p_m(&TypeCounts::p_k(k)?).graph)
}

fn labels_from(f: &Finished, label: impl Fn(usize, VertexId) -> String) -> Vec<String> {
    f.provenance.vertices.iter().map(|p| label(p.copy, p.item)).collect()
}

/// Two copies of `P_k` without their `u_1v_1` bundles, glued at `u_1`.
/// Marks `v1^1`, `v1^2` (each of degree `2k+1`) and the hub `uQ`.
pub fn build_qk(k: usize) -> Result<GadgetOutput> {
    let pk = build_pk(k)?;
    let mut b = Builder::new();
    let h1 = b.add_copy("P1", &pk);
    let h2 = b.add_copy("P2", &pk);
    b.remove_bundle(h1.vertex(V[0]), h1.vertex(U[0]));
    b.remove_bundle(h2.vertex(V[0]), h2.vertex(U[0]));
    b.identify(h1.vertex(U[0]), h2.vertex(U[0]));
    let f = b.finish();
    let hub = f.vertex(h1.vertex(U[0]));
    let src = pk.labels().expect("labelled").to_vec();
    let mut labels = labels_from(&f, |c, v| format!("{}^{}", src[v], c + 1));
    labels[hub] = "uQ".into();
    let graph = f.graph.clone().with_labels(labels)?;
    let mut out = GadgetOutput::plain(graph, f.provenance.clone());
    out.mark("v1^1", vec![f.vertex(h1.vertex(V[0]))]);
    out.mark("v1^2", vec![f.vertex(h2.vertex(V[0]))]);
    out.mark("uQ", vec![hub]);
    Ok(out)
}

/// `Q_k + (2k+1){v_1^1v_1^2}`, designating the added bundle as `closure`.
pub fn build_qk_closure(k: usize) -> Result<GadgetOutput> {
    let q = build_qk(k)?;
    let (a, c) = (q.vertex("v1^1").expect("marked"), q.vertex("v1^2").expect("marked"));
    let mut b = Builder::new();
    let h = b.add_copy("Q", &q.graph);
    let added = b.add_edges(h.vertex(a), h.vertex(c), 2 * k + 1);
    let f = b.finish();
    let graph = f.graph.clone().with_labels(q.graph.labels().expect("labelled").to_vec())?;
    let mut out = GadgetOutput::plain(graph, f.provenance.clone());
    out.designate("closure", f.edges(&added));
    out.marked = q.marked;
    Ok(out)
}

/// Vertex numbering of `S_k`: `x_i = 3(i−1)`, `y_i = 3(i−1)+1`,
/// `z_i = 3(i−1)+2` for `i = 1..=4k+2`, and `w` last.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkLayout {
    pub k: usize,
}

impl SkLayout {
    /// `4k+2`.
    pub fn len(&self) -> usize {
        4 * self.k + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn idx(&self, i: usize) -> usize {
        (i - 1) % self.len()
    }

    pub fn x(&self, i: usize) -> VertexId {
        3 * self.idx(i)
    }

    pub fn y(&self, i: usize) -> VertexId {
        3 * self.idx(i) + 1
    }

    pub fn z(&self, i: usize) -> VertexId {
        3 * self.idx(i) + 2
    }

    pub fn w(&self) -> VertexId {
        3 * self.len()
    }

    pub fn n(&self) -> usize {
        3 * self.len() + 1
    }

    /// `D_k` (`y_ix_{i+1}`) followed by `E_k` (`z_iz_{i+2k+1}`).
    pub fn de_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let d = (1..=self.len()).map(|i| (self.y(i), self.x(i + 1)));
        let e = (1..=2 * self.k + 1).map(|i| (self.z(i), self.z(i + 2 * self.k + 1)));
        d.chain(e).collect()
    }
}

/// `S_k` with edge set `A ∪ kB ∪ (k+1)C ∪ (2k+1)(D ∪ E)`, listed in that
/// order.
pub fn build_sk(k: usize) -> Result<Multigraph> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let s = SkLayout { k };
    let n = s.len();
    let mut e = Vec::new();
    e.extend((1..=n).map(|i| (s.w(), s.z(i))));
    for _ in 0..k {
        for i in 1..=n {
            e.push((s.z(i), s.x(i)));
            e.push((s.z(i), s.y(i)));
        }
    }
    for _ in 0..=k {
        e.extend((1..=n).map(|i| (s.x(i), s.y(i))));
    }
    for _ in 0..2 * k + 1 {
        e.extend(s.de_pairs());
    }
    let mut labels = Vec::with_capacity(s.n());
    for i in 1..=n {
        labels.extend([format!("x{i}"), format!("y{i}"), format!("z{i}")]);
    }
    labels.push("w".into());
    Multigraph::new(s.n(), e)?.with_labels(labels)
}

/// `G_k`: every `t`-bundle `uv` of `S_k` over `D_k ∪ E_k` (`t = 2k+1`) is
/// replaced by a copy `Q<j>` of `Q_k` joined to `u` at `v_1^1` and to `v` at
/// `v_1^2` by `t` edges each.
///
/// Designated: `A` (the edges at `w`), `E1/<j>` and `E2/<j>`. Marked: `w`,
/// `triple/<i>` = `{x_i, y_i, z_i}`, `Q<j>` and its `Q<j>/v1^1`, `Q<j>/v1^2`.
pub fn build_gk(k: usize) -> Result<GadgetOutput> {
    let sk = build_sk(k)?;
    let s = SkLayout { k };
    let q = build_qk(k)?;
    let (q1, q2) = (q.vertex("v1^1").expect("marked"), q.vertex("v1^2").expect("marked"));
    let t = 2 * k + 1;
    let mut b = Builder::new();
    let base = b.add_copy("S", &sk);
    let mut attachments = Vec::new();
    let mut handles = Vec::new();
    for (j, &(u, v)) in s.de_pairs().iter().enumerate() {
        b.remove_bundle(base.vertex(u), base.vertex(v));
        let h = b.add_copy(format!("Q{j}"), &q.graph);
        let e1 = b.add_edges(base.vertex(u), h.vertex(q1), t);
        let e2 = b.add_edges(base.vertex(v), h.vertex(q2), t);
        attachments.push((e1, e2));
        handles.push(h);
    }
    let f = b.finish();
    let s_labels = sk.labels().expect("labelled").to_vec();
    let q_labels = q.graph.labels().expect("labelled").to_vec();
    let labels = labels_from(&f, |c, v| if c == 0 { s_labels[v].clone() } else { format!("Q{}.{}", c - 1, q_labels[v]) });
    let graph = f.graph.clone().with_labels(labels)?;
    let mut out = GadgetOutput::plain(graph, f.provenance.clone());
    out.designate("A", f.edges(sk.incident(s.w())));
    for (j, (e1, e2)) in attachments.iter().enumerate() {
        out.designate(format!("E1/{j}"), f.edges(e1));
        out.designate(format!("E2/{j}"), f.edges(e2));
        let h = &handles[j];
        out.mark(format!("Q{j}"), h.vertices().map(|v| f.vertex(v)).collect());
        out.mark(format!("Q{j}/v1^1"), vec![f.vertex(h.vertex(q1))]);
        out.mark(format!("Q{j}/v1^2"), vec![f.vertex(h.vertex(q2))]);
    }
    out.mark("w", vec![f.vertex(base.vertex(s.w()))]);
    for i in 1..=s.len() {
        out.mark(format!("triple/{i}"), [s.x(i), s.y(i), s.z(i)].iter().map(|&v| f.vertex(base.vertex(v))).collect());
    }
    let r = 4 * k + 2;
    ensure_regular_connected(&out.graph, r, "G_k")?;
    if out.graph.n() % 2 == 1 {
        return Err(crate::Error::Internal("G_k has odd order".into()));
    }
    Ok(out)
}

/// Removes the `t`-bundles `uv` of `G` and `u'v'` of `G'` and joins `u`–`u'`
/// and `v`–`v'` by `t` edges each. Designates `uu'` and `vv'`.
pub fn edge_swap_join(
    g: &Multigraph,
    u: VertexId,
    v: VertexId,
    h: &Multigraph,
    u2: VertexId,
    v2: VertexId,
    t: usize,
) -> Result<GadgetOutput> {
    if u.max(v) >= g.n() || u2.max(v2) >= h.n() || u == v || u2 == v2 {
        return invalid("join vertices must be distinct vertices of their graphs");
    }
    let (m1, m2) = (g.mu(u, v), h.mu(u2, v2));
    if t == 0 || m1 != t || m2 != t {
        return invalid(format!("multiplicities {m1} and {m2} do not both equal t = {t}"));
    }
    let mut b = Builder::new();
    let a = b.add_copy("G", g);
    let c = b.add_copy("G'", h);
    b.remove_bundle(a.vertex(u), a.vertex(v));
    b.remove_bundle(c.vertex(u2), c.vertex(v2));
    let uu = b.add_edges(a.vertex(u), c.vertex(u2), t);
    let vv = b.add_edges(a.vertex(v), c.vertex(v2), t);
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph.clone(), f.provenance.clone());
    out.designate("uu'", f.edges(&uu));
    out.designate("vv'", f.edges(&vv));
    Ok(out)
}
