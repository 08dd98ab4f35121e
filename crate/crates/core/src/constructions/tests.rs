use std::collections::VecDeque;

use super::*;
use crate::connectivity::{is_r_graph, vertex_connectivity_at_least};
use crate::matching::{enumerate_perfect_matchings, find_pdpm, Budget, Constraints, SearchOptions};
use crate::multigraph::Matching;
use crate::par::Workers;
use crate::petersen::{check_lemma_2_2, petersen, TypeCounts};

// Edmonds–Karp on a capacity matrix. Deliberately unrelated to the
// connectivity module so that builder checks are cross-examined.
fn max_flow(g: &Multigraph, s: usize, t: usize) -> u64 {
    let n = g.n();
    let mut cap = vec![0i64; n * n];
    for (_, a, b) in g.edges() {
        cap[a * n + b] += 1;
        cap[b * n + a] += 1;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for y in 0..n {
                if prev[y] == usize::MAX && cap[x * n + y] > 0 {
                    prev[y] = x;
                    q.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            cap[x * n + y] -= 1;
            cap[y * n + x] += 1;
            y = x;
        }
        flow += 1;
    }
}

fn oracle_connectivity(g: &Multigraph) -> u64 {
    (1..g.n()).map(|t| max_flow(g, 0, t)).min().unwrap_or(0)
}

// Minimum over all bipartitions; only for n ≤ 12.
fn brute_connectivity(g: &Multigraph) -> usize {
    let n = g.n();
    assert!(n <= 12);
    (1u32..(1 << (n - 1)))
        .map(|mask| g.edges().filter(|&(_, a, b)| (mask >> a & 1) != (mask >> b & 1)).count())
        .min()
        .unwrap()
}

fn all_pairs_oracle(g: &Multigraph, skip: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if a != skip && b != skip {
                out.push(max_flow(g, a, b));
            }
        }
    }
    out
}

fn mu_of(g: &Multigraph, labels: (&str, &str)) -> usize {
    let l = g.labels().unwrap();
    let find = |s: &str| l.iter().position(|x| x == s).unwrap();
    g.mu(find(labels.0), find(labels.1))
}

#[test]
fn pk_degrees_and_connectivity() {
    let p1 = build_pk(1).unwrap();
    assert!(p1.is_regular(6));
    assert_eq!(p1.m(), 30);
    assert_eq!(p1.max_multiplicity(), 3);
    assert_eq!(brute_connectivity(&p1), 6);
    let p2 = build_pk(2).unwrap();
    assert!(p2.is_regular(10));
    assert_eq!(p2.max_multiplicity(), 5);
    assert!(build_pk(0).is_err());
}

#[test]
fn qk_shape() {
    let q = build_qk(1).unwrap();
    assert_eq!(q.graph.n(), 19);
    let hub = q.vertex("uQ").unwrap();
    assert_eq!(q.graph.degree(hub), 6);
    let (a, b) = (q.vertex("v1^1").unwrap(), q.vertex("v1^2").unwrap());
    for v in 0..19 {
        let want = if v == a || v == b { 3 } else { 6 };
        assert_eq!(q.graph.degree(v), want, "vertex {v}");
    }
    let closure = build_qk_closure(1).unwrap();
    assert!(closure.graph.is_regular(6));
    assert_eq!(oracle_connectivity(&closure.graph), 6);
    assert_eq!(closure.edges("closure").len(), 3);

    let q2 = build_qk(2).unwrap();
    // The removed bundle had multiplicity 2k+1 = 5 in each copy.
    assert_eq!(q2.graph.degree(q2.vertex("v1^1").unwrap()), 10 - 5);
    assert_eq!(q2.graph.m(), 2 * (build_pk(2).unwrap().m() - 5));
    assert!(build_qk(0).is_err());
}

#[test]
fn sk_shape() {
    let s1 = build_sk(1).unwrap();
    assert_eq!(s1.n(), 19);
    assert!(s1.is_regular(6));
    assert_eq!(oracle_connectivity(&s1), 6);
    // z_i: one edge to w, k to each of x_i and y_i, 2k+1 along E.
    assert_eq!(mu_of(&s1, ("w", "z1")), 1);
    assert_eq!(mu_of(&s1, ("z1", "x1")) + mu_of(&s1, ("z1", "y1")), 2);
    assert_eq!(mu_of(&s1, ("z1", "z4")), 3);
    assert_eq!(mu_of(&s1, ("x1", "y1")), 2);
    assert_eq!(mu_of(&s1, ("y6", "x1")), 3);
    let s2 = build_sk(2).unwrap();
    assert_eq!(s2.n(), 31);
    assert!(s2.is_regular(10));
    assert!(build_sk(0).is_err());
}

#[test]
fn g1_shape() {
    let g = build_gk(1).unwrap();
    assert_eq!(g.graph.n(), 19 + 19 * 9);
    assert_eq!(g.graph.n(), 190);
    assert!(g.graph.is_regular(6));
    assert_eq!(oracle_connectivity(&g.graph), 6);
    assert!(is_r_graph(&g.graph, 6).unwrap().holds());
    assert_eq!(g.edges("A").len(), 6);
    for j in 0..9 {
        assert_eq!(g.edges(&format!("E1/{j}")).len(), 3);
        assert_eq!(g.vertices(&format!("Q{j}")).len(), 19);
    }
}

fn doubled_triangle() -> Multigraph {
    Multigraph::new(3, [(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)]).unwrap()
}

#[test]
fn swap_join() {
    let t = doubled_triangle();
    let j = edge_swap_join(&t, 0, 1, &t, 0, 1, 2).unwrap();
    assert!(j.graph.is_regular(4));
    assert_eq!(brute_connectivity(&j.graph), 4);
    assert_eq!(j.edges("uu'").len(), 2);
    assert!(edge_swap_join(&t, 0, 1, &t, 0, 1, 3).is_err());

    let c = build_qk_closure(1).unwrap();
    let (a, b) = (c.vertex("v1^1").unwrap(), c.vertex("v1^2").unwrap());
    let j = edge_swap_join(&c.graph, a, b, &c.graph, a, b, 3).unwrap();
    assert!(j.graph.is_regular(6));
    assert_eq!(oracle_connectivity(&j.graph), 6);
}

#[test]
fn replace_k6_by_k6() {
    let k6 = Multigraph::complete(6);
    let out = replace_vertex(&k6, 0, &k6, 0, None).unwrap();
    assert_eq!(out.graph.n(), 10);
    assert!(out.graph.is_regular(5));
    assert_eq!(brute_connectivity(&out.graph), 5);
    assert!(vertex_connectivity_at_least(&out.graph, 3).unwrap().holds());
    assert_eq!(out.edges("joined").len(), 5);

    let k5 = Multigraph::complete(5);
    assert!(replace_vertex(&k6, 0, &k5, 0, None).is_err());
}

#[test]
fn wheel_substitution_gives_three_rim_neighbours() {
    let k6 = Multigraph::complete(6);
    let out = replace_vertex(&k6, 0, &wheel(), WHEEL_HUB, None).unwrap();
    assert!(out.graph.is_regular(5));
    let wheel_copy = out.provenance.copy_index("H").unwrap();
    for v in out.provenance.vertices_of_copy(wheel_copy) {
        assert_eq!(out.graph.neighbors(v).len(), 3);
    }
}

#[test]
fn cycle_gadget_multiplicities() {
    let g5 = gadget_cycle(5).unwrap();
    assert_eq!(g5.graph.n(), 12);
    for i in 0..10 {
        assert_eq!(g5.graph.mu(i, (i + 1) % 10), 2);
    }
    assert_eq!(brute_connectivity(&g5.graph), 5);

    let g4 = gadget_cycle(4).unwrap();
    for i in 0..8 {
        assert_eq!(g4.graph.mu(i, (i + 1) % 8), if i % 2 == 0 { 2 } else { 1 });
    }
    assert!(g4.graph.is_regular(4));
    assert!(gadget_cycle(2).is_err());
}

fn k6_edge_at_0() -> (Multigraph, EdgeId) {
    let k6 = Multigraph::complete(6);
    let e = k6.incident(0)[0];
    (k6, e)
}

#[test]
fn cycle_embed_k6() {
    let (k6, e) = k6_edge_at_0();
    let h = gadget_cycle_embed(&k6, 0, e, 5).unwrap();
    assert_eq!(h.graph.n(), 7 + 5 * 5);
    assert_eq!(oracle_connectivity(&h.graph), 5);
    assert!(vertex_connectivity_at_least(&h.graph, 3).unwrap().holds());
    assert_eq!(h.edges("tracked").len(), 5);
    // Every perfect matching meets each copy's cut exactly once.
    let copies: Vec<Vec<VertexId>> = (1..=9).step_by(2).map(|i| h.vertices(&format!("G{i}")).to_vec()).collect();
    let mut seen = 0;
    for m in enumerate_perfect_matchings(&h.graph).take(200) {
        for c in &copies {
            assert_eq!(h.graph.boundary(c).iter().filter(|e| m.contains(**e)).count(), 1);
        }
        seen += 1;
    }
    assert!(seen > 0);

    let (k5, f) = (Multigraph::complete(5), Multigraph::complete(5).incident(0)[0]);
    let h4 = gadget_cycle_embed(&k5, 0, f, 4).unwrap();
    assert!(h4.graph.is_regular(4));
    assert_eq!(oracle_connectivity(&h4.graph), 4);
}

#[test]
fn k4_gadgets() {
    let k5 = gadget_k4(5).unwrap();
    assert_eq!(k5.graph.mu(0, 1), 2);
    assert_eq!(k5.graph.mu(1, 2), 2);
    assert_eq!(k5.graph.mu(0, 2), 1);
    assert!(k5.graph.is_regular(5));
    let k4 = gadget_k4(4).unwrap();
    assert_eq!((k4.graph.mu(0, 1), k4.graph.mu(1, 2), k4.graph.mu(0, 2)), (2, 1, 1));
    assert!(k4.graph.is_regular(4));

    let (k6, e) = k6_edge_at_0();
    assert_eq!(k4_attachment_count(5, 3), 2);
    let at0 = stub_order(&k6, 0);
    let chosen: Vec<EdgeId> = at0.iter().copied().filter(|&x| x != e).take(2).collect();
    let h = gadget_k4_embed(&k6, 0, e, &chosen, 3).unwrap();
    assert!(h.graph.is_regular(5));
    assert_eq!(oracle_connectivity(&h.graph), 5);
    assert_eq!(h.edges("attach_u2").len(), 4);
    assert!(gadget_k4_embed(&k6, 0, e, &chosen[..1], 3).is_err());
}

#[test]
fn halfstar_k6() {
    let k6 = Multigraph::complete(6);
    let h = gadget_halfstar(&k6, 0, 2).unwrap();
    assert_eq!(h.graph.n(), 10);
    assert!(h.graph.is_regular(5));
    assert_eq!(brute_connectivity(&h.graph), 5);
    let single = h.edges("single")[0];
    let (e1, e2) = (h.edges("E1").to_vec(), h.edges("E2").to_vec());
    let avoiding: Vec<Matching> = enumerate_perfect_matchings(&h.graph).filter(|m| !m.contains(single)).collect();
    assert!(!avoiding.is_empty());
    for m in &avoiding {
        assert_eq!(e1.iter().chain(&e2).filter(|&&e| m.contains(e)).count() % 2, 1);
    }
    // Inside a 3-PDPM avoiding the single edge each member meets E1 ∪ E2
    // once, so the union covers all of E1 or all of E2.
    let disjoint = |a: &Matching, b: &Matching| a.edges().iter().all(|&e| !b.contains(e));
    let mut triples = 0;
    for (i, a) in avoiding.iter().enumerate() {
        for (j, b) in avoiding.iter().enumerate().skip(i + 1) {
            if !disjoint(a, b) {
                continue;
            }
            for c in avoiding.iter().skip(j + 1).filter(|c| disjoint(a, c) && disjoint(b, c)) {
                for m in [a, b, c] {
                    assert_eq!(e1.iter().chain(&e2).filter(|&&e| m.contains(e)).count(), 1);
                }
                let used = |e: &EdgeId| a.contains(*e) || b.contains(*e) || c.contains(*e);
                assert!(e1.iter().all(used) || e2.iter().all(used));
                triples += 1;
            }
        }
    }
    assert!(triples > 0);
    assert!(gadget_halfstar(&k6, 0, 0).is_err());
    assert!(gadget_halfstar(&Multigraph::complete(5), 0, 2).is_err());
}

fn petersen_plus_two_factor() -> (Multigraph, EdgeId) {
    let p = petersen();
    // Spokes are edges 5..10; doubling the rest adds a 2-factor.
    let mut pairs: Vec<(usize, usize)> = p.edges().map(|(_, a, b)| (a, b)).collect();
    pairs.extend(p.edges().filter(|&(e, _, _)| !(5..10).contains(&e)).map(|(_, a, b)| (a, b)));
    (Multigraph::new(10, pairs).unwrap(), 5)
}

#[test]
fn wheel_caps_are_underlying_cubic() {
    let (g, spoke) = petersen_plus_two_factor();
    assert!(g.is_underlying_cubic());
    let (v, _) = g.endpoints(spoke);
    let hp = gadget_cycle_embed(&g, v, spoke, 5).unwrap();
    let caps = gadget_wheel_caps(&hp).unwrap();
    assert_eq!(caps.graph.n(), hp.graph.n() - 2 + 10);
    assert!(caps.graph.is_underlying_cubic());
    assert_eq!(oracle_connectivity(&caps.graph), 5);
    assert_eq!(caps.edges("tracked").len(), 5);

    let (k6, e) = k6_edge_at_0();
    let not_cubic = gadget_cycle_embed(&k6, 0, e, 5).unwrap();
    assert!(gadget_wheel_caps(&not_cubic).is_err());
}

#[test]
fn lifting_doubled_c4() {
    let (c4, _) = Multigraph::cycle(4).doubled().unwrap();
    for v in 0..4 {
        let (x, y) = find_admissible_lifting(&c4, v).unwrap();
        let l = lift(&c4, v, x, y).unwrap();
        assert_eq!(all_pairs_oracle(&c4, v), all_pairs_oracle(&l.graph, v));
    }
}

#[test]
fn lifting_removes_one_instance_per_endpoint() {
    let (c4, _) = Multigraph::cycle(4).doubled().unwrap();
    let l = lift(&c4, 0, 1, 3).unwrap();
    assert_eq!(l.graph.m(), c4.m() - 1);
    assert_eq!(l.graph.mu(0, 1), 1);
    assert_eq!(l.graph.mu(0, 3), 1);
    assert_eq!(l.graph.mu(1, 3), 1);
    assert!(lift(&c4, 0, 1, 1).is_err());
}

#[test]
fn lifting_needs_connected_remainder() {
    // v = 0 joined twice to each of 1 and 2, which are otherwise apart.
    let g = Multigraph::new(3, [(0, 1), (0, 1), (0, 2), (0, 2)]).unwrap();
    assert!(matches!(find_admissible_lifting(&g, 0), Err(crate::Error::Precondition(_))));
}

#[test]
fn cut_coefficient_formula() {
    assert_eq!(cut_coefficients([2, 2, 2]).unwrap(), (1, 1, 1));
    assert_eq!(cut_coefficients([3, 2, 1]).unwrap(), (2, 0, 1));
    assert!(cut_coefficients([1, 1, 1]).is_err());
    assert!(cut_coefficients([4, 0, 0]).is_err());
}

fn quick() -> SearchOptions {
    SearchOptions::with_budget(Budget::nodes(2_000_000))
}

#[test]
fn planted_split_and_combine() {
    let mut combined = 0;
    for seed in 0..6 {
        let p = planted_three_cut(seed).unwrap();
        assert_eq!(planted_three_cut(seed).unwrap().graph, p.graph);
        assert_eq!(oracle_connectivity(&p.graph), 5);
        let s = split_on_3cut(&p.graph, p.x).unwrap();
        assert_eq!(s.a_side, p.a_side);
        assert_eq!(2 * (s.a + s.b + s.c), s.n.iter().sum::<usize>());
        assert!(s.h1.is_regular(5));
        assert_eq!(oracle_connectivity(&s.h1), 5);
        assert!(s.h2.is_regular(5));
        assert_eq!(oracle_connectivity(&s.h2), 5);
        assert_eq!(s.liftings.len(), (s.h_prime.degree(s.u) - 5) / 2);
        assert_eq!(s.lifting_edges().len(), s.liftings.len());
        let r1 = find_pdpm(&s.h1, 5, &Constraints::none(), &quick()).unwrap();
        let r2 = find_pdpm(&s.h2, 5, &Constraints::none(), &quick()).unwrap();
        if let (Some(w1), Some(w2)) = (r1.witness(), r2.witness()) {
            let c = combine_pdpm(&s, &p.graph, w1, w2, &quick()).unwrap();
            assert!(c.witness.verify(&p.graph).is_ok());
            assert_eq!(c.witness.k(), 5);
            combined += 1;
        }
    }
    assert!(combined > 0);
}

#[test]
fn split_rejects_non_cuts() {
    let p = planted_three_cut(1).unwrap();
    let not_cut = [p.a_side[0], p.x[0], p.x[1]];
    assert!(split_on_3cut(&p.graph, not_cut).is_err());
    assert!(split_on_3cut(&p.graph, [p.x[0], p.x[0], p.x[1]]).is_err());
}

#[test]
fn pullback_cycle_embed_tracks_both_ways() {
    let (k6, e) = k6_edge_at_0();
    let h = gadget_cycle_embed(&k6, 0, e, 5).unwrap();
    let w = find_pdpm(&h.graph, 2, &Constraints::none(), &quick()).unwrap().witness().cloned().unwrap();
    let pulls = pullback_pdpm(&h, &w).unwrap();
    assert_eq!(pulls.len(), 5);
    for p in &pulls {
        let pw = p.witness.as_ref().unwrap();
        assert!(pw.verify(&k6).is_ok());
    }
    assert!(pulls.iter().any(|p| p.contains_tracked() == Some(true)));
    assert!(pulls.iter().any(|p| p.contains_tracked() == Some(false)));
}

#[test]
fn pullback_halfstar_contains_first_stubs() {
    let k6 = Multigraph::complete(6);
    let k = 2;
    let h = gadget_halfstar(&k6, 0, k).unwrap();
    let single = h.edges("single").to_vec();
    let cons = Constraints::none().avoiding(single);
    let w = find_pdpm(&h.graph, 2 * k - 1, &cons, &quick()).unwrap().witness().cloned().unwrap();
    let pulls = pullback_pdpm(&h, &w).unwrap();
    let stubs = stub_order(&k6, 0);
    let first: Vec<EdgeId> = stubs[..k].to_vec();
    assert!(pulls.iter().any(|p| {
        let u = p.witness.as_ref().unwrap().union();
        first.iter().all(|e| u.contains(e))
    }));
}

#[test]
fn pullback_of_empty_witness_is_empty() {
    let (k6, e) = k6_edge_at_0();
    let h = gadget_cycle_embed(&k6, 0, e, 5).unwrap();
    let w = crate::matching::PdpmWitness { matchings: Vec::new(), constraints: Constraints::none() };
    for p in pullback_pdpm(&h, &w).unwrap() {
        assert_eq!(p.witness.unwrap().k(), 0);
    }
}

#[test]
fn pullback_rejects_foreign_witness() {
    let (k6, e) = k6_edge_at_0();
    let h = gadget_cycle_embed(&k6, 0, e, 5).unwrap();
    let w = crate::matching::PdpmWitness { matchings: vec![Matching::new(vec![0])], constraints: Constraints::none() };
    assert!(pullback_pdpm(&h, &w).is_err());
}

fn g1_lemma() -> crate::petersen::Lemma22Report {
    check_lemma_2_2(&TypeCounts::p_k(1).unwrap(), None, Workers::ALL).unwrap()
}

#[test]
fn g1_certificate_issues() {
    let g = build_gk(1).unwrap();
    let cert = certify_gk(&g, 1, &g1_lemma()).unwrap();
    assert!(cert.verified, "{:?}", cert.failures);
    assert_eq!(cert.q_copies_checked, 9);
    assert_eq!(cert.triples.len(), 6);
    for t in &cert.triples {
        assert_eq!(t.w_edges, 1);
        assert_eq!(t.attachment_sets.len(), 3);
        assert_eq!(t.forced, 7);
        assert!(t.contradicts());
    }
}

#[test]
fn g1_certificate_rejects_wrong_lemma_family() {
    let g = build_gk(1).unwrap();
    let other = check_lemma_2_2(&TypeCounts::from_types(&[0, 1, 3]).unwrap(), None, Workers::ALL).unwrap();
    let cert = certify_gk(&g, 1, &other).unwrap();
    assert!(!cert.verified);
}

/// `G_1` with `Q0` swapped for two vertices `p`, `q` joined by three edges,
/// `p` taking `E1/0` and `q` taking `E2/0`.
fn g1_with_theta() -> GadgetOutput {
    let g = build_gk(1).unwrap();
    let q0 = g.vertices("Q0").to_vec();
    let inside = g.graph.membership(&q0);
    let outer = |e: EdgeId| {
        let (a, b) = g.graph.endpoints(e);
        if inside[a] {
            b
        } else {
            a
        }
    };
    let (x1, x2) = (outer(g.edges("E1/0")[0]), outer(g.edges("E2/0")[0]));
    let mut b = crate::multigraph::Builder::new();
    let h = b.add_copy("G1", &g.graph);
    for &v in &q0 {
        b.remove_vertex(h.vertex(v));
    }
    let theta = b.add_copy("theta", &Multigraph::theta(3));
    let e1 = b.add_edges(h.vertex(x1), theta.vertex(0), 3);
    let e2 = b.add_edges(h.vertex(x2), theta.vertex(1), 3);
    let f = b.finish();
    let mut out = GadgetOutput::plain(f.graph.clone(), compose(&f.provenance, h.copy, &g.provenance));
    for (name, es) in &g.designated {
        if name == "E1/0" || name == "E2/0" {
            continue;
        }
        out.designate(name.clone(), es.iter().map(|&e| f.edge(h.edge(e))).collect());
    }
    out.designate("E1/0", f.edges(&e1));
    out.designate("E2/0", f.edges(&e2));
    for (name, vs) in &g.marked {
        out.mark(name.clone(), vs.iter().filter_map(|&v| f.vertex_map[h.vertex(v)]).collect());
    }
    out.mark("Q0", vec![f.vertex(theta.vertex(0)), f.vertex(theta.vertex(1))]);
    out
}

#[test]
fn g1_certificate_rejects_theta_copy() {
    let tampered = g1_with_theta();
    assert!(tampered.graph.is_regular(6));
    let cert = certify_gk(&tampered, 1, &g1_lemma()).unwrap();
    assert!(!cert.verified);
    assert_eq!(cert.q_copies_checked, 8);
}

#[test]
fn gk_witness_search_is_informational() {
    // A short budget either exhausts or decides; it must not error.
    let g = build_gk(1).unwrap();
    let r = find_pdpm(&g.graph, 4, &Constraints::none(), &SearchOptions::with_budget(Budget::nodes(2000))).unwrap();
    assert!(r.witness().is_none());
}
