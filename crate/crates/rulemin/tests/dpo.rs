//! DPO engine tests: application and the dangling condition, induced rules,
//! the subrule order on a hand-built chain of edge-rewiring rules, minimal
//! subrules, and the vertex bookkeeping property.

mod common;

use std::sync::Arc;

use rand::prelude::*;
use rand::rngs::StdRng;

use common::{flat_poset, random_graph, random_rule};
use rulemin::graph::{Graph, VertexId};
use rulemin::label::LabelPoset;
use rulemin::morphism::{enumerate_monomorphisms, GraphMap, MatchOptions};
use rulemin::rewrite::{apply, enumerate_derivations, is_subrule, ApplyError};
use rulemin::rule::{rules_isomorphic, Rule};

fn poset() -> Arc<LabelPoset> {
    flat_poset(&["w", "b", "r", "g", "h", "-"])
}

/// The edge-rewiring chain: `p` moves the white-black edge to a white-red
/// edge inside extra context (g adjacent to w, h adjacent to b), `p1` drops
/// one context vertex, `p0` is the bare action, and `p2` deletes the edge
/// without reconnecting.
fn figure_rules() -> (Rule, Rule, Rule, Rule) {
    let p = rule_from_parts(
        (&["w", "b", "r", "g", "h"], &[(0, 1), (3, 0), (4, 1)]),
        &[0, 1, 2, 3, 4],
        &[1, 2],
        &[],
        &[(0, 2)],
    );
    let p1 = rule_from_parts(
        (&["w", "b", "r", "g"], &[(0, 1), (3, 0)]),
        &[0, 1, 2, 3],
        &[1],
        &[],
        &[(0, 2)],
    );
    let p0 = rule_from_parts(
        (&["w", "b", "r"], &[(0, 1)]),
        &[0, 1, 2],
        &[],
        &[],
        &[(0, 2)],
    );
    let p2 = rule_from_parts(
        (&["w", "b", "r", "g", "h"], &[(0, 1), (3, 0), (4, 1)]),
        &[0, 1, 2, 3, 4],
        &[1, 2],
        &[],
        &[],
    );
    (p, p1, p0, p2)
}

fn rule_from_parts(
    left: (&[&str], &[(usize, usize)]),
    kept_v: &[usize],
    kept_e: &[usize],
    created_v: &[&str],
    right_extra_edges: &[(usize, usize)],
) -> Rule {
    let p = poset();
    let mut lb = Graph::builder(p.clone());
    for l in left.0 {
        lb.add_vertex_named(l).unwrap();
    }
    for &(s, t) in left.1 {
        lb.add_edge_named(VertexId(s as u32), VertexId(t as u32), "-", false)
            .unwrap();
    }
    let lg = lb.build_arc().unwrap();

    let mut kb = Graph::builder(p.clone());
    let mut l_of_k = Vec::new();
    for &i in kept_v {
        kb.add_vertex_named(left.0[i]).unwrap();
        l_of_k.push(i);
    }
    let kpos = |lv: usize| l_of_k.iter().position(|&x| x == lv).unwrap();
    let mut k_edges = Vec::new();
    for &ei in kept_e {
        let (s, t) = left.1[ei];
        let ke = kb
            .add_edge_named(
                VertexId(kpos(s) as u32),
                VertexId(kpos(t) as u32),
                "-",
                false,
            )
            .unwrap();
        k_edges.push((ke, ei));
    }
    let kg = kb.build_arc().unwrap();

    let mut rb = Graph::builder(p.clone());
    for &i in kept_v {
        rb.add_vertex_named(left.0[i]).unwrap();
    }
    for l in created_v {
        rb.add_vertex_named(l).unwrap();
    }
    let mut r_edge_of_k = Vec::new();
    for &ei in kept_e {
        let (s, t) = left.1[ei];
        let re = rb
            .add_edge_named(
                VertexId(kpos(s) as u32),
                VertexId(kpos(t) as u32),
                "-",
                false,
            )
            .unwrap();
        r_edge_of_k.push(re);
    }
    for &(s, t) in right_extra_edges {
        rb.add_edge_named(VertexId(s as u32), VertexId(t as u32), "-", false)
            .unwrap();
    }
    let rg = rb.build_arc().unwrap();

    let mut l = GraphMap::new_empty(kg.clone(), lg);
    let mut r = GraphMap::new_empty(kg, rg);
    for (ki, &i) in kept_v.iter().enumerate() {
        l.set_vertex(VertexId(ki as u32), VertexId(i as u32));
        r.set_vertex(VertexId(ki as u32), VertexId(ki as u32));
    }
    for (pos, &(ke, ei)) in k_edges.iter().enumerate() {
        l.set_edge(ke, rulemin::graph::EdgeId(ei as u32));
        r.set_edge(ke, r_edge_of_k[pos]);
    }
    Rule::new(l, r).unwrap()
}




#[test]
fn subrule_chain_holds_and_transitivity() {
    let (p, p1, p0, p2) = figure_rules();
    assert!(is_subrule(&p0, &p1).unwrap().is_some());
    assert!(is_subrule(&p1, &p).unwrap().is_some());
    assert!(is_subrule(&p0, &p).unwrap().is_some());
    // Reflexivity.
    for q in [&p, &p1, &p0, &p2] {
        assert!(is_subrule(q, q).unwrap().is_some());
    }
    // The edge-deleting rule shares the removal phase but not the addition:
    // not a subrule in either direction.
    assert!(is_subrule(&p2, &p).unwrap().is_none());
    assert!(is_subrule(&p, &p2).unwrap().is_none());
}

#[test]
fn minimal_subrule_of_the_chain_is_the_small_rule() {
    let (p, p1, p0, _) = figure_rules();
    let core = p.minimal_subrule().unwrap();
    assert!(rules_isomorphic(&core, &p0));
    let core1 = p1.minimal_subrule().unwrap();
    assert!(rules_isomorphic(&core1, &p0));
    // Minimality below p: every subrule of p admits the core as subrule.
    assert!(is_subrule(&core, &p1).unwrap().is_some());
}

#[test]
fn apply_rejects_dangling_and_accepts_clean_matches() {
    let p = poset();
    // Deleting rule: lone b vertex deleted.
    let mut lb = Graph::builder(p.clone());
    lb.add_vertex_named("b").unwrap();
    let left = lb.build_arc().unwrap();
    let empty = Graph::empty(p.clone());
    let mut l = GraphMap::new_empty(empty.clone(), left);
    let r = GraphMap::new_empty(empty.clone(), empty.clone());
    l.validate_function().unwrap();
    let rule = Rule::new(l, r).unwrap();

    // Host: b with an incident edge: dangling.
    let mut hb = Graph::builder(p.clone());
    let b0 = hb.add_vertex_named("b").unwrap();
    let w0 = hb.add_vertex_named("w").unwrap();
    hb.add_edge_named(b0, w0, "-", false).unwrap();
    let host = hb.build_arc().unwrap();
    let matches =
        enumerate_monomorphisms(rule.left(), &host, None, &MatchOptions::default()).unwrap();
    assert_eq!(matches.len(), 1);
    assert_eq!(
        apply(&rule, &host, &matches[0]).unwrap_err(),
        ApplyError::Dangling(0)
    );
    assert!(enumerate_derivations(&rule, &host).unwrap().is_empty());

    // Host: isolated b plus other component: fine.
    let mut hb = Graph::builder(p.clone());
    hb.add_vertex_named("b").unwrap();
    let w1 = hb.add_vertex_named("w").unwrap();
    let w2 = hb.add_vertex_named("w").unwrap();
    hb.add_edge_named(w1, w2, "-", false).unwrap();
    let host = hb.build_arc().unwrap();
    let ds = enumerate_derivations(&rule, &host).unwrap();
    assert_eq!(ds.len(), 1);
    assert_eq!(ds[0].output.vertex_count(), 2);
}

#[test]
fn identity_rule_application_preserves_graph() {
    let poset = poset();
    let mut rng = StdRng::seed_from_u64(2);
    let g = random_graph(&mut rng, &poset, &["w", "b"], &["-"], 5, 0.5, false);
    let id = Rule::identity(&g).unwrap();
    let ds = enumerate_derivations(&id, &g).unwrap();
    assert!(!ds.is_empty());
    for d in &ds {
        assert!(rulemin::morphism::is_isomorphic(&d.output, &g).unwrap().is_some());
        assert!(d.element_map.is_total());
    }
}

#[test]
fn induced_rule_contains_the_rule_and_matches_in_its_own_left() {
    let (p, _, _, _) = figure_rules();
    // Apply p to its own left graph via the identity match.
    let matches =
        enumerate_monomorphisms(p.left(), p.left(), None, &MatchOptions::default()).unwrap();
    let d = apply(&p, p.left(), &matches[0]).unwrap();
    let induced = d.induced_rule().unwrap();
    assert!(rules_isomorphic(&induced, &p));
    assert!(is_subrule(&p, &induced).unwrap().is_some());
}

#[test]
fn vertex_count_bookkeeping_on_500_random_applications() {
    let poset = flat_poset(&["a", "b", "c", "-"]);
    let mut rng = StdRng::seed_from_u64(500);
    let mut applications = 0;
    while applications < 500 {
        let rule = random_rule(&mut rng, &poset);
        let n = rng.random_range(3..8);
        let host = random_graph(&mut rng, &poset, &["a", "b", "c"], &["-"], n, 0.4, false);
        for d in enumerate_derivations(&rule, &host).unwrap() {
            let deleted = rule
                .left()
                .vertices()
                .filter(|&v| rule.left_context_vertex(v).is_none())
                .count();
            let created = rule
                .right()
                .vertices()
                .filter(|&v| rule.right_context_vertex(v).is_none())
                .count();
            assert_eq!(
                d.output.vertex_count(),
                host.vertex_count() - deleted + created
            );
            // Commuting squares: m . l = l' . d and h . r = r' . d.
            for k in rule.context().vertices() {
                let via_match = d.matched.vertex(rule.l().vertex(k));
                let via_interface = d.to_input.vertex(d.context_embedding.vertex(k));
                assert_eq!(via_match, via_interface);
                let via_right = d.right_embedding.vertex(rule.r().vertex(k));
                let via_out = d.to_output.vertex(d.context_embedding.vertex(k));
                assert_eq!(via_right, via_out);
            }
            applications += 1;
            if applications >= 500 {
                break;
            }
        }
    }
}

#[test]
fn subrule_preserves_applications() {
    let (p, p1, p0, _) = figure_rules();
    // Wherever p applies, p0 and p1 apply with the same element map on the
    // shared action.
    let poset = poset();
    let mut hb = Graph::builder(poset);
    let w = hb.add_vertex_named("w").unwrap();
    let b = hb.add_vertex_named("b").unwrap();
    let r = hb.add_vertex_named("r").unwrap();
    let g = hb.add_vertex_named("g").unwrap();
    let h = hb.add_vertex_named("h").unwrap();
    let x = hb.add_vertex_named("g").unwrap();
    hb.add_edge_named(w, b, "-", false).unwrap();
    hb.add_edge_named(g, w, "-", false).unwrap();
    hb.add_edge_named(h, b, "-", false).unwrap();
    hb.add_edge_named(x, g, "-", false).unwrap();
    let host = hb.build_arc().unwrap();
    let dp = enumerate_derivations(&p, &host).unwrap();
    assert_eq!(dp.len(), 1);
    let dp1 = enumerate_derivations(&p1, &host).unwrap();
    let dp0 = enumerate_derivations(&p0, &host).unwrap();
    assert!(!dp1.is_empty() && !dp0.is_empty());
    // All three element maps agree as transitions.
    use rulemin::transition::{transitions_equivalent, Transition};
    let tp = Transition::from_derivation(&dp[0]);
    assert!(dp1
        .iter()
        .any(|d| transitions_equivalent(&tp, &Transition::from_derivation(d)).unwrap()));
    assert!(dp0
        .iter()
        .any(|d| transitions_equivalent(&tp, &Transition::from_derivation(d)).unwrap()));
}

#[test]
fn subrule_reflexive_transitive_on_random_chains() {
    let poset = flat_poset(&["a", "b", "c", "-"]);
    let mut rng = StdRng::seed_from_u64(77);
    let mut chains = 0;
    while chains < 10 {
        let big = random_rule(&mut rng, &poset);
        let mid = big.minimal_subrule().unwrap();
        if rules_isomorphic(&big, &mid) {
            continue;
        }
        assert!(is_subrule(&mid, &big).unwrap().is_some());
        assert!(is_subrule(&mid, &mid).unwrap().is_some());
        let core = mid.minimal_subrule().unwrap();
        assert!(rules_isomorphic(&core, &mid));
        chains += 1;
    }
}
