//! Shared brute-force oracles and random-structure generators for the
//! integration suites. Everything here is independent of the library's
//! search paths: embeddings by filtering all injective maps, equivalence by
//! exhaustive isomorphism-pair search, set cover by subset enumeration.

#![allow(dead_code)]

use std::sync::Arc;

use rand::prelude::*;
use rand::rngs::StdRng;

use rulemin::graph::{EdgeId, Graph, VertexId};
use rulemin::label::LabelPoset;
use rulemin::morphism::GraphMap;
use rulemin::rule::Rule;
use rulemin::transition::Transition;

/// All injective vertex maps pattern -> host that extend to full
/// monomorphisms, found by filtering every injective assignment.
pub fn brute_monomorphisms(pattern: &Arc<Graph>, host: &Arc<Graph>) -> Vec<Vec<usize>> {
    let pn = pattern.vertex_count();
    let hn = host.vertex_count();
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; pn];
    let mut used = vec![false; hn];
    fn rec(
        pattern: &Graph,
        host: &Graph,
        depth: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let pn = pattern.vertex_count();
        if depth == pn {
            // Check labels and all edges.
            let poset = pattern.poset();
            for v in pattern.vertices() {
                let w = VertexId(assign[v.index()] as u32);
                if !poset.leq(pattern.vertex_label(v), host.vertex_label(w)) {
                    return;
                }
            }
            for e in pattern.edge_ids() {
                let d = pattern.edge(e);
                let s = VertexId(assign[d.source.index()] as u32);
                let t = VertexId(assign[d.target.index()] as u32);
                let he = host
                    .find_edge(s, t, d.directed)
                    .or_else(|| if d.directed { None } else { host.find_edge(t, s, false) });
                match he {
                    Some(he) if poset.leq(d.label, host.edge(he).label) => {}
                    _ => return,
                }
            }
            out.push(assign.clone());
            return;
        }
        for w in 0..host.vertex_count() {
            if used[w] {
                continue;
            }
            assign[depth] = w;
            used[w] = true;
            rec(pattern, host, depth + 1, assign, used, out);
            used[w] = false;
        }
        assign[depth] = usize::MAX;
    }
    rec(pattern, host, 0, &mut assign, &mut used, &mut out);
    out
}

/// Exhaustive transition equivalence: try every isomorphism pair.
pub fn brute_transitions_equivalent(a: &Transition, b: &Transition) -> bool {
    let src_isos = brute_isomorphisms(&a.source, &b.source);
    if src_isos.is_empty() {
        return false;
    }
    let tgt_isos = brute_isomorphisms(&a.target, &b.target);
    for phi in &src_isos {
        'psi: for psi in &tgt_isos {
            for v in a.source.vertices() {
                let lhs = a.map.vertex(v).map(|w| psi[w.index()]);
                let rhs = b.map.vertex(VertexId(phi[v.index()] as u32)).map(|w| w.index());
                if lhs != rhs {
                    continue 'psi;
                }
            }
            for e in a.source.edge_ids() {
                let lhs = a.map.edge(e).map(|f| edge_image(&a.target, &b.target, f, psi));
                let phi_e = edge_image(&a.source, &b.source, e, phi);
                let rhs = b.map.edge(EdgeId(phi_e as u32)).map(|f| f.index());
                if lhs != rhs {
                    continue 'psi;
                }
            }
            return true;
        }
    }
    false
}

/// Label-preserving bijections as vertex permutations.
pub fn brute_isomorphisms(g: &Arc<Graph>, h: &Arc<Graph>) -> Vec<Vec<usize>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Vec::new();
    }
    brute_monomorphisms(g, h)
        .into_iter()
        .filter(|assign| {
            g.vertices().all(|v| {
                g.vertex_label(v) == h.vertex_label(VertexId(assign[v.index()] as u32))
            }) && g.edge_ids().all(|e| {
                let he = edge_image(g, h, e, assign);
                g.edge(e).label == h.edge(EdgeId(he as u32)).label
            })
        })
        .collect()
}

/// The host edge an assignment sends a pattern edge to (graphs simple).
pub fn edge_image(pattern: &Graph, host: &Graph, e: EdgeId, assign: &[usize]) -> usize {
    let d = pattern.edge(e);
    let s = VertexId(assign[d.source.index()] as u32);
    let t = VertexId(assign[d.target.index()] as u32);
    host.find_edge(s, t, d.directed)
        .or_else(|| if d.directed { None } else { host.find_edge(t, s, false) })
        .expect("edge image exists for a monomorphism")
        .index()
}

/// Exhaustive minimal set cover by subset enumeration (universe and set
/// count small).
pub fn brute_min_cover(universe: usize, sets: &[Vec<usize>]) -> Option<usize> {
    let n = sets.len();
    assert!(n <= 20);
    let full: u64 = if universe == 64 { u64::MAX } else { (1 << universe) - 1 };
    let masks: Vec<u64> = sets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &e| m | (1 << e)))
        .collect();
    let mut best: Option<usize> = None;
    for pick in 0u64..(1 << n) {
        let mut covered = 0u64;
        for (i, m) in masks.iter().enumerate() {
            if pick >> i & 1 == 1 {
                covered |= m;
            }
        }
        if covered & full == full {
            let size = pick.count_ones() as usize;
            best = Some(best.map_or(size, |b: usize| b.min(size)));
        }
    }
    best
}

/// Exhaustive lossy optimum: minimal `rho_num*|C| + rho_den*|spur(C)|` over
/// covering subsets.
pub fn brute_min_lossy(
    universe: usize,
    sets: &[Vec<usize>],
    spurious: &[Vec<usize>],
    rho_num: u64,
    rho_den: u64,
) -> Option<u128> {
    let n = sets.len();
    assert!(n <= 20);
    let full: u64 = if universe == 64 { u64::MAX } else { (1 << universe) - 1 };
    let masks: Vec<u64> = sets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &e| m | (1 << e)))
        .collect();
    let smasks: Vec<u64> = spurious
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &e| m | (1 << e)))
        .collect();
    let mut best: Option<u128> = None;
    for pick in 0u64..(1 << n) {
        let mut covered = 0u64;
        let mut spur = 0u64;
        for i in 0..n {
            if pick >> i & 1 == 1 {
                covered |= masks[i];
                spur |= smasks[i];
            }
        }
        if covered & full == full {
            let cost = rho_num as u128 * pick.count_ones() as u128
                + rho_den as u128 * spur.count_ones() as u128;
            best = Some(best.map_or(cost, |b| b.min(cost)));
        }
    }
    best
}

pub fn flat_poset(atoms: &[&str]) -> Arc<LabelPoset> {
    LabelPoset::flat(atoms).unwrap()
}

/// Random labeled graph with the given vertex count and edge density.
pub fn random_graph(
    rng: &mut StdRng,
    poset: &Arc<LabelPoset>,
    vertex_labels: &[&str],
    edge_labels: &[&str],
    n: usize,
    edge_prob: f64,
    directed: bool,
) -> Arc<Graph> {
    let mut b = Graph::builder(poset.clone());
    for _ in 0..n {
        let l = vertex_labels[rng.random_range(0..vertex_labels.len())];
        b.add_vertex_named(l).unwrap();
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(edge_prob) {
                let l = edge_labels[rng.random_range(0..edge_labels.len())];
                let (s, t) = if directed && rng.random_bool(0.5) {
                    (j, i)
                } else {
                    (i, j)
                };
                b.add_edge_named(VertexId(s as u32), VertexId(t as u32), l, directed)
                    .unwrap();
            }
        }
    }
    b.build_arc().unwrap()
}

/// Permutes a graph's vertex indices with a random bijection.
pub fn permuted(rng: &mut StdRng, g: &Arc<Graph>) -> Arc<Graph> {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut b = Graph::builder(g.poset().clone());
    let mut labels = vec![None; n];
    for v in g.vertices() {
        labels[perm[v.index()]] = Some(g.vertex_label(v));
    }
    for l in labels {
        b.add_vertex(l.unwrap());
    }
    let mut edges: Vec<_> = g
        .edge_ids()
        .map(|e| {
            let d = g.edge(e);
            (
                perm[d.source.index()],
                perm[d.target.index()],
                d.label,
                d.directed,
            )
        })
        .collect();
    edges.shuffle(rng);
    for (s, t, l, dir) in edges {
        b.add_edge(VertexId(s as u32), VertexId(t as u32), l, dir).unwrap();
    }
    b.build_arc().unwrap()
}

/// Random transition: a random graph, a random injective partial map into a
/// mutated copy.
pub fn random_transition(rng: &mut StdRng, poset: &Arc<LabelPoset>) -> Transition {
    let vlabels = ["a", "b", "c"];
    let elabels = ["-"];
    let n = rng.random_range(2..6);
    let g = random_graph(rng, poset, &vlabels, &elabels, n, 0.5, false);
    // Target: keep a random subset of vertices (relabeling some), add fresh.
    let mut b = Graph::builder(poset.clone());
    let mut image = vec![None; n];
    let mut kept = Vec::new();
    for v in g.vertices() {
        if rng.random_bool(0.8) {
            let label = if rng.random_bool(0.2) {
                poset.id(vlabels[rng.random_range(0..vlabels.len())]).unwrap()
            } else {
                g.vertex_label(v)
            };
            image[v.index()] = Some(b.add_vertex(label));
            kept.push(v);
        }
    }
    for _ in 0..rng.random_range(0..3) {
        b.add_vertex_named(vlabels[rng.random_range(0..vlabels.len())]).unwrap();
    }
    let mut target_edges = Vec::new();
    for e in g.edge_ids() {
        let d = g.edge(e);
        if let (Some(s), Some(t)) = (image[d.source.index()], image[d.target.index()]) {
            if rng.random_bool(0.85) {
                let ne = b.add_edge(s, t, d.label, d.directed).unwrap();
                target_edges.push((e, ne));
            }
        }
    }
    let target = b.build_arc().unwrap();
    let mut map = GraphMap::new_empty(g, target);
    for v in kept {
        map.set_vertex(v, image[v.index()].unwrap());
    }
    for (e, ne) in target_edges {
        map.set_edge(e, ne);
    }
    Transition::new(map).unwrap()
}

/// Random small rule: a random host graph, a random subset kept as context,
/// a right side mutating labels and adding fresh parts.
pub fn random_rule(rng: &mut StdRng, poset: &Arc<LabelPoset>) -> Rule {
    let t = random_transition(rng, poset);
    rulemin::transition::maximum_rule(&t).unwrap()
}
