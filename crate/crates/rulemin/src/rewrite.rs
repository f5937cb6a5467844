//! Direct derivations: applying a rule to a graph at a match.
//!
//! Under an injective match the pushout complement is unique and exists
//! exactly when the dangling condition holds: no edge outside the match may
//! be incident to a deleted vertex. The interface graph is the host minus
//! the deleted image, with invariant labels at positions the rule relabels;
//! the output glues fresh copies of the created part along the interface.
//! Applications that would leave the simple-graph category (a created edge
//! parallel to a kept one) are rejected, as are matches whose host label
//! differs from the left label at a relabeled position.

use std::sync::Arc;

use thiserror::Error;

use crate::error::Result;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::label::LabelId;
use crate::morphism::{
    enumerate_monomorphisms, for_each_monomorphism, isomorphisms, Anchor, GraphMap, MatchOptions,
    Morphism,
};
use crate::rule::{signature_of_map, ChangeSignature, Rule};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApplyError {
    #[error("match is not a morphism from the rule's left graph into the host")]
    BadMatch,
    #[error("dangling condition: host edge {0} is incident to a deleted vertex")]
    Dangling(u32),
    #[error("application would create a parallel edge")]
    ParallelEdge,
    #[error("host label does not equal the left label at a relabeled position")]
    RelabelConflict,
}

/// A direct derivation `G => H` with its interface span and element map.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub rule: Rule,
    pub input: Arc<Graph>,
    pub matched: Morphism,
    pub interface: Arc<Graph>,
    pub output: Arc<Graph>,
    /// `D -> G`.
    pub to_input: Morphism,
    /// `D -> H`.
    pub to_output: Morphism,
    /// `K -> D`.
    pub context_embedding: Morphism,
    /// `R -> H`.
    pub right_embedding: Morphism,
    /// `G  ->  H` partial, the element map of the induced rule.
    pub element_map: GraphMap,
}

impl Derivation {
    /// The rule `G <- D -> H` induced by this derivation, canonicalized.
    pub fn induced_rule(&self) -> Result<Rule> {
        Rule::new(self.to_input.map().clone(), self.to_output.map().clone())
    }
}

pub fn apply(
    rule: &Rule,
    host: &Arc<Graph>,
    matched: &Morphism,
) -> std::result::Result<Derivation, ApplyError> {
    if matched.source() != rule.left() || matched.target() != host {
        return Err(ApplyError::BadMatch);
    }
    let left = rule.left();
    let context = rule.context();
    let right = rule.right();

    let mut deleted_v = vec![false; host.vertex_count()];
    let mut deleted_e = vec![false; host.edge_count()];
    for v in left.vertices() {
        if rule.left_context_vertex(v).is_none() {
            deleted_v[matched.vertex(v).index()] = true;
        }
    }
    for e in left.edge_ids() {
        if rule.left_context_edge(e).is_none() {
            deleted_e[matched.edge(e).index()] = true;
        }
    }
    // Dangling check.
    for e in host.edge_ids() {
        if deleted_e[e.index()] {
            continue;
        }
        let d = host.edge(e);
        if deleted_v[d.source.index()] || deleted_v[d.target.index()] {
            return Err(ApplyError::Dangling(e.0));
        }
    }
    // Labels the interface and output carry at matched context positions.
    let mut interface_label: Vec<LabelId> =
        host.vertices().map(|v| host.vertex_label(v)).collect();
    let mut output_label = interface_label.clone();
    let mut interface_elabel: Vec<LabelId> =
        host.edge_ids().map(|e| host.edge(e).label).collect();
    let mut output_elabel = interface_elabel.clone();
    for k in context.vertices() {
        if rule.forced_vertex(k) {
            let lv = rule.l().vertex(k);
            let hv = matched.vertex(lv);
            if host.vertex_label(hv) != left.vertex_label(lv) {
                return Err(ApplyError::RelabelConflict);
            }
            interface_label[hv.index()] = context.vertex_label(k);
            output_label[hv.index()] = right.vertex_label(rule.r().vertex(k));
        }
    }
    for ke in context.edge_ids() {
        if rule.forced_edge(ke) {
            let le = rule.l().edge(ke);
            let he = matched.edge(le);
            if host.edge(he).label != left.edge(le).label {
                return Err(ApplyError::RelabelConflict);
            }
            interface_elabel[he.index()] = context.edge(ke).label;
            output_elabel[he.index()] = right.edge(rule.r().edge(ke)).label;
        }
    }

    // Interface D: host minus the deleted image.
    let poset = host.poset().clone();
    let mut db = Graph::builder(poset.clone());
    let mut hb = Graph::builder(poset);
    let mut host_to_d: Vec<Option<VertexId>> = vec![None; host.vertex_count()];
    for v in host.vertices() {
        if !deleted_v[v.index()] {
            let dv = db.add_vertex(interface_label[v.index()]);
            hb.add_vertex(output_label[v.index()]);
            host_to_d[v.index()] = Some(dv);
        }
    }
    let mut host_to_d_e: Vec<Option<EdgeId>> = vec![None; host.edge_count()];
    for e in host.edge_ids() {
        if deleted_e[e.index()] {
            continue;
        }
        let d = host.edge(e);
        let (s, t) = (
            host_to_d[d.source.index()].expect("kept edge has kept endpoints"),
            host_to_d[d.target.index()].expect("kept edge has kept endpoints"),
        );
        let de = db
            .add_edge(s, t, interface_elabel[e.index()], d.directed)
            .expect("subgraph of a simple graph stays simple");
        hb.add_edge(s, t, output_elabel[e.index()], d.directed)
            .expect("subgraph of a simple graph stays simple");
        host_to_d_e[e.index()] = Some(de);
    }
    // Created part of H: fresh copies of R minus r(K), glued along K.
    let mut right_to_h: Vec<Option<VertexId>> = vec![None; right.vertex_count()];
    for v in right.vertices() {
        match rule.right_context_vertex(v) {
            Some(k) => {
                let hv = matched.vertex(rule.l().vertex(k));
                right_to_h[v.index()] = Some(host_to_d[hv.index()].expect("context is kept"));
            }
            None => {
                db_noop();
                right_to_h[v.index()] = Some(hb.add_vertex(right.vertex_label(v)));
            }
        }
    }
    let mut right_to_h_e: Vec<Option<EdgeId>> = vec![None; right.edge_count()];
    for e in right.edge_ids() {
        match rule.right_context_edge(e) {
            Some(k) => {
                let he = matched.edge(rule.l().edge(k));
                right_to_h_e[e.index()] = host_to_d_e[he.index()];
            }
            None => {
                let d = right.edge(e);
                let s = right_to_h[d.source.index()].expect("vertices placed first");
                let t = right_to_h[d.target.index()].expect("vertices placed first");
                let he = hb
                    .add_edge(s, t, d.label, d.directed)
                    .map_err(|_| ApplyError::ParallelEdge)?;
                right_to_h_e[e.index()] = Some(he);
            }
        }
    }

    let interface = db.build_arc().expect("interface construction");
    let output = hb.build_arc().expect("output construction");

    // Morphisms of the two squares plus the element map.
    let mut to_input = GraphMap::new_empty(interface.clone(), host.clone());
    let mut to_output = GraphMap::new_empty(interface.clone(), output.clone());
    let mut element_map = GraphMap::new_empty(host.clone(), output.clone());
    for v in host.vertices() {
        if let Some(dv) = host_to_d[v.index()] {
            to_input.set_vertex(dv, v);
            to_output.set_vertex(dv, dv);
            element_map.set_vertex(v, dv);
        }
    }
    for e in host.edge_ids() {
        if let Some(de) = host_to_d_e[e.index()] {
            to_input.set_edge(de, e);
            to_output.set_edge(de, de);
            element_map.set_edge(e, de);
        }
    }
    let mut context_embedding = GraphMap::new_empty(rule.context().clone(), interface.clone());
    for k in context.vertices() {
        let hv = matched.vertex(rule.l().vertex(k));
        context_embedding.set_vertex(k, host_to_d[hv.index()].expect("context kept"));
    }
    for ke in context.edge_ids() {
        let he = matched.edge(rule.l().edge(ke));
        context_embedding.set_edge(ke, host_to_d_e[he.index()].expect("context kept"));
    }
    let mut right_embedding = GraphMap::new_empty(rule.right().clone(), output.clone());
    for v in right.vertices() {
        right_embedding.set_vertex(v, right_to_h[v.index()].expect("total"));
    }
    for e in right.edge_ids() {
        right_embedding.set_edge(e, right_to_h_e[e.index()].expect("total"));
    }

    Ok(Derivation {
        rule: rule.clone(),
        input: host.clone(),
        matched: matched.clone(),
        interface,
        output,
        to_input: Morphism::new(to_input).expect("interface embeds into the host"),
        to_output: Morphism::new(to_output).expect("interface embeds into the output"),
        context_embedding: Morphism::new(context_embedding)
            .expect("context embeds into the interface"),
        right_embedding: Morphism::new(right_embedding)
            .expect("right graph embeds into the output"),
        element_map,
    })
}

fn db_noop() {}

/// One derivation per valid match, in deterministic match order; matches
/// failing the dangling (or parallel-edge or relabel) condition are skipped.
pub fn enumerate_derivations(rule: &Rule, host: &Arc<Graph>) -> Result<Vec<Derivation>> {
    let matches = enumerate_monomorphisms(rule.left(), host, None, &MatchOptions::default())?;
    Ok(matches
        .iter()
        .filter_map(|m| apply(rule, host, m).ok())
        .collect())
}

/// Witness that a rule reproduces a given element map when applied to its
/// source: the match used and the derivation it yields.
#[derive(Debug, Clone)]
pub struct GenerationWitness {
    pub matched: Morphism,
    pub derivation: Derivation,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PatRole {
    Del,
    Keep,
    Force(LabelId),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum HostRole {
    Del,
    Keep(LabelId),
}

/// Searches for a match of `rule` into `source` whose derivation has an
/// element map isomorphic to `map: source -> target`. This single routine
/// decides both `generates` (with a transition's element map) and the
/// subrule relation (with the superrule's element map).
pub fn generation_witness(
    rule: &Rule,
    source: &Arc<Graph>,
    map: &GraphMap,
    target: &Arc<Graph>,
) -> Result<Option<GenerationWitness>> {
    debug_assert!(map.source == *source && map.target == *target);
    if !signatures_compatible(rule.signature(), &signature_of_map(map)) {
        return Ok(None);
    }
    let left = rule.left();

    // Role tables driving the anchored match search.
    let pat_v: Vec<PatRole> = left
        .vertices()
        .map(|v| match rule.left_context_vertex(v) {
            None => PatRole::Del,
            Some(k) => {
                if rule.forced_vertex(k) {
                    PatRole::Force(rule.right().vertex_label(rule.r().vertex(k)))
                } else {
                    PatRole::Keep
                }
            }
        })
        .collect();
    let pat_e: Vec<PatRole> = left
        .edge_ids()
        .map(|e| match rule.left_context_edge(e) {
            None => PatRole::Del,
            Some(k) => {
                if rule.forced_edge(k) {
                    PatRole::Force(rule.right().edge(rule.r().edge(k)).label)
                } else {
                    PatRole::Keep
                }
            }
        })
        .collect();
    let host_v: Vec<HostRole> = source
        .vertices()
        .map(|v| match map.vertex(v) {
            None => HostRole::Del,
            Some(w) => HostRole::Keep(target.vertex_label(w)),
        })
        .collect();
    let host_e: Vec<HostRole> = source
        .edge_ids()
        .map(|e| match map.edge(e) {
            None => HostRole::Del,
            Some(f) => HostRole::Keep(target.edge(f).label),
        })
        .collect();

    let vertex_filter = |v: VertexId, w: VertexId| -> bool {
        match (pat_v[v.index()], host_v[w.index()]) {
            (PatRole::Del, HostRole::Del) => true,
            (PatRole::Del, _) | (_, HostRole::Del) => false,
            (PatRole::Keep, HostRole::Keep(tl)) => tl == source.vertex_label(w),
            (PatRole::Force(lr), HostRole::Keep(tl)) => {
                tl == lr && left.vertex_label(v) == source.vertex_label(w)
            }
        }
    };
    let edge_filter = |e: EdgeId, f: EdgeId| -> bool {
        match (pat_e[e.index()], host_e[f.index()]) {
            (PatRole::Del, HostRole::Del) => true,
            (PatRole::Del, _) | (_, HostRole::Del) => false,
            (PatRole::Keep, HostRole::Keep(tl)) => tl == source.edge(f).label,
            (PatRole::Force(lr), HostRole::Keep(tl)) => {
                tl == lr && left.edge(e).label == source.edge(f).label
            }
        }
    };
    let opts = MatchOptions {
        vertex_filter: Some(&vertex_filter),
        edge_filter: Some(&edge_filter),
        ..Default::default()
    };
    let mut witness = None;
    for_each_monomorphism(left, source, None, &opts, |m| {
        let Ok(derivation) = apply(rule, source, &m) else {
            return true;
        };
        if let Some(psi_anchor) = output_anchor(&derivation.element_map, map) {
            match isomorphisms(&derivation.output, target, Some(&psi_anchor), Some(1)) {
                Ok(isos) if !isos.is_empty() => {
                    witness = Some(GenerationWitness {
                        matched: m,
                        derivation,
                    });
                    return false;
                }
                _ => {}
            }
        }
        true
    })?;
    Ok(witness)
}

/// Anchor forcing the output-to-target isomorphism to commute with the two
/// element maps; `None` when the preserved domains differ.
fn output_anchor(derived: &GraphMap, wanted: &GraphMap) -> Option<Anchor> {
    let mut anchor = Anchor::default();
    for v in derived.source.vertices() {
        match (derived.vertex(v), wanted.vertex(v)) {
            (Some(a), Some(b)) => anchor.vertex_pairs.push((a, b)),
            (None, None) => {}
            _ => return None,
        }
    }
    for e in derived.source.edge_ids() {
        match (derived.edge(e), wanted.edge(e)) {
            (Some(a), Some(b)) => anchor.edge_pairs.push((a, b)),
            (None, None) => {}
            _ => return None,
        }
    }
    Some(anchor)
}

fn signatures_compatible(rule: &ChangeSignature, change: &ChangeSignature) -> bool {
    rule.deleted_vertices == change.deleted_vertices
        && rule.deleted_edges_directed == change.deleted_edges_directed
        && rule.deleted_edges_undirected == change.deleted_edges_undirected
        && rule.created_vertex_labels == change.created_vertex_labels
        && rule.created_edge_labels == change.created_edge_labels
        && rule.relabeled_vertices == change.relabeled_vertices
        && rule.relabeled_edges == change.relabeled_edges
}

/// Subrule witness: a match of the candidate's left graph into the
/// superrule's left graph whose derivation reproduces the superrule's
/// element map.
pub fn is_subrule(p1: &Rule, p2: &Rule) -> Result<Option<GenerationWitness>> {
    generation_witness(p1, p2.left(), &p2.element_map(), p2.right())
}
