//! Input transition systems and generation semantics.
//!
//! A transition is a source graph, a target graph and an injective partial
//! element map between them. Systems declare their input graph set
//! explicitly; transition sources are members of that set by identity.
//! Equivalent transitions (same transformation up to isomorphisms commuting
//! with the maps) are merged at load, so membership checks work on
//! equivalence classes via canonical transition codes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::canon::{canonicalize, graph_code, CanonicalCode, ColoredGraph};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::label::LabelPoset;
use crate::morphism::{
    for_each_monomorphism, is_isomorphic, isomorphisms, Anchor, GraphMap, MatchOptions, Morphism,
};
use crate::rewrite::{enumerate_derivations, generation_witness, Derivation, GenerationWitness};
use crate::rule::{signature_of_map, Rule};

/// Default cap on derivations enumerated per (rule, input graph) pair.
/// Exceeding it is a loud error, never a silent truncation.
pub const DEFAULT_DERIVATION_CAP: usize = 200_000;

/// An element-mapped transition `G -f-> H`.
#[derive(Debug, Clone)]
pub struct Transition {
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    pub map: GraphMap,
}

impl Transition {
    pub fn new(map: GraphMap) -> Result<Transition> {
        map.validate_function()
            .map_err(|e| Error::InvalidTransition(e.to_string()))?;
        if !map.is_injective() {
            return Err(Error::InvalidTransition(
                "element map must be injective in the implemented fragment".into(),
            ));
        }
        Ok(Transition {
            source: map.source.clone(),
            target: map.target.clone(),
            map,
        })
    }

    pub fn from_derivation(d: &Derivation) -> Transition {
        Transition {
            source: d.input.clone(),
            target: d.output.clone(),
            map: d.element_map.clone(),
        }
    }

    /// Canonical code of the combined structure: both graphs side-tagged,
    /// map edges linking preserved vertices, and a mapped flag on source
    /// edges (the image edge is then determined, graphs being simple).
    pub fn code(&self) -> CanonicalCode {
        let ns = self.source.vertex_count();
        let mut vertex_colors = Vec::with_capacity(ns + self.target.vertex_count());
        for v in self.source.vertices() {
            vertex_colors.push((1u64 << 32) | self.source.vertex_label(v).0 as u64);
        }
        for v in self.target.vertices() {
            vertex_colors.push((2u64 << 32) | self.target.vertex_label(v).0 as u64);
        }
        let mut edges = Vec::new();
        for e in self.source.edge_ids() {
            let d = self.source.edge(e);
            let mapped = if self.map.edge(e).is_some() { 1u64 << 47 } else { 0 };
            edges.push((
                d.source.index(),
                d.target.index(),
                d.directed,
                (1u64 << 40) | mapped | d.label.0 as u64,
            ));
        }
        for e in self.target.edge_ids() {
            let d = self.target.edge(e);
            edges.push((
                ns + d.source.index(),
                ns + d.target.index(),
                d.directed,
                (2u64 << 40) | d.label.0 as u64,
            ));
        }
        for (v, w) in self.map.mapped_vertices() {
            edges.push((v.index(), ns + w.index(), true, 3u64 << 40));
        }
        canonicalize(&ColoredGraph {
            vertex_colors,
            edges,
        })
        .code
    }

    /// Drops spectator components: weakly connected source components that
    /// the map carries label-preservingly onto whole target components.
    /// What remains is the reaction proper; chemistry-style systems compare
    /// transitions after this collapse so that a reaction embedded beside an
    /// untouched molecule is the same transition.
    pub fn strip_spectators(&self) -> Transition {
        let source_components = self.source.components();
        let mut keep_src = vec![true; self.source.vertex_count()];
        let mut drop_tgt = vec![false; self.target.vertex_count()];
        let target_components = self.target.components();
        let target_comp_of = {
            let mut of = vec![usize::MAX; self.target.vertex_count()];
            for (ci, comp) in target_components.iter().enumerate() {
                for v in comp {
                    of[v.index()] = ci;
                }
            }
            of
        };
        for comp in &source_components {
            // Every vertex mapped with equal labels; image inside one target
            // component of the same size; every edge mapped with equal
            // labels.
            let mut image_comp = None;
            let mut ok = true;
            for &v in comp {
                match self.map.vertex(v) {
                    Some(w)
                        if self.source.vertex_label(v) == self.target.vertex_label(w) =>
                    {
                        let ci = target_comp_of[w.index()];
                        if *image_comp.get_or_insert(ci) != ci {
                            ok = false;
                            break;
                        }
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            let Some(ci) = image_comp else {
                continue;
            };
            if !ok || target_components[ci].len() != comp.len() {
                continue;
            }
            let mut edge_count = 0;
            for &v in comp {
                for inc in self.source.adjacency(v) {
                    let e = inc.edge;
                    if self.source.edge(e).source != v {
                        continue;
                    }
                    edge_count += 1;
                    match self.map.edge(e) {
                        Some(f) if self.source.edge(e).label == self.target.edge(f).label => {}
                        _ => {
                            ok = false;
                        }
                    }
                }
            }
            let target_edges = self
                .target
                .edge_ids()
                .filter(|&f| target_comp_of[self.target.edge(f).source.index()] == ci)
                .count();
            if !ok || target_edges != edge_count {
                continue;
            }
            for &v in comp {
                keep_src[v.index()] = false;
            }
            for v in &target_components[ci] {
                drop_tgt[v.index()] = true;
            }
        }
        if keep_src.iter().all(|&k| k) {
            return self.clone();
        }
        // Rebuild both graphs restricted to the kept parts.
        let poset = self.source.poset().clone();
        let mut sb = Graph::builder(poset.clone());
        let mut tb = Graph::builder(poset);
        let mut s_new = vec![None; self.source.vertex_count()];
        let mut t_new = vec![None; self.target.vertex_count()];
        for v in self.source.vertices() {
            if keep_src[v.index()] {
                s_new[v.index()] = Some(sb.add_vertex(self.source.vertex_label(v)));
            }
        }
        for v in self.target.vertices() {
            if !drop_tgt[v.index()] {
                t_new[v.index()] = Some(tb.add_vertex(self.target.vertex_label(v)));
            }
        }
        let mut s_enew = vec![None; self.source.edge_count()];
        let mut t_enew = vec![None; self.target.edge_count()];
        for e in self.source.edge_ids() {
            let d = self.source.edge(e);
            if let (Some(s), Some(t)) = (s_new[d.source.index()], s_new[d.target.index()]) {
                s_enew[e.index()] =
                    Some(sb.add_edge(s, t, d.label, d.directed).expect("subgraph"));
            }
        }
        for e in self.target.edge_ids() {
            let d = self.target.edge(e);
            if let (Some(s), Some(t)) = (t_new[d.source.index()], t_new[d.target.index()]) {
                t_enew[e.index()] =
                    Some(tb.add_edge(s, t, d.label, d.directed).expect("subgraph"));
            }
        }
        let source = sb.build_arc().expect("stripped source");
        let target = tb.build_arc().expect("stripped target");
        let mut map = GraphMap::new_empty(source, target);
        for (v, w) in self.map.mapped_vertices() {
            if let (Some(a), Some(b)) = (s_new[v.index()], t_new[w.index()]) {
                map.set_vertex(a, b);
            }
        }
        for (e, f) in self.map.mapped_edges() {
            if let (Some(a), Some(b)) = (s_enew[e.index()], t_enew[f.index()]) {
                map.set_edge(a, b);
            }
        }
        Transition::new(map).expect("stripping preserves map validity")
    }

    /// Code used for membership and deduplication under a system's
    /// comparison policy.
    pub fn effective_code(&self, collapse_spectators: bool) -> CanonicalCode {
        if collapse_spectators {
            self.strip_spectators().code()
        } else {
            self.code()
        }
    }

    /// Transition with the source replaced along an isomorphism.
    pub fn rerooted(&self, iso: &Morphism) -> Result<Transition> {
        if iso.source() != &self.source || !iso.is_bijective() {
            return Err(Error::InvalidTransition(
                "rerooting requires an isomorphism from the current source".into(),
            ));
        }
        let mut map = GraphMap::new_empty(iso.target().clone(), self.target.clone());
        for (v, w) in self.map.mapped_vertices() {
            map.set_vertex(iso.vertex(v), w);
        }
        for (e, f) in self.map.mapped_edges() {
            map.set_edge(iso.edge(e), f);
        }
        Transition::new(map)
    }
}

/// Isomorphism of element maps: isos of the sources and targets commuting
/// with the maps and matching their domains.
pub fn transitions_equivalent(a: &Transition, b: &Transition) -> Result<bool> {
    if signature_of_map(&a.map) != signature_of_map(&b.map) {
        return Ok(false);
    }
    if a.source.vertex_count() != b.source.vertex_count()
        || a.source.edge_count() != b.source.edge_count()
        || a.target.vertex_count() != b.target.vertex_count()
        || a.target.edge_count() != b.target.edge_count()
    {
        return Ok(false);
    }
    let roles_a: Vec<Option<crate::label::LabelId>> = a
        .source
        .vertices()
        .map(|v| a.map.vertex(v).map(|w| a.target.vertex_label(w)))
        .collect();
    let roles_b: Vec<Option<crate::label::LabelId>> = b
        .source
        .vertices()
        .map(|v| b.map.vertex(v).map(|w| b.target.vertex_label(w)))
        .collect();
    let eroles_a: Vec<Option<crate::label::LabelId>> = a
        .source
        .edge_ids()
        .map(|e| a.map.edge(e).map(|f| b.target.edge(f).label))
        .collect();
    let eroles_b: Vec<Option<crate::label::LabelId>> = b
        .source
        .edge_ids()
        .map(|e| b.map.edge(e).map(|f| b.target.edge(f).label))
        .collect();
    let vertex_filter = |v: VertexId, w: VertexId| roles_a[v.index()] == roles_b[w.index()];
    let edge_filter =
        |e: crate::graph::EdgeId, f: crate::graph::EdgeId| eroles_a[e.index()] == eroles_b[f.index()];
    let opts = MatchOptions {
        exact_labels: true,
        vertex_filter: Some(&vertex_filter),
        edge_filter: Some(&edge_filter),
        ..Default::default()
    };
    let mut found = false;
    for_each_monomorphism(&a.source, &b.source, None, &opts, |phi| {
        let mut anchor = Anchor::default();
        for (v, x) in a.map.mapped_vertices() {
            let Some(y) = b.map.vertex(phi.vertex(v)) else {
                return true;
            };
            anchor.vertex_pairs.push((x, y));
        }
        for (e, x) in a.map.mapped_edges() {
            let Some(y) = b.map.edge(phi.edge(e)) else {
                return true;
            };
            anchor.edge_pairs.push((x, y));
        }
        match isomorphisms(&a.target, &b.target, Some(&anchor), Some(1)) {
            Ok(isos) if !isos.is_empty() => {
                found = true;
                false
            }
            _ => true,
        }
    })?;
    Ok(found)
}

/// The maximum rule of a transition: the whole source as the left graph, the
/// map's domain as the invariant graph with meet labels, the target as the
/// right graph.
pub fn maximum_rule(t: &Transition) -> Result<Rule> {
    let poset = t.source.poset().clone();
    let mut kb = Graph::builder(poset.clone());
    let mut src_to_k = vec![None; t.source.vertex_count()];
    let mut kv_src = Vec::new();
    for v in t.source.vertices() {
        if let Some(w) = t.map.vertex(v) {
            let meet = poset.meet(t.source.vertex_label(v), t.target.vertex_label(w));
            src_to_k[v.index()] = Some(kb.add_vertex(meet));
            kv_src.push(v);
        }
    }
    let mut ke_src = Vec::new();
    for e in t.source.edge_ids() {
        if let Some(f) = t.map.edge(e) {
            let d = t.source.edge(e);
            let meet = poset.meet(d.label, t.target.edge(f).label);
            kb.add_edge(
                src_to_k[d.source.index()].expect("mapped edge has mapped endpoints"),
                src_to_k[d.target.index()].expect("mapped edge has mapped endpoints"),
                meet,
                d.directed,
            )?;
            ke_src.push(e);
        }
    }
    let context = kb.build_arc()?;
    let mut l = GraphMap::new_empty(context.clone(), t.source.clone());
    let mut r = GraphMap::new_empty(context, t.target.clone());
    for (ki, &v) in kv_src.iter().enumerate() {
        l.set_vertex(VertexId(ki as u32), v);
        r.set_vertex(VertexId(ki as u32), t.map.vertex(v).unwrap());
    }
    for (ki, &e) in ke_src.iter().enumerate() {
        l.set_edge(crate::graph::EdgeId(ki as u32), e);
        r.set_edge(crate::graph::EdgeId(ki as u32), t.map.edge(e).unwrap());
    }
    Rule::new(l, r)
}

/// Does the rule generate the transition: some derivation from the source
/// has an element map isomorphic to the transition's.
pub fn generates(rule: &Rule, t: &Transition) -> Result<bool> {
    Ok(generation_witness(rule, &t.source, &t.map, &t.target)?.is_some())
}

pub fn generation_witness_for(
    rule: &Rule,
    t: &Transition,
) -> Result<Option<GenerationWitness>> {
    generation_witness(rule, &t.source, &t.map, &t.target)
}

/// A stored input transition with its equivalence-class code.
#[derive(Debug, Clone)]
pub struct SystemTransition {
    pub source_index: usize,
    pub transition: Transition,
    pub code: CanonicalCode,
    /// How many provided transitions collapsed into this class.
    pub multiplicity: usize,
}

/// An input transition system `(U, T)`.
#[derive(Debug, Clone)]
pub struct TransitionSystem {
    poset: Arc<LabelPoset>,
    inputs: Vec<Arc<Graph>>,
    transitions: Vec<SystemTransition>,
    transition_codes: BTreeMap<CanonicalCode, usize>,
    collapse_spectators: bool,
}

impl TransitionSystem {
    pub fn builder(poset: Arc<LabelPoset>) -> SystemBuilder {
        SystemBuilder {
            poset,
            inputs: Vec::new(),
            input_codes: HashMap::new(),
            transitions: Vec::new(),
            transition_codes: BTreeMap::new(),
            collapse_spectators: false,
        }
    }

    /// Whether transitions are compared modulo untouched spectator
    /// components.
    pub fn collapses_spectators(&self) -> bool {
        self.collapse_spectators
    }

    /// Membership of a (generated) transition in the input set under the
    /// system's comparison policy.
    pub fn contains_transition(&self, t: &Transition) -> bool {
        self.transition_codes
            .contains_key(&t.effective_code(self.collapse_spectators))
    }

    pub fn poset(&self) -> &Arc<LabelPoset> {
        &self.poset
    }

    pub fn inputs(&self) -> &[Arc<Graph>] {
        &self.inputs
    }

    pub fn transitions(&self) -> &[SystemTransition] {
        &self.transitions
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn contains_code(&self, code: &CanonicalCode) -> bool {
        self.transition_codes.contains_key(code)
    }

    pub fn transition_index(&self, code: &CanonicalCode) -> Option<usize> {
        self.transition_codes.get(code).copied()
    }
}

pub struct SystemBuilder {
    poset: Arc<LabelPoset>,
    inputs: Vec<Arc<Graph>>,
    input_codes: HashMap<CanonicalCode, usize>,
    transitions: Vec<SystemTransition>,
    transition_codes: BTreeMap<CanonicalCode, usize>,
    collapse_spectators: bool,
}

impl SystemBuilder {
    /// Compare transitions modulo untouched spectator components (used by
    /// the chemistry systems, where a reaction beside an unrelated molecule
    /// is the same reaction).
    pub fn collapse_spectators(&mut self, yes: bool) -> &mut Self {
        self.collapse_spectators = yes;
        self
    }

    /// Interns an input graph up to isomorphism; returns its index and, when
    /// it merged with an existing representative, the witnessing iso.
    pub fn add_input(&mut self, g: Arc<Graph>) -> Result<(usize, Option<Morphism>)> {
        if !LabelPoset::compatible(g.poset(), &self.poset) {
            return Err(Error::InvalidSystem(
                "input graph uses a different poset".into(),
            ));
        }
        let code = graph_code(&g);
        if let Some(&idx) = self.input_codes.get(&code) {
            if g == self.inputs[idx] {
                return Ok((idx, None));
            }
            let iso = is_isomorphic(&g, &self.inputs[idx])?
                .expect("equal canonical codes imply isomorphism");
            return Ok((idx, Some(iso)));
        }
        self.inputs.push(g);
        let idx = self.inputs.len() - 1;
        self.input_codes.insert(code, idx);
        Ok((idx, None))
    }

    /// Adds a transition, interning its source and deduplicating by
    /// transition equivalence.
    pub fn add_transition(&mut self, t: Transition) -> Result<usize> {
        let (idx, iso) = self.add_input(t.source.clone())?;
        let t = match iso {
            None => t,
            Some(iso) => t.rerooted(&iso)?,
        };
        let code = t.effective_code(self.collapse_spectators);
        if let Some(&ti) = self.transition_codes.get(&code) {
            self.transitions[ti].multiplicity += 1;
            return Ok(ti);
        }
        let ti = self.transitions.len();
        self.transitions.push(SystemTransition {
            source_index: idx,
            transition: t,
            code: code.clone(),
            multiplicity: 1,
        });
        self.transition_codes.insert(code, ti);
        Ok(ti)
    }

    pub fn build(self) -> TransitionSystem {
        TransitionSystem {
            poset: self.poset,
            inputs: self.inputs,
            transitions: self.transitions,
            transition_codes: self.transition_codes,
            collapse_spectators: self.collapse_spectators,
        }
    }
}

/// All transitions a single rule generates on one input graph, as
/// transitions; errors out loudly past the derivation cap.
pub fn generated_from(rule: &Rule, input: &Arc<Graph>, cap: usize) -> Result<Vec<Transition>> {
    let derivations = enumerate_derivations(rule, input)?;
    if derivations.len() > cap {
        return Err(Error::CapExceeded(format!(
            "{} derivations on one input graph (cap {cap})",
            derivations.len()
        )));
    }
    Ok(derivations.iter().map(Transition::from_derivation).collect())
}

/// Deduplicated transitions generated by a rule set over a set of inputs.
pub fn generated_transitions(
    rules: &[Rule],
    inputs: &[Arc<Graph>],
    cap: usize,
) -> Result<Vec<Transition>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for input in inputs {
        for rule in rules {
            for t in generated_from(rule, input, cap)? {
                let code = t.code();
                if seen.insert(code) {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

/// A generated transition outside the input set, with its provenance.
#[derive(Debug, Clone)]
pub struct SpuriousWitness {
    pub rule_index: usize,
    pub input_index: usize,
    pub transition: Transition,
}

/// Outcome of checking a rule set against a system.
#[derive(Debug, Clone)]
pub struct GenerationReport {
    /// Codes of every generated transition.
    pub generated: BTreeSet<CanonicalCode>,
    /// Generated transitions not in the input set, one witness per class.
    pub spurious: Vec<SpuriousWitness>,
    /// Indices of input transitions no rule generates.
    pub missing: Vec<usize>,
}

impl GenerationReport {
    pub fn is_generating(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.spurious.is_empty()
    }
}

/// Runs every rule over every input graph and classifies the outcome.
pub fn check(rules: &[Rule], system: &TransitionSystem, cap: usize) -> Result<GenerationReport> {
    let mut generated = BTreeSet::new();
    let mut spurious = Vec::new();
    let collapse = system.collapses_spectators();
    for (input_index, input) in system.inputs().iter().enumerate() {
        for (rule_index, rule) in rules.iter().enumerate() {
            for t in generated_from(rule, input, cap)? {
                let code = t.effective_code(collapse);
                if generated.insert(code.clone()) && !system.contains_code(&code) {
                    spurious.push(SpuriousWitness {
                        rule_index,
                        input_index,
                        transition: t,
                    });
                }
            }
        }
    }
    let missing = system
        .transitions()
        .iter()
        .enumerate()
        .filter(|(_, t)| !generated.contains(&t.code))
        .map(|(i, _)| i)
        .collect();
    Ok(GenerationReport {
        generated,
        spurious,
        missing,
    })
}

/// Witness that a maximum rule reproduces its transition in foreign context,
/// certifying that no exact generating rule set exists.
#[derive(Debug, Clone)]
pub struct PathologyWitness {
    pub transition_index: usize,
    pub input_index: usize,
    pub spurious: Transition,
}

/// Finds every input transition whose maximum rule, applied somewhere in the
/// input set, yields a transition outside the input set. Any rule generating
/// the transition is a subrule of its maximum rule and so keeps all of these
/// applications; a nonempty result therefore certifies that no exact
/// generating rule set exists.
pub fn detect_pathology(system: &TransitionSystem, cap: usize) -> Result<Vec<PathologyWitness>> {
    let mut out = Vec::new();
    let collapse = system.collapses_spectators();
    for (ti, st) in system.transitions().iter().enumerate() {
        let p = maximum_rule(&st.transition)?;
        let mut seen = BTreeSet::new();
        for (input_index, input) in system.inputs().iter().enumerate() {
            for t in generated_from(&p, input, cap)? {
                let code = t.effective_code(collapse);
                if !system.contains_code(&code) && seen.insert(code) {
                    out.push(PathologyWitness {
                        transition_index: ti,
                        input_index,
                        spurious: t,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::LabelPoset;

    fn poset() -> Arc<LabelPoset> {
        LabelPoset::flat(&["X", "O", "-"]).unwrap()
    }

    fn vertex_graph(labels: &[&str]) -> Arc<Graph> {
        let mut b = Graph::builder(poset());
        for l in labels {
            b.add_vertex_named(l).unwrap();
        }
        b.build_arc().unwrap()
    }

    fn relabel_transition(from: &[&str], to: &[&str], changed: usize) -> Transition {
        let g = vertex_graph(from);
        let h = vertex_graph(to);
        let mut map = GraphMap::new_empty(g, h);
        for i in 0..from.len() {
            map.set_vertex(VertexId(i as u32), VertexId(i as u32));
        }
        let _ = changed;
        Transition::new(map).unwrap()
    }

    #[test]
    fn equivalence_reflexive_and_renaming_invariant() {
        let t = relabel_transition(&["X", "O"], &["O", "O"], 0);
        assert!(transitions_equivalent(&t, &t).unwrap());
        // Same transformation with the vertex order swapped.
        let g = vertex_graph(&["O", "X"]);
        let h = vertex_graph(&["O", "O"]);
        let mut map = GraphMap::new_empty(g, h);
        map.set_vertex(VertexId(0), VertexId(1));
        map.set_vertex(VertexId(1), VertexId(0));
        let t2 = Transition::new(map).unwrap();
        assert!(transitions_equivalent(&t, &t2).unwrap());
        assert_eq!(t.code(), t2.code());
    }

    #[test]
    fn equivalence_distinguishes_maps() {
        // Identity map vs swap map on two X vertices with X targets: the
        // domains coincide but only one map preserves elements; both total
        // maps here, but one maps each vertex to itself and the other
        // crosses. With identical labels these are equivalent; distinguish
        // using labels instead.
        let g = vertex_graph(&["X", "O"]);
        let h = vertex_graph(&["X", "O"]);
        let mut id = GraphMap::new_empty(g.clone(), h.clone());
        id.set_vertex(VertexId(0), VertexId(0));
        id.set_vertex(VertexId(1), VertexId(1));
        let t1 = Transition::new(id).unwrap();
        let mut partial = GraphMap::new_empty(g, h);
        partial.set_vertex(VertexId(0), VertexId(0));
        let t2 = Transition::new(partial).unwrap();
        assert!(!transitions_equivalent(&t1, &t2).unwrap());
        assert_ne!(t1.code(), t2.code());
    }

    #[test]
    fn maximum_rule_generates_its_transition() {
        let t = relabel_transition(&["X", "O"], &["O", "O"], 0);
        let p = maximum_rule(&t).unwrap();
        assert!(generates(&p, &t).unwrap());
        // The changed position carries the meet label eps.
        let eps = poset().bottom();
        let k = &p.context();
        assert!(k.vertices().any(|v| k.vertex_label(v) == eps));
    }

    #[test]
    fn builder_dedups_equivalent_transitions() {
        let mut b = TransitionSystem::builder(poset());
        let t = relabel_transition(&["X", "O"], &["O", "O"], 0);
        let g = vertex_graph(&["O", "X"]);
        let h = vertex_graph(&["O", "O"]);
        let mut map = GraphMap::new_empty(g, h);
        map.set_vertex(VertexId(0), VertexId(1));
        map.set_vertex(VertexId(1), VertexId(0));
        let t2 = Transition::new(map).unwrap();
        b.add_transition(t).unwrap();
        b.add_transition(t2).unwrap();
        let sys = b.build();
        assert_eq!(sys.transition_count(), 1);
        assert_eq!(sys.transitions()[0].multiplicity, 2);
        assert_eq!(sys.inputs().len(), 1);
    }

    #[test]
    fn empty_rule_set_misses_everything() {
        let mut b = TransitionSystem::builder(poset());
        b.add_transition(relabel_transition(&["X"], &["O"], 0)).unwrap();
        let sys = b.build();
        let report = check(&[], &sys, DEFAULT_DERIVATION_CAP).unwrap();
        assert!(!report.is_generating());
        assert_eq!(report.missing.len(), 1);
    }

    #[test]
    fn pathology_empty_for_isolated_transition() {
        let mut b = TransitionSystem::builder(poset());
        b.add_transition(relabel_transition(&["X"], &["O"], 0)).unwrap();
        let sys = b.build();
        assert!(detect_pathology(&sys, DEFAULT_DERIVATION_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn pathology_detects_foreign_context() {
        // t rewrites a lone X; a second input graph contains an X next to an
        // O, where the maximum rule of t also applies.
        let mut b = TransitionSystem::builder(poset());
        b.add_transition(relabel_transition(&["X"], &["O"], 0)).unwrap();
        b.add_input(vertex_graph(&["X", "O"])).unwrap();
        let sys = b.build();
        let pathology = detect_pathology(&sys, DEFAULT_DERIVATION_CAP).unwrap();
        assert!(!pathology.is_empty());
    }
}
