//! File formats: posets, graphs, rules and transition systems as JSON, plus
//! the GML-style rule export for external graph-transformation tooling.
//!
//! Graph files list vertices with explicit integer ids and edges referencing
//! those ids; edges themselves are identified by their array position. On
//! load, arbitrary ids are remapped to dense indices; on write, ids are the
//! indices. Transition files reference their source graph by index into the
//! input list and carry explicit vertex and edge maps.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::label::{LabelPoset, DEFAULT_BOTTOM, DEFAULT_TOP};
use crate::morphism::GraphMap;
use crate::rule::Rule;
use crate::transition::{Transition, TransitionSystem};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetFile {
    #[serde(default = "default_bottom")]
    pub bottom: String,
    #[serde(default = "default_top")]
    pub top: String,
    pub atoms: Vec<String>,
    /// `a < b` pairs; a flat poset when empty.
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

fn default_bottom() -> String {
    DEFAULT_BOTTOM.to_string()
}

fn default_top() -> String {
    DEFAULT_TOP.to_string()
}

impl PosetFile {
    pub fn to_poset(&self) -> Result<Arc<LabelPoset>> {
        LabelPoset::with_covers(&self.bottom, &self.top, &self.atoms, &self.covers)
    }

    pub fn from_poset(poset: &LabelPoset) -> PosetFile {
        PosetFile {
            bottom: poset.name(poset.bottom()).to_string(),
            top: poset.name(poset.top()).to_string(),
            atoms: poset.atoms().map(str::to_string).collect(),
            covers: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexFile {
    pub id: u64,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFile {
    pub source: u64,
    pub target: u64,
    pub label: String,
    #[serde(default)]
    pub directed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexFile>,
    #[serde(default)]
    pub edges: Vec<EdgeFile>,
}

impl GraphFile {
    /// Builds the graph; returns it with the id-to-index mapping.
    pub fn to_graph(&self, poset: &Arc<LabelPoset>) -> Result<(Arc<Graph>, HashMap<u64, VertexId>)> {
        let mut b = Graph::builder(poset.clone());
        let mut ids = HashMap::new();
        for v in &self.vertices {
            let vid = b.add_vertex_named(&v.label)?;
            if ids.insert(v.id, vid).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {}", v.id)));
            }
        }
        for e in &self.edges {
            let s = *ids
                .get(&e.source)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex id {}", e.source)))?;
            let t = *ids
                .get(&e.target)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex id {}", e.target)))?;
            b.add_edge_named(s, t, &e.label, e.directed)?;
        }
        Ok((b.build_arc()?, ids))
    }

    pub fn from_graph(g: &Graph) -> GraphFile {
        let poset = g.poset();
        GraphFile {
            vertices: g
                .vertices()
                .map(|v| VertexFile {
                    id: v.0 as u64,
                    label: poset.name(g.vertex_label(v)).to_string(),
                })
                .collect(),
            edges: g
                .edge_ids()
                .map(|e| {
                    let d = g.edge(e);
                    EdgeFile {
                        source: d.source.0 as u64,
                        target: d.target.0 as u64,
                        label: poset.name(d.label).to_string(),
                        directed: d.directed,
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    /// Pairs of vertex ids `(from, to)`.
    #[serde(default)]
    pub vertices: Vec<(u64, u64)>,
    /// Pairs of edge positions `(from, to)`.
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleFile {
    pub left: GraphFile,
    pub context: GraphFile,
    pub right: GraphFile,
    pub l: MapFile,
    pub r: MapFile,
}

impl RuleFile {
    pub fn to_rule(&self, poset: &Arc<LabelPoset>) -> Result<Rule> {
        let (left, lids) = self.left.to_graph(poset)?;
        let (context, kids) = self.context.to_graph(poset)?;
        let (right, rids) = self.right.to_graph(poset)?;
        let l = map_from_file(&self.l, &context, &left, &kids, &lids)?;
        let r = map_from_file(&self.r, &context, &right, &kids, &rids)?;
        Rule::new(l, r)
    }

    pub fn from_rule(rule: &Rule) -> RuleFile {
        RuleFile {
            left: GraphFile::from_graph(rule.left()),
            context: GraphFile::from_graph(rule.context()),
            right: GraphFile::from_graph(rule.right()),
            l: MapFile {
                vertices: rule
                    .context()
                    .vertices()
                    .map(|k| (k.0 as u64, rule.l().vertex(k).0 as u64))
                    .collect(),
                edges: rule
                    .context()
                    .edge_ids()
                    .map(|e| (e.index(), rule.l().edge(e).index()))
                    .collect(),
            },
            r: MapFile {
                vertices: rule
                    .context()
                    .vertices()
                    .map(|k| (k.0 as u64, rule.r().vertex(k).0 as u64))
                    .collect(),
                edges: rule
                    .context()
                    .edge_ids()
                    .map(|e| (e.index(), rule.r().edge(e).index()))
                    .collect(),
            },
        }
    }
}

fn map_from_file(
    file: &MapFile,
    source: &Arc<Graph>,
    target: &Arc<Graph>,
    source_ids: &HashMap<u64, VertexId>,
    target_ids: &HashMap<u64, VertexId>,
) -> Result<GraphMap> {
    let mut map = GraphMap::new_empty(source.clone(), target.clone());
    for &(from, to) in &file.vertices {
        let f = *source_ids
            .get(&from)
            .ok_or_else(|| Error::InvalidMap(format!("unknown source vertex id {from}")))?;
        let t = *target_ids
            .get(&to)
            .ok_or_else(|| Error::InvalidMap(format!("unknown target vertex id {to}")))?;
        map.set_vertex(f, t);
    }
    for &(from, to) in &file.edges {
        if from >= source.edge_count() || to >= target.edge_count() {
            return Err(Error::InvalidMap(format!(
                "edge position out of range: ({from}, {to})"
            )));
        }
        map.set_edge(EdgeId(from as u32), EdgeId(to as u32));
    }
    Ok(map)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleSetFile {
    pub poset: PosetFile,
    pub rules: Vec<RuleFile>,
}

impl RuleSetFile {
    pub fn to_rules(&self) -> Result<(Arc<LabelPoset>, Vec<Rule>)> {
        let poset = self.poset.to_poset()?;
        let rules = self
            .rules
            .iter()
            .map(|r| r.to_rule(&poset))
            .collect::<Result<Vec<_>>>()?;
        Ok((poset, rules))
    }

    pub fn from_rules(poset: &LabelPoset, rules: &[Rule]) -> RuleSetFile {
        RuleSetFile {
            poset: PosetFile::from_poset(poset),
            rules: rules.iter().map(RuleFile::from_rule).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionFile {
    /// Index into the system's input list.
    pub source: usize,
    pub target: GraphFile,
    #[serde(default)]
    pub vertex_map: Vec<(u64, u64)>,
    #[serde(default)]
    pub edge_map: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub poset: PosetFile,
    /// Compare transitions modulo untouched spectator components.
    #[serde(default)]
    pub collapse_spectators: bool,
    pub inputs: Vec<GraphFile>,
    #[serde(default)]
    pub transitions: Vec<TransitionFile>,
}

impl SystemFile {
    pub fn to_system(&self) -> Result<TransitionSystem> {
        let poset = self.poset.to_poset()?;
        let mut builder = TransitionSystem::builder(poset.clone());
        builder.collapse_spectators(self.collapse_spectators);
        let mut graphs = Vec::new();
        for g in &self.inputs {
            let (graph, ids) = g.to_graph(&poset)?;
            builder.add_input(graph.clone())?;
            graphs.push((graph, ids));
        }
        for t in &self.transitions {
            let (source, source_ids) = graphs
                .get(t.source)
                .ok_or_else(|| Error::InvalidSystem(format!("bad source index {}", t.source)))?;
            let (target, target_ids) = t.target.to_graph(&poset)?;
            let map = map_from_file(
                &MapFile {
                    vertices: t.vertex_map.clone(),
                    edges: t.edge_map.clone(),
                },
                source,
                &target,
                source_ids,
                &target_ids,
            )?;
            builder.add_transition(Transition::new(map)?)?;
        }
        Ok(builder.build())
    }

    pub fn from_system(system: &TransitionSystem) -> SystemFile {
        SystemFile {
            poset: PosetFile::from_poset(system.poset()),
            collapse_spectators: system.collapses_spectators(),
            inputs: system
                .inputs()
                .iter()
                .map(|g| GraphFile::from_graph(g))
                .collect(),
            transitions: system
                .transitions()
                .iter()
                .map(|st| TransitionFile {
                    source: st.source_index,
                    target: GraphFile::from_graph(&st.transition.target),
                    vertex_map: st
                        .transition
                        .map
                        .mapped_vertices()
                        .map(|(a, b)| (a.0 as u64, b.0 as u64))
                        .collect(),
                    edge_map: st
                        .transition
                        .map
                        .mapped_edges()
                        .map(|(a, b)| (a.index(), b.index()))
                        .collect(),
                })
                .collect(),
        }
    }
}

/// GML-style rule span in the layout external graph-transformation tools
/// read: shared context ids, left-only and right-only elements, and label
/// pairs on relabeled context entries.
pub fn rule_to_gml(rule: &Rule, name: &str) -> String {
    let mut out = String::new();
    let poset = rule.left().poset();
    let _ = writeln!(out, "rule [");
    let _ = writeln!(out, "  ruleID \"{name}\"");
    // Shared numbering: context elements get their context index; left-only
    // and right-only elements get offsets.
    let lv_id = |v: VertexId| match rule.left_context_vertex(v) {
        Some(k) => k.0 as usize,
        None => rule.context().vertex_count() + v.index(),
    };
    let rv_id = |v: VertexId| match rule.right_context_vertex(v) {
        Some(k) => k.0 as usize,
        None => rule.context().vertex_count() + rule.left().vertex_count() + v.index(),
    };
    let _ = writeln!(out, "  left [");
    for v in rule.left().vertices() {
        if rule.left_context_vertex(v).is_none() {
            let _ = writeln!(
                out,
                "    node [ id {} label \"{}\" ]",
                lv_id(v),
                poset.name(rule.left().vertex_label(v))
            );
        }
    }
    for e in rule.left().edge_ids() {
        if rule.left_context_edge(e).is_none() {
            let d = rule.left().edge(e);
            let _ = writeln!(
                out,
                "    edge [ source {} target {} label \"{}\" ]",
                lv_id(d.source),
                lv_id(d.target),
                poset.name(d.label)
            );
        }
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "  context [");
    for k in rule.context().vertices() {
        let ll = rule.left().vertex_label(rule.l().vertex(k));
        let rl = rule.right().vertex_label(rule.r().vertex(k));
        if ll == rl {
            let _ = writeln!(
                out,
                "    node [ id {} label \"{}\" ]",
                k.0,
                poset.name(ll)
            );
        } else {
            let _ = writeln!(
                out,
                "    node [ id {} labelLeft \"{}\" labelRight \"{}\" ]",
                k.0,
                poset.name(ll),
                poset.name(rl)
            );
        }
    }
    for e in rule.context().edge_ids() {
        let d = rule.context().edge(e);
        let ll = rule.left().edge(rule.l().edge(e)).label;
        let rl = rule.right().edge(rule.r().edge(e)).label;
        if ll == rl {
            let _ = writeln!(
                out,
                "    edge [ source {} target {} label \"{}\" ]",
                d.source.0, d.target.0, poset.name(ll)
            );
        } else {
            let _ = writeln!(
                out,
                "    edge [ source {} target {} labelLeft \"{}\" labelRight \"{}\" ]",
                d.source.0,
                d.target.0,
                poset.name(ll),
                poset.name(rl)
            );
        }
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "  right [");
    for v in rule.right().vertices() {
        if rule.right_context_vertex(v).is_none() {
            let _ = writeln!(
                out,
                "    node [ id {} label \"{}\" ]",
                rv_id(v),
                poset.name(rule.right().vertex_label(v))
            );
        }
    }
    for e in rule.right().edge_ids() {
        if rule.right_context_edge(e).is_none() {
            let d = rule.right().edge(e);
            let _ = writeln!(
                out,
                "    edge [ source {} target {} label \"{}\" ]",
                rv_id(d.source),
                rv_id(d.target),
                poset.name(d.label)
            );
        }
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "]");
    out
}

/// FNV-1a hash of file contents, for run manifests.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_roundtrip_with_sparse_ids() {
        let json = r#"{
            "vertices": [{"id": 10, "label": "C"}, {"id": 3, "label": "O"}],
            "edges": [{"source": 10, "target": 3, "label": "=", "directed": false}]
        }"#;
        let gf: GraphFile = serde_json::from_str(json).unwrap();
        let poset = LabelPoset::flat(&["C", "O", "="]).unwrap();
        let (g, ids) = gf.to_graph(&poset).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(ids[&10], VertexId(0));
        let back = GraphFile::from_graph(&g);
        let (g2, _) = back.to_graph(&poset).unwrap();
        assert_eq!(*g, *g2);
    }

    #[test]
    fn rule_roundtrip() {
        let poset = LabelPoset::flat(&["a", "b", "-"]).unwrap();
        let mut b = Graph::builder(poset.clone());
        let v = b.add_vertex_named("a").unwrap();
        let w = b.add_vertex_named("b").unwrap();
        b.add_edge_named(v, w, "-", false).unwrap();
        let left = b.build_arc().unwrap();
        let rule = Rule::identity(&left).unwrap();
        let rf = RuleFile::from_rule(&rule);
        let rule2 = rf.to_rule(&poset).unwrap();
        assert_eq!(rule.code(), rule2.code());
    }

    #[test]
    fn system_roundtrip_preserves_classes() {
        let sys = crate::grammar::gen_grammar(&crate::grammar::GrammarSpec {
            encoding: crate::grammar::GrammarEncoding::S1,
            max_len: 3,
        })
        .unwrap();
        let file = SystemFile::from_system(&sys);
        let text = serde_json::to_string(&file).unwrap();
        let file2: SystemFile = serde_json::from_str(&text).unwrap();
        let sys2 = file2.to_system().unwrap();
        assert_eq!(sys.inputs().len(), sys2.inputs().len());
        assert_eq!(sys.transition_count(), sys2.transition_count());
        for (a, b) in sys.transitions().iter().zip(sys2.transitions()) {
            assert_eq!(a.code, b.code);
        }
    }

    #[test]
    fn gml_export_mentions_relabels() {
        let poset = LabelPoset::flat(&["a", "b", "-"]).unwrap();
        let mut lb = Graph::builder(poset.clone());
        lb.add_vertex_named("a").unwrap();
        let left = lb.build_arc().unwrap();
        let mut rb = Graph::builder(poset.clone());
        rb.add_vertex_named("b").unwrap();
        let right = rb.build_arc().unwrap();
        let mut kb = Graph::builder(poset.clone());
        kb.add_vertex(poset.bottom());
        let k = kb.build_arc().unwrap();
        let mut l = GraphMap::new_empty(k.clone(), left);
        l.set_vertex(VertexId(0), VertexId(0));
        let mut r = GraphMap::new_empty(k, right);
        r.set_vertex(VertexId(0), VertexId(0));
        let rule = Rule::new(l, r).unwrap();
        let gml = rule_to_gml(&rule, "relabel");
        assert!(gml.contains("labelLeft \"a\" labelRight \"b\""));
    }
}
