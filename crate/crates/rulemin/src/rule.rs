//! DPO rules as spans `L <-l- K -r-> R` with monic legs.
//!
//! The implemented fragment fixes both legs and all matches injective, which
//! matches the prototype scope: pushout complements are then unique and the
//! downward closure of a rule has a unique minimal element.
//!
//! Rules are normalized to a canonical representative on construction: the
//! invariant graph carries the meets of the linked labels and the whole span
//! is renumbered by the canonical order of the span encoded as one colored
//! graph. Two rules are isomorphic exactly when their canonical codes agree.

use std::sync::Arc;

use crate::canon::{canonicalize, CanonResult, CanonicalCode, ColoredGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::label::LabelId;
use crate::morphism::{GraphMap, Morphism};

/// Multisets of changes a rule (or transition) performs, used both as a fast
/// compatibility screen and for minimal-core construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChangeSignature {
    pub deleted_vertices: usize,
    pub deleted_edges_undirected: usize,
    pub deleted_edges_directed: usize,
    pub created_vertex_labels: Vec<LabelId>,
    pub created_edge_labels: Vec<(LabelId, bool)>,
    pub relabeled_vertices: Vec<(LabelId, LabelId)>,
    pub relabeled_edges: Vec<(LabelId, LabelId)>,
}

impl ChangeSignature {
    pub fn is_empty(&self) -> bool {
        self.deleted_vertices == 0
            && self.deleted_edges_undirected == 0
            && self.deleted_edges_directed == 0
            && self.created_vertex_labels.is_empty()
            && self.created_edge_labels.is_empty()
            && self.relabeled_vertices.is_empty()
            && self.relabeled_edges.is_empty()
    }
}

#[derive(Debug)]
struct RuleInner {
    left: Arc<Graph>,
    context: Arc<Graph>,
    right: Arc<Graph>,
    l: Morphism,
    r: Morphism,
    code: CanonicalCode,
    // Inverses of the legs, indexed by left/right elements.
    l_inv_v: Vec<Option<VertexId>>,
    l_inv_e: Vec<Option<EdgeId>>,
    r_inv_v: Vec<Option<VertexId>>,
    r_inv_e: Vec<Option<EdgeId>>,
    /// Context positions whose label is rewritten on application
    /// (`lambda_K != lambda_R`).
    forced_v: Vec<bool>,
    forced_e: Vec<bool>,
    signature: ChangeSignature,
}

/// A graph transformation rule in canonical form. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Rule(Arc<RuleInner>);

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.0.code == other.0.code
    }
}
impl Eq for Rule {}

impl std::hash::Hash for Rule {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.code.hash(state);
    }
}

/// Renumbering applied by canonicalization, mapping the indices the rule was
/// built with to the indices of the canonical representative.
#[derive(Debug, Clone)]
pub struct RuleRenumbering {
    pub left_v: Vec<usize>,
    pub left_e: Vec<usize>,
    pub context_v: Vec<usize>,
    pub context_e: Vec<usize>,
    pub right_v: Vec<usize>,
    pub right_e: Vec<usize>,
}

impl Rule {
    /// Validates and canonicalizes a span. `l` maps the context into the
    /// left graph, `r` into the right graph; both must be total injective
    /// label-respecting morphisms.
    pub fn new(l: GraphMap, r: GraphMap) -> Result<Rule> {
        Ok(Rule::new_tracked(l, r)?.0)
    }

    pub fn new_tracked(l: GraphMap, r: GraphMap) -> Result<(Rule, RuleRenumbering)> {
        if l.source != r.source {
            return Err(Error::InvalidRule(
                "legs must share the invariant graph".into(),
            ));
        }
        let context0 = l.source.clone();
        let left0 = l.target.clone();
        let right0 = r.target.clone();
        let l0 = Morphism::new(l).map_err(|e| Error::InvalidRule(format!("left leg: {e}")))?;
        let r0 = Morphism::new(r).map_err(|e| Error::InvalidRule(format!("right leg: {e}")))?;

        // Lift the invariant labels to the meets of the linked labels; this
        // is the label-maximal member of the rule's isomorphism class.
        let poset = context0.poset().clone();
        let mut kb = Graph::builder(poset.clone());
        for k in context0.vertices() {
            let meet = poset.meet(
                left0.vertex_label(l0.vertex(k)),
                right0.vertex_label(r0.vertex(k)),
            );
            kb.add_vertex(meet);
        }
        for e in context0.edge_ids() {
            let d = context0.edge(e);
            let meet = poset.meet(
                left0.edge(l0.edge(e)).label,
                right0.edge(r0.edge(e)).label,
            );
            kb.add_edge(d.source, d.target, meet, d.directed)?;
        }
        let context1 = kb.build_arc()?;

        // Canonical renumbering of the whole span.
        let combined = combined_structure(&left0, &context1, &right0, &l0, &r0);
        let canon = canonicalize(&combined);
        let (nl, nk) = (left0.vertex_count(), context1.vertex_count());
        let left_v = side_perm(&canon, 0, nl);
        let context_v = side_perm(&canon, nl, nk);
        let right_v = side_perm(&canon, nl + nk, right0.vertex_count());
        let (left, left_e) = renumber_graph(&left0, &left_v)?;
        let (context, context_e) = renumber_graph(&context1, &context_v)?;
        let (right, right_e) = renumber_graph(&right0, &right_v)?;

        let mut lmap = GraphMap::new_empty(context.clone(), left.clone());
        let mut rmap = GraphMap::new_empty(context.clone(), right.clone());
        for k in context1.vertices() {
            let nk = VertexId(context_v[k.index()] as u32);
            lmap.set_vertex(nk, VertexId(left_v[l0.vertex(k).index()] as u32));
            rmap.set_vertex(nk, VertexId(right_v[r0.vertex(k).index()] as u32));
        }
        for e in context1.edge_ids() {
            let ne = EdgeId(context_e[e.index()] as u32);
            lmap.set_edge(ne, EdgeId(left_e[l0.edge(e).index()] as u32));
            rmap.set_edge(ne, EdgeId(right_e[r0.edge(e).index()] as u32));
        }
        let l = Morphism::new(lmap)?;
        let r = Morphism::new(rmap)?;

        let mut l_inv_v = vec![None; left.vertex_count()];
        let mut l_inv_e = vec![None; left.edge_count()];
        let mut r_inv_v = vec![None; right.vertex_count()];
        let mut r_inv_e = vec![None; right.edge_count()];
        for k in context.vertices() {
            l_inv_v[l.vertex(k).index()] = Some(k);
            r_inv_v[r.vertex(k).index()] = Some(k);
        }
        for e in context.edge_ids() {
            l_inv_e[l.edge(e).index()] = Some(e);
            r_inv_e[r.edge(e).index()] = Some(e);
        }
        let forced_v: Vec<bool> = context
            .vertices()
            .map(|k| context.vertex_label(k) != right.vertex_label(r.vertex(k)))
            .collect();
        let forced_e: Vec<bool> = context
            .edge_ids()
            .map(|e| context.edge(e).label != right.edge(r.edge(e)).label)
            .collect();

        let signature = span_signature(&left, &context, &right, &l, &r, &l_inv_v, &l_inv_e);

        let rule = Rule(Arc::new(RuleInner {
            left,
            context,
            right,
            l,
            r,
            code: canon.code,
            l_inv_v,
            l_inv_e,
            r_inv_v,
            r_inv_e,
            forced_v,
            forced_e,
            signature,
        }));
        let renumbering = RuleRenumbering {
            left_v,
            left_e,
            context_v,
            context_e,
            right_v,
            right_e,
        };
        Ok((rule, renumbering))
    }

    /// The identity rule on a graph: `G <- G -> G`.
    pub fn identity(g: &Arc<Graph>) -> Result<Rule> {
        Rule::new(GraphMap::identity(g), GraphMap::identity(g))
    }

    pub fn left(&self) -> &Arc<Graph> {
        &self.0.left
    }

    pub fn context(&self) -> &Arc<Graph> {
        &self.0.context
    }

    pub fn right(&self) -> &Arc<Graph> {
        &self.0.right
    }

    pub fn l(&self) -> &Morphism {
        &self.0.l
    }

    pub fn r(&self) -> &Morphism {
        &self.0.r
    }

    pub fn code(&self) -> &CanonicalCode {
        &self.0.code
    }

    pub fn signature(&self) -> &ChangeSignature {
        &self.0.signature
    }

    /// Context preimage of a left vertex; `None` means the vertex is deleted.
    pub fn left_context_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.0.l_inv_v[v.index()]
    }

    pub fn left_context_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.0.l_inv_e[e.index()]
    }

    /// Context preimage of a right vertex; `None` means the vertex is created.
    pub fn right_context_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.0.r_inv_v[v.index()]
    }

    pub fn right_context_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.0.r_inv_e[e.index()]
    }

    /// Whether the context position's label is rewritten on application.
    pub fn forced_vertex(&self, k: VertexId) -> bool {
        self.0.forced_v[k.index()]
    }

    pub fn forced_edge(&self, k: EdgeId) -> bool {
        self.0.forced_e[k.index()]
    }

    /// The element map `f_p = r . l^-1` from the left to the right graph.
    pub fn element_map(&self) -> GraphMap {
        let mut map = GraphMap::new_empty(self.0.left.clone(), self.0.right.clone());
        for k in self.0.context.vertices() {
            map.set_vertex(self.0.l.vertex(k), self.0.r.vertex(k));
        }
        for e in self.0.context.edge_ids() {
            map.set_edge(self.0.l.edge(e), self.0.r.edge(e));
        }
        map
    }

    /// Size of the span as `(|V(L)|+|V(K)|+|V(R)|, |E(L)|+|E(K)|+|E(R)|)`.
    pub fn size(&self) -> (usize, usize) {
        (
            self.0.left.vertex_count()
                + self.0.context.vertex_count()
                + self.0.right.vertex_count(),
            self.0.left.edge_count() + self.0.context.edge_count() + self.0.right.edge_count(),
        )
    }

    /// The unique minimal subrule: exactly the deleted, created and
    /// relabeled elements plus the endpoints they need, with meet labels in
    /// the invariant graph.
    pub fn minimal_subrule(&self) -> Result<Rule> {
        Ok(self.minimal_subrule_embedded()?.0)
    }

    /// Minimal subrule together with its embedding into this rule.
    pub fn minimal_subrule_embedded(&self) -> Result<(Rule, CoreEmbedding)> {
        let inner = &self.0;
        let (left, context, right) = (&inner.left, &inner.context, &inner.right);

        // Kept context elements forced into the core.
        let mut keep_kv = vec![false; context.vertex_count()];
        let keep_ke: Vec<bool> = context
            .edge_ids()
            .map(|e| {
                left.edge(inner.l.edge(e)).label != right.edge(inner.r.edge(e)).label
            })
            .collect();
        for k in context.vertices() {
            if left.vertex_label(inner.l.vertex(k)) != right.vertex_label(inner.r.vertex(k)) {
                keep_kv[k.index()] = true;
            }
        }
        for e in context.edge_ids() {
            if keep_ke[e.index()] {
                let d = context.edge(e);
                keep_kv[d.source.index()] = true;
                keep_kv[d.target.index()] = true;
            }
        }
        // Endpoints of deleted left edges.
        for e in left.edge_ids() {
            if inner.l_inv_e[e.index()].is_none() {
                let d = left.edge(e);
                for v in [d.source, d.target] {
                    if let Some(k) = inner.l_inv_v[v.index()] {
                        keep_kv[k.index()] = true;
                    }
                }
            }
        }
        // Endpoints of created right edges.
        for e in right.edge_ids() {
            if inner.r_inv_e[e.index()].is_none() {
                let d = right.edge(e);
                for v in [d.source, d.target] {
                    if let Some(k) = inner.r_inv_v[v.index()] {
                        keep_kv[k.index()] = true;
                    }
                }
            }
        }

        let poset = left.poset().clone();
        let mut lb = Graph::builder(poset.clone());
        let mut kb = Graph::builder(poset.clone());
        let mut rb = Graph::builder(poset);

        // Core left vertices: deleted ones plus images of kept context.
        let mut l_new = vec![None; left.vertex_count()];
        let mut k_new = vec![None; context.vertex_count()];
        let mut r_new = vec![None; right.vertex_count()];
        let mut l_src = Vec::new();
        let mut k_src = Vec::new();
        let mut r_src = Vec::new();
        for v in left.vertices() {
            if inner.l_inv_v[v.index()].is_none() {
                l_new[v.index()] = Some(lb.add_vertex(left.vertex_label(v)));
                l_src.push(v);
            }
        }
        for v in right.vertices() {
            if inner.r_inv_v[v.index()].is_none() {
                r_new[v.index()] = Some(rb.add_vertex(right.vertex_label(v)));
                r_src.push(v);
            }
        }
        for k in context.vertices() {
            if keep_kv[k.index()] {
                let kc = kb.add_vertex(context.vertex_label(k));
                k_new[k.index()] = Some(kc);
                k_src.push(k);
                let lv = inner.l.vertex(k);
                l_new[lv.index()] = Some(lb.add_vertex(left.vertex_label(lv)));
                l_src.push(lv);
                let rv = inner.r.vertex(k);
                r_new[rv.index()] = Some(rb.add_vertex(right.vertex_label(rv)));
                r_src.push(rv);
            }
        }
        // Core edges: deleted left, created right, relabeled context.
        let mut l_esrc = Vec::new();
        let mut k_esrc = Vec::new();
        let mut r_esrc = Vec::new();
        let mut l_enew = vec![None; left.edge_count()];
        let mut k_enew = vec![None; context.edge_count()];
        let mut r_enew = vec![None; right.edge_count()];
        for e in left.edge_ids() {
            if inner.l_inv_e[e.index()].is_none() {
                let d = left.edge(e);
                let ne = lb.add_edge(
                    l_new[d.source.index()].expect("endpoint retained"),
                    l_new[d.target.index()].expect("endpoint retained"),
                    d.label,
                    d.directed,
                )?;
                l_enew[e.index()] = Some(ne);
                l_esrc.push(e);
            }
        }
        for e in right.edge_ids() {
            if inner.r_inv_e[e.index()].is_none() {
                let d = right.edge(e);
                let ne = rb.add_edge(
                    r_new[d.source.index()].expect("endpoint retained"),
                    r_new[d.target.index()].expect("endpoint retained"),
                    d.label,
                    d.directed,
                )?;
                r_enew[e.index()] = Some(ne);
                r_esrc.push(e);
            }
        }
        for e in context.edge_ids() {
            if keep_ke[e.index()] {
                let d = context.edge(e);
                let kc = kb.add_edge(
                    k_new[d.source.index()].expect("endpoint retained"),
                    k_new[d.target.index()].expect("endpoint retained"),
                    d.label,
                    d.directed,
                )?;
                k_enew[e.index()] = Some(kc);
                k_esrc.push(e);
                let le = inner.l.edge(e);
                let ld = left.edge(le);
                let nle = lb.add_edge(
                    l_new[ld.source.index()].expect("endpoint retained"),
                    l_new[ld.target.index()].expect("endpoint retained"),
                    ld.label,
                    ld.directed,
                )?;
                l_enew[le.index()] = Some(nle);
                l_esrc.push(le);
                let re = inner.r.edge(e);
                let rd = right.edge(re);
                let nre = rb.add_edge(
                    r_new[rd.source.index()].expect("endpoint retained"),
                    r_new[rd.target.index()].expect("endpoint retained"),
                    rd.label,
                    rd.directed,
                )?;
                r_enew[re.index()] = Some(nre);
                r_esrc.push(re);
            }
        }

        let core_left = lb.build_arc()?;
        let core_context = kb.build_arc()?;
        let core_right = rb.build_arc()?;
        let mut lmap = GraphMap::new_empty(core_context.clone(), core_left.clone());
        let mut rmap = GraphMap::new_empty(core_context.clone(), core_right.clone());
        for (ci, &k) in k_src.iter().enumerate() {
            let lv = inner.l.vertex(k);
            let rv = inner.r.vertex(k);
            lmap.set_vertex(VertexId(ci as u32), l_new[lv.index()].unwrap());
            rmap.set_vertex(VertexId(ci as u32), r_new[rv.index()].unwrap());
        }
        for (ci, &e) in k_esrc.iter().enumerate() {
            lmap.set_edge(
                EdgeId(ci as u32),
                l_enew[inner.l.edge(e).index()].unwrap(),
            );
            rmap.set_edge(
                EdgeId(ci as u32),
                r_enew[inner.r.edge(e).index()].unwrap(),
            );
        }
        let (core, renumber) = Rule::new_tracked(lmap, rmap)?;
        // Embedding of the canonical core back into this rule.
        let mut emb = CoreEmbedding {
            left_v: vec![VertexId(0); core.left().vertex_count()],
            left_e: vec![EdgeId(0); core.left().edge_count()],
            context_v: vec![VertexId(0); core.context().vertex_count()],
            context_e: vec![EdgeId(0); core.context().edge_count()],
            right_v: vec![VertexId(0); core.right().vertex_count()],
            right_e: vec![EdgeId(0); core.right().edge_count()],
        };
        for (built, &orig) in l_src.iter().enumerate() {
            emb.left_v[renumber.left_v[built]] = orig;
        }
        for (built, &orig) in l_esrc.iter().enumerate() {
            emb.left_e[renumber.left_e[built]] = orig;
        }
        for (built, &orig) in k_src.iter().enumerate() {
            emb.context_v[renumber.context_v[built]] = orig;
        }
        for (built, &orig) in k_esrc.iter().enumerate() {
            emb.context_e[renumber.context_e[built]] = orig;
        }
        for (built, &orig) in r_src.iter().enumerate() {
            emb.right_v[renumber.right_v[built]] = orig;
        }
        for (built, &orig) in r_esrc.iter().enumerate() {
            emb.right_e[renumber.right_e[built]] = orig;
        }
        Ok((core, emb))
    }
}

/// Element-wise embedding of one rule inside another (core into parent).
#[derive(Debug, Clone)]
pub struct CoreEmbedding {
    pub left_v: Vec<VertexId>,
    pub left_e: Vec<EdgeId>,
    pub context_v: Vec<VertexId>,
    pub context_e: Vec<EdgeId>,
    pub right_v: Vec<VertexId>,
    pub right_e: Vec<EdgeId>,
}

/// True iff the rules are subrules of each other; on canonical
/// representatives this is code equality.
pub fn rules_isomorphic(a: &Rule, b: &Rule) -> bool {
    a.code() == b.code()
}

/// Change signature of an arbitrary partial element map: what it deletes,
/// what the target adds, and which linked labels differ.
pub fn signature_of_map(map: &GraphMap) -> ChangeSignature {
    let source = &map.source;
    let target = &map.target;
    let mut sig = ChangeSignature::default();
    let mut covered_v = vec![false; target.vertex_count()];
    let mut covered_e = vec![false; target.edge_count()];
    for v in source.vertices() {
        match map.vertex(v) {
            None => sig.deleted_vertices += 1,
            Some(w) => {
                covered_v[w.index()] = true;
                let (a, b) = (source.vertex_label(v), target.vertex_label(w));
                if a != b {
                    sig.relabeled_vertices.push((a, b));
                }
            }
        }
    }
    for e in source.edge_ids() {
        match map.edge(e) {
            None => {
                if source.edge(e).directed {
                    sig.deleted_edges_directed += 1;
                } else {
                    sig.deleted_edges_undirected += 1;
                }
            }
            Some(f) => {
                covered_e[f.index()] = true;
                let (a, b) = (source.edge(e).label, target.edge(f).label);
                if a != b {
                    sig.relabeled_edges.push((a, b));
                }
            }
        }
    }
    for w in target.vertices() {
        if !covered_v[w.index()] {
            sig.created_vertex_labels.push(target.vertex_label(w));
        }
    }
    for f in target.edge_ids() {
        if !covered_e[f.index()] {
            let d = target.edge(f);
            sig.created_edge_labels.push((d.label, d.directed));
        }
    }
    sig.created_vertex_labels.sort_unstable();
    sig.created_edge_labels.sort_unstable();
    sig.relabeled_vertices.sort_unstable();
    sig.relabeled_edges.sort_unstable();
    sig
}

fn span_signature(
    left: &Arc<Graph>,
    context: &Arc<Graph>,
    right: &Arc<Graph>,
    l: &Morphism,
    r: &Morphism,
    l_inv_v: &[Option<VertexId>],
    l_inv_e: &[Option<EdgeId>],
) -> ChangeSignature {
    let mut sig = ChangeSignature::default();
    for v in left.vertices() {
        if l_inv_v[v.index()].is_none() {
            sig.deleted_vertices += 1;
        }
    }
    for e in left.edge_ids() {
        if l_inv_e[e.index()].is_none() {
            if left.edge(e).directed {
                sig.deleted_edges_directed += 1;
            } else {
                sig.deleted_edges_undirected += 1;
            }
        }
    }
    let mut created_in_right = vec![true; right.vertex_count()];
    let mut created_e = vec![true; right.edge_count()];
    for k in context.vertices() {
        created_in_right[r.vertex(k).index()] = false;
        let rl = right.vertex_label(r.vertex(k));
        // A position is rewritten exactly when the invariant label (the meet
        // after normalization) differs from the right label.
        if context.vertex_label(k) != rl {
            sig.relabeled_vertices
                .push((left.vertex_label(l.vertex(k)), rl));
        }
    }
    for e in context.edge_ids() {
        created_e[r.edge(e).index()] = false;
        let rl = right.edge(r.edge(e)).label;
        if context.edge(e).label != rl {
            sig.relabeled_edges.push((left.edge(l.edge(e)).label, rl));
        }
    }
    for v in right.vertices() {
        if created_in_right[v.index()] {
            sig.created_vertex_labels.push(right.vertex_label(v));
        }
    }
    for e in right.edge_ids() {
        if created_e[e.index()] {
            let d = right.edge(e);
            sig.created_edge_labels.push((d.label, d.directed));
        }
    }
    sig.created_vertex_labels.sort_unstable();
    sig.created_edge_labels.sort_unstable();
    sig.relabeled_vertices.sort_unstable();
    sig.relabeled_edges.sort_unstable();
    sig
}

const SIDE_SHIFT: u32 = 32;
const EDGE_SIDE_SHIFT: u32 = 40;

fn combined_structure(
    lg: &Arc<Graph>,
    context: &Arc<Graph>,
    rg: &Arc<Graph>,
    l: &Morphism,
    r: &Morphism,
) -> ColoredGraph {
    let (nl, nk) = (lg.vertex_count(), context.vertex_count());
    let mut vertex_colors = Vec::with_capacity(nl + nk + rg.vertex_count());
    for v in lg.vertices() {
        vertex_colors.push((1u64 << SIDE_SHIFT) | lg.vertex_label(v).0 as u64);
    }
    for k in context.vertices() {
        vertex_colors.push((2u64 << SIDE_SHIFT) | context.vertex_label(k).0 as u64);
    }
    for v in rg.vertices() {
        vertex_colors.push((3u64 << SIDE_SHIFT) | rg.vertex_label(v).0 as u64);
    }
    let mut edges = Vec::new();
    for e in lg.edge_ids() {
        let d = lg.edge(e);
        edges.push((
            d.source.index(),
            d.target.index(),
            d.directed,
            (1u64 << EDGE_SIDE_SHIFT) | d.label.0 as u64,
        ));
    }
    for e in context.edge_ids() {
        let d = context.edge(e);
        edges.push((
            nl + d.source.index(),
            nl + d.target.index(),
            d.directed,
            (2u64 << EDGE_SIDE_SHIFT) | d.label.0 as u64,
        ));
    }
    for e in rg.edge_ids() {
        let d = rg.edge(e);
        edges.push((
            nl + nk + d.source.index(),
            nl + nk + d.target.index(),
            d.directed,
            (3u64 << EDGE_SIDE_SHIFT) | d.label.0 as u64,
        ));
    }
    for k in context.vertices() {
        edges.push((
            nl + k.index(),
            l.vertex(k).index(),
            true,
            4u64 << EDGE_SIDE_SHIFT,
        ));
        edges.push((
            nl + k.index(),
            nl + nk + r.vertex(k).index(),
            true,
            5u64 << EDGE_SIDE_SHIFT,
        ));
    }
    ColoredGraph {
        vertex_colors,
        edges,
    }
}

/// Positions of one side's vertices in the canonical order, compacted to a
/// permutation of that side.
fn side_perm(canon: &CanonResult, offset: usize, count: usize) -> Vec<usize> {
    let mut by_pos: Vec<(usize, usize)> = (0..count)
        .map(|i| (canon.order[offset + i], i))
        .collect();
    by_pos.sort_unstable();
    let mut perm = vec![0usize; count];
    for (rank, &(_, i)) in by_pos.iter().enumerate() {
        perm[i] = rank;
    }
    perm
}

/// Rebuilds a graph with vertices permuted to `new_pos` and edges sorted by
/// their canonical key; returns the edge permutation (old index -> new).
fn renumber_graph(g: &Arc<Graph>, new_pos: &[usize]) -> Result<(Arc<Graph>, Vec<usize>)> {
    let mut b = Graph::builder(g.poset().clone());
    let mut labels = vec![None; g.vertex_count()];
    for v in g.vertices() {
        labels[new_pos[v.index()]] = Some(g.vertex_label(v));
    }
    for l in labels {
        b.add_vertex(l.expect("permutation is total"));
    }
    let mut keyed: Vec<((usize, usize, bool, LabelId), usize)> = g
        .edge_ids()
        .map(|e| {
            let d = g.edge(e);
            let (mut a, mut bpos) = (new_pos[d.source.index()], new_pos[d.target.index()]);
            if !d.directed && a > bpos {
                std::mem::swap(&mut a, &mut bpos);
            }
            ((a, bpos, d.directed, d.label), e.index())
        })
        .collect();
    keyed.sort_unstable();
    let mut eperm = vec![0usize; g.edge_count()];
    for (rank, &((a, t, directed, label), old)) in keyed.iter().enumerate() {
        b.add_edge(VertexId(a as u32), VertexId(t as u32), label, directed)?;
        eperm[old] = rank;
    }
    Ok((b.build_arc()?, eperm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::LabelPoset;

    fn poset() -> Arc<LabelPoset> {
        LabelPoset::flat(&["a", "b", "c", "-"]).unwrap()
    }

    fn single_vertex(label: &str) -> Arc<Graph> {
        let mut b = Graph::builder(poset());
        b.add_vertex_named(label).unwrap();
        b.build_arc().unwrap()
    }

    fn relabel_rule(from: &str, to: &str) -> Rule {
        let left = single_vertex(from);
        let right = single_vertex(to);
        let p = poset();
        let mut kb = Graph::builder(p.clone());
        kb.add_vertex(p.bottom());
        let k = kb.build_arc().unwrap();
        let mut l = GraphMap::new_empty(k.clone(), left);
        l.set_vertex(VertexId(0), VertexId(0));
        let mut r = GraphMap::new_empty(k, right);
        r.set_vertex(VertexId(0), VertexId(0));
        Rule::new(l, r).unwrap()
    }

    #[test]
    fn identity_rule_is_valid() {
        let g = single_vertex("a");
        let p = Rule::identity(&g).unwrap();
        assert!(p.signature().is_empty());
        let fm = p.element_map();
        assert!(fm.is_total());
    }

    #[test]
    fn missing_edge_image_rejected() {
        let p = poset();
        let mut kb = Graph::builder(p.clone());
        let u = kb.add_vertex_named("a").unwrap();
        let v = kb.add_vertex_named("a").unwrap();
        kb.add_edge_named(u, v, "-", false).unwrap();
        let k = kb.build_arc().unwrap();
        let mut lb = Graph::builder(p.clone());
        lb.add_vertex_named("a").unwrap();
        lb.add_vertex_named("a").unwrap();
        let left = lb.build_arc().unwrap();
        let mut l = GraphMap::new_empty(k.clone(), left);
        l.set_vertex(u, VertexId(0));
        l.set_vertex(v, VertexId(1));
        // Context edge has no left image: leg not total.
        let r = GraphMap::identity(&k);
        assert!(matches!(Rule::new(l, r), Err(Error::InvalidRule(_))));
    }

    #[test]
    fn label_violation_rejected() {
        let left = single_vertex("a");
        let right = single_vertex("a");
        let k = single_vertex("b");
        let mut l = GraphMap::new_empty(k.clone(), left);
        l.set_vertex(VertexId(0), VertexId(0));
        let mut r = GraphMap::new_empty(k, right);
        r.set_vertex(VertexId(0), VertexId(0));
        assert!(Rule::new(l, r).is_err());
    }

    #[test]
    fn context_labels_lifted_to_meet() {
        // An identity-behaving rule with an eps context label normalizes to
        // the same representative as the one with the concrete label.
        let a = relabel_rule_same_labels("a");
        let via_eps = relabel_rule("a", "a");
        assert!(rules_isomorphic(&a, &via_eps));
        assert_eq!(
            via_eps.context().vertex_label(VertexId(0)),
            via_eps.context().poset().id("a").unwrap()
        );
    }

    fn relabel_rule_same_labels(l: &str) -> Rule {
        let g = single_vertex(l);
        Rule::identity(&g).unwrap()
    }

    #[test]
    fn relabel_rule_signature() {
        let p = relabel_rule("a", "b");
        assert_eq!(p.signature().relabeled_vertices.len(), 1);
        assert!(p.forced_vertex(VertexId(0)));
        // Context carries the meet, which is eps in a flat poset.
        assert_eq!(
            p.context().vertex_label(VertexId(0)),
            p.context().poset().bottom()
        );
    }

    #[test]
    fn canonical_code_invariant_under_renaming() {
        // Same rule built with swapped vertex insertion order.
        let p = poset();
        let build = |swap: bool| {
            let mut lb = Graph::builder(p.clone());
            let (a, b) = if swap {
                let b_ = lb.add_vertex_named("b").unwrap();
                let a_ = lb.add_vertex_named("a").unwrap();
                (a_, b_)
            } else {
                let a_ = lb.add_vertex_named("a").unwrap();
                let b_ = lb.add_vertex_named("b").unwrap();
                (a_, b_)
            };
            lb.add_edge_named(a, b, "-", false).unwrap();
            let left = lb.build_arc().unwrap();
            let mut kb = Graph::builder(p.clone());
            let ka = kb.add_vertex_named("a").unwrap();
            let kv = kb.add_vertex_named("b").unwrap();
            let k = kb.build_arc().unwrap();
            let mut l = GraphMap::new_empty(k.clone(), left);
            l.set_vertex(ka, a);
            l.set_vertex(kv, b);
            let mut rb = Graph::builder(p.clone());
            let ra = rb.add_vertex_named("a").unwrap();
            let rv = rb.add_vertex_named("b").unwrap();
            let right = rb.build_arc().unwrap();
            let mut r = GraphMap::new_empty(k, right);
            r.set_vertex(ka, ra);
            r.set_vertex(kv, rv);
            Rule::new(l, r).unwrap()
        };
        assert!(rules_isomorphic(&build(false), &build(true)));
    }

    #[test]
    fn minimal_subrule_of_identity_is_empty() {
        let g = single_vertex("a");
        let p = Rule::identity(&g).unwrap();
        let core = p.minimal_subrule().unwrap();
        assert_eq!(core.left().vertex_count(), 0);
        assert_eq!(core.right().vertex_count(), 0);
        assert_eq!(core.context().vertex_count(), 0);
    }

    #[test]
    fn minimal_subrule_idempotent() {
        let p = relabel_rule("a", "b");
        let core = p.minimal_subrule().unwrap();
        let core2 = core.minimal_subrule().unwrap();
        assert!(rules_isomorphic(&core, &core2));
        assert!(rules_isomorphic(&core, &p));
    }
}
