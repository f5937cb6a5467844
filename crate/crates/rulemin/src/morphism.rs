//! Partial graph functions, monomorphisms and the embedding search.
//!
//! A [`GraphMap`] is a partial function on vertices and edges where every
//! mapped edge has mapped endpoints and matching incidence. Total injective
//! label-respecting maps are wrapped as [`Morphism`]; in the implemented
//! fragment every rule leg and every match is such a monomorphism.
//!
//! The matcher is anchor-extensible backtracking with label and degree
//! pruning and a deterministic candidate order, so identical inputs always
//! enumerate embeddings in the same order.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, IncKind, VertexId};
use crate::label::LabelPoset;

/// A partial function between the element sets of two graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    vmap: Vec<Option<VertexId>>,
    emap: Vec<Option<EdgeId>>,
}

impl GraphMap {
    pub fn new_empty(source: Arc<Graph>, target: Arc<Graph>) -> GraphMap {
        let vn = source.vertex_count();
        let en = source.edge_count();
        GraphMap {
            source,
            target,
            vmap: vec![None; vn],
            emap: vec![None; en],
        }
    }

    pub fn from_parts(
        source: Arc<Graph>,
        target: Arc<Graph>,
        vmap: Vec<Option<VertexId>>,
        emap: Vec<Option<EdgeId>>,
    ) -> Result<GraphMap> {
        if vmap.len() != source.vertex_count() || emap.len() != source.edge_count() {
            return Err(Error::InvalidMap("map arity mismatch".into()));
        }
        let map = GraphMap {
            source,
            target,
            vmap,
            emap,
        };
        map.validate_function()?;
        Ok(map)
    }

    /// Identity on a graph.
    pub fn identity(g: &Arc<Graph>) -> GraphMap {
        GraphMap {
            source: g.clone(),
            target: g.clone(),
            vmap: g.vertices().map(Some).collect(),
            emap: g.edge_ids().map(Some).collect(),
        }
    }

    pub fn set_vertex(&mut self, v: VertexId, w: VertexId) {
        self.vmap[v.index()] = Some(w);
    }

    pub fn set_edge(&mut self, e: EdgeId, f: EdgeId) {
        self.emap[e.index()] = Some(f);
    }

    pub fn vertex(&self, v: VertexId) -> Option<VertexId> {
        self.vmap[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.emap[e.index()]
    }

    pub fn mapped_vertices(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vmap
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|w| (VertexId(i as u32), w)))
    }

    pub fn mapped_edges(&self) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        self.emap
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|f| (EdgeId(i as u32), f)))
    }

    pub fn mapped_vertex_count(&self) -> usize {
        self.vmap.iter().filter(|m| m.is_some()).count()
    }

    pub fn mapped_edge_count(&self) -> usize {
        self.emap.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.vmap.iter().all(|m| m.is_some()) && self.emap.iter().all(|m| m.is_some())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen_v: Vec<bool> = vec![false; self.target.vertex_count()];
        for m in self.vmap.iter().flatten() {
            if seen_v[m.index()] {
                return false;
            }
            seen_v[m.index()] = true;
        }
        let mut seen_e: Vec<bool> = vec![false; self.target.edge_count()];
        for m in self.emap.iter().flatten() {
            if seen_e[m.index()] {
                return false;
            }
            seen_e[m.index()] = true;
        }
        true
    }

    /// Checks the partial graph function conditions: a mapped edge has both
    /// endpoints mapped, and its image edge connects the endpoint images with
    /// the same directedness (orientation preserved for directed edges).
    pub fn validate_function(&self) -> Result<()> {
        if !LabelPoset::compatible(self.source.poset(), self.target.poset()) {
            return Err(Error::InvalidMap("graphs use different posets".into()));
        }
        for (e, f) in self.mapped_edges() {
            let es = self.source.edge(e);
            let fs = self.target.edge(f);
            if es.directed != fs.directed {
                return Err(Error::InvalidMap(format!(
                    "edge {} maps across directedness",
                    e.0
                )));
            }
            let (ms, mt) = (self.vertex(es.source), self.vertex(es.target));
            let (ms, mt) = match (ms, mt) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::InvalidMap(format!(
                        "edge {} mapped but an endpoint is not",
                        e.0
                    )))
                }
            };
            let ok = if es.directed {
                fs.source == ms && fs.target == mt
            } else {
                (fs.source == ms && fs.target == mt) || (fs.source == mt && fs.target == ms)
            };
            if !ok {
                return Err(Error::InvalidMap(format!(
                    "edge {} image does not connect the endpoint images",
                    e.0
                )));
            }
        }
        Ok(())
    }

    /// `lambda(x) <= lambda(f(x))` for every mapped element.
    pub fn respects_labels(&self) -> bool {
        let poset = self.source.poset();
        self.mapped_vertices()
            .all(|(v, w)| poset.leq(self.source.vertex_label(v), self.target.vertex_label(w)))
            && self
                .mapped_edges()
                .all(|(e, f)| poset.leq(self.source.edge(e).label, self.target.edge(f).label))
    }

    /// `lambda(x) = lambda(f(x))` for every mapped element.
    pub fn preserves_labels(&self) -> bool {
        self.mapped_vertices()
            .all(|(v, w)| self.source.vertex_label(v) == self.target.vertex_label(w))
            && self
                .mapped_edges()
                .all(|(e, f)| self.source.edge(e).label == self.target.edge(f).label)
    }

    /// Partial composition `other . self` (undefined wherever either is).
    pub fn compose(&self, other: &GraphMap) -> Result<GraphMap> {
        if self.target != other.source {
            return Err(Error::InvalidMap("composition target mismatch".into()));
        }
        let vmap = self
            .vmap
            .iter()
            .map(|m| m.and_then(|w| other.vertex(w)))
            .collect();
        let emap = self
            .emap
            .iter()
            .map(|m| m.and_then(|f| other.edge(f)))
            .collect();
        GraphMap::from_parts(self.source.clone(), other.target.clone(), vmap, emap)
    }
}

/// A total injective label-respecting graph morphism (monomorphism).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism(GraphMap);

impl Morphism {
    pub fn new(map: GraphMap) -> Result<Morphism> {
        map.validate_function()?;
        if !map.is_total() {
            return Err(Error::InvalidMap("morphism must be total".into()));
        }
        if !map.is_injective() {
            return Err(Error::InvalidMap("morphism must be injective".into()));
        }
        if !map.respects_labels() {
            return Err(Error::InvalidMap("morphism must respect labels".into()));
        }
        Ok(Morphism(map))
    }

    pub fn identity(g: &Arc<Graph>) -> Morphism {
        Morphism(GraphMap::identity(g))
    }

    pub fn map(&self) -> &GraphMap {
        &self.0
    }

    pub fn into_map(self) -> GraphMap {
        self.0
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.0.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.0.target
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.0.vertex(v).expect("total morphism")
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        self.0.edge(e).expect("total morphism")
    }

    /// True when labels are preserved exactly in both directions.
    pub fn preserves_labels(&self) -> bool {
        self.0.preserves_labels()
    }

    /// True when this is a bijection on vertices and edges.
    pub fn is_bijective(&self) -> bool {
        self.0.source.vertex_count() == self.0.target.vertex_count()
            && self.0.source.edge_count() == self.0.target.edge_count()
    }

    pub fn compose(&self, then: &Morphism) -> Result<Morphism> {
        Morphism::new(self.0.compose(then.map())?)
    }
}

/// Partial correspondence forcing part of an embedding.
#[derive(Debug, Clone, Default)]
pub struct Anchor {
    pub vertex_pairs: Vec<(VertexId, VertexId)>,
    pub edge_pairs: Vec<(EdgeId, EdgeId)>,
}

/// Search options. Filters see `(pattern element, host element)` and must be
/// pure; `exact_labels` switches the label condition from `<=` to `=`, and
/// `ignore_labels` drops the built-in label condition entirely, leaving any
/// label discipline to the filters.
#[derive(Clone, Copy, Default)]
pub struct MatchOptions<'a> {
    pub exact_labels: bool,
    pub ignore_labels: bool,
    pub limit: Option<usize>,
    pub vertex_filter: Option<&'a dyn Fn(VertexId, VertexId) -> bool>,
    pub edge_filter: Option<&'a dyn Fn(EdgeId, EdgeId) -> bool>,
}

struct SearchCtx<'a> {
    pattern: &'a Arc<Graph>,
    host: &'a Arc<Graph>,
    opts: &'a MatchOptions<'a>,
    order: Vec<usize>,
    /// Forced host vertex per pattern vertex (from anchors).
    pinned: Vec<Option<VertexId>>,
    /// Forced host edge per pattern edge (from anchors).
    edge_pins: HashMap<EdgeId, EdgeId>,
    assignment: Vec<Option<VertexId>>,
    used: Vec<bool>,
    found: usize,
}

/// Enumerates every injective, incidence- and label-respecting total map of
/// `pattern` into `host` extending the anchor, in deterministic order.
pub fn enumerate_monomorphisms(
    pattern: &Arc<Graph>,
    host: &Arc<Graph>,
    anchor: Option<&Anchor>,
    opts: &MatchOptions<'_>,
) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    for_each_monomorphism(pattern, host, anchor, opts, |m| {
        out.push(m);
        true
    })?;
    Ok(out)
}

/// Callback-driven embedding search; the callback returns `false` to stop.
pub fn for_each_monomorphism(
    pattern: &Arc<Graph>,
    host: &Arc<Graph>,
    anchor: Option<&Anchor>,
    opts: &MatchOptions<'_>,
    mut on_match: impl FnMut(Morphism) -> bool,
) -> Result<()> {
    debug_assert!(!opts.ignore_labels, "label-free search yields plain maps");
    for_each_embedding(pattern, host, anchor, opts, |map| {
        on_match(Morphism::new(map).expect("search enforces the morphism conditions"))
    })
}

/// As [`for_each_monomorphism`] but yielding the raw total injective map,
/// usable with `ignore_labels` where the result need not respect labels.
pub fn for_each_embedding(
    pattern: &Arc<Graph>,
    host: &Arc<Graph>,
    anchor: Option<&Anchor>,
    opts: &MatchOptions<'_>,
    mut on_match: impl FnMut(GraphMap) -> bool,
) -> Result<()> {
    if !LabelPoset::compatible(pattern.poset(), host.poset()) {
        return Err(Error::InvalidMap(
            "pattern and host use different posets".into(),
        ));
    }
    let pn = pattern.vertex_count();
    let mut pinned: Vec<Option<VertexId>> = vec![None; pn];
    let mut edge_pins: HashMap<EdgeId, EdgeId> = HashMap::new();
    if let Some(anchor) = anchor {
        let mut host_used: Vec<bool> = vec![false; host.vertex_count()];
        let pin = |v: VertexId, w: VertexId, pinned: &mut Vec<Option<VertexId>>| {
            match pinned[v.index()] {
                Some(prev) if prev != w => Err(Error::InconsistentAnchor(format!(
                    "vertex {} pinned to both {} and {}",
                    v.0, prev.0, w.0
                ))),
                _ => {
                    pinned[v.index()] = Some(w);
                    Ok(())
                }
            }
        };
        for &(v, w) in &anchor.vertex_pairs {
            if v.index() >= pn || w.index() >= host.vertex_count() {
                return Err(Error::InconsistentAnchor("vertex out of range".into()));
            }
            pin(v, w, &mut pinned)?;
        }
        for &(e, f) in &anchor.edge_pairs {
            if e.index() >= pattern.edge_count() || f.index() >= host.edge_count() {
                return Err(Error::InconsistentAnchor("edge out of range".into()));
            }
            let ep = pattern.edge(e);
            let fh = host.edge(f);
            if ep.directed != fh.directed {
                return Err(Error::InconsistentAnchor(format!(
                    "edge {} pinned across directedness",
                    e.0
                )));
            }
            if ep.directed {
                pin(ep.source, fh.source, &mut pinned)?;
                pin(ep.target, fh.target, &mut pinned)?;
            } else {
                // Orientation of an undirected pin follows the endpoints that
                // are already pinned; default to source-source.
                let s_pin = pinned[ep.source.index()];
                let t_pin = pinned[ep.target.index()];
                let swap = s_pin == Some(fh.target) || t_pin == Some(fh.source);
                let (ws, wt) = if swap {
                    (fh.target, fh.source)
                } else {
                    (fh.source, fh.target)
                };
                pin(ep.source, ws, &mut pinned)?;
                pin(ep.target, wt, &mut pinned)?;
            }
            if edge_pins.insert(e, f).is_some_and(|prev| prev != f) {
                return Err(Error::InconsistentAnchor(format!(
                    "edge {} pinned twice",
                    e.0
                )));
            }
        }
        // Injectivity and label consistency of the pins.
        for (v, w) in pinned.iter().enumerate().filter_map(|(i, m)| m.map(|w| (i, w))) {
            if host_used[w.index()] {
                return Err(Error::InconsistentAnchor(format!(
                    "host vertex {} pinned twice",
                    w.0
                )));
            }
            host_used[w.index()] = true;
            let ok = label_ok(
                pattern.poset(),
                pattern.vertex_label(VertexId(v as u32)),
                host.vertex_label(w),
                opts,
            );
            if !ok {
                return Err(Error::InconsistentAnchor(format!(
                    "vertex {v} pin violates labels"
                )));
            }
        }
    }

    let order = matching_order(pattern, &pinned);
    let mut ctx = SearchCtx {
        pattern,
        host,
        opts,
        order,
        pinned,
        edge_pins,
        assignment: vec![None; pn],
        used: vec![false; host.vertex_count()],
        found: 0,
    };
    ctx.recurse(0, &mut on_match)?;
    Ok(())
}

fn label_ok(
    poset: &LabelPoset,
    pat: crate::label::LabelId,
    host: crate::label::LabelId,
    opts: &MatchOptions<'_>,
) -> bool {
    if opts.ignore_labels {
        true
    } else if opts.exact_labels {
        pat == host
    } else {
        poset.leq(pat, host)
    }
}

/// Static matching order: pinned vertices first, then greedily the vertex
/// with most ordered neighbors (ties by degree then index).
fn matching_order(pattern: &Graph, pinned: &[Option<VertexId>]) -> Vec<usize> {
    let n = pattern.vertex_count();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for (v, pin) in pinned.iter().enumerate() {
        if pin.is_some() {
            order.push(v);
            placed[v] = true;
        }
    }
    while order.len() < n {
        let mut best: Option<(usize, u32, usize)> = None; // (placed nbrs, degree, v)
        for v in 0..n {
            if placed[v] {
                continue;
            }
            let nbrs = pattern
                .adjacency(VertexId(v as u32))
                .iter()
                .filter(|inc| placed[inc.other.index()])
                .count();
            let d = pattern.degrees(VertexId(v as u32));
            let deg = d.undirected + d.out + d.into;
            let cand = (nbrs, deg, v);
            let better = match best {
                None => true,
                Some((bn, bd, bv)) => {
                    (cand.0, cand.1, std::cmp::Reverse(cand.2))
                        > (bn, bd, std::cmp::Reverse(bv))
                }
            };
            if better {
                best = Some(cand);
            }
        }
        let (_, _, v) = best.expect("unplaced vertex exists");
        order.push(v);
        placed[v] = true;
    }
    order
}

impl SearchCtx<'_> {
    fn recurse(
        &mut self,
        depth: usize,
        on_match: &mut impl FnMut(GraphMap) -> bool,
    ) -> Result<bool> {
        if let Some(limit) = self.opts.limit {
            if self.found >= limit {
                return Ok(false);
            }
        }
        if depth == self.order.len() {
            let m = self.finish();
            self.found += 1;
            return Ok(on_match(m));
        }
        let v = VertexId(self.order[depth] as u32);
        if let Some(w) = self.pinned[v.index()] {
            if self.used[w.index()] || !self.feasible(v, w) {
                return Ok(true);
            }
            self.assignment[v.index()] = Some(w);
            self.used[w.index()] = true;
            let cont = self.recurse(depth + 1, on_match)?;
            self.assignment[v.index()] = None;
            self.used[w.index()] = false;
            return Ok(cont);
        }
        // Pivot: first placed pattern neighbor restricts candidates to the
        // host adjacency of its image.
        let pivot = self
            .pattern
            .adjacency(v)
            .iter()
            .find(|inc| self.assignment[inc.other.index()].is_some())
            .copied();
        match pivot {
            Some(inc) => {
                let hw = self.assignment[inc.other.index()].unwrap();
                // The host incidence must mirror the pattern incidence kind
                // as seen from the pivot's image.
                let want = match inc.kind {
                    IncKind::Undirected => IncKind::Undirected,
                    IncKind::Out => IncKind::In,
                    IncKind::In => IncKind::Out,
                };
                let host_adj: Vec<VertexId> = self
                    .host
                    .adjacency(hw)
                    .iter()
                    .filter(|hinc| hinc.kind == want)
                    .map(|hinc| hinc.other)
                    .collect();
                let mut cands = host_adj;
                cands.sort_unstable();
                for w in cands {
                    if self.used[w.index()] || !self.feasible(v, w) {
                        continue;
                    }
                    self.assignment[v.index()] = Some(w);
                    self.used[w.index()] = true;
                    let cont = self.recurse(depth + 1, on_match)?;
                    self.assignment[v.index()] = None;
                    self.used[w.index()] = false;
                    if !cont {
                        return Ok(false);
                    }
                }
            }
            None => {
                for wi in 0..self.host.vertex_count() {
                    let w = VertexId(wi as u32);
                    if self.used[wi] || !self.feasible(v, w) {
                        continue;
                    }
                    self.assignment[v.index()] = Some(w);
                    self.used[wi] = true;
                    let cont = self.recurse(depth + 1, on_match)?;
                    self.assignment[v.index()] = None;
                    self.used[wi] = false;
                    if !cont {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Candidate feasibility: labels, degrees, filters and all edges into the
    /// already-placed part.
    fn feasible(&self, v: VertexId, w: VertexId) -> bool {
        let pat = self.pattern;
        let host = self.host;
        if !label_ok(pat.poset(), pat.vertex_label(v), host.vertex_label(w), self.opts) {
            return false;
        }
        if !pat.degrees(v).fits_within(host.degrees(w)) {
            return false;
        }
        if let Some(f) = self.opts.vertex_filter {
            if !f(v, w) {
                return false;
            }
        }
        for inc in pat.adjacency(v) {
            let Some(mu) = self.assignment[inc.other.index()] else {
                continue;
            };
            let pe = pat.edge(inc.edge);
            let he = match inc.kind {
                IncKind::Undirected => host.find_edge(w, mu, false),
                IncKind::Out => host.find_edge(w, mu, true),
                IncKind::In => host.find_edge(mu, w, true),
            };
            let Some(he) = he else {
                return false;
            };
            if !label_ok(pat.poset(), pe.label, host.edge(he).label, self.opts) {
                return false;
            }
            if let Some(pin) = self.edge_pins.get(&inc.edge) {
                if *pin != he {
                    return false;
                }
            }
            if let Some(f) = self.opts.edge_filter {
                if !f(inc.edge, he) {
                    return false;
                }
            }
        }
        true
    }

    fn finish(&self) -> GraphMap {
        let mut map = GraphMap::new_empty(self.pattern.clone(), self.host.clone());
        for (v, w) in self.assignment.iter().enumerate() {
            map.set_vertex(VertexId(v as u32), w.expect("complete assignment"));
        }
        for e in self.pattern.edge_ids() {
            let pe = self.pattern.edge(e);
            let ms = map.vertex(pe.source).unwrap();
            let mt = map.vertex(pe.target).unwrap();
            let he = self
                .host
                .find_edge(ms, mt, pe.directed)
                .or_else(|| {
                    if pe.directed {
                        None
                    } else {
                        self.host.find_edge(mt, ms, false)
                    }
                })
                .expect("edge image checked during search");
            map.set_edge(e, he);
        }
        map
    }
}

/// All isomorphisms `g -> h` (bijective, label-preserving in both
/// directions), optionally anchored and limited.
pub fn isomorphisms(
    g: &Arc<Graph>,
    h: &Arc<Graph>,
    anchor: Option<&Anchor>,
    limit: Option<usize>,
) -> Result<Vec<Morphism>> {
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.vertex_label_multiset() != h.vertex_label_multiset()
        || g.edge_label_multiset() != h.edge_label_multiset()
    {
        return Ok(Vec::new());
    }
    let opts = MatchOptions {
        exact_labels: true,
        limit,
        ..Default::default()
    };
    enumerate_monomorphisms(g, h, anchor, &opts)
}

/// First isomorphism `g -> h` if one exists.
pub fn is_isomorphic(g: &Arc<Graph>, h: &Arc<Graph>) -> Result<Option<Morphism>> {
    Ok(isomorphisms(g, h, None, Some(1))?.into_iter().next())
}

/// All automorphisms of `g`; always contains the identity.
pub fn automorphisms(g: &Arc<Graph>) -> Result<Vec<Morphism>> {
    isomorphisms(g, g, None, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::LabelPoset;

    fn poset() -> Arc<LabelPoset> {
        LabelPoset::flat(&["X", "O", "-"]).unwrap()
    }

    fn vertex_graph(labels: &[&str]) -> Arc<Graph> {
        let p = poset();
        let mut b = Graph::builder(p);
        for l in labels {
            b.add_vertex_named(l).unwrap();
        }
        b.build_arc().unwrap()
    }

    #[test]
    fn single_vertex_matches() {
        let pat = vertex_graph(&["X"]);
        let host = vertex_graph(&["X", "X", "O", "X"]);
        let ms = enumerate_monomorphisms(&pat, &host, None, &MatchOptions::default()).unwrap();
        assert_eq!(ms.len(), 3);
        // eps matches everything.
        let p = poset();
        let mut b = Graph::builder(p.clone());
        b.add_vertex(p.bottom());
        let eps = b.build_arc().unwrap();
        let ms = enumerate_monomorphisms(&eps, &host, None, &MatchOptions::default()).unwrap();
        assert_eq!(ms.len(), 4);
    }

    #[test]
    fn directed_path_into_cycle() {
        let p = poset();
        let mut b = Graph::builder(p.clone());
        let a = b.add_vertex_named("X").unwrap();
        let c = b.add_vertex_named("X").unwrap();
        b.add_edge_named(a, c, "-", true).unwrap();
        let pat = b.build_arc().unwrap();

        let mut b = Graph::builder(p);
        let v0 = b.add_vertex_named("X").unwrap();
        let v1 = b.add_vertex_named("X").unwrap();
        let v2 = b.add_vertex_named("X").unwrap();
        b.add_edge_named(v0, v1, "-", true).unwrap();
        b.add_edge_named(v1, v2, "-", true).unwrap();
        b.add_edge_named(v2, v0, "-", true).unwrap();
        let host = b.build_arc().unwrap();

        let ms = enumerate_monomorphisms(&pat, &host, None, &MatchOptions::default()).unwrap();
        assert_eq!(ms.len(), 3);
    }

    #[test]
    fn anchored_search_respects_pin() {
        let pat = vertex_graph(&["X"]);
        let host = vertex_graph(&["X", "X"]);
        let anchor = Anchor {
            vertex_pairs: vec![(VertexId(0), VertexId(1))],
            edge_pairs: vec![],
        };
        let ms =
            enumerate_monomorphisms(&pat, &host, Some(&anchor), &MatchOptions::default()).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].vertex(VertexId(0)), VertexId(1));
    }

    #[test]
    fn inconsistent_anchor_rejected() {
        let pat = vertex_graph(&["X"]);
        let host = vertex_graph(&["O"]);
        let anchor = Anchor {
            vertex_pairs: vec![(VertexId(0), VertexId(0))],
            edge_pairs: vec![],
        };
        let err = enumerate_monomorphisms(&pat, &host, Some(&anchor), &MatchOptions::default());
        assert!(matches!(err, Err(Error::InconsistentAnchor(_))));
    }

    #[test]
    fn undirected_edge_automorphisms() {
        let p = poset();
        let mut b = Graph::builder(p);
        let u = b.add_vertex_named("X").unwrap();
        let v = b.add_vertex_named("X").unwrap();
        b.add_edge_named(u, v, "-", false).unwrap();
        let g = b.build_arc().unwrap();
        assert_eq!(automorphisms(&g).unwrap().len(), 2);
    }

    #[test]
    fn labeled_path_identity_only() {
        let p = poset();
        let mut b = Graph::builder(p);
        let u = b.add_vertex_named("X").unwrap();
        let v = b.add_vertex_named("O").unwrap();
        let w = b.add_vertex_named("X").unwrap();
        b.add_edge_named(u, v, "-", false).unwrap();
        b.add_edge_named(v, w, "-", false).unwrap();
        let mut b2 = Graph::builder(poset());
        let a = b2.add_vertex_named("O").unwrap();
        let c = b2.add_vertex_named("X").unwrap();
        let d = b2.add_vertex_named("X").unwrap();
        b2.add_edge_named(a, c, "-", false).unwrap();
        b2.add_edge_named(a, d, "-", false).unwrap();
        let g = b.build_arc().unwrap();
        let h = b2.build_arc().unwrap();
        // Isomorphic despite different vertex numbering.
        assert!(is_isomorphic(&g, &h).unwrap().is_some());
    }
}
