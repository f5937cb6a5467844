//! Finite labeled graphs over a shared label poset.
//!
//! Edges connect exactly two vertices and carry a per-edge directedness flag.
//! Graphs are simple: no self loops, and no two undirected edges on the same
//! unordered vertex pair nor two directed edges on the same ordered pair.
//! Vertices and edges are identified by dense indices; file identifiers are
//! remapped on load.
//!
//! All values are immutable once built and can be shared freely across
//! threads.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::label::{LabelId, LabelPoset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeData {
    pub label: LabelId,
    pub source: VertexId,
    pub target: VertexId,
    pub directed: bool,
}

impl EdgeData {
    pub fn other_end(&self, v: VertexId) -> VertexId {
        if self.source == v {
            self.target
        } else {
            self.source
        }
    }
}

/// Direction of an edge as seen from the vertex owning the incidence entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IncKind {
    Undirected,
    Out,
    In,
}

#[derive(Debug, Clone, Copy)]
pub struct Incidence {
    pub edge: EdgeId,
    pub other: VertexId,
    pub kind: IncKind,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Degrees {
    pub undirected: u32,
    pub out: u32,
    pub into: u32,
}

impl Degrees {
    pub fn fits_within(&self, host: &Degrees) -> bool {
        self.undirected <= host.undirected && self.out <= host.out && self.into <= host.into
    }
}

#[derive(Clone)]
pub struct Graph {
    poset: Arc<LabelPoset>,
    vertex_labels: Vec<LabelId>,
    edges: Vec<EdgeData>,
    adjacency: Vec<Vec<Incidence>>,
    degrees: Vec<Degrees>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(|V|={}, |E|={})", self.vertex_count(), self.edge_count())
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        LabelPoset::compatible(&self.poset, &other.poset)
            && self.vertex_labels == other.vertex_labels
            && self.edges == other.edges
    }
}
impl Eq for Graph {}

impl Graph {
    pub fn builder(poset: Arc<LabelPoset>) -> GraphBuilder {
        GraphBuilder {
            poset,
            vertex_labels: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Empty graph over the poset.
    pub fn empty(poset: Arc<LabelPoset>) -> Arc<Graph> {
        Graph::builder(poset).build_arc().expect("empty graph")
    }

    pub fn poset(&self) -> &Arc<LabelPoset> {
        &self.poset
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_labels.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex_label(&self, v: VertexId) -> LabelId {
        self.vertex_labels[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeData {
        &self.edges[e.index()]
    }

    pub fn adjacency(&self, v: VertexId) -> &[Incidence] {
        &self.adjacency[v.index()]
    }

    pub fn degrees(&self, v: VertexId) -> &Degrees {
        &self.degrees[v.index()]
    }

    /// Looks up the unique edge of the given kind between two endpoints.
    /// For directed edges the order is `from -> to`.
    pub fn find_edge(&self, from: VertexId, to: VertexId, directed: bool) -> Option<EdgeId> {
        self.adjacency[from.index()].iter().find_map(|inc| {
            let matches = if directed {
                inc.kind == IncKind::Out && inc.other == to
            } else {
                inc.kind == IncKind::Undirected && inc.other == to
            };
            matches.then_some(inc.edge)
        })
    }

    /// Multiset of vertex labels, sorted.
    pub fn vertex_label_multiset(&self) -> Vec<LabelId> {
        let mut v = self.vertex_labels.clone();
        v.sort_unstable();
        v
    }

    /// Multiset of edge labels (with direction flag), sorted.
    pub fn edge_label_multiset(&self) -> Vec<(LabelId, bool)> {
        let mut v: Vec<(LabelId, bool)> =
            self.edges.iter().map(|e| (e.label, e.directed)).collect();
        v.sort_unstable();
        v
    }

    /// Disjoint union; the left component keeps its indices, the right
    /// component is shifted by the left sizes.
    pub fn disjoint_union(left: &Graph, right: &Graph) -> Result<DisjointUnion> {
        if !LabelPoset::compatible(&left.poset, &right.poset) {
            return Err(Error::InvalidGraph(
                "disjoint union requires a shared label poset".into(),
            ));
        }
        let mut b = Graph::builder(left.poset.clone());
        for v in left.vertices() {
            b.add_vertex(left.vertex_label(v));
        }
        for v in right.vertices() {
            b.add_vertex(right.vertex_label(v));
        }
        let vshift = left.vertex_count() as u32;
        for e in &left.edges {
            b.add_edge(e.source, e.target, e.label, e.directed)?;
        }
        for e in &right.edges {
            b.add_edge(
                VertexId(e.source.0 + vshift),
                VertexId(e.target.0 + vshift),
                e.label,
                e.directed,
            )?;
        }
        Ok(DisjointUnion {
            graph: b.build_arc()?,
            vertex_shift: vshift,
            edge_shift: left.edge_count() as u32,
        })
    }

    /// Weakly connected components as sorted vertex index lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(VertexId(v as u32));
                for inc in &self.adjacency[v] {
                    if !seen[inc.other.index()] {
                        seen[inc.other.index()] = true;
                        stack.push(inc.other.index());
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Result of a disjoint union with the embedding offsets of both operands.
#[derive(Debug, Clone)]
pub struct DisjointUnion {
    pub graph: Arc<Graph>,
    pub vertex_shift: u32,
    pub edge_shift: u32,
}

impl DisjointUnion {
    pub fn right_vertex(&self, v: VertexId) -> VertexId {
        VertexId(v.0 + self.vertex_shift)
    }

    pub fn right_edge(&self, e: EdgeId) -> EdgeId {
        EdgeId(e.0 + self.edge_shift)
    }
}

pub struct GraphBuilder {
    poset: Arc<LabelPoset>,
    vertex_labels: Vec<LabelId>,
    edges: Vec<EdgeData>,
}

impl GraphBuilder {
    pub fn add_vertex(&mut self, label: LabelId) -> VertexId {
        self.vertex_labels.push(label);
        VertexId(self.vertex_labels.len() as u32 - 1)
    }

    pub fn add_vertex_named(&mut self, label: &str) -> Result<VertexId> {
        let id = self.poset.id(label)?;
        Ok(self.add_vertex(id))
    }

    pub fn add_edge(
        &mut self,
        source: VertexId,
        target: VertexId,
        label: LabelId,
        directed: bool,
    ) -> Result<EdgeId> {
        let n = self.vertex_labels.len() as u32;
        if source.0 >= n || target.0 >= n {
            return Err(Error::InvalidGraph(format!(
                "edge endpoint out of range: ({}, {})",
                source.0, target.0
            )));
        }
        if source == target {
            return Err(Error::InvalidGraph(format!(
                "self loop on vertex {}",
                source.0
            )));
        }
        let parallel = self.edges.iter().any(|e| {
            e.directed == directed
                && if directed {
                    e.source == source && e.target == target
                } else {
                    (e.source, e.target) == (source, target)
                        || (e.source, e.target) == (target, source)
                }
        });
        if parallel {
            return Err(Error::InvalidGraph(format!(
                "parallel edge between {} and {}",
                source.0, target.0
            )));
        }
        self.edges.push(EdgeData {
            label,
            source,
            target,
            directed,
        });
        Ok(EdgeId(self.edges.len() as u32 - 1))
    }

    pub fn add_edge_named(
        &mut self,
        source: VertexId,
        target: VertexId,
        label: &str,
        directed: bool,
    ) -> Result<EdgeId> {
        let id = self.poset.id(label)?;
        self.add_edge(source, target, id, directed)
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.vertex_labels.len();
        let mut adjacency: Vec<Vec<Incidence>> = vec![Vec::new(); n];
        let mut degrees = vec![Degrees::default(); n];
        for (i, e) in self.edges.iter().enumerate() {
            let id = EdgeId(i as u32);
            if e.directed {
                adjacency[e.source.index()].push(Incidence {
                    edge: id,
                    other: e.target,
                    kind: IncKind::Out,
                });
                adjacency[e.target.index()].push(Incidence {
                    edge: id,
                    other: e.source,
                    kind: IncKind::In,
                });
                degrees[e.source.index()].out += 1;
                degrees[e.target.index()].into += 1;
            } else {
                adjacency[e.source.index()].push(Incidence {
                    edge: id,
                    other: e.target,
                    kind: IncKind::Undirected,
                });
                adjacency[e.target.index()].push(Incidence {
                    edge: id,
                    other: e.source,
                    kind: IncKind::Undirected,
                });
                degrees[e.source.index()].undirected += 1;
                degrees[e.target.index()].undirected += 1;
            }
        }
        Ok(Graph {
            poset: self.poset,
            vertex_labels: self.vertex_labels,
            edges: self.edges,
            adjacency,
            degrees,
        })
    }

    pub fn build_arc(self) -> Result<Arc<Graph>> {
        self.build().map(Arc::new)
    }
}
