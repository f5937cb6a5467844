//! Canonical forms for colored graphs.
//!
//! Iterative partition refinement with backtracking individualization. The
//! canonical code of a structure is the lexicographically smallest byte
//! serialization over all discrete partitions reached by the search, so two
//! structures receive the same code exactly when they are isomorphic as
//! colored graphs.
//!
//! Rule and transition codes are computed by encoding the whole span or
//! element-mapped pair as a single colored graph and canonicalizing that.

use crate::graph::Graph;

/// A plain colored graph: the least structure canonicalization needs.
/// Vertex and edge colors are opaque; equal colors mean interchangeable.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    pub vertex_colors: Vec<u64>,
    /// Edges as `(u, v, directed, color)`, indices into `vertex_colors`.
    pub edges: Vec<(usize, usize, bool, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Box<[u8]>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone)]
pub struct CanonResult {
    pub code: CanonicalCode,
    /// Canonical position of each vertex.
    pub order: Vec<usize>,
}

impl ColoredGraph {
    pub fn from_graph(g: &Graph) -> ColoredGraph {
        ColoredGraph {
            vertex_colors: g
                .vertices()
                .map(|v| g.vertex_label(v).0 as u64)
                .collect(),
            edges: g
                .edge_ids()
                .map(|e| {
                    let d = g.edge(e);
                    (
                        d.source.index(),
                        d.target.index(),
                        d.directed,
                        d.label.0 as u64,
                    )
                })
                .collect(),
        }
    }
}

/// Canonical code of a plain graph (labels as colors).
pub fn graph_code(g: &Graph) -> CanonicalCode {
    canonicalize(&ColoredGraph::from_graph(g)).code
}

struct Searcher<'a> {
    g: &'a ColoredGraph,
    /// Incidence lists: `(edge color, kind, neighbor)` per vertex.
    inc: Vec<Vec<(u64, u8, usize)>>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

const KIND_UND: u8 = 0;
const KIND_OUT: u8 = 1;
const KIND_IN: u8 = 2;

/// Computes the canonical code and a permutation realizing it.
pub fn canonicalize(g: &ColoredGraph) -> CanonResult {
    let n = g.vertex_colors.len();
    let mut inc: Vec<Vec<(u64, u8, usize)>> = vec![Vec::new(); n];
    for &(u, v, directed, c) in &g.edges {
        if directed {
            inc[u].push((c, KIND_OUT, v));
            inc[v].push((c, KIND_IN, u));
        } else {
            inc[u].push((c, KIND_UND, v));
            inc[v].push((c, KIND_UND, u));
        }
    }
    let mut searcher = Searcher { g, inc, best: None };

    // Initial partition: group by vertex color.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.vertex_colors[v], v));
    let mut cell_of = vec![0usize; n];
    let mut next = 0usize;
    for i in 0..n {
        if i > 0 && g.vertex_colors[order[i]] != g.vertex_colors[order[i - 1]] {
            next += 1;
        }
        cell_of[order[i]] = next;
    }
    searcher.search(cell_of);

    let (code, order) = searcher.best.expect("at least one leaf");
    CanonResult {
        code: CanonicalCode(code.into_boxed_slice()),
        order,
    }
}

impl Searcher<'_> {
    fn refine(&self, cell_of: &mut Vec<usize>) {
        let n = cell_of.len();
        if n == 0 {
            return;
        }
        loop {
            let cells = 1 + cell_of.iter().copied().max().unwrap();
            if cells == n {
                return;
            }
            // Signature: own cell plus sorted incident (edge color, kind,
            // neighbor cell) triples.
            let mut keyed: Vec<(usize, Vec<(u64, u8, usize)>, usize)> = (0..n)
                .map(|v| {
                    let mut sig: Vec<(u64, u8, usize)> = self.inc[v]
                        .iter()
                        .map(|&(c, k, o)| (c, k, cell_of[o]))
                        .collect();
                    sig.sort_unstable();
                    (cell_of[v], sig, v)
                })
                .collect();
            keyed.sort();
            let mut new_cell = vec![0usize; n];
            let mut next = 0usize;
            for i in 0..n {
                if i > 0 && (keyed[i].0, &keyed[i].1) != (keyed[i - 1].0, &keyed[i - 1].1) {
                    next += 1;
                }
                new_cell[keyed[i].2] = next;
            }
            let new_count = next + 1;
            *cell_of = new_cell;
            if new_count == cells {
                return;
            }
        }
    }

    fn search(&mut self, mut cell_of: Vec<usize>) {
        self.refine(&mut cell_of);
        let n = cell_of.len();
        let cells = if n == 0 {
            0
        } else {
            1 + cell_of.iter().copied().max().unwrap()
        };
        if cells == n {
            self.emit(&cell_of);
            return;
        }
        // Target: smallest non-singleton cell, lowest cell id on ties.
        let mut sizes = vec![0usize; cells];
        for &c in &cell_of {
            sizes[c] += 1;
        }
        let target = (0..cells)
            .filter(|&c| sizes[c] >= 2)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete partition has a splittable cell");
        let members: Vec<usize> = (0..n).filter(|&v| cell_of[v] == target).collect();
        for v in members {
            // Individualize v: give it a cell of its own ahead of its old
            // cell, shifting every later cell up by one.
            let mut child = cell_of.clone();
            for c in child.iter_mut() {
                if *c > target {
                    *c += 1;
                }
            }
            for (u, c) in child.iter_mut().enumerate() {
                if *c == target && u != v {
                    *c = target + 1;
                }
            }
            self.search(child);
        }
    }

    fn emit(&mut self, cell_of: &[usize]) {
        let g = self.g;
        let n = cell_of.len();
        let mut code: Vec<u8> = Vec::with_capacity(8 + n * 8 + g.edges.len() * 18);
        code.extend_from_slice(&(n as u32).to_le_bytes());
        code.extend_from_slice(&(g.edges.len() as u32).to_le_bytes());
        let mut pos_to_vertex = vec![0usize; n];
        for (v, &p) in cell_of.iter().enumerate() {
            pos_to_vertex[p] = v;
        }
        for p in 0..n {
            code.extend_from_slice(&g.vertex_colors[pos_to_vertex[p]].to_le_bytes());
        }
        let mut edges: Vec<(usize, usize, u8, u64)> = g
            .edges
            .iter()
            .map(|&(u, v, directed, c)| {
                let (pu, pv) = (cell_of[u], cell_of[v]);
                if directed {
                    (pu, pv, 1u8, c)
                } else {
                    (pu.min(pv), pu.max(pv), 0u8, c)
                }
            })
            .collect();
        edges.sort_unstable();
        for (u, v, d, c) in edges {
            code.extend_from_slice(&(u as u32).to_le_bytes());
            code.extend_from_slice(&(v as u32).to_le_bytes());
            code.push(d);
            code.extend_from_slice(&c.to_le_bytes());
        }
        let better = match &self.best {
            None => true,
            Some((b, _)) => code < *b,
        };
        if better {
            self.best = Some((code, cell_of.to_vec()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> ColoredGraph {
        ColoredGraph {
            vertex_colors: vec![0; n],
            edges: (0..n.saturating_sub(1))
                .map(|i| (i, i + 1, false, 0))
                .collect(),
        }
    }

    #[test]
    fn empty_graph_fixed_code() {
        let g = ColoredGraph {
            vertex_colors: vec![],
            edges: vec![],
        };
        let a = canonicalize(&g).code;
        let b = canonicalize(&g).code;
        assert_eq!(a, b);
        assert_eq!(a.as_bytes(), &[0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn permutation_invariance() {
        let g = path(4);
        let perm = [2usize, 0, 3, 1];
        let mut h = ColoredGraph {
            vertex_colors: vec![0; 4],
            edges: g
                .edges
                .iter()
                .map(|&(u, v, d, c)| (perm[u], perm[v], d, c))
                .collect(),
        };
        assert_eq!(canonicalize(&g).code, canonicalize(&h).code);
        // A triangle plus an isolated vertex must get a different code.
        h.edges[2] = (perm[2], perm[0], false, 0);
        assert_ne!(canonicalize(&g).code, canonicalize(&h).code);
    }

    #[test]
    fn colors_distinguish() {
        let mut g = path(3);
        let mut h = path(3);
        g.vertex_colors = vec![1, 0, 0];
        h.vertex_colors = vec![0, 1, 0];
        assert_ne!(canonicalize(&g).code, canonicalize(&h).code);
        let mut g2 = path(3);
        g2.vertex_colors = vec![0, 0, 1];
        assert_eq!(canonicalize(&g).code, canonicalize(&g2).code);
    }

    #[test]
    fn direction_matters() {
        let cycle = |flip: bool| ColoredGraph {
            vertex_colors: vec![0; 3],
            edges: vec![
                (0, 1, true, 0),
                (1, 2, true, 0),
                if flip { (0, 2, true, 0) } else { (2, 0, true, 0) },
            ],
        };
        assert_ne!(canonicalize(&cycle(false)).code, canonicalize(&cycle(true)).code);
    }

    #[test]
    fn order_realizes_code() {
        let g = path(5);
        let r = canonicalize(&g);
        // Re-index by the canonical order and canonicalize again: same code.
        let mut h = ColoredGraph {
            vertex_colors: vec![0; 5],
            edges: g
                .edges
                .iter()
                .map(|&(u, v, d, c)| (r.order[u], r.order[v], d, c))
                .collect(),
        };
        for (v, &p) in r.order.iter().enumerate() {
            h.vertex_colors[p] = g.vertex_colors[v];
        }
        assert_eq!(canonicalize(&h).code, r.code);
    }
}
