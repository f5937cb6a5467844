//! Transition systems encoding a small regular grammar as graph rewriting.
//!
//! The grammar has nonterminals S, A, T and terminals 0, 1 with productions
//! `S -> AT`, `A -> eps | AA | 0 | 10`, `T -> eps | T1`, generating the
//! language `(0|10)*1*`. Sentential forms become path graphs; a rewrite
//! deletes the nonterminal vertex and inserts fresh vertices for the
//! right-hand side, so the element map carries exactly the untouched
//! symbols. Three encodings differ in edge orientation and end markers.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::label::LabelPoset;
use crate::morphism::GraphMap;
use crate::transition::{Transition, TransitionSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sym {
    S,
    A,
    T,
    Zero,
    One,
}

impl Sym {
    pub fn label(self) -> &'static str {
        match self {
            Sym::S => "S",
            Sym::A => "A",
            Sym::T => "T",
            Sym::Zero => "0",
            Sym::One => "1",
        }
    }
}

/// The seven productions, in the paper's numbering.
pub const PRODUCTIONS: [(Sym, &[Sym]); 7] = [
    (Sym::S, &[Sym::A, Sym::T]),
    (Sym::A, &[]),
    (Sym::A, &[Sym::A, Sym::A]),
    (Sym::A, &[Sym::Zero]),
    (Sym::A, &[Sym::One, Sym::Zero]),
    (Sym::T, &[]),
    (Sym::T, &[Sym::T, Sym::One]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarEncoding {
    /// Undirected paths.
    S0,
    /// Directed paths.
    S1,
    /// Directed paths with start and end marker vertices.
    S2,
}

impl std::str::FromStr for GrammarEncoding {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<GrammarEncoding> {
        match s {
            "s0" | "S0" => Ok(GrammarEncoding::S0),
            "s1" | "S1" => Ok(GrammarEncoding::S1),
            "s2" | "S2" => Ok(GrammarEncoding::S2),
            other => Err(crate::error::Error::Parse(format!(
                "unknown grammar encoding `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GrammarSpec {
    pub encoding: GrammarEncoding,
    pub max_len: usize,
}

impl Default for GrammarSpec {
    fn default() -> Self {
        GrammarSpec {
            encoding: GrammarEncoding::S2,
            max_len: 5,
        }
    }
}

pub const START_MARKER: &str = ">";
pub const END_MARKER: &str = "<";
pub const EDGE_LABEL: &str = "-";

pub fn grammar_poset() -> Arc<LabelPoset> {
    LabelPoset::flat(&["S", "A", "T", "0", "1", EDGE_LABEL, START_MARKER, END_MARKER])
        .expect("static poset")
}

/// All sentential forms derivable from S, restricted to `max_len`.
/// Exploration allows slightly longer intermediates so that forms only
/// reachable through them are still found.
pub fn sentential_forms(max_len: usize) -> Vec<Vec<Sym>> {
    let bound = max_len + 2;
    let mut seen: BTreeSet<Vec<Sym>> = BTreeSet::new();
    let mut stack = vec![vec![Sym::S]];
    seen.insert(vec![Sym::S]);
    while let Some(form) = stack.pop() {
        for (i, &sym) in form.iter().enumerate() {
            for (lhs, rhs) in PRODUCTIONS {
                if lhs != sym {
                    continue;
                }
                let next = rewrite(&form, i, rhs);
                if next.len() <= bound && seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    seen.into_iter().filter(|f| f.len() <= max_len).collect()
}

pub fn rewrite(form: &[Sym], at: usize, rhs: &[Sym]) -> Vec<Sym> {
    let mut next = Vec::with_capacity(form.len() + rhs.len());
    next.extend_from_slice(&form[..at]);
    next.extend_from_slice(rhs);
    next.extend_from_slice(&form[at + 1..]);
    next
}

/// Builds the path graph of a form. Symbol positions become vertices
/// `0..n`; the S2 encoding appends the start marker at `n` and the end
/// marker at `n + 1`. Edges run along the path (and through the markers for
/// S2), inserted left to right.
pub fn form_graph(
    poset: &Arc<LabelPoset>,
    form: &[Sym],
    encoding: GrammarEncoding,
) -> Result<Arc<Graph>> {
    let mut b = Graph::builder(poset.clone());
    let n = form.len();
    let directed = encoding != GrammarEncoding::S0;
    let vs: Vec<VertexId> = form
        .iter()
        .map(|s| b.add_vertex_named(s.label()))
        .collect::<Result<_>>()?;
    for w in vs.windows(2) {
        b.add_edge_named(w[0], w[1], EDGE_LABEL, directed)?;
    }
    if encoding == GrammarEncoding::S2 {
        let start = b.add_vertex_named(START_MARKER)?;
        let end = b.add_vertex_named(END_MARKER)?;
        if n == 0 {
            b.add_edge_named(start, end, EDGE_LABEL, true)?;
        } else {
            b.add_edge_named(start, vs[0], EDGE_LABEL, true)?;
            b.add_edge_named(vs[n - 1], end, EDGE_LABEL, true)?;
        }
    }
    b.build_arc()
}

/// The transition for one production applied at one position: the rewritten
/// vertex is deleted, right-hand-side vertices are fresh, and the remaining
/// symbols (and markers) map across.
pub fn form_transition(
    poset: &Arc<LabelPoset>,
    form: &[Sym],
    at: usize,
    rhs: &[Sym],
    encoding: GrammarEncoding,
) -> Result<Transition> {
    let target_form = rewrite(form, at, rhs);
    let source = form_graph(poset, form, encoding)?;
    let target = form_graph(poset, &target_form, encoding)?;
    let mut map = GraphMap::new_empty(source.clone(), target.clone());
    let n = form.len();
    let shift = |j: usize| if j < at { j } else { j + rhs.len() - 1 };
    for j in 0..n {
        if j != at {
            map.set_vertex(VertexId(j as u32), VertexId(shift(j) as u32));
        }
    }
    if encoding == GrammarEncoding::S2 {
        let tn = target_form.len();
        map.set_vertex(VertexId(n as u32), VertexId(tn as u32));
        map.set_vertex(VertexId(n as u32 + 1), VertexId(tn as u32 + 1));
    }
    // Map every source edge whose endpoints are both mapped; consecutive
    // mapped positions stay consecutive in the target.
    for e in source.edge_ids() {
        let d = source.edge(e);
        if let (Some(s), Some(t)) = (map.vertex(d.source), map.vertex(d.target)) {
            let f = target
                .find_edge(s, t, d.directed)
                .or_else(|| if d.directed { None } else { target.find_edge(t, s, false) })
                .expect("mapped endpoints stay adjacent");
            map.set_edge(e, f);
        }
    }
    Transition::new(map)
}

/// Generates the full input transition system for the chosen encoding:
/// every derivable form of bounded length is an input graph, and every
/// single-production rewrite of such a form is a transition (targets may
/// exceed the bound).
pub fn gen_grammar(spec: &GrammarSpec) -> Result<TransitionSystem> {
    let poset = grammar_poset();
    let mut builder = TransitionSystem::builder(poset.clone());
    for form in sentential_forms(spec.max_len) {
        builder.add_input(form_graph(&poset, &form, spec.encoding)?)?;
        for (i, &sym) in form.iter().enumerate() {
            for (lhs, rhs) in PRODUCTIONS {
                if lhs != sym {
                    continue;
                }
                builder.add_transition(form_transition(&poset, &form, i, rhs, spec.encoding)?)?;
            }
        }
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_match_language_prefix() {
        let forms = sentential_forms(3);
        assert!(forms.contains(&vec![Sym::S]));
        assert!(forms.contains(&vec![]));
        assert!(forms.contains(&vec![Sym::Zero]));
        assert!(forms.contains(&vec![Sym::One, Sym::Zero]));
        // "01" is not in (0|10)*1* ... it is: 0 then 1: (0)(1) yes.
        assert!(forms.contains(&vec![Sym::Zero, Sym::One]));
        // "11 0" is not derivable: 0 after trailing 1s is impossible.
        assert!(!forms.contains(&vec![Sym::One, Sym::One, Sym::Zero]));
    }

    #[test]
    fn s2_graphs_have_one_marker_pair() {
        let poset = grammar_poset();
        let forms = sentential_forms(4);
        for form in &forms {
            let g = form_graph(&poset, form, GrammarEncoding::S2).unwrap();
            let start = poset.id(START_MARKER).unwrap();
            let end = poset.id(END_MARKER).unwrap();
            assert_eq!(
                g.vertices().filter(|&v| g.vertex_label(v) == start).count(),
                1
            );
            assert_eq!(
                g.vertices().filter(|&v| g.vertex_label(v) == end).count(),
                1
            );
        }
    }

    #[test]
    fn transition_maps_preserve_untouched_symbols() {
        let poset = grammar_poset();
        // Apply A -> 10 in "0A1" at position 1.
        let form = vec![Sym::Zero, Sym::A, Sym::One];
        let t = form_transition(
            &poset,
            &form,
            1,
            &[Sym::One, Sym::Zero],
            GrammarEncoding::S1,
        )
        .unwrap();
        assert_eq!(t.target.vertex_count(), 4);
        // Position 0 maps to 0, position 2 maps to 3, the A is deleted.
        assert_eq!(t.map.vertex(VertexId(0)), Some(VertexId(0)));
        assert_eq!(t.map.vertex(VertexId(1)), None);
        assert_eq!(t.map.vertex(VertexId(2)), Some(VertexId(3)));
        // No edges survive: both source edges touch the rewritten vertex.
        assert_eq!(t.map.mapped_edge_count(), 0);
    }

    #[test]
    fn empty_production_bridges_neighbors() {
        let poset = grammar_poset();
        // A -> eps in "0A1": vertices 0 and 2 stay, the new edge is fresh.
        let form = vec![Sym::Zero, Sym::A, Sym::One];
        let t = form_transition(&poset, &form, 1, &[], GrammarEncoding::S1).unwrap();
        assert_eq!(t.target.vertex_count(), 2);
        assert_eq!(t.map.mapped_vertex_count(), 2);
        assert_eq!(t.map.mapped_edge_count(), 0);
        assert_eq!(t.target.edge_count(), 1);
    }
}
