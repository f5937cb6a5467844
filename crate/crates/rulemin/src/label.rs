//! Bounded label posets.
//!
//! Labels form a bounded partial order with bottom element `eps` and top
//! element `top`. Morphisms must not decrease labels and the invariant graph
//! of a rule carries meets of the labels it links, so the order is required
//! to be a meet-semilattice. The default construction is the flat poset
//! `eps < atom < top` for a set of atoms; richer orders can be loaded from a
//! cover relation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a label within its poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite bounded meet-semilattice of labels.
#[derive(Clone)]
pub struct LabelPoset {
    names: Vec<String>,
    index: HashMap<String, LabelId>,
    /// Dense `leq[a][b]` matrix of the reflexive-transitive order.
    leq: Vec<Vec<bool>>,
    /// Dense meet table.
    meet: Vec<Vec<LabelId>>,
    bottom: LabelId,
    top: LabelId,
}

impl PartialEq for LabelPoset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq
    }
}
impl Eq for LabelPoset {}

impl fmt::Debug for LabelPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabelPoset")
            .field("names", &self.names)
            .finish()
    }
}

pub const DEFAULT_BOTTOM: &str = "eps";
pub const DEFAULT_TOP: &str = "top";

impl LabelPoset {
    /// Flat poset: `bottom < atom < top` for every atom, atoms incomparable.
    pub fn flat<S: AsRef<str>>(atoms: &[S]) -> Result<Arc<LabelPoset>> {
        Self::with_covers(DEFAULT_BOTTOM, DEFAULT_TOP, atoms, &[])
    }

    /// Builds a poset from named bounds, atoms and a cover relation `a < b`
    /// between atoms. The reflexive-transitive closure is computed and the
    /// result is validated to be a bounded meet-semilattice.
    pub fn with_covers<S: AsRef<str>>(
        bottom: &str,
        top: &str,
        atoms: &[S],
        covers: &[(String, String)],
    ) -> Result<Arc<LabelPoset>> {
        let mut names: Vec<String> = Vec::with_capacity(atoms.len() + 2);
        names.push(bottom.to_string());
        names.push(top.to_string());
        for a in atoms {
            names.push(a.as_ref().to_string());
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), LabelId(i as u32)).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate label `{n}`")));
            }
        }
        let n = names.len();
        let bottom_id = LabelId(0);
        let top_id = LabelId(1);

        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
            row[top_id.index()] = true;
        }
        for row in leq.iter_mut().skip(0) {
            row[top_id.index()] = true;
        }
        for j in 0..n {
            leq[bottom_id.index()][j] = true;
        }
        for (a, b) in covers {
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::UnknownLabel(b.clone()))?;
            leq[ia.index()][ib.index()] = true;
        }
        // Transitive closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        // Antisymmetry.
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "labels `{}` and `{}` are mutually comparable",
                        names[i], names[j]
                    )));
                }
            }
        }
        // Meets: unique greatest lower bound for every pair.
        let mut meet = vec![vec![bottom_id; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&x| leq[x][a] && leq[x][b]).collect();
                let mut greatest = None;
                for &x in &lower {
                    if lower.iter().all(|&y| leq[y][x]) {
                        greatest = Some(x);
                        break;
                    }
                }
                match greatest {
                    Some(g) => meet[a][b] = LabelId(g as u32),
                    None => {
                        return Err(Error::InvalidPoset(format!(
                            "labels `{}` and `{}` have no meet",
                            names[a], names[b]
                        )))
                    }
                }
            }
        }
        Ok(Arc::new(LabelPoset {
            names,
            index,
            leq,
            meet,
            bottom: bottom_id,
            top: top_id,
        }))
    }

    pub fn bottom(&self) -> LabelId {
        self.bottom
    }

    pub fn top(&self) -> LabelId {
        self.top
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Atom names in insertion order (everything except the bounds).
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.names.iter().skip(2).map(|s| s.as_str())
    }

    pub fn id(&self, name: &str) -> Result<LabelId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn name(&self, id: LabelId) -> &str {
        &self.names[id.index()]
    }

    /// `a <= b` in the label order.
    pub fn leq(&self, a: LabelId, b: LabelId) -> bool {
        self.leq[a.index()][b.index()]
    }

    /// Greatest lower bound of `a` and `b`.
    pub fn meet(&self, a: LabelId, b: LabelId) -> LabelId {
        self.meet[a.index()][b.index()]
    }

    /// Name-level variant of [`LabelPoset::leq`].
    pub fn leq_named(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq(self.id(a)?, self.id(b)?))
    }

    /// Name-level variant of [`LabelPoset::meet`].
    pub fn meet_named(&self, a: &str, b: &str) -> Result<&str> {
        Ok(self.name(self.meet(self.id(a)?, self.id(b)?)))
    }

    /// True when the two poset handles denote the same poset.
    pub fn compatible(a: &Arc<LabelPoset>, b: &Arc<LabelPoset>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_order() {
        let p = LabelPoset::flat(&["C", "O"]).unwrap();
        let c = p.id("C").unwrap();
        let o = p.id("O").unwrap();
        assert!(p.leq(p.bottom(), c));
        assert!(p.leq(c, c));
        assert!(!p.leq(c, o));
        assert!(p.leq(c, p.top()));
    }

    #[test]
    fn flat_meets() {
        let p = LabelPoset::flat(&["X", "O"]).unwrap();
        let x = p.id("X").unwrap();
        let o = p.id("O").unwrap();
        assert_eq!(p.meet(x, x), x);
        assert_eq!(p.meet(x, o), p.bottom());
        assert_eq!(p.meet(p.top(), x), x);
    }

    #[test]
    fn unknown_label_rejected() {
        let p = LabelPoset::flat(&["C"]).unwrap();
        assert!(matches!(p.id("N"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn covers_build_diamond() {
        // eps < a, b < ab < top with a,b incomparable: meets exist.
        let p = LabelPoset::with_covers(
            "eps",
            "top",
            &["a", "b", "ab"],
            &[
                ("a".to_string(), "ab".to_string()),
                ("b".to_string(), "ab".to_string()),
            ],
        )
        .unwrap();
        let a = p.id("a").unwrap();
        let b = p.id("b").unwrap();
        let ab = p.id("ab").unwrap();
        assert!(p.leq(a, ab));
        assert!(p.leq(b, ab));
        assert_eq!(p.meet(a, b), p.bottom());
        assert_eq!(p.meet(ab, a), a);
    }

    #[test]
    fn cycle_rejected() {
        let res = LabelPoset::with_covers(
            "eps",
            "top",
            &["a", "b"],
            &[
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "a".to_string()),
            ],
        );
        assert!(res.is_err());
    }

    #[test]
    fn missing_meet_rejected() {
        // a, b < c and a, b < d: lower bounds of {c, d} are {eps, a, b} with
        // no greatest element.
        let res = LabelPoset::with_covers(
            "eps",
            "top",
            &["a", "b", "c", "d"],
            &[
                ("a".to_string(), "c".to_string()),
                ("b".to_string(), "c".to_string()),
                ("a".to_string(), "d".to_string()),
                ("b".to_string(), "d".to_string()),
            ],
        );
        assert!(res.is_err());
    }
}
