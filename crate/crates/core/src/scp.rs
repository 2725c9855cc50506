//! Size-change matrices and the well-foundedness check for circular proofs.
//!
//! Every node of a [`CallGraph`] is a registered induction hypothesis with a
//! fixed number of ordinal parameters. An edge records how the parameters of
//! the target relate to those of the source at the point where the target is
//! used. The proof is accepted when, after closing the graph under
//! composition, every idempotent loop decreases strictly on some parameter.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ordinal::{Ordinal, PosCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SCEntry {
    Unknown,
    Leq,
    Less,
}

impl SCEntry {
    /// Sequential composition of two relations along a thread.
    pub fn combine(self, other: SCEntry) -> SCEntry {
        use SCEntry::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Less, _) | (_, Less) => Less,
            (Leq, Leq) => Leq,
        }
    }

    /// The more informative of two entries.
    pub fn best(self, other: SCEntry) -> SCEntry {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// `rows × cols` matrix; entry `(i, j)` relates target parameter `j` to
/// source parameter `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SCMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SCEntry>,
}

impl SCMatrix {
    pub fn new(rows: usize, cols: usize) -> SCMatrix {
        SCMatrix {
            rows,
            cols,
            data: vec![SCEntry::Unknown; rows * cols],
        }
    }

    pub fn from_rows(rows: &[&[SCEntry]]) -> SCMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = SCMatrix::new(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged size-change matrix");
            for (j, e) in row.iter().enumerate() {
                m.set(i, j, *e);
            }
        }
        m
    }

    /// `Leq` on the diagonal, `Unknown` elsewhere.
    pub fn identity(n: usize) -> SCMatrix {
        let mut m = SCMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, SCEntry::Leq);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> SCEntry {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: SCEntry) {
        self.data[i * self.cols + j] = e;
    }

    pub fn compose(&self, other: &SCMatrix) -> SCMatrix {
        compose(self, other)
    }

    pub fn has_strict_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).any(|i| self.get(i, i) == SCEntry::Less)
    }
}

/// Composition of `m1: a×b` with `m2: b×c`.
///
/// Panics when the inner dimensions differ.
pub fn compose(m1: &SCMatrix, m2: &SCMatrix) -> SCMatrix {
    assert_eq!(m1.cols, m2.rows, "size-change matrix dimension mismatch");
    let mut m = SCMatrix::new(m1.rows, m2.cols);
    for i in 0..m1.rows {
        for k in 0..m2.cols {
            let e = (0..m1.cols)
                .map(|j| m1.get(i, j).combine(m2.get(j, k)))
                .fold(SCEntry::Unknown, SCEntry::best);
            m.set(i, k, e);
        }
    }
    m
}

impl fmt::Display for SCMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = match self.get(i, j) {
                    SCEntry::Less => '<',
                    SCEntry::Leq => '=',
                    SCEntry::Unknown => '?',
                };
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", c)?;
            }
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct CallGraph {
    arities: Vec<usize>,
    edges: Vec<(usize, usize, SCMatrix)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// An idempotent loop on `node` without strict decrease.
    Rejected {
        node: usize,
        matrix: SCMatrix,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl CallGraph {
    pub fn new() -> CallGraph {
        CallGraph::default()
    }

    /// Adds a node and returns its id.
    pub fn add_node(&mut self, arity: usize) -> usize {
        self.arities.push(arity);
        self.arities.len() - 1
    }

    pub fn arity(&self, node: usize) -> usize {
        self.arities[node]
    }

    pub fn node_count(&self) -> usize {
        self.arities.len()
    }

    pub fn edges(&self) -> &[(usize, usize, SCMatrix)] {
        &self.edges
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, m: SCMatrix) {
        assert_eq!(
            m.rows(),
            self.arities[src],
            "edge rows must match source arity"
        );
        assert_eq!(
            m.cols(),
            self.arities[dst],
            "edge columns must match target arity"
        );
        self.edges.push((src, dst, m));
    }

    /// Drops nodes and edges added after the given sizes.
    pub fn truncate(&mut self, nodes: usize, edges: usize) {
        self.arities.truncate(nodes);
        self.edges.truncate(edges);
    }

    /// Composition closure of all paths, as a set of `(src, dst, matrix)`.
    pub fn saturate(&self) -> BTreeSet<(usize, usize, SCMatrix)> {
        let mut closure: BTreeSet<(usize, usize, SCMatrix)> = BTreeSet::new();
        let mut work: Vec<(usize, usize, SCMatrix)> = Vec::new();
        for e in &self.edges {
            if closure.insert(e.clone()) {
                work.push(e.clone());
            }
        }
        while let Some((s, d, m)) = work.pop() {
            let mut fresh = Vec::new();
            for (s2, d2, m2) in &closure {
                if *s2 == d {
                    fresh.push((s, *d2, compose(&m, m2)));
                }
                if *d2 == s {
                    fresh.push((*s2, d, compose(m2, &m)));
                }
            }
            for e in fresh {
                if closure.insert(e.clone()) {
                    work.push(e);
                }
            }
        }
        closure
    }

    pub fn check_well_founded(&self) -> Verdict {
        for (s, d, m) in self.saturate() {
            if s == d && compose(&m, &m) == m && !m.has_strict_diagonal() {
                return Verdict::Rejected { node: s, matrix: m };
            }
        }
        Verdict::Accepted
    }
}

pub fn check_well_founded(g: &CallGraph) -> Verdict {
    g.check_well_founded()
}

/// Matrix for an edge whose source has parameters `src` and whose target is
/// used at arguments `dst`, given what `g` knows about their order.
pub fn edge_matrix(g: &PosCtx, src: &[Ordinal], dst: &[Ordinal]) -> SCMatrix {
    let mut m = SCMatrix::new(src.len(), dst.len());
    for (i, s) in src.iter().enumerate() {
        for (j, d) in dst.iter().enumerate() {
            let e = if g.less(d, s) {
                SCEntry::Less
            } else if g.leq(d, s) {
                SCEntry::Leq
            } else {
                SCEntry::Unknown
            };
            m.set(i, j, e);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::rc::Rc;
    use SCEntry::*;

    #[test]
    fn identity_is_neutral() {
        let m = SCMatrix::from_rows(&[&[Less, Unknown], &[Leq, Less]]);
        assert_eq!(compose(&SCMatrix::identity(2), &m), m);
        assert_eq!(compose(&m, &SCMatrix::identity(2)), m);
    }

    #[test]
    fn strictness_propagates() {
        let a = SCMatrix::from_rows(&[&[Less]]);
        let b = SCMatrix::from_rows(&[&[Leq]]);
        assert_eq!(compose(&a, &b), a);
    }

    #[test]
    fn identity_self_loop_rejected() {
        let mut g = CallGraph::new();
        let n = g.add_node(1);
        g.add_edge(n, n, SCMatrix::identity(1));
        assert!(!g.check_well_founded().is_accepted());
    }

    #[test]
    fn nullary_self_loop_rejected() {
        let mut g = CallGraph::new();
        let n = g.add_node(0);
        g.add_edge(n, n, SCMatrix::new(0, 0));
        assert!(!g.check_well_founded().is_accepted());
    }

    #[test]
    fn strict_self_loop_accepted() {
        let mut g = CallGraph::new();
        let n = g.add_node(1);
        g.add_edge(n, n, SCMatrix::from_rows(&[&[Less]]));
        assert_eq!(g.check_well_founded(), Verdict::Accepted);
    }

    #[test]
    fn two_cycle_with_descent() {
        // A → B keeps the size, B → A decreases it.
        let mut g = CallGraph::new();
        let a = g.add_node(1);
        let b = g.add_node(1);
        g.add_edge(a, b, SCMatrix::from_rows(&[&[Leq]]));
        g.add_edge(b, a, SCMatrix::from_rows(&[&[Less]]));
        assert!(g.check_well_founded().is_accepted());
    }

    #[test]
    fn swapping_parameters() {
        // f(x, y) → f(y, x - 1): the composition of two calls decreases x.
        let mut g = CallGraph::new();
        let f = g.add_node(2);
        g.add_edge(
            f,
            f,
            SCMatrix::from_rows(&[&[Unknown, Less], &[Leq, Unknown]]),
        );
        assert!(g.check_well_founded().is_accepted());
    }

    #[test]
    fn edge_matrix_cases() {
        let k5 = Ordinal::Choice(5, "k".into());
        let g = PosCtx::new().with_nonzero(&k5);
        let k6 = Ordinal::Witness(6, Rc::new(k5.clone()));
        assert_eq!(
            edge_matrix(&g, core::slice::from_ref(&k5), &[k6]),
            SCMatrix::from_rows(&[&[Less]])
        );
        assert_eq!(
            edge_matrix(&g, core::slice::from_ref(&k5), core::slice::from_ref(&k5)),
            SCMatrix::identity(1)
        );
        let (a, b) = (Ordinal::var("a"), Ordinal::var("b"));
        assert_eq!(
            edge_matrix(&g, &[a], &[b]),
            SCMatrix::from_rows(&[&[Unknown]])
        );
        let _ = k5;
    }

    #[test]
    fn display_grid() {
        let m = SCMatrix::from_rows(&[&[Less, Unknown], &[Leq, Less]]);
        assert_eq!(alloc::format!("{}", m), "< ?\n= <");
    }
}
