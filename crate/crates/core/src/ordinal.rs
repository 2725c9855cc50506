//! Syntactic ordinals and positivity contexts.
//!
//! The ordinal language is deliberately small: `∞`, successor, variables,
//! witnesses produced when unfolding sized types, opaque choice constants,
//! and unification variables. Ordering is a sound syntactic closure, not a
//! decision procedure for ordinal arithmetic.

use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::syntax::Name;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ordinal {
    Inf,
    Succ(Rc<Ordinal>),
    /// Bound by an ordinal quantifier, a type definition parameter or `Λα`.
    Var(Name),
    /// Some ordinal strictly below `bound`, created by unfolding a sized type.
    Witness(usize, Rc<Ordinal>),
    /// An opaque ordinal constant (ordinal choice operator or abstracted
    /// hypothesis parameter). Only the facts recorded in a [`PosCtx`] are
    /// known about it.
    Choice(usize, Name),
    UVar(usize),
    SecondOrder(usize, Rc<[Ordinal]>),
}

impl Ordinal {
    /// Successor, with `∞` absorbing.
    pub fn succ(o: Ordinal) -> Ordinal {
        match o {
            Ordinal::Inf => Ordinal::Inf,
            o => Ordinal::Succ(Rc::new(o)),
        }
    }

    pub fn var(name: &str) -> Ordinal {
        Ordinal::Var(name.into())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ordinal::Inf)
    }

    /// True when the ordinal mentions no unification variable.
    pub fn is_ground(&self) -> bool {
        match self {
            Ordinal::UVar(_) | Ordinal::SecondOrder(..) => false,
            Ordinal::Succ(o) | Ordinal::Witness(_, o) => o.is_ground(),
            _ => true,
        }
    }

    /// Visits every ordinal variable name occurring free.
    pub fn free_vars(&self, out: &mut Vec<Name>) {
        match self {
            Ordinal::Var(n) => {
                if !out.contains(n) {
                    out.push(n.clone())
                }
            }
            Ordinal::Succ(o) => o.free_vars(out),
            Ordinal::SecondOrder(_, args) => args.iter().for_each(|a| a.free_vars(out)),
            _ => {}
        }
    }

    /// Replaces the variable `name` by `by`.
    pub fn subst_var(&self, name: &str, by: &Ordinal) -> Ordinal {
        match self {
            Ordinal::Var(n) if &**n == name => by.clone(),
            Ordinal::Succ(o) => Ordinal::succ(o.subst_var(name, by)),
            Ordinal::SecondOrder(id, args) => {
                Ordinal::SecondOrder(*id, args.iter().map(|a| a.subst_var(name, by)).collect())
            }
            o => o.clone(),
        }
    }

    /// Replaces every occurrence of `from` (compared structurally) by `to`.
    pub fn replace(&self, from: &Ordinal, to: &Ordinal) -> Ordinal {
        if self == from {
            return to.clone();
        }
        match self {
            Ordinal::Succ(o) => Ordinal::succ(o.replace(from, to)),
            Ordinal::SecondOrder(id, args) => {
                Ordinal::SecondOrder(*id, args.iter().map(|a| a.replace(from, to)).collect())
            }
            o => o.clone(),
        }
    }
}

/// Positivity context: ordinals assumed nonzero plus strict-order facts.
///
/// Witness ordinals carry their own bound, so `w < bound` never needs to be
/// stored here; `less` only holds facts about opaque constants (for instance
/// the parameters of a generalised hypothesis). The context is persistent:
/// every extension returns a new value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PosCtx {
    nonzero: Vec<Ordinal>,
    less: Vec<(Ordinal, Ordinal)>,
    /// Every ordinal the context talks about, in insertion order.
    order: Vec<Ordinal>,
}

const MAX_DEPTH: usize = 64;

impl PosCtx {
    pub fn new() -> PosCtx {
        PosCtx::default()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn note(&mut self, o: &Ordinal) {
        if !self.order.contains(o) {
            self.order.push(o.clone());
        }
    }

    /// Records that `o` is nonzero.
    pub fn with_nonzero(&self, o: &Ordinal) -> PosCtx {
        let mut g = self.clone();
        if !matches!(o, Ordinal::Inf | Ordinal::Succ(_)) && !g.nonzero.contains(o) {
            g.nonzero.push(o.clone());
        }
        g.note(o);
        g
    }

    /// Records the strict fact `lo < hi`.
    pub fn with_less(&self, lo: &Ordinal, hi: &Ordinal) -> PosCtx {
        let mut g = self.clone();
        let fact = (lo.clone(), hi.clone());
        if !g.less.contains(&fact) {
            g.less.push(fact);
        }
        g.note(lo);
        g.note(hi);
        g
    }

    /// Records a witness so that it can be found by [`PosCtx::ordinals`].
    pub fn with_ordinal(&self, o: &Ordinal) -> PosCtx {
        let mut g = self.clone();
        g.note(o);
        g
    }

    /// Union of two contexts, facts of `self` first.
    pub fn merge(&self, other: &PosCtx) -> PosCtx {
        let mut g = self.clone();
        for o in &other.nonzero {
            if !g.nonzero.contains(o) {
                g.nonzero.push(o.clone());
            }
        }
        for f in &other.less {
            if !g.less.contains(f) {
                g.less.push(f.clone());
            }
        }
        for o in &other.order {
            g.note(o);
        }
        g
    }

    /// Ordinals mentioned by the context, oldest first.
    pub fn ordinals(&self) -> &[Ordinal] {
        &self.order
    }

    pub fn nonzero_set(&self) -> &[Ordinal] {
        &self.nonzero
    }

    pub fn less_facts(&self) -> &[(Ordinal, Ordinal)] {
        &self.less
    }

    pub fn leq(&self, a: &Ordinal, b: &Ordinal) -> bool {
        self.leq_at(a, b, 0)
    }

    pub fn less(&self, a: &Ordinal, b: &Ordinal) -> bool {
        self.less_at(a, b, 0)
    }

    fn leq_at(&self, a: &Ordinal, b: &Ordinal, depth: usize) -> bool {
        if depth > MAX_DEPTH {
            return false;
        }
        if a == b || b.is_inf() {
            return true;
        }
        if let Ordinal::Succ(b1) = b {
            if self.leq_at(a, b1, depth + 1) {
                return true;
            }
        }
        match a {
            Ordinal::Succ(a1) if self.less_at(a1, b, depth + 1) => return true,
            Ordinal::Witness(_, bound) if self.leq_at(bound, b, depth + 1) => return true,
            _ => {}
        }
        self.less
            .iter()
            .any(|(x, y)| x == a && self.leq_at(y, b, depth + 1))
    }

    fn less_at(&self, a: &Ordinal, b: &Ordinal, depth: usize) -> bool {
        if depth > MAX_DEPTH {
            return false;
        }
        if let Ordinal::Succ(b1) = b {
            if self.leq_at(a, b1, depth + 1) {
                return true;
            }
        }
        if let Ordinal::Witness(_, bound) = a {
            if self.leq_at(bound, b, depth + 1) {
                return true;
            }
        }
        self.less
            .iter()
            .any(|(x, y)| x == a && self.leq_at(y, b, depth + 1))
    }

    /// True when `o` is known to be nonzero.
    pub fn nonzero(&self, o: &Ordinal) -> bool {
        match o {
            Ordinal::Inf | Ordinal::Succ(_) => true,
            o if self.nonzero.contains(o) => true,
            o => {
                self.less.iter().any(|(_, hi)| hi == o)
                    || self
                        .order
                        .iter()
                        .any(|w| matches!(w, Ordinal::Witness(_, b) if **b == *o))
            }
        }
    }
}

/// Free-function forms of the ordering judgments.
pub fn ord_leq(g: &PosCtx, a: &Ordinal, b: &Ordinal) -> bool {
    g.leq(a, b)
}

pub fn ord_less(g: &PosCtx, a: &Ordinal, b: &Ordinal) -> bool {
    g.less(a, b)
}

pub fn ord_nonzero(g: &PosCtx, o: &Ordinal) -> bool {
    g.nonzero(o)
}

/// Creates a witness `w < bound` with identifier `id` and records it in the
/// context. The caller is responsible for `bound` being nonzero in `g`.
pub fn fresh_witness(g: &PosCtx, bound: &Ordinal, id: usize) -> (Ordinal, PosCtx) {
    debug_assert!(g.nonzero(bound), "witness below a possibly-zero ordinal");
    let w = Ordinal::Witness(id, Rc::new(bound.clone()));
    let g = g.with_ordinal(&w);
    (w, g)
}
