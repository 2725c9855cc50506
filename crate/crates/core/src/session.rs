//! Checking sessions: the state shared by the typing and subtyping engines.
//!
//! A session owns the unification store, the registry of induction
//! hypotheses, the call graph decorated with size-change matrices and the
//! queue of delayed fixpoint obligations. It is confined to one thread.

use alloc::collections::VecDeque;
use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::error::{CheckError, ClashKind};
use crate::ordinal::{Ordinal, PosCtx};
use crate::proof::{Judgment, ProofTree};
use crate::scp::{edge_matrix, CallGraph, SCMatrix, Verdict};
use crate::syntax::{param_ord, EpsTerm, Name, Pos, Term, TermKind, Tm, Ty, Type};
use crate::uvar::{map_type, Store, TyStatus};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Rule applications allowed per top-level judgment.
    pub step_budget: usize,
    /// Breadth-first stages allowed for fixpoints.
    pub unroll_depth: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            step_budget: 100_000,
            unroll_depth: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypKind {
    Subtyping,
    Typing,
}

/// A general abstract sequent: a judgment whose ordinals are replaced by the
/// parameters `#0 … #n-1`, together with the facts assumed about them.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    pub kind: HypKind,
    /// Graph node; the rule labels use `node + 1`.
    pub node: usize,
    /// The fixpoint of a typing hypothesis.
    pub term: Option<Tm>,
    /// `[A, B]` for subtyping, `[A]` for typing.
    pub types: Vec<Ty>,
    pub arity: usize,
    pub nonzero: Vec<usize>,
    pub less: Vec<(usize, usize)>,
}

impl Hypothesis {
    pub fn label(&self) -> usize {
        self.node + 1
    }

    /// The context stating the hypothesis facts about `args`.
    pub fn context(&self, args: &[Ordinal]) -> PosCtx {
        let mut g = PosCtx::new();
        for &i in &self.nonzero {
            g = g.with_nonzero(&args[i]);
        }
        for &(i, j) in &self.less {
            g = g.with_less(&args[i], &args[j]);
        }
        g
    }

    /// True when `g` proves the hypothesis facts about `args`.
    pub fn facts_hold(&self, g: &PosCtx, args: &[Ordinal]) -> bool {
        self.nonzero.iter().all(|&i| g.nonzero(&args[i]))
            && self.less.iter().all(|&(i, j)| g.less(&args[i], &args[j]))
    }
}

/// A delayed typing obligation for a fixpoint.
#[derive(Clone, Debug)]
pub struct PendingFixpoint {
    pub id: usize,
    pub ctx: PosCtx,
    pub term: Tm,
    pub ty: Ty,
    pub generation: usize,
    pub source: Option<Current>,
    pub pos: Option<Pos>,
}

/// The hypothesis whose proof is being built, with its parameters.
#[derive(Clone, Debug)]
pub struct Current {
    pub node: usize,
    pub params: Vec<Ordinal>,
}

/// Result of a successful check.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub tree: ProofTree,
    pub graph: CallGraph,
    pub hypotheses: Vec<Hypothesis>,
    pub steps: usize,
    pub stages: usize,
}

impl Derivation {
    /// `(hypothesis label, matrix)` for every branch closed by a hypothesis.
    pub fn hits(&self) -> Vec<(usize, SCMatrix)> {
        let mut out = Vec::new();
        self.tree.walk(&mut |n| {
            if let Some((k, m)) = &n.hyp {
                out.push((*k, m.clone()));
            }
        });
        out
    }
}

pub struct Session {
    pub config: Config,
    pub store: Store,
    next_id: usize,
    pub(crate) budget: usize,
    pub(crate) steps: usize,
    pub(crate) registry: Vec<Hypothesis>,
    pub(crate) graph: CallGraph,
    pub(crate) queue: VecDeque<PendingFixpoint>,
    pub(crate) current: Option<Current>,
    pub(crate) generation: usize,
    pub(crate) stages: usize,
    pub(crate) last_typing: Option<Judgment>,
    /// When set, every judgment visited is appended, indented by depth.
    pub trace: Option<Vec<alloc::string::String>>,
    pub(crate) depth: usize,
}

pub(crate) struct Checkpoint {
    store: crate::uvar::StoreSnapshot,
    registry: usize,
    nodes: usize,
    edges: usize,
}

/// How ordinals are abstracted when forming a general abstract sequent.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Abstraction {
    /// Every ordinal other than `∞` and bound variables.
    Ordinals,
    /// As above, and `∞` on negative `μ` and positive `ν` too.
    Infinite,
    /// Ordinals, and `∞` on a `μ` heading the left type or a `ν` heading
    /// the right one.
    Heads,
}

struct Abstractor<'s> {
    store: &'s Store,
    args: Vec<Ordinal>,
    mode: Abstraction,
}

impl Abstractor<'_> {
    fn param(&mut self, o: Ordinal) -> Ordinal {
        match self.args.iter().position(|a| *a == o && !a.is_inf()) {
            Some(i) => param_ord(i),
            None => {
                self.args.push(o);
                param_ord(self.args.len() - 1)
            }
        }
    }

    fn ord(&mut self, o: &Ordinal) -> Ordinal {
        match self.store.ord_deep(o) {
            Ordinal::Inf => Ordinal::Inf,
            Ordinal::Succ(p) => Ordinal::succ(self.ord(&p)),
            v @ Ordinal::Var(_) => v,
            atom => self.param(atom),
        }
    }

    fn ty(&mut self, t: &Ty, positive: bool) -> Ty {
        let r = match &**t {
            Type::Var(_) | Type::UVar(_) | Type::Choice(_) | Type::Dot(..) => return t.clone(),
            Type::Arrow(a, b) => Type::Arrow(self.ty(a, !positive), self.ty(b, positive)),
            Type::Record(fs) => Type::Record(
                fs.iter()
                    .map(|(l, a)| (l.clone(), self.ty(a, positive)))
                    .collect(),
            ),
            Type::Variant(fs) => Type::Variant(
                fs.iter()
                    .map(|(l, a)| (l.clone(), self.ty(a, positive)))
                    .collect(),
            ),
            Type::Forall(x, b) => Type::Forall(x.clone(), self.ty(b, positive)),
            Type::Exists(x, b) => Type::Exists(x.clone(), self.ty(b, positive)),
            Type::OForall(x, b) => Type::OForall(x.clone(), self.ty(b, positive)),
            Type::OExists(x, b) => Type::OExists(x.clone(), self.ty(b, positive)),
            Type::Mu(o, x, b) => {
                let o2 = if self.mode == Abstraction::Infinite && o.is_inf() && !positive {
                    self.args.push(Ordinal::Inf);
                    param_ord(self.args.len() - 1)
                } else {
                    self.ord(o)
                };
                Type::Mu(o2, x.clone(), self.ty(b, positive))
            }
            Type::Nu(o, x, b) => {
                let o2 = if self.mode == Abstraction::Infinite && o.is_inf() && positive {
                    self.args.push(Ordinal::Inf);
                    param_ord(self.args.len() - 1)
                } else {
                    self.ord(o)
                };
                Type::Nu(o2, x.clone(), self.ty(b, positive))
            }
            Type::Meet(a, s) => Type::Meet(self.ty(a, positive), *s),
            Type::Join(a, s) => Type::Join(self.ty(a, positive), *s),
            Type::SecondOrder(id, args) => {
                Type::SecondOrder(*id, args.iter().map(|o| self.ord(o)).collect())
            }
        };
        Rc::new(r)
    }
}

/// Collects unresolved type unification variables, in order of appearance.
pub(crate) fn type_uvars(t: &Ty, out: &mut Vec<usize>) {
    map_type(
        t,
        &mut |u| {
            if let Type::UVar(i) = &**u {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            None
        },
        &mut |o| o.clone(),
    );
}

/// True when an unresolved ordinal unification variable occurs.
pub(crate) fn has_ord_uvar(store: &Store, t: &Ty) -> bool {
    let mut found = false;
    map_type(t, &mut |_| None, &mut |o| {
        if !store.ord_deep(o).is_ground() {
            found = true;
        }
        o.clone()
    });
    found
}

pub(crate) fn has_ord_quantifier(t: &Type) -> bool {
    match t {
        Type::OForall(..) | Type::OExists(..) => true,
        Type::Arrow(a, b) => has_ord_quantifier(a) || has_ord_quantifier(b),
        Type::Record(fs) | Type::Variant(fs) => fs.iter().any(|(_, a)| has_ord_quantifier(a)),
        Type::Forall(_, b)
        | Type::Exists(_, b)
        | Type::Mu(_, _, b)
        | Type::Nu(_, _, b)
        | Type::Meet(b, _)
        | Type::Join(b, _) => has_ord_quantifier(b),
        _ => false,
    }
}

/// Replaces the parameters of a skeleton by `params`.
pub(crate) fn instantiate(skel: &Ty, params: &[Ordinal]) -> Ty {
    map_type(skel, &mut |_| None, &mut |o| {
        let mut r = o.clone();
        for (i, p) in params.iter().enumerate() {
            if let Ordinal::Var(x) = param_ord(i) {
                r = r.subst_var(&x, p);
            }
        }
        r
    })
}

impl Default for Session {
    fn default() -> Session {
        Session::new(Config::default())
    }
}

impl Session {
    pub fn new(config: Config) -> Session {
        Session {
            budget: config.step_budget,
            config,
            store: Store::new(),
            next_id: 1,
            steps: 0,
            registry: Vec::new(),
            graph: CallGraph::new(),
            queue: VecDeque::new(),
            current: None,
            generation: 0,
            stages: 0,
            last_typing: None,
            trace: None,
            depth: 0,
        }
    }

    /// Clears everything that belongs to a single top-level judgment.
    pub(crate) fn reset(&mut self) {
        self.budget = self.config.step_budget;
        self.steps = 0;
        self.registry.clear();
        self.graph = CallGraph::new();
        self.queue.clear();
        self.current = None;
        self.generation = 0;
        self.stages = 0;
        self.last_typing = None;
        self.depth = 0;
        if let Some(t) = &mut self.trace {
            t.clear();
        }
    }

    pub fn fresh_id(&mut self) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.registry
    }

    /// An opaque ordinal constant.
    pub(crate) fn ord_constant(&mut self, name: &Name) -> Ordinal {
        let id = self.fresh_id();
        let _ = name;
        Ordinal::Choice(id, Name::from(""))
    }

    /// `ε_{x∈A}(t∉B)`.
    pub(crate) fn eps(&mut self, var: &Name, dom: Ty, body: Tm, cod: Ty, pos: Option<Pos>) -> Tm {
        let id = self.fresh_id();
        let pos = pos.or_else(|| self.anchor(&body));
        Term::at(
            TermKind::Eps(Rc::new(EpsTerm {
                id,
                var: var.clone(),
                dom,
                body,
                cod,
                pos: pos.clone(),
            })),
            pos,
        )
    }

    /// Position for a synthetic choice operator built from `t`.
    pub(crate) fn anchor(&self, t: &Tm) -> Option<Pos> {
        t.origin()
            .or_else(|| self.last_typing.as_ref().and_then(|j| j.term().origin()))
    }

    /// The counterexample `ε_{x∈A}(x∉B)` for plain subtyping.
    pub fn counterexample(&mut self, a: &Ty, b: &Ty) -> Tm {
        let x: Name = "x".into();
        self.eps(&x, a.clone(), Term::var("x"), b.clone(), None)
    }

    /// Spends one rule application. `sub` is the subtyping judgment being
    /// processed, if any, for the error report.
    pub(crate) fn step(
        &mut self,
        sub: impl FnOnce() -> Option<Judgment>,
    ) -> Result<(), CheckError> {
        self.steps += 1;
        // The judgment is only built when it is reported.
        let sub = if self.trace.is_some() || self.budget == 0 {
            sub()
        } else {
            None
        };
        if self.trace.is_some() {
            let j = sub
                .clone()
                .or_else(|| self.last_typing.clone())
                .map(|j| j.map_types(&mut |t| self.store.zonk(t)));
            let line = alloc::format!(
                "{:width$}{}",
                "",
                j.map(|j| crate::display::show(&j)).unwrap_or_default(),
                width = self.depth
            );
            if let Some(t) = &mut self.trace {
                t.push(line);
            }
        }
        if self.budget == 0 {
            let sub = sub.map(|j| j.map_types(&mut |t| self.store.zonk(t)));
            let typing = self
                .last_typing
                .as_ref()
                .map(|j| j.map_types(&mut |t| self.store.zonk(t)));
            return Err(CheckError::BudgetExhausted {
                typing,
                subtyping: sub,
            });
        }
        self.budget -= 1;
        Ok(())
    }

    pub(crate) fn clash(&self, term: &Tm, has: &Ty, used: &Ty, kind: ClashKind) -> CheckError {
        let typing = self
            .last_typing
            .as_ref()
            .map(|j| j.map_types(&mut |t| self.store.zonk(t)));
        let pos = typing
            .as_ref()
            .and_then(|j| j.term().pos.clone())
            .or_else(|| term.pos.clone());
        CheckError::Clash {
            term: term.clone(),
            has: self.store.zonk(has),
            used: self.store.zonk(used),
            kind,
            pos,
            typing,
        }
    }

    /// Closes every field-constrained unification variable of `t` from its
    /// own constraints, and returns the zonked result.
    pub(crate) fn close_constrained(&mut self, t: &Ty) -> Ty {
        let mut t = self.store.zonk(t);
        loop {
            let mut uvars = Vec::new();
            type_uvars(&t, &mut uvars);
            let open: Vec<usize> = uvars
                .into_iter()
                .filter(|&u| {
                    matches!(
                        self.store.ty_state(u).status,
                        TyStatus::FieldConstrained(..)
                    )
                })
                .collect();
            if open.is_empty() {
                return t;
            }
            for u in open {
                self.store.close_constrained(u);
            }
            t = self.store.zonk(&t);
        }
    }

    /// Forms the skeleton of a judgment over `tys` and returns it with the
    /// abstracted arguments. Constrained unification variables are closed
    /// from their own constraints; with `lift`, the remaining ones become
    /// second-order variables over the parameters.
    pub(crate) fn abstract_types(
        &mut self,
        tys: &[Ty],
        mode: Abstraction,
        lift: bool,
    ) -> (Vec<Ty>, Vec<Ordinal>) {
        let zonked: Vec<Ty> = if lift {
            tys.iter().map(|t| self.close_constrained(t)).collect()
        } else {
            tys.iter().map(|t| self.store.zonk(t)).collect()
        };
        let mut ab = Abstractor {
            store: &self.store,
            args: Vec::new(),
            mode,
        };
        let mut skel: Vec<Ty> = zonked
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let head_inf = mode == Abstraction::Heads
                    && match (i, &**t) {
                        (0, Type::Mu(o, ..)) | (1, Type::Nu(o, ..)) => o.is_inf(),
                        _ => false,
                    };
                if !head_inf {
                    return ab.ty(t, true);
                }
                ab.args.push(Ordinal::Inf);
                let p = param_ord(ab.args.len() - 1);
                match &**t {
                    Type::Mu(_, x, b) => Rc::new(Type::Mu(p, x.clone(), ab.ty(b, true))),
                    Type::Nu(_, x, b) => Rc::new(Type::Nu(p, x.clone(), ab.ty(b, true))),
                    _ => unreachable!(),
                }
            })
            .collect();
        let args = ab.args;
        if lift {
            let mut uvars = Vec::new();
            for t in &skel {
                type_uvars(t, &mut uvars);
            }
            for u in uvars {
                let v = self.store.fresh_so_ty(args.len());
                let inst = Rc::new(Type::SecondOrder(v, args.iter().cloned().collect()));
                let _ = self.store.bind_type_uvar(u, &inst);
                let pat: Rc<[Ordinal]> = (0..args.len()).map(param_ord).collect();
                let by = Rc::new(Type::SecondOrder(v, pat));
                skel = skel
                    .iter()
                    .map(|t| {
                        map_type(
                            t,
                            &mut |x| match &**x {
                                Type::UVar(i) if *i == u => Some(by.clone()),
                                _ => None,
                            },
                            &mut |o| o.clone(),
                        )
                    })
                    .collect();
            }
        }
        (skel, args)
    }

    /// Registers a hypothesis and links it from the current one. Returns the
    /// hypothesis index and the fresh parameter constants.
    pub(crate) fn register(
        &mut self,
        kind: HypKind,
        term: Option<Tm>,
        types: Vec<Ty>,
        g: &PosCtx,
        args: &[Ordinal],
    ) -> (usize, Vec<Ordinal>) {
        let arity = args.len();
        let mut nonzero = Vec::new();
        let mut less = Vec::new();
        for (i, a) in args.iter().enumerate() {
            if a.is_inf() {
                continue;
            }
            if g.nonzero(a) {
                nonzero.push(i);
            }
            for (j, b) in args.iter().enumerate() {
                if i != j && !b.is_inf() && g.less(a, b) {
                    less.push((i, j));
                }
            }
        }
        let node = self.graph.add_node(arity);
        if let Some(cur) = self.current.clone() {
            self.graph
                .add_edge(cur.node, node, edge_matrix(g, &cur.params, args));
        }
        let hyp = Hypothesis {
            kind,
            node,
            term,
            types,
            arity,
            nonzero,
            less,
        };
        let params: Vec<Ordinal> = (0..arity)
            .map(|_| {
                let id = self.fresh_id();
                Ordinal::Choice(id, Name::from(""))
            })
            .collect();
        self.registry.push(hyp);
        (self.registry.len() - 1, params)
    }

    /// Looks for a registered hypothesis matching the judgment, newest
    /// first. On success the size-change edge is recorded.
    ///
    /// With `unify`, unresolved unification variables of the judgment may be
    /// bound to the corresponding closed parts of the hypothesis.
    pub(crate) fn lookup(
        &mut self,
        kind: HypKind,
        term: Option<&Tm>,
        tys: &[Ty],
        g: &PosCtx,
        unify: bool,
    ) -> Option<(usize, SCMatrix)> {
        let zonked: Vec<Ty> = tys.iter().map(|t| self.store.zonk(t)).collect();
        for idx in (0..self.registry.len()).rev() {
            let h = &self.registry[idx];
            if h.kind != kind {
                continue;
            }
            match (term, &h.term) {
                (_, None) => {}
                (Some(t), Some(u)) if crate::syntax::alpha_eq_tm_with(t, u, &self.store) => {}
                _ => continue,
            }
            let snap = if unify {
                Some(self.store.snapshot())
            } else {
                None
            };
            let mut found = None;
            if unify {
                let h = h.clone();
                for (p, i) in h.types.iter().zip(&zonked) {
                    self.bind_towards(p, i, &mut Vec::new());
                }
            }
            let insts: Vec<Ty> = if unify {
                zonked.iter().map(|t| self.store.zonk(t)).collect()
            } else {
                zonked.clone()
            };
            let h = &self.registry[idx];
            if let Some(args) = crate::syntax::match_pattern(&h.types, &insts, h.arity, &self.store)
            {
                if h.facts_hold(g, &args) {
                    found = Some(args);
                }
            }
            let Some(args) = found else {
                if let Some(s) = snap {
                    self.store.rollback(s);
                }
                continue;
            };
            let h = &self.registry[idx];
            let m = match &self.current {
                Some(cur) => {
                    let m = edge_matrix(g, &cur.params, &args);
                    self.graph.add_edge(cur.node, h.node, m.clone());
                    m
                }
                None => SCMatrix::new(0, h.arity),
            };
            return Some((idx, m));
        }
        None
    }

    /// Binds the free unification variables of `inst` to the matching
    /// subterms of the pattern `pat`, when these are closed.
    fn bind_towards(&mut self, pat: &Ty, inst: &Ty, bound: &mut Vec<Name>) {
        let i = self.store.head(inst);
        match (&**pat, &*i) {
            (_, Type::UVar(u)) => {
                if !matches!(self.store.ty_state(*u).status, TyStatus::Unset) {
                    return;
                }
                let fv = crate::syntax::free_names_ty(pat);
                let closed = !fv
                    .types
                    .iter()
                    .chain(&fv.ords)
                    .any(|n| bound.contains(n) || n.starts_with('#'));
                if closed && !self.store.occurs(*u, pat) {
                    let _ = self.store.bind_type_uvar(*u, pat);
                }
            }
            (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => {
                self.bind_towards(a1, b1, bound);
                self.bind_towards(a2, b2, bound);
            }
            (Type::Record(xs), Type::Record(ys)) | (Type::Variant(xs), Type::Variant(ys)) => {
                for (l, a) in xs {
                    if let Some((_, b)) = ys.iter().find(|(m, _)| m == l) {
                        self.bind_towards(a, b, bound);
                    }
                }
            }
            (Type::Forall(x, a), Type::Forall(_, b))
            | (Type::Exists(x, a), Type::Exists(_, b))
            | (Type::OForall(x, a), Type::OForall(_, b))
            | (Type::OExists(x, a), Type::OExists(_, b))
            | (Type::Mu(_, x, a), Type::Mu(_, _, b))
            | (Type::Nu(_, x, a), Type::Nu(_, _, b)) => {
                bound.push(x.clone());
                self.bind_towards(a, b, bound);
                bound.pop();
            }
            _ => {}
        }
    }

    pub(crate) fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            store: self.store.snapshot(),
            registry: self.registry.len(),
            nodes: self.graph.node_count(),
            edges: self.graph.edges().len(),
        }
    }

    /// Forgets every unification, hypothesis and edge recorded since `c`.
    pub(crate) fn restore(&mut self, c: Checkpoint) {
        self.store.rollback(c.store);
        self.registry.truncate(c.registry);
        self.graph.truncate(c.nodes, c.edges);
    }

    pub(crate) fn check_graph(&self) -> Verdict {
        self.graph.check_well_founded()
    }

    pub(crate) fn zonk_tree(&self, tree: &mut ProofTree) {
        tree.map_judgments(&mut |j| j.map_types(&mut |t| self.store.zonk(t)));
    }

    pub(crate) fn derivation(&self, mut tree: ProofTree) -> Derivation {
        self.zonk_tree(&mut tree);
        Derivation {
            tree,
            graph: self.graph.clone(),
            hypotheses: self.registry.clone(),
            steps: self.steps,
            stages: self.stages,
        }
    }
}
