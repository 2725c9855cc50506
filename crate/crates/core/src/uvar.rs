//! Unification variables for types and ordinals.
//!
//! The store is trail based: every mutation records the previous state, and
//! [`Store::rollback`] unwinds to a [`StoreSnapshot`]. Checks that need the
//! subtyping engine (constraints recorded on a variable that is later bound)
//! are returned to the caller instead of being run here.

use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::ordinal::{Ordinal, PosCtx};
use crate::syntax::{Name, Pos, Resolve, TermKind, Ty, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// Projected record fields: an upper bound `U ⊂ {l: A; …}`.
    RecordUpper,
    /// Constructed variants: a lower bound `[C of A | …] ⊂ U`.
    VariantLower,
}

#[derive(Clone, Debug)]
pub enum TyStatus {
    Unset,
    Bound(Ty),
    FieldConstrained(FieldKind, Vec<(Name, Ty)>),
}

#[derive(Clone, Debug)]
pub struct TypeUVarState {
    pub status: TyStatus,
    pub pos: Option<Pos>,
}

#[derive(Clone, Debug, Default)]
pub struct OrdUVarState {
    /// `lower ≤ O`
    pub lower: Option<Ordinal>,
    /// `O < upper`
    pub upper: Option<Ordinal>,
    pub value: Option<Ordinal>,
}

#[derive(Clone, Debug)]
pub enum SoOrdStatus {
    Unset,
    Projection(usize),
    Imitation(Ordinal),
}

#[derive(Clone, Debug)]
pub struct SecondOrderUVar {
    pub arity: usize,
    pub status: SoOrdStatus,
}

/// A type-valued second-order variable; its body refers to its parameters
/// through the ordinal variables returned by [`param_name`].
#[derive(Clone, Debug)]
pub struct SecondOrderTyUVar {
    pub arity: usize,
    pub body: Option<Ty>,
}

#[derive(Clone, Debug)]
enum Undo {
    Ty(usize, TypeUVarState),
    Ord(usize, OrdUVarState),
    SoOrd(usize, SecondOrderUVar),
    SoTy(usize, SecondOrderTyUVar),
    Slot(usize, PosCtx),
}

/// Opaque position in the store's history.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StoreSnapshot {
    trail: usize,
    tys: usize,
    ords: usize,
    so_ords: usize,
    so_tys: usize,
    slots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UVarError {
    /// The variable occurs negatively (or inside a choice operator).
    OccursCheck,
    /// Record and variant constraints on the same variable.
    KindClash,
    NoPositiveSolution,
    Unsolvable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Occ {
    None,
    Pos,
    Neg,
    Mixed,
}

impl Occ {
    fn join(self, o: Occ) -> Occ {
        match (self, o) {
            (Occ::None, o) | (o, Occ::None) => o,
            (a, b) if a == b => a,
            _ => Occ::Mixed,
        }
    }

    fn flip(self) -> Occ {
        match self {
            Occ::Pos => Occ::Neg,
            Occ::Neg => Occ::Pos,
            o => o,
        }
    }
}

/// Name of the `k`-th parameter of a second-order type variable body.
pub fn param_name(k: usize) -> Name {
    alloc::format!("${}", k).into()
}

#[derive(Clone, Debug, Default)]
pub struct Store {
    tys: Vec<TypeUVarState>,
    ords: Vec<OrdUVarState>,
    so_ords: Vec<SecondOrderUVar>,
    so_tys: Vec<SecondOrderTyUVar>,
    slots: Vec<PosCtx>,
    trail: Vec<Undo>,
}

/// Rebuilds a type bottom-up. `f` may replace a node outright (its result is
/// not traversed further); `g` maps every ordinal. Embedded terms are closed
/// and left untouched.
pub fn map_type(
    t: &Ty,
    f: &mut dyn FnMut(&Ty) -> Option<Ty>,
    g: &mut dyn FnMut(&Ordinal) -> Ordinal,
) -> Ty {
    if let Some(r) = f(t) {
        return r;
    }
    let r = match &**t {
        Type::Var(_) | Type::UVar(_) | Type::Choice(_) | Type::Dot(..) => return t.clone(),
        Type::Arrow(a, b) => Type::Arrow(map_type(a, f, g), map_type(b, f, g)),
        Type::Record(fs) => Type::Record(
            fs.iter()
                .map(|(l, a)| (l.clone(), map_type(a, f, g)))
                .collect(),
        ),
        Type::Variant(fs) => Type::Variant(
            fs.iter()
                .map(|(l, a)| (l.clone(), map_type(a, f, g)))
                .collect(),
        ),
        Type::Forall(x, b) => Type::Forall(x.clone(), map_type(b, f, g)),
        Type::Exists(x, b) => Type::Exists(x.clone(), map_type(b, f, g)),
        Type::OForall(x, b) => Type::OForall(x.clone(), map_type(b, f, g)),
        Type::OExists(x, b) => Type::OExists(x.clone(), map_type(b, f, g)),
        Type::Mu(o, x, b) => Type::Mu(g(o), x.clone(), map_type(b, f, g)),
        Type::Nu(o, x, b) => Type::Nu(g(o), x.clone(), map_type(b, f, g)),
        Type::Meet(a, s) => Type::Meet(map_type(a, f, g), *s),
        Type::Join(a, s) => Type::Join(map_type(a, f, g), *s),
        Type::SecondOrder(id, args) => Type::SecondOrder(*id, args.iter().map(g).collect()),
    };
    Rc::new(r)
}

/// Field constraints that were pending on a variable when it got bound.
pub type FieldConstraint = (FieldKind, Vec<(Name, Ty)>);

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    // -- creation ----------------------------------------------------------

    pub fn fresh_ty(&mut self, pos: Option<Pos>) -> Ty {
        self.tys.push(TypeUVarState {
            status: TyStatus::Unset,
            pos,
        });
        Rc::new(Type::UVar(self.tys.len() - 1))
    }

    pub fn fresh_ord(&mut self) -> Ordinal {
        self.ords.push(OrdUVarState::default());
        Ordinal::UVar(self.ords.len() - 1)
    }

    pub fn fresh_ord_bounded(&mut self, lower: Option<Ordinal>, upper: Option<Ordinal>) -> Ordinal {
        self.ords.push(OrdUVarState {
            lower,
            upper,
            value: None,
        });
        Ordinal::UVar(self.ords.len() - 1)
    }

    pub fn fresh_so_ord(&mut self, arity: usize) -> usize {
        self.so_ords.push(SecondOrderUVar {
            arity,
            status: SoOrdStatus::Unset,
        });
        self.so_ords.len() - 1
    }

    pub fn fresh_so_ty(&mut self, arity: usize) -> usize {
        self.so_tys.push(SecondOrderTyUVar { arity, body: None });
        self.so_tys.len() - 1
    }

    pub fn fresh_slot(&mut self) -> usize {
        self.slots.push(PosCtx::new());
        self.slots.len() - 1
    }

    // -- inspection --------------------------------------------------------

    pub fn ty_state(&self, id: usize) -> &TypeUVarState {
        &self.tys[id]
    }

    pub fn ord_state(&self, id: usize) -> &OrdUVarState {
        &self.ords[id]
    }

    pub fn so_ord_state(&self, id: usize) -> &SecondOrderUVar {
        &self.so_ords[id]
    }

    pub fn slot(&self, id: usize) -> &PosCtx {
        &self.slots[id]
    }

    pub fn ty_count(&self) -> usize {
        self.tys.len()
    }

    // -- trail -------------------------------------------------------------

    pub fn snapshot(&self) -> StoreSnapshot {
        StoreSnapshot {
            trail: self.trail.len(),
            tys: self.tys.len(),
            ords: self.ords.len(),
            so_ords: self.so_ords.len(),
            so_tys: self.so_tys.len(),
            slots: self.slots.len(),
        }
    }

    /// Undoes every change made since `s`.
    ///
    /// Panics if the store was already rolled back past `s`.
    pub fn rollback(&mut self, s: StoreSnapshot) {
        assert!(
            s.trail <= self.trail.len() && s.tys <= self.tys.len() && s.ords <= self.ords.len(),
            "stale store snapshot"
        );
        while self.trail.len() > s.trail {
            match self.trail.pop().unwrap() {
                Undo::Ty(i, old) => self.tys[i] = old,
                Undo::Ord(i, old) => self.ords[i] = old,
                Undo::SoOrd(i, old) => self.so_ords[i] = old,
                Undo::SoTy(i, old) => self.so_tys[i] = old,
                Undo::Slot(i, old) => self.slots[i] = old,
            }
        }
        self.tys.truncate(s.tys);
        self.ords.truncate(s.ords);
        self.so_ords.truncate(s.so_ords);
        self.so_tys.truncate(s.so_tys);
        self.slots.truncate(s.slots);
    }

    fn set_ty_status(&mut self, id: usize, status: TyStatus) {
        let old = self.tys[id].clone();
        self.trail.push(Undo::Ty(id, old));
        self.tys[id].status = status;
    }

    fn set_ord_state(&mut self, id: usize, st: OrdUVarState) {
        let old = core::mem::replace(&mut self.ords[id], st);
        self.trail.push(Undo::Ord(id, old));
    }

    pub fn add_to_slot(&mut self, slot: usize, g: &PosCtx) {
        let merged = self.slots[slot].merge(g);
        let old = core::mem::replace(&mut self.slots[slot], merged);
        self.trail.push(Undo::Slot(slot, old));
    }

    // -- resolution --------------------------------------------------------

    /// Follows bound variables and second-order instances at the head.
    pub fn head(&self, t: &Ty) -> Ty {
        let mut cur = t.clone();
        loop {
            let next = match &*cur {
                Type::UVar(id) => match &self.tys[*id].status {
                    TyStatus::Bound(b) => b.clone(),
                    _ => return cur,
                },
                Type::SecondOrder(id, args) => match &self.so_tys[*id].body {
                    Some(body) => instantiate_params(body, args),
                    None => return cur,
                },
                Type::Dot(h, name) => match self.resolve_dot(h, name) {
                    Some(t) => t,
                    None => return cur,
                },
                _ => return cur,
            };
            cur = next;
        }
    }

    /// The declared existential type of a term, for `h.T`.
    fn declared_type(&self, h: &crate::syntax::Tm) -> Option<Ty> {
        match &h.kind {
            TermKind::Eps(e) => Some(e.dom.clone()),
            TermKind::Global(g) => g.ty.clone(),
            TermKind::Annot(_, a) => Some(a.clone()),
            _ => None,
        }
    }

    /// `h.T = ε_T(h ∈ A)` where `∃T.A` is reached by peeling the existential
    /// prefix of the type of `h`, earlier binders replaced by their own
    /// projections.
    pub fn resolve_dot(&self, h: &crate::syntax::Tm, name: &str) -> Option<Ty> {
        let mut ty = self.head(&self.declared_type(h)?);
        loop {
            match &*ty {
                Type::Exists(x, body) => {
                    let choice = Rc::new(Type::Choice(Rc::new(crate::syntax::TypeChoice {
                        id: usize::MAX,
                        kind: crate::syntax::ChoiceKind::In,
                        var: x.clone(),
                        term: h.clone(),
                        body: body.clone(),
                        pos: h.origin(),
                    })));
                    if &**x == name {
                        return Some(choice);
                    }
                    ty = self.head(&crate::syntax::subst_type(body, x, &choice));
                }
                _ => return None,
            }
        }
    }

    /// Deep resolution of an ordinal.
    pub fn ord_deep(&self, o: &Ordinal) -> Ordinal {
        match o {
            Ordinal::UVar(id) => match &self.ords[*id].value {
                Some(v) => self.ord_deep(v),
                None => o.clone(),
            },
            Ordinal::Succ(p) => Ordinal::succ(self.ord_deep(p)),
            Ordinal::SecondOrder(id, args) => match &self.so_ords[*id].status {
                SoOrdStatus::Projection(k) => self.ord_deep(&args[*k]),
                SoOrdStatus::Imitation(c) => self.ord_deep(c),
                SoOrdStatus::Unset => {
                    Ordinal::SecondOrder(*id, args.iter().map(|a| self.ord_deep(a)).collect())
                }
            },
            o => o.clone(),
        }
    }

    /// Deep resolution of a type, including ordinals.
    pub fn zonk(&self, t: &Ty) -> Ty {
        map_type(
            t,
            &mut |u| match &**u {
                Type::UVar(_) | Type::SecondOrder(..) | Type::Dot(..) => {
                    let h = self.head(u);
                    if Rc::ptr_eq(&h, u) {
                        match &**u {
                            Type::SecondOrder(id, args) => Some(Rc::new(Type::SecondOrder(
                                *id,
                                args.iter().map(|a| self.ord_deep(a)).collect(),
                            ))),
                            _ => Some(h),
                        }
                    } else {
                        Some(self.zonk(&h))
                    }
                }
                _ => None,
            },
            &mut |o| self.ord_deep(o),
        )
    }

    // -- occurrence --------------------------------------------------------

    fn occ(&self, id: usize, t: &Ty, pol: Occ, depth: usize) -> Occ {
        if depth > 256 {
            return Occ::Mixed;
        }
        let t = self.head(t);
        match &*t {
            Type::UVar(j) => {
                if *j == id {
                    pol
                } else {
                    match &self.tys[*j].status {
                        TyStatus::FieldConstrained(_, fs) => {
                            fs.iter().fold(Occ::None, |acc, (_, a)| {
                                acc.join(self.occ(id, a, pol, depth + 1))
                            })
                        }
                        _ => Occ::None,
                    }
                }
            }
            Type::Arrow(a, b) => {
                self.occ(id, a, pol.flip(), depth + 1)
                    .join(self.occ(id, b, pol, depth + 1))
            }
            Type::Record(fs) | Type::Variant(fs) => fs.iter().fold(Occ::None, |acc, (_, a)| {
                acc.join(self.occ(id, a, pol, depth + 1))
            }),
            Type::Forall(_, b)
            | Type::Exists(_, b)
            | Type::OForall(_, b)
            | Type::OExists(_, b)
            | Type::Mu(_, _, b)
            | Type::Nu(_, _, b)
            | Type::Meet(b, _)
            | Type::Join(b, _) => self.occ(id, b, pol, depth + 1),
            Type::Choice(c) => {
                if self.occurs_in_ty(id, &c.body, depth + 1)
                    || self.occurs_in_tm(id, &c.term, depth + 1)
                {
                    Occ::Mixed
                } else {
                    Occ::None
                }
            }
            Type::Dot(h, _) => {
                if self.occurs_in_tm(id, h, depth + 1) {
                    Occ::Mixed
                } else {
                    Occ::None
                }
            }
            Type::Var(_) | Type::SecondOrder(..) => Occ::None,
        }
    }

    fn occurs_in_ty(&self, id: usize, t: &Ty, depth: usize) -> bool {
        self.occ(id, t, Occ::Pos, depth) != Occ::None
    }

    fn occurs_in_tm(&self, id: usize, t: &crate::syntax::Tm, depth: usize) -> bool {
        if depth > 256 {
            return true;
        }
        let d = depth + 1;
        match &t.kind {
            TermKind::Var(_) | TermKind::Global(_) => false,
            TermKind::Eps(e) => {
                self.occurs_in_ty(id, &e.dom, d)
                    || self.occurs_in_ty(id, &e.cod, d)
                    || self.occurs_in_tm(id, &e.body, d)
            }
            TermKind::Lam(_, ann, b) => {
                ann.as_ref().is_some_and(|a| self.occurs_in_ty(id, a, d))
                    || self.occurs_in_tm(id, b, d)
            }
            TermKind::Fix(_, b) | TermKind::OrdAbs(_, b) => self.occurs_in_tm(id, b, d),
            TermKind::App(a, b) => self.occurs_in_tm(id, a, d) || self.occurs_in_tm(id, b, d),
            TermKind::Record(fs) => fs.iter().any(|(_, u)| self.occurs_in_tm(id, u, d)),
            TermKind::Proj(u, _) | TermKind::Cons(_, u) => self.occurs_in_tm(id, u, d),
            TermKind::Case(s, bs) => {
                self.occurs_in_tm(id, s, d) || bs.iter().any(|b| self.occurs_in_tm(id, &b.body, d))
            }
            TermKind::Annot(u, a) => self.occurs_in_tm(id, u, d) || self.occurs_in_ty(id, a, d),
            TermKind::TypeLet(_, s, a, b) => {
                self.occurs_in_tm(id, s, d)
                    || self.occurs_in_ty(id, a, d)
                    || self.occurs_in_tm(id, b, d)
            }
        }
    }

    /// Deep occurrence test, looking inside choice operators.
    pub fn occurs(&self, id: usize, t: &Ty) -> bool {
        self.occurs_in_ty(id, t, 0)
    }

    // -- binding -----------------------------------------------------------

    /// Binds `U := A` after the occur check. A strictly positive occurrence
    /// folds into `μX.A[U:=X]`. Returns the constraints that were recorded on
    /// `U`, which the caller must check against the new value.
    pub fn bind_type_uvar(
        &mut self,
        id: usize,
        a: &Ty,
    ) -> Result<Option<FieldConstraint>, UVarError> {
        let a = self.head(a);
        if let Type::UVar(j) = &*a {
            if *j == id {
                return Ok(None);
            }
        }
        let value = match self.occ(id, &a, Occ::Pos, 0) {
            Occ::None => a,
            Occ::Pos => {
                let x: Name = "R".into();
                let body = self.replace_uvar(&a, id, &Rc::new(Type::Var(x.clone())));
                Rc::new(Type::Mu(Ordinal::Inf, x, body))
            }
            Occ::Neg | Occ::Mixed => return Err(UVarError::OccursCheck),
        };
        let prev = match &self.tys[id].status {
            TyStatus::FieldConstrained(k, fs) => Some((*k, fs.clone())),
            TyStatus::Unset => None,
            TyStatus::Bound(_) => panic!("binding an already bound unification variable"),
        };
        self.set_ty_status(id, TyStatus::Bound(value));
        Ok(prev)
    }

    fn replace_uvar(&self, t: &Ty, id: usize, by: &Ty) -> Ty {
        let z = self.zonk(t);
        map_type(
            &z,
            &mut |u| match &**u {
                Type::UVar(j) if *j == id => Some(by.clone()),
                _ => None,
            },
            &mut |o| o.clone(),
        )
    }

    /// Adds a delayed field constraint. Returns the previously recorded type
    /// for the same label, which the caller relates to `a`.
    pub fn constrain_field(
        &mut self,
        id: usize,
        kind: FieldKind,
        label: &Name,
        a: &Ty,
    ) -> Result<Option<Ty>, UVarError> {
        let mut fields = match &self.tys[id].status {
            TyStatus::Unset => Vec::new(),
            TyStatus::FieldConstrained(k, fs) if *k == kind => fs.clone(),
            TyStatus::FieldConstrained(..) => return Err(UVarError::KindClash),
            TyStatus::Bound(_) => panic!("constraining a bound unification variable"),
        };
        if self.occurs(id, a) {
            return Err(UVarError::OccursCheck);
        }
        if let Some((_, prev)) = fields.iter().find(|(l, _)| l == label) {
            return Ok(Some(prev.clone()));
        }
        fields.push((label.clone(), a.clone()));
        self.set_ty_status(id, TyStatus::FieldConstrained(kind, fields));
        Ok(None)
    }

    /// Replaces the type recorded for `label` by `a`.
    pub fn replace_field(&mut self, id: usize, label: &Name, a: &Ty) {
        let TyStatus::FieldConstrained(k, fs) = &self.tys[id].status else {
            panic!("replacing a field of an unconstrained unification variable")
        };
        let fs = fs
            .iter()
            .map(|(l, b)| (l.clone(), if l == label { a.clone() } else { b.clone() }))
            .collect();
        self.set_ty_status(id, TyStatus::FieldConstrained(*k, fs));
    }

    /// `U := V`, merging recorded constraints. Returns pairs of types
    /// recorded under the same label that the caller must relate.
    pub fn unify_uvars(&mut self, u: usize, v: usize) -> Result<Vec<(Ty, Ty)>, UVarError> {
        if u == v {
            return Ok(Vec::new());
        }
        let su = self.tys[u].status.clone();
        let sv = self.tys[v].status.clone();
        let mut pending = Vec::new();
        match (su, sv) {
            (TyStatus::FieldConstrained(k1, f1), TyStatus::FieldConstrained(k2, f2)) => {
                if k1 != k2 {
                    return Err(UVarError::KindClash);
                }
                let mut merged = f2.clone();
                for (l, a) in f1 {
                    match f2.iter().find(|(m, _)| *m == l) {
                        Some((_, b)) => pending.push((a, b.clone())),
                        None => merged.push((l, a)),
                    }
                }
                self.set_ty_status(v, TyStatus::FieldConstrained(k1, merged));
            }
            (TyStatus::FieldConstrained(k, f), TyStatus::Unset) => {
                self.set_ty_status(v, TyStatus::FieldConstrained(k, f));
            }
            _ => {}
        }
        self.set_ty_status(u, TyStatus::Bound(Rc::new(Type::UVar(v))));
        Ok(pending)
    }

    /// Instantiates a constrained variable from its own constraints.
    pub fn close_constrained(&mut self, id: usize) -> Option<Ty> {
        match self.tys[id].status.clone() {
            TyStatus::FieldConstrained(kind, fs) => {
                let t = Rc::new(match kind {
                    FieldKind::RecordUpper => Type::Record(fs),
                    FieldKind::VariantLower => Type::Variant(fs),
                });
                self.set_ty_status(id, TyStatus::Bound(t.clone()));
                Some(t)
            }
            _ => None,
        }
    }

    /// Binds a second-order type variable so that `V(args) = a`. Ordinal
    /// arguments found in `a` become parameters, first projection first.
    pub fn bind_so_ty(&mut self, id: usize, args: &[Ordinal], a: &Ty) {
        let z = self.zonk(a);
        let body = map_type(&z, &mut |_| None, &mut |o| {
            let mut r = o.clone();
            for (k, arg) in args.iter().enumerate() {
                if !arg.is_inf() {
                    r = r.replace(arg, &Ordinal::Var(param_name(k)));
                }
            }
            r
        });
        let old = self.so_tys[id].clone();
        self.trail.push(Undo::SoTy(id, old));
        self.so_tys[id].body = Some(body);
    }

    pub fn so_ty_is_bound(&self, id: usize) -> bool {
        self.so_tys[id].body.is_some()
    }

    // -- ordinals ----------------------------------------------------------

    pub fn set_ord(&mut self, id: usize, v: Ordinal) {
        let mut st = self.ords[id].clone();
        debug_assert!(
            st.value.is_none(),
            "ordinal unification variable bound twice"
        );
        st.value = Some(v);
        self.set_ord_state(id, st);
    }

    pub fn set_ord_lower(&mut self, id: usize, lower: Ordinal) {
        let mut st = self.ords[id].clone();
        st.lower = Some(lower);
        self.set_ord_state(id, st);
    }

    /// True when `o` can be the value of `id` with respect to its bounds.
    pub fn ord_fits(&self, g: &PosCtx, id: usize, o: &Ordinal) -> bool {
        let st = &self.ords[id];
        let lo = st.lower.as_ref().map(|l| self.ord_deep(l));
        let hi = st.upper.as_ref().map(|h| self.ord_deep(h));
        lo.is_none_or(|l| g.leq(&l, o)) && hi.is_none_or(|h| g.less(o, &h))
    }

    /// Commits an ordinal variable to a positive value: the first ordinal of
    /// `g` satisfying its bounds, otherwise the successor of a fresh
    /// variable, otherwise `∞`.
    pub fn resolve_ord_uvar(&mut self, id: usize, g: &PosCtx) -> Result<Ordinal, UVarError> {
        if let Some(v) = &self.ords[id].value {
            return Ok(self.ord_deep(v));
        }
        let candidate = g
            .ordinals()
            .iter()
            .find(|o| g.nonzero(o) && self.ord_fits(g, id, o))
            .cloned();
        if let Some(o) = candidate {
            self.set_ord(id, o.clone());
            return Ok(o);
        }
        let st = self.ords[id].clone();
        let lower = st.lower.as_ref().map(|l| self.ord_deep(l));
        let upper = st.upper.as_ref().map(|h| self.ord_deep(h));
        if lower.as_ref().is_some_and(Ordinal::is_inf) {
            // Only ∞ fits below, and nothing is strictly below ∞ … unless no upper.
            if upper.is_none() {
                self.set_ord(id, Ordinal::Inf);
                return Ok(Ordinal::Inf);
            }
            return Err(UVarError::NoPositiveSolution);
        }
        let succ_upper = match &upper {
            None => Some(None),
            Some(Ordinal::Inf) => Some(Some(Ordinal::Inf)),
            Some(Ordinal::Succ(h)) => Some(Some((**h).clone())),
            Some(_) => None,
        };
        if let Some(inner_upper) = succ_upper {
            let inner_lower = match &lower {
                Some(Ordinal::Succ(l)) => Some((**l).clone()),
                _ => None,
            };
            if lower.is_none() || inner_lower.is_some() {
                let p = self.fresh_ord_bounded(inner_lower, inner_upper);
                let v = Ordinal::succ(p);
                self.set_ord(id, v.clone());
                return Ok(v);
            }
        }
        if upper.is_none() {
            self.set_ord(id, Ordinal::Inf);
            return Ok(Ordinal::Inf);
        }
        Err(UVarError::NoPositiveSolution)
    }

    /// Solves `V(args) ≤ target` by the first satisfying projection, or by
    /// imitation of `target`.
    pub fn solve_second_order(
        &mut self,
        id: usize,
        g: &PosCtx,
        args: &[Ordinal],
        target: &Ordinal,
    ) -> Result<(), UVarError> {
        let st = self.so_ords[id].clone();
        assert!(
            matches!(st.status, SoOrdStatus::Unset),
            "second-order variable already solved"
        );
        assert_eq!(args.len(), st.arity, "second-order arity mismatch");
        let target = self.ord_deep(target);
        let status = match args.iter().position(|a| g.leq(&self.ord_deep(a), &target)) {
            Some(k) => SoOrdStatus::Projection(k),
            None if target.is_ground() => SoOrdStatus::Imitation(target),
            None => return Err(UVarError::Unsolvable),
        };
        self.trail.push(Undo::SoOrd(id, st));
        self.so_ords[id].status = status;
        Ok(())
    }
}

/// Replaces the parameters of a second-order body by actual arguments.
pub fn instantiate_params(body: &Ty, args: &[Ordinal]) -> Ty {
    map_type(body, &mut |_| None, &mut |o| {
        let mut r = o.clone();
        for (k, a) in args.iter().enumerate() {
            r = r.subst_var(&param_name(k), a);
        }
        r
    })
}

impl Resolve for Store {
    fn ty(&self, t: &Ty) -> Ty {
        self.head(t)
    }

    fn ord(&self, o: &Ordinal) -> Ordinal {
        self.ord_deep(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq_ty;
    use alloc::vec;

    fn nat_body(x: Ty) -> Ty {
        Type::variant(vec![("Z", Type::unit()), ("S", x)])
    }

    #[test]
    fn bind_plain() {
        let mut s = Store::new();
        let u = s.fresh_ty(None);
        let Type::UVar(id) = *u else { unreachable!() };
        let nat = Type::mu(Ordinal::Inf, "N", nat_body(Type::var("N")));
        s.bind_type_uvar(id, &nat).unwrap();
        assert!(alpha_eq_ty(&s.zonk(&u), &nat));
    }

    #[test]
    fn positive_occurrence_folds_into_mu() {
        let mut s = Store::new();
        let u = s.fresh_ty(None);
        let Type::UVar(id) = *u else { unreachable!() };
        s.bind_type_uvar(id, &nat_body(u.clone())).unwrap();
        let expect = Type::mu(Ordinal::Inf, "X", nat_body(Type::var("X")));
        assert!(alpha_eq_ty(&s.zonk(&u), &expect));
    }

    #[test]
    fn negative_occurrence_fails() {
        let mut s = Store::new();
        let u = s.fresh_ty(None);
        let Type::UVar(id) = *u else { unreachable!() };
        let bad = Type::arrow(u.clone(), Type::unit());
        assert!(matches!(
            s.bind_type_uvar(id, &bad),
            Err(UVarError::OccursCheck)
        ));
    }

    #[test]
    fn unify_then_bind() {
        let mut s = Store::new();
        let u = s.fresh_ty(None);
        let v = s.fresh_ty(None);
        let (Type::UVar(i), Type::UVar(j)) = (&*u, &*v) else {
            unreachable!()
        };
        assert!(s.unify_uvars(*i, *i).unwrap().is_empty());
        s.unify_uvars(*i, *j).unwrap();
        s.bind_type_uvar(*j, &Type::unit()).unwrap();
        assert!(alpha_eq_ty(&s.zonk(&u), &Type::unit()));
    }

    #[test]
    fn merge_record_constraints() {
        let mut s = Store::new();
        let u = s.fresh_ty(None);
        let v = s.fresh_ty(None);
        let (Type::UVar(i), Type::UVar(j)) = (&*u, &*v) else {
            unreachable!()
        };
        s.constrain_field(*i, FieldKind::RecordUpper, &"l".into(), &Type::unit())
            .unwrap();
        s.constrain_field(*j, FieldKind::RecordUpper, &"m".into(), &Type::var("B"))
            .unwrap();
        assert!(s.unify_uvars(*i, *j).unwrap().is_empty());
        match &s.ty_state(*j).status {
            TyStatus::FieldConstrained(FieldKind::RecordUpper, fs) => assert_eq!(fs.len(), 2),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn kind_clash() {
        let mut s = Store::new();
        let u = s.fresh_ty(None);
        let Type::UVar(i) = *u else { unreachable!() };
        s.constrain_field(i, FieldKind::RecordUpper, &"l".into(), &Type::unit())
            .unwrap();
        assert!(matches!(
            s.constrain_field(i, FieldKind::VariantLower, &"C".into(), &Type::unit()),
            Err(UVarError::KindClash)
        ));
    }

    #[test]
    fn rollback_restores() {
        let mut s = Store::new();
        let u = s.fresh_ty(None);
        let Type::UVar(i) = *u else { unreachable!() };
        let outer = s.snapshot();
        let w = s.fresh_ty(None);
        let inner = s.snapshot();
        s.bind_type_uvar(i, &Type::unit()).unwrap();
        s.rollback(inner);
        assert!(matches!(s.ty_state(i).status, TyStatus::Unset));
        let Type::UVar(k) = *w else { unreachable!() };
        s.bind_type_uvar(k, &Type::unit()).unwrap();
        s.rollback(outer);
        assert_eq!(s.ty_count(), 1);
    }

    #[test]
    fn ordinal_resolution() {
        let k5 = Ordinal::Choice(5, "k".into());
        let mut s = Store::new();
        let g = PosCtx::new().with_nonzero(&k5);
        let Ordinal::UVar(o) = s.fresh_ord() else {
            unreachable!()
        };
        assert_eq!(s.resolve_ord_uvar(o, &g).unwrap(), k5);

        let Ordinal::UVar(o) = s.fresh_ord() else {
            unreachable!()
        };
        let v = s.resolve_ord_uvar(o, &PosCtx::new()).unwrap();
        assert!(matches!(v, Ordinal::Succ(ref p) if matches!(**p, Ordinal::UVar(_))));

        let Ordinal::UVar(o) = s.fresh_ord_bounded(Some(Ordinal::Inf), Some(Ordinal::Inf)) else {
            unreachable!()
        };
        assert_eq!(
            s.resolve_ord_uvar(o, &PosCtx::new()),
            Err(UVarError::NoPositiveSolution)
        );
    }

    #[test]
    fn second_order_projection_and_imitation() {
        let (tau, kappa) = (Ordinal::var("t"), Ordinal::var("k"));
        let mut s = Store::new();
        let v = s.fresh_so_ord(2);
        s.solve_second_order(v, &PosCtx::new(), &[tau.clone(), kappa.clone()], &tau)
            .unwrap();
        assert!(matches!(
            s.so_ord_state(v).status,
            SoOrdStatus::Projection(0)
        ));
        let app = Ordinal::SecondOrder(v, Rc::from(vec![tau.clone(), kappa]));
        assert_eq!(s.ord_deep(&app), tau);

        let w = s.fresh_so_ord(0);
        s.solve_second_order(w, &PosCtx::new(), &[], &Ordinal::Inf)
            .unwrap();
        assert!(matches!(
            s.so_ord_state(w).status,
            SoOrdStatus::Imitation(Ordinal::Inf)
        ));
    }
}
