//! Terms, types, capture-avoiding substitution and α-equivalence.
//!
//! Binders are plain names. Substitution renames a binder only when it would
//! capture a free name of the substituted value, which never happens for the
//! closed values (choice operators, fixpoints, globals) used by the checker.

use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::ordinal::Ordinal;

pub type Name = Rc<str>;
pub type Tm = Rc<Term>;
pub type Ty = Rc<Type>;

/// A source position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub file: Name,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug)]
pub struct Term {
    pub kind: TermKind,
    pub pos: Option<Pos>,
}

#[derive(Debug)]
pub enum TermKind {
    /// Only present before a variable is replaced by a choice operator.
    Var(Name),
    Lam(Name, Option<Ty>, Tm),
    App(Tm, Tm),
    Record(Vec<(Name, Tm)>),
    Proj(Tm, Name),
    Cons(Name, Tm),
    Case(Tm, Vec<Branch>),
    Fix(Name, Tm),
    Annot(Tm, Ty),
    /// `Λα. t`: names an ordinal for annotations inside `t`.
    OrdAbs(Name, Tm),
    /// `let X₁, …, Xₙ such that t : A in u`.
    TypeLet(Vec<Name>, Tm, Ty, Tm),
    /// `ε_{x∈A}(t∉B)`.
    Eps(Rc<EpsTerm>),
    /// A previously defined top-level value.
    Global(Rc<Global>),
}

#[derive(Debug)]
pub struct Branch {
    pub ctor: Name,
    pub var: Name,
    pub body: Tm,
    pub pos: Option<Pos>,
}

/// The term choice operator `ε_{x∈A}(t∉B)`: a term of type `A` such that
/// `t[x := ε]` does not have type `B`, if such a term exists.
#[derive(Debug)]
pub struct EpsTerm {
    pub id: usize,
    pub var: Name,
    pub dom: Ty,
    pub body: Tm,
    pub cod: Ty,
    pub pos: Option<Pos>,
}

#[derive(Debug)]
pub struct Global {
    pub name: Name,
    pub ty: Option<Ty>,
    pub body: Tm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceKind {
    /// `ε_X(t∈A)`
    In,
    /// `ε_X(t∉A)`
    NotIn,
}

/// Type choice operator `ε_X(t∈A)` or `ε_X(t∉A)`; `X` is bound in `body`.
#[derive(Debug)]
pub struct TypeChoice {
    pub id: usize,
    pub kind: ChoiceKind,
    pub var: Name,
    pub term: Tm,
    pub body: Ty,
    pub pos: Option<Pos>,
}

#[derive(Debug)]
pub enum Type {
    Var(Name),
    Arrow(Ty, Ty),
    Record(Vec<(Name, Ty)>),
    Variant(Vec<(Name, Ty)>),
    Forall(Name, Ty),
    Exists(Name, Ty),
    OForall(Name, Ty),
    OExists(Name, Ty),
    Mu(Ordinal, Name, Ty),
    Nu(Ordinal, Name, Ty),
    Choice(Rc<TypeChoice>),
    /// `A ∧ γ`: the positivity facts reaching this node are stored in slot.
    Meet(Ty, usize),
    /// `A ∨ γ`, the left-hand dual of [`Type::Meet`].
    Join(Ty, usize),
    UVar(usize),
    SecondOrder(usize, Rc<[Ordinal]>),
    /// `h.T`, resolved from the declared existential type of `h`.
    Dot(Tm, Name),
}

impl Term {
    pub fn new(kind: TermKind) -> Tm {
        Rc::new(Term { kind, pos: None })
    }

    pub fn at(kind: TermKind, pos: Option<Pos>) -> Tm {
        Rc::new(Term { kind, pos })
    }

    pub fn var(x: &str) -> Tm {
        Term::new(TermKind::Var(x.into()))
    }

    pub fn lam(x: &str, body: Tm) -> Tm {
        Term::new(TermKind::Lam(x.into(), None, body))
    }

    pub fn app(f: Tm, a: Tm) -> Tm {
        Term::new(TermKind::App(f, a))
    }

    pub fn unit() -> Tm {
        Term::new(TermKind::Record(Vec::new()))
    }

    pub fn cons(c: &str, payload: Tm) -> Tm {
        Term::new(TermKind::Cons(c.into(), payload))
    }

    pub fn fix(x: &str, body: Tm) -> Tm {
        Term::new(TermKind::Fix(x.into(), body))
    }

    /// Term size where choice operators and globals weigh zero.
    pub fn size(&self) -> usize {
        match &self.kind {
            TermKind::Var(_) => 1,
            TermKind::Eps(_) | TermKind::Global(_) => 0,
            TermKind::Lam(_, _, b) | TermKind::Fix(_, b) | TermKind::OrdAbs(_, b) => 1 + b.size(),
            TermKind::App(a, b) => 1 + a.size() + b.size(),
            TermKind::Record(fs) => 1 + fs.iter().map(|(_, t)| t.size()).sum::<usize>(),
            TermKind::Proj(t, _) | TermKind::Cons(_, t) | TermKind::Annot(t, _) => 1 + t.size(),
            TermKind::Case(t, bs) => {
                1 + t.size() + bs.iter().map(|b| 1 + b.body.size()).sum::<usize>()
            }
            TermKind::TypeLet(_, s, _, b) => 1 + s.size() + b.size(),
        }
    }

    pub fn is_closed(&self) -> bool {
        free_term_vars(self).is_empty()
    }

    /// A term whose head is a variable or choice operator applied to
    /// arguments (possibly projected).
    pub fn is_neutral(&self) -> bool {
        match &self.kind {
            TermKind::Var(_) | TermKind::Eps(_) | TermKind::Global(_) | TermKind::Annot(..) => true,
            TermKind::App(f, _) => f.is_neutral(),
            TermKind::Proj(t, _) => t.is_neutral(),
            _ => false,
        }
    }

    /// Source position of the term, or of the head it was built from.
    pub fn origin(&self) -> Option<Pos> {
        if self.pos.is_some() {
            return self.pos.clone();
        }
        match &self.kind {
            TermKind::App(u, _) | TermKind::Proj(u, _) | TermKind::Annot(u, _) => u.origin(),
            TermKind::Eps(e) => e.pos.clone(),
            _ => None,
        }
    }
}

impl Type {
    pub fn var(x: &str) -> Ty {
        Rc::new(Type::Var(x.into()))
    }

    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Rc::new(Type::Arrow(a, b))
    }

    pub fn record(fields: Vec<(&str, Ty)>) -> Ty {
        Rc::new(Type::Record(
            fields.into_iter().map(|(l, t)| (l.into(), t)).collect(),
        ))
    }

    pub fn variant(ctors: Vec<(&str, Ty)>) -> Ty {
        Rc::new(Type::Variant(
            ctors.into_iter().map(|(c, t)| (c.into(), t)).collect(),
        ))
    }

    pub fn unit() -> Ty {
        Rc::new(Type::Record(Vec::new()))
    }

    pub fn forall(x: &str, body: Ty) -> Ty {
        Rc::new(Type::Forall(x.into(), body))
    }

    pub fn exists(x: &str, body: Ty) -> Ty {
        Rc::new(Type::Exists(x.into(), body))
    }

    pub fn oforall(a: &str, body: Ty) -> Ty {
        Rc::new(Type::OForall(a.into(), body))
    }

    pub fn mu(o: Ordinal, x: &str, body: Ty) -> Ty {
        Rc::new(Type::Mu(o, x.into(), body))
    }

    pub fn nu(o: Ordinal, x: &str, body: Ty) -> Ty {
        Rc::new(Type::Nu(o, x.into(), body))
    }

    /// Number of type constructors, ignoring embedded terms.
    pub fn size(&self) -> usize {
        match self {
            Type::Var(_)
            | Type::UVar(_)
            | Type::SecondOrder(..)
            | Type::Choice(_)
            | Type::Dot(..) => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Record(fs) | Type::Variant(fs) => {
                1 + fs.iter().map(|(_, t)| t.size()).sum::<usize>()
            }
            Type::Forall(_, b)
            | Type::Exists(_, b)
            | Type::OForall(_, b)
            | Type::OExists(_, b)
            | Type::Mu(_, _, b)
            | Type::Nu(_, _, b) => 1 + b.size(),
            Type::Meet(a, _) | Type::Join(a, _) => a.size(),
        }
    }

    pub fn is_fixpoint(&self) -> bool {
        matches!(self, Type::Mu(..) | Type::Nu(..))
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Type::Forall(..) | Type::Exists(..) | Type::OForall(..) | Type::OExists(..) => true,
            Type::Arrow(a, b) => a.has_quantifier() || b.has_quantifier(),
            Type::Record(fs) | Type::Variant(fs) => fs.iter().any(|(_, t)| t.has_quantifier()),
            Type::Mu(_, _, b) | Type::Nu(_, _, b) | Type::Meet(b, _) | Type::Join(b, _) => {
                b.has_quantifier()
            }
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Free names

/// Names occurring free, split by namespace.
#[derive(Default, Debug, Clone)]
pub struct FreeNames {
    pub terms: Vec<Name>,
    pub types: Vec<Name>,
    pub ords: Vec<Name>,
}

fn push_unique(v: &mut Vec<Name>, n: &Name) {
    if !v.iter().any(|m| m == n) {
        v.push(n.clone());
    }
}

#[derive(Default)]
struct Scope {
    terms: Vec<Name>,
    types: Vec<Name>,
    ords: Vec<Name>,
}

fn fv_tm(t: &Term, sc: &mut Scope, out: &mut FreeNames) {
    match &t.kind {
        TermKind::Var(x) => {
            if !sc.terms.contains(x) {
                push_unique(&mut out.terms, x)
            }
        }
        TermKind::Lam(x, ann, b) => {
            if let Some(a) = ann {
                fv_ty(a, sc, out)
            }
            sc.terms.push(x.clone());
            fv_tm(b, sc, out);
            sc.terms.pop();
        }
        TermKind::Fix(x, b) => {
            sc.terms.push(x.clone());
            fv_tm(b, sc, out);
            sc.terms.pop();
        }
        TermKind::App(a, b) => {
            fv_tm(a, sc, out);
            fv_tm(b, sc, out)
        }
        TermKind::Record(fs) => fs.iter().for_each(|(_, u)| fv_tm(u, sc, out)),
        TermKind::Proj(u, _) | TermKind::Cons(_, u) => fv_tm(u, sc, out),
        TermKind::Case(s, bs) => {
            fv_tm(s, sc, out);
            for b in bs {
                sc.terms.push(b.var.clone());
                fv_tm(&b.body, sc, out);
                sc.terms.pop();
            }
        }
        TermKind::Annot(u, a) => {
            fv_tm(u, sc, out);
            fv_ty(a, sc, out)
        }
        TermKind::OrdAbs(a, b) => {
            sc.ords.push(a.clone());
            fv_tm(b, sc, out);
            sc.ords.pop();
        }
        TermKind::TypeLet(xs, s, a, b) => {
            fv_tm(s, sc, out);
            let n = sc.types.len();
            sc.types.extend(xs.iter().cloned());
            fv_ty(a, sc, out);
            fv_tm(b, sc, out);
            sc.types.truncate(n);
        }
        TermKind::Eps(_) | TermKind::Global(_) => {}
    }
}

fn fv_ord(o: &Ordinal, sc: &Scope, out: &mut FreeNames) {
    let mut vs = Vec::new();
    o.free_vars(&mut vs);
    for v in vs {
        if !sc.ords.contains(&v) {
            push_unique(&mut out.ords, &v)
        }
    }
}

fn fv_ty(t: &Type, sc: &mut Scope, out: &mut FreeNames) {
    match t {
        Type::Var(x) => {
            if !sc.types.contains(x) {
                push_unique(&mut out.types, x)
            }
        }
        Type::Arrow(a, b) => {
            fv_ty(a, sc, out);
            fv_ty(b, sc, out)
        }
        Type::Record(fs) | Type::Variant(fs) => fs.iter().for_each(|(_, u)| fv_ty(u, sc, out)),
        Type::Forall(x, b) | Type::Exists(x, b) => {
            sc.types.push(x.clone());
            fv_ty(b, sc, out);
            sc.types.pop();
        }
        Type::OForall(a, b) | Type::OExists(a, b) => {
            sc.ords.push(a.clone());
            fv_ty(b, sc, out);
            sc.ords.pop();
        }
        Type::Mu(o, x, b) | Type::Nu(o, x, b) => {
            fv_ord(o, sc, out);
            sc.types.push(x.clone());
            fv_ty(b, sc, out);
            sc.types.pop();
        }
        Type::Meet(a, _) | Type::Join(a, _) => fv_ty(a, sc, out),
        Type::SecondOrder(_, args) => args.iter().for_each(|o| fv_ord(o, sc, out)),
        Type::Dot(u, _) => fv_tm(u, sc, out),
        Type::Choice(_) | Type::UVar(_) => {}
    }
}

pub fn free_names_tm(t: &Term) -> FreeNames {
    let mut out = FreeNames::default();
    fv_tm(t, &mut Scope::default(), &mut out);
    out
}

pub fn free_names_ty(t: &Type) -> FreeNames {
    let mut out = FreeNames::default();
    fv_ty(t, &mut Scope::default(), &mut out);
    out
}

pub fn free_term_vars(t: &Term) -> Vec<Name> {
    free_names_tm(t).terms
}

// ---------------------------------------------------------------------------
// Substitution

#[derive(Clone, Copy)]
enum Target<'a> {
    Term(&'a str, &'a Tm),
    Type(&'a str, &'a Ty),
    Ord(&'a str, &'a Ordinal),
}

struct Subst<'a> {
    target: Target<'a>,
    avoid: FreeNames,
}

fn fresh_name(base: &str, avoid: &[Name], also: &FreeNames) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    let mut i = 1usize;
    loop {
        let mut s = String::from(stem);
        let _ = write!(s, "{}", i);
        let taken = |v: &[Name]| v.iter().any(|n| **n == *s);
        if !taken(avoid) && !taken(&also.terms) && !taken(&also.types) && !taken(&also.ords) {
            return s.into();
        }
        i += 1;
    }
}

fn all_names_tm(t: &Term) -> FreeNames {
    // Binders are included by collecting free names of the body as if
    // unbound; over-approximation is fine for picking fresh names.
    let mut out = free_names_tm(t);
    collect_binders_tm(t, &mut out);
    out
}

fn collect_binders_tm(t: &Term, out: &mut FreeNames) {
    match &t.kind {
        TermKind::Lam(x, ann, b) => {
            push_unique(&mut out.terms, x);
            if let Some(a) = ann {
                collect_binders_ty(a, out)
            }
            collect_binders_tm(b, out)
        }
        TermKind::Fix(x, b) => {
            push_unique(&mut out.terms, x);
            collect_binders_tm(b, out)
        }
        TermKind::App(a, b) => {
            collect_binders_tm(a, out);
            collect_binders_tm(b, out)
        }
        TermKind::Record(fs) => fs.iter().for_each(|(_, u)| collect_binders_tm(u, out)),
        TermKind::Proj(u, _) | TermKind::Cons(_, u) => collect_binders_tm(u, out),
        TermKind::Case(s, bs) => {
            collect_binders_tm(s, out);
            for b in bs {
                push_unique(&mut out.terms, &b.var);
                collect_binders_tm(&b.body, out)
            }
        }
        TermKind::Annot(u, a) => {
            collect_binders_tm(u, out);
            collect_binders_ty(a, out)
        }
        TermKind::OrdAbs(a, b) => {
            push_unique(&mut out.ords, a);
            collect_binders_tm(b, out)
        }
        TermKind::TypeLet(xs, s, a, b) => {
            xs.iter().for_each(|x| push_unique(&mut out.types, x));
            collect_binders_tm(s, out);
            collect_binders_ty(a, out);
            collect_binders_tm(b, out)
        }
        _ => {}
    }
}

fn collect_binders_ty(t: &Type, out: &mut FreeNames) {
    match t {
        Type::Arrow(a, b) => {
            collect_binders_ty(a, out);
            collect_binders_ty(b, out)
        }
        Type::Record(fs) | Type::Variant(fs) => {
            fs.iter().for_each(|(_, u)| collect_binders_ty(u, out))
        }
        Type::Forall(x, b) | Type::Exists(x, b) | Type::Mu(_, x, b) | Type::Nu(_, x, b) => {
            push_unique(&mut out.types, x);
            collect_binders_ty(b, out)
        }
        Type::OForall(a, b) | Type::OExists(a, b) => {
            push_unique(&mut out.ords, a);
            collect_binders_ty(b, out)
        }
        Type::Meet(a, _) | Type::Join(a, _) => collect_binders_ty(a, out),
        Type::Dot(u, _) => collect_binders_tm(u, out),
        _ => {}
    }
}

impl<'a> Subst<'a> {
    fn new(target: Target<'a>) -> Subst<'a> {
        let avoid = match target {
            Target::Term(_, u) => free_names_tm(u),
            Target::Type(_, a) => free_names_ty(a),
            Target::Ord(_, o) => {
                let mut f = FreeNames::default();
                o.free_vars(&mut f.ords);
                f
            }
        };
        Subst { target, avoid }
    }

    fn stops_term(&self, x: &str) -> bool {
        matches!(self.target, Target::Term(y, _) if y == x)
    }

    fn stops_type(&self, x: &str) -> bool {
        matches!(self.target, Target::Type(y, _) if y == x)
    }

    fn stops_ord(&self, x: &str) -> bool {
        matches!(self.target, Target::Ord(y, _) if y == x)
    }

    /// Renames a term binder if it would capture; returns the binder and
    /// the body to substitute into.
    fn open_term_binder(&self, x: &Name, body: &Tm) -> (Name, Tm) {
        if self.avoid.terms.contains(x) {
            let y = fresh_name(x, &self.avoid.terms, &all_names_tm(body));
            let v = Term::at(TermKind::Var(y.clone()), body.pos.clone());
            (y, subst_term(body, x, &v))
        } else {
            (x.clone(), body.clone())
        }
    }

    fn tm(&self, t: &Tm) -> Option<Tm> {
        let pos = t.pos.clone();
        let k = match &t.kind {
            TermKind::Var(x) => match self.target {
                Target::Term(y, u) if **x == *y => return Some(u.clone()),
                _ => return None,
            },
            TermKind::Eps(_) | TermKind::Global(_) => return None,
            TermKind::Lam(x, ann, b) => {
                let ann2 = ann.as_ref().and_then(|a| self.ty(a));
                if self.stops_term(x) {
                    ann2.as_ref()?;
                    TermKind::Lam(x.clone(), ann2, b.clone())
                } else {
                    let (x2, b1) = self.open_term_binder(x, b);
                    let b2 = self.tm(&b1);
                    if ann2.is_none() && b2.is_none() && x2 == *x {
                        return None;
                    }
                    let ann = ann2.or_else(|| ann.clone());
                    TermKind::Lam(x2, ann, b2.unwrap_or(b1))
                }
            }
            TermKind::Fix(x, b) => {
                if self.stops_term(x) {
                    return None;
                }
                let (x2, b1) = self.open_term_binder(x, b);
                let b2 = self.tm(&b1);
                if b2.is_none() && x2 == *x {
                    return None;
                }
                TermKind::Fix(x2, b2.unwrap_or(b1))
            }
            TermKind::App(a, b) => {
                let (a2, b2) = (self.tm(a), self.tm(b));
                if a2.is_none() && b2.is_none() {
                    return None;
                }
                TermKind::App(
                    a2.unwrap_or_else(|| a.clone()),
                    b2.unwrap_or_else(|| b.clone()),
                )
            }
            TermKind::Record(fs) => {
                let new: Vec<_> = fs.iter().map(|(_, u)| self.tm(u)).collect();
                if new.iter().all(Option::is_none) {
                    return None;
                }
                TermKind::Record(
                    fs.iter()
                        .zip(new)
                        .map(|((l, u), n)| (l.clone(), n.unwrap_or_else(|| u.clone())))
                        .collect(),
                )
            }
            TermKind::Proj(u, l) => TermKind::Proj(self.tm(u)?, l.clone()),
            TermKind::Cons(c, u) => TermKind::Cons(c.clone(), self.tm(u)?),
            TermKind::Case(s, bs) => {
                let s2 = self.tm(s);
                let mut changed = s2.is_some();
                let mut nbs = Vec::with_capacity(bs.len());
                for b in bs {
                    if self.stops_term(&b.var) {
                        nbs.push(Branch {
                            ctor: b.ctor.clone(),
                            var: b.var.clone(),
                            body: b.body.clone(),
                            pos: b.pos.clone(),
                        });
                        continue;
                    }
                    let (x2, b1) = self.open_term_binder(&b.var, &b.body);
                    let body2 = self.tm(&b1);
                    changed |= body2.is_some() || x2 != b.var;
                    nbs.push(Branch {
                        ctor: b.ctor.clone(),
                        var: x2,
                        body: body2.unwrap_or(b1),
                        pos: b.pos.clone(),
                    });
                }
                if !changed {
                    return None;
                }
                TermKind::Case(s2.unwrap_or_else(|| s.clone()), nbs)
            }
            TermKind::Annot(u, a) => {
                let (u2, a2) = (self.tm(u), self.ty(a));
                if u2.is_none() && a2.is_none() {
                    return None;
                }
                TermKind::Annot(
                    u2.unwrap_or_else(|| u.clone()),
                    a2.unwrap_or_else(|| a.clone()),
                )
            }
            TermKind::OrdAbs(a, b) => {
                if self.stops_ord(a) {
                    return None;
                }
                if self.avoid.ords.contains(a) {
                    let a2 = fresh_name(a, &self.avoid.ords, &all_names_tm(b));
                    let b1 = subst_ord_in_term(b, a, &Ordinal::Var(a2.clone()));
                    let b2 = self.tm(&b1).unwrap_or(b1);
                    TermKind::OrdAbs(a2, b2)
                } else {
                    TermKind::OrdAbs(a.clone(), self.tm(b)?)
                }
            }
            TermKind::TypeLet(xs, s, a, b) => {
                let s2 = self.tm(s);
                let bound = match self.target {
                    Target::Type(y, _) => xs.iter().any(|x| **x == *y),
                    _ => false,
                };
                if bound {
                    TermKind::TypeLet(xs.clone(), s2?, a.clone(), b.clone())
                } else {
                    let (mut xs2, mut a1, mut b1) = (xs.clone(), a.clone(), b.clone());
                    for x in xs2.iter_mut() {
                        if self.avoid.types.contains(x) {
                            let fresh = fresh_name(x, &self.avoid.types, &all_names_tm(&b1));
                            let v = Type::var(&fresh);
                            a1 = subst_type(&a1, x, &v);
                            b1 = subst_type_in_term(&b1, x, &v);
                            *x = fresh;
                        }
                    }
                    let (a2, b2) = (self.ty(&a1), self.tm(&b1));
                    if s2.is_none() && a2.is_none() && b2.is_none() && xs2 == *xs {
                        return None;
                    }
                    TermKind::TypeLet(
                        xs2,
                        s2.unwrap_or_else(|| s.clone()),
                        a2.unwrap_or(a1),
                        b2.unwrap_or(b1),
                    )
                }
            }
        };
        Some(Term::at(k, pos))
    }

    fn ord(&self, o: &Ordinal) -> Option<Ordinal> {
        match self.target {
            Target::Ord(x, by) => {
                let r = o.subst_var(x, by);
                if r == *o {
                    None
                } else {
                    Some(r)
                }
            }
            _ => None,
        }
    }

    fn type_binder(&self, x: &Name, body: &Ty) -> (Name, Ty) {
        if self.avoid.types.contains(x) {
            let mut also = FreeNames::default();
            collect_binders_ty(body, &mut also);
            let fb = free_names_ty(body);
            also.types.extend(fb.types);
            let y = fresh_name(x, &self.avoid.types, &also);
            let b = subst_type(body, x, &Type::var(&y));
            (y, b)
        } else {
            (x.clone(), body.clone())
        }
    }

    fn ty(&self, t: &Ty) -> Option<Ty> {
        let r = match &**t {
            Type::Var(x) => match self.target {
                Target::Type(y, a) if **x == *y => return Some(a.clone()),
                _ => return None,
            },
            Type::UVar(_) | Type::Choice(_) => return None,
            Type::Arrow(a, b) => {
                let (a2, b2) = (self.ty(a), self.ty(b));
                if a2.is_none() && b2.is_none() {
                    return None;
                }
                Type::Arrow(
                    a2.unwrap_or_else(|| a.clone()),
                    b2.unwrap_or_else(|| b.clone()),
                )
            }
            Type::Record(fs) | Type::Variant(fs) => {
                let new: Vec<_> = fs.iter().map(|(_, u)| self.ty(u)).collect();
                if new.iter().all(Option::is_none) {
                    return None;
                }
                let fs2 = fs
                    .iter()
                    .zip(new)
                    .map(|((l, u), n)| (l.clone(), n.unwrap_or_else(|| u.clone())))
                    .collect();
                if matches!(**t, Type::Record(_)) {
                    Type::Record(fs2)
                } else {
                    Type::Variant(fs2)
                }
            }
            Type::Forall(x, b) | Type::Exists(x, b) => {
                if self.stops_type(x) {
                    return None;
                }
                let (x2, b1) = self.type_binder(x, b);
                let b2 = self.ty(&b1);
                if b2.is_none() && x2 == *x {
                    return None;
                }
                let b2 = b2.unwrap_or(b1);
                if matches!(**t, Type::Forall(..)) {
                    Type::Forall(x2, b2)
                } else {
                    Type::Exists(x2, b2)
                }
            }
            Type::OForall(a, b) | Type::OExists(a, b) => {
                if self.stops_ord(a) {
                    return None;
                }
                let (a2, b1) = if self.avoid.ords.contains(a) {
                    let mut also = FreeNames::default();
                    collect_binders_ty(b, &mut also);
                    let a2 = fresh_name(a, &self.avoid.ords, &also);
                    let b1 = subst_ord_in_type(b, a, &Ordinal::Var(a2.clone()));
                    (a2, b1)
                } else {
                    (a.clone(), b.clone())
                };
                let b2 = self.ty(&b1);
                if b2.is_none() && a2 == *a {
                    return None;
                }
                let b2 = b2.unwrap_or(b1);
                if matches!(**t, Type::OForall(..)) {
                    Type::OForall(a2, b2)
                } else {
                    Type::OExists(a2, b2)
                }
            }
            Type::Mu(o, x, b) | Type::Nu(o, x, b) => {
                let o2 = self.ord(o);
                let (x2, b1, b2) = if self.stops_type(x) {
                    (x.clone(), b.clone(), None)
                } else {
                    let (x2, b1) = self.type_binder(x, b);
                    let b2 = self.ty(&b1);
                    (x2, b1, b2)
                };
                if o2.is_none() && b2.is_none() && x2 == *x {
                    return None;
                }
                let o2 = o2.unwrap_or_else(|| o.clone());
                let b2 = b2.unwrap_or(b1);
                if matches!(**t, Type::Mu(..)) {
                    Type::Mu(o2, x2, b2)
                } else {
                    Type::Nu(o2, x2, b2)
                }
            }
            Type::Meet(a, s) => Type::Meet(self.ty(a)?, *s),
            Type::Join(a, s) => Type::Join(self.ty(a)?, *s),
            Type::SecondOrder(id, args) => {
                let new: Vec<_> = args.iter().map(|o| self.ord(o)).collect();
                if new.iter().all(Option::is_none) {
                    return None;
                }
                Type::SecondOrder(
                    *id,
                    args.iter()
                        .zip(new)
                        .map(|(o, n)| n.unwrap_or_else(|| o.clone()))
                        .collect(),
                )
            }
            Type::Dot(u, n) => Type::Dot(self.tm(u)?, n.clone()),
        };
        Some(Rc::new(r))
    }
}

/// `t[x := u]`, capture-avoiding.
pub fn subst_term(t: &Tm, x: &str, u: &Tm) -> Tm {
    Subst::new(Target::Term(x, u))
        .tm(t)
        .unwrap_or_else(|| t.clone())
}

/// `A[X := B]`, capture-avoiding.
pub fn subst_type(t: &Ty, x: &str, by: &Ty) -> Ty {
    Subst::new(Target::Type(x, by))
        .ty(t)
        .unwrap_or_else(|| t.clone())
}

/// Replaces a type variable inside the annotations of a term.
pub fn subst_type_in_term(t: &Tm, x: &str, by: &Ty) -> Tm {
    Subst::new(Target::Type(x, by))
        .tm(t)
        .unwrap_or_else(|| t.clone())
}

pub fn subst_ord_in_type(t: &Ty, a: &str, by: &Ordinal) -> Ty {
    Subst::new(Target::Ord(a, by))
        .ty(t)
        .unwrap_or_else(|| t.clone())
}

pub fn subst_ord_in_term(t: &Tm, a: &str, by: &Ordinal) -> Tm {
    Subst::new(Target::Ord(a, by))
        .tm(t)
        .unwrap_or_else(|| t.clone())
}

/// Substitutes a term variable inside a type (through `h.T` nodes).
pub fn subst_term_in_type(t: &Ty, x: &str, u: &Tm) -> Ty {
    Subst::new(Target::Term(x, u))
        .ty(t)
        .unwrap_or_else(|| t.clone())
}

// ---------------------------------------------------------------------------
// α-equivalence

/// Head resolution of unification variables and other indirections, used by
/// α-equivalence while the store is live.
pub trait Resolve {
    fn ty(&self, t: &Ty) -> Ty;
    fn ord(&self, o: &Ordinal) -> Ordinal;
}

/// The identity resolver, for types without unification variables.
pub struct Plain;

impl Resolve for Plain {
    fn ty(&self, t: &Ty) -> Ty {
        t.clone()
    }
    fn ord(&self, o: &Ordinal) -> Ordinal {
        o.clone()
    }
}

struct Alpha<'r> {
    r: &'r dyn Resolve,
    terms: Vec<(Name, Name)>,
    types: Vec<(Name, Name)>,
    ords: Vec<(Name, Name)>,
    /// Pattern mode: left-hand parameters `#k` match any ordinal.
    pattern: Option<Vec<Option<Ordinal>>>,
}

fn lookup(env: &[(Name, Name)], a: &Name, b: &Name) -> bool {
    for (x, y) in env.iter().rev() {
        if x == a || y == b {
            return x == a && y == b;
        }
    }
    a == b
}

impl<'r> Alpha<'r> {
    fn ord(&mut self, a: &Ordinal, b: &Ordinal) -> bool {
        let (a, b) = (self.r.ord(a), self.r.ord(b));
        self.ord_resolved(&a, &b)
    }

    fn ord_resolved(&mut self, a: &Ordinal, b: &Ordinal) -> bool {
        if let (Some(pat), Ordinal::Var(x)) = (&mut self.pattern, a) {
            if let Some(k) = param_index(x) {
                return match &pat[k] {
                    Some(v) => v == b,
                    None => {
                        pat[k] = Some(b.clone());
                        true
                    }
                };
            }
        }
        match (a, b) {
            (Ordinal::Var(x), Ordinal::Var(y)) => lookup(&self.ords, x, y),
            (Ordinal::Succ(x), Ordinal::Succ(y)) => self.ord_resolved(x, y),
            (Ordinal::SecondOrder(i, xs), Ordinal::SecondOrder(j, ys)) => {
                i == j
                    && xs.len() == ys.len()
                    && xs
                        .iter()
                        .zip(ys.iter())
                        .all(|(x, y)| self.ord_resolved(x, y))
            }
            (a, b) => a == b,
        }
    }

    fn fields(&mut self, xs: &[(Name, Ty)], ys: &[(Name, Ty)]) -> bool {
        xs.len() == ys.len()
            && xs
                .iter()
                .all(|(l, a)| match ys.iter().find(|(m, _)| m == l) {
                    Some((_, b)) => self.ty(a, b),
                    None => false,
                })
    }

    fn bind_ty(&mut self, x: &Name, y: &Name, a: &Ty, b: &Ty) -> bool {
        self.types.push((x.clone(), y.clone()));
        let r = self.ty(a, b);
        self.types.pop();
        r
    }

    fn ty(&mut self, a: &Ty, b: &Ty) -> bool {
        if Rc::ptr_eq(a, b)
            && self.types.is_empty()
            && self.ords.is_empty()
            && self.terms.is_empty()
            && self.pattern.is_none()
        {
            return true;
        }
        let (a, b) = (self.r.ty(a), self.r.ty(b));
        match (&*a, &*b) {
            (Type::Var(x), Type::Var(y)) => lookup(&self.types, x, y),
            (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => self.ty(a1, b1) && self.ty(a2, b2),
            (Type::Record(xs), Type::Record(ys)) | (Type::Variant(xs), Type::Variant(ys)) => {
                self.fields(xs, ys)
            }
            (Type::Forall(x, a), Type::Forall(y, b)) | (Type::Exists(x, a), Type::Exists(y, b)) => {
                self.bind_ty(x, y, a, b)
            }
            (Type::OForall(x, a), Type::OForall(y, b))
            | (Type::OExists(x, a), Type::OExists(y, b)) => {
                self.ords.push((x.clone(), y.clone()));
                let r = self.ty(a, b);
                self.ords.pop();
                r
            }
            (Type::Mu(o, x, a), Type::Mu(p, y, b)) | (Type::Nu(o, x, a), Type::Nu(p, y, b)) => {
                self.ord(o, p) && self.bind_ty(x, y, a, b)
            }
            (Type::Choice(c), Type::Choice(d)) => {
                if c.id == d.id {
                    return true;
                }
                c.kind == d.kind
                    && self.tm(&c.term, &d.term)
                    && self.bind_ty(&c.var, &d.var, &c.body, &d.body)
            }
            (Type::Meet(a, s), Type::Meet(b, t)) | (Type::Join(a, s), Type::Join(b, t)) => {
                s == t && self.ty(a, b)
            }
            (Type::UVar(i), Type::UVar(j)) => i == j,
            (Type::SecondOrder(i, xs), Type::SecondOrder(j, ys)) => {
                i == j
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| self.ord(x, y))
            }
            (Type::Dot(u, n), Type::Dot(v, m)) => n == m && self.tm(u, v),
            _ => false,
        }
    }

    fn bind_tm(&mut self, x: &Name, y: &Name, a: &Tm, b: &Tm) -> bool {
        self.terms.push((x.clone(), y.clone()));
        let r = self.tm(a, b);
        self.terms.pop();
        r
    }

    fn tm(&mut self, a: &Tm, b: &Tm) -> bool {
        if Rc::ptr_eq(a, b)
            && self.terms.is_empty()
            && self.types.is_empty()
            && self.ords.is_empty()
        {
            return true;
        }
        match (&a.kind, &b.kind) {
            (TermKind::Var(x), TermKind::Var(y)) => lookup(&self.terms, x, y),
            (TermKind::Lam(x, s, a), TermKind::Lam(y, t, b)) => {
                let anns = match (s, t) {
                    (None, None) => true,
                    (Some(s), Some(t)) => self.ty(s, t),
                    _ => false,
                };
                anns && self.bind_tm(x, y, a, b)
            }
            (TermKind::Fix(x, a), TermKind::Fix(y, b)) => self.bind_tm(x, y, a, b),
            (TermKind::App(a1, a2), TermKind::App(b1, b2)) => self.tm(a1, b1) && self.tm(a2, b2),
            (TermKind::Record(xs), TermKind::Record(ys)) => {
                xs.len() == ys.len()
                    && xs
                        .iter()
                        .all(|(l, u)| match ys.iter().find(|(m, _)| m == l) {
                            Some((_, v)) => self.tm(u, v),
                            None => false,
                        })
            }
            (TermKind::Proj(u, l), TermKind::Proj(v, m)) => l == m && self.tm(u, v),
            (TermKind::Cons(c, u), TermKind::Cons(d, v)) => c == d && self.tm(u, v),
            (TermKind::Case(s, bs), TermKind::Case(t, cs)) => {
                self.tm(s, t)
                    && bs.len() == cs.len()
                    && bs
                        .iter()
                        .all(|b| match cs.iter().find(|c| c.ctor == b.ctor) {
                            Some(c) => self.bind_tm(&b.var, &c.var, &b.body, &c.body),
                            None => false,
                        })
            }
            (TermKind::Annot(u, a), TermKind::Annot(v, b)) => self.tm(u, v) && self.ty(a, b),
            (TermKind::OrdAbs(x, a), TermKind::OrdAbs(y, b)) => {
                self.ords.push((x.clone(), y.clone()));
                let r = self.tm(a, b);
                self.ords.pop();
                r
            }
            (TermKind::TypeLet(xs, s, a, u), TermKind::TypeLet(ys, t, b, v)) => {
                if xs.len() != ys.len() || !self.tm(s, t) {
                    return false;
                }
                let n = self.types.len();
                self.types
                    .extend(xs.iter().cloned().zip(ys.iter().cloned()));
                let r = self.ty(a, b) && self.tm(u, v);
                self.types.truncate(n);
                r
            }
            (TermKind::Eps(e), TermKind::Eps(f)) => e.id == f.id,
            (TermKind::Global(g), TermKind::Global(h)) => g.name == h.name,
            _ => false,
        }
    }
}

pub fn alpha_eq_ty(a: &Ty, b: &Ty) -> bool {
    alpha_eq_ty_with(a, b, &Plain)
}

pub fn alpha_eq_ty_with(a: &Ty, b: &Ty, r: &dyn Resolve) -> bool {
    Alpha {
        r,
        terms: Vec::new(),
        types: Vec::new(),
        ords: Vec::new(),
        pattern: None,
    }
    .ty(a, b)
}

/// Name of the `k`-th parameter of a hypothesis skeleton.
pub fn param_ord(k: usize) -> Ordinal {
    let mut s = String::from("#");
    let _ = write!(s, "{}", k);
    Ordinal::Var(s.into())
}

fn param_index(x: &str) -> Option<usize> {
    x.strip_prefix('#')?.parse().ok()
}

/// Matches the types `pats` (whose ordinals `#0 … #n-1` are parameters)
/// against `insts`, returning the ordinal bound to each parameter.
pub fn match_pattern(
    pats: &[Ty],
    insts: &[Ty],
    arity: usize,
    r: &dyn Resolve,
) -> Option<Vec<Ordinal>> {
    if pats.len() != insts.len() {
        return None;
    }
    let mut al = Alpha {
        r,
        terms: Vec::new(),
        types: Vec::new(),
        ords: Vec::new(),
        pattern: Some(alloc::vec![None; arity]),
    };
    for (p, i) in pats.iter().zip(insts) {
        if !al.ty(p, i) {
            return None;
        }
    }
    Some(
        al.pattern
            .unwrap()
            .into_iter()
            .map(|o| o.unwrap_or(Ordinal::Inf))
            .collect(),
    )
}

pub fn alpha_eq_tm(a: &Tm, b: &Tm) -> bool {
    alpha_eq_tm_with(a, b, &Plain)
}

pub fn alpha_eq_tm_with(a: &Tm, b: &Tm, r: &dyn Resolve) -> bool {
    Alpha {
        r,
        terms: Vec::new(),
        types: Vec::new(),
        ords: Vec::new(),
        pattern: None,
    }
    .tm(a, b)
}

pub fn alpha_eq_ord_with(a: &Ordinal, b: &Ordinal, r: &dyn Resolve) -> bool {
    Alpha {
        r,
        terms: Vec::new(),
        types: Vec::new(),
        ords: Vec::new(),
        pattern: None,
    }
    .ord(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn subst_identity_case() {
        let u = Term::unit();
        let r = subst_term(&Term::var("x"), "x", &u);
        assert!(Rc::ptr_eq(&r, &u));
    }

    #[test]
    fn subst_avoids_capture() {
        let t = Term::lam("y", Term::var("x"));
        let r = subst_term(&t, "x", &Term::var("y"));
        match &r.kind {
            TermKind::Lam(y2, _, body) => {
                assert_ne!(&**y2, "y");
                assert!(matches!(&body.kind, TermKind::Var(v) if &**v == "y"));
            }
            _ => panic!("expected a lambda"),
        }
    }

    #[test]
    fn alpha_equivalence_examples() {
        let a = Type::forall("X", Type::arrow(Type::var("X"), Type::var("X")));
        let b = Type::forall("Y", Type::arrow(Type::var("Y"), Type::var("Y")));
        assert!(alpha_eq_ty(&a, &b));
        let c = Type::forall(
            "X",
            Type::forall("Y", Type::arrow(Type::var("X"), Type::var("Y"))),
        );
        let d = Type::forall(
            "Y",
            Type::forall("X", Type::arrow(Type::var("X"), Type::var("Y"))),
        );
        assert!(!alpha_eq_ty(&c, &d));
        let nat = |x: &str| {
            Type::mu(
                Ordinal::Inf,
                x,
                Type::variant(vec![("Z", Type::unit()), ("S", Type::var(x))]),
            )
        };
        assert!(alpha_eq_ty(&nat("X"), &nat("N")));
    }

    #[test]
    fn record_labels_are_a_set() {
        let a = Type::record(vec![("a", Type::unit()), ("b", Type::var("X"))]);
        let b = Type::record(vec![("b", Type::var("X")), ("a", Type::unit())]);
        assert!(alpha_eq_ty(&a, &b));
    }

    #[test]
    fn type_subst_renames_binder() {
        // (∀Y. X → Y)[X := Y] must not capture.
        let t = Type::forall("Y", Type::arrow(Type::var("X"), Type::var("Y")));
        let r = subst_type(&t, "X", &Type::var("Y"));
        let expect = Type::forall("Z", Type::arrow(Type::var("Y"), Type::var("Z")));
        assert!(alpha_eq_ty(&r, &expect));
    }

    #[test]
    fn size_ignores_choice_operators() {
        let e = Term::new(TermKind::Eps(Rc::new(EpsTerm {
            id: 0,
            var: "x".into(),
            dom: Type::unit(),
            body: Term::var("x"),
            cod: Type::unit(),
            pos: None,
        })));
        assert_eq!(e.size(), 0);
        assert_eq!(Term::app(Term::var("f"), e).size(), 2);
    }
}
