//! The local subtyping engine `γ ⊢ t : A ⊂ B`.
//!
//! Rules are tried in a fixed order: positivity connectives, identity,
//! unification variables, sized-type shortcuts and generalisation, then
//! invertible quantifier and fixpoint rules (right before left), then the
//! rules introducing unknowns, then the structural rules.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CheckError, ClashKind};
use crate::ordinal::{fresh_witness, Ordinal, PosCtx};
use crate::proof::{Judgment, ProofTree, Rule};
use crate::scp::Verdict;
use crate::session::{
    has_ord_uvar, instantiate, type_uvars, Abstraction, Current, Derivation, HypKind, Session,
};
use crate::syntax::{
    alpha_eq_ty_with, subst_ord_in_type, subst_type, ChoiceKind, Name, Term, TermKind, Tm, Ty,
    Type, TypeChoice,
};
use crate::uvar::{map_type, FieldKind, UVarError};

type R = Result<ProofTree, CheckError>;

fn sub_judgment(g: &PosCtx, t: &Tm, a: &Ty, b: &Ty) -> Judgment {
    Judgment::LocalSub {
        ctx: g.clone(),
        term: t.clone(),
        lhs: a.clone(),
        rhs: b.clone(),
    }
}

impl Session {
    /// Checks `A ⊂ B` on the counterexample `ε_{x∈A}(x∉B)`.
    pub fn subtype(&mut self, a: &Ty, b: &Ty) -> Result<Derivation, CheckError> {
        self.reset();
        let t = self.counterexample(a, b);
        let tree = self.sub(&PosCtx::new(), &t, a, b)?;
        self.finish(tree)
    }

    pub(crate) fn finish(&mut self, tree: ProofTree) -> Result<Derivation, CheckError> {
        match self.check_graph() {
            Verdict::Accepted => Ok(self.derivation(tree)),
            Verdict::Rejected { node, matrix } => Err(CheckError::NotWellFounded {
                hypothesis: node,
                matrix,
                typing: self
                    .last_typing
                    .as_ref()
                    .map(|j| j.map_types(&mut |t| self.store.zonk(t))),
            }),
        }
    }

    pub(crate) fn sub(&mut self, g: &PosCtx, t: &Tm, a: &Ty, b: &Ty) -> R {
        self.sub_at(g, t, a, b, true)
    }

    fn sub_at(&mut self, g: &PosCtx, t: &Tm, a: &Ty, b: &Ty, generalise: bool) -> R {
        self.depth += 1;
        let r = self.sub_rules(g, t, a, b, generalise);
        self.depth -= 1;
        r
    }

    fn sub_rules(&mut self, g: &PosCtx, t: &Tm, a: &Ty, b: &Ty, generalise: bool) -> R {
        self.step(|| Some(sub_judgment(g, t, a, b)))?;
        let a = self.store.head(a);
        let b = self.store.head(b);
        let concl = sub_judgment(g, t, &a, &b);

        if let Type::Join(a1, s) = &*a {
            self.store.add_to_slot(*s, g);
            let p = self.sub_at(g, t, a1, &b, generalise)?;
            return Ok(ProofTree::node(Rule::JoinL, concl, vec![p]));
        }
        if let Type::Meet(b1, s) = &*b {
            if !matches!(&*a, Type::Exists(..) | Type::OExists(..) | Type::Mu(..)) {
                self.store.add_to_slot(*s, g);
                let p = self.sub_at(g, t, &a, b1, generalise)?;
                return Ok(ProofTree::node(Rule::MeetR, concl, vec![p]));
            }
        }
        if alpha_eq_ty_with(&a, &b, &self.store) {
            return Ok(ProofTree::leaf(Rule::Refl, concl));
        }
        if let Some(p) = self.sub_uvar(g, t, &a, &b, &concl)? {
            return Ok(p);
        }
        let meet_right = matches!(&*b, Type::Meet(..));
        if !meet_right && (a.is_fixpoint() || b.is_fixpoint()) {
            if self.monotonic(g, &a, &b) {
                return Ok(ProofTree::leaf(Rule::Refl, concl));
            }
            if generalise {
                if let Some(p) = self.generalise_sub(g, t, &a, &b, &concl)? {
                    return Ok(p);
                }
            }
        }

        // Invertible rules, right then left.
        match &*b {
            Type::Forall(x, b1) => {
                let chi = self.type_choice(ChoiceKind::NotIn, x, t, b1);
                let p = self.sub(g, t, &a, &subst_type(b1, x, &chi))?;
                return Ok(ProofTree::node(Rule::ForallR, concl, vec![p]));
            }
            Type::OForall(x, b1) => {
                let k = self.ord_constant(x);
                let p = self.sub(g, t, &a, &subst_ord_in_type(b1, x, &k))?;
                return Ok(ProofTree::node(Rule::OForallR, concl, vec![p]));
            }
            Type::Nu(k, x, b1) => {
                let (w, g2) = self.unfold_witness(g, t, &a, &b, k)?;
                let unfolded = subst_type(b1, x, &Rc::new(Type::Nu(w, x.clone(), b1.clone())));
                let p = self.sub(&g2, t, &a, &unfolded)?;
                return Ok(ProofTree::node(Rule::NuR, concl, vec![p]));
            }
            _ => {}
        }
        match &*a {
            Type::Exists(x, a1) => {
                let chi = self.type_choice(ChoiceKind::In, x, t, a1);
                let p = self.sub(g, t, &subst_type(a1, x, &chi), &b)?;
                return Ok(ProofTree::node(Rule::ExistsL, concl, vec![p]));
            }
            Type::OExists(x, a1) => {
                let k = self.ord_constant(x);
                let p = self.sub(g, t, &subst_ord_in_type(a1, x, &k), &b)?;
                return Ok(ProofTree::node(Rule::OExistsL, concl, vec![p]));
            }
            Type::Mu(k, x, a1) => {
                let (w, g2) = self.unfold_witness(g, t, &a, &b, k)?;
                let unfolded = subst_type(a1, x, &Rc::new(Type::Mu(w, x.clone(), a1.clone())));
                let p = self.sub(&g2, t, &unfolded, &b)?;
                return Ok(ProofTree::node(Rule::MuL, concl, vec![p]));
            }
            _ => {}
        }

        // Rules introducing unknowns, right then left.
        match &*b {
            Type::Exists(x, b1) => {
                let u = self.store.fresh_ty(None);
                let p = self.sub(g, t, &a, &subst_type(b1, x, &u))?;
                return Ok(ProofTree::node(Rule::ExistsR, concl, vec![p]));
            }
            Type::OExists(x, b1) => {
                let o = self.store.fresh_ord();
                let p = self.sub(g, t, &a, &subst_ord_in_type(b1, x, &o))?;
                return Ok(ProofTree::node(Rule::OExistsR, concl, vec![p]));
            }
            Type::Mu(k, x, b1) => {
                let tau = self.smaller_size(g, t, &a, &b, k)?;
                let unfolded = subst_type(b1, x, &Rc::new(Type::Mu(tau, x.clone(), b1.clone())));
                let p = self.sub(g, t, &a, &unfolded)?;
                return Ok(ProofTree::node(Rule::MuR, concl, vec![p]));
            }
            _ => {}
        }
        match &*a {
            Type::Forall(x, a1) => {
                let u = self.store.fresh_ty(None);
                let p = self.sub(g, t, &subst_type(a1, x, &u), &b)?;
                return Ok(ProofTree::node(Rule::ForallL, concl, vec![p]));
            }
            Type::OForall(x, a1) => {
                let o = self.store.fresh_ord();
                let p = self.sub(g, t, &subst_ord_in_type(a1, x, &o), &b)?;
                return Ok(ProofTree::node(Rule::OForallL, concl, vec![p]));
            }
            Type::Nu(k, x, a1) => {
                let tau = self.smaller_size(g, t, &a, &b, k)?;
                let unfolded = subst_type(a1, x, &Rc::new(Type::Nu(tau, x.clone(), a1.clone())));
                let p = self.sub(g, t, &unfolded, &b)?;
                return Ok(ProofTree::node(Rule::NuL, concl, vec![p]));
            }
            _ => {}
        }

        self.structural(g, t, &a, &b, concl)
    }

    fn structural(&mut self, g: &PosCtx, t: &Tm, a: &Ty, b: &Ty, concl: Judgment) -> R {
        match (&**a, &**b) {
            (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => {
                let x: Name = "x".into();
                let applied = Term::app(t.clone(), Term::var("x"));
                let e = self.eps(&x, b1.clone(), applied, b2.clone(), None);
                let p1 = self.sub(g, &e, b1, a1)?;
                let p2 = self.sub(g, &Term::app(t.clone(), e), a2, b2)?;
                Ok(ProofTree::node(Rule::Arrow, concl, vec![p1, p2]))
            }
            (Type::Record(fa), Type::Record(fb)) => {
                let mut ps = Vec::with_capacity(fb.len());
                for (l, bl) in fb {
                    let Some((_, al)) = fa.iter().find(|(m, _)| m == l) else {
                        return Err(self.clash(t, a, b, ClashKind::MissingField(l.clone())));
                    };
                    let proj = Term::new(TermKind::Proj(t.clone(), l.clone()));
                    ps.push(self.sub(g, &proj, al, bl)?);
                }
                Ok(ProofTree::node(Rule::Prod, concl, ps))
            }
            (Type::Variant(ca), Type::Variant(cb)) => {
                let mut ps = Vec::with_capacity(ca.len());
                for (c, ac) in ca {
                    let Some((_, bc)) = cb.iter().find(|(d, _)| d == c) else {
                        return Err(self.clash(t, a, b, ClashKind::MissingConstructor(c.clone())));
                    };
                    let x: Name = "x".into();
                    let body = Term::new(TermKind::Cons(c.clone(), Term::var("x")));
                    let e = self.eps(&x, ac.clone(), body, b.clone(), None);
                    ps.push(self.sub(g, &e, ac, bc)?);
                }
                Ok(ProofTree::node(Rule::Sum, concl, ps))
            }
            _ => Err(self.clash(t, a, b, ClashKind::Mismatch)),
        }
    }

    fn type_choice(&mut self, kind: ChoiceKind, x: &Name, t: &Tm, body: &Ty) -> Ty {
        let id = self.fresh_id();
        Rc::new(Type::Choice(Rc::new(TypeChoice {
            id,
            kind,
            var: x.clone(),
            term: t.clone(),
            body: body.clone(),
            pos: self.anchor(t),
        })))
    }

    fn uvar_error(&self, t: &Tm, a: &Ty, b: &Ty, e: UVarError) -> CheckError {
        let kind = match e {
            UVarError::OccursCheck => ClashKind::OccursCheck,
            UVarError::KindClash => ClashKind::KindClash,
            UVarError::NoPositiveSolution => ClashKind::NoPositiveSolution,
            UVarError::Unsolvable => ClashKind::Mismatch,
        };
        self.clash(t, a, b, kind)
    }

    fn resolve_size(
        &mut self,
        g: &PosCtx,
        t: &Tm,
        a: &Ty,
        b: &Ty,
        k: &Ordinal,
    ) -> Result<Ordinal, CheckError> {
        match self.store.ord_deep(k) {
            Ordinal::UVar(id) => self
                .store
                .resolve_ord_uvar(id, g)
                .map_err(|e| self.uvar_error(t, a, b, e)),
            k => Ok(k),
        }
    }

    /// Size of the unfolding for `μ` on the left or `ν` on the right: a
    /// fresh witness below `κ`, which may be assumed nonzero.
    fn unfold_witness(
        &mut self,
        g: &PosCtx,
        t: &Tm,
        a: &Ty,
        b: &Ty,
        k: &Ordinal,
    ) -> Result<(Ordinal, PosCtx), CheckError> {
        let k = self.resolve_size(g, t, a, b, k)?;
        let g1 = g.with_nonzero(&k);
        let id = self.fresh_id();
        Ok(fresh_witness(&g1, &k, id))
    }

    /// Size of the unfolding for `μ` on the right or `ν` on the left: some
    /// `τ < κ`, which requires `κ` to be nonzero.
    fn smaller_size(
        &mut self,
        g: &PosCtx,
        t: &Tm,
        a: &Ty,
        b: &Ty,
        k: &Ordinal,
    ) -> Result<Ordinal, CheckError> {
        let k = self.resolve_size(g, t, a, b, k)?;
        if k.is_inf() {
            return Ok(Ordinal::Inf);
        }
        if !g.nonzero(&k) {
            return Err(self.clash(t, a, b, ClashKind::Blocked));
        }
        if let Some(tau) = g.ordinals().iter().find(|o| g.less(o, &k)) {
            return Ok(tau.clone());
        }
        if let Ordinal::Succ(p) = &k {
            return Ok((**p).clone());
        }
        Ok(self.store.fresh_ord_bounded(None, Some(k)))
    }

    /// `μ_a F ⊂ μ_b F` when `a ≤ b`, and `ν_a F ⊂ ν_b F` when `b ≤ a`,
    /// possibly fixing an ordinal unification variable. With different
    /// bodies, an unknown upper size is still fixed to the lower one.
    fn monotonic(&mut self, g: &PosCtx, a: &Ty, b: &Ty) -> bool {
        let (lo, hi, same) = match (&**a, &**b) {
            (Type::Mu(o1, x, f1), Type::Mu(o2, y, f2)) => {
                (o1, o2, self.same_body(x, f1, y, f2, true))
            }
            (Type::Nu(o1, x, f1), Type::Nu(o2, y, f2)) => {
                (o2, o1, self.same_body(x, f1, y, f2, false))
            }
            _ => return false,
        };
        let (lo, hi) = (self.store.ord_deep(lo), self.store.ord_deep(hi));
        if !same {
            if let Ordinal::UVar(id) = hi {
                if !matches!(lo, Ordinal::UVar(_)) && self.store.ord_fits(g, id, &lo) {
                    self.store.set_ord(id, lo);
                }
            }
            return false;
        }
        if g.leq(&lo, &hi) {
            return true;
        }
        if let Ordinal::UVar(id) = hi {
            if self.store.ord_fits(g, id, &lo) {
                self.store.set_ord(id, lo);
                return true;
            }
        } else if let Ordinal::UVar(id) = lo {
            if self.store.ord_fits(g, id, &hi) {
                self.store.set_ord(id, hi);
                return true;
            }
        }
        false
    }

    fn same_body(&self, x: &Name, f1: &Ty, y: &Name, f2: &Ty, mu: bool) -> bool {
        let (l, r) = if mu {
            (
                Type::Mu(Ordinal::Inf, x.clone(), f1.clone()),
                Type::Mu(Ordinal::Inf, y.clone(), f2.clone()),
            )
        } else {
            (
                Type::Nu(Ordinal::Inf, x.clone(), f1.clone()),
                Type::Nu(Ordinal::Inf, y.clone(), f2.clone()),
            )
        };
        alpha_eq_ty_with(&Rc::new(l), &Rc::new(r), &self.store)
    }

    /// True when the type still depends on unknowns.
    fn has_unknowns(&self, t: &Ty) -> bool {
        let z = self.store.zonk(t);
        let mut uvars = Vec::new();
        type_uvars(&z, &mut uvars);
        if !uvars.is_empty() || has_ord_uvar(&self.store, &z) {
            return true;
        }
        let mut so = false;
        map_type(
            &z,
            &mut |u| {
                if matches!(&**u, Type::SecondOrder(..)) {
                    so = true;
                }
                None
            },
            &mut |o| o.clone(),
        );
        so
    }

    /// Closes the branch with a registered hypothesis, or registers a new
    /// one and proves its general form.
    fn generalise_sub(
        &mut self,
        g: &PosCtx,
        t: &Tm,
        a: &Ty,
        b: &Ty,
        concl: &Judgment,
    ) -> Result<Option<ProofTree>, CheckError> {
        let tys = [a.clone(), b.clone()];
        let unknowns = self.has_unknowns(a) || self.has_unknowns(b);
        if let Some((idx, m)) = self.lookup(HypKind::Subtyping, Some(t), &tys, g, unknowns) {
            let k = self.registry[idx].label();
            let mut leaf = ProofTree::leaf(Rule::Hypothesis(k), concl.clone());
            leaf.hyp = Some((k, m));
            return Ok(Some(leaf));
        }
        if unknowns {
            return Ok(None);
        }
        let (skel, args) = self.abstract_types(&tys, Abstraction::Heads, false);
        // Existential witnesses depend on the term, which is then kept.
        let specific =
            mentions_witness(&self.store.zonk(a)) || mentions_witness(&self.store.zonk(b));
        let term = if specific { Some(t.clone()) } else { None };
        let (idx, params) = self.register(HypKind::Subtyping, term, skel.clone(), g, &args);
        let hyp = self.registry[idx].clone();
        let g2 = hyp.context(&params);
        let a2 = instantiate(&skel[0], &params);
        let b2 = instantiate(&skel[1], &params);
        let t2 = if specific {
            t.clone()
        } else {
            self.counterexample(&a2, &b2)
        };
        let saved = self.current.replace(Current {
            node: hyp.node,
            params,
        });
        let r = self.sub_at(&g2, &t2, &a2, &b2, false);
        self.current = saved;
        Ok(Some(ProofTree::node(
            Rule::Induction(hyp.label()),
            concl.clone(),
            vec![r?],
        )))
    }

    fn sub_uvar(
        &mut self,
        g: &PosCtx,
        t: &Tm,
        a: &Ty,
        b: &Ty,
        concl: &Judgment,
    ) -> Result<Option<ProofTree>, CheckError> {
        let mut premises = Vec::new();
        match (&**a, &**b) {
            (Type::UVar(i), Type::UVar(j)) => {
                if i == j {
                    return Ok(Some(ProofTree::leaf(Rule::Refl, concl.clone())));
                }
                let pairs = self
                    .store
                    .unify_uvars(*i, *j)
                    .map_err(|e| self.uvar_error(t, a, b, e))?;
                for (x, y) in pairs {
                    premises.push(self.sub(g, t, &x, &y)?);
                }
            }
            (Type::UVar(i), Type::Record(fs)) => {
                for (l, bl) in fs {
                    let prev = self
                        .store
                        .constrain_field(*i, FieldKind::RecordUpper, l, bl)
                        .map_err(|e| self.uvar_error(t, a, b, e))?;
                    if let Some(prev) = prev {
                        let proj = Term::new(TermKind::Proj(t.clone(), l.clone()));
                        premises.push(self.tighten(g, &proj, *i, l, &prev, bl, bl)?);
                    }
                }
            }
            (Type::Variant(cs), Type::UVar(j)) => {
                for (c, ac) in cs {
                    let prev = self
                        .store
                        .constrain_field(*j, FieldKind::VariantLower, c, ac)
                        .map_err(|e| self.uvar_error(t, a, b, e))?;
                    if let Some(prev) = prev {
                        premises.push(self.tighten(g, t, *j, c, ac, &prev, ac)?);
                    }
                }
            }
            (Type::UVar(i), _) => {
                let cons = self
                    .store
                    .bind_type_uvar(*i, b)
                    .map_err(|e| self.uvar_error(t, a, b, e))?;
                if let Some(p) = self.check_constraints(g, t, b, cons)? {
                    premises.push(p);
                }
            }
            (_, Type::UVar(j)) => {
                let cons = self
                    .store
                    .bind_type_uvar(*j, a)
                    .map_err(|e| self.uvar_error(t, a, b, e))?;
                if let Some(p) = self.check_constraints(g, t, a, cons)? {
                    premises.push(p);
                }
            }
            (Type::SecondOrder(v, args), _) => {
                self.bind_second_order(t, a, b, *v, args, b)?;
            }
            (_, Type::SecondOrder(v, args)) => {
                self.bind_second_order(t, a, b, *v, args, a)?;
            }
            _ => return Ok(None),
        }
        Ok(Some(ProofTree::node(Rule::Unify, concl.clone(), premises)))
    }

    /// Relates two bounds recorded for the same field. When `lo ⊂ hi` fails
    /// but `hi ⊂ lo` holds, the recorded bound becomes `tighter`.
    #[allow(clippy::too_many_arguments)]
    fn tighten(
        &mut self,
        g: &PosCtx,
        t: &Tm,
        u: usize,
        label: &Name,
        lo: &Ty,
        hi: &Ty,
        tighter: &Ty,
    ) -> Result<ProofTree, CheckError> {
        let cp = self.checkpoint();
        let err = match self.sub(g, t, lo, hi) {
            Ok(p) => return Ok(p),
            Err(e) => e,
        };
        self.restore(cp);
        match self.sub(g, t, hi, lo) {
            Ok(p) => {
                self.store.replace_field(u, label, tighter);
                Ok(p)
            }
            Err(_) => Err(err),
        }
    }

    fn bind_second_order(
        &mut self,
        t: &Tm,
        a: &Ty,
        b: &Ty,
        v: usize,
        args: &[Ordinal],
        value: &Ty,
    ) -> Result<(), CheckError> {
        let mut occurs = false;
        map_type(
            &self.store.zonk(value),
            &mut |u| {
                if matches!(&**u, Type::SecondOrder(w, _) if *w == v) {
                    occurs = true;
                }
                None
            },
            &mut |o| o.clone(),
        );
        if occurs {
            return Err(self.clash(t, a, b, ClashKind::OccursCheck));
        }
        let args: Vec<Ordinal> = args.iter().map(|o| self.store.ord_deep(o)).collect();
        self.store.bind_so_ty(v, &args, value);
        Ok(())
    }

    /// Checks the constraints recorded on a variable that was just bound to
    /// `value`.
    fn check_constraints(
        &mut self,
        g: &PosCtx,
        t: &Tm,
        value: &Ty,
        cons: Option<(FieldKind, Vec<(Name, Ty)>)>,
    ) -> Result<Option<ProofTree>, CheckError> {
        match cons {
            None => Ok(None),
            Some((FieldKind::RecordUpper, fs)) => {
                let rec = Rc::new(Type::Record(fs));
                Ok(Some(self.sub(g, t, value, &rec)?))
            }
            Some((FieldKind::VariantLower, fs)) => {
                let var = Rc::new(Type::Variant(fs));
                Ok(Some(self.sub(g, t, &var, value)?))
            }
        }
    }
}

fn mentions_witness(t: &Ty) -> bool {
    let mut found = false;
    map_type(
        t,
        &mut |u| {
            if let Type::Choice(c) = &**u {
                found |= c.kind == ChoiceKind::In;
            }
            None
        },
        &mut |o| o.clone(),
    );
    found
}
