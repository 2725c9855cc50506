//! Typing judgments `γ ⊢ t : A` and breadth-first fixpoint checking.
//!
//! A fixpoint is never typed where it occurs. Its occurrence is replaced by
//! a placeholder and the obligation is queued; the queue is processed in
//! order, so every fixpoint is unrolled one level at a time. When a queued
//! obligation is an instance of a registered hypothesis the branch is closed,
//! otherwise a new general hypothesis is registered and the body is checked
//! against it.

use alloc::format;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CheckError, ClashKind};
use crate::ordinal::PosCtx;
use crate::proof::{Judgment, ProofTree, Rule};
use crate::session::{
    has_ord_quantifier, instantiate, Abstraction, Current, Derivation, HypKind, PendingFixpoint,
    Session,
};
use crate::syntax::{
    subst_ord_in_term, subst_ord_in_type, subst_term, subst_type, subst_type_in_term, Name,
    TermKind, Tm, Ty, Type,
};

type R = Result<ProofTree, CheckError>;

fn typing(g: &PosCtx, t: &Tm, a: &Ty) -> Judgment {
    Judgment::Typing {
        ctx: g.clone(),
        term: t.clone(),
        ty: a.clone(),
    }
}

impl Session {
    /// Checks `⊢ t : A` for a closed term.
    pub fn check(&mut self, t: &Tm, ty: &Ty) -> Result<Derivation, CheckError> {
        self.reset();
        let mut root = self.typ(&PosCtx::new(), t, ty)?;
        self.drain(&mut root)?;
        self.finish(root)
    }

    fn drain(&mut self, root: &mut ProofTree) -> Result<(), CheckError> {
        while let Some(item) = self.queue.pop_front() {
            if item.generation > self.config.unroll_depth {
                return Err(CheckError::UnrollDepthExceeded {
                    term: item.term,
                    depth: self.config.unroll_depth,
                });
            }
            self.generation = item.generation;
            self.stages = self.stages.max(item.generation);
            let id = item.id;
            let tree = self.fixpoint(item)?;
            root.splice(id, &mut Some(tree));
        }
        self.current = None;
        Ok(())
    }

    fn fixpoint(&mut self, item: PendingFixpoint) -> R {
        let ty = self.close_constrained(&item.ty);
        let concl = typing(&item.ctx, &item.term, &ty);
        self.last_typing = Some(concl.clone());
        if let Some(tr) = &mut self.trace {
            tr.push(format!(
                "stage {}: {}",
                item.generation,
                crate::display::show(&concl)
            ));
        }
        self.current = item.source.clone();
        if let Some((idx, m)) = self.lookup(
            HypKind::Typing,
            Some(&item.term),
            core::slice::from_ref(&ty),
            &item.ctx,
            false,
        ) {
            let k = self.registry[idx].label();
            let mut leaf = ProofTree::leaf(Rule::Hypothesis(k), concl);
            leaf.hyp = Some((k, m));
            return Ok(leaf);
        }
        let mode = if has_ord_quantifier(&ty) {
            Abstraction::Ordinals
        } else {
            Abstraction::Infinite
        };
        let (skel, args) = self.abstract_types(&[ty], mode, true);
        let (idx, params) = self.register(
            HypKind::Typing,
            Some(item.term.clone()),
            skel.clone(),
            &item.ctx,
            &args,
        );
        let hyp = self.registry[idx].clone();
        let g = hyp.context(&params);
        let inst = instantiate(&skel[0], &params);
        self.current = Some(Current {
            node: hyp.node,
            params,
        });
        let TermKind::Fix(x, body) = &item.term.kind else {
            unreachable!("queued term is not a fixpoint")
        };
        let unrolled = subst_term(body, x, &item.term);
        let p = self.typ(&g, &unrolled, &inst)?;
        Ok(ProofTree::node(
            Rule::Induction(hyp.label()),
            concl,
            vec![p],
        ))
    }

    pub(crate) fn typ(&mut self, g: &PosCtx, t: &Tm, c: &Ty) -> R {
        self.depth += 1;
        let r = self.typ_rules(g, t, c);
        self.depth -= 1;
        r
    }

    fn typ_rules(&mut self, g: &PosCtx, t: &Tm, c: &Ty) -> R {
        let concl = typing(g, t, c);
        self.last_typing = Some(concl.clone());
        self.step(|| None)?;
        match &t.kind {
            TermKind::Var(x) => Err(self.clash(
                t,
                c,
                c,
                ClashKind::Malformed(format!("unbound variable {}", x)),
            )),
            TermKind::Eps(e) => {
                let dom = e.dom.clone();
                self.typ_declared(g, t, &dom, c, concl)
            }
            TermKind::Global(gl) => match &gl.ty {
                Some(a) => {
                    let a = a.clone();
                    self.typ_declared(g, t, &a, c, concl)
                }
                None => {
                    let body = gl.body.clone();
                    self.typ(g, &body, c)
                }
            },
            TermKind::Lam(x, ann, body) => {
                let head = self.store.head(c);
                match (&*head, ann) {
                    (Type::Arrow(a, b), None) => {
                        let e = self.eps(x, a.clone(), body.clone(), b.clone(), t.pos.clone());
                        let p = self.typ(g, &subst_term(body, x, &e), b)?;
                        Ok(ProofTree::node(Rule::ArrowI, concl, vec![p]))
                    }
                    _ => {
                        let u = match ann {
                            Some(a) => a.clone(),
                            None => self.store.fresh_ty(t.pos.clone()),
                        };
                        let v = self.store.fresh_ty(t.pos.clone());
                        let p1 = self.sub(g, t, &Type::arrow(u.clone(), v.clone()), c)?;
                        let e = self.eps(x, u.clone(), body.clone(), v.clone(), t.pos.clone());
                        let p2 = self.typ(g, &subst_term(body, x, &e), &v)?;
                        let inner = ProofTree::node(
                            Rule::ArrowI,
                            typing(g, t, &Type::arrow(u, v)),
                            vec![p2],
                        );
                        Ok(ProofTree::node(Rule::Sub, concl, vec![p1, inner]))
                    }
                }
            }
            TermKind::App(f, a) => {
                let u = self.store.fresh_ty(a.pos.clone());
                let fty = Type::arrow(u.clone(), c.clone());
                let (p1, p2) = if f.is_neutral() {
                    let p1 = self.typ(g, f, &fty)?;
                    (p1, self.typ(g, a, &u)?)
                } else {
                    let p2 = self.typ(g, a, &u)?;
                    (self.typ(g, f, &fty)?, p2)
                };
                Ok(ProofTree::node(Rule::ArrowE, concl, vec![p1, p2]))
            }
            TermKind::Record(fs) => {
                let s = self.store.fresh_slot();
                let us: Vec<(Name, Ty)> = fs
                    .iter()
                    .map(|(l, u)| (l.clone(), self.store.fresh_ty(u.pos.clone())))
                    .collect();
                let rec = Rc::new(Type::Join(Rc::new(Type::Record(us.clone())), s));
                let p0 = self.sub(g, t, &rec, c)?;
                let g2 = g.merge(self.store.slot(s));
                let mut ps = vec![p0];
                for ((_, u), (_, ut)) in fs.iter().zip(&us) {
                    ps.push(self.typ(&g2, u, ut)?);
                }
                Ok(ProofTree::node(Rule::ProdI, concl, ps))
            }
            TermKind::Proj(u, l) => {
                let rec = Rc::new(Type::Record(vec![(l.clone(), c.clone())]));
                let p = self.typ(g, u, &rec)?;
                Ok(ProofTree::node(Rule::ProdE, concl, vec![p]))
            }
            TermKind::Cons(k, u) => {
                let s = self.store.fresh_slot();
                let ut = self.store.fresh_ty(u.pos.clone());
                let var = Rc::new(Type::Join(
                    Rc::new(Type::Variant(vec![(k.clone(), ut.clone())])),
                    s,
                ));
                let p0 = self.sub(g, t, &var, c)?;
                let g2 = g.merge(self.store.slot(s));
                let p1 = self.typ(&g2, u, &ut)?;
                Ok(ProofTree::node(Rule::SumI, concl, vec![p0, p1]))
            }
            TermKind::Case(s, bs) => {
                let slot = self.store.fresh_slot();
                let us: Vec<(Name, Ty)> = bs
                    .iter()
                    .map(|b| (b.ctor.clone(), self.store.fresh_ty(b.pos.clone())))
                    .collect();
                let scrut = Rc::new(Type::Meet(Rc::new(Type::Variant(us.clone())), slot));
                let p0 = self.typ(g, s, &scrut)?;
                let g2 = g.merge(self.store.slot(slot));
                let mut ps = vec![p0];
                for (b, (_, u)) in bs.iter().zip(&us) {
                    let e = self.eps(&b.var, u.clone(), b.body.clone(), c.clone(), b.pos.clone());
                    ps.push(self.typ(&g2, &subst_term(&b.body, &b.var, &e), c)?);
                }
                Ok(ProofTree::node(Rule::SumE, concl, ps))
            }
            TermKind::Fix(..) => {
                let id = self.fresh_id();
                self.queue.push_back(PendingFixpoint {
                    id,
                    ctx: g.clone(),
                    term: t.clone(),
                    ty: c.clone(),
                    generation: self.generation + 1,
                    source: self.current.clone(),
                    pos: t.pos.clone(),
                });
                Ok(ProofTree::leaf(Rule::Pending(id), concl))
            }
            TermKind::Annot(u, a) => {
                let p1 = self.typ(g, u, a)?;
                let p2 = self.sub(g, u, a, c)?;
                Ok(ProofTree::node(Rule::Sub, concl, vec![p1, p2]))
            }
            TermKind::OrdAbs(a, u) => {
                let head = self.store.head(c);
                match &*head {
                    Type::OForall(x, b) => {
                        let k = self.ord_constant(a);
                        let p = self.typ(
                            g,
                            &subst_ord_in_term(u, a, &k),
                            &subst_ord_in_type(b, x, &k),
                        )?;
                        Ok(ProofTree::node(Rule::OrdAbs, concl, vec![p]))
                    }
                    _ => Err(self.clash(
                        t,
                        c,
                        c,
                        ClashKind::Malformed(format!(
                            "ordinal abstraction over {} needs a ∀o type",
                            a
                        )),
                    )),
                }
            }
            TermKind::TypeLet(xs, s, a, u) => {
                let mut a2 = a.clone();
                let mut u2 = u.clone();
                for x in xs {
                    let v = self.store.fresh_ty(t.pos.clone());
                    a2 = subst_type(&a2, x, &v);
                    u2 = subst_type_in_term(&u2, x, &v);
                }
                let p1 = self.typ(g, s, &a2)?;
                let p2 = self.typ(g, &u2, c)?;
                Ok(ProofTree::node(Rule::TypeLet, concl, vec![p1, p2]))
            }
        }
    }

    /// A term whose type is fixed by its declaration.
    fn typ_declared(&mut self, g: &PosCtx, t: &Tm, a: &Ty, c: &Ty, concl: Judgment) -> R {
        let p = self.sub(g, t, a, c)?;
        if p.rule == Rule::Refl && p.premises.is_empty() {
            Ok(ProofTree::leaf(Rule::Refl, concl))
        } else {
            Ok(ProofTree::node(Rule::Sub, concl, vec![p]))
        }
    }
}
