//! Judgments and proof trees recorded by the checker.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ordinal::PosCtx;
use crate::scp::SCMatrix;
use crate::syntax::{Tm, Ty};

#[derive(Clone, Debug)]
pub enum Judgment {
    /// `γ ⊢ t : A`
    Typing { ctx: PosCtx, term: Tm, ty: Ty },
    /// `γ ⊢ t : A ⊂ B`
    LocalSub {
        ctx: PosCtx,
        term: Tm,
        lhs: Ty,
        rhs: Ty,
    },
}

impl Judgment {
    pub fn term(&self) -> &Tm {
        match self {
            Judgment::Typing { term, .. } | Judgment::LocalSub { term, .. } => term,
        }
    }

    pub fn ctx(&self) -> &PosCtx {
        match self {
            Judgment::Typing { ctx, .. } | Judgment::LocalSub { ctx, .. } => ctx,
        }
    }

    /// Applies `f` to every type of the judgment.
    pub fn map_types(&self, f: &mut dyn FnMut(&Ty) -> Ty) -> Judgment {
        match self {
            Judgment::Typing { ctx, term, ty } => Judgment::Typing {
                ctx: ctx.clone(),
                term: term.clone(),
                ty: f(ty),
            },
            Judgment::LocalSub {
                ctx,
                term,
                lhs,
                rhs,
            } => Judgment::LocalSub {
                ctx: ctx.clone(),
                term: term.clone(),
                lhs: f(lhs),
                rhs: f(rhs),
            },
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Typing { ctx, term, ty } => {
                if !ctx.nonzero_set().is_empty() {
                    write!(f, "{} ", ctx)?;
                }
                write!(f, "⊢ {} : {}", term, ty)
            }
            Judgment::LocalSub {
                ctx,
                term,
                lhs,
                rhs,
            } => {
                if !ctx.nonzero_set().is_empty() {
                    write!(f, "{} ", ctx)?;
                }
                write!(f, "⊢ {} : {} ⊂ {}", term, lhs, rhs)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Identity or reflexivity, `=`.
    Refl,
    /// Subsumption, `⊂`.
    Sub,
    ArrowI,
    ArrowE,
    ProdI,
    ProdE,
    SumI,
    SumE,
    OrdAbs,
    ForallR,
    ForallL,
    ExistsR,
    ExistsL,
    OForallR,
    OForallL,
    OExistsR,
    OExistsL,
    MuL,
    MuR,
    NuL,
    NuR,
    /// Elimination of `A ∧ γ` on the right.
    MeetR,
    /// Elimination of `A ∨ γ` on the left.
    JoinL,
    /// Local subtyping between arrows, records and variants.
    Arrow,
    Prod,
    Sum,
    /// `let X such that`.
    TypeLet,
    /// A unification variable was bound or constrained.
    Unify,
    /// A new induction hypothesis numbered `k`.
    Induction(usize),
    /// Closing a branch with hypothesis `k`.
    Hypothesis(usize),
    /// Placeholder for a delayed fixpoint obligation.
    Pending(usize),
}

impl Rule {
    pub fn label(&self) -> String {
        let s = match self {
            Rule::Refl | Rule::Unify => "=",
            Rule::Sub => "⊂",
            Rule::ArrowI => "→_i",
            Rule::ArrowE => "→_e",
            Rule::ProdI => "×_i",
            Rule::ProdE => "×_e",
            Rule::SumI => "+_i",
            Rule::SumE => "+_e",
            Rule::OrdAbs => "Λ_o",
            Rule::ForallR => "∀_r",
            Rule::ForallL => "∀_l",
            Rule::ExistsR => "∃_r",
            Rule::ExistsL => "∃_l",
            Rule::OForallR => "∀_or",
            Rule::OForallL => "∀_ol",
            Rule::OExistsR => "∃_or",
            Rule::OExistsL => "∃_ol",
            Rule::MuL => "μ_l",
            Rule::MuR => "μ_r",
            Rule::NuL => "ν_l",
            Rule::NuR => "ν_r",
            Rule::MeetR => "∨_r",
            Rule::JoinL => "∧_l",
            Rule::Arrow => "→",
            Rule::Prod => "×",
            Rule::Sum => "+",
            Rule::TypeLet => "let",
            Rule::Induction(k) => return alloc::format!("I_{}", k),
            Rule::Hypothesis(k) => return alloc::format!("H_{}", k),
            Rule::Pending(k) => return alloc::format!("Y_{}", k),
        };
        String::from(s)
    }
}

#[derive(Clone, Debug)]
pub struct ProofTree {
    pub rule: Rule,
    pub conclusion: Judgment,
    pub premises: Vec<ProofTree>,
    /// Hypothesis link: registry id and size-change matrix of the use.
    pub hyp: Option<(usize, SCMatrix)>,
}

impl ProofTree {
    pub fn leaf(rule: Rule, conclusion: Judgment) -> ProofTree {
        ProofTree {
            rule,
            conclusion,
            premises: Vec::new(),
            hyp: None,
        }
    }

    pub fn node(rule: Rule, conclusion: Judgment, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree {
            rule,
            conclusion,
            premises,
            hyp: None,
        }
    }

    /// Replaces the placeholder `Pending(id)` with `tree`. Returns whether
    /// the placeholder was found.
    pub fn splice(&mut self, id: usize, tree: &mut Option<ProofTree>) -> bool {
        if self.rule == Rule::Pending(id) {
            if let Some(t) = tree.take() {
                *self = t;
                return true;
            }
        }
        self.premises.iter_mut().any(|p| p.splice(id, tree))
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    /// Rule labels in pre-order.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<String>) {
        out.push(self.rule.label());
        for p in &self.premises {
            p.collect_labels(out);
        }
    }

    /// Visits every node in pre-order.
    pub fn walk(&self, f: &mut dyn FnMut(&ProofTree)) {
        f(self);
        for p in &self.premises {
            p.walk(f);
        }
    }

    pub fn map_judgments(&mut self, f: &mut dyn FnMut(&Judgment) -> Judgment) {
        self.conclusion = f(&self.conclusion);
        for p in &mut self.premises {
            p.map_judgments(f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Term, Type};
    use alloc::vec;

    fn j() -> Judgment {
        Judgment::Typing {
            ctx: PosCtx::new(),
            term: Term::unit(),
            ty: Type::unit(),
        }
    }

    #[test]
    fn splice_placeholder() {
        let mut t = ProofTree::node(
            Rule::ArrowI,
            j(),
            vec![ProofTree::leaf(Rule::Pending(3), j())],
        );
        let mut sub = Some(ProofTree::leaf(Rule::Hypothesis(1), j()));
        assert!(t.splice(3, &mut sub));
        assert_eq!(t.labels(), vec!["→_i", "H_1"]);
        assert!(!t.splice(3, &mut Some(ProofTree::leaf(Rule::Refl, j()))));
    }

    #[test]
    fn judgment_display() {
        assert_eq!(alloc::format!("{}", j()), "⊢ {} : {}");
    }
}
