//! Surface-syntax printing for terms, types and ordinals.
//!
//! Choice operators are never printed in full: they show the name of the
//! variable they bind and the position where they were created.

use alloc::string::String;
use core::fmt::{self, Display, Formatter, Write as _};

use crate::ordinal::{Ordinal, PosCtx};
use crate::syntax::{ChoiceKind, EpsTerm, Pos, Term, TermKind, Type, TypeChoice};

impl Display for Pos {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

fn at(name: &str, id: usize, pos: &Option<Pos>) -> String {
    match pos {
        Some(p) => alloc::format!("{}@{}", name, p),
        None => alloc::format!("{}@#{}", name, id),
    }
}

/// `x@file:line:col`, or `x@#id` for an operator with no source position.
pub fn display_epsilon(e: &EpsTerm) -> String {
    at(&e.var, e.id, &e.pos)
}

pub fn display_type_choice(c: &TypeChoice) -> String {
    at(&c.var, c.id, &c.pos)
}

impl Display for Ordinal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Ordinal::Inf => f.write_str("inf"),
            Ordinal::Succ(o) => write!(f, "S({})", o),
            Ordinal::Var(x) => f.write_str(x),
            Ordinal::Witness(id, _) => write!(f, "κ_{}", id),
            Ordinal::Choice(id, x) => {
                if x.is_empty() {
                    write!(f, "κ_{}", id)
                } else {
                    f.write_str(x)
                }
            }
            Ordinal::UVar(id) => write!(f, "?o{}", id),
            Ordinal::SecondOrder(id, args) => {
                write!(f, "?w{}(", id)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Display for PosCtx {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for o in self.nonzero_set() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{}", o)?;
        }
        Ok(())
    }
}

fn size_sub(o: &Ordinal) -> String {
    match o {
        Ordinal::Inf => String::new(),
        Ordinal::Var(_) | Ordinal::Witness(..) | Ordinal::Choice(..) | Ordinal::UVar(_) => {
            alloc::format!("_{}", o)
        }
        o => alloc::format!("_({})", o),
    }
}

/// Precedence levels: 0 binders, 1 arrows, 2 atoms.
fn fmt_ty(t: &Type, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    let level = match t {
        Type::Forall(..)
        | Type::Exists(..)
        | Type::OForall(..)
        | Type::OExists(..)
        | Type::Mu(..)
        | Type::Nu(..) => 0,
        Type::Arrow(..) | Type::Meet(..) | Type::Join(..) => 1,
        _ => 2,
    };
    if level < prec {
        f.write_str("(")?;
    }
    match t {
        Type::Var(x) => f.write_str(x)?,
        Type::Arrow(a, b) => {
            fmt_ty(a, 2, f)?;
            f.write_str(" → ")?;
            fmt_ty(b, 0, f)?;
        }
        Type::Record(fs) => {
            f.write_str("{")?;
            for (i, (l, a)) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{} : ", l)?;
                fmt_ty(a, 0, f)?;
            }
            f.write_str("}")?;
        }
        Type::Variant(cs) => {
            f.write_str("[")?;
            for (i, (c, a)) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                f.write_str(c)?;
                if !matches!(&**a, Type::Record(fs) if fs.is_empty()) {
                    f.write_str(" of ")?;
                    fmt_ty(a, 0, f)?;
                }
            }
            f.write_str("]")?;
        }
        Type::Forall(x, b) => {
            write!(f, "∀{}. ", x)?;
            fmt_ty(b, 0, f)?;
        }
        Type::Exists(x, b) => {
            write!(f, "∃{}. ", x)?;
            fmt_ty(b, 0, f)?;
        }
        Type::OForall(x, b) => {
            write!(f, "∀o {}. ", x)?;
            fmt_ty(b, 0, f)?;
        }
        Type::OExists(x, b) => {
            write!(f, "∃o {}. ", x)?;
            fmt_ty(b, 0, f)?;
        }
        Type::Mu(o, x, b) => {
            write!(f, "μ{} {}. ", size_sub(o), x)?;
            fmt_ty(b, 0, f)?;
        }
        Type::Nu(o, x, b) => {
            write!(f, "ν{} {}. ", size_sub(o), x)?;
            fmt_ty(b, 0, f)?;
        }
        Type::Choice(c) => f.write_str(&display_type_choice(c))?,
        Type::Meet(a, s) => {
            fmt_ty(a, 2, f)?;
            write!(f, " ∧ γ{}", s)?;
        }
        Type::Join(a, s) => {
            fmt_ty(a, 2, f)?;
            write!(f, " ∨ γ{}", s)?;
        }
        Type::UVar(id) => write!(f, "?{}", id)?,
        Type::SecondOrder(id, args) => {
            write!(f, "?V{}(", id)?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", a)?;
            }
            f.write_str(")")?;
        }
        Type::Dot(h, x) => {
            fmt_tm(h, 2, f)?;
            write!(f, ".{}", x)?;
        }
    }
    if level < prec {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for Type {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_ty(self, 0, f)
    }
}

impl Display for ChoiceKind {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChoiceKind::In => "∈",
            ChoiceKind::NotIn => "∉",
        })
    }
}

/// Precedence levels: 0 binders, 1 application, 2 atoms.
fn fmt_tm(t: &Term, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    let level = match &t.kind {
        TermKind::Lam(..)
        | TermKind::Fix(..)
        | TermKind::Case(..)
        | TermKind::OrdAbs(..)
        | TermKind::TypeLet(..) => 0,
        TermKind::Cons(_, u) if matches!(&u.kind, TermKind::Record(fs) if fs.is_empty()) => 2,
        TermKind::App(..) | TermKind::Cons(..) => 1,
        _ => 2,
    };
    if level < prec {
        f.write_str("(")?;
    }
    match &t.kind {
        TermKind::Var(x) => f.write_str(x)?,
        TermKind::Lam(x, ann, b) => {
            match ann {
                Some(a) => {
                    write!(f, "λ({} : ", x)?;
                    fmt_ty(a, 0, f)?;
                    f.write_str("). ")?;
                }
                None => write!(f, "λ{}. ", x)?,
            }
            fmt_tm(b, 0, f)?;
        }
        TermKind::App(a, b) => {
            fmt_tm(a, 1, f)?;
            f.write_str(" ")?;
            fmt_tm(b, 2, f)?;
        }
        TermKind::Record(fs) => {
            f.write_str("{")?;
            for (i, (l, u)) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{} = ", l)?;
                fmt_tm(u, 0, f)?;
            }
            f.write_str("}")?;
        }
        TermKind::Proj(u, l) => {
            fmt_tm(u, 2, f)?;
            write!(f, ".{}", l)?;
        }
        TermKind::Cons(c, u) => {
            f.write_str(c)?;
            if !matches!(&u.kind, TermKind::Record(fs) if fs.is_empty()) {
                f.write_str(" ")?;
                fmt_tm(u, 2, f)?;
            }
        }
        TermKind::Case(s, bs) => {
            f.write_str("case ")?;
            fmt_tm(s, 1, f)?;
            f.write_str(" of")?;
            for b in bs {
                write!(f, " | {} {} → ", b.ctor, b.var)?;
                fmt_tm(&b.body, 1, f)?;
            }
        }
        TermKind::Fix(x, b) => {
            write!(f, "Y {}. ", x)?;
            fmt_tm(b, 0, f)?;
        }
        TermKind::Annot(u, a) => {
            f.write_str("(")?;
            fmt_tm(u, 0, f)?;
            f.write_str(" : ")?;
            fmt_ty(a, 0, f)?;
            f.write_str(")")?;
        }
        TermKind::OrdAbs(a, b) => {
            write!(f, "Λ{}. ", a)?;
            fmt_tm(b, 0, f)?;
        }
        TermKind::TypeLet(xs, s, a, b) => {
            f.write_str("let ")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(x)?;
            }
            f.write_str(" such that ")?;
            fmt_tm(s, 1, f)?;
            f.write_str(" : ")?;
            fmt_ty(a, 0, f)?;
            f.write_str(" in ")?;
            fmt_tm(b, 0, f)?;
        }
        TermKind::Eps(e) => f.write_str(&display_epsilon(e))?,
        TermKind::Global(g) => f.write_str(&g.name)?,
    }
    if level < prec {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_tm(self, 0, f)
    }
}

/// Renders a value into a fresh string.
pub fn show<T: Display + ?Sized>(v: &T) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}", v);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Ty;
    use alloc::rc::Rc;
    use alloc::vec;

    fn pos(line: u32, col: u32) -> Option<Pos> {
        Some(Pos {
            file: "file.szm".into(),
            line,
            col,
        })
    }

    fn eps(p: Option<Pos>) -> EpsTerm {
        EpsTerm {
            id: 1,
            var: "x".into(),
            dom: Type::unit(),
            body: Term::var("x"),
            cod: Type::unit(),
            pos: p,
        }
    }

    #[test]
    fn epsilon_display() {
        assert_eq!(display_epsilon(&eps(pos(3, 7))), "x@file.szm:3:7");
        assert_eq!(display_epsilon(&eps(None)), "x@#1");
        let c = TypeChoice {
            id: 2,
            kind: ChoiceKind::NotIn,
            var: "X".into(),
            term: Term::unit(),
            body: Type::unit(),
            pos: pos(10, 2),
        };
        assert_eq!(display_type_choice(&c), "X@file.szm:10:2");
    }

    #[test]
    fn types() {
        let nat: Ty = Type::mu(
            Ordinal::var("a"),
            "N",
            Type::variant(vec![("Z", Type::unit()), ("S", Type::var("N"))]),
        );
        assert_eq!(show(&*nat), "μ_a N. [Z | S of N]");
        let t = Type::arrow(Type::arrow(Type::var("A"), Type::var("B")), Type::var("C"));
        assert_eq!(show(&*t), "(A → B) → C");
        let o = Ordinal::succ(Ordinal::var("a"));
        assert_eq!(show(&*Type::nu(o, "X", Type::var("X"))), "ν_(S(a)) X. X");
        assert_eq!(
            show(&*Type::mu(Ordinal::Inf, "X", Type::var("X"))),
            "μ X. X"
        );
        let _ = Rc::new(0);
    }

    #[test]
    fn terms() {
        let t = Term::lam(
            "x",
            Term::app(Term::var("x"), Term::cons("C", Term::unit())),
        );
        assert_eq!(show(&*t), "λx. x C");
        let u = Term::app(Term::var("f"), Term::app(Term::var("g"), Term::var("y")));
        assert_eq!(show(&*u), "f (g y)");
    }
}
