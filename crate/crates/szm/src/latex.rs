//! Proof trees as LaTeX `bussproofs` environments.

use std::collections::HashMap;
use std::fmt::Write as _;

use szm_core::display::display_epsilon;
use szm_core::{Judgment, Ordinal, PosCtx, ProofTree, Term, TermKind, Type};

/// Renders judgments, numbering the anonymous ordinals of one proof in
/// order of appearance.
#[derive(Default)]
pub struct Renderer {
    kappas: HashMap<(bool, usize), usize>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '_' | '#' | '$' | '%' | '&' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '\\' => out.push_str("\\backslash{}"),
            '^' => out.push_str("\\hat{}"),
            '~' => out.push_str("\\sim{}"),
            c => out.push(c),
        }
    }
    out
}

fn ident(s: &str) -> String {
    if s.chars().count() == 1 {
        escape(s)
    } else {
        format!("\\mathit{{{}}}", escape(s))
    }
}

/// Rule label in math mode.
pub fn label(rule: &szm_core::Rule) -> String {
    let mut out = String::new();
    let mut sub = false;
    for c in rule.label().chars() {
        match c {
            '_' if !sub => {
                sub = true;
                out.push_str("_{");
            }
            '→' => out.push_str("\\to"),
            '×' => out.push_str("\\times"),
            '∀' => out.push_str("\\forall"),
            '∃' => out.push_str("\\exists"),
            'μ' => out.push_str("\\mu"),
            'ν' => out.push_str("\\nu"),
            '∨' => out.push_str("\\vee"),
            '∧' => out.push_str("\\wedge"),
            '⊂' => out.push_str("\\subset"),
            'Λ' => out.push_str("\\Lambda"),
            c => out.push(c),
        }
    }
    if sub {
        out.push('}');
    }
    if out == "let" {
        return "\\mathrm{let}".into();
    }
    out
}

const INF: [&str; 5] = [
    "UnaryInfC",
    "BinaryInfC",
    "TrinaryInfC",
    "QuaternaryInfC",
    "QuinaryInfC",
];

impl Renderer {
    pub fn new() -> Renderer {
        Renderer::default()
    }

    fn kappa(&mut self, witness: bool, id: usize) -> String {
        let n = self.kappas.len() + 1;
        let k = *self.kappas.entry((witness, id)).or_insert(n);
        format!("\\kappa_{{{}}}", k)
    }

    pub fn ord(&mut self, o: &Ordinal) -> String {
        match o {
            Ordinal::Inf => "\\infty".into(),
            Ordinal::Succ(p) => format!("{}{{+}}1", self.ord(p)),
            Ordinal::Var(x) => ident(x),
            Ordinal::Witness(id, _) => self.kappa(true, *id),
            Ordinal::Choice(id, x) if x.is_empty() => self.kappa(false, *id),
            Ordinal::Choice(_, x) => ident(x),
            Ordinal::UVar(id) => format!("?_{{{}}}", id),
            Ordinal::SecondOrder(id, args) => {
                let args: Vec<String> = args.iter().map(|a| self.ord(a)).collect();
                format!("?_{{{}}}({})", id, args.join(", "))
            }
        }
    }

    fn size(&mut self, o: &Ordinal) -> String {
        match o {
            Ordinal::Inf => String::new(),
            o => format!("_{{{}}}", self.ord(o)),
        }
    }

    fn ty_at(&mut self, t: &Type, prec: u8) -> String {
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
        let s = match t {
            Type::Var(x) => ident(x),
            Type::Arrow(a, b) => format!("{} \\to {}", self.ty_at(a, 2), self.ty_at(b, 0)),
            Type::Record(fs) => {
                let fs: Vec<String> = fs
                    .iter()
                    .map(|(l, a)| format!("{} : {}", ident(l), self.ty_at(a, 0)))
                    .collect();
                format!("\\{{{}\\}}", fs.join("; "))
            }
            Type::Variant(cs) => {
                let cs: Vec<String> = cs
                    .iter()
                    .map(|(c, a)| match &**a {
                        Type::Record(fs) if fs.is_empty() => format!("\\mathrm{{{}}}", escape(c)),
                        _ => format!(
                            "\\mathrm{{{}}} \\text{{ of }} {}",
                            escape(c),
                            self.ty_at(a, 0)
                        ),
                    })
                    .collect();
                format!("[{}]", cs.join(" \\mid "))
            }
            Type::Forall(x, b) => format!("\\forall {}.{}", ident(x), self.ty_at(b, 0)),
            Type::Exists(x, b) => format!("\\exists {}.{}", ident(x), self.ty_at(b, 0)),
            Type::OForall(x, b) => format!("\\forall {}.{}", ident(x), self.ty_at(b, 0)),
            Type::OExists(x, b) => format!("\\exists {}.{}", ident(x), self.ty_at(b, 0)),
            Type::Mu(o, x, b) => format!("\\mu{} {}.{}", self.size(o), ident(x), self.ty_at(b, 0)),
            Type::Nu(o, x, b) => format!("\\nu{} {}.{}", self.size(o), ident(x), self.ty_at(b, 0)),
            Type::Choice(c) => format!("\\varepsilon_{{{}}}", ident(&c.var)),
            Type::Meet(a, s) => format!("{} \\wedge \\gamma_{{{}}}", self.ty_at(a, 2), s),
            Type::Join(a, s) => format!("{} \\vee \\gamma_{{{}}}", self.ty_at(a, 2), s),
            Type::UVar(id) => format!("?_{{{}}}", id),
            Type::SecondOrder(id, args) => {
                let args: Vec<String> = args.iter().map(|a| self.ord(a)).collect();
                format!("?_{{{}}}({})", id, args.join(", "))
            }
            Type::Dot(h, x) => format!("{}.{}", self.tm_at(h, 2), ident(x)),
        };
        if level < prec {
            format!("({})", s)
        } else {
            s
        }
    }

    pub fn ty(&mut self, t: &Type) -> String {
        self.ty_at(t, 0)
    }

    fn tm_at(&mut self, t: &Term, prec: u8) -> String {
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
        let s = match &t.kind {
            TermKind::Var(x) => ident(x),
            TermKind::Lam(x, None, b) => format!("\\lambda {}.{}", ident(x), self.tm_at(b, 0)),
            TermKind::Lam(x, Some(a), b) => format!(
                "\\lambda {}{{:}}{}.{}",
                ident(x),
                self.ty_at(a, 2),
                self.tm_at(b, 0)
            ),
            TermKind::App(f, a) => format!("{}\\;{}", self.tm_at(f, 1), self.tm_at(a, 2)),
            TermKind::Record(fs) => {
                let fs: Vec<String> = fs
                    .iter()
                    .map(|(l, u)| format!("{} = {}", ident(l), self.tm_at(u, 0)))
                    .collect();
                format!("\\{{{}\\}}", fs.join("; "))
            }
            TermKind::Proj(u, l) => format!("{}.{}", self.tm_at(u, 2), ident(l)),
            TermKind::Cons(c, u) => match &u.kind {
                TermKind::Record(fs) if fs.is_empty() => format!("\\mathrm{{{}}}", escape(c)),
                _ => format!("\\mathrm{{{}}}\\;{}", escape(c), self.tm_at(u, 2)),
            },
            TermKind::Case(s, bs) => {
                let mut out = format!("\\mathrm{{case}}\\;{}\\;\\mathrm{{of}}", self.tm_at(s, 1));
                for b in bs {
                    let _ = write!(
                        out,
                        " \\mid \\mathrm{{{}}}\\;{} \\to {}",
                        escape(&b.ctor),
                        ident(&b.var),
                        self.tm_at(&b.body, 1)
                    );
                }
                out
            }
            TermKind::Fix(x, b) => format!("Y {}.{}", ident(x), self.tm_at(b, 0)),
            TermKind::Annot(u, a) => format!("({} : {})", self.tm_at(u, 0), self.ty_at(a, 0)),
            TermKind::OrdAbs(a, b) => format!("\\Lambda {}.{}", ident(a), self.tm_at(b, 0)),
            TermKind::TypeLet(xs, s, a, u) => {
                let xs: Vec<String> = xs.iter().map(|x| ident(x)).collect();
                format!(
                    "\\mathrm{{let}}\\;{}\\;\\mathrm{{such\\ that}}\\;{} : {}\\;\\mathrm{{in}}\\;{}",
                    xs.join(","),
                    self.tm_at(s, 1),
                    self.ty_at(a, 0),
                    self.tm_at(u, 0)
                )
            }
            TermKind::Eps(e) => match e.pos {
                Some(_) => format!("\\texttt{{{}}}", escape(&display_epsilon(e))),
                None => format!("\\varepsilon_{{{}}}", ident(&e.var)),
            },
            TermKind::Global(g) => format!("\\mathsf{{{}}}", escape(&g.name)),
        };
        if level < prec {
            format!("({})", s)
        } else {
            s
        }
    }

    pub fn term(&mut self, t: &Term) -> String {
        self.tm_at(t, 0)
    }

    fn ctx(&mut self, g: &PosCtx) -> String {
        let os: Vec<String> = g.nonzero_set().iter().map(|o| self.ord(o)).collect();
        if os.is_empty() {
            String::new()
        } else {
            format!("{} ", os.join(", "))
        }
    }

    pub fn judgment(&mut self, j: &Judgment) -> String {
        match j {
            Judgment::Typing { ctx, term, ty } => {
                format!(
                    "{}\\vdash {} : {}",
                    self.ctx(ctx),
                    self.term(term),
                    self.ty(ty)
                )
            }
            Judgment::LocalSub {
                ctx,
                term,
                lhs,
                rhs,
            } => format!(
                "{}\\vdash {} : {} \\subset {}",
                self.ctx(ctx),
                self.term(term),
                self.ty(lhs),
                self.ty(rhs)
            ),
        }
    }

    fn node(&mut self, p: &ProofTree, out: &mut String) {
        if p.premises.is_empty() {
            out.push_str("\\AxiomC{}\n");
        } else if p.premises.len() > INF.len() {
            let split = p.premises.len() - (INF.len() - 1);
            self.group(&p.premises[..split], out);
            for q in &p.premises[split..] {
                self.node(q, out);
            }
        } else {
            for q in &p.premises {
                self.node(q, out);
            }
        }
        let n = p.premises.len().clamp(1, INF.len());
        let _ = writeln!(out, "\\RightLabel{{$\\scriptstyle {}$}}", label(&p.rule));
        let j = self.judgment(&p.conclusion);
        let _ = writeln!(out, "\\{}{{${}$}}", INF[n - 1], j);
    }

    /// Pushes the given premises as a single unlabeled node, since
    /// bussproofs stops at five premises.
    fn group(&mut self, ps: &[ProofTree], out: &mut String) {
        if ps.len() == 1 {
            return self.node(&ps[0], out);
        }
        let n = if ps.len() > INF.len() {
            let split = ps.len() - (INF.len() - 1);
            self.group(&ps[..split], out);
            for q in &ps[split..] {
                self.node(q, out);
            }
            INF.len()
        } else {
            for q in ps {
                self.node(q, out);
            }
            ps.len()
        };
        let _ = writeln!(out, "\\noLine\n\\{}{{$\\cdots$}}", INF[n - 1]);
    }

    /// One `prooftree` environment.
    pub fn proof(&mut self, p: &ProofTree) -> String {
        let mut out = String::from("\\begin{prooftree}\n");
        self.node(p, &mut out);
        out.push_str("\\end{prooftree}\n");
        out
    }
}

/// The proof of one value, titled with its name.
pub fn document_body(name: &str, p: &ProofTree) -> String {
    let mut out = format!("\\noindent\\texttt{{{}}}\n{{\\tiny\n", escape(name));
    out.push_str(&Renderer::new().proof(p));
    out.push_str("}\n");
    out
}

/// A standalone document around rendered proofs.
pub fn document(bodies: &[String]) -> String {
    let mut out = String::from(
        "\\documentclass{article}\n\\usepackage[a0paper,landscape,margin=1cm]{geometry}\n\\usepackage{amssymb}\n\\usepackage{bussproofs}\n\\begin{document}\n",
    );
    for b in bodies {
        out.push_str(b);
    }
    out.push_str("\\end{document}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use szm_core::{Rule, Term, Type};

    #[test]
    fn refl_leaf() {
        let j = Judgment::Typing {
            ctx: PosCtx::new(),
            term: Term::unit(),
            ty: Type::unit(),
        };
        let s = Renderer::new().proof(&ProofTree::leaf(Rule::Refl, j));
        assert_eq!(s, "\\begin{prooftree}\n\\AxiomC{}\n\\RightLabel{$\\scriptstyle =$}\n\\UnaryInfC{$\\vdash \\{\\} : \\{\\}$}\n\\end{prooftree}\n");
    }

    #[test]
    fn kappas_are_renumbered() {
        let mut r = Renderer::new();
        let w = Ordinal::Witness(57, std::rc::Rc::new(Ordinal::Inf));
        let c = Ordinal::Choice(91, "".into());
        assert_eq!(r.ord(&c), "\\kappa_{1}");
        assert_eq!(r.ord(&w), "\\kappa_{2}");
        assert_eq!(r.ord(&c), "\\kappa_{1}");
    }

    #[test]
    fn wide_nodes_keep_the_stack_balanced() {
        let j = || Judgment::Typing {
            ctx: PosCtx::new(),
            term: Term::unit(),
            ty: Type::unit(),
        };
        for n in 1..=14 {
            let premises = (0..n).map(|_| ProofTree::leaf(Rule::Refl, j())).collect();
            let s = Renderer::new().proof(&ProofTree::node(Rule::ProdI, j(), premises));
            let mut depth = 0usize;
            for line in s.lines() {
                if line.starts_with("\\AxiomC") {
                    depth += 1;
                }
                for (k, name) in INF.iter().enumerate() {
                    if line.starts_with(&format!("\\{}{{", name)) {
                        assert!(depth > k, "{} premises: stack underflow", n);
                        depth -= k;
                    }
                }
            }
            assert_eq!(depth, 1, "{} premises", n);
        }
    }

    #[test]
    fn empty_document() {
        let d = document(&[]);
        assert!(d.contains("\\begin{document}\n\\end{document}"));
    }
}
