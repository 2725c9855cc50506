//! Concrete syntax.
//!
//! ```text
//! item  ::= type Name(params) = ty | val name [: ty] = term | eval term
//! ty    ::= ∀ binders. ty | ∃ binders. ty | μ[_o] X. ty | ν[_o] X. ty | prod [→ ty]
//! prod  ::= atom (× atom)*
//! atom  ::= X | Name(args) | {l : ty; …} | [C of ty | …] | (ty) | h.T
//! term  ::= λ binders. term | fix x. term | Λa. term | case term of | C x → term …
//!         | let x [: ty] = term in term | let X… such that term : ty in term | app
//! app   ::= C [arg] | arg arg*
//! arg   ::= x | C | (term) | (term : ty) | (term, term) | () | {l = term; …} | arg.l
//! ```
//!
//! Uppercase identifiers are type names, type variables and constructors;
//! lowercase identifiers are term variables, globals and ordinals.
//! Definitions are expanded during parsing, so the result only refers to
//! earlier definitions through [`Global`] nodes.

use std::collections::HashMap;
use std::rc::Rc;

use szm_core::syntax::{subst_ord_in_type, subst_term, subst_type, Branch, Global};
use szm_core::{Name, Ordinal, Pos, Term, TermKind, Tm, Ty, Type};

use crate::lexer::{lex, Tok};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: unbound name `{name}`")]
    Unbound { pos: Pos, name: String },
}

impl ParseError {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub fn pos(&self) -> &Pos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Unbound { pos, .. } => pos,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Param {
    Type(Name),
    Ord(Name),
}

#[derive(Debug)]
pub struct TypeDef {
    pub name: Name,
    pub params: Vec<Param>,
    pub body: Ty,
    pub pos: Pos,
}

#[derive(Debug)]
pub struct Val {
    pub name: Name,
    pub ty: Option<Ty>,
    pub term: Tm,
    pub global: Rc<Global>,
    pub pos: Pos,
}

#[derive(Debug)]
pub enum Item {
    Type(Rc<TypeDef>),
    Val(Rc<Val>),
    Eval { term: Tm, pos: Pos },
}

/// Definitions visible to later items.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub types: HashMap<Name, Rc<TypeDef>>,
    pub vals: HashMap<Name, Rc<Val>>,
}

#[derive(Debug, Default)]
pub struct SourceFile {
    pub items: Vec<Item>,
    pub env: Env,
}

impl SourceFile {
    pub fn vals(&self) -> impl Iterator<Item = &Rc<Val>> {
        self.items.iter().filter_map(|i| match i {
            Item::Val(v) => Some(v),
            _ => None,
        })
    }

    pub fn val(&self, name: &str) -> Option<&Rc<Val>> {
        self.env.vals.get(name)
    }
}

const KEYWORDS: &[&str] = &[
    "type", "val", "eval", "fix", "case", "of", "let", "such", "that", "in",
];

fn is_upper(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

pub fn parse_program(file: &str, text: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(file, text, Env::default())?;
    let mut out = SourceFile::default();
    while p.peek() != &Tok::Eof {
        let item = p.item()?;
        match &item {
            Item::Type(d) => {
                p.env.types.insert(d.name.clone(), d.clone());
            }
            Item::Val(v) => {
                p.env.vals.insert(v.name.clone(), v.clone());
            }
            Item::Eval { .. } => {}
        }
        out.items.push(item);
    }
    out.env = p.env;
    Ok(out)
}

/// Parses a closed term against existing definitions.
pub fn parse_term(env: &Env, file: &str, text: &str) -> Result<Tm, ParseError> {
    let mut p = Parser::new(file, text, env.clone())?;
    let t = p.term()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

/// Parses a closed type against existing definitions.
pub fn parse_type(env: &Env, file: &str, text: &str) -> Result<Ty, ParseError> {
    let mut p = Parser::new(file, text, env.clone())?;
    let t = p.ty()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    env: Env,
    terms: Vec<Name>,
    tys: Vec<Name>,
    ords: Vec<Name>,
    fresh: usize,
}

impl Parser {
    fn new(file: &str, text: &str, env: Env) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(file, text)?,
            i: 0,
            env,
            terms: Vec::new(),
            tys: Vec::new(),
            ords: Vec::new(),
            fresh: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1.clone()
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, pos) = &self.toks[self.i];
        if *tok == Tok::Eof && self.i > 0 {
            return ParseError::syntax(
                self.toks[self.i - 1].1.clone(),
                format!("expected {}, found end of input", expected),
            );
        }
        ParseError::syntax(
            pos.clone(),
            format!("expected {}, found {}", expected, tok.describe()),
        )
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&t.describe()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", kw)))
        }
    }

    fn ident(&mut self, upper: bool, what: &str) -> Result<Name, ParseError> {
        match self.peek() {
            Tok::Ident(s) if is_upper(s) == upper && !KEYWORDS.contains(&s.as_str()) => {
                let s: Name = s.as_str().into();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    fn lower(&mut self, what: &str) -> Result<Name, ParseError> {
        self.ident(false, what)
    }

    fn upper(&mut self, what: &str) -> Result<Name, ParseError> {
        self.ident(true, what)
    }

    fn binder(&mut self) -> Result<Name, ParseError> {
        if self.eat(&Tok::Underscore) {
            return Ok("_".into());
        }
        self.lower("a variable")
    }

    // -- items -------------------------------------------------------------

    fn item(&mut self) -> Result<Item, ParseError> {
        let pos = self.pos();
        if self.is_kw("type") {
            self.bump();
            let name = self.upper("a type name")?;
            if self.env.types.contains_key(&name) {
                return Err(ParseError::syntax(
                    pos,
                    format!("type {} is already defined", name),
                ));
            }
            let mut params = Vec::new();
            if self.eat(&Tok::LParen) {
                loop {
                    match self.peek().clone() {
                        Tok::Ident(s) if is_upper(&s) => {
                            self.bump();
                            params.push(Param::Type(s.as_str().into()));
                        }
                        Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                            self.bump();
                            params.push(Param::Ord(s.as_str().into()));
                        }
                        _ => return Err(self.error("a parameter")),
                    }
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RParen)?;
            }
            self.expect(&Tok::Eq)?;
            for p in &params {
                match p {
                    Param::Type(x) => self.tys.push(x.clone()),
                    Param::Ord(a) => self.ords.push(a.clone()),
                }
            }
            let body = self.ty();
            self.tys.clear();
            self.ords.clear();
            return Ok(Item::Type(Rc::new(TypeDef {
                name,
                params,
                body: body?,
                pos,
            })));
        }
        if self.is_kw("val") {
            self.bump();
            let name = self.lower("a value name")?;
            if self.env.vals.contains_key(&name) {
                return Err(ParseError::syntax(
                    pos,
                    format!("value {} is already defined", name),
                ));
            }
            let ty = if self.eat(&Tok::Colon) {
                Some(self.ty()?)
            } else {
                None
            };
            self.expect(&Tok::Eq)?;
            let term = self.term()?;
            let global = Rc::new(Global {
                name: name.clone(),
                ty: ty.clone(),
                body: term.clone(),
            });
            return Ok(Item::Val(Rc::new(Val {
                name,
                ty,
                term,
                global,
                pos,
            })));
        }
        if self.is_kw("eval") {
            self.bump();
            let term = self.term()?;
            return Ok(Item::Eval { term, pos });
        }
        Err(self.error("`type`, `val` or `eval`"))
    }

    // -- ordinals ----------------------------------------------------------

    fn ord(&mut self) -> Result<Ordinal, ParseError> {
        let mut o = self.ord_atom()?;
        while self.peek() == &Tok::Plus {
            self.bump();
            let n = match self.bump() {
                Tok::Int(n) => n,
                _ => return Err(self.error("an integer")),
            };
            for _ in 0..n {
                o = Ordinal::succ(o);
            }
        }
        Ok(o)
    }

    fn ord_atom(&mut self) -> Result<Ordinal, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Infinity => {
                self.bump();
                Ok(Ordinal::Inf)
            }
            Tok::LParen => {
                self.bump();
                let o = self.ord()?;
                self.expect(&Tok::RParen)?;
                Ok(o)
            }
            Tok::Ident(s) if s == "S" && self.peek_at(1) == &Tok::LParen => {
                self.bump();
                self.bump();
                let o = self.ord()?;
                self.expect(&Tok::RParen)?;
                Ok(Ordinal::succ(o))
            }
            Tok::Ident(s) if s == "inf" => {
                self.bump();
                Ok(Ordinal::Inf)
            }
            Tok::Ident(s) if !is_upper(&s) => {
                self.bump();
                if self.ords.iter().any(|a| **a == *s) {
                    Ok(Ordinal::var(&s))
                } else {
                    Err(ParseError::Unbound { pos, name: s })
                }
            }
            _ => Err(self.error("an ordinal")),
        }
    }

    // -- types -------------------------------------------------------------

    pub fn ty(&mut self) -> Result<Ty, ParseError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => {
                let univ = self.bump() == Tok::Forall;
                let mut binders = Vec::new();
                if self.is_kw("o") && matches!(self.peek_at(1), Tok::Ident(s) if !is_upper(s)) {
                    self.bump();
                }
                while let Tok::Ident(s) = self.peek().clone() {
                    if KEYWORDS.contains(&s.as_str()) {
                        break;
                    }
                    self.bump();
                    binders.push(Name::from(s.as_str()));
                }
                if binders.is_empty() {
                    return Err(self.error("a binder"));
                }
                self.expect(&Tok::Dot)?;
                let (nt, no) = (self.tys.len(), self.ords.len());
                for b in &binders {
                    if is_upper(b) {
                        self.tys.push(b.clone());
                    } else {
                        self.ords.push(b.clone());
                    }
                }
                let body = self.ty();
                self.tys.truncate(nt);
                self.ords.truncate(no);
                let mut t = body?;
                for b in binders.into_iter().rev() {
                    t = Rc::new(match (univ, is_upper(&b)) {
                        (true, true) => Type::Forall(b, t),
                        (false, true) => Type::Exists(b, t),
                        (true, false) => Type::OForall(b, t),
                        (false, false) => Type::OExists(b, t),
                    });
                }
                Ok(t)
            }
            Tok::Mu | Tok::Nu => {
                let mu = self.bump() == Tok::Mu;
                let size = if self.eat(&Tok::Underscore) {
                    self.ord_atom()?
                } else {
                    Ordinal::Inf
                };
                let x = self.upper("a type variable")?;
                self.expect(&Tok::Dot)?;
                self.tys.push(x.clone());
                let body = self.ty();
                self.tys.pop();
                Ok(Rc::new(if mu {
                    Type::Mu(size, x, body?)
                } else {
                    Type::Nu(size, x, body?)
                }))
            }
            _ => {
                let a = self.ty_prod()?;
                if self.eat(&Tok::Arrow) {
                    Ok(Type::arrow(a, self.ty()?))
                } else {
                    Ok(a)
                }
            }
        }
    }

    fn ty_prod(&mut self) -> Result<Ty, ParseError> {
        let mut parts = vec![self.ty_atom()?];
        while self.eat(&Tok::Times) {
            parts.push(self.ty_atom()?);
        }
        let mut t = parts.pop().unwrap();
        while let Some(a) = parts.pop() {
            t = Type::record(vec![("fst", a), ("snd", t)]);
        }
        Ok(t)
    }

    fn ty_atom(&mut self) -> Result<Ty, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::LBrace => {
                self.bump();
                let mut fs: Vec<(Name, Ty)> = Vec::new();
                while self.peek() != &Tok::RBrace {
                    let l = self.lower("a field name")?;
                    self.expect(&Tok::Colon)?;
                    fs.push((l, self.ty()?));
                    if !self.eat(&Tok::Semi) {
                        break;
                    }
                }
                self.expect(&Tok::RBrace)?;
                Ok(Rc::new(Type::Record(fs)))
            }
            Tok::LBrack => {
                self.bump();
                self.eat(&Tok::Bar);
                let mut cs: Vec<(Name, Ty)> = Vec::new();
                while self.peek() != &Tok::RBrack {
                    let c = self.upper("a constructor")?;
                    let a = if self.is_kw("of") {
                        self.bump();
                        self.ty()?
                    } else {
                        Type::unit()
                    };
                    cs.push((c, a));
                    if !self.eat(&Tok::Bar) {
                        break;
                    }
                }
                self.expect(&Tok::RBrack)?;
                Ok(Rc::new(Type::Variant(cs)))
            }
            Tok::Ident(s) if is_upper(&s) => {
                self.bump();
                if self.tys.iter().rev().any(|x| **x == *s) {
                    return Ok(Type::var(&s));
                }
                let Some(def) = self.env.types.get(s.as_str()).cloned() else {
                    return Err(ParseError::Unbound { pos, name: s });
                };
                self.expand(&def, pos)
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && self.peek_at(1) == &Tok::Dot => {
                self.bump();
                self.bump();
                let h = self.var_term(&s, pos)?;
                let x = self.upper("an existential name")?;
                Ok(Rc::new(Type::Dot(h, x)))
            }
            _ => Err(self.error("a type")),
        }
    }

    fn expand(&mut self, def: &TypeDef, pos: Pos) -> Result<Ty, ParseError> {
        let mut tys = Vec::new();
        let mut ords = Vec::new();
        if !def.params.is_empty() {
            self.expect(&Tok::LParen)?;
            for (k, p) in def.params.iter().enumerate() {
                if k > 0 {
                    self.expect(&Tok::Comma)?;
                }
                match p {
                    Param::Type(x) => tys.push((x.clone(), self.ty()?)),
                    Param::Ord(a) => ords.push((a.clone(), self.ord()?)),
                }
            }
            self.expect(&Tok::RParen)?;
        } else if self.peek() == &Tok::LParen && self.peek_at(1) == &Tok::RParen {
            return Err(ParseError::syntax(
                pos,
                format!("{} takes no parameters", def.name),
            ));
        }
        // Simultaneous substitution through fresh intermediate names.
        let mut t = def.body.clone();
        let mut renamed = Vec::new();
        for (x, _) in &tys {
            let tmp = self.fresh_name(x);
            t = subst_type(&t, x, &Type::var(&tmp));
            renamed.push(tmp);
        }
        for ((_, a), tmp) in tys.iter().zip(&renamed) {
            t = subst_type(&t, tmp, a);
        }
        for (a, o) in &ords {
            t = subst_ord_in_type(&t, a, o);
        }
        Ok(t)
    }

    fn fresh_name(&mut self, base: &str) -> Name {
        self.fresh += 1;
        format!("{}#{}", base, self.fresh).into()
    }

    // -- terms -------------------------------------------------------------

    fn var_term(&self, x: &str, pos: Pos) -> Result<Tm, ParseError> {
        if self.terms.iter().any(|y| **y == *x) {
            return Ok(Term::at(TermKind::Var(x.into()), Some(pos)));
        }
        match self.env.vals.get(x) {
            Some(v) => Ok(Term::at(TermKind::Global(v.global.clone()), Some(pos))),
            None => Err(ParseError::Unbound {
                pos,
                name: x.into(),
            }),
        }
    }

    fn with_term_vars<T>(
        &mut self,
        xs: &[Name],
        f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        let n = self.terms.len();
        self.terms.extend(xs.iter().cloned());
        let r = f(self);
        self.terms.truncate(n);
        r
    }

    fn is_fix_kw(&self) -> bool {
        (self.is_kw("fix") || self.is_kw("Y"))
            && matches!(self.peek_at(1), Tok::Ident(s) if !is_upper(s))
            && self.peek_at(2) == &Tok::Dot
    }

    pub fn term(&mut self) -> Result<Tm, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Lambda => {
                self.bump();
                let mut binders = Vec::new();
                loop {
                    match self.peek() {
                        Tok::LParen => {
                            self.bump();
                            let x = self.binder()?;
                            self.expect(&Tok::Colon)?;
                            let a = self.ty()?;
                            self.expect(&Tok::RParen)?;
                            binders.push((x, Some(a), self.pos()));
                        }
                        Tok::Dot => break,
                        _ => {
                            let p = self.pos();
                            binders.push((self.binder()?, None, p));
                        }
                    }
                }
                self.bump();
                let names: Vec<Name> = binders.iter().map(|b| b.0.clone()).collect();
                let mut body = self.with_term_vars(&names, |p| p.term())?;
                for (k, (x, a, p)) in binders.into_iter().enumerate().rev() {
                    let at = if k == 0 { pos.clone() } else { p };
                    body = Term::at(TermKind::Lam(x, a, body), Some(at));
                }
                Ok(body)
            }
            Tok::BigLambda => {
                self.bump();
                let a = self.lower("an ordinal name")?;
                self.expect(&Tok::Dot)?;
                self.ords.push(a.clone());
                let body = self.term();
                self.ords.pop();
                Ok(Term::at(TermKind::OrdAbs(a, body?), Some(pos)))
            }
            _ if self.is_fix_kw() => {
                self.bump();
                let x = self.lower("a variable")?;
                self.expect(&Tok::Dot)?;
                let body = self.with_term_vars(std::slice::from_ref(&x), |p| p.term())?;
                Ok(Term::at(TermKind::Fix(x, body), Some(pos)))
            }
            Tok::Ident(s) if s == "case" => {
                self.bump();
                let scrut = self.term()?;
                self.expect_kw("of")?;
                let mut branches = Vec::new();
                self.eat(&Tok::Bar);
                loop {
                    branches.push(self.branch()?);
                    if !self.eat(&Tok::Bar) {
                        break;
                    }
                }
                Ok(Term::at(TermKind::Case(scrut, branches), Some(pos)))
            }
            Tok::Ident(s) if s == "let" => {
                self.bump();
                if matches!(self.peek(), Tok::Ident(s) if is_upper(s)) {
                    let mut xs = Vec::new();
                    while matches!(self.peek(), Tok::Ident(s) if is_upper(s)) {
                        xs.push(self.upper("a type name")?);
                    }
                    self.expect_kw("such")?;
                    self.expect_kw("that")?;
                    let n = self.tys.len();
                    self.tys.extend(xs.iter().cloned());
                    let r = (|| {
                        let s = self.app()?;
                        self.expect(&Tok::Colon)?;
                        let a = self.ty()?;
                        self.expect_kw("in")?;
                        let u = self.term()?;
                        Ok((s, a, u))
                    })();
                    self.tys.truncate(n);
                    let (s, a, u) = r?;
                    return Ok(Term::at(TermKind::TypeLet(xs, s, a, u), Some(pos)));
                }
                let x = self.binder()?;
                let ann = if self.eat(&Tok::Colon) {
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(&Tok::Eq)?;
                let mut t = self.term()?;
                if let Some(a) = ann {
                    let p = t.pos.clone();
                    t = Term::at(TermKind::Annot(t, a), p);
                }
                self.expect_kw("in")?;
                let u = self.with_term_vars(std::slice::from_ref(&x), |p| p.term())?;
                let lam = Term::at(TermKind::Lam(x, None, u), Some(pos.clone()));
                Ok(Term::at(TermKind::App(lam, t), Some(pos)))
            }
            _ => self.app(),
        }
    }

    fn branch(&mut self) -> Result<Branch, ParseError> {
        let pos = self.pos();
        let ctor = self.upper("a constructor")?;
        let mut pair = None;
        let var = match self.peek() {
            Tok::Arrow => Name::from("_"),
            Tok::LParen => {
                self.bump();
                let a = self.binder()?;
                self.expect(&Tok::Comma)?;
                let b = self.binder()?;
                self.expect(&Tok::RParen)?;
                pair = Some((a, b));
                self.fresh_name("p")
            }
            _ => self.binder()?,
        };
        self.expect(&Tok::Arrow)?;
        let body = match &pair {
            None => self.with_term_vars(std::slice::from_ref(&var), |p| p.term())?,
            Some((a, b)) => {
                let body = self.with_term_vars(&[a.clone(), b.clone()], |p| p.term())?;
                let v = Term::at(TermKind::Var(var.clone()), Some(pos.clone()));
                let fst = Term::at(TermKind::Proj(v.clone(), "fst".into()), Some(pos.clone()));
                let snd = Term::at(TermKind::Proj(v, "snd".into()), Some(pos.clone()));
                let body = if &**b == "_" {
                    body
                } else {
                    subst_term(&body, b, &snd)
                };
                if &**a == "_" {
                    body
                } else {
                    subst_term(&body, a, &fst)
                }
            }
        };
        Ok(Branch {
            ctor,
            var,
            body,
            pos: Some(pos),
        })
    }

    fn starts_arg(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::LBrace => true,
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) && !self.is_fix_kw(),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Tm, ParseError> {
        let pos = self.pos();
        let mut head = match self.peek().clone() {
            Tok::Ident(c) if is_upper(&c) && !self.is_fix_kw() => {
                self.bump();
                let payload = if self.starts_arg() {
                    self.arg()?
                } else {
                    Term::at(TermKind::Record(Vec::new()), Some(pos.clone()))
                };
                Term::at(
                    TermKind::Cons(c.as_str().into(), payload),
                    Some(pos.clone()),
                )
            }
            _ => self.arg()?,
        };
        while self.starts_arg() {
            let a = self.arg()?;
            head = Term::at(TermKind::App(head, a), Some(pos.clone()));
        }
        Ok(head)
    }

    fn arg(&mut self) -> Result<Tm, ParseError> {
        let mut t = self.arg_atom()?;
        while self.peek() == &Tok::Dot && matches!(self.peek_at(1), Tok::Ident(s) if !is_upper(s)) {
            let pos = self.pos();
            self.bump();
            let l = self.lower("a field name")?;
            t = Term::at(TermKind::Proj(t, l), Some(pos));
        }
        Ok(t)
    }

    fn arg_atom(&mut self) -> Result<Tm, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(c) if is_upper(&c) => {
                self.bump();
                Ok(Term::at(
                    TermKind::Cons(
                        c.as_str().into(),
                        Term::at(TermKind::Record(Vec::new()), Some(pos.clone())),
                    ),
                    Some(pos),
                ))
            }
            Tok::Ident(x) if !KEYWORDS.contains(&x.as_str()) => {
                self.bump();
                self.var_term(&x, pos)
            }
            Tok::LBrace => {
                self.bump();
                let mut fs = Vec::new();
                while self.peek() != &Tok::RBrace {
                    let l = self.lower("a field name")?;
                    self.expect(&Tok::Eq)?;
                    fs.push((l, self.term()?));
                    if !self.eat(&Tok::Semi) {
                        break;
                    }
                }
                self.expect(&Tok::RBrace)?;
                Ok(Term::at(TermKind::Record(fs), Some(pos)))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Term::at(TermKind::Record(Vec::new()), Some(pos)));
                }
                let t = self.term()?;
                let r = match self.peek() {
                    Tok::Colon => {
                        self.bump();
                        let a = self.ty()?;
                        Term::at(TermKind::Annot(t, a), Some(pos))
                    }
                    Tok::Comma => {
                        self.bump();
                        let u = self.term()?;
                        Term::at(
                            TermKind::Record(vec![("fst".into(), t), ("snd".into(), u)]),
                            Some(pos),
                        )
                    }
                    _ => t,
                };
                self.expect(&Tok::RParen)?;
                Ok(r)
            }
            _ => Err(self.error("a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use szm_core::display::show;
    use szm_core::syntax::alpha_eq_ty;

    #[test]
    fn identity() {
        let f = parse_program("t.szm", "val id : forall X. X -> X = fun x. x").unwrap();
        let v = f.val("id").unwrap();
        assert_eq!(show(&**v.ty.as_ref().unwrap()), "∀X. X → X");
        assert_eq!(show(&*v.term), "λx. x");
    }

    #[test]
    fn unclosed_paren() {
        let e = parse_program("t.szm", "val x = (").unwrap_err();
        assert_eq!((e.pos().line, e.pos().col), (1, 9));
    }

    #[test]
    fn list_expansion() {
        let src = "type List(A, a) = mu_a L. [Nil | Cons of A × L]\n\
                   type T = forall A B a. (A -> B) -> List(A, a) -> List(B, a)";
        let f = parse_program("t.szm", src).unwrap();
        let t = parse_type(&f.env, "t", "T").unwrap();
        assert_eq!(
            show(&*t),
            "∀A. ∀B. ∀o a. (A → B) → (μ_a L. [Nil | Cons of {fst : A; snd : L}]) → μ_a L. [Nil | Cons of {fst : B; snd : L}]"
        );
    }

    #[test]
    fn expansion_is_simultaneous() {
        let f = parse_program("t", "type P(A, B) = A -> B").unwrap();
        let t = parse_type(&f.env, "t", "forall A B. P(B, A)").unwrap();
        let expected = parse_type(&f.env, "t", "forall A B. B -> A").unwrap();
        assert!(alpha_eq_ty(&t, &expected));
    }

    #[test]
    fn unbound_names() {
        assert!(matches!(
            parse_program("t", "val f = fun x. y"),
            Err(ParseError::Unbound { .. })
        ));
        assert!(matches!(
            parse_program("t", "val f : Nat = fun x. x"),
            Err(ParseError::Unbound { .. })
        ));
    }

    #[test]
    fn case_and_constructors() {
        let f = parse_program("t", "val f = fun n. case n of Z -> Z | S p -> S (S p)").unwrap();
        assert_eq!(
            show(&*f.val("f").unwrap().term),
            "λn. case n of | Z _ → Z | S p → S (S p)"
        );
    }

    #[test]
    fn dot_types() {
        let src = "type Iso = exists T U. {f : T -> U; g : U -> T}\n\
                   val h : Iso = {f = fun x. x; g = fun x. x}\n\
                   val k = fun (x : h.T). x";
        let f = parse_program("t", src).unwrap();
        assert!(show(&*f.val("k").unwrap().term).starts_with("λ(x : h.T)"));
    }
}
