//! Call-by-value evaluation with environments.
//!
//! Types are erased. Fixpoints are unfolded lazily when the variable they
//! bind is looked up, so a fixpoint only loops if its body does.

use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Name, TermKind, Tm};

#[derive(Clone, Debug)]
pub enum Value {
    Closure(Env, Name, Tm),
    Record(Vec<(Name, Rc<Value>)>),
    Cons(Name, Rc<Value>),
}

#[derive(Clone, Debug, Default)]
pub struct Env(Option<Rc<Binding>>);

#[derive(Debug)]
struct Binding {
    name: Name,
    entry: Entry,
    next: Env,
}

#[derive(Debug)]
enum Entry {
    Value(Rc<Value>),
    /// `fix x. t` evaluated in the environment of its definition.
    Rec(Env, Tm),
}

impl Env {
    fn bind(&self, name: &Name, entry: Entry) -> Env {
        Env(Some(Rc::new(Binding {
            name: name.clone(),
            entry,
            next: self.clone(),
        })))
    }

    fn find(&self, x: &str) -> Option<&Entry> {
        let mut cur = &self.0;
        while let Some(b) = cur {
            if &*b.name == x {
                return Some(&b.entry);
            }
            cur = &b.next.0;
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// No rule applies, for instance a projection on a function.
    Stuck(String),
    FuelExhausted,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Stuck(m) => write!(f, "evaluation stuck: {}", m),
            EvalError::FuelExhausted => f.write_str("evaluation ran out of fuel"),
        }
    }
}

pub struct Evaluator {
    fuel: usize,
    pub steps: usize,
}

impl Evaluator {
    pub fn new(fuel: usize) -> Evaluator {
        Evaluator { fuel, steps: 0 }
    }

    pub fn eval_closed(&mut self, t: &Tm) -> Result<Rc<Value>, EvalError> {
        self.eval(&Env::default(), t)
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::FuelExhausted);
        }
        self.fuel -= 1;
        self.steps += 1;
        Ok(())
    }

    pub fn eval(&mut self, env: &Env, t: &Tm) -> Result<Rc<Value>, EvalError> {
        self.tick()?;
        match &t.kind {
            TermKind::Var(x) => match env.find(x) {
                Some(Entry::Value(v)) => Ok(v.clone()),
                Some(Entry::Rec(e, fix)) => {
                    let (e, fix) = (e.clone(), fix.clone());
                    self.eval(&e, &fix)
                }
                None => Err(EvalError::Stuck(alloc::format!("unbound variable {}", x))),
            },
            TermKind::Lam(x, _, b) => {
                Ok(Rc::new(Value::Closure(env.clone(), x.clone(), b.clone())))
            }
            TermKind::App(f, a) => {
                let fv = self.eval(env, f)?;
                let av = self.eval(env, a)?;
                self.apply(&fv, av)
            }
            TermKind::Record(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                for (l, u) in fs {
                    out.push((l.clone(), self.eval(env, u)?));
                }
                Ok(Rc::new(Value::Record(out)))
            }
            TermKind::Proj(u, l) => match &*self.eval(env, u)? {
                Value::Record(fs) => fs
                    .iter()
                    .find(|(m, _)| m == l)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| EvalError::Stuck(alloc::format!("missing field {}", l))),
                v => Err(EvalError::Stuck(alloc::format!(
                    "projection .{} on {}",
                    l,
                    v
                ))),
            },
            TermKind::Cons(c, u) => Ok(Rc::new(Value::Cons(c.clone(), self.eval(env, u)?))),
            TermKind::Case(s, bs) => match &*self.eval(env, s)? {
                Value::Cons(c, v) => {
                    let b = bs
                        .iter()
                        .find(|b| &b.ctor == c)
                        .ok_or_else(|| EvalError::Stuck(alloc::format!("no branch for {}", c)))?;
                    self.eval(&env.bind(&b.var, Entry::Value(v.clone())), &b.body)
                }
                v => Err(EvalError::Stuck(alloc::format!("case on {}", v))),
            },
            TermKind::Fix(x, b) => {
                let env2 = env.bind(x, Entry::Rec(env.clone(), t.clone()));
                self.eval(&env2, b)
            }
            TermKind::Annot(u, _) | TermKind::OrdAbs(_, u) | TermKind::TypeLet(_, _, _, u) => {
                self.eval(env, u)
            }
            TermKind::Global(g) => self.eval(&Env::default(), &g.body),
            TermKind::Eps(_) => Err(EvalError::Stuck(String::from("choice operator"))),
        }
    }

    pub fn apply(&mut self, f: &Rc<Value>, a: Rc<Value>) -> Result<Rc<Value>, EvalError> {
        match &**f {
            Value::Closure(env, x, b) => self.eval(&env.bind(x, Entry::Value(a)), b),
            v => Err(EvalError::Stuck(alloc::format!("application of {}", v))),
        }
    }
}

fn fmt_value(v: &Value, nested: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match v {
        Value::Closure(..) => f.write_str("<fun>"),
        Value::Record(fs) => {
            f.write_str("{")?;
            for (i, (l, v)) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{} = ", l)?;
                fmt_value(v, false, f)?;
            }
            f.write_str("}")
        }
        Value::Cons(c, p) => {
            if matches!(&**p, Value::Record(fs) if fs.is_empty()) {
                return f.write_str(c);
            }
            if nested {
                f.write_str("(")?;
            }
            write!(f, "{} ", c)?;
            fmt_value(p, true, f)?;
            if nested {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_value(self, false, f)
    }
}
