//! Type errors.

use alloc::string::String;
use core::fmt;

use crate::proof::Judgment;
use crate::scp::SCMatrix;
use crate::syntax::{Name, Pos, Tm, Ty};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClashKind {
    /// No rule applies to the pair of type constructors.
    Mismatch,
    OccursCheck,
    MissingField(Name),
    MissingConstructor(Name),
    /// Record and variant constraints on the same unification variable.
    KindClash,
    /// A sized type cannot be unfolded because its size may be zero.
    Blocked,
    NoPositiveSolution,
    /// `h.T` where the type of `h` has no existential binder `T`.
    UnknownDot(Name),
    /// A term that cannot be checked (for instance a free variable).
    Malformed(String),
}

impl fmt::Display for ClashKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClashKind::Mismatch => f.write_str("incompatible types"),
            ClashKind::OccursCheck => f.write_str("cyclic type (occurs check)"),
            ClashKind::MissingField(l) => write!(f, "missing field {}", l),
            ClashKind::MissingConstructor(c) => write!(f, "unexpected constructor {}", c),
            ClashKind::KindClash => f.write_str("used both as a record and as a variant"),
            ClashKind::Blocked => f.write_str("size may be zero, cannot unfold"),
            ClashKind::NoPositiveSolution => f.write_str("no positive size"),
            ClashKind::UnknownDot(x) => write!(f, "no existential named {}", x),
            ClashKind::Malformed(m) => f.write_str(m),
        }
    }
}

#[derive(Clone, Debug)]
pub enum CheckError {
    /// A judgment with no applicable rule. `term` has type `has` and is used
    /// with type `used`; `typing` is the enclosing typing judgment.
    Clash {
        term: Tm,
        has: Ty,
        used: Ty,
        kind: ClashKind,
        pos: Option<Pos>,
        typing: Option<Judgment>,
    },
    /// The step budget ran out inside a subtyping search.
    BudgetExhausted {
        typing: Option<Judgment>,
        subtyping: Option<Judgment>,
    },
    /// Too many breadth-first stages for fixpoints.
    UnrollDepthExceeded { term: Tm, depth: usize },
    /// The circular proof has a loop without strict decrease.
    NotWellFounded {
        hypothesis: usize,
        matrix: SCMatrix,
        typing: Option<Judgment>,
    },
}

impl CheckError {
    pub fn is_clash(&self) -> bool {
        matches!(self, CheckError::Clash { .. })
    }

    pub fn clash_kind(&self) -> Option<&ClashKind> {
        match self {
            CheckError::Clash { kind, .. } => Some(kind),
            _ => None,
        }
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Clash {
                term,
                has,
                used,
                kind,
                pos,
                typing,
            } => {
                if let Some(p) = pos {
                    write!(f, "{}: ", p)?;
                }
                write!(
                    f,
                    "{} has type {} and is used with type {} ({})",
                    term, has, used, kind
                )?;
                if let Some(j) = typing {
                    write!(f, "\n  while checking {}", j)?;
                }
                Ok(())
            }
            CheckError::BudgetExhausted { typing, subtyping } => {
                f.write_str("interrupted: step budget exhausted")?;
                match typing {
                    Some(j) => write!(f, "\n  last judgment: {}", j)?,
                    None => f.write_str("\n  last judgment: <none>")?,
                }
                if let Some(s) = subtyping {
                    write!(f, "\n  failing subtyping: {}", s)?;
                }
                Ok(())
            }
            CheckError::UnrollDepthExceeded { term, depth } => {
                write!(f, "fixpoint {} still open after {} unrollings", term, depth)
            }
            CheckError::NotWellFounded {
                hypothesis,
                matrix,
                typing,
            } => {
                write!(
                    f,
                    "circular proof is not well-founded: hypothesis {} loops without decrease",
                    hypothesis + 1
                )?;
                if matrix.rows() > 0 {
                    write!(f, "\n  size-change matrix:")?;
                    for line in alloc::format!("{}", matrix).lines() {
                        write!(f, "\n    {}", line)?;
                    }
                }
                if let Some(j) = typing {
                    write!(f, "\n  while checking {}", j)?;
                }
                Ok(())
            }
        }
    }
}
