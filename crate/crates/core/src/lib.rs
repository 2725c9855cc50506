//! Type checking for a Curry-style System F with records, polymorphic
//! variants, existentials and sized (co-)inductive types.
//!
//! Subtyping is decided by a syntax-directed semi-algorithm over *local*
//! subtyping judgments `γ ⊢ t : A ⊂ B`. Free variables and quantifier
//! witnesses are replaced by choice operators, so every judgment handled by
//! the checker is about a closed term. Inductive and coinductive types carry
//! syntactic ordinals, and both subtyping and recursive definitions are
//! proved with circular proofs whose well-foundedness is checked a
//! posteriori with the size-change principle.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file handling, the
//! command line driver and LaTeX output live in the `szm` crate.
#![no_std]
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod display;
pub mod error;
pub mod eval;
pub mod ordinal;
pub mod proof;
pub mod scp;
pub mod session;
pub mod subtype;
pub mod syntax;
pub mod typecheck;
pub mod uvar;

pub use error::{CheckError, ClashKind};
pub use ordinal::{Ordinal, PosCtx};
pub use proof::{Judgment, ProofTree, Rule};
pub use session::{Config, Session};
pub use syntax::{Name, Pos, Term, TermKind, Tm, Ty, Type};
