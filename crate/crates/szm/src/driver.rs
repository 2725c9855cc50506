//! Checking and running whole source files.

use std::fmt::Write as _;
use std::path::Path;

use szm_core::eval::{EvalError, Evaluator};
use szm_core::session::Derivation;
use szm_core::{CheckError, Config, Session};

use crate::parser::{parse_program, Item, ParseError, SourceFile};

#[derive(Clone, Debug)]
pub struct Options {
    pub step_budget: usize,
    pub unroll_depth: usize,
    pub fuel: usize,
    /// Values to evaluate after checking, by name.
    pub eval: Vec<String>,
    pub verbose: bool,
}

impl Default for Options {
    fn default() -> Options {
        let c = Config::default();
        Options {
            step_budget: c.step_budget,
            unroll_depth: c.unroll_depth,
            fuel: 1_000_000,
            eval: Vec::new(),
            verbose: false,
        }
    }
}

impl Options {
    pub fn config(&self) -> Config {
        Config {
            step_budget: self.step_budget,
            unroll_depth: self.unroll_depth,
        }
    }
}

pub struct ValReport {
    pub name: String,
    pub result: Result<Derivation, CheckError>,
}

pub struct FileReport {
    pub source: SourceFile,
    pub vals: Vec<ValReport>,
    /// `(what, result)` for every `eval` item and requested value.
    pub evals: Vec<(String, Result<String, EvalError>)>,
}

impl FileReport {
    pub fn accepted(&self) -> bool {
        self.vals.iter().all(|v| v.result.is_ok())
    }

    pub fn derivation(&self, name: &str) -> Option<&Derivation> {
        self.vals
            .iter()
            .find(|v| v.name == name)
            .and_then(|v| v.result.as_ref().ok())
    }

    pub fn error(&self, name: &str) -> Option<&CheckError> {
        self.vals
            .iter()
            .find(|v| v.name == name)
            .and_then(|v| v.result.as_ref().err())
    }
}

/// Type-checks every value of a program; evaluation only happens when all
/// of them are accepted.
pub fn check_source(file: &str, text: &str, opts: &Options) -> Result<FileReport, ParseError> {
    let source = parse_program(file, text)?;
    let mut session = Session::new(opts.config());
    let mut vals = Vec::new();
    for v in source.vals() {
        let ty = match &v.ty {
            Some(a) => a.clone(),
            None => session.store.fresh_ty(Some(v.pos.clone())),
        };
        let result = session.check(&v.term, &ty);
        vals.push(ValReport {
            name: v.name.to_string(),
            result,
        });
    }
    let mut report = FileReport {
        source,
        vals,
        evals: Vec::new(),
    };
    if report.accepted() {
        let mut evals = Vec::new();
        for item in &report.source.items {
            if let Item::Eval { term, .. } = item {
                evals.push((szm_core::display::show(&**term), run(term, opts.fuel)));
            }
        }
        for name in &opts.eval {
            let r = match report.source.val(name) {
                Some(v) => run(&v.term, opts.fuel),
                None => Err(EvalError::Stuck(format!("no value named {}", name))),
            };
            evals.push((name.clone(), r));
        }
        report.evals = evals;
    }
    Ok(report)
}

fn run(t: &szm_core::Tm, fuel: usize) -> Result<String, EvalError> {
    Evaluator::new(fuel).eval_closed(t).map(|v| v.to_string())
}

/// Text output and exit code for one file.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
    pub latex: Vec<(String, String)>,
}

pub fn run_file(path: &Path, opts: &Options, want_latex: bool) -> Outcome {
    let mut o = Outcome {
        stdout: String::new(),
        stderr: String::new(),
        code: 0,
        latex: Vec::new(),
    };
    let name = path.display().to_string();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(o.stderr, "{}: {}", name, e);
            o.code = 2;
            return o;
        }
    };
    let report = match check_source(&name, &text, opts) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(o.stderr, "{}", e);
            o.code = 2;
            return o;
        }
    };
    for v in &report.vals {
        match &v.result {
            Ok(d) => {
                if opts.verbose {
                    let _ = writeln!(
                        o.stdout,
                        "{}: {} accepted ({} steps, {} hypotheses, {} stages)",
                        name,
                        v.name,
                        d.steps,
                        d.hypotheses.len(),
                        d.stages
                    );
                }
                if want_latex {
                    o.latex.push((
                        v.name.clone(),
                        crate::latex::document_body(&v.name, &d.tree),
                    ));
                }
            }
            Err(e) => {
                let _ = writeln!(o.stderr, "{}: in {}: {}", name, v.name, e);
                o.code = 1;
            }
        }
    }
    for (what, r) in &report.evals {
        match r {
            Ok(v) => {
                let _ = writeln!(o.stdout, "{} = {}", what, v);
            }
            Err(e) => {
                let _ = writeln!(o.stderr, "{}: eval {}: {}", name, what, e);
                o.code = o.code.max(1);
            }
        }
    }
    if o.code == 0 && opts.verbose {
        let _ = writeln!(o.stdout, "{}: ok", name);
    }
    o
}
