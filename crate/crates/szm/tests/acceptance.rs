//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status when any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::rc::Rc;

use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, RngAlgorithm, TestRng, TestRunner};
use szm::{check_source, parse_program, parse_term, parse_type, Options};
use szm_core::eval::Evaluator;
use szm_core::scp::{CallGraph, SCEntry, SCMatrix};
use szm_core::{CheckError, ClashKind, Config, Ordinal, Session, TermKind, Tm, Ty, Type};

type Outcome = Result<(), String>;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap_or_else(|e| panic!("{}: {}", name, e))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = PtConfig {
        cases,
        failure_persistence: None,
        ..PtConfig::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

const CORPUS: &[&str] = &[
    "church.szm",
    "scott.szm",
    "nat.szm",
    "lists.szm",
    "streams.szm",
    "modules.szm",
];

// ---------------------------------------------------------------------------
// 1

fn corpus_acceptance() -> Outcome {
    let required: &[(&str, &[&str])] = &[
        ("church.szm", &["pred_c", "rec_c", "leq_c"]),
        ("scott.szm", &["pred", "rec_s"]),
        ("lists.szm", &["map", "partition", "quicksort"]),
        ("streams.szm", &["head", "tail", "from", "take"]),
    ];
    for file in CORPUS {
        let r = check_source(file, &read(file), &Options::default()).map_err(|e| e.to_string())?;
        for v in &r.vals {
            if let Err(e) = &v.result {
                return Err(format!("{}: {} rejected: {}", file, v.name, e));
            }
        }
        if let Some((_, names)) = required.iter().find(|(f, _)| f == file) {
            for n in names.iter() {
                ensure(r.derivation(n).is_some(), || {
                    format!("{}: {} missing", file, n)
                })?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 2

const TYPES: &str = "
type NS = mu N. forall X. (N -> X) -> X -> X
type U(P) = forall Y. Y -> NS -> P
type T(P) = forall Y. (Y -> U(P) -> Y -> NS -> P) -> Y -> NS -> P
type N' = forall P. T(P) -> U(P) -> T(P) -> NS -> P
type Nat = mu N. [Z | S of N]
type Str = nu S. {hd : Nat; tl : S}
type Tree = mu T. [Leaf | Node of T × T]
";

fn subtyping_suite() -> Outcome {
    let env = parse_program("types", TYPES)
        .map_err(|e| e.to_string())?
        .env;
    let cases = [
        (
            "forall X. X -> {l : X}",
            "(forall X. X) -> forall X. {l : X}",
        ),
        (
            "forall X. (X -> X) -> [C of X]",
            "(forall X. X -> X) -> forall X. [C of X]",
        ),
        (
            "mu X. nu Y. [L of X | R of Y]",
            "nu Y. mu X. [L of X | R of Y]",
        ),
        ("mu X. nu Y. {a : X; b : Y}", "nu Y. mu X. {a : X; b : Y}"),
        ("NS", "N'"),
        ("[Z | S of Nat]", "Nat"),
        ("[Leaf | Node of Tree × Tree]", "Tree"),
        ("Str", "{hd : Nat; tl : Str}"),
    ];
    for (a, b) in cases {
        let ta = parse_type(&env, "a", a).map_err(|e| e.to_string())?;
        let tb = parse_type(&env, "b", b).map_err(|e| e.to_string())?;
        Session::default()
            .subtype(&ta, &tb)
            .map_err(|e| format!("{} ⊂ {}: {}", a, b, e))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 3

fn rejection_suite() -> Outcome {
    let err = |file: &str, val: &str| -> Result<CheckError, String> {
        let r = check_source(file, &read(file), &Options::default()).map_err(|e| e.to_string())?;
        r.error(val)
            .cloned()
            .ok_or_else(|| format!("{}: {} accepted", file, val))
    };
    match err("rejected/fix_self.szm", "y")? {
        CheckError::NotWellFounded { matrix, .. } => ensure(
            matrix.compose(&matrix) == matrix && !matrix.has_strict_diagonal(),
            || {
                format!(
                    "fix_self: loop matrix {} is not an idempotent without decrease",
                    matrix
                )
            },
        )?,
        e => return Err(format!("fix_self: {}", e)),
    }
    let e = err("rejected/omega.szm", "omega")?;
    ensure(e.clash_kind() == Some(&ClashKind::OccursCheck), || {
        format!("omega: {}", e)
    })?;
    let e = err("rejected/clash.szm", "c")?;
    let msg = e.to_string();
    ensure(
        e.clash_kind() == Some(&ClashKind::Mismatch)
            && msg.contains("λx. x has type")
            && msg.contains("→")
            && msg.contains("and is used with type {fst : {}; snd : {}}"),
        || format!("clash: {}", msg),
    )?;
    let e = err("rejected/blocked.szm", "up")?;
    ensure(e.clash_kind() == Some(&ClashKind::Blocked), || {
        format!("blocked: {}", e)
    })
}

// ---------------------------------------------------------------------------
// 4

fn multiple_unrolling() -> Outcome {
    let r = check_source("nat.szm", &read("nat.szm"), &Options::default())
        .map_err(|e| e.to_string())?;
    let d = r.derivation("id").ok_or("id rejected")?;
    ensure(d.hypotheses.len() >= 2, || {
        format!("{} hypotheses", d.hypotheses.len())
    })?;
    let hits = d.hits();
    ensure(
        hits.iter().any(|(_, m)| {
            (0..m.rows()).any(|i| (0..m.cols()).any(|j| m.get(i, j) == SCEntry::Less))
        }),
        || {
            format!(
                "no hit with a strict edge among {:?}",
                hits.iter()
                    .map(|(k, m)| format!("{}:{}", k, m))
                    .collect::<Vec<_>>()
            )
        },
    )
}

// ---------------------------------------------------------------------------
// 5

const ENTRIES: [SCEntry; 3] = [SCEntry::Unknown, SCEntry::Leq, SCEntry::Less];

fn all_matrices(rows: usize, cols: usize) -> Vec<SCMatrix> {
    let n = rows * cols;
    (0..3usize.pow(n as u32))
        .map(|mut code| {
            let mut m = SCMatrix::new(rows, cols);
            for k in 0..n {
                m.set(k / cols, k % cols, ENTRIES[code % 3]);
                code /= 3;
            }
            m
        })
        .collect()
}

/// Relation matrices as plain integers: -1 unknown, 0 non-increasing,
/// 1 decreasing.
type Rel = Vec<Vec<i8>>;

fn to_rel(m: &SCMatrix) -> Rel {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| match m.get(i, j) {
                    SCEntry::Unknown => -1,
                    SCEntry::Leq => 0,
                    SCEntry::Less => 1,
                })
                .collect()
        })
        .collect()
}

fn rel_mul(a: &Rel, b: &Rel, cols: usize) -> Rel {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|k| {
                    let mut best = -1;
                    for (j, &x) in row.iter().enumerate() {
                        let y = b[j][k];
                        if x >= 0 && y >= 0 {
                            best = best.max(x.max(y));
                        }
                    }
                    best
                })
                .collect()
        })
        .collect()
}

/// Enumerates every path matrix from every node, and for every loop takes
/// the idempotent power of its matrix: the graph terminates iff each of them
/// decreases on the diagonal.
fn descent_oracle(arities: &[usize], edges: &[(usize, usize, Rel)]) -> bool {
    let mut paths: BTreeSet<(usize, usize, Rel)> = BTreeSet::new();
    let mut todo: Vec<(usize, usize, Rel)> = edges.to_vec();
    while let Some(p) = todo.pop() {
        if !paths.insert(p.clone()) {
            continue;
        }
        let (s, d, m) = p;
        for (s2, d2, m2) in edges {
            if *s2 == d {
                todo.push((s, *d2, rel_mul(&m, m2, arities[*d2])));
            }
        }
    }
    paths.iter().filter(|(s, d, _)| s == d).all(|(s, _, m)| {
        let n = arities[*s];
        let mut p = m.clone();
        let mut k = 0;
        while rel_mul(&p, &p, n) != p {
            p = rel_mul(&p, m, n);
            k += 1;
            assert!(k < 1000, "no idempotent power");
        }
        (0..n).any(|i| p[i][i] == 1)
    })
}

type RawGraph = (Vec<usize>, Vec<(usize, usize, Vec<u8>)>);

fn graph_strategy() -> impl Strategy<Value = RawGraph> {
    (
        prop::collection::vec(0usize..=2, 1..=3),
        prop::collection::vec(
            (0usize..3, 0usize..3, prop::collection::vec(0u8..3, 4)),
            0..=4,
        ),
    )
}

fn build_graph(
    arities: &[usize],
    raw: &[(usize, usize, Vec<u8>)],
) -> (CallGraph, Vec<(usize, usize, Rel)>) {
    let mut g = CallGraph::new();
    for a in arities {
        g.add_node(*a);
    }
    let mut rels = Vec::new();
    for (s, d, codes) in raw {
        let (s, d) = (s % arities.len(), d % arities.len());
        let mut m = SCMatrix::new(arities[s], arities[d]);
        for i in 0..arities[s] {
            for j in 0..arities[d] {
                m.set(i, j, ENTRIES[codes[i * 2 + j] as usize]);
            }
        }
        rels.push((s, d, to_rel(&m)));
        g.add_edge(s, d, m);
    }
    (g, rels)
}

fn scp_kernel() -> Outcome {
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                for d in 1..=2 {
                    let (xs, ys, zs) = (all_matrices(a, b), all_matrices(b, c), all_matrices(c, d));
                    for x in &xs {
                        for y in &ys {
                            let xy = x.compose(y);
                            for z in &zs {
                                if xy.compose(z) != x.compose(&y.compose(z)) {
                                    return Err(format!(
                                        "compose not associative on\n{}\n{}\n{}",
                                        x, y, z
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // Every single-node graph of arity 1 with up to two loops, exhaustively.
    let ms = all_matrices(1, 1);
    let mut loops: Vec<Vec<&SCMatrix>> = vec![vec![]];
    loops.extend(ms.iter().map(|m| vec![m]));
    loops.extend(ms.iter().flat_map(|m| ms.iter().map(move |n| vec![m, n])));
    for es in loops {
        let mut g = CallGraph::new();
        g.add_node(1);
        let rels: Vec<_> = es.iter().map(|m| (0, 0, to_rel(m))).collect();
        for m in &es {
            g.add_edge(0, 0, (*m).clone());
        }
        ensure(
            g.check_well_founded().is_accepted() == descent_oracle(&[1], &rels),
            || format!("disagreement on {:?}", rels),
        )?;
    }
    runner(4000)
        .run(&graph_strategy(), |(arities, raw)| {
            let (g, rels) = build_graph(&arities, &raw);
            let closure = g.saturate();
            let bound: usize = (0..arities.len())
                .flat_map(|s| (0..arities.len()).map(move |d| (s, d)))
                .map(|(s, d)| 3usize.pow((arities[s] * arities[d]) as u32))
                .sum();
            prop_assert!(closure.len() <= bound);
            prop_assert_eq!(
                g.check_well_founded().is_accepted(),
                descent_oracle(&arities, &rels)
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// 6

/// Builds a closed quantifier-free type of at most `cap` nodes from a
/// stream of choices.
fn build_type(codes: &[u8], at: &mut usize, cap: usize, bound: &mut Vec<String>) -> Ty {
    let c = codes.get(*at).copied().unwrap_or(0);
    *at += 1;
    let leaf = |bound: &Vec<String>| {
        if !bound.is_empty() && c % 3 != 0 {
            Type::var(&bound[c as usize % bound.len()])
        } else {
            Type::unit()
        }
    };
    let pair = |codes: &[u8], at: &mut usize, bound: &mut Vec<String>| {
        let a = build_type(codes, at, cap - 2, bound);
        let b = build_type(codes, at, cap - 1 - a.size(), bound);
        (a, b)
    };
    match c % 7 {
        1 if cap >= 3 => {
            let (a, b) = pair(codes, at, bound);
            Type::arrow(a, b)
        }
        2 | 3 if cap >= 2 => {
            let labels = if c % 7 == 2 { ["a", "b"] } else { ["A", "B"] };
            let fields = if cap >= 3 && c % 2 == 1 {
                let (a, b) = pair(codes, at, bound);
                vec![(labels[0], a), (labels[1], b)]
            } else {
                vec![(labels[0], build_type(codes, at, cap - 1, bound))]
            };
            if c % 7 == 2 {
                Type::record(fields)
            } else {
                Type::variant(fields)
            }
        }
        k @ (4..=6) if cap >= 2 => {
            let x = format!("X{}", bound.len());
            bound.push(x.clone());
            let body = build_type(codes, at, cap - 1, bound);
            bound.pop();
            if k % 2 == 0 {
                Type::mu(Ordinal::Inf, &x, body)
            } else {
                Type::nu(Ordinal::Inf, &x, body)
            }
        }
        _ => leaf(bound),
    }
}

fn quantifier_free_boundedness() -> Outcome {
    let ty = || {
        prop::collection::vec(any::<u8>(), 1..24)
            .prop_map(|codes| build_type(&codes, &mut 0, 12, &mut Vec::new()))
    };
    runner(2000)
        .run(&(ty(), ty()), |(a, b)| {
            prop_assert!(a.size() <= 12 && b.size() <= 12);
            let mut s = Session::default();
            let r = s.subtype(&a, &b);
            prop_assert!(
                !matches!(r, Err(CheckError::BudgetExhausted { .. })),
                "{} ⊂ {} ran out of budget",
                a,
                b
            );
            let n = s.hypotheses().len();
            prop_assert!(n <= a.size() * b.size(), "{} ⊂ {}: {} hypotheses", a, b, n);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// 7

/// Untyped terms for the reference normalizer.
#[derive(Clone, Debug)]
enum Raw {
    Var(String),
    Lam(String, Rc<Raw>),
    App(Rc<Raw>, Rc<Raw>),
    Record(Vec<(String, Rc<Raw>)>),
    Proj(Rc<Raw>, String),
    Cons(String, Rc<Raw>),
    Case(Rc<Raw>, Vec<(String, String, Rc<Raw>)>),
    Fix(String, Rc<Raw>),
}

fn erase(t: &Tm) -> Rc<Raw> {
    Rc::new(match &t.kind {
        TermKind::Var(x) => Raw::Var(x.to_string()),
        TermKind::Lam(x, _, b) => Raw::Lam(x.to_string(), erase(b)),
        TermKind::App(f, a) => Raw::App(erase(f), erase(a)),
        TermKind::Record(fs) => {
            Raw::Record(fs.iter().map(|(l, u)| (l.to_string(), erase(u))).collect())
        }
        TermKind::Proj(u, l) => Raw::Proj(erase(u), l.to_string()),
        TermKind::Cons(c, u) => Raw::Cons(c.to_string(), erase(u)),
        TermKind::Case(s, bs) => Raw::Case(
            erase(s),
            bs.iter()
                .map(|b| (b.ctor.to_string(), b.var.to_string(), erase(&b.body)))
                .collect(),
        ),
        TermKind::Fix(x, b) => Raw::Fix(x.to_string(), erase(b)),
        TermKind::Annot(u, _) | TermKind::OrdAbs(_, u) | TermKind::TypeLet(_, _, _, u) => {
            return erase(u)
        }
        TermKind::Global(g) => return erase(&g.body),
        TermKind::Eps(_) => panic!("choice operator in a program"),
    })
}

/// Substitution of a closed term, so no capture can happen.
fn subst(t: &Rc<Raw>, x: &str, u: &Rc<Raw>) -> Rc<Raw> {
    let go = |t: &Rc<Raw>| subst(t, x, u);
    match &**t {
        Raw::Var(y) if y == x => u.clone(),
        Raw::Var(_) => t.clone(),
        Raw::Lam(y, _) | Raw::Fix(y, _) if y == x => t.clone(),
        Raw::Lam(y, b) => Rc::new(Raw::Lam(y.clone(), go(b))),
        Raw::Fix(y, b) => Rc::new(Raw::Fix(y.clone(), go(b))),
        Raw::App(f, a) => Rc::new(Raw::App(go(f), go(a))),
        Raw::Record(fs) => Rc::new(Raw::Record(
            fs.iter().map(|(l, v)| (l.clone(), go(v))).collect(),
        )),
        Raw::Proj(v, l) => Rc::new(Raw::Proj(go(v), l.clone())),
        Raw::Cons(c, v) => Rc::new(Raw::Cons(c.clone(), go(v))),
        Raw::Case(s, bs) => Rc::new(Raw::Case(
            go(s),
            bs.iter()
                .map(|(c, y, b)| (c.clone(), y.clone(), if y == x { b.clone() } else { go(b) }))
                .collect(),
        )),
    }
}

/// Call-by-name weak head normal form.
fn whnf(t: &Rc<Raw>) -> Rc<Raw> {
    let mut t = t.clone();
    loop {
        t = match &*t {
            Raw::App(f, a) => match &*whnf(f) {
                Raw::Lam(x, b) => subst(b, x, a),
                other => panic!("stuck application of {:?}", other),
            },
            Raw::Proj(u, l) => match &*whnf(u) {
                Raw::Record(fs) => fs
                    .iter()
                    .find(|(m, _)| m == l)
                    .expect("missing field")
                    .1
                    .clone(),
                other => panic!("stuck projection of {:?}", other),
            },
            Raw::Case(s, bs) => match &*whnf(s) {
                Raw::Cons(c, v) => {
                    let (_, y, b) = bs.iter().find(|(d, _, _)| d == c).expect("missing branch");
                    subst(b, y, v)
                }
                other => panic!("stuck case on {:?}", other),
            },
            Raw::Fix(x, b) => subst(b, x, &t),
            _ => return t,
        }
    }
}

fn unary(t: &Rc<Raw>) -> usize {
    match &*whnf(t) {
        Raw::Cons(c, p) if c == "S" => 1 + unary(p),
        Raw::Cons(c, _) if c == "Z" => 0,
        other => panic!("not a numeral: {:?}", other),
    }
}

fn scott(n: usize) -> String {
    (0..n).fold("zero_s".to_string(), |acc, _| format!("(succ_s {})", acc))
}

fn safety_smoke() -> Outcome {
    for file in CORPUS {
        let r = check_source(file, &read(file), &Options::default()).map_err(|e| e.to_string())?;
        ensure(!r.evals.is_empty() || *file == "modules.szm", || {
            format!("{}: nothing evaluated", file)
        })?;
        for (what, res) in &r.evals {
            res.as_ref()
                .map_err(|e| format!("{}: {}: {}", file, what, e))?;
        }
    }
    let src = parse_program("scott.szm", &read("scott.szm")).map_err(|e| e.to_string())?;
    for n in 0..=10 {
        for m in 0..=10 {
            let text = format!("to_unary (add_s {} {})", scott(n), scott(m));
            let t = parse_term(&src.env, "q", &text).map_err(|e| e.to_string())?;
            let oracle = unary(&erase(&t));
            ensure(oracle == n + m, || {
                format!("oracle gives {} for {} + {}", oracle, n, m)
            })?;
            let v = Evaluator::new(1_000_000)
                .eval_closed(&t)
                .map_err(|e| e.to_string())?;
            let expected = (0..n + m)
                .fold("Z".to_string(), |acc, _| format!("S ({})", acc))
                .replace("(Z)", "Z");
            ensure(v.to_string() == expected, || {
                format!("{} + {} evaluates to {}", n, m, v)
            })?;
        }
    }
    let pred = parse_term(&src.env, "q", "pred").map_err(|e| e.to_string())?;
    let mut counts = HashMap::new();
    for n in 1..=20 {
        let mut ev = Evaluator::new(1_000_000);
        let num = ev
            .eval_closed(&parse_term(&src.env, "q", &scott(n)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let f = ev.eval_closed(&pred).map_err(|e| e.to_string())?;
        ev.steps = 0;
        ev.apply(&f, num).map_err(|e| e.to_string())?;
        counts.insert(n, ev.steps);
    }
    let first = counts[&1];
    ensure(counts.values().all(|c| *c == first), || {
        format!("pred step counts vary: {:?}", counts)
    })
}

// ---------------------------------------------------------------------------
// 8

fn error_ergonomics() -> Outcome {
    // Every cutoff reports the judgment being typed; cutoffs that fall inside
    // a subtyping search also report it.
    let text = read("scott.szm");
    let mut inside = None;
    for budget in (10..400).step_by(10) {
        let r = check_source(
            "scott.szm",
            &text,
            &Options {
                step_budget: budget,
                ..Options::default()
            },
        )
        .map_err(|e| e.to_string())?;
        match r.error("rec_s") {
            Some(CheckError::BudgetExhausted { typing: None, .. }) => {
                return Err(format!("budget {}: no judgment", budget))
            }
            Some(
                e @ CheckError::BudgetExhausted {
                    subtyping: Some(_), ..
                },
            ) => {
                inside.get_or_insert(e.to_string());
            }
            Some(CheckError::BudgetExhausted { .. }) | None => {}
            Some(e) => return Err(format!("budget {}: {}", budget, e)),
        }
    }
    let msg = inside.ok_or("no cutoff inside a subtyping search")?;
    ensure(
        msg.contains("last judgment: ⊢")
            && msg.contains("failing subtyping: ")
            && msg.contains("⊂")
            && !msg.contains("@#"),
        || format!("budget message: {}", msg),
    )?;
    let r = check_source(
        "omega.szm",
        &read("rejected/omega.szm"),
        &Options::default(),
    )
    .map_err(|e| e.to_string())?;
    let msg = r.error("omega").ok_or("omega accepted")?.to_string();
    ensure(
        msg.contains("x@omega.szm:1:27 has type") && !msg.contains("ε"),
        || format!("omega message: {}", msg),
    )?;
    let cfg = Config {
        step_budget: 100_000,
        unroll_depth: 8,
    };
    let env = parse_program("types", TYPES)
        .map_err(|e| e.to_string())?
        .env;
    let a = parse_type(&env, "t", "exists X. {a : X; b : X -> Nat}").map_err(|e| e.to_string())?;
    let b = parse_type(&env, "t", "{a : Nat}").map_err(|e| e.to_string())?;
    let msg = Session::new(cfg)
        .subtype(&a, &b)
        .err()
        .ok_or("existential accepted as Nat")?
        .to_string();
    ensure(!msg.contains("ε") && msg.contains("x@#"), || {
        format!("subtyping message: {}", msg)
    })
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("1 corpus acceptance", corpus_acceptance),
        ("2 subtyping suite", subtyping_suite),
        ("3 rejection suite", rejection_suite),
        ("4 multiple unrolling", multiple_unrolling),
        ("5 size-change kernel", scp_kernel),
        ("6 quantifier-free boundedness", quantifier_free_boundedness),
        ("7 safety smoke", safety_smoke),
        ("8 error ergonomics", error_ergonomics),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = std::time::Instant::now();
        match std::panic::catch_unwind(f) {
            Ok(Ok(())) => println!("PASS {} ({:.1}s)", name, start.elapsed().as_secs_f64()),
            Ok(Err(msg)) => {
                failed += 1;
                println!("FAIL {}: {}", name, msg);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {}: panicked", name);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
