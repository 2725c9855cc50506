use proptest::prelude::*;
use szm_core::eval::Evaluator;
use szm_core::ordinal::PosCtx;
use szm_core::scp::{compose, SCEntry, SCMatrix};
use szm_core::syntax::{alpha_eq_tm, alpha_eq_ty, subst_term, Term};
use szm_core::uvar::Store;
use szm_core::{Ordinal, Tm, Ty, Type};

fn entry() -> impl Strategy<Value = SCEntry> {
    prop_oneof![
        Just(SCEntry::Unknown),
        Just(SCEntry::Leq),
        Just(SCEntry::Less)
    ]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = SCMatrix> {
    prop::collection::vec(entry(), rows * cols).prop_map(move |es| {
        let mut m = SCMatrix::new(rows, cols);
        for (k, e) in es.into_iter().enumerate() {
            m.set(k / cols, k % cols, e);
        }
        m
    })
}

fn chain() -> impl Strategy<Value = (SCMatrix, SCMatrix, SCMatrix)> {
    (1usize..=4, 1usize..=4, 1usize..=4, 1usize..=4)
        .prop_flat_map(|(a, b, c, d)| (matrix(a, b), matrix(b, c), matrix(c, d)))
}

/// A closed lambda term with constructors and records.
fn build_term(codes: &[u8], at: &mut usize, depth: usize, bound: &mut Vec<String>) -> Tm {
    let c = codes.get(*at).copied().unwrap_or(0);
    *at += 1;
    if depth == 0 || c % 5 == 0 {
        return if bound.is_empty() {
            Term::unit()
        } else {
            Term::var(&bound[c as usize % bound.len()])
        };
    }
    match c % 5 {
        1 => {
            let x = format!("x{}", c % 3);
            bound.push(x.clone());
            let b = build_term(codes, at, depth - 1, bound);
            bound.pop();
            Term::lam(&x, b)
        }
        2 => {
            let f = build_term(codes, at, depth - 1, bound);
            Term::app(f, build_term(codes, at, depth - 1, bound))
        }
        3 => Term::cons("C", build_term(codes, at, depth - 1, bound)),
        _ => Term::new(szm_core::TermKind::Record(vec![(
            "l".into(),
            build_term(codes, at, depth - 1, bound),
        )])),
    }
}

fn term() -> impl Strategy<Value = Tm> {
    prop::collection::vec(any::<u8>(), 1..30)
        .prop_map(|codes| build_term(&codes, &mut 0, 5, &mut Vec::new()))
}

fn ground_type(depth: usize) -> BoxedStrategy<Ty> {
    if depth == 0 {
        return prop_oneof![Just(Type::unit()), Just(Type::var("A"))].boxed();
    }
    prop_oneof![
        Just(Type::unit()),
        (ground_type(depth - 1), ground_type(depth - 1)).prop_map(|(a, b)| Type::arrow(a, b)),
        ground_type(depth - 1).prop_map(|a| Type::record(vec![("l", a)])),
        ground_type(depth - 1).prop_map(|a| Type::mu(
            Ordinal::Inf,
            "X",
            Type::variant(vec![("C", a), ("D", Type::var("X"))])
        )),
    ]
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn compose_is_associative((x, y, z) in chain()) {
        prop_assert_eq!(compose(&compose(&x, &y), &z), compose(&x, &compose(&y, &z)));
    }

    #[test]
    fn identity_is_neutral(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(SCMatrix::identity(m.rows()).compose(&m), m.clone());
        prop_assert_eq!(m.compose(&SCMatrix::identity(m.cols())), m);
    }

    #[test]
    fn successor_chains_are_ordered(i in 0usize..6, j in 0usize..6) {
        let tower = |n: usize| (0..n).fold(Ordinal::var("a"), |o, _| Ordinal::succ(o));
        let g = PosCtx::new();
        prop_assert_eq!(g.leq(&tower(i), &tower(j)), i <= j);
        prop_assert_eq!(g.less(&tower(i), &tower(j)), i < j);
        prop_assert!(g.leq(&tower(i), &Ordinal::Inf));
    }

    #[test]
    fn less_facts_are_transitive(n in 1usize..6) {
        let o = |k: usize| Ordinal::var(&format!("o{}", k));
        let g = (0..n).fold(PosCtx::new(), |g, k| g.with_less(&o(k), &o(k + 1)));
        prop_assert!(g.less(&o(0), &o(n)));
        prop_assert!(!g.leq(&o(n), &o(0)));
        prop_assert!(g.nonzero(&o(n)));
    }

    #[test]
    fn alpha_equivalence_is_reflexive(t in term()) {
        prop_assert!(alpha_eq_tm(&t, &t));
    }

    #[test]
    fn renaming_a_binder_preserves_alpha_equivalence(t in term()) {
        let renamed = Term::lam("fresh", subst_term(&t, "x0", &Term::var("fresh")));
        let lam = Term::lam("x0", t);
        prop_assert!(alpha_eq_tm(&lam, &renamed));
    }

    #[test]
    fn substituting_a_missing_variable_is_identity(t in term()) {
        prop_assert!(alpha_eq_tm(&subst_term(&t, "absent", &Term::unit()), &t));
    }

    #[test]
    fn rollback_restores_the_store(ops in prop::collection::vec((0usize..4, ground_type(2)), 1..8)) {
        let mut store = Store::new();
        let vars: Vec<Ty> = (0..4).map(|_| store.fresh_ty(None)).collect();
        let _ = store.bind_type_uvar(0, &Type::arrow(vars[1].clone(), Type::unit()));
        let before: Vec<Ty> = vars.iter().map(|v| store.zonk(v)).collect();
        let snap = store.snapshot();
        for (k, a) in &ops {
            let extra = store.fresh_ty(None);
            if let Type::UVar(id) = &*store.head(&vars[*k]) {
                let _ = store.bind_type_uvar(*id, &Type::arrow(a.clone(), extra));
            }
        }
        store.rollback(snap);
        for (v, b) in vars.iter().zip(&before) {
            prop_assert!(alpha_eq_ty(&store.zonk(v), b));
        }
        prop_assert_eq!(store.ty_count(), 4);
    }

    #[test]
    fn more_fuel_gives_the_same_result(t in term(), fuel in 1usize..200) {
        let mut small = Evaluator::new(fuel);
        if let Ok(v) = small.eval_closed(&t) {
            let mut big = Evaluator::new(fuel + 1000);
            let w = big.eval_closed(&t).expect("more fuel cannot fail");
            prop_assert_eq!(v.to_string(), w.to_string());
            prop_assert_eq!(small.steps, big.steps);
        }
    }
}

#[test]
fn strict_entries_absorb_along_a_path() {
    use SCEntry::*;
    let m = SCMatrix::from_rows(&[&[Less, Unknown], &[Unknown, Leq]]);
    let n = SCMatrix::from_rows(&[&[Leq, Unknown], &[Leq, Less]]);
    let p = compose(&m, &n);
    assert_eq!(p, SCMatrix::from_rows(&[&[Less, Unknown], &[Leq, Less]]));
}
