use std::path::PathBuf;

use szm::{parse_program, parse_term, parse_type, Item};
use szm_core::syntax::{alpha_eq_tm, alpha_eq_ty};

fn corpus_files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out = Vec::new();
    for sub in [dir.clone(), dir.join("rejected")] {
        for e in std::fs::read_dir(sub).unwrap() {
            let p = e.unwrap().path();
            if p.extension().is_some_and(|x| x == "szm") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn print_then_parse_is_identity() {
    for path in corpus_files() {
        let text = std::fs::read_to_string(&path).unwrap();
        let src = parse_program("f", &text).unwrap_or_else(|e| panic!("{}: {}", path.display(), e));
        for item in &src.items {
            match item {
                Item::Val(v) => {
                    if let Some(a) = &v.ty {
                        let printed = a.to_string();
                        let back = parse_type(&src.env, "p", &printed)
                            .unwrap_or_else(|e| panic!("{}: {}", printed, e));
                        assert!(
                            alpha_eq_ty(a, &back),
                            "{}: type {} reparsed as {}",
                            path.display(),
                            printed,
                            back
                        );
                    }
                    let printed = v.term.to_string();
                    let back = parse_term(&src.env, "p", &printed)
                        .unwrap_or_else(|e| panic!("{}: {}", printed, e));
                    assert!(
                        alpha_eq_tm(&v.term, &back),
                        "{}: term {} reparsed as {}",
                        path.display(),
                        printed,
                        back
                    );
                }
                Item::Eval { term, .. } => {
                    let printed = term.to_string();
                    let back = parse_term(&src.env, "p", &printed)
                        .unwrap_or_else(|e| panic!("{}: {}", printed, e));
                    assert!(
                        alpha_eq_tm(term, &back),
                        "{}: eval {} reparsed as {}",
                        path.display(),
                        printed,
                        back
                    );
                }
                Item::Type(_) => {}
            }
        }
    }
}

#[test]
fn syntax_error_position() {
    let e = parse_program("f", "val x = (").unwrap_err();
    assert_eq!((e.pos().line, e.pos().col), (1, 9));
}
