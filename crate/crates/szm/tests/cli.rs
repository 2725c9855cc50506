use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn szm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn check(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["check", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    szm(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn corpus_is_accepted() {
    for f in [
        "church.szm",
        "scott.szm",
        "nat.szm",
        "lists.szm",
        "streams.szm",
        "modules.szm",
    ] {
        let o = check(&corpus(f), &[]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", f, stderr(&o));
    }
}

#[test]
fn type_errors_exit_with_one() {
    for f in [
        "omega.szm",
        "clash.szm",
        "fix_self.szm",
        "blocked.szm",
        "no_decrease.szm",
    ] {
        let o = check(&corpus("rejected").join(f), &[]);
        assert_eq!(o.status.code(), Some(1), "{}", f);
    }
    let o = check(&corpus("rejected/omega.szm"), &[]);
    let msg = stderr(&o);
    assert!(
        msg.contains("has type") && msg.contains("and is used with type"),
        "{}",
        msg
    );
}

#[test]
fn budget_interrupts() {
    let o = check(&corpus("scott.szm"), &["--step-budget", "40"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("interrupted: step budget exhausted\n  last judgment: "));
}

#[test]
fn parse_and_io_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.szm");
    std::fs::write(&bad, "val x = (").unwrap();
    let o = check(&bad, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":1:9:"), "{}", stderr(&o));
    let o = check(&dir.path().join("missing.szm"), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_flag_runs_named_value() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("two.szm");
    std::fs::write(
        &f,
        "type Nat = mu N. [Z | S of N]\nval two : Nat = S (S Z)\n",
    )
    .unwrap();
    let o = check(&f, &["--eval", "two"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "two = S (S Z)\n");
}

#[test]
fn latex_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.tex"), dir.path().join("b.tex"));
    for f in ["nat.szm", "scott.szm", "lists.szm"] {
        assert_eq!(
            check(&corpus(f), &["--proof-latex", a.to_str().unwrap()])
                .status
                .code(),
            Some(0)
        );
        assert_eq!(
            check(&corpus(f), &["--proof-latex", b.to_str().unwrap()])
                .status
                .code(),
            Some(0)
        );
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{}",
            f
        );
    }
}

#[test]
fn latex_of_empty_program_has_empty_body() {
    let dir = tempfile::tempdir().unwrap();
    let (src, out) = (dir.path().join("e.szm"), dir.path().join("e.tex"));
    std::fs::write(&src, "").unwrap();
    assert_eq!(
        check(&src, &["--proof-latex", out.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let tex = std::fs::read_to_string(&out).unwrap();
    let body =
        &tex[tex.find("\\begin{document}").unwrap() + 16..tex.find("\\end{document}").unwrap()];
    assert!(body.trim().is_empty(), "{:?}", body);
}

#[test]
fn latex_labels_of_id_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nat.tex");
    check(
        &corpus("nat.szm"),
        &["--proof-latex", out.to_str().unwrap()],
    );
    let tex = std::fs::read_to_string(&out).unwrap();
    let id = &tex[tex.find("\\texttt{id}").unwrap()..tex.find("\\texttt{add}").unwrap()];
    let labels: Vec<&str> = id
        .lines()
        .filter_map(|l| {
            l.strip_prefix("\\RightLabel{$\\scriptstyle ")?
                .strip_suffix("$}")
        })
        .collect();
    for l in ["\\mu_{l}", "\\vee_{r}", "+_{i}", "I_{1}", "I_{2}", "H_{2}"] {
        assert!(labels.contains(&l), "{} missing from {:?}", l, labels);
    }
    assert!(tex.contains("\\AxiomC{}\n\\RightLabel{$\\scriptstyle =$}"));
}
