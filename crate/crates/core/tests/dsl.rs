use std::path::PathBuf;

use polysimp_core::dsl::{parse, print_system};
use polysimp_core::ir::validate;

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "eqs"))
        .collect();
    files.sort();
    assert!(!files.is_empty());
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn corpus_parses_and_validates() {
    for (name, src) in corpus() {
        let sys = parse(&src).unwrap_or_else(|e| panic!("{}: {}", name, e));
        validate(&sys).unwrap_or_else(|e| panic!("{}: {}", name, e));
    }
}

#[test]
fn corpus_round_trips() {
    for (name, src) in corpus() {
        let sys = parse(&src).unwrap();
        let text = print_system(&sys);
        let again = parse(&text).unwrap_or_else(|e| panic!("{}: {}\n{}", name, e, text));
        assert_eq!(sys, again, "{}", name);
        assert_eq!(text, print_system(&again), "{}", name);
    }
}

#[test]
fn missing_param_reported_at_line_one() {
    let err = parse("input Q : { j : 0 <= j };\n").unwrap_err();
    assert_eq!((err.line, err.col), (1, 1));
}

#[test]
fn second_param_rejected() {
    assert!(parse("param N >= 1;\nparam M >= 1;\n").is_err());
}

#[test]
fn error_positions_point_at_token() {
    let err = parse("param N >= 1;\noutput P : { i : 0 <= i <= N };\nP[i] = Q[i] +;\n").unwrap_err();
    assert_eq!(err.line, 3);
    assert_eq!(err.col, 14);
}

#[test]
fn non_affine_index_rejected() {
    let src = "param N >= 1;\noutput P : { i : 0 <= i <= N };\nP[i] = P[i*i];\n";
    assert!(parse(src).unwrap_err().message.contains("non-affine"));
}

#[test]
fn unary_minus_and_precedence_survive_printing() {
    let src = "param N >= 0;\ninput Q : { j : 0 <= j <= N };\noutput P : { i : 0 <= i <= N };\n\
               P[i] = -Q[i] - (Q[i] - 3) * -2 + max(Q[i], -inf) / (1 + 1);\n";
    let sys = parse(src).unwrap();
    let again = parse(&print_system(&sys)).unwrap();
    assert_eq!(sys, again);
}

#[test]
fn strict_comparisons_are_tightened() {
    let a = parse("param N >= 0;\noutput P : { i : 0 < i < N };\n").unwrap();
    let b = parse("param N >= 0;\noutput P : { i : 1 <= i <= N - 1 };\n").unwrap();
    assert_eq!(a.vars[0].domain, b.vars[0].domain);
}
