use std::path::PathBuf;

use num_bigint::BigInt;
use polysimp_core::dsl::{parse, print_equation, print_system};
use polysimp_core::geometry::space::rank;
use polysimp_core::ir::{validate, EquationSystem, FuncKind};
use polysimp_core::oracle::{equivalent, fitted_degree, Verdict};
use polysimp_core::simplify::apply::{apply_reuse, Reject};
use polysimp_core::simplify::candidates::{
    enumerate_sign_classes, facet_normals, has_invariant_boundary, label_facet, Direction,
};
use polysimp_core::simplify::{equation_degree, reduction_share, simplify_system, Options, Outcome, StepReport};

fn load(name: &str) -> EquationSystem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    let sys = parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    validate(&sys).unwrap();
    sys
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn run(sys: &EquationSystem) -> Outcome {
    simplify_system(sys, &Options::default()).unwrap()
}

fn assert_equivalent(a: &EquationSystem, b: &EquationSystem, ns: &[i64], trials: u32) {
    match equivalent(a, b, ns, trials, 7).unwrap() {
        Verdict::Equivalent { .. } => {}
        Verdict::Mismatch(m) => panic!("mismatch: {:?}\n{}", m, print_system(b)),
    }
}

const CUBE: &str = "param N >= 1;
input Q : { t : 0 <= t <= 2*N };
output P : { i : 0 <= i <= N };

P[i] = reduce(+, (i, j, k -> i), { i, j, k : 0 <= j <= i, 0 <= k <= i, i <= N }, Q[j + k]);
";

#[test]
fn facet_labels_follow_the_sign_of_c_rho() {
    let b = vec![big(&[1, 0])];
    // j >= i, rho = (1, 0)
    let l = label_facet(&big(&[-1, 1]), &big(&[1, 0]), &b);
    assert!(!l.boundary);
    assert_eq!(l.direction, Direction::Outward);
    // j <= 2i - 1, rho = (-1, 0)
    let l = label_facet(&big(&[2, -1]), &big(&[-1, 0]), &b);
    assert_eq!(l.direction, Direction::Outward);
    // i <= N has its normal in the row space of B: it maps onto a facet of the result.
    let l = label_facet(&big(&[-1, 0]), &big(&[1, 0]), &b);
    assert!(l.boundary);
    assert_eq!(l.direction, Direction::Outward);
}

#[test]
fn invariant_boundary_facets_reject_a_candidate() {
    let b = vec![big(&[1, 0, 0])];
    let facets = vec![(0, big(&[1, 0, 0])), (1, big(&[0, 0, 1]))];
    assert!(has_invariant_boundary(&facets, &big(&[0, 1, 0]), &b));
    assert!(!has_invariant_boundary(&facets, &big(&[1, 1, 0]), &b));
    assert!(!has_invariant_boundary(&[(1, big(&[0, 0, 1]))], &big(&[0, 1, 0]), &b));
}

fn classes_of(sys: &EquationSystem, disjuncts: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let eq = sys.equation("P").or_else(|| sys.equation("X")).unwrap();
    let case = eq.cases.iter().find(|c| !c.expr.reductions().is_empty()).unwrap();
    let red = case.expr.reductions()[0];
    let e = sys.effective_domain(red, &sys.case_region(eq, case));
    let share = reduction_share(red, &e);
    let inv = red.op.has_inverse(false);
    let (classes, _) = enumerate_sign_classes(&share, &facet_normals(&e), disjuncts, &red.projection.matrix, inv);
    classes.into_iter().map(|c| c.rho).collect()
}

#[test]
fn sign_classes_of_the_windowed_sum() {
    let both = vec![big(&[1, 0]), big(&[-1, 0])];
    assert_eq!(classes_of(&load("eq1.eqs"), &both), vec![big(&[1, 0]), big(&[-1, 0])]);
    assert!(classes_of(&load("eq1_max.eqs"), &both).is_empty());
    // A single legality disjunct keeps only the matching direction.
    assert_eq!(classes_of(&load("eq1.eqs"), &[big(&[1, 0])]), vec![big(&[1, 0])]);
}

#[test]
fn windowed_sum_drops_one_degree() {
    let sys = load("eq1.eqs");
    let out = run(&sys);
    let r = &out.report.equations[0];
    assert_eq!((r.original_degree, r.final_degree, r.bound), (2, 1, 1));
    assert!(r.bound_met);
    assert_eq!(r.rho_chain, vec![vec![1, 0]]);
    validate(&out.system).unwrap();
    let ns: Vec<i64> = (1..=12).collect();
    assert_equivalent(&sys, &out.system, &ns, 3);
    let slope = fitted_degree(&out.system, &[8, 16, 32, 64]).unwrap();
    assert!((0.8..=1.2).contains(&slope), "slope {}", slope);
}

#[test]
fn windowed_max_is_left_alone() {
    let sys = load("eq1_max.eqs");
    let out = run(&sys);
    let r = &out.report.equations[0];
    assert_eq!((r.original_degree, r.final_degree, r.bound), (2, 2, 1));
    assert!(!r.bound_met);
    assert!(r.rho_chain.is_empty());
    assert_eq!(print_system(&out.system), print_system(&sys));
}

#[test]
fn max_needs_an_inverse_for_either_direction() {
    let sys = load("eq1_max.eqs");
    for rho in [[1, 0], [-1, 0]] {
        let err = apply_reuse(&sys, "P", 1, &big(&rho), false).unwrap_err();
        assert_eq!(err, Reject::NeedsInverse);
    }
    assert_eq!(apply_reuse(&sys, "P", 1, &big(&[0, 0]), false).unwrap_err(), Reject::ZeroImage);
}

#[test]
fn prefix_sum_becomes_a_scan() {
    let sys = load("prefix_sum.eqs");
    let out = run(&sys);
    let text = print_equation(out.system.equation("P").unwrap(), &out.system.param.name);
    assert_eq!(
        text,
        "P[i] = case {\n    { i : i == 0 } : Q[i];\n    { i : i >= 1 } : P[i - 1] + Q[i];\n};\n"
    );
    let ns: Vec<i64> = (1..=10).collect();
    assert_equivalent(&sys, &out.system, &ns, 3);
}

#[test]
fn dependent_reduction_reuses_forward_only() {
    let sys = load("eq2.eqs");
    let out = run(&sys);
    let r = &out.report.equations[0];
    assert_eq!((r.original_degree, r.final_degree), (2, 1));
    let step = &r.steps[0];
    assert_eq!(step.classes, 1);
    assert_eq!(step.r, Some(vec![1]));
    // First-order chain: every read in the output is at distance 0 or 1 along i.
    let text = print_system(&out.system);
    assert!(text.contains("X_acc[i - 1] + X[i - 1]"), "{}", text);
    assert!(text.contains("f(X_acc[i])"), "{}", text);
    let ns: Vec<i64> = (1..=12).collect();
    for f in FuncKind::ALL {
        let mut a = sys.clone();
        a.funcs.insert("f".into(), f);
        let mut b = out.system.clone();
        b.funcs.insert("f".into(), f);
        assert_equivalent(&a, &b, &ns, 3);
    }
}

#[test]
fn forcing_the_backward_direction_is_rejected() {
    let sys = load("eq2.eqs");
    let mut opts = Options::default();
    opts.forced.insert("X".into(), big(&[-1, 0]));
    let out = simplify_system(&sys, &opts).unwrap();
    assert_eq!(out.report.forced_rho_rejected.len(), 1);
    assert_eq!(print_system(&out.system), print_system(&sys));

    opts.no_schedule_check = true;
    let err = simplify_system(&sys, &opts).unwrap_err();
    assert!(err.to_string().contains("cycle"), "{}", err);
}

#[test]
fn forcing_the_forward_direction_matches_the_search() {
    let sys = load("eq2.eqs");
    let mut opts = Options::default();
    opts.forced.insert("X".into(), big(&[1, 0]));
    let forced = simplify_system(&sys, &opts).unwrap();
    assert!(forced.report.forced_rho_rejected.is_empty());
    assert_eq!(print_system(&forced.system), print_system(&run(&sys).system));
}

#[test]
fn system_without_reductions_is_unchanged() {
    let sys = load("eq4.eqs");
    let out = run(&sys);
    assert_eq!(print_system(&out.system), print_system(&sys));
    assert!(out.report.equations.iter().all(|r| r.bound_met));
}

/// Steps grouped into root-to-leaf paths: a step at depth d + 1 descends
/// from the latest step at depth d.
fn paths(steps: &[StepReport]) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<i64>> = Vec::new();
    for s in steps {
        stack.truncate(s.depth);
        match &s.rho {
            Some(rho) => stack.push(rho.clone()),
            None => out.push(stack.clone()),
        }
    }
    out
}

#[test]
fn three_index_reduction_recurses_to_the_bound() {
    let sys = parse(CUBE).unwrap();
    validate(&sys).unwrap();
    let out = run(&sys);
    let r = &out.report.equations[0];
    assert_eq!((r.original_degree, r.bound), (3, 1));
    assert_eq!(r.final_degree, 1);
    for path in paths(&r.steps) {
        let rows: Vec<Vec<BigInt>> = path.iter().map(|v| big(v)).collect();
        assert_eq!(rank(&rows, 3), rows.len(), "dependent rho chain {:?}", path);
    }
    let ns: Vec<i64> = (1..=8).collect();
    assert_equivalent(&sys, &out.system, &ns, 3);
    let slope = fitted_degree(&out.system, &[8, 16, 32, 64]).unwrap();
    assert!((0.8..=1.2).contains(&slope), "slope {}", slope);
}

#[test]
fn report_degrees_match_the_emitted_system() {
    for name in ["eq1.eqs", "eq1_max.eqs", "eq2.eqs", "eq4.eqs", "prefix_sum.eqs"] {
        let out = run(&load(name));
        let reparsed = parse(&print_system(&out.system)).unwrap();
        for r in &out.report.equations {
            let mut d = equation_degree(&reparsed, reparsed.equation(&r.target).unwrap());
            for v in &r.derived {
                d = d.max(equation_degree(&reparsed, reparsed.equation(v).unwrap()));
            }
            assert_eq!(d, r.final_degree, "{} {}", name, r.target);
        }
    }
}

#[test]
fn simplification_is_deterministic() {
    for name in ["eq1.eqs", "eq1_max.eqs", "eq2.eqs", "eq4.eqs", "prefix_sum.eqs"] {
        let sys = load(name);
        let (a, b) = (run(&sys), run(&sys));
        assert_eq!(print_system(&a.system), print_system(&b.system));
        assert_eq!(serde_json::to_string(&a.report).unwrap(), serde_json::to_string(&b.report).unwrap());
    }
}
