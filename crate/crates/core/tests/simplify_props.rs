use num_bigint::BigInt;
use polysimp_core::dsl::{parse, print_system};
use polysimp_core::geometry::space::rank;
use polysimp_core::geometry::{intersect_spaces, kernel};
use polysimp_core::ir::{validate, EquationSystem};
use polysimp_core::oracle::{equivalent, Verdict};
use polysimp_core::simplify::{reduction_share, simplify_system, Options, StepReport};
use proptest::prelude::*;

const NAMES: [&str; 3] = ["i", "j", "k"];

/// `a·z + c·N + d` in DSL syntax.
fn affine(coeffs: &[i64], n: i64, d: i64) -> String {
    let mut terms: Vec<(i64, String)> = coeffs.iter().zip(NAMES).map(|(&a, x)| (a, x.to_string())).collect();
    terms.push((n, "N".into()));
    let mut out = String::new();
    for (a, x) in terms.into_iter().filter(|(a, _)| *a != 0) {
        let body = if a.abs() == 1 { x } else { format!("{}*{}", a.abs(), x) };
        out = match (out.is_empty(), a < 0) {
            (true, false) => body,
            (true, true) => format!("-{}", body),
            (false, false) => format!("{} + {}", out, body),
            (false, true) => format!("{} - {}", out, body),
        };
    }
    match (out.is_empty(), d) {
        (true, _) => d.to_string(),
        (false, 0) => out,
        (false, d) if d > 0 => format!("{} + {}", out, d),
        (false, d) => format!("{} - {}", out, -d),
    }
}

/// `P[i] = reduce(op, (i, j[, k] -> i), box ∩ cuts, Q[a·z])`.
fn reduction(op: &str, dims: usize, cuts: &[(Vec<i64>, i64, i64)], read: &[i64]) -> String {
    let idx = NAMES[..dims].join(", ");
    let mut cons: Vec<String> = NAMES[..dims].iter().map(|x| format!("0 <= {} <= N", x)).collect();
    for (a, n, d) in cuts {
        cons.push(format!("{} >= 0", affine(&a[..dims], *n, *d)));
    }
    format!(
        "param N >= 1;\ninput Q : {{ t : -6*N - 6 <= t <= 6*N + 6 }};\noutput P : {{ i : 0 <= i <= N }};\n\n\
         P[i] = reduce({}, ({} -> i), {{ {} : {} }}, Q[{}]);\n",
        op,
        idx,
        idx,
        cons.join(", "),
        affine(&read[..dims], 0, 0)
    )
}

fn system() -> impl Strategy<Value = EquationSystem> {
    (
        prop_oneof![Just("+"), Just("max")],
        2usize..=3,
        prop::collection::vec((prop::collection::vec(-2i64..=2, 3), -1i64..=1, -2i64..=2), 0..=2),
        prop::collection::vec(-2i64..=2, 3),
    )
        .prop_filter_map("invalid system", |(op, dims, cuts, read)| {
            let sys = parse(&reduction(op, dims, &cuts, &read)).ok()?;
            validate(&sys).ok()?;
            Some(sys)
        })
}

/// ρ chains along root-to-leaf paths of the step tree.
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
    out.push(stack);
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn simplification_is_sound_and_accounts_degrees(sys in system()) {
        let out = simplify_system(&sys, &Options::default()).unwrap();
        let text = print_system(&out.system);
        let ns: Vec<i64> = (1..=5).collect();
        match equivalent(&sys, &out.system, &ns, 2, 11).unwrap() {
            Verdict::Equivalent { .. } => {}
            Verdict::Mismatch(m) => prop_assert!(false, "{:?}\n{}\n{}", m, print_system(&sys), text),
        }
        let r = &out.report.equations[0];
        prop_assert!(r.final_degree <= r.original_degree);

        for path in paths(&r.steps) {
            let rows: Vec<Vec<BigInt>> = path.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let n = rows.first().map_or(0, |v| v.len());
            prop_assert_eq!(rank(&rows, n), rows.len(), "dependent chain {:?}", path);
        }
        // A rewrite at a site only spawns residual reductions of lower degree.
        for (k, s) in r.steps.iter().enumerate() {
            if s.rho.is_some() {
                for child in r.steps[k + 1..].iter().take_while(|c| c.depth > s.depth).filter(|c| c.depth == s.depth + 1) {
                    prop_assert!(child.domain_degree < s.domain_degree, "{:?} under {:?}", child, s);
                }
            }
        }

        let eq = sys.equation("P").unwrap();
        let red = eq.cases[0].expr.reductions()[0].clone();
        if !red.op.has_inverse(false) {
            // No ⊖ residuals without an inverse.
            for s in &r.steps {
                for v in &s.introduced {
                    let tail = v.rsplit('_').next().unwrap();
                    prop_assert!(!tail.starts_with('s'), "{} introduced for a max reduction\n{}", v, text);
                }
            }
        } else {
            let e = sys.effective_domain(&red, &sys.case_region(eq, &eq.cases[0]));
            let share = reduction_share(&red, &e);
            let ker = kernel(&red.projection.matrix, red.names.len());
            if intersect_spaces(&share, &ker).dim() == 0 {
                prop_assert_eq!(r.final_degree, r.bound, "{}\n{}", print_system(&sys), text);
            }
        }
    }
}

#[test]
fn generated_text_parses() {
    let text = reduction("+", 3, &[(vec![1, -2, 0], 1, -1)], &[0, 1, 1]);
    assert!(text.contains("{ i, j, k : 0 <= i <= N, 0 <= j <= N, 0 <= k <= N, i - 2*j + N - 1 >= 0 }"), "{}", text);
    assert!(text.contains("Q[j + k]"), "{}", text);
    validate(&parse(&text).unwrap()).unwrap();
}

/// Dependent windowed reductions reading earlier (`forward`) or later elements of X.
fn dependent(window: &str, base: &str, rest: &str) -> EquationSystem {
    let text = format!(
        "param N >= 1;\nfunc f = inc;\noutput X : {{ i : 0 <= i <= N }};\n\n\
         X[i] = case {{\n    {{ i : {} }} : f(0);\n    {{ i : {} }} : f(reduce(+, (i, j -> i), {{ i, j : {} }}, X[j]));\n}};\n",
        base, rest, window
    );
    let sys = parse(&text).unwrap();
    validate(&sys).unwrap();
    sys
}

#[test]
fn every_accepted_class_of_a_dependent_reduction_admits_a_schedule() {
    use polysimp_core::schedule::{
        causality_cone, context_dependences, legality_disjuncts, project_on_variable, schedule_witness, Layout,
    };
    use polysimp_core::simplify::apply::apply_reuse;
    use polysimp_core::simplify::candidates::{enumerate_sign_classes, facet_normals};

    let systems = [
        dependent("0 <= j <= i - 1, i <= N", "i == 0", "i >= 1"),
        dependent("i <= 2*j, j <= i - 1, i <= N", "i == 0", "i >= 1"),
        dependent("0 <= j <= i - 2, i <= N", "i <= 1", "i >= 2"),
        dependent("i + 1 <= j <= N, 0 <= i", "i == N", "N >= i + 1"),
        dependent("i + 1 <= j <= 2*i + 1, j <= N, 0 <= i", "i == N", "N >= i + 1"),
        // Fixed-width window: a thick strip shares nothing.
        dependent("i - 3 <= j <= i - 1, 0 <= j, i <= N", "i == 0", "i >= 1"),
    ];
    for sys in systems {
        let eq = sys.equation("X").unwrap();
        let case = &eq.cases[1];
        let red = case.expr.reductions()[0];
        let e = sys.effective_domain(red, &sys.case_region(eq, case));
        let deps = context_dependences(&sys, &[]);
        let layout = Layout::new(&sys);
        let projected = project_on_variable(&causality_cone(&deps, &layout), &layout, "X");
        let disjuncts = legality_disjuncts(&projected, &red.projection.matrix, red.names.len());
        let share = reduction_share(red, &e);
        let (classes, _) = enumerate_sign_classes(&share, &facet_normals(&e), &disjuncts, &red.projection.matrix, true);
        assert_eq!(classes.len(), share.dim(), "{}", print_system(&sys));
        for c in classes {
            let applied = apply_reuse(&sys, "X", 1, &c.rho, true).unwrap();
            schedule_witness(&applied.system)
                .unwrap_or_else(|err| panic!("rho {:?}: {}\n{}", c.rho, err, print_system(&applied.system)));
        }
    }
}
