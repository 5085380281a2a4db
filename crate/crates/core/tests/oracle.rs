use std::collections::BTreeMap;
use std::path::PathBuf;

use polysimp_core::dsl::parse;
use polysimp_core::ir::{EquationSystem, FuncKind, Value};
use polysimp_core::oracle::{count_ops, equivalent, evaluate, fitted_degree, random_inputs, Array, EvalError, Verdict};

fn load(name: &str) -> EquationSystem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn column(sys: &EquationSystem, var: &str, n: i64, inputs: &BTreeMap<String, Array>) -> Vec<Value> {
    evaluate(sys, n, inputs).unwrap().arrays[var].values().cloned().collect()
}

#[test]
fn windowed_sum_on_identity_input() {
    let sys = load("eq1.eqs");
    let n = 3;
    let q: Array = (0..2 * n).map(|j| (vec![j], Value::int(j))).collect();
    let inputs = BTreeMap::from([("Q".to_string(), q)]);
    let expect: Vec<Value> = [0, 1, 5, 12].into_iter().map(Value::int).collect();
    assert_eq!(column(&sys, "P", n, &inputs), expect);
}

#[test]
fn windowed_sum_matches_direct_loops() {
    let sys = load("eq1.eqs");
    for n in 1..=7 {
        let inputs = random_inputs(&sys, n, 11 + n as u64).unwrap();
        let q = |j: i64| match &inputs["Q"][&vec![j]] {
            Value::Fin(v) => i64::try_from(v).unwrap(),
            _ => unreachable!(),
        };
        // Reverse enumeration order on purpose.
        let mut expect = vec![Value::int(q(0))];
        for i in 1..=n {
            expect.push(Value::int((i..2 * i).rev().map(q).sum()));
        }
        assert_eq!(column(&sys, "P", n, &inputs), expect, "N={}", n);
    }
}

#[test]
fn dependent_reduction_with_increment() {
    let sys = load("eq2.eqs");
    let expect: Vec<Value> = [1, 2, 4, 8].into_iter().map(Value::int).collect();
    assert_eq!(column(&sys, "X", 3, &BTreeMap::new()), expect);
}

#[test]
fn anti_causal_chain_is_a_cycle() {
    let src = "param N >= 1;\noutput X : { i : 0 <= i <= N };\nX[i] = case {\n  { i : i <= N - 1 } : X[i + 1];\n  { i : i == N } : X[i - 1];\n};\n";
    let sys = parse(src).unwrap();
    match evaluate(&sys, 3, &BTreeMap::new()) {
        Err(EvalError::Cycle(c)) => assert!(c.len() >= 2),
        other => panic!("expected cycle, got {:?}", other),
    }
}

#[test]
fn running_sum_form_matches_dependent_reduction() {
    let ns: Vec<i64> = (1..=12).collect();
    for f in FuncKind::ALL {
        let mut a = load("eq2.eqs");
        let mut b = load("eq4.eqs");
        a.funcs.insert("f".into(), f);
        b.funcs.insert("f".into(), f);
        assert!(matches!(equivalent(&a, &b, &ns, 3, 7).unwrap(), Verdict::Equivalent { .. }), "{:?}", f);
    }
}

#[test]
fn different_operators_disagree() {
    let v = equivalent(&load("eq1.eqs"), &load("eq1_max.eqs"), &[1, 2, 3, 4], 3, 7).unwrap();
    assert!(matches!(v, Verdict::Mismatch(_)));
}

#[test]
fn op_count_of_reduction_is_its_point_count() {
    let sys = load("eq1.eqs");
    for n in [1, 4, 9] {
        let points: i64 = (1..=n).map(|i| i).sum();
        assert_eq!(count_ops(&sys, n).unwrap(), points as u64);
    }
}

#[test]
fn fitted_degrees_of_corpus() {
    let ns = [8, 16, 32, 64];
    let quad = fitted_degree(&load("eq1.eqs"), &ns).unwrap();
    assert!((1.8..=2.2).contains(&quad), "{}", quad);
    let lin = fitted_degree(&load("eq4.eqs"), &ns).unwrap();
    assert!((0.8..=1.2).contains(&lin), "{}", lin);
}

#[test]
fn evaluation_is_deterministic() {
    let sys = load("eq1.eqs");
    let inputs = random_inputs(&sys, 5, 3).unwrap();
    assert_eq!(evaluate(&sys, 5, &inputs).unwrap().to_text(), evaluate(&sys, 5, &inputs).unwrap().to_text());
    assert_eq!(random_inputs(&sys, 5, 3).unwrap(), inputs);
}
