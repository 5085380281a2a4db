//! Reference semantics: naive demand-driven evaluation at a fixed parameter
//! value, and value equivalence between two systems.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Polyhedron;
use crate::ir::{ArithError, Equation, EquationSystem, Expr, Reduction, Role, Value};

pub type Point = Vec<i64>;
pub type Array = BTreeMap<Point, Value>;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("parameter value {value} is below the declared minimum {min}")]
    ParamTooSmall { value: i64, min: i64 },
    #[error("no value supplied for input {var}{}", fmt_point(.point))]
    MissingInput { var: String, point: Point },
    #[error("read of {var}{} outside its declared domain", fmt_point(.point))]
    OutOfDomain { var: String, point: Point },
    #[error("no case of {var} covers {}", fmt_point(.point))]
    Uncovered { var: String, point: Point },
    #[error("{var} is read but never defined")]
    Undefined { var: String },
    #[error("unknown function {0}")]
    UnknownFunction(String),
    #[error("at {var}{}: {err}", fmt_point(.point))]
    Arith { var: String, point: Point, err: ArithError },
    #[error("instance-level cycle: {}", .0.iter().map(|(v, p)| format!("{}{}", v, fmt_point(p))).collect::<Vec<_>>().join(" -> "))]
    Cycle(Vec<(String, Point)>),
    #[error("domain of {0} is unbounded")]
    Unbounded(String),
}

pub fn fmt_point(p: &[i64]) -> String {
    format!("[{}]", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
}

/// Values of every variable of a system at one parameter value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    pub param: i64,
    pub arrays: BTreeMap<String, Array>,
}

impl Valuation {
    /// One `var[point] = value` line per entry, variables and points sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, arr) in &self.arrays {
            for (p, v) in arr {
                let _ = writeln!(out, "{}{} = {}", name, fmt_point(p), v);
            }
        }
        out
    }
}

fn domain_points(name: &str, p: &Polyhedron, n: i64) -> Result<Vec<Point>, EvalError> {
    p.points(&[n]).map_err(|_| EvalError::Unbounded(name.to_string()))
}

/// Uniform values in [-9, 9] for every input, variables in name order and points in lexicographic order.
pub fn random_inputs(sys: &EquationSystem, n: i64, seed: u64) -> Result<BTreeMap<String, Array>, EvalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs: Vec<_> = sys.vars.iter().filter(|v| v.role == Role::Input).collect();
    inputs.sort_by(|a, b| a.name.cmp(&b.name));
    let mut out = BTreeMap::new();
    for v in inputs {
        let mut arr = Array::new();
        for p in domain_points(&v.name, &sys.with_context(&v.domain), n)? {
            arr.insert(p, Value::int(rng.gen_range(-9..=9)));
        }
        out.insert(v.name.clone(), arr);
    }
    Ok(out)
}

struct Evaluator<'a> {
    sys: &'a EquationSystem,
    n: i64,
    inputs: &'a BTreeMap<String, Array>,
    memo: HashMap<(usize, Point), Value>,
    active: HashSet<(usize, Point)>,
    stack: Vec<(usize, Point)>,
    /// Reduction (by address) → result point → contributing iteration points.
    buckets: HashMap<usize, HashMap<Point, Vec<Point>>>,
    domains: Domains,
    ops: u64,
}

/// Parameter-independent domains of one system, kept across evaluations.
#[derive(Default)]
struct Domains {
    /// Effective domain per reduction (by address).
    effective: HashMap<usize, Polyhedron>,
    /// Declared domain with the context, per variable.
    vars: HashMap<usize, Polyhedron>,
}

impl Domains {
    fn var(&mut self, sys: &EquationSystem, vi: usize) -> &Polyhedron {
        self.vars.entry(vi).or_insert_with(|| sys.with_context(&sys.vars[vi].domain))
    }
}

impl<'a> Evaluator<'a> {
    fn var_index(&self, name: &str) -> Result<usize, EvalError> {
        self.sys
            .vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| EvalError::Undefined { var: name.to_string() })
    }

    fn with_param(&self, p: &[i64]) -> Vec<i64> {
        let mut v = p.to_vec();
        v.push(self.n);
        v
    }

    fn value(&mut self, vi: usize, point: Point) -> Result<Value, EvalError> {
        let sys: &'a EquationSystem = self.sys;
        let decl = &sys.vars[vi];
        if !decl.domain.contains_int(&self.with_param(&point)) {
            return Err(EvalError::OutOfDomain { var: decl.name.clone(), point });
        }
        if decl.role == Role::Input {
            return self
                .inputs
                .get(&decl.name)
                .and_then(|a| a.get(&point))
                .cloned()
                .ok_or(EvalError::MissingInput { var: decl.name.clone(), point });
        }
        let key = (vi, point);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        if self.active.contains(&key) {
            let start = self.stack.iter().position(|k| *k == key).unwrap_or(0);
            let mut cycle: Vec<(String, Point)> =
                self.stack[start..].iter().map(|(v, p)| (self.sys.vars[*v].name.clone(), p.clone())).collect();
            cycle.push((decl.name.clone(), key.1.clone()));
            return Err(EvalError::Cycle(cycle));
        }
        let (ei, eq) = sys
            .equations
            .iter()
            .enumerate()
            .find(|(_, e)| e.target == decl.name)
            .ok_or_else(|| EvalError::Undefined { var: decl.name.clone() })?;
        let full = self.with_param(&key.1);
        let mut chosen = None;
        for (ci, case) in eq.cases.iter().enumerate() {
            if case.guard.contains_int(&full) {
                chosen = Some(ci);
                break;
            }
        }
        let Some(ci) = chosen else {
            return Err(EvalError::Uncovered { var: decl.name.clone(), point: key.1 });
        };
        self.active.insert(key.clone());
        self.stack.push(key.clone());
        let res = self.eval_case(ei, eq, ci, &key.1);
        self.stack.pop();
        self.active.remove(&key);
        let v = res?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn eval_case(&mut self, ei: usize, eq: &'a Equation, ci: usize, point: &[i64]) -> Result<Value, EvalError> {
        let expr = &eq.cases[ci].expr;
        self.ops += expr.op_count() as u64;
        self.eval_expr(expr, point, (ei, ci), &eq.target)
    }

    fn eval_expr(&mut self, e: &'a Expr, z: &[i64], case: (usize, usize), target: &str) -> Result<Value, EvalError> {
        let arith = |err: ArithError| EvalError::Arith { var: target.to_string(), point: z.to_vec(), err };
        match e {
            Expr::Const(v) => Ok(v.clone()),
            Expr::Read { var, access } => {
                let vi = self.var_index(var)?;
                let p = access.apply(z, &[self.n]);
                self.value(vi, p)
            }
            Expr::Call { func, arg } => {
                let k = self.sys.func(func).ok_or_else(|| EvalError::UnknownFunction(func.clone()))?;
                let v = self.eval_expr(arg, z, case, target)?;
                k.apply(&v).map_err(arith)
            }
            Expr::Binary { op, lhs, rhs } => {
                let a = self.eval_expr(lhs, z, case, target)?;
                let b = self.eval_expr(rhs, z, case, target)?;
                op.apply(&a, &b).map_err(arith)
            }
            Expr::Reduce(red) => {
                let pts = self.contributors(red, case, z)?;
                let mut acc = red.op.identity();
                for p in &pts {
                    let v = self.eval_expr(&red.body, p, case, target)?;
                    acc = red.op.apply(&acc, &v).map_err(arith)?;
                }
                self.ops += pts.len() as u64;
                Ok(acc)
            }
        }
    }

    fn run(&mut self) -> Result<BTreeMap<String, Array>, EvalError> {
        let sys = self.sys;
        let mut arrays = BTreeMap::new();
        for (vi, decl) in sys.vars.iter().enumerate() {
            let mut arr = Array::new();
            for p in domain_points(&decl.name, self.domains.var(sys, vi), self.n)? {
                let v = self.value(vi, p.clone())?;
                arr.insert(p, v);
            }
            arrays.insert(decl.name.clone(), arr);
        }
        Ok(arrays)
    }

    fn contributors(&mut self, red: &'a Reduction, case: (usize, usize), y: &[i64]) -> Result<Vec<Point>, EvalError> {
        let key = red as *const Reduction as usize;
        if !self.buckets.contains_key(&key) {
            let sys = self.sys;
            let dom = self.domains.effective.entry(key).or_insert_with(|| {
                let eq = &sys.equations[case.0];
                sys.effective_domain(red, &sys.case_region(eq, &eq.cases[case.1]))
            });
            let target = &self.sys.equations[case.0].target;
            let mut map: HashMap<Point, Vec<Point>> = HashMap::new();
            for z in domain_points(target, dom, self.n)? {
                map.entry(red.projection.apply(&z, &[self.n])).or_default().push(z);
            }
            self.buckets.insert(key, map);
        }
        Ok(self.buckets[&key].get(y).cloned().unwrap_or_default())
    }
}

/// Evaluates every point of every non-input variable; returns the valuation and the operation count.
///
/// The count is one per binary operator or function application evaluated
/// outside reductions plus one per folded reduction point.
pub fn evaluate_counting(
    sys: &EquationSystem,
    n: i64,
    inputs: &BTreeMap<String, Array>,
) -> Result<(Valuation, u64), EvalError> {
    evaluate_with(sys, n, inputs, &mut Domains::default())
}

fn evaluate_with(
    sys: &EquationSystem,
    n: i64,
    inputs: &BTreeMap<String, Array>,
    domains: &mut Domains,
) -> Result<(Valuation, u64), EvalError> {
    if n < sys.param.min {
        return Err(EvalError::ParamTooSmall { value: n, min: sys.param.min });
    }
    let mut ev = Evaluator {
        sys,
        n,
        inputs,
        memo: HashMap::new(),
        active: HashSet::new(),
        stack: Vec::new(),
        buckets: HashMap::new(),
        domains: std::mem::take(domains),
        ops: 0,
    };
    let result = ev.run();
    *domains = ev.domains;
    result.map(|arrays| (Valuation { param: n, arrays }, ev.ops))
}

pub fn evaluate(sys: &EquationSystem, n: i64, inputs: &BTreeMap<String, Array>) -> Result<Valuation, EvalError> {
    evaluate_counting(sys, n, inputs).map(|(v, _)| v)
}

/// Operation count of a full evaluation on seeded random inputs.
pub fn count_ops(sys: &EquationSystem, n: i64) -> Result<u64, EvalError> {
    let inputs = random_inputs(sys, n, 0)?;
    evaluate_counting(sys, n, &inputs).map(|(_, c)| c)
}

/// Least-squares slope of log(count) against log(N).
pub fn fitted_degree(sys: &EquationSystem, ns: &[i64]) -> Result<f64, EvalError> {
    let mut pts = Vec::new();
    for &n in ns {
        pts.push(((n as f64).ln(), (count_ops(sys, n)?.max(1) as f64).ln()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: i64,
    pub trial: u32,
    pub var: String,
    pub point: Point,
    pub left: Option<Value>,
    pub right: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent { comparisons: usize },
    Mismatch(Mismatch),
}

/// Seed of one trial, so every (N, trial) pair draws its own inputs.
pub fn trial_seed(seed: u64, n: i64, trial: u32) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((n as u64) << 20) ^ trial as u64
}

/// Compares the outputs of `a` and `b` on identical random inputs.
pub fn equivalent(
    a: &EquationSystem,
    b: &EquationSystem,
    ns: &[i64],
    trials: u32,
    seed: u64,
) -> Result<Verdict, EvalError> {
    let outputs: Vec<&str> = a.vars.iter().filter(|v| v.role == Role::Output).map(|v| v.name.as_str()).collect();
    let mut comparisons = 0;
    let (mut da, mut db) = (Domains::default(), Domains::default());
    for &n in ns {
        for t in 0..trials {
            let inputs = random_inputs(a, n, trial_seed(seed, n, t))?;
            let (va, _) = evaluate_with(a, n, &inputs, &mut da)?;
            let (vb, _) = evaluate_with(b, n, &inputs, &mut db)?;
            for name in &outputs {
                let empty = Array::new();
                let xa = &va.arrays[*name];
                let xb = vb.arrays.get(*name).unwrap_or(&empty);
                let keys: std::collections::BTreeSet<&Point> = xa.keys().chain(xb.keys()).collect();
                for p in keys {
                    let (l, r) = (xa.get(p), xb.get(p));
                    if l != r {
                        return Ok(Verdict::Mismatch(Mismatch {
                            n,
                            trial: t,
                            var: name.to_string(),
                            point: p.clone(),
                            left: l.cloned(),
                            right: r.cloned(),
                        }));
                    }
                    comparisons += 1;
                }
            }
        }
    }
    Ok(Verdict::Equivalent { comparisons })
}
