use std::collections::BTreeSet;

use thiserror::Error;

use super::system::{EquationSystem, Expr, Role};
use crate::geometry::lp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("variable `{0}` declared more than once")]
    DuplicateVariable(String),
    #[error("variable `{0}` defined by more than one equation")]
    MultipleDefinitions(String),
    #[error("equation for undeclared variable `{0}`")]
    UndeclaredTarget(String),
    #[error("input variable `{0}` cannot be defined by an equation")]
    InputDefined(String),
    #[error("variable `{0}` has no defining equation")]
    Undefined(String),
    #[error("read of undeclared variable `{0}`")]
    UndeclaredRead(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{var}` expects {expected} indices, found {found}")]
    Arity { var: String, expected: usize, found: usize },
    #[error("guards of `{var}` overlap at {point:?} (N = {n})")]
    OverlappingGuards { var: String, point: Vec<i64>, n: i64 },
    #[error("guards of `{var}` do not cover {point:?} (N = {n})")]
    Uncovered { var: String, point: Vec<i64>, n: i64 },
    #[error("`{reader}` reads `{var}` out of bounds at {point:?} (N = {n})")]
    OutOfBounds { reader: String, var: String, point: Vec<i64>, n: i64 },
    #[error("domain of `{0}` is unbounded")]
    Unbounded(String),
}

/// Parameter values at which enumeration-based checks run.
pub fn check_params(sys: &EquationSystem) -> Vec<i64> {
    let lo = sys.param.min;
    let mut ns: Vec<i64> = (lo..=lo + 3).collect();
    if !ns.contains(&4) && lo <= 4 {
        ns.push(4);
    }
    ns
}

pub fn validate(sys: &EquationSystem) -> Result<(), ValidationError> {
    let mut seen = BTreeSet::new();
    for v in &sys.vars {
        if !seen.insert(v.name.as_str()) {
            return Err(ValidationError::DuplicateVariable(v.name.clone()));
        }
    }
    let mut defined = BTreeSet::new();
    for eq in &sys.equations {
        let decl = sys.var(&eq.target).ok_or_else(|| ValidationError::UndeclaredTarget(eq.target.clone()))?;
        if decl.role == Role::Input {
            return Err(ValidationError::InputDefined(eq.target.clone()));
        }
        if !defined.insert(eq.target.as_str()) {
            return Err(ValidationError::MultipleDefinitions(eq.target.clone()));
        }
        if eq.names.len() != decl.dims() {
            return Err(ValidationError::Arity { var: eq.target.clone(), expected: decl.dims(), found: eq.names.len() });
        }
    }
    for v in &sys.vars {
        if v.role != Role::Input && !defined.contains(v.name.as_str()) {
            return Err(ValidationError::Undefined(v.name.clone()));
        }
    }
    for eq in &sys.equations {
        for case in &eq.cases {
            check_expr_refs(sys, &case.expr, eq.names.len())?;
        }
    }
    check_guards(sys)?;
    check_bounds(sys)?;
    Ok(())
}

fn check_expr_refs(sys: &EquationSystem, e: &Expr, n_in: usize) -> Result<(), ValidationError> {
    for f in e.calls() {
        if sys.func(f).is_none() {
            return Err(ValidationError::UnknownFunction(f.to_string()));
        }
    }
    for (var, access) in e.direct_reads() {
        let decl = sys.var(var).ok_or_else(|| ValidationError::UndeclaredRead(var.to_string()))?;
        if access.out_dim() != decl.dims() {
            return Err(ValidationError::Arity { var: var.to_string(), expected: decl.dims(), found: access.out_dim() });
        }
        debug_assert_eq!(access.in_dim(), n_in);
    }
    for r in e.reductions() {
        if r.projection.out_dim() != n_in {
            return Err(ValidationError::Arity { var: "reduce".into(), expected: n_in, found: r.projection.out_dim() });
        }
        check_expr_refs(sys, &r.body, r.names.len())?;
    }
    Ok(())
}

fn check_guards(sys: &EquationSystem) -> Result<(), ValidationError> {
    for eq in &sys.equations {
        let decl = sys.var(&eq.target).unwrap();
        let regions: Vec<_> = eq.cases.iter().map(|c| sys.case_region(eq, c)).collect();
        // symbolic disjointness first; confirm overlaps on concrete points
        for a in 0..regions.len() {
            for b in a + 1..regions.len() {
                let both = regions[a].intersect(&regions[b]);
                if both.is_empty() || !lp::is_feasible(both.dim_total(), &both.constraints) {
                    continue;
                }
                for n in check_params(sys) {
                    let pts = both.points(&[n]).map_err(|_| ValidationError::Unbounded(eq.target.clone()))?;
                    if let Some(p) = pts.into_iter().next() {
                        return Err(ValidationError::OverlappingGuards { var: eq.target.clone(), point: p, n });
                    }
                }
            }
        }
        for n in check_params(sys) {
            let dom = sys.with_context(&decl.domain);
            let pts = dom.points(&[n]).map_err(|_| ValidationError::Unbounded(eq.target.clone()))?;
            for p in pts {
                let mut full = p.clone();
                full.push(n);
                if !regions.iter().any(|r| r.contains_int(&full)) {
                    return Err(ValidationError::Uncovered { var: eq.target.clone(), point: p, n });
                }
            }
        }
    }
    Ok(())
}

fn in_domain(sys: &EquationSystem, var: &str, point: &[i64], n: i64) -> bool {
    let decl = sys.var(var).unwrap();
    let mut full = point.to_vec();
    full.push(n);
    decl.domain.contains_int(&full)
}

fn check_bounds(sys: &EquationSystem) -> Result<(), ValidationError> {
    for eq in &sys.equations {
        for case in &eq.cases {
            let region = sys.case_region(eq, case);
            for n in check_params(sys) {
                let pts = region.points(&[n]).map_err(|_| ValidationError::Unbounded(eq.target.clone()))?;
                for z in &pts {
                    for (var, access) in case.expr.direct_reads() {
                        let y = access.apply(z, &[n]);
                        if !in_domain(sys, var, &y, n) {
                            return Err(ValidationError::OutOfBounds {
                                reader: eq.target.clone(),
                                var: var.to_string(),
                                point: y,
                                n,
                            });
                        }
                    }
                }
                for red in case.expr.reductions() {
                    let dom = sys.effective_domain(red, &region);
                    let zs = dom.points(&[n]).map_err(|_| ValidationError::Unbounded(eq.target.clone()))?;
                    for z in &zs {
                        for (var, access) in red.body.direct_reads() {
                            let y = access.apply(z, &[n]);
                            if !in_domain(sys, var, &y, n) {
                                return Err(ValidationError::OutOfBounds {
                                    reader: eq.target.clone(),
                                    var: var.to_string(),
                                    point: y,
                                    n,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
