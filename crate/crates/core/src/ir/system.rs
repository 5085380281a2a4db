use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::affine::AffineMap;
use super::value::{BinOp, FuncKind, ReduceOp, Value};
use crate::geometry::constraint::{Constraint, ConstraintKind};
use crate::geometry::{fm, Polyhedron};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Value),
    /// `var[access(z)]` where `z` ranges over the enclosing index space.
    Read { var: String, access: AffineMap },
    Call { func: String, arg: Box<Expr> },
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Reduce(Box<Reduction>),
}

impl Expr {
    pub fn read(var: &str, access: AffineMap) -> Expr {
        Expr::Read { var: var.to_string(), access }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    /// Visits every read outside reductions together with each reduction.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Call { arg, .. } => arg.walk(f),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.walk(f);
                rhs.walk(f);
            }
            Expr::Const(_) | Expr::Read { .. } | Expr::Reduce(_) => {}
        }
    }

    /// Reads of variables at this level (not inside reductions).
    pub fn direct_reads(&self) -> Vec<(&str, &AffineMap)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Read { var, access } = e {
                out.push((var.as_str(), access));
            }
        });
        out
    }

    pub fn reductions(&self) -> Vec<&Reduction> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Reduce(r) = e {
                out.push(r.as_ref());
            }
        });
        out
    }

    pub fn calls(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            match e {
                Expr::Call { func, arg } => {
                    out.push(func.as_str());
                    stack.push(arg);
                }
                Expr::Binary { lhs, rhs, .. } => {
                    stack.push(lhs);
                    stack.push(rhs);
                }
                Expr::Reduce(r) => stack.push(&r.body),
                _ => {}
            }
        }
        out
    }

    /// Number of binary/call nodes outside reductions.
    pub fn op_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |e| {
            if matches!(e, Expr::Binary { .. } | Expr::Call { .. }) {
                n += 1;
            }
        });
        n
    }
}

/// `reduce(op, projection, domain, body)`: for a result point `y`, folds
/// `body(z)` over every `z ∈ domain` with `projection(z) = y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reduction {
    pub op: ReduceOp,
    pub names: Vec<String>,
    pub projection: AffineMap,
    pub domain: Polyhedron,
    pub body: Expr,
}

impl Reduction {
    /// The single array read of the body (possibly under a function wrapper).
    pub fn body_read(&self) -> Option<(&str, &AffineMap)> {
        let mut e = &self.body;
        loop {
            match e {
                Expr::Read { var, access } => return Some((var, access)),
                Expr::Call { arg, .. } => e = arg,
                _ => return None,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Case {
    /// Constraints over the equation's index dims and the parameter.
    pub guard: Polyhedron,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub target: String,
    pub names: Vec<String>,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Input,
    Output,
    Local,
}

impl Role {
    pub fn keyword(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
            Role::Local => "var",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub role: Role,
    pub names: Vec<String>,
    pub domain: Polyhedron,
}

impl VarDecl {
    pub fn dims(&self) -> usize {
        self.names.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub min: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    pub param: Param,
    pub funcs: BTreeMap<String, FuncKind>,
    pub vars: Vec<VarDecl>,
    pub equations: Vec<Equation>,
}

impl EquationSystem {
    pub fn var(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn equation(&self, target: &str) -> Option<&Equation> {
        self.equations.iter().find(|e| e.target == target)
    }

    pub fn equation_mut(&mut self, target: &str) -> Option<&mut Equation> {
        self.equations.iter_mut().find(|e| e.target == target)
    }

    pub fn param_names(&self) -> Vec<String> {
        vec![self.param.name.clone()]
    }

    /// `N ≥ min` as a constraint over `n_index` index dims followed by the parameter.
    pub fn context_constraint(&self, n_index: usize) -> Constraint {
        let mut coeffs = vec![BigInt::from(0); n_index];
        coeffs.push(BigInt::from(1));
        Constraint::new(coeffs, BigInt::from(-self.param.min), ConstraintKind::Inequality)
    }

    pub fn with_context(&self, p: &Polyhedron) -> Polyhedron {
        p.with_constraints(&[self.context_constraint(p.n_index)])
    }

    /// Region where a case applies: guard ∩ variable domain ∩ context.
    pub fn case_region(&self, eq: &Equation, case: &Case) -> Polyhedron {
        let decl = self.var(&eq.target).expect("validated target");
        self.with_context(&case.guard.intersect(&decl.domain))
    }

    /// Reduction domain restricted to iterations whose result lands in `region`.
    pub fn effective_domain(&self, red: &Reduction, region: &Polyhedron) -> Polyhedron {
        let pulled: Vec<Constraint> = region.constraints.iter().map(|c| red.projection.pullback(c)).collect();
        self.with_context(&red.domain.with_constraints(&pulled))
    }

    pub fn func(&self, name: &str) -> Option<FuncKind> {
        self.funcs.get(name).copied()
    }
}

/// Image of `domain` (over `z, p`) under `map`, as a polyhedron over `(y, p)`.
pub fn image(domain: &Polyhedron, map: &AffineMap) -> Polyhedron {
    let n_out = map.out_dim();
    let n_in = domain.n_index;
    let n_param = domain.n_param;
    // space (y, z, p)
    let mut cons: Vec<Constraint> = map.graph_equalities();
    for c in &domain.constraints {
        cons.push(c.insert_dims(0, n_out));
    }
    let drop: Vec<usize> = (n_out..n_out + n_in).collect();
    let eliminated = fm::eliminate_all(&cons, &drop);
    let projected: Vec<Constraint> = eliminated
        .into_iter()
        .map(|c| {
            let mut coeffs: Vec<BigInt> = c.coeffs[..n_out].to_vec();
            coeffs.extend(c.coeffs[n_out + n_in..].iter().cloned());
            Constraint::new(coeffs, c.constant.clone(), c.kind)
        })
        .collect();
    Polyhedron::from_constraints(projected, n_out, n_param)
}
