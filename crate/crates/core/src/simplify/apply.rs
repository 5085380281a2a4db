//! One simplification step: rewrite a reduction along a reuse vector `ρ`.
//!
//! With `r = Bρ`, for every result point `y` whose predecessor `y − r` is in
//! the same region,
//!
//! `acc[y] = acc[y − r] ⊕ (E \ (E + ρ))_y ⊖ ((E + ρ) \ E)_y`
//!
//! and elsewhere `acc[y]` is the fold of the vacated pieces alone.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::region::{difference, gist, is_zero_vec, preimage, single_point_fiber, subset, substitute};
use crate::geometry::space::mat_vec;
use crate::geometry::{translate_intersect_diff, Polyhedron};
use crate::ir::{AffineMap, BinOp, Case, Equation, EquationSystem, Expr, ReduceOp, Reduction, Role, VarDecl};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reject {
    /// `Bρ = 0`: the new dependence would have distance zero.
    ZeroImage,
    /// `ρ` is not in the share space of the reduction.
    OutsideShare,
    /// A nonempty ⊖ residual is needed but the operator has no inverse.
    NeedsInverse,
}

impl Reject {
    pub fn reason(&self) -> &'static str {
        match self {
            Reject::ZeroImage => "projection of rho is zero",
            Reject::OutsideShare => "rho is outside the share space",
            Reject::NeedsInverse => "operator has no inverse but a subtracted residual is nonempty",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Applied {
    pub system: EquationSystem,
    pub accumulator: String,
    pub r: Vec<BigInt>,
    /// Every variable introduced by the step, in declaration order.
    pub introduced: Vec<String>,
    /// Introduced variables still defined by a reduction.
    pub reductions: Vec<String>,
    pub added: usize,
    pub subtracted: usize,
}

fn combine(op: ReduceOp, a: Expr, b: Expr) -> Expr {
    Expr::binary(op.combine_op(), a, b)
}

fn uncombine(op: ReduceOp, a: Expr, b: Expr) -> Expr {
    Expr::binary(op.inverse_op().unwrap_or(BinOp::Sub), a, b)
}

fn replace_reduce(e: &Expr, with: &Expr) -> Expr {
    match e {
        Expr::Reduce(_) => with.clone(),
        Expr::Call { func, arg } => Expr::Call { func: func.clone(), arg: Box::new(replace_reduce(arg, with)) },
        Expr::Binary { op, lhs, rhs } => Expr::binary(*op, replace_reduce(lhs, with), replace_reduce(rhs, with)),
        _ => e.clone(),
    }
}

fn fresh(sys: &EquationSystem, taken: &BTreeSet<String>, base: &str) -> String {
    let free = |n: &str| sys.var(n).is_none() && !taken.contains(n);
    if free(base) {
        return base.to_string();
    }
    (2..).map(|k| format!("{}_{}", base, k)).find(|n| free(n)).unwrap()
}

/// A residual: fold of `piece` per result point, possibly a single read.
struct Residual {
    name: String,
    piece: Polyhedron,
    /// Region where the fiber is one point, and the body at that point.
    pointwise: Option<(Polyhedron, Expr)>,
    used: bool,
}

impl Residual {
    fn term(&mut self, at: &Polyhedron, proj: &AffineMap, m: usize) -> Option<Expr> {
        if let Some((g, body)) = &self.pointwise {
            if subset(at, g) {
                return Some(body.clone());
            }
            if at.intersect(g).is_empty() {
                return None;
            }
        } else if self.piece.with_constraints(&preimage(proj, at)).is_empty() {
            return None;
        }
        self.used = true;
        Some(Expr::read(&self.name, AffineMap::identity(m, 1)))
    }
}

/// Rewrites the reduction in case `case_idx` of `target`'s equation along `rho`.
pub fn apply_reuse(
    sys: &EquationSystem,
    target: &str,
    case_idx: usize,
    rho: &[BigInt],
    allow_inverse: bool,
) -> Result<Applied, Reject> {
    let eq = sys.equation(target).expect("target has an equation");
    let case = &eq.cases[case_idx];
    let red: Reduction = case.expr.reductions()[0].clone();
    let decl = sys.var(target).expect("declared target");
    let m = eq.names.len();
    let n = red.names.len();

    let r = mat_vec(&red.projection.matrix, rho);
    if is_zero_vec(&r) {
        return Err(Reject::ZeroImage);
    }
    let reads = red.body.direct_reads();
    if reads.iter().any(|(_, a)| !is_zero_vec(&mat_vec(&a.matrix, rho))) {
        return Err(Reject::OutsideShare);
    }
    let region = sys.case_region(eq, case);
    let e = sys.effective_domain(&red, &region);
    let split = translate_intersect_diff(&e, rho).map_err(|_| Reject::OutsideShare)?;

    let shifted = region.translate(&r);
    let rec = region.intersect(&shifted);
    let init = difference(&region, &shifted);
    let pre_rec = preimage(&red.projection, &rec);
    let adds: Vec<Polyhedron> = split.vacated.into_iter().map(|(_, p)| p).filter(|p| !p.is_empty()).collect();
    let subs: Vec<Polyhedron> = split
        .entered
        .into_iter()
        .map(|(_, p)| p.with_constraints(&pre_rec))
        .filter(|p| !p.is_empty())
        .collect();
    if !subs.is_empty() && !allow_inverse {
        return Err(Reject::NeedsInverse);
    }

    let ctx_y = sys.context_constraint(m);
    let ctx_z = sys.context_constraint(n);
    let mut taken = BTreeSet::new();
    let direct = matches!(case.expr, Expr::Reduce(_));
    let acc = if direct { target.to_string() } else { fresh(sys, &taken, &format!("{}_acc", target)) };
    taken.insert(acc.clone());

    let make = |piece: Polyhedron, tag: &str, k: usize, taken: &mut BTreeSet<String>| {
        let name = fresh(sys, taken, &format!("{}_{}{}", target, tag, k));
        taken.insert(name.clone());
        let pointwise = single_point_fiber(&piece, &red.projection).map(|(zmap, consistency)| {
            let mut g: Vec<_> = piece.constraints.iter().map(|c| zmap.pullback(c)).collect();
            g.extend(consistency);
            let g = Polyhedron::from_constraints(g, m, 1).intersect(&region);
            (g, substitute(&red.body, &zmap))
        });
        Residual { name, piece, pointwise, used: false }
    };
    let mut add_res: Vec<Residual> = adds.into_iter().enumerate().map(|(k, p)| make(p, "a", k, &mut taken)).collect();
    let mut sub_res: Vec<Residual> = subs.into_iter().enumerate().map(|(k, p)| make(p, "s", k, &mut taken)).collect();

    let acc_domain = if direct { decl.domain.clone() } else { gist(&region, &[ctx_y.clone()]) };
    let mut guard_ctx = acc_domain.constraints.clone();
    guard_ctx.push(ctx_y.clone());
    let mut new_cases = Vec::new();
    for piece in &init {
        let mut expr: Option<Expr> = None;
        for res in add_res.iter_mut() {
            if let Some(t) = res.term(piece, &red.projection, m) {
                expr = Some(match expr {
                    None => t,
                    Some(a) => combine(red.op, a, t),
                });
            }
        }
        let expr = expr.unwrap_or(Expr::Const(red.op.identity()));
        new_cases.push(Case { guard: gist(piece, &guard_ctx), expr });
    }
    if !rec.is_empty() {
        let mut expr = Expr::read(&acc, AffineMap::identity(m, 1).shifted(&r));
        for res in add_res.iter_mut() {
            if let Some(t) = res.term(&rec, &red.projection, m) {
                expr = combine(red.op, expr, t);
            }
        }
        for res in sub_res.iter_mut() {
            if let Some(t) = res.term(&rec, &red.projection, m) {
                expr = uncombine(red.op, expr, t);
            }
        }
        new_cases.push(Case { guard: gist(&rec, &guard_ctx), expr });
    }

    let mut out = sys.clone();
    let mut new_vars = Vec::new();
    let mut new_eqs = Vec::new();
    let eq_pos = out.equations.iter().position(|e| e.target == target).unwrap();
    if direct {
        let cases = &mut out.equations[eq_pos].cases;
        cases.splice(case_idx..case_idx + 1, new_cases);
    } else {
        let read = Expr::read(&acc, AffineMap::identity(m, 1));
        let c = &mut out.equations[eq_pos].cases[case_idx];
        c.expr = replace_reduce(&c.expr, &read);
        new_vars.push(VarDecl { name: acc.clone(), role: Role::Local, names: eq.names.clone(), domain: acc_domain });
        new_eqs.push(Equation { target: acc.clone(), names: eq.names.clone(), cases: new_cases });
    }

    let res_domain = gist(&region, &[ctx_y.clone()]);
    let mut res_ctx = res_domain.constraints.clone();
    res_ctx.push(ctx_y.clone());
    let mut reductions = Vec::new();
    let (added, subtracted) = (add_res.len(), sub_res.len());
    for res in add_res.into_iter().chain(sub_res).filter(|r| r.used) {
        let cases = match &res.pointwise {
            Some((g, body)) => {
                let mut cases = vec![Case { guard: gist(g, &res_ctx), expr: body.clone() }];
                for rest in difference(&region, g) {
                    cases.push(Case { guard: gist(&rest, &res_ctx), expr: Expr::Const(red.op.identity()) });
                }
                cases
            }
            None => {
                let mut zctx = preimage(&red.projection, &region);
                zctx.push(ctx_z.clone());
                let domain = gist(&res.piece, &zctx);
                reductions.push(res.name.clone());
                let reduction = Reduction {
                    op: red.op,
                    names: red.names.clone(),
                    projection: red.projection.clone(),
                    domain,
                    body: red.body.clone(),
                };
                vec![Case { guard: Polyhedron::universe(m, 1), expr: Expr::Reduce(Box::new(reduction)) }]
            }
        };
        new_vars.push(VarDecl { name: res.name.clone(), role: Role::Local, names: eq.names.clone(), domain: res_domain.clone() });
        new_eqs.push(Equation { target: res.name, names: eq.names.clone(), cases });
    }

    let introduced: Vec<String> = new_vars.iter().map(|v| v.name.clone()).collect();
    let var_pos = out.vars.iter().position(|v| v.name == target).unwrap();
    out.vars.splice(var_pos + 1..var_pos + 1, new_vars);
    out.equations.splice(eq_pos + 1..eq_pos + 1, new_eqs);
    Ok(Applied { system: out, accumulator: acc, r, introduced, reductions, added, subtracted })
}
