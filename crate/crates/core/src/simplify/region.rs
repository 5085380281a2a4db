//! Region utilities used when rewriting equations: disjoint differences,
//! implication-based pruning of guards, and single-point fiber solving.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::geometry::constraint::{Constraint, ConstraintKind};
use crate::geometry::space::rref;
use crate::geometry::{lp, Polyhedron, Rat};
use crate::ir::{AffineMap, Expr};

/// `p \ q` as disjoint pieces, complementing `q`'s constraints in order.
pub fn difference(p: &Polyhedron, q: &Polyhedron) -> Vec<Polyhedron> {
    if p.is_empty() {
        return Vec::new();
    }
    if q.is_empty() {
        return vec![p.clone()];
    }
    let mut out = Vec::new();
    let mut prev: Vec<Constraint> = Vec::new();
    for c in &q.constraints {
        let negations: Vec<Constraint> = if c.is_equality() {
            let ge = c.as_inequality();
            let le = Constraint::new(c.coeffs.iter().map(|v| -v).collect(), -&c.constant, ConstraintKind::Inequality);
            vec![ge.complement(), le.complement()]
        } else {
            vec![c.complement()]
        };
        for neg in negations {
            let mut extra = prev.clone();
            extra.push(neg);
            let piece = p.with_constraints(&extra);
            if !piece.is_empty() {
                out.push(piece);
            }
        }
        prev.push(c.clone());
    }
    out
}

/// Whether every rational point of `cons` satisfies `c`.
pub fn implies(n: usize, cons: &[Constraint], c: &Constraint) -> bool {
    let holds = |form: &Constraint| match lp::inf_of(n, cons, form) {
        None => false,
        Some(None) => true,
        Some(Some(v)) => !v.is_negative(),
    };
    if c.is_equality() {
        let neg = Constraint::new(c.coeffs.iter().map(|v| -v).collect(), -&c.constant, ConstraintKind::Inequality);
        holds(&c.as_inequality()) && holds(&neg)
    } else {
        holds(c)
    }
}

/// `a ⊆ b` over the rationals.
pub fn subset(a: &Polyhedron, b: &Polyhedron) -> bool {
    a.is_empty() || b.constraints.iter().all(|c| implies(a.dim_total(), &a.constraints, c))
}

/// The constraints of `p` not implied by `context` together with the others kept.
pub fn gist(p: &Polyhedron, context: &[Constraint]) -> Polyhedron {
    let n = p.dim_total();
    let mut kept: Vec<Constraint> = p.constraints.clone();
    let mut k = kept.len();
    while k > 0 {
        k -= 1;
        let mut others: Vec<Constraint> = context.to_vec();
        others.extend(kept.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, c)| c.clone()));
        if implies(n, &others, &kept[k]) {
            kept.remove(k);
        }
    }
    Polyhedron { n_index: p.n_index, n_param: p.n_param, constraints: kept }
}

/// Constraints of `region` (over the map's outputs) pulled back to its inputs.
pub fn preimage(map: &AffineMap, region: &Polyhedron) -> Vec<Constraint> {
    region.constraints.iter().map(|c| map.pullback(c)).collect()
}

/// When every fiber `{z ∈ piece : Bz = y}` has at most one point, returns
/// `z` as an integer affine function of `(y, N)` and the equalities on
/// `(y, N)` needed for the fiber to be consistent.
pub fn single_point_fiber(piece: &Polyhedron, b: &AffineMap) -> Option<(AffineMap, Vec<Constraint>)> {
    let n = piece.n_index;
    let m = b.out_dim();
    let np = piece.n_param;
    let width = n + m + np + 1;
    let int = |v: &BigInt| Rat::from_integer(v.clone());
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for r in 0..m {
        let mut row = vec![Rat::zero(); width];
        for t in 0..n {
            row[t] = int(&b.matrix[r][t]);
        }
        row[n + r] = -Rat::one();
        for t in 0..np {
            row[n + m + t] = int(&b.param_matrix[r][t]);
        }
        row[width - 1] = int(&b.constant[r]);
        rows.push(row);
    }
    for c in piece.equalities() {
        let mut row = vec![Rat::zero(); width];
        for t in 0..n {
            row[t] = int(&c.coeffs[t]);
        }
        for t in 0..np {
            row[n + m + t] = int(&c.coeffs[n + t]);
        }
        row[width - 1] = int(&c.constant);
        rows.push(row);
    }
    let (red, pivots) = rref(&rows, width);
    let mut map = AffineMap { matrix: vec![Vec::new(); n], param_matrix: vec![Vec::new(); n], constant: vec![BigInt::zero(); n] };
    let mut solved = vec![false; n];
    let mut consistency = Vec::new();
    for (row, &p) in red.iter().zip(&pivots) {
        if p == width - 1 {
            return None;
        }
        let tail = &row[n..];
        if p < n {
            if row[..n].iter().enumerate().any(|(t, v)| t != p && !v.is_zero()) {
                return None;
            }
            if tail.iter().any(|v| !v.is_integer()) {
                return None;
            }
            let neg = |v: &Rat| -v.to_integer();
            map.matrix[p] = tail[..m].iter().map(neg).collect();
            map.param_matrix[p] = tail[m..m + np].iter().map(neg).collect();
            map.constant[p] = neg(&tail[m + np]);
            solved[p] = true;
        } else {
            let ints = lp::integer_direction(tail);
            consistency.push(Constraint::new(ints[..m + np].to_vec(), ints[m + np].clone(), ConstraintKind::Equality));
        }
    }
    if !solved.iter().all(|&s| s) {
        return None;
    }
    Some((map, consistency))
}

/// The body with every read access composed with `inner`.
pub fn substitute(e: &Expr, inner: &AffineMap) -> Expr {
    match e {
        Expr::Const(_) => e.clone(),
        Expr::Read { var, access } => Expr::Read { var: var.clone(), access: access.compose(inner) },
        Expr::Call { func, arg } => Expr::Call { func: func.clone(), arg: Box::new(substitute(arg, inner)) },
        Expr::Binary { op, lhs, rhs } => Expr::binary(*op, substitute(lhs, inner), substitute(rhs, inner)),
        Expr::Reduce(_) => e.clone(),
    }
}

/// Whether `v` lies in the row space of `rows`.
pub fn in_row_space(rows: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let n = v.len();
    let base = crate::geometry::space::rank(rows, n);
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    crate::geometry::space::rank(&with, n) == base
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_i64s(v: &[BigInt]) -> Vec<i64> {
    use num_traits::ToPrimitive;
    v.iter().map(|x| x.to_i64().expect("small integer")).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}
