//! Fourier-Motzkin elimination over exact rationals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::constraint::{Constraint, ConstraintKind};
use super::lp;

/// Eliminates variable `var` (keeping the column, which becomes all zero).
///
/// Equalities mentioning `var` are used for substitution; otherwise every
/// (lower, upper) pair of inequalities is combined.
pub fn eliminate(constraints: &[Constraint], var: usize) -> Vec<Constraint> {
    if let Some(pos) = constraints
        .iter()
        .position(|c| c.is_equality() && !c.coeffs[var].is_zero())
    {
        let e = &constraints[pos];
        let mut out = Vec::with_capacity(constraints.len());
        for (k, c) in constraints.iter().enumerate() {
            if k == pos {
                continue;
            }
            if c.coeffs[var].is_zero() {
                out.push(c.clone());
                continue;
            }
            // c' = e_v * c - c_v * e, keeping the sign of c for inequalities
            let (ev, cv) = (&e.coeffs[var], &c.coeffs[var]);
            let (sa, sb) = if ev.is_negative() { (-ev, -cv) } else { (ev.clone(), cv.clone()) };
            let coeffs: Vec<BigInt> = c
                .coeffs
                .iter()
                .zip(&e.coeffs)
                .map(|(a, b)| &sa * a - &sb * b)
                .collect();
            let constant = &sa * &c.constant - &sb * &e.constant;
            out.push(Constraint::new(coeffs, constant, c.kind));
        }
        return prune(out);
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut out = Vec::new();
    for c in constraints {
        let v = &c.coeffs[var];
        if v.is_zero() {
            out.push(c.clone());
        } else if v.is_positive() {
            lower.push(c);
        } else {
            upper.push(c);
        }
    }
    for l in &lower {
        for u in &upper {
            let a = -&u.coeffs[var]; // > 0
            let b = l.coeffs[var].clone(); // > 0
            let coeffs: Vec<BigInt> = l
                .coeffs
                .iter()
                .zip(&u.coeffs)
                .map(|(x, y)| &a * x + &b * y)
                .collect();
            let constant = &a * &l.constant + &b * &u.constant;
            out.push(Constraint::new(coeffs, constant, ConstraintKind::Inequality));
        }
    }
    prune(out)
}

/// Eliminates every variable in `vars`.
pub fn eliminate_all(constraints: &[Constraint], vars: &[usize]) -> Vec<Constraint> {
    let mut cur = constraints.to_vec();
    for &v in vars {
        cur = eliminate(&cur, v);
        if cur.len() > 24 {
            cur = remove_redundant(&cur);
        }
    }
    cur
}

/// Drops tautologies and duplicate/dominated constraints; collapses to a single
/// contradiction when one is found.
pub fn prune(constraints: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::with_capacity(constraints.len());
    for c in constraints {
        if c.is_constant() {
            if c.constant_holds() {
                continue;
            }
            return vec![c];
        }
        if let Some(existing) = out
            .iter_mut()
            .find(|o| o.coeffs == c.coeffs && o.kind == c.kind && o.kind == ConstraintKind::Inequality)
        {
            if c.constant < existing.constant {
                *existing = c;
            }
            continue;
        }
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Exact redundancy removal: a constraint is dropped when the others already imply it.
pub fn remove_redundant(constraints: &[Constraint]) -> Vec<Constraint> {
    let Some(first) = constraints.first() else { return Vec::new() };
    let n = first.dim();
    let mut keep: Vec<Constraint> = prune(constraints.to_vec());
    if keep.len() == 1 && keep[0].is_constant() {
        return keep;
    }
    let mut i = 0;
    while i < keep.len() {
        let others: Vec<Constraint> = keep
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, c)| c.clone())
            .collect();
        let c = &keep[i];
        let implied = match c.kind {
            ConstraintKind::Inequality => matches!(lp::inf_of(n, &others, c), Some(Some(v)) if !v.is_negative())
                || matches!(lp::inf_of(n, &others, c), Some(None)),
            ConstraintKind::Equality => {
                let lo = lp::inf_of(n, &others, c);
                let hi = lp::sup_of(n, &others, c);
                matches!((lo, hi), (Some(Some(a)), Some(Some(b))) if a.is_zero() && b.is_zero())
            }
        };
        if implied {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    keep
}

/// Feasibility decided purely by elimination (used as an independent check on the simplex).
pub fn fm_feasible(constraints: &[Constraint]) -> bool {
    let Some(first) = constraints.first() else { return true };
    let n = first.dim();
    let mut cur = constraints.to_vec();
    for v in 0..n {
        cur = eliminate(&cur, v);
    }
    cur.iter().all(|c| !c.is_constant() || c.constant_holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_triangle_onto_first() {
        // 1 <= i, i <= j <= 2i - 1, j <= 7  -> eliminate j
        let cons = vec![
            Constraint::ineq(&[1, 0], -1),
            Constraint::ineq(&[-1, 1], 0),
            Constraint::ineq(&[2, -1], -1),
            Constraint::ineq(&[0, -1], 7),
        ];
        let p = remove_redundant(&eliminate(&cons, 1));
        assert!(p.contains(&Constraint::ineq(&[1, 0], -1)));
        assert!(p.contains(&Constraint::ineq(&[-1, 0], 7)));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn equality_substitution() {
        // i = j, 0 <= j <= 4  -> 0 <= i <= 4
        let cons = vec![
            Constraint::eq(&[1, -1], 0),
            Constraint::ineq(&[0, 1], 0),
            Constraint::ineq(&[0, -1], 4),
        ];
        let p = eliminate(&cons, 1);
        assert!(p.contains(&Constraint::ineq(&[1, 0], 0)));
        assert!(p.contains(&Constraint::ineq(&[-1, 0], 4)));
    }

    #[test]
    fn fm_matches_simplex_on_small_systems() {
        let sys = vec![
            Constraint::ineq(&[1, 1], -3),
            Constraint::ineq(&[-1, 0], 1),
            Constraint::ineq(&[0, -1], 1),
        ];
        assert_eq!(fm_feasible(&sys), lp::is_feasible(2, &sys));
        assert!(!fm_feasible(&sys));
    }
}
