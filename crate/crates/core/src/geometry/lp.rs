//! Exact rational linear programming (two-phase tableau simplex, Bland's rule).
//!
//! Variables are free; each constraint is a [`Constraint`] over them. The
//! solver is dense and unoptimized, which is fine at the sizes this crate
//! deals with (a dozen variables, a few dozen rows).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::constraint::{Constraint, ConstraintKind};
use super::Rat;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj·u` over the current feasible basis. `allowed` masks entering columns.
    /// Returns false when unbounded.
    fn run(&mut self, obj: &[Rat], allowed: &[bool]) -> bool {
        loop {
            // reduced cost d_j = obj_j - obj_B · column_j
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !obj[b].is_zero() {
                        d -= &obj[b] * &self.rows[i][j];
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Maximizes `objective·x - l1_weight·|x|₁` subject to `constraints` over free variables `x ∈ Qⁿ`.
pub fn maximize(n: usize, constraints: &[Constraint], objective: &[Rat], l1_weight: &Rat) -> LpOutcome {
    debug_assert_eq!(objective.len(), n);
    // constant-only rows are decided immediately
    let mut live = Vec::new();
    for c in constraints {
        debug_assert_eq!(c.dim(), n);
        if c.is_constant() {
            if !c.constant_holds() {
                return LpOutcome::Infeasible;
            }
        } else {
            live.push(c);
        }
    }
    let n_slack = live.iter().filter(|c| c.kind == ConstraintKind::Inequality).count();
    let m = live.len();
    // columns: p (n), q (n), slacks, artificials (m)
    let base_cols = 2 * n + n_slack;
    let cols = base_cols + m;
    let mut rows = vec![vec![Rat::zero(); cols]; m];
    let mut rhs = vec![Rat::zero(); m];
    let mut slack = 2 * n;
    for (i, c) in live.iter().enumerate() {
        // c·x + γ (≥|=) 0   ->   c·p - c·q (- s) = -γ
        for k in 0..n {
            let v = Rat::from_integer(c.coeffs[k].clone());
            rows[i][k] = v.clone();
            rows[i][n + k] = -v;
        }
        if c.kind == ConstraintKind::Inequality {
            rows[i][slack] = -Rat::one();
            slack += 1;
        }
        rhs[i] = Rat::from_integer(-c.constant.clone());
        if rhs[i].is_negative() {
            for v in rows[i].iter_mut() {
                *v = -v.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
        rows[i][base_cols + i] = Rat::one();
    }
    let mut t = Tableau { rows, rhs, basis: (base_cols..cols).collect(), cols };

    let mut phase1 = vec![Rat::zero(); cols];
    for v in phase1.iter_mut().skip(base_cols) {
        *v = -Rat::one();
    }
    let all = vec![true; cols];
    t.run(&phase1, &all);
    let infeas: Rat = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(b, _)| **b >= base_cols)
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= base_cols {
            if let Some(c) = (0..base_cols).find(|&c| !t.rows[i][c].is_zero()) {
                t.pivot(i, c);
                i += 1;
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let mut allowed = vec![true; cols];
    for a in allowed.iter_mut().skip(base_cols) {
        *a = false;
    }
    let mut phase2 = vec![Rat::zero(); cols];
    for k in 0..n {
        phase2[k] = &objective[k] - l1_weight;
        phase2[n + k] = -&objective[k] - l1_weight;
    }
    if !t.run(&phase2, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut u = vec![Rat::zero(); cols];
    for (i, &b) in t.basis.iter().enumerate() {
        u[b] = t.rhs[i].clone();
    }
    let point: Vec<Rat> = (0..n).map(|k| &u[k] - &u[n + k]).collect();
    let value: Rat = (0..cols).map(|j| &phase2[j] * &u[j]).sum();
    LpOutcome::Optimal { value, point }
}

/// Some rational point of the system, preferring small L1 norm; `None` when infeasible.
pub fn feasible_point(n: usize, constraints: &[Constraint]) -> Option<Vec<Rat>> {
    match maximize(n, constraints, &vec![Rat::zero(); n], &Rat::one()) {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Infeasible => None,
        // min-L1 over a nonempty set is bounded below, never unbounded
        LpOutcome::Unbounded => unreachable!("L1 minimization cannot be unbounded"),
    }
}

pub fn is_feasible(n: usize, constraints: &[Constraint]) -> bool {
    feasible_point(n, constraints).is_some()
}

/// Supremum of `c·x + γ` (given as a constraint's linear form) over the system.
/// `None` means unbounded; `Some(None)` means the system is infeasible.
pub fn sup_of(n: usize, constraints: &[Constraint], form: &Constraint) -> Option<Option<Rat>> {
    let obj: Vec<Rat> = form.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect();
    match maximize(n, constraints, &obj, &Rat::zero()) {
        LpOutcome::Infeasible => Some(None),
        LpOutcome::Unbounded => None,
        LpOutcome::Optimal { value, .. } => Some(Some(value + Rat::from_integer(form.constant.clone()))),
    }
}

/// Infimum of `c·x + γ`; same conventions as [`sup_of`].
pub fn inf_of(n: usize, constraints: &[Constraint], form: &Constraint) -> Option<Option<Rat>> {
    let neg = Constraint {
        coeffs: form.coeffs.iter().map(|c| -c).collect(),
        constant: -&form.constant,
        kind: ConstraintKind::Inequality,
    };
    sup_of(n, constraints, &neg).map(|o| o.map(|v| -v))
}

/// Clears denominators of a rational vector and divides by the gcd.
pub fn integer_direction(v: &[Rat]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for r in v {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|r| r.numer() * &lcm / r.denom()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
