//! Affine constraints `c·x + γ ≥ 0` / `c·x + γ = 0` over index and parameter dimensions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    /// Equalities sort first in canonical order.
    Equality,
    Inequality,
}

/// A single affine constraint with integer coefficients.
///
/// Coefficients are kept cleared of denominators with gcd 1; equalities
/// additionally carry a positive leading entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<BigInt>,
    pub constant: BigInt,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigInt>, constant: BigInt, kind: ConstraintKind) -> Self {
        let mut c = Constraint { coeffs, constant, kind };
        c.normalize();
        c
    }

    pub fn ineq(coeffs: &[i64], constant: i64) -> Self {
        Self::new(
            coeffs.iter().map(|&v| BigInt::from(v)).collect(),
            BigInt::from(constant),
            ConstraintKind::Inequality,
        )
    }

    pub fn eq(coeffs: &[i64], constant: i64) -> Self {
        Self::new(
            coeffs.iter().map(|&v| BigInt::from(v)).collect(),
            BigInt::from(constant),
            ConstraintKind::Equality,
        )
    }

    /// Builds a constraint from rational coefficients, clearing denominators.
    pub fn from_rats(coeffs: &[Rat], constant: &Rat, kind: ConstraintKind) -> Self {
        let mut lcm = BigInt::one();
        for r in coeffs.iter().chain(std::iter::once(constant)) {
            lcm = lcm.lcm(r.denom());
        }
        let scale = |r: &Rat| (r.numer() * &lcm) / r.denom();
        Self::new(coeffs.iter().map(scale).collect(), scale(constant), kind)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_equality(&self) -> bool {
        self.kind == ConstraintKind::Equality
    }

    /// True when every coefficient is zero (the constraint is a tautology or a contradiction).
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// For a constant-only constraint: whether it holds.
    pub fn constant_holds(&self) -> bool {
        match self.kind {
            ConstraintKind::Equality => self.constant.is_zero(),
            ConstraintKind::Inequality => !self.constant.is_negative(),
        }
    }

    fn normalize(&mut self) {
        let mut g = BigInt::zero();
        for c in self.coeffs.iter() {
            g = g.gcd(c);
        }
        if g.is_zero() {
            // Constant-only: collapse to -1, 0 or 1.
            self.constant = match self.constant.sign() {
                num_bigint::Sign::Minus => -BigInt::one(),
                num_bigint::Sign::NoSign => BigInt::zero(),
                num_bigint::Sign::Plus => BigInt::one(),
            };
            return;
        }
        match self.kind {
            ConstraintKind::Equality => {
                g = g.gcd(&self.constant);
                let lead = self.coeffs.iter().find(|c| !c.is_zero()).unwrap();
                if lead.is_negative() {
                    g = -g;
                }
                for c in self.coeffs.iter_mut() {
                    *c = &*c / &g;
                }
                self.constant = &self.constant / &g;
            }
            ConstraintKind::Inequality => {
                // Integer tightening: a·x + γ ≥ 0 with gcd(a) = g implies (a/g)·x + ⌊γ/g⌋ ≥ 0
                // over integer points.
                for c in self.coeffs.iter_mut() {
                    *c = &*c / &g;
                }
                self.constant = self.constant.div_floor(&g);
            }
        }
    }

    /// Value of `c·x + γ` at a rational point.
    pub fn eval_rat(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::from_integer(self.constant.clone());
        for (c, v) in self.coeffs.iter().zip(x) {
            if !c.is_zero() {
                acc += Rat::from_integer(c.clone()) * v;
            }
        }
        acc
    }

    /// Value of `c·x + γ` at an integer point.
    pub fn eval_int(&self, x: &[i64]) -> BigInt {
        let mut acc = self.constant.clone();
        for (c, &v) in self.coeffs.iter().zip(x) {
            if !c.is_zero() {
                acc += c * BigInt::from(v);
            }
        }
        acc
    }

    pub fn satisfied_int(&self, x: &[i64]) -> bool {
        let v = self.eval_int(x);
        match self.kind {
            ConstraintKind::Equality => v.is_zero(),
            ConstraintKind::Inequality => !v.is_negative(),
        }
    }

    pub fn satisfied_rat(&self, x: &[Rat]) -> bool {
        let v = self.eval_rat(x);
        match self.kind {
            ConstraintKind::Equality => v.is_zero(),
            ConstraintKind::Inequality => !v.is_negative(),
        }
    }

    /// The constraint `-(c·x + γ) ≥ 0`.
    pub fn negated_ineq(&self) -> Constraint {
        Constraint::new(
            self.coeffs.iter().map(|c| -c).collect(),
            -&self.constant,
            ConstraintKind::Inequality,
        )
    }

    /// Integer complement of an inequality: `c·x + γ ≤ -1`.
    pub fn complement(&self) -> Constraint {
        Constraint::new(
            self.coeffs.iter().map(|c| -c).collect(),
            -&self.constant - 1,
            ConstraintKind::Inequality,
        )
    }

    pub fn as_equality(&self) -> Constraint {
        Constraint::new(self.coeffs.clone(), self.constant.clone(), ConstraintKind::Equality)
    }

    pub fn as_inequality(&self) -> Constraint {
        Constraint::new(self.coeffs.clone(), self.constant.clone(), ConstraintKind::Inequality)
    }

    /// Splits an equality into the two opposite inequalities.
    pub fn to_inequalities(&self) -> Vec<Constraint> {
        match self.kind {
            ConstraintKind::Inequality => vec![self.clone()],
            ConstraintKind::Equality => {
                let pos = self.as_inequality();
                let neg = pos.negated_ineq();
                vec![pos, neg]
            }
        }
    }

    /// Substitutes `x_k -> x_k + shift_k` (shift over all dimensions): the constant grows by `c·shift`.
    pub fn translated(&self, shift: &[BigInt]) -> Constraint {
        let mut constant = self.constant.clone();
        for (c, s) in self.coeffs.iter().zip(shift) {
            constant += c * s;
        }
        Constraint::new(self.coeffs.clone(), constant, self.kind)
    }

    /// Dot product of the first `v.len()` coefficients with `v`.
    pub fn dot_prefix(&self, v: &[BigInt]) -> BigInt {
        self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Inserts `count` zero coefficients at position `at`.
    pub fn insert_dims(&self, at: usize, count: usize) -> Constraint {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..count {
            coeffs.insert(at, BigInt::zero());
        }
        Constraint { coeffs, constant: self.constant.clone(), kind: self.kind }
    }

    /// Total order used for canonical constraint lists.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| {
                // Larger leading magnitudes first reads oddly; compare by the
                // reversed coefficient vector so that index-heavy constraints come first.
                let key = |c: &Constraint| {
                    c.coeffs.iter().map(|v| -v.clone()).collect::<Vec<_>>()
                };
                key(self).cmp(&key(other))
            })
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

/// Renders a linear form with the given dimension names, e.g. `2*i - j + N`.
pub fn format_linear(coeffs: &[BigInt], constant: &BigInt, names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{}*{}", mag, name));
        }
    }
    if !constant.is_zero() || out.is_empty() {
        if out.is_empty() {
            out.push_str(&constant.to_string());
        } else if constant.is_negative() {
            out.push_str(&format!(" - {}", constant.abs()));
        } else {
            out.push_str(&format!(" + {}", constant));
        }
    }
    out
}

impl Constraint {
    /// Human-readable form `lhs >= rhs` / `lhs == rhs` with positive terms on each side.
    pub fn display_with(&self, names: &[String]) -> String {
        let pos: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| if c.is_positive() { c.clone() } else { BigInt::zero() })
            .collect();
        let neg: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| if c.is_negative() { -c } else { BigInt::zero() })
            .collect();
        let (pc, nc) = if self.constant.is_positive() {
            (self.constant.clone(), BigInt::zero())
        } else {
            (BigInt::zero(), -&self.constant)
        };
        let lhs = format_linear(&pos, &pc, names);
        let rhs = format_linear(&neg, &nc, names);
        let op = if self.is_equality() { "==" } else { ">=" };
        format!("{} {} {}", lhs, op, rhs)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim()).map(|k| format!("x{}", k)).collect();
        f.write_str(&self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_tightening() {
        // 2i - 3 >= 0  ->  i - 2 >= 0 over the integers
        let c = Constraint::ineq(&[2], -3);
        assert_eq!(c, Constraint::ineq(&[1], -2));
    }

    #[test]
    fn equality_sign_normalized() {
        let c = Constraint::eq(&[-2, 2], 4);
        assert_eq!(c.coeffs, vec![BigInt::from(1), BigInt::from(-1)]);
        assert_eq!(c.constant, BigInt::from(-2));
    }

    #[test]
    fn display_moves_negative_terms() {
        let names = vec!["i".to_string(), "j".to_string(), "N".to_string()];
        assert_eq!(Constraint::ineq(&[2, -1, 0], -1).display_with(&names), "2*i >= j + 1");
        assert_eq!(Constraint::ineq(&[-1, 0, 1], 0).display_with(&names), "N >= i");
        assert_eq!(Constraint::eq(&[1, 0, 0], 0).display_with(&names), "i == 0");
    }

    #[test]
    fn complement_is_integer_negation() {
        let c = Constraint::ineq(&[1], -2); // i >= 2
        let n = c.complement(); // i <= 1
        assert!(n.satisfied_int(&[1]));
        assert!(!n.satisfied_int(&[2]));
    }
}
