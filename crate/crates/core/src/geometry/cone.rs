//! Homogeneous rational cones: constraint form, generator form (double
//! description) and projection (Fourier-Motzkin).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::constraint::{Constraint, ConstraintKind};
use super::fm;

/// Generators of a cone: a lineality basis (usable with either sign) and extreme rays.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Generators {
    pub lines: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

impl Generators {
    /// Every generator as a ray: each line contributes both orientations.
    pub fn as_rays(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        for l in &self.lines {
            out.push(l.clone());
            out.push(l.iter().map(|v| -v).collect());
        }
        out.extend(self.rays.iter().cloned());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub dim: usize,
    /// Homogeneous constraints (constant term zero).
    pub constraints: Vec<Constraint>,
    pub generators: Option<Generators>,
}

impl Cone {
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Cone {
        debug_assert!(constraints.iter().all(|c| c.constant.is_zero() && c.dim() == dim));
        Cone { dim, constraints, generators: None }
    }

    pub fn full(dim: usize) -> Cone {
        Cone::new(dim, Vec::new())
    }

    pub fn with_generators(mut self) -> Cone {
        self.generators = Some(dual_generators(&self));
        self
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.constraints.iter().all(|c| {
            let d: BigInt = c.coeffs.iter().zip(v).map(|(a, b)| a * b).sum();
            if c.is_equality() {
                d.is_zero()
            } else {
                !d.is_negative()
            }
        })
    }

    /// Canonical constraint list (redundancy removed).
    pub fn canonical(&self) -> Cone {
        let mut cons = fm::remove_redundant(&self.constraints);
        cons.sort_by(|a, b| a.canonical_cmp(b));
        Cone { dim: self.dim, constraints: cons, generators: self.generators.clone() }
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

fn lin_comb(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

/// Generators of a cone given by homogeneous constraints, via the double
/// description method (one constraint at a time, combinatorial adjacency test).
pub fn dual_generators(cone: &Cone) -> Generators {
    let n = cone.dim;
    let mut lines: Vec<Vec<BigInt>> = (0..n)
        .map(|k| (0..n).map(|j| if j == k { BigInt::from(1) } else { BigInt::zero() }).collect())
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let halfspaces: Vec<Vec<BigInt>> = cone
        .constraints
        .iter()
        .flat_map(|c| c.to_inequalities())
        .map(|c| c.coeffs)
        .filter(|c| c.iter().any(|v| !v.is_zero()))
        .collect();
    // processed[k] is the normal of the k-th halfspace handled so far
    let mut processed: Vec<Vec<BigInt>> = Vec::new();
    for a in &halfspaces {
        if let Some(p) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lines.remove(p);
            let al = dot(a, &l);
            if al.is_negative() {
                l = l.iter().map(|v| -v).collect();
            }
            let al = dot(a, &l);
            for m in lines.iter_mut() {
                let am = dot(a, m);
                if !am.is_zero() {
                    *m = normalize(lin_comb(&al, m, &(-am), &l));
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, r);
                if !ar.is_zero() {
                    *r = normalize(lin_comb(&al, r, &(-ar), &l));
                }
            }
            rays.push(normalize(l));
            processed.push(a.clone());
            continue;
        }
        let zero_set = |r: &Vec<BigInt>, procs: &[Vec<BigInt>]| -> BTreeSet<usize> {
            procs.iter().enumerate().filter(|(_, h)| dot(h, r).is_zero()).map(|(k, _)| k).collect()
        };
        let (mut pos, mut zer, mut neg) = (Vec::new(), Vec::new(), Vec::new());
        for r in rays.drain(..) {
            let s = dot(a, &r);
            if s.is_positive() {
                pos.push(r);
            } else if s.is_zero() {
                zer.push(r);
            } else {
                neg.push(r);
            }
        }
        let all: Vec<Vec<BigInt>> = pos.iter().chain(zer.iter()).chain(neg.iter()).cloned().collect();
        let zsets: Vec<BTreeSet<usize>> = all.iter().map(|r| zero_set(r, &processed)).collect();
        let mut new_rays: Vec<Vec<BigInt>> = pos.iter().chain(zer.iter()).cloned().collect();
        for (pi, p) in pos.iter().enumerate() {
            for (ni, q) in neg.iter().enumerate() {
                let qi = pos.len() + zer.len() + ni;
                let common: BTreeSet<usize> = zsets[pi].intersection(&zsets[qi]).copied().collect();
                let adjacent = (0..all.len())
                    .filter(|&k| k != pi && k != qi)
                    .all(|k| !common.is_subset(&zsets[k]));
                if !adjacent {
                    continue;
                }
                let ap = dot(a, p);
                let aq = dot(a, q);
                let r = normalize(lin_comb(&ap, q, &(-aq), p));
                if r.iter().any(|v| !v.is_zero()) && !new_rays.contains(&r) {
                    new_rays.push(r);
                }
            }
        }
        rays = new_rays;
        processed.push(a.clone());
    }
    let lines = super::space::LinearSpace::span(n, &lines).basis;
    rays.sort();
    rays.dedup();
    Generators { lines, rays }
}

/// Projects the cone onto the coordinates in `keep` (in the given order) by
/// eliminating all other coordinates.
pub fn project_cone(cone: &Cone, keep: &[usize]) -> Cone {
    let drop: Vec<usize> = (0..cone.dim).filter(|k| !keep.contains(k)).collect();
    let eliminated = fm::eliminate_all(&cone.constraints, &drop);
    let cons: Vec<Constraint> = eliminated
        .into_iter()
        .map(|c| {
            let coeffs = keep.iter().map(|&k| c.coeffs[k].clone()).collect();
            Constraint::new(coeffs, BigInt::zero(), c.kind)
        })
        .filter(|c| !c.is_constant())
        .collect();
    let projected = Cone::new(keep.len(), cons);
    if projected.constraints.is_empty() {
        return projected;
    }
    projected.canonical()
}

/// Homogeneous inequality `coeffs · x ≥ 0`.
pub fn halfspace(coeffs: &[i64]) -> Constraint {
    Constraint::ineq(coeffs, 0)
}

/// Homogeneous equality `coeffs · x = 0`.
pub fn hyperplane(coeffs: &[i64]) -> Constraint {
    Constraint::new(coeffs.iter().map(|&v| BigInt::from(v)).collect(), BigInt::zero(), ConstraintKind::Equality)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::space::int_vec;

    #[test]
    fn quadrant_generators() {
        let c = Cone::new(2, vec![halfspace(&[1, 0]), halfspace(&[0, 1])]);
        let g = dual_generators(&c);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn wedge_generators() {
        let c = Cone::new(2, vec![halfspace(&[1, 1]), halfspace(&[1, -1])]);
        let g = dual_generators(&c);
        assert_eq!(g.rays, vec![int_vec(&[1, -1]), int_vec(&[1, 1])]);
    }

    #[test]
    fn degenerate_generators() {
        let c = Cone::new(2, vec![halfspace(&[1, 0]), halfspace(&[-1, 0]), halfspace(&[0, 1])]);
        let g = dual_generators(&c);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![int_vec(&[0, 1])]);
    }

    #[test]
    fn free_directions_are_lines() {
        let c = Cone::new(3, vec![halfspace(&[1, 0, 0])]);
        let g = dual_generators(&c);
        assert_eq!(g.lines.len(), 2);
        assert_eq!(g.rays, vec![int_vec(&[1, 0, 0])]);
    }

    #[test]
    fn projections() {
        let c = Cone::new(2, vec![halfspace(&[1, 0]), halfspace(&[-1, 1])]);
        let p = project_cone(&c, &[1]);
        assert_eq!(p.constraints, vec![halfspace(&[1])]);
        let c = Cone::new(2, vec![halfspace(&[1, 1]), halfspace(&[1, -1])]);
        let p = project_cone(&c, &[0]);
        assert_eq!(p.constraints, vec![halfspace(&[1])]);
        let same = project_cone(&c, &[0, 1]);
        assert_eq!(same.constraints.len(), 2);
    }
}
