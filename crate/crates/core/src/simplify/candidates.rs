//! Facet labels and the finite set of reuse-vector classes of a domain.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::region::{dot, in_row_space};
use crate::geometry::constraint::{Constraint, ConstraintKind};
use crate::geometry::lattice::{facets, Face};
use crate::geometry::{lp, LinearSpace, Polyhedron, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Inward,
    Outward,
    Invariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FacetLabel {
    pub boundary: bool,
    pub direction: Direction,
}

/// A facet is boundary when its index normal lies in the row space of `B`,
/// i.e. the facet maps onto a facet of the result domain.
pub fn label_facet(normal: &[BigInt], rho: &[BigInt], b_linear: &[Vec<BigInt>]) -> FacetLabel {
    let d = dot(normal, rho);
    let direction = if d.is_positive() {
        Direction::Inward
    } else if d.is_negative() {
        Direction::Outward
    } else {
        Direction::Invariant
    };
    FacetLabel { boundary: in_row_space(b_linear, normal), direction }
}

/// Facets of `domain` as (constraint index, index normal).
pub fn facet_normals(domain: &Polyhedron) -> Vec<(usize, Vec<BigInt>)> {
    let Ok(dimension) = domain.dimension() else {
        return Vec::new();
    };
    let top = Face { polyhedron: domain.clone(), saturated: BTreeSet::new(), new_constraint: None, depth: 0, dimension };
    facets(domain, &top)
        .into_iter()
        .map(|(k, _)| (k, domain.index_part(&domain.constraints[k]).to_vec()))
        .collect()
}

/// Rejects candidates that leave some boundary facet invariant.
pub fn has_invariant_boundary(facets: &[(usize, Vec<BigInt>)], rho: &[BigInt], b_linear: &[Vec<BigInt>]) -> bool {
    facets.iter().any(|(_, c)| {
        let l = label_facet(c, rho, b_linear);
        l.boundary && l.direction == Direction::Invariant
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignClass {
    /// Sign of `c·ρ` per facet, in facet order.
    pub signs: Vec<i8>,
    pub rho: Vec<BigInt>,
    /// First legality disjunct satisfied by the class.
    pub disjunct: usize,
}

struct Search<'a> {
    share: &'a LinearSpace,
    forms: Vec<Vec<BigInt>>,
    disjuncts: Vec<Vec<BigInt>>,
    /// Facets that may not turn outward (non-invertible operators).
    no_outward: Vec<bool>,
    out: Vec<SignClass>,
    nodes: u64,
}

impl Search<'_> {
    /// `v·ρ` as a form over the share-space coordinates.
    fn over_share(share: &LinearSpace, v: &[BigInt]) -> Vec<BigInt> {
        share.basis.iter().map(|s| dot(v, s)).collect()
    }

    fn sign_constraint(form: &[BigInt], sign: i8) -> Constraint {
        match sign {
            0 => Constraint::new(form.to_vec(), BigInt::zero(), ConstraintKind::Equality),
            1 => Constraint::new(form.to_vec(), BigInt::from(-1), ConstraintKind::Inequality),
            _ => Constraint::new(form.iter().map(|v| -v).collect(), BigInt::from(-1), ConstraintKind::Inequality),
        }
    }

    fn dfs(&mut self, signs: &mut Vec<i8>, cons: &mut Vec<Constraint>) {
        self.nodes += 1;
        let k = self.share.dim();
        if !lp::is_feasible(k, cons) {
            return;
        }
        if signs.len() == self.forms.len() {
            for (di, d) in self.disjuncts.iter().enumerate() {
                let mut with = cons.clone();
                with.push(Self::sign_constraint(&Self::over_share(self.share, d), 1));
                if let Some(t) = lp::feasible_point(k, &with) {
                    let rho: Vec<Rat> = (0..self.share.ambient)
                        .map(|c| {
                            t.iter()
                                .zip(&self.share.basis)
                                .map(|(tj, s)| tj * Rat::from_integer(s[c].clone()))
                                .sum()
                        })
                        .collect();
                    self.out.push(SignClass { signs: signs.clone(), rho: lp::integer_direction(&rho), disjunct: di });
                    return;
                }
            }
            return;
        }
        let form = self.forms[signs.len()].clone();
        let allowed: &[i8] = if self.no_outward[signs.len()] { &[1, 0] } else { &[1, 0, -1] };
        for &s in allowed {
            signs.push(s);
            cons.push(Self::sign_constraint(&form, s));
            self.dfs(signs, cons);
            cons.pop();
            signs.pop();
        }
    }
}

/// All realizable sign vectors of the facet normals over nonzero `ρ` in the
/// share space satisfying at least one disjunct `d·ρ > 0`, shortest and then
/// lexicographically largest representative first. Without an inverse, no
/// non-boundary facet may be outward. Returns the classes and the number of
/// search nodes visited.
pub fn enumerate_sign_classes(
    share: &LinearSpace,
    facets: &[(usize, Vec<BigInt>)],
    disjuncts: &[Vec<BigInt>],
    b_linear: &[Vec<BigInt>],
    invertible: bool,
) -> (Vec<SignClass>, u64) {
    if share.dim() == 0 || disjuncts.is_empty() {
        return (Vec::new(), 0);
    }
    let forms = facets.iter().map(|(_, c)| Search::over_share(share, c)).collect();
    let no_outward = facets.iter().map(|(_, c)| !invertible && !in_row_space(b_linear, c)).collect();
    let mut s = Search { share, forms, disjuncts: disjuncts.to_vec(), no_outward, out: Vec::new(), nodes: 0 };
    s.dfs(&mut Vec::new(), &mut Vec::new());
    let mut out = s.out;
    out.sort_by(|a, b| {
        let l1 = |v: &[BigInt]| v.iter().map(|x| x.abs()).sum::<BigInt>();
        l1(&a.rho).cmp(&l1(&b.rho)).then_with(|| b.rho.cmp(&a.rho))
    });
    (out, s.nodes)
}
