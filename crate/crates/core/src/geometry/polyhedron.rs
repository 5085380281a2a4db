//! Parametric polyhedra: canonical constraint systems over index dimensions
//! followed by (at most one) size parameter.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::constraint::{Constraint, ConstraintKind};
use super::space::{kernel, rank, LinearSpace};
use super::{fm, lp, GeometryError, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    pub n_index: usize,
    pub n_param: usize,
    /// Canonical: irredundant, implicit equalities explicit, sorted. A single
    /// constant contradiction marks the empty polyhedron.
    pub constraints: Vec<Constraint>,
}

impl Polyhedron {
    pub fn universe(n_index: usize, n_param: usize) -> Self {
        Polyhedron { n_index, n_param, constraints: Vec::new() }
    }

    pub fn empty(n_index: usize, n_param: usize) -> Self {
        let n = n_index + n_param;
        let c = Constraint::new(vec![BigInt::zero(); n], BigInt::from(-1), ConstraintKind::Inequality);
        Polyhedron { n_index, n_param, constraints: vec![c] }
    }

    /// Builds the canonical form of a raw constraint system.
    pub fn canonicalize(
        raw: &[Constraint],
        n_index: usize,
        n_param: usize,
    ) -> Result<Polyhedron, GeometryError> {
        let n = n_index + n_param;
        if let Some(bad) = raw.iter().find(|c| c.dim() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: bad.dim() });
        }
        let mut cons = fm::prune(raw.to_vec());
        if cons.iter().any(|c| c.is_constant()) || !lp::is_feasible(n, &cons) {
            return Ok(Self::empty(n_index, n_param));
        }
        // implicit equalities: inequalities whose supremum over the set is 0
        for k in 0..cons.len() {
            if cons[k].kind == ConstraintKind::Inequality {
                if let Some(Some(sup)) = lp::sup_of(n, &cons, &cons[k]) {
                    if sup.is_zero() {
                        cons[k] = cons[k].as_equality();
                    }
                }
            }
        }
        cons = fm::prune(cons);
        cons.sort_by(|a, b| a.canonical_cmp(b));
        cons = reduce_equalities(cons, n);
        let mut kept = fm::remove_redundant(&cons);
        kept.sort_by(|a, b| a.canonical_cmp(b));
        Ok(Polyhedron { n_index, n_param, constraints: kept })
    }

    pub fn from_constraints(raw: Vec<Constraint>, n_index: usize, n_param: usize) -> Polyhedron {
        Self::canonicalize(&raw, n_index, n_param).expect("constraint dimensions")
    }

    pub fn dim_total(&self) -> usize {
        self.n_index + self.n_param
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.iter().any(|c| c.is_constant() && !c.constant_holds())
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.is_equality())
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| !c.is_equality())
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.n_index, other.n_index);
        assert_eq!(self.n_param, other.n_param);
        let mut cons = self.constraints.clone();
        cons.extend(other.constraints.iter().cloned());
        Self::from_constraints(cons, self.n_index, self.n_param)
    }

    pub fn with_constraints(&self, extra: &[Constraint]) -> Polyhedron {
        let mut cons = self.constraints.clone();
        cons.extend(extra.iter().cloned());
        Self::from_constraints(cons, self.n_index, self.n_param)
    }

    /// Index part of a constraint's coefficients.
    pub fn index_part<'a>(&self, c: &'a Constraint) -> &'a [BigInt] {
        &c.coeffs[..self.n_index]
    }

    /// A constraint is thick when its slack `c·x + γ` stays bounded by a
    /// parameter-free constant over the set, i.e. `c` vanishes on every
    /// recession direction. Equalities are trivially thick.
    pub fn is_thick(&self, c: &Constraint) -> bool {
        if c.is_equality() {
            return true;
        }
        let n = self.dim_total();
        let homog: Vec<Constraint> = self
            .constraints
            .iter()
            .map(|k| Constraint::new(k.coeffs.clone(), BigInt::zero(), k.kind))
            .collect();
        let form = Constraint::new(c.coeffs.clone(), BigInt::zero(), ConstraintKind::Inequality);
        matches!(lp::sup_of(n, &homog, &form), Some(Some(v)) if v.is_zero())
    }

    /// Constraints that are saturated in the thick sense, with a nonzero index part.
    pub fn thick_constraints(&self) -> Vec<&Constraint> {
        self.constraints
            .iter()
            .filter(|c| !c.is_constant() && self.is_thick(c))
            .collect()
    }

    fn thick_normals(&self) -> Vec<Vec<BigInt>> {
        self.thick_constraints()
            .into_iter()
            .map(|c| self.index_part(c).to_vec())
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// Direction space of the (thick) affine hull, restricted to index dimensions.
    pub fn lineality(&self) -> Result<LinearSpace, GeometryError> {
        if self.is_empty() {
            return Err(GeometryError::Empty);
        }
        Ok(kernel(&self.thick_normals(), self.n_index))
    }

    /// Degree of the parametric point count: index dimensions minus independent
    /// thick equalities.
    pub fn dimension(&self) -> Result<usize, GeometryError> {
        if self.is_empty() {
            return Err(GeometryError::Empty);
        }
        Ok(self.n_index - rank(&self.thick_normals(), self.n_index))
    }

    pub fn contains_int(&self, point: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.satisfied_int(point))
    }

    /// Fixes the parameters to concrete values, returning constraints over index dims only.
    pub fn fix_params(&self, params: &[i64]) -> Vec<Constraint> {
        assert_eq!(params.len(), self.n_param);
        self.constraints
            .iter()
            .map(|c| {
                let mut constant = c.constant.clone();
                for (k, &p) in params.iter().enumerate() {
                    constant += &c.coeffs[self.n_index + k] * BigInt::from(p);
                }
                Constraint::new(c.coeffs[..self.n_index].to_vec(), constant, c.kind)
            })
            .collect()
    }

    /// All integer points at the given parameter values, in lexicographic order.
    pub fn points(&self, params: &[i64]) -> Result<Vec<Vec<i64>>, GeometryError> {
        let cons = self.fix_params(params);
        enumerate_points(&cons, self.n_index)
    }

    /// Translation by an index-space vector: `{z + ρ : z ∈ self}`.
    pub fn translate(&self, rho: &[BigInt]) -> Polyhedron {
        let mut shift: Vec<BigInt> = rho.iter().map(|v| -v).collect();
        shift.resize(self.dim_total(), BigInt::zero());
        let cons = self.constraints.iter().map(|c| c.translated(&shift)).collect();
        Self::from_constraints(cons, self.n_index, self.n_param)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.constraints.is_empty() {
            return "true".to_string();
        }
        self.constraints
            .iter()
            .map(|c| c.display_with(names))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Drops equalities that are linear combinations of earlier ones.
fn reduce_equalities(cons: Vec<Constraint>, n: usize) -> Vec<Constraint> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut out = Vec::new();
    for c in cons {
        if c.is_equality() {
            let mut row = c.coeffs.clone();
            row.push(c.constant.clone());
            let mut trial = rows.clone();
            trial.push(row.clone());
            if rank(&trial, n + 1) == rows.len() {
                continue;
            }
            rows.push(row);
        }
        out.push(c);
    }
    out
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<String> = (0..self.n_index).map(|k| format!("z{}", k)).collect();
        names.extend((0..self.n_param).map(|k| if k == 0 { "N".to_string() } else { format!("p{}", k) }));
        write!(f, "{{ {} }}", self.display_with(&names))
    }
}

/// Enumerates integer points of a parameter-free system in lexicographic order.
pub fn enumerate_points(cons: &[Constraint], n: usize) -> Result<Vec<Vec<i64>>, GeometryError> {
    if cons.iter().any(|c| c.is_constant() && !c.constant_holds()) {
        return Ok(Vec::new());
    }
    if n == 0 {
        return Ok(if cons.iter().all(|c| c.constant_holds()) { vec![Vec::new()] } else { Vec::new() });
    }
    // levels[k]: constraints involving only dims 0..=k
    let mut levels: Vec<Vec<Constraint>> = vec![Vec::new(); n];
    let mut cur = cons.to_vec();
    for k in (0..n).rev() {
        levels[k] = cur.clone();
        if k > 0 {
            cur = fm::eliminate(&cur, k);
        }
    }
    if levels[0].iter().any(|c| c.is_constant() && !c.constant_holds()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut point = vec![0i64; n];
    scan(&levels, 0, &mut point, &mut out)?;
    Ok(out)
}

fn scan(
    levels: &[Vec<Constraint>],
    k: usize,
    point: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) -> Result<(), GeometryError> {
    let n = levels.len();
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for c in &levels[k] {
        let a = &c.coeffs[k];
        // rest = γ + Σ_{j<k} c_j x_j
        let mut rest = c.constant.clone();
        for j in 0..k {
            rest += &c.coeffs[j] * BigInt::from(point[j]);
        }
        if a.is_zero() {
            let ok = if c.is_equality() { rest.is_zero() } else { !rest.is_negative() };
            if !ok {
                return Ok(());
            }
            continue;
        }
        // a x + rest >= 0
        let bound = Rat::new(-rest, a.clone());
        if c.is_equality() {
            if !bound.is_integer() {
                return Ok(());
            }
            let v = bound.to_integer();
            lo = Some(lo.map_or(v.clone(), |l| l.max(v.clone())));
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        } else if a.is_positive() {
            let v = bound.ceil().to_integer();
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        } else {
            let v = bound.floor().to_integer();
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(GeometryError::Unbounded(k));
    };
    let (lo, hi) = (lo.to_i64().unwrap(), hi.to_i64().unwrap());
    for v in lo..=hi {
        point[k] = v;
        if k + 1 == n {
            out.push(point.clone());
        } else {
            scan(levels, k + 1, point, out)?;
        }
    }
    Ok(())
}

/// Result of translating a face along a reuse vector.
#[derive(Debug, Clone)]
pub struct TranslationSplit {
    /// `F ∩ (F + ρ)`
    pub overlap: Polyhedron,
    /// `F \ (F + ρ)` as disjoint pieces, one per violated inward constraint.
    pub vacated: Vec<(Constraint, Polyhedron)>,
    /// `(F + ρ) \ F` as disjoint pieces, one per violated outward constraint.
    pub entered: Vec<(Constraint, Polyhedron)>,
}

/// Splits `F` against its translate along `ρ`; the pieces are produced by
/// complementing constraints one at a time in canonical order.
pub fn translate_intersect_diff(f: &Polyhedron, rho: &[BigInt]) -> Result<TranslationSplit, GeometryError> {
    if rho.iter().all(Zero::is_zero) {
        return Err(GeometryError::ZeroVector);
    }
    if !f.lineality()?.contains(rho) {
        return Err(GeometryError::OutsideLineality);
    }
    let shifted = f.translate(rho);
    let overlap = f.intersect(&shifted);
    let mut vacated = Vec::new();
    let mut entered = Vec::new();
    let mut inward_prev: Vec<Constraint> = Vec::new();
    let mut outward_prev: Vec<Constraint> = Vec::new();
    let mut shift_back: Vec<BigInt> = rho.iter().map(|v| -v).collect();
    shift_back.resize(f.dim_total(), BigInt::zero());
    for c in f.inequalities() {
        let dot = c.dot_prefix(rho);
        if dot.is_positive() {
            // z ∈ F with z - ρ violating c
            let at_prev = c.translated(&shift_back);
            let mut extra = inward_prev.clone();
            extra.push(at_prev.complement());
            let piece = f.with_constraints(&extra);
            if !piece.is_empty() {
                vacated.push((c.clone(), piece));
            }
            inward_prev.push(at_prev);
        } else if dot.is_negative() {
            // z ∈ F + ρ violating c
            let mut extra = outward_prev.clone();
            extra.push(c.complement());
            let piece = shifted.with_constraints(&extra);
            if !piece.is_empty() {
                entered.push((c.clone(), piece));
            }
            outward_prev.push(c.clone());
        }
    }
    Ok(TranslationSplit { overlap, vacated, entered })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Polyhedron {
        // (i, j, N): 1 <= i <= N, i <= j <= 2i - 1, N >= 1
        Polyhedron::from_constraints(
            vec![
                Constraint::ineq(&[1, 0, 0], -1),
                Constraint::ineq(&[-1, 0, 1], 0),
                Constraint::ineq(&[-1, 1, 0], 0),
                Constraint::ineq(&[2, -1, 0], -1),
                Constraint::ineq(&[0, 0, 1], -1),
            ],
            2,
            1,
        )
    }

    #[test]
    fn canonicalize_examples() {
        let p = Polyhedron::from_constraints(
            vec![Constraint::ineq(&[1, 0], 0), Constraint::ineq(&[1, 0], -1), Constraint::ineq(&[-1, 1], 0)],
            1,
            1,
        );
        assert_eq!(p.constraints.len(), 2);
        assert!(!p.constraints.contains(&Constraint::ineq(&[1, 0], 0)));

        let p = Polyhedron::from_constraints(vec![Constraint::ineq(&[1], 0), Constraint::ineq(&[-1], 0)], 1, 0);
        assert_eq!(p.constraints, vec![Constraint::eq(&[1], 0)]);

        let p = Polyhedron::from_constraints(vec![Constraint::ineq(&[1], -1), Constraint::ineq(&[-1], 0)], 1, 0);
        assert!(p.is_empty());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let r = Polyhedron::canonicalize(&[Constraint::ineq(&[1, 0], 0)], 1, 0);
        assert!(matches!(r, Err(GeometryError::DimensionMismatch { .. })));
    }

    #[test]
    fn triangle_is_two_dimensional() {
        let t = triangle();
        assert_eq!(t.dimension().unwrap(), 2);
        assert_eq!(t.lineality().unwrap().dim(), 2);
        // i >= 1 is implied by i <= j <= 2i - 1
        assert_eq!(t.inequalities().count(), 3);
    }

    #[test]
    fn diagonal_and_point() {
        let d = Polyhedron::from_constraints(
            vec![Constraint::eq(&[1, -1, 0], 0), Constraint::ineq(&[1, 0, 0], 0), Constraint::ineq(&[-1, 0, 1], 0)],
            2,
            1,
        );
        assert_eq!(d.dimension().unwrap(), 1);
        assert_eq!(d.lineality().unwrap(), LinearSpace::span(2, &[super::super::space::int_vec(&[1, 1])]));
        let p = Polyhedron::from_constraints(vec![Constraint::eq(&[1], 0)], 1, 0);
        assert_eq!(p.dimension().unwrap(), 0);
    }

    #[test]
    fn thick_strip_is_lower_dimensional() {
        // 0 <= i <= N, i <= j <= i + 3
        let s = Polyhedron::from_constraints(
            vec![
                Constraint::ineq(&[1, 0, 0], 0),
                Constraint::ineq(&[-1, 0, 1], 0),
                Constraint::ineq(&[-1, 1, 0], 0),
                Constraint::ineq(&[1, -1, 0], 3),
            ],
            2,
            1,
        );
        assert_eq!(s.dimension().unwrap(), 1);
    }

    #[test]
    fn points_of_triangle() {
        let pts = triangle().points(&[3]).unwrap();
        // i=1: j=1; i=2: j=2..3; i=3: j=3..5
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![1, 1]);
    }

    #[test]
    fn segment_translation() {
        let seg = Polyhedron::from_constraints(
            vec![Constraint::ineq(&[1, 0], 0), Constraint::ineq(&[-1, 1], 0), Constraint::ineq(&[0, 1], 0)],
            1,
            1,
        );
        let split = translate_intersect_diff(&seg, &[BigInt::from(1)]).unwrap();
        assert_eq!(split.vacated.len(), 1);
        assert_eq!(split.entered.len(), 1);
        assert_eq!(split.vacated[0].1.points(&[5]).unwrap(), vec![vec![0]]);
        assert_eq!(split.entered[0].1.points(&[5]).unwrap(), vec![vec![6]]);
        assert_eq!(split.overlap.points(&[5]).unwrap().len(), 5);
        assert!(matches!(translate_intersect_diff(&seg, &[BigInt::from(0)]), Err(GeometryError::ZeroVector)));
    }
}
