use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use polysimp_core::geometry::space::{mat_vec, rank};
use polysimp_core::geometry::{
    dual_generators, kernel, lp, project_cone, Cone, Constraint, ConstraintKind, Polyhedron, ThickFaceLattice,
};
use polysimp_core::ir::analysis::reuse_space;
use polysimp_core::ir::AffineMap;
use proptest::prelude::*;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Raw inequalities `a·x + b·N + c >= 0` over `d` index dims and one parameter.
fn raw_constraints(d: usize, max: usize) -> impl Strategy<Value = Vec<Constraint>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, d + 1), -4i64..=4), 1..=max)
        .prop_map(|rows| rows.into_iter().map(|(a, c)| Constraint::ineq(&a, c)).collect())
}

/// Bounded: the box `0 <= x <= N` and `N >= 1`, cut by up to three random inequalities.
fn bounded(d: usize) -> impl Strategy<Value = Vec<Constraint>> {
    raw_constraints(d, 3).prop_map(move |mut cuts| {
        for t in 0..d {
            let mut lo = vec![0; d + 1];
            lo[t] = 1;
            let mut hi = vec![0; d + 1];
            hi[t] = -1;
            hi[d] = 1;
            cuts.push(Constraint::ineq(&lo, 0));
            cuts.push(Constraint::ineq(&hi, 0));
        }
        let mut ctx = vec![0; d + 1];
        ctx[d] = 1;
        cuts.push(Constraint::ineq(&ctx, -1));
        cuts
    })
}

fn box_points(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|p: Vec<i64>| (lo..=hi).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

fn tight(c: &Constraint, x: &[i64]) -> bool {
    c.eval_int(x).is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn canonicalize_is_idempotent(raw in (1usize..=3).prop_flat_map(|d| raw_constraints(d, 6))) {
        let d = raw[0].dim() - 1;
        let p = Polyhedron::canonicalize(&raw, d, 1).unwrap();
        let q = Polyhedron::canonicalize(&p.constraints, d, 1).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn canonicalize_keeps_the_integer_points(raw in (1usize..=2).prop_flat_map(|d| raw_constraints(d, 5))) {
        let d = raw[0].dim() - 1;
        let p = Polyhedron::canonicalize(&raw, d, 1).unwrap();
        for x in box_points(d + 1, -4, 4) {
            let inside = raw.iter().all(|c| c.satisfied_int(&x));
            prop_assert_eq!(inside, p.contains_int(&x), "at {:?}", x);
        }
    }

    #[test]
    fn face_lattice_saturates_one_more_constraint_per_level(raw in (1usize..=3).prop_flat_map(bounded)) {
        let d = raw[0].dim() - 1;
        let root = Polyhedron::canonicalize(&raw, d, 1).unwrap();
        prop_assume!(!root.is_empty());
        let lattice = ThickFaceLattice::build(&root).unwrap();
        for (k, kids) in lattice.children.iter().enumerate() {
            let parent = &lattice.faces[k];
            for &c in kids {
                let child = &lattice.faces[c];
                prop_assert!(child.saturated.is_superset(&parent.saturated) && child.saturated != parent.saturated);
                prop_assert!(child.dimension < parent.dimension, "{:?} -> {:?}", parent.saturated, child.saturated);
            }
        }
        for (id, face) in lattice.faces.iter().enumerate().skip(1) {
            let new = face.new_constraint.expect("non-root face names its constraint");
            prop_assert!(face.saturated.contains(&new));
            let via = lattice.children.iter().enumerate().any(|(p, kids)| {
                kids.contains(&id) && !lattice.faces[p].saturated.contains(&new)
            });
            prop_assert!(via, "face {} not reached by saturating {}", id, new);
        }
    }

    #[test]
    fn face_points_match_saturation_by_brute_force(raw in (1usize..=3).prop_flat_map(bounded), n in 1i64..=8) {
        let d = raw[0].dim() - 1;
        let root = Polyhedron::canonicalize(&raw, d, 1).unwrap();
        prop_assume!(!root.is_empty());
        let lattice = ThickFaceLattice::build(&root).unwrap();
        let all = root.points(&[n]).unwrap();
        let mut seen = BTreeSet::new();
        for face in &lattice.faces {
            let expected: Vec<Vec<i64>> = all
                .iter()
                .filter(|z| {
                    let x = [z.as_slice(), &[n]].concat();
                    face.saturated.iter().all(|&k| tight(&lattice.root_constraints[k], &x))
                })
                .cloned()
                .collect();
            prop_assert_eq!(face.polyhedron.points(&[n]).unwrap(), expected, "face {:?}", face.saturated);
            prop_assert!(seen.insert(face.saturated.clone()), "duplicate face");
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in 1usize..=3, cols in 1usize..=4, seed in prop::collection::vec(-3i64..=3, 12)) {
        let m: Vec<Vec<BigInt>> = (0..rows).map(|r| big(&seed[r * cols..(r + 1) * cols])).collect();
        let k = kernel(&m, cols);
        prop_assert_eq!(k.dim(), cols - rank(&m, cols));
        for v in &k.basis {
            prop_assert!(mat_vec(&m, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn reuse_space_depends_on_the_row_space(
        a in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 2),
        t in prop::collection::vec(-2i64..=2, 4),
    ) {
        let det = t[0] * t[3] - t[1] * t[2];
        prop_assume!(det != 0);
        let rows: Vec<Vec<i64>> = a.iter().map(|r| [r.as_slice(), &[0, 0]].concat()).collect();
        let ta: Vec<Vec<i64>> = (0..2)
            .map(|i| (0..5).map(|j| t[2 * i] * rows[0][j] + t[2 * i + 1] * rows[1][j]).collect())
            .collect();
        let r1 = reuse_space(&AffineMap::from_rows(&rows, 3, 1));
        let r2 = reuse_space(&AffineMap::from_rows(&ta, 3, 1));
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn generators_are_sound_and_complete(d in 1usize..=3, rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..=4)) {
        let cons: Vec<Constraint> = rows.iter().map(|r| Constraint::ineq(&r[..d], 0)).filter(|c| !c.is_constant()).collect();
        let cone = Cone::new(d, cons);
        let g = dual_generators(&cone);
        for r in g.as_rays() {
            prop_assert!(cone.contains(&r), "generator {:?} outside the cone", r);
        }
        // Every member is a nonnegative combination of rays plus any combination of lines.
        let gens = g.as_rays();
        for x in box_points(d, -3, 3) {
            let x = big(&x);
            if !cone.contains(&x) {
                continue;
            }
            let eqs: Vec<Constraint> = (0..d)
                .map(|t| {
                    let coeffs = gens.iter().map(|r| r[t].clone()).collect();
                    Constraint::new(coeffs, -&x[t], ConstraintKind::Equality)
                })
                .collect();
            let mut sys = eqs;
            for k in 0..gens.len() {
                let mut unit = vec![BigInt::zero(); gens.len()];
                unit[k] = BigInt::one();
                sys.push(Constraint::new(unit, BigInt::zero(), ConstraintKind::Inequality));
            }
            let expressible = if gens.is_empty() { x.iter().all(Zero::is_zero) } else { lp::is_feasible(gens.len(), &sys) };
            prop_assert!(expressible, "member {:?} not generated by {:?}", x, g);
        }
    }

    #[test]
    fn projection_has_exactly_the_images(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..=4), drop in 0usize..3) {
        let cons: Vec<Constraint> = rows.iter().map(|r| Constraint::ineq(r, 0)).filter(|c| !c.is_constant()).collect();
        let cone = Cone::new(3, cons.clone());
        let others: Vec<usize> = (0..3).filter(|&k| k != drop).collect();
        let proj = project_cone(&cone, &others);
        // Constraints are integer-tightened, so test y scaled by 2: every bound
        // on the dropped coordinate (coefficients in [-2, 2]) is then integral.
        for y in box_points(2, -3, 3) {
            let y: Vec<i64> = y.iter().map(|v| 2 * v).collect();
            // A preimage exists iff fixing the kept coordinates leaves the dropped one feasible.
            let fixed: Vec<Constraint> = cons
                .iter()
                .map(|c| {
                    let constant: BigInt = others.iter().zip(&y).map(|(&k, &v)| &c.coeffs[k] * BigInt::from(v)).sum();
                    Constraint::new(vec![c.coeffs[drop].clone()], constant, c.kind)
                })
                .collect();
            let feasible = fixed.iter().all(|c| !c.is_constant() || c.constant_holds()) && {
                let live: Vec<Constraint> = fixed.into_iter().filter(|c| !c.is_constant()).collect();
                lp::is_feasible(1, &live)
            };
            prop_assert_eq!(proj.contains(&big(&y)), feasible, "at {:?}", y);
        }
    }
}
