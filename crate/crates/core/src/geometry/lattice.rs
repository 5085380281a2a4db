//! Thick face lattices.
//!
//! Faces are identified by the set of root constraints they saturate. Thick
//! equalities of the root are never saturated: they already bound the face
//! to a parameter-free width.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;

use super::constraint::Constraint;
use super::polyhedron::Polyhedron;
use super::{lp, GeometryError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub polyhedron: Polyhedron,
    /// Ids of root constraints saturated on this face.
    pub saturated: BTreeSet<usize>,
    /// Root constraint saturated in addition to the parent's (none for the root).
    pub new_constraint: Option<usize>,
    pub depth: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone)]
pub struct ThickFaceLattice {
    pub root_constraints: Vec<Constraint>,
    pub faces: Vec<Face>,
    /// `children[k]` lists the facets of `faces[k]` by index.
    pub children: Vec<Vec<usize>>,
}

/// Root constraints that can become saturated: inequalities with a nonzero index part.
fn candidate(root: &Polyhedron, c: &Constraint) -> bool {
    !c.is_equality() && root.index_part(c).iter().any(|v| !v.is_zero())
}

/// Root inequalities that are implicit equalities on `poly`.
fn saturation_closure(root: &Polyhedron, poly: &Polyhedron) -> BTreeSet<usize> {
    let n = poly.dim_total();
    root.constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| candidate(root, c))
        .filter(|(_, c)| matches!(lp::sup_of(n, &poly.constraints, c), Some(Some(v)) if v.is_zero()))
        .map(|(k, _)| k)
        .collect()
}

/// Facets of `face` (a face of `root`): saturate one more root constraint and
/// keep the result when it is nonempty and exactly one dimension lower.
pub fn facets(root: &Polyhedron, face: &Face) -> Vec<(usize, Face)> {
    if face.dimension == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (k, c) in root.constraints.iter().enumerate() {
        if face.saturated.contains(&k) || !candidate(root, c) {
            continue;
        }
        if face.polyhedron.is_thick(c) {
            continue;
        }
        let poly = face.polyhedron.with_constraints(&[c.as_equality()]);
        if poly.is_empty() {
            continue;
        }
        let Ok(dim) = poly.dimension() else { continue };
        if dim + 1 != face.dimension {
            continue;
        }
        let mut saturated = saturation_closure(root, &poly);
        saturated.extend(face.saturated.iter().copied());
        saturated.insert(k);
        out.push((
            k,
            Face { polyhedron: poly, saturated, new_constraint: Some(k), depth: face.depth + 1, dimension: dim },
        ));
    }
    out
}

impl ThickFaceLattice {
    pub fn build(root: &Polyhedron) -> Result<ThickFaceLattice, GeometryError> {
        let dimension = root.dimension()?;
        let top = Face {
            polyhedron: root.clone(),
            saturated: BTreeSet::new(),
            new_constraint: None,
            depth: 0,
            dimension,
        };
        let mut faces = vec![top];
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        index.insert(BTreeSet::new(), 0);
        let mut k = 0;
        while k < faces.len() {
            let found = facets(root, &faces[k]);
            for (_, f) in found {
                let id = match index.get(&f.saturated) {
                    Some(&id) => id,
                    None => {
                        let id = faces.len();
                        index.insert(f.saturated.clone(), id);
                        faces.push(f);
                        children.push(Vec::new());
                        id
                    }
                };
                if !children[k].contains(&id) {
                    children[k].push(id);
                }
            }
            k += 1;
        }
        Ok(ThickFaceLattice { root_constraints: root.constraints.clone(), faces, children })
    }

    pub fn root(&self) -> &Face {
        &self.faces[0]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.dimension == 0)
    }

    /// Indented text dump: one face per line with its dimension and saturated ids.
    pub fn dump(&self, names: &[String]) -> String {
        let mut out = String::new();
        let mut seen = BTreeSet::new();
        self.dump_rec(0, 0, names, &mut seen, &mut out);
        out
    }

    fn dump_rec(&self, k: usize, indent: usize, names: &[String], seen: &mut BTreeSet<usize>, out: &mut String) {
        let f = &self.faces[k];
        let sat: Vec<String> = f.saturated.iter().map(|s| s.to_string()).collect();
        let newc = match f.new_constraint {
            Some(c) => format!(" via [{}] {}", c, self.root_constraints[c].display_with(names)),
            None => String::new(),
        };
        let _ = writeln!(out, "{}dim={} sat={{{}}}{}", "  ".repeat(indent), f.dimension, sat.join(","), newc);
        if !seen.insert(k) {
            return;
        }
        for &c in &self.children[k] {
            self.dump_rec(c, indent + 1, names, seen, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Constraint;

    #[test]
    fn segment_has_three_faces() {
        let seg = Polyhedron::from_constraints(
            vec![Constraint::ineq(&[1, 0], 0), Constraint::ineq(&[-1, 1], 0), Constraint::ineq(&[0, 1], 0)],
            1,
            1,
        );
        let l = ThickFaceLattice::build(&seg).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.children[0].len(), 2);
        assert_eq!(l.vertices().count(), 2);
    }

    #[test]
    fn point_has_one_face() {
        let p = Polyhedron::from_constraints(vec![Constraint::eq(&[1], 0)], 1, 0);
        let l = ThickFaceLattice::build(&p).unwrap();
        assert_eq!(l.len(), 1);
        assert!(facets(&p, l.root()).is_empty());
    }

    #[test]
    fn triangle_facets() {
        let t = Polyhedron::from_constraints(
            vec![
                Constraint::ineq(&[1, 0, 0], -1),
                Constraint::ineq(&[-1, 0, 1], 0),
                Constraint::ineq(&[-1, 1, 0], 0),
                Constraint::ineq(&[2, -1, 0], -1),
                Constraint::ineq(&[0, 0, 1], -1),
            ],
            2,
            1,
        );
        let l = ThickFaceLattice::build(&t).unwrap();
        assert_eq!(l.children[0].len(), 3);
        for &c in &l.children[0] {
            assert_eq!(l.faces[c].dimension, 1);
        }
        // every face saturates exactly one more constraint than some parent
        for (p, kids) in l.children.iter().enumerate() {
            for &k in kids {
                assert!(l.faces[p].saturated.is_subset(&l.faces[k].saturated));
                assert!(l.faces[k].saturated.len() > l.faces[p].saturated.len());
            }
        }
    }
}
