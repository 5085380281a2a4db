use crate::geometry::{intersect_spaces, kernel, GeometryError, LinearSpace, Polyhedron};

use super::affine::AffineMap;

/// Directions along which the read `X[A z]` returns the same element: `ker A`.
pub fn reuse_space(access: &AffineMap) -> LinearSpace {
    kernel(&access.matrix, access.in_dim())
}

/// `L(F) ∩ R(e)`.
pub fn share_space(face: &Polyhedron, access: &AffineMap) -> Result<LinearSpace, GeometryError> {
    Ok(intersect_spaces(&face.lineality()?, &reuse_space(access)))
}

/// Polynomial degree of evaluating a reduction directly over its (effective) domain.
pub fn nominal_complexity(domain: &Polyhedron) -> usize {
    domain.dimension().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::space::int_vec;
    use crate::geometry::Constraint;

    fn triangle() -> Polyhedron {
        Polyhedron::from_constraints(
            vec![
                Constraint::ineq(&[1, 0, 0], -1),
                Constraint::ineq(&[-1, 0, 1], 0),
                Constraint::ineq(&[-1, 1, 0], 0),
                Constraint::ineq(&[2, -1, 0], -1),
            ],
            2,
            1,
        )
    }

    #[test]
    fn reuse_of_column_read() {
        let a = AffineMap::from_rows(&[vec![0, 1, 0, 0]], 2, 1);
        assert_eq!(reuse_space(&a), LinearSpace::span(2, &[int_vec(&[1, 0])]));
        let id = AffineMap::identity(2, 1);
        assert_eq!(reuse_space(&id).dim(), 0);
    }

    #[test]
    fn share_spaces_on_triangle_faces() {
        let a = AffineMap::from_rows(&[vec![0, 1, 0, 0]], 2, 1);
        let t = triangle();
        assert_eq!(share_space(&t, &a).unwrap(), LinearSpace::span(2, &[int_vec(&[1, 0])]));
        let diag = t.with_constraints(&[Constraint::eq(&[-1, 1, 0], 0)]);
        assert_eq!(share_space(&diag, &a).unwrap().dim(), 0);
        let last_row = t.with_constraints(&[Constraint::eq(&[-1, 0, 1], 0)]);
        assert_eq!(share_space(&last_row, &a).unwrap().dim(), 0);
    }

    #[test]
    fn nominal_degrees() {
        assert_eq!(nominal_complexity(&triangle()), 2);
        let seg = Polyhedron::from_constraints(vec![Constraint::ineq(&[1, 0], 0), Constraint::ineq(&[-1, 1], 0)], 1, 1);
        assert_eq!(nominal_complexity(&seg), 1);
        let pt = Polyhedron::from_constraints(vec![Constraint::eq(&[1, 0], 0)], 1, 1);
        assert_eq!(nominal_complexity(&pt), 0);
    }
}
