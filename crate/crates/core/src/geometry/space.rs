//! Linear subspaces with canonical integer bases.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lp::integer_direction;
use super::Rat;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Reduced row echelon form over the rationals; returns (rows, pivot columns).
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v /= &pv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

fn to_rat(m: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    m.iter().map(|r| r.iter().map(|v| Rat::from_integer(v.clone())).collect()).collect()
}

pub fn rank(m: &[Vec<BigInt>], ncols: usize) -> usize {
    rref(&to_rat(m), ncols).1.len()
}

/// A linear subspace of `Q^ambient`, stored as a canonical integer basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSpace {
    pub ambient: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl LinearSpace {
    pub fn span(ambient: usize, vectors: &[Vec<BigInt>]) -> Self {
        let (rows, _) = rref(&to_rat(vectors), ambient);
        let basis = rows.iter().map(|r| integer_direction(r)).collect();
        LinearSpace { ambient, basis }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|k| (0..ambient).map(|j| if j == k { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        LinearSpace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        LinearSpace { ambient, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows, self.ambient) == self.dim()
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> LinearSpace {
        kernel(&self.basis, self.ambient)
    }

    pub fn is_subspace_of(&self, other: &LinearSpace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}

impl fmt::Display for LinearSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "span{{{}}}", vs.join(", "))
    }
}

/// Rational kernel `{v : M v = 0}` of an integer matrix with `ncols` columns.
pub fn kernel(m: &[Vec<BigInt>], ncols: usize) -> LinearSpace {
    let (rows, pivots) = rref(&to_rat(m), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut vecs = Vec::new();
    for &f in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[f] = Rat::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = -row[f].clone();
        }
        vecs.push(integer_direction(&v));
    }
    LinearSpace::span(ncols, &vecs)
}

pub fn intersect_spaces(a: &LinearSpace, b: &LinearSpace) -> LinearSpace {
    assert_eq!(a.ambient, b.ambient, "ambient dimension mismatch");
    let mut rows = a.complement().basis;
    rows.extend(b.complement().basis);
    kernel(&rows, a.ambient)
}

pub fn mat_vec(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&int_matrix(&[&[0, 1]]), 2).basis, vec![int_vec(&[1, 0])]);
        assert_eq!(kernel(&int_matrix(&[&[1, 0], &[0, 1]]), 2).dim(), 0);
        let k = kernel(&int_matrix(&[&[1, 1]]), 2);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&int_vec(&[1, -1])));
    }

    #[test]
    fn intersection_examples() {
        let x = LinearSpace::span(2, &[int_vec(&[1, 0])]);
        let y = LinearSpace::span(2, &[int_vec(&[0, 1])]);
        let d = LinearSpace::span(2, &[int_vec(&[1, 1])]);
        assert_eq!(intersect_spaces(&x, &LinearSpace::full(2)), x);
        assert_eq!(intersect_spaces(&x, &y).dim(), 0);
        assert_eq!(intersect_spaces(&LinearSpace::full(2), &d), d);
    }

    #[test]
    fn canonical_basis_is_independent_of_generators() {
        let a = LinearSpace::span(3, &[int_vec(&[1, 1, 0]), int_vec(&[0, 1, 1])]);
        let b = LinearSpace::span(3, &[int_vec(&[1, 2, 1]), int_vec(&[2, 2, 0])]);
        assert_eq!(a, b);
    }
}
