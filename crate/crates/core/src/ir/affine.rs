use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::geometry::constraint::{Constraint, ConstraintKind};
use crate::geometry::space::IntMatrix;

/// `z ↦ M z + P p + k` from index dims (and parameters) to output dims.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub matrix: IntMatrix,
    pub param_matrix: IntMatrix,
    pub constant: Vec<BigInt>,
}

impl AffineMap {
    pub fn identity(n: usize, n_param: usize) -> AffineMap {
        let matrix = (0..n)
            .map(|r| (0..n).map(|c| BigInt::from((r == c) as i64)).collect())
            .collect();
        AffineMap { matrix, param_matrix: vec![vec![BigInt::zero(); n_param]; n], constant: vec![BigInt::zero(); n] }
    }

    /// Builds from rows of `[index coeffs..., param coeffs..., constant]`.
    pub fn from_rows(rows: &[Vec<i64>], n_in: usize, n_param: usize) -> AffineMap {
        let mut m = AffineMap { matrix: Vec::new(), param_matrix: Vec::new(), constant: Vec::new() };
        for r in rows {
            assert_eq!(r.len(), n_in + n_param + 1);
            m.matrix.push(r[..n_in].iter().map(|&v| BigInt::from(v)).collect());
            m.param_matrix.push(r[n_in..n_in + n_param].iter().map(|&v| BigInt::from(v)).collect());
            m.constant.push(BigInt::from(r[n_in + n_param]));
        }
        m
    }

    pub fn out_dim(&self) -> usize {
        self.constant.len()
    }

    pub fn in_dim(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    pub fn apply(&self, z: &[i64], params: &[i64]) -> Vec<i64> {
        (0..self.out_dim())
            .map(|r| {
                let mut acc = self.constant[r].clone();
                for (a, &v) in self.matrix[r].iter().zip(z) {
                    acc += a * BigInt::from(v);
                }
                for (a, &v) in self.param_matrix[r].iter().zip(params) {
                    acc += a * BigInt::from(v);
                }
                acc.to_i64().expect("index overflow")
            })
            .collect()
    }

    /// Pulls a constraint over `(y, p)` back through the map to `(z, p)`.
    pub fn pullback(&self, c: &Constraint) -> Constraint {
        let n_out = self.out_dim();
        let n_in = self.in_dim();
        let n_param = c.dim() - n_out;
        let mut coeffs = vec![BigInt::zero(); n_in + n_param];
        let mut constant = c.constant.clone();
        for r in 0..n_out {
            let a = &c.coeffs[r];
            if a.is_zero() {
                continue;
            }
            for k in 0..n_in {
                coeffs[k] += a * &self.matrix[r][k];
            }
            for k in 0..n_param {
                coeffs[n_in + k] += a * &self.param_matrix[r][k];
            }
            constant += a * &self.constant[r];
        }
        for k in 0..n_param {
            coeffs[n_in + k] += &c.coeffs[n_out + k];
        }
        Constraint::new(coeffs, constant, c.kind)
    }

    /// `z ↦ self(g(z))` for an inner map `g`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let n_param = inner.param_matrix.first().map_or(self.param_matrix.first().map_or(0, |r| r.len()), |r| r.len());
        let mut out = AffineMap { matrix: Vec::new(), param_matrix: Vec::new(), constant: Vec::new() };
        for r in 0..self.out_dim() {
            let mut row = vec![BigInt::zero(); inner.in_dim()];
            let mut prow = self.param_matrix[r].clone();
            prow.resize(n_param, BigInt::zero());
            let mut k = self.constant[r].clone();
            for (j, a) in self.matrix[r].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (c, v) in inner.matrix[j].iter().enumerate() {
                    row[c] += a * v;
                }
                for (c, v) in inner.param_matrix[j].iter().enumerate() {
                    prow[c] += a * v;
                }
                k += a * &inner.constant[j];
            }
            out.matrix.push(row);
            out.param_matrix.push(prow);
            out.constant.push(k);
        }
        out
    }

    /// `z ↦ self(z) - v`.
    pub fn shifted(&self, v: &[BigInt]) -> AffineMap {
        let mut m = self.clone();
        for (c, s) in m.constant.iter_mut().zip(v) {
            *c -= s;
        }
        m
    }

    /// Row `r` as the linear form `y_r - (M z + P p + k)_r`, over `(y, z, p)`, set to zero.
    pub fn graph_equalities(&self) -> Vec<Constraint> {
        let n_out = self.out_dim();
        let n_in = self.in_dim();
        (0..n_out)
            .map(|r| {
                let mut coeffs = vec![BigInt::zero(); n_out];
                coeffs[r] = BigInt::from(1);
                coeffs.extend(self.matrix[r].iter().map(|v| -v));
                coeffs.extend(self.param_matrix[r].iter().map(|v| -v));
                let _ = n_in;
                Constraint::new(coeffs, -self.constant[r].clone(), ConstraintKind::Equality)
            })
            .collect()
    }

    /// True when the map is `z ↦ z + k` for a constant `k` (no parameter terms).
    pub fn is_translation(&self) -> bool {
        self.out_dim() == self.in_dim()
            && self.matrix.iter().enumerate().all(|(r, row)| {
                row.iter().enumerate().all(|(c, v)| *v == BigInt::from((r == c) as i64))
            })
            && self.param_matrix.iter().flatten().all(Zero::is_zero)
    }

    /// Renders the map's outputs as comma-separated affine expressions.
    pub fn display_outputs(&self, in_names: &[String], param_names: &[String]) -> Vec<String> {
        let mut names: Vec<String> = in_names.to_vec();
        names.extend(param_names.iter().cloned());
        (0..self.out_dim())
            .map(|r| {
                let mut coeffs = self.matrix[r].clone();
                coeffs.extend(self.param_matrix[r].iter().cloned());
                crate::geometry::constraint::format_linear(&coeffs, &self.constant[r], &names)
            })
            .collect()
    }
}
