//! Dense exact linear algebra over [`Scalar`].
//!
//! Small matrices only (the spinor modules here have dimension at most 16),
//! so plain Gauss-Jordan elimination with exact division is enough.

use crate::exactfield::{Scalar, ScalarPoly};

/// A dense matrix with exact entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && (&self.transpose() + self).is_zero()
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t = &t + &self[(i, i)];
        }
        t
    }

    pub fn scale(&self, by: &Scalar) -> Mat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = &*v * by;
        }
        out
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(a * b);
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Mat) -> Mat {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        s = &s + &(&self[(i, j)] * &v[j]);
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, n: u32) -> Mat {
        assert!(self.is_square());
        let mut out = Mat::identity(self.rows);
        for _ in 0..n {
            out = out.matmul(self);
        }
        out
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self` (same row count).
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form, in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let tmp = self[(p, j)].clone();
                self[(p, j)] = self[(row, j)].clone();
                self[(row, j)] = tmp;
            }
            let inv = self[(row, col)].inverse().expect("pivot is non-zero");
            for j in 0..self.cols {
                self[(row, j)] = &self[(row, j)] * &inv;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    for j in 0..self.cols {
                        self[(r, j)] = &self[(r, j)] - &(&f * &self[(row, j)]);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A basis of the right nullspace, one vector per column of the result.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[(r, f)];
            }
            basis.push(v);
        }
        basis
    }

    /// Characteristic polynomial via the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> ScalarPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Mat::identity(n);
        for k in 1..=n {
            m = self.matmul(&m);
            let c = &(-&m.trace()) * &Scalar::rational(1, k as i64);
            for i in 0..n {
                m[(i, i)] = &m[(i, i)] + &c;
            }
            coeffs[n - k] = c;
        }
        ScalarPoly::from_coeffs(coeffs)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        let c = self.cols;
        &mut self.data[i * c + j]
    }
}

impl std::ops::Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = &*a + b;
        }
        out
    }
}

impl std::ops::Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = &*a - b;
        }
        out
    }
}

impl std::ops::Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = -&*a;
        }
        out
    }
}

/// Do the columns of `a` and `b` span the same subspace?
pub fn same_column_span(a: &Mat, b: &Mat) -> bool {
    if a.rows != b.rows {
        return false;
    }
    let ra = a.transpose().rank();
    let rb = b.transpose().rank();
    let joint = a.hstack(b).transpose().rank();
    ra == rb && rb == joint
}

/// Columns of `mat` assembled from a list of vectors.
pub fn columns(vectors: &[Vec<Scalar>], dim: usize) -> Mat {
    let mut m = Mat::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        assert_eq!(v.len(), dim);
        for i in 0..dim {
            m[(i, j)] = v[i].clone();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    #[test]
    fn rref_and_nullspace() {
        let m = Mat::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(1), s(0), s(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn char_poly_of_companion() {
        // x^2 - x - 1 (Fibonacci companion matrix).
        let m = Mat::from_rows(vec![vec![s(0), s(1)], vec![s(1), s(1)]]);
        let p = m.char_poly();
        assert_eq!(p.coeff(0), s(-1));
        assert_eq!(p.coeff(1), s(-1));
        assert_eq!(p.coeff(2), s(1));
    }

    #[test]
    fn span_comparison() {
        let a = columns(&[vec![s(1), s(0), s(1)], vec![s(0), s(1), s(0)]], 3);
        let b = columns(&[vec![s(1), s(1), s(1)], vec![s(1), s(-1), s(1)]], 3);
        let c = columns(&[vec![s(1), s(0), s(0)]], 3);
        assert!(same_column_span(&a, &b));
        assert!(!same_column_span(&a, &c));
    }
}
