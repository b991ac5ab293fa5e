//! Small dense row-major matrices and the handful of factorizations the spaces need.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{OrbaError, Result};

/// Row-major dense matrix, serialized as an array of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl schemars::JsonSchema for Matrix {
    fn schema_name() -> String {
        "Matrix".to_owned()
    }

    fn json_schema(gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
        <Vec<Vec<f64>>>::json_schema(gen)
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = OrbaError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        (0..m.rows).map(|i| m.row(i).to_vec()).collect()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(OrbaError::Descriptor(format!(
                    "ragged matrix: row of length {} in a matrix with {} columns",
                    r.len(),
                    cols
                )));
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(OrbaError::Descriptor("matrix entries must be finite".into()));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(OrbaError::Descriptor("ragged column list".into()));
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        Ok(m)
    }

    /// `n x n` lower-triangular matrix of ones: maps a sequence to its partial sums.
    pub fn partial_sums(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, 1.0);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Matrix {
        let mut out = Matrix::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }

    pub fn determinant(&self) -> f64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        self.to_nalgebra().determinant()
    }

    pub fn rank(&self, tol: f64) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.to_nalgebra().rank(tol)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        self.to_nalgebra()
            .try_inverse()
            .map(|m| Matrix::from_nalgebra(&m))
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        if !self.is_square() {
            return None;
        }
        let lu = self.to_nalgebra().lu();
        lu.solve(&DVector::from_column_slice(b))
            .map(|x| x.iter().copied().collect())
    }

    /// Coordinates of `v` in the column basis of `self` (full column rank), if `v`
    /// lies in the column span up to `tol` (relative to the size of `v`).
    pub fn coordinates_of(&self, v: &[f64], tol: f64) -> Option<Vec<f64>> {
        if v.len() != self.rows {
            return None;
        }
        let a = self.to_nalgebra();
        let b = DVector::from_column_slice(v);
        let svd = a.clone().svd(true, true);
        let x = svd.solve(&b, 1e-12).ok()?;
        let residual = (&a * &x - &b).amax();
        let scale = 1.0 + b.amax();
        (residual <= tol * scale).then(|| x.iter().copied().collect())
    }

    /// Greedy selection of linearly independent columns spanning the column space.
    pub fn column_basis(&self, tol: f64) -> Matrix {
        let mut chosen: Vec<Vec<f64>> = Vec::new();
        for j in 0..self.cols {
            let mut trial = chosen.clone();
            trial.push(self.column(j));
            let m = Matrix::from_columns(&trial).expect("columns share a length");
            if m.rank(tol) == trial.len() {
                chosen = trial;
            }
        }
        if chosen.is_empty() {
            return Matrix::zeros(self.rows, 0);
        }
        Matrix::from_columns(&chosen).expect("columns share a length")
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn axpy(alpha: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| alpha * a + b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_is_row_major() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[1.0,2.0],[3.0,4.0]]");
        let back: Matrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Matrix>("[[1.0],[2.0,3.0]]").is_err());
    }

    #[test]
    fn partial_sums_and_solve() {
        let t = Matrix::partial_sums(4);
        assert_eq!(t.mul_vec(&[1.0, -1.0, 1.0, -1.0]), vec![1.0, 0.0, 1.0, 0.0]);
        let x = t.solve(&[1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!((x[1] + 1.0).abs() < 1e-12);
        assert!((t.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn column_basis_drops_dependent_columns() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![1.0, 2.0, 1.0]]).unwrap();
        let b = m.column_basis(1e-10);
        assert_eq!(b.cols(), 2);
        assert_eq!(b.column(1), vec![0.0, 1.0]);
        assert!(b.coordinates_of(&[3.0, 5.0], 1e-9).is_some());
        let line = Matrix::from_columns(&[vec![1.0, 1.0]]).unwrap();
        assert!(line.coordinates_of(&[1.0, 0.0], 1e-9).is_none());
    }
}
