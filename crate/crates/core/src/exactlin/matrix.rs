use std::fmt;

use super::field::{Field, Scalar};
use super::vector::SparseVec;
use super::LinAlgError;

/// Sparse matrix over a [`Field`], stored by columns.
///
/// Every stored entry is nonzero and within bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

/// Output of [`SparseMatrix::rref`]: `transform * M = reduced`.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: SparseMatrix,
    pub pivots: Vec<usize>,
    pub transform: SparseMatrix,
}

impl SparseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            cols,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        SparseMatrix {
            field,
            rows: n,
            cols: n,
            columns: (0..n).map(|i| SparseVec::basis(i, field)).collect(),
        }
    }

    pub fn from_columns(
        field: Field,
        rows: usize,
        columns: Vec<SparseVec>,
    ) -> Result<Self, LinAlgError> {
        for col in &columns {
            if let Some(i) = col.max_index() {
                if i >= rows {
                    return Err(LinAlgError::IndexOutOfBounds {
                        index: i,
                        bound: rows,
                    });
                }
            }
            if let Some((_, c)) = col.iter().next() {
                if c.field() != field {
                    return Err(LinAlgError::FieldMismatch);
                }
            }
        }
        Ok(SparseMatrix {
            field,
            rows,
            cols: columns.len(),
            columns,
        })
    }

    /// Row-major dense input.
    pub fn from_dense(field: Field, rows: usize, cols: usize, data: &[Vec<Scalar>]) -> Self {
        let mut m = SparseMatrix::zeros(field, rows, cols);
        for (r, row) in data.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.columns[c].add_term(r, v);
            }
        }
        m
    }

    /// Row-major integer input, reduced into `field`.
    pub fn from_i64_rows(field: Field, data: &[&[i64]]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Scalar>> = data
            .iter()
            .map(|row| row.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        SparseMatrix::from_dense(field, rows, cols, &dense)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c]
            .get(&r)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let old = self.get(r, c);
        self.columns[c].add_term(r, &(&value - &old));
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.field, self.cols, self.rows);
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in col {
                out.columns[r].add_term(c, v);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in v {
            out.add_scaled(&self.columns[i], c);
        }
        out
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            columns: other.columns.iter().map(|c| self.mul_vec(c)).collect(),
        })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinAlgError> {
        self.combine(other, &self.field.one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinAlgError> {
        self.combine(other, &self.field.from_i64(-1))
    }

    fn combine(&self, other: &SparseMatrix, c: &Scalar) -> Result<SparseMatrix, LinAlgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinAlgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.columns.iter_mut().zip(&other.columns) {
            a.add_scaled(b, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|col| col.scaled(c)).collect(),
        }
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinAlgError> {
        if self.rows != other.rows {
            return Err(LinAlgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: columns.len(),
            columns,
        })
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, which: &[usize]) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: which.len(),
            columns: which.iter().map(|&c| self.columns[c].clone()).collect(),
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in col {
                out[r][c] = v.clone();
            }
        }
        out
    }

    /// Reduced row echelon form with the accumulated row operations.
    pub fn rref(&self) -> Rref {
        let mut rows = self.to_dense();
        let mut t = SparseMatrix::identity(self.field, self.rows).to_dense();
        let pivots = eliminate(&mut rows, Some(&mut t), self.cols);
        Rref {
            reduced: SparseMatrix::from_dense(self.field, self.rows, self.cols, &rows),
            pivots,
            transform: SparseMatrix::from_dense(self.field, self.rows, self.rows, &t),
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_dense();
        eliminate(&mut rows, None, self.cols).len()
    }

    /// A basis of the null space: one vector per non-pivot column `j`, with
    /// coordinate 1 at `j` and zero at every other free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let mut rows = self.to_dense();
        let pivots = eliminate(&mut rows, None, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = SparseVec::basis(j, self.field);
                for (k, &p) in pivots.iter().enumerate() {
                    v.add_term(p, &-&rows[k][j]);
                }
                v
            })
            .collect()
    }

    /// The solution of `self * x = b` whose free coordinates (non-pivot
    /// columns of the rref) are all zero.
    pub fn solve_preimage(&self, b: &SparseVec) -> Result<SparseVec, LinAlgError> {
        if let Some(i) = b.max_index() {
            if i >= self.rows {
                return Err(LinAlgError::IndexOutOfBounds {
                    index: i,
                    bound: self.rows,
                });
            }
        }
        let mut rows = self.to_dense();
        let rhs = b.to_dense(self.rows, self.field);
        for (row, v) in rows.iter_mut().zip(rhs) {
            row.push(v);
        }
        let pivots = eliminate(&mut rows, None, self.cols);
        for row in rows.iter().skip(pivots.len()) {
            if !row[self.cols].is_zero() {
                return Err(LinAlgError::NoSolution);
            }
        }
        Ok(pivots
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, rows[k][self.cols].clone()))
            .collect())
    }
}

/// Gauss-Jordan elimination on the first `cols` columns of `rows`, applying
/// the same row operations to `transform` when given. Returns pivot columns.
fn eliminate(
    rows: &mut [Vec<Scalar>],
    mut transform: Option<&mut Vec<Vec<Scalar>>>,
    cols: usize,
) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if let Some(t) = transform.as_deref_mut() {
            t.swap(r, p);
        }
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        scale_row(&mut rows[r], &inv);
        if let Some(t) = transform.as_deref_mut() {
            scale_row(&mut t[r], &inv);
        }
        for i in 0..n {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            let (src, dst) = pick_rows(rows, r, i);
            axpy_row(dst, src, &factor);
            if let Some(t) = transform.as_deref_mut() {
                let (src, dst) = pick_rows(t, r, i);
                axpy_row(dst, src, &factor);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn scale_row(row: &mut [Scalar], c: &Scalar) {
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = &*v * c;
        }
    }
}

/// `dst -= factor * src`.
fn axpy_row(dst: &mut [Scalar], src: &[Scalar], factor: &Scalar) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = &*d - &(s * factor);
        }
    }
}

fn pick_rows<T>(rows: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = rows.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn rref(m: &SparseMatrix) -> Rref {
    m.rref()
}

pub fn rank(m: &SparseMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    m.kernel_basis()
}

pub fn solve_preimage(m: &SparseMatrix, b: &SparseVec) -> Result<SparseVec, LinAlgError> {
    m.solve_preimage(b)
}
