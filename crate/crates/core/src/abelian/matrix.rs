//! Dense integer matrices with overflow-checked arithmetic.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::{checked, AbelianError, Result};

/// A dense row-major matrix over `i64`.
///
/// Every arithmetic operation that can overflow goes through checked
/// arithmetic and surfaces [`AbelianError::Overflow`] instead of wrapping.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width so that `k×0` and
    /// `0×k` shapes are representable.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(AbelianError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(columns: &[Vec<i64>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(AbelianError::Shape(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: &[i64], rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &x) in entries.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Selects the given rows, in order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut out = Self::zeros(indices.len(), self.cols);
        for (r, &i) in indices.iter().enumerate() {
            for j in 0..self.cols {
                out[(r, j)] = self[(i, j)];
            }
        }
        out
    }

    /// Selects the given columns, in order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, indices.len());
        for i in 0..self.rows {
            for (c, &j) in indices.iter().enumerate() {
                out[(i, c)] = self[(i, j)];
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(AbelianError::Shape(format!(
                "cannot concatenate {}-row and {}-row matrices",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        Ok(out)
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diagonal(&self, other: &IntMatrix) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(AbelianError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self[(i, t)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = checked::mul(a, rhs[(t, j)])?;
                    out[(i, j)] = checked::add(out[(i, j)], prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if self.cols != v.len() {
            return Err(AbelianError::Shape(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0; self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0i64;
            for (j, &x) in v.iter().enumerate() {
                acc = checked::add(acc, checked::mul(self[(i, j)], x)?)?;
            }
            *slot = acc;
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|&x| checked::mul(x, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { data, ..*self })
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(AbelianError::Shape("cannot add matrices of different shapes".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| checked::add(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { data, ..*self })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += c * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let delta = checked::mul(c, self[(source, j)])?;
            self[(target, j)] = checked::add(self[(target, j)], delta)?;
        }
        Ok(())
    }

    /// `col[target] += c * col[source]`
    pub fn add_column_multiple(&mut self, target: usize, source: usize, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let delta = checked::mul(c, self[(i, source)])?;
            self[(i, target)] = checked::add(self[(i, target)], delta)?;
        }
        Ok(())
    }

    pub fn negate_row(&mut self, i: usize) -> Result<()> {
        for j in 0..self.cols {
            self[(i, j)] = checked::neg(self[(i, j)])?;
        }
        Ok(())
    }

    pub fn negate_column(&mut self, j: usize) -> Result<()> {
        for i in 0..self.rows {
            self[(i, j)] = checked::neg(self[(i, j)])?;
        }
        Ok(())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(AbelianError::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return Ok(0);
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(AbelianError::Overflow)?;
                    a[i][j] = v / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| AbelianError::Overflow)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]], 2).unwrap();
        assert_eq!(a.determinant().unwrap(), -8);
        let b = IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]], 3).unwrap();
        assert_eq!(b.determinant().unwrap(), -2);
        assert_eq!(IntMatrix::identity(0).determinant().unwrap(), 1);
    }

    #[test]
    fn multiplication_overflow_is_reported() {
        let a = IntMatrix::from_rows(&[vec![i64::MAX]], 1).unwrap();
        let b = IntMatrix::from_rows(&[vec![2]], 1).unwrap();
        assert_eq!(a.mul(&b), Err(AbelianError::Overflow));
    }

    #[test]
    fn empty_shapes_multiply() {
        let a = IntMatrix::zeros(0, 3);
        let b = IntMatrix::zeros(3, 2);
        assert_eq!(a.mul(&b).unwrap().shape(), (0, 2));
        let c = IntMatrix::zeros(2, 0);
        let d = IntMatrix::zeros(0, 4);
        let p = c.mul(&d).unwrap();
        assert_eq!(p.shape(), (2, 4));
        assert!(p.is_zero());
    }
}
