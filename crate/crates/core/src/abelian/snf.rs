//! Smith normal form over the integers.
//!
//! `D = U·A·V` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
//! nonnegative entries and trailing zeros. The inverses of `U` and `V` are
//! carried along so that callers can change basis in both directions without
//! a separate inversion step.

use super::matrix::IntMatrix;
use super::{AbelianError, Result};

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries `d₁ | d₂ | … | d_rank`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.d[(i, i)]).collect()
    }

    /// Columns of `V` spanning the integer kernel of the original matrix.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        (self.rank..self.v.cols()).map(|j| self.v.column(j)).collect()
    }

    /// Solves `A·x = b` over the integers, `None` when no integer solution exists.
    pub fn solve(&self, b: &[i64]) -> Result<Option<Vec<i64>>> {
        let y = self.u.mul_vec(b)?;
        let mut z = vec![0i64; self.v.rows()];
        for (i, &yi) in y.iter().enumerate() {
            if i < self.rank {
                let di = self.d[(i, i)];
                if yi % di != 0 {
                    return Ok(None);
                }
                z[i] = yi / di;
            } else if yi != 0 {
                return Ok(None);
            }
        }
        Ok(Some(self.v.mul_vec(&z)?))
    }
}

type Mat = Vec<Vec<i128>>;

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn add128(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(AbelianError::Overflow)
}

fn mul128(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(AbelianError::Overflow)
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (&x, &y)| add128(acc, mul128(x, y)?))
}

/// `round(num / den)` for `den > 0`.
fn round_div(num: i128, den: i128) -> Result<i128> {
    Ok(add128(mul128(2, num)?, den)?.div_euclid(mul128(2, den)?))
}

/// Extended gcd: `(g, s, t)` with `s·a + t·b = g > 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Working state: `d = u·a·v` is maintained after every operation, together
/// with the inverses of `u` and `v`. Arithmetic is `i128` and checked; the
/// result must fit `i64` at the end.
struct Reducer {
    m: usize,
    n: usize,
    d: Mat,
    u: Mat,
    u_inv: Mat,
    v: Mat,
    v_inv: Mat,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap(a, b);
        self.u.swap(a, b);
        for row in &mut self.u_inv {
            row.swap(a, b);
        }
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row.swap(a, b);
        }
        self.v_inv.swap(a, b);
    }

    /// `row[target] += c·row[source]`.
    fn add_row(&mut self, target: usize, source: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for mat in [&mut self.d, &mut self.u] {
            for j in 0..mat[0].len() {
                mat[target][j] = add128(mat[target][j], mul128(c, mat[source][j])?)?;
            }
        }
        for row in &mut self.u_inv {
            row[source] = add128(row[source], mul128(-c, row[target])?)?;
        }
        Ok(())
    }

    /// `col[target] += c·col[source]`.
    fn add_column(&mut self, target: usize, source: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row[target] = add128(row[target], mul128(c, row[source])?)?;
        }
        for j in 0..self.n {
            self.v_inv[source][j] = add128(self.v_inv[source][j], mul128(-c, self.v_inv[target][j])?)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.d[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -*x;
        }
        for row in &mut self.u_inv {
            row[i] = -row[i];
        }
    }

    fn negate_column(&mut self, j: usize) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row[j] = -row[j];
        }
        for x in &mut self.v_inv[j] {
            *x = -*x;
        }
    }

    /// Columns `(i, j)` ← `(i, j)·[[a, b], [c, e]]`, a determinant-one change.
    fn combine_columns(&mut self, i: usize, j: usize, [a, b, c, e]: [i128; 4]) -> Result<()> {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            let (x, y) = (row[i], row[j]);
            row[i] = add128(mul128(a, x)?, mul128(c, y)?)?;
            row[j] = add128(mul128(b, x)?, mul128(e, y)?)?;
        }
        for k in 0..self.n {
            let (x, y) = (self.v_inv[i][k], self.v_inv[j][k]);
            self.v_inv[i][k] = add128(mul128(e, x)?, mul128(-b, y)?)?;
            self.v_inv[j][k] = add128(mul128(-c, x)?, mul128(a, y)?)?;
        }
        Ok(())
    }

    /// Row echelon form with positive pivots and reduced entries above them.
    /// Within a column the smallest nonzero absolute value is the pivot.
    fn row_hermite(&mut self) -> Result<()> {
        let mut row = 0;
        for c in 0..self.n {
            if row >= self.m {
                break;
            }
            loop {
                let pivot = (row..self.m)
                    .filter(|&i| self.d[i][c] != 0)
                    .min_by_key(|&i| self.d[i][c].unsigned_abs());
                let Some(p) = pivot else { break };
                self.swap_rows(row, p);
                let mut clear = true;
                for i in row + 1..self.m {
                    let q = self.d[i][c] / self.d[row][c];
                    self.add_row(i, row, -q)?;
                    clear &= self.d[i][c] == 0;
                }
                if clear {
                    break;
                }
            }
            if self.d[row][c] == 0 {
                continue;
            }
            if self.d[row][c] < 0 {
                self.negate_row(row);
            }
            let p = self.d[row][c];
            for i in 0..row {
                let q = self.d[i][c].div_euclid(p);
                self.add_row(i, row, -q)?;
            }
            row += 1;
        }
        Ok(())
    }

    /// Column version of [`Reducer::row_hermite`].
    fn column_hermite(&mut self) -> Result<()> {
        let mut col = 0;
        for r in 0..self.m {
            if col >= self.n {
                break;
            }
            loop {
                let pivot = (col..self.n)
                    .filter(|&j| self.d[r][j] != 0)
                    .min_by_key(|&j| self.d[r][j].unsigned_abs());
                let Some(p) = pivot else { break };
                self.swap_columns(col, p);
                let mut clear = true;
                for j in col + 1..self.n {
                    let q = self.d[r][j] / self.d[r][col];
                    self.add_column(j, col, -q)?;
                    clear &= self.d[r][j] == 0;
                }
                if clear {
                    break;
                }
            }
            if self.d[r][col] == 0 {
                continue;
            }
            if self.d[r][col] < 0 {
                self.negate_column(col);
            }
            let p = self.d[r][col];
            for j in 0..col {
                let q = self.d[r][j].div_euclid(p);
                self.add_column(j, col, -q)?;
            }
            col += 1;
        }
        Ok(())
    }

    fn rows_have_single_entries(&self) -> bool {
        self.d.iter().all(|r| r.iter().filter(|&&x| x != 0).count() <= 1)
    }

    fn columns_have_single_entries(&self) -> bool {
        (0..self.n).all(|j| self.d.iter().filter(|r| r[j] != 0).count() <= 1)
    }

    /// Alternates row and column Hermite passes until at most one entry per
    /// row and column survives, then moves those entries onto the diagonal.
    fn diagonalize(&mut self) -> Result<usize> {
        loop {
            self.row_hermite()?;
            if self.rows_have_single_entries() {
                break;
            }
            self.column_hermite()?;
            if self.rows_have_single_entries() && self.columns_have_single_entries() {
                break;
            }
        }
        let mut t = 0;
        for i in 0..self.m {
            if let Some(j) = (0..self.n).find(|&j| self.d[i][j] != 0) {
                self.swap_rows(t, i);
                self.swap_columns(t, j);
                t += 1;
            }
        }
        for i in 0..t {
            if self.d[i][i] < 0 {
                self.negate_row(i);
            }
        }
        Ok(t)
    }

    /// Enforces `d₁ | d₂ | …` with the 2×2 gcd step
    /// `diag(a, b) ↦ diag(g, ab/g)`.
    fn fix_divisibility(&mut self, rank: usize) -> Result<()> {
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..rank {
                for j in i + 1..rank {
                    let (a, b) = (self.d[i][i], self.d[j][j]);
                    if b % a == 0 {
                        continue;
                    }
                    let (g, s, t) = ext_gcd(a, b);
                    self.add_row(i, j, 1)?;
                    self.combine_columns(i, j, [s, -b / g, t, a / g])?;
                    let q = self.d[j][i] / g;
                    self.add_row(j, i, -q)?;
                    changed = true;
                }
            }
        }
        Ok(())
    }

    fn column(&self, j: usize) -> Vec<i128> {
        self.v.iter().map(|r| r[j]).collect()
    }

    /// Greedy pairwise reduction `col[i] -= q·col[j]` for `i ∈ targets`,
    /// `j ∈ against`, accepted only when the norm of `col[i]` drops. The
    /// diagonal form is untouched because every `against` column of `d` is
    /// zero.
    fn reduce_columns(&mut self, targets: std::ops::Range<usize>, against: std::ops::Range<usize>) -> Result<bool> {
        let mut any = false;
        let mut changed = true;
        while changed {
            changed = false;
            for i in targets.clone() {
                for j in against.clone() {
                    if i == j {
                        continue;
                    }
                    let (vi, vj) = (self.column(i), self.column(j));
                    let den = dot(&vj, &vj)?;
                    if den == 0 {
                        continue;
                    }
                    let q = round_div(dot(&vi, &vj)?, den)?;
                    if q != 0 && shrinks(&vi, &vj, q)? {
                        self.add_column(i, j, -q)?;
                        changed = true;
                        any = true;
                    }
                }
            }
        }
        Ok(any)
    }

    /// Row analogue of [`Reducer::reduce_columns`] on `u`.
    fn reduce_rows(&mut self, targets: std::ops::Range<usize>, against: std::ops::Range<usize>) -> Result<bool> {
        let mut any = false;
        let mut changed = true;
        while changed {
            changed = false;
            for i in targets.clone() {
                for j in against.clone() {
                    if i == j {
                        continue;
                    }
                    let (ui, uj) = (self.u[i].clone(), self.u[j].clone());
                    let den = dot(&uj, &uj)?;
                    if den == 0 {
                        continue;
                    }
                    let q = round_div(dot(&ui, &uj)?, den)?;
                    if q != 0 && shrinks(&ui, &uj, q)? {
                        self.add_row(i, j, -q)?;
                        changed = true;
                        any = true;
                    }
                }
            }
        }
        Ok(any)
    }

    /// Shrinks the transformation matrices without changing `d`.
    ///
    /// Kernel columns of `v` and cokernel rows of `u` are free to be
    /// recombined among themselves and added to the other columns/rows. In
    /// addition, for `i ≠ j < rank`, `row_i(u) -= c·row_j(u)` is compensated
    /// by `col_j(v) += (c·d_j/d_i)·col_i(v)`, which is integral whenever
    /// `d_i | c·d_j`.
    fn shrink(&mut self, rank: usize) -> Result<()> {
        let (m, n) = (self.m, self.n);
        self.reduce_columns(rank..n, rank..n)?;
        self.reduce_columns(0..rank, rank..n)?;
        self.reduce_rows(rank..m, rank..m)?;
        self.reduce_rows(0..rank, rank..m)?;
        for _ in 0..100 {
            let mut changed = false;
            for i in 0..rank {
                for j in 0..rank {
                    if i == j {
                        continue;
                    }
                    let (ui, uj) = (self.u[i].clone(), self.u[j].clone());
                    let den = dot(&uj, &uj)?;
                    if den == 0 {
                        continue;
                    }
                    let step = if i < j { 1 } else { self.d[i][i] / self.d[j][j] };
                    let c = round_div(round_div(dot(&ui, &uj)?, den)?, step)? * step;
                    if c != 0 && shrinks(&ui, &uj, c)? {
                        self.add_row(i, j, -c)?;
                        let f = c * self.d[j][j] / self.d[i][i];
                        self.add_column(j, i, f)?;
                        changed = true;
                    }
                }
            }
            changed |= self.reduce_rows(0..rank, rank..m)?;
            changed |= self.reduce_columns(0..rank, rank..n)?;
            if !changed {
                break;
            }
        }
        Ok(())
    }
}

/// `|a − q·b|² < |a|²`
fn shrinks(a: &[i128], b: &[i128], q: i128) -> Result<bool> {
    let c: Vec<i128> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| add128(x, mul128(-q, y)?))
        .collect::<Result<_>>()?;
    Ok(dot(&c, &c)? < dot(a, a)?)
}

fn narrow(mat: &Mat, rows: usize, cols: usize) -> Result<IntMatrix> {
    let mut out = IntMatrix::zeros(rows, cols);
    for (i, row) in mat.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            out[(i, j)] = i64::try_from(x).map_err(|_| AbelianError::Overflow)?;
        }
    }
    Ok(out)
}

/// Computes `(U, D, V)` with `D = U·A·V`.
///
/// Elimination alternates row and column Hermite passes, always pivoting on
/// the smallest nonzero absolute value in the active column (row), then
/// enforces the divisibility chain with 2×2 gcd steps and finally shrinks
/// `U` and `V` using the freedom left by `D`. Intermediate values are kept in
/// checked `i128`; a result that does not fit `i64` yields
/// [`AbelianError::Overflow`].
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm> {
    let (m, n) = a.shape();
    let mut r = Reducer {
        m,
        n,
        d: (0..m).map(|i| a.row(i).iter().map(|&x| i128::from(x)).collect()).collect(),
        u: identity(m),
        u_inv: identity(m),
        v: identity(n),
        v_inv: identity(n),
    };
    let rank = if m == 0 || n == 0 { 0 } else { r.diagonalize()? };
    r.fix_divisibility(rank)?;
    r.shrink(rank)?;
    Ok(SmithForm {
        u: narrow(&r.u, m, m)?,
        u_inv: narrow(&r.u_inv, m, m)?,
        d: narrow(&r.d, m, n)?,
        v: narrow(&r.v, n, n)?,
        v_inv: narrow(&r.v_inv, n, n)?,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        IntMatrix::from_rows(rows, cols).unwrap()
    }

    fn wide(a: &IntMatrix) -> Vec<Vec<i128>> {
        (0..a.rows()).map(|i| a.row(i).iter().map(|&x| i128::from(x)).collect()).collect()
    }

    // products are formed in i128 so the check itself cannot overflow
    fn product(a: &[Vec<i128>], b: &[Vec<i128>], inner: usize, cols: usize) -> Vec<Vec<i128>> {
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
            .collect()
    }

    fn check(a: &IntMatrix, s: &SmithForm) {
        let (r, c) = a.shape();
        let uav = product(&product(&wide(&s.u), &wide(a), r, c), &wide(&s.v), c, c);
        assert_eq!(uav, wide(&s.d));
        // integral inverses make U and V unimodular
        assert_eq!(product(&wide(&s.u), &wide(&s.u_inv), r, r), wide(&IntMatrix::identity(r)));
        assert_eq!(product(&wide(&s.v), &wide(&s.v_inv), c, c), wide(&IntMatrix::identity(c)));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        let f = s.invariant_factors();
        assert!(f.iter().all(|&x| x > 0));
        assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        for i in s.rank..a.rows().min(a.cols()) {
            assert_eq!(s.d[(i, i)], 0);
        }
    }

    #[test]
    fn identity_is_fixed() {
        let a = IntMatrix::identity(2);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d, a);
        assert_eq!(s.u, a);
        assert_eq!(s.v, a);
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let a = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d, a);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4
        let a = m(&[vec![2, 4], vec![6, 8]], 2);
        let s = smith_normal_form(&a).unwrap();
        check(&a, &s);
        assert_eq!(s.invariant_factors(), vec![2, 4]);
    }

    #[test]
    fn empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let a = IntMatrix::zeros(r, c);
            let s = smith_normal_form(&a).unwrap();
            check(&a, &s);
        }
    }

    #[test]
    fn solve_finds_integer_solutions_only() {
        let a = m(&[vec![2, 0], vec![0, 3]], 2);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.solve(&[4, 9]).unwrap(), Some(vec![2, 3]));
        assert_eq!(s.solve(&[1, 0]).unwrap(), None);
    }

    #[test]
    fn overflow_is_detected() {
        let big = i64::MAX / 2 + 7;
        let a = m(&[vec![big, big - 1], vec![big - 3, big - 2]], 2);
        match smith_normal_form(&a) {
            Ok(s) => check(&a, &s),
            Err(e) => assert_eq!(e, AbelianError::Overflow),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reconstruction(rows in 0usize..6, cols in 0usize..6, seed in proptest::collection::vec(-9i64..=9, 36)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 6..i * 6 + cols].to_vec()).collect();
            let a = IntMatrix::from_rows(&data, cols).unwrap();
            let s = smith_normal_form(&a).unwrap();
            check(&a, &s);
        }
    }
}
