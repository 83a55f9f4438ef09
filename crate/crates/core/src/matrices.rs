//! Dense row-major matrices over a [`Scalar`], with exact row reduction that
//! records its transform.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default relative singular-value threshold for float-mode rank.
pub const FLOAT_RANK_EPS: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

/// `transform · rref = input`, with `transform` invertible.
#[derive(Clone, PartialEq)]
pub struct RrefResult<S> {
    pub rref: DenseMatrix<S>,
    pub transform: DenseMatrix<S>,
    /// 0-based pivot column indices, ascending.
    pub pivot_columns: Vec<usize>,
}

impl<S: Scalar> fmt::Debug for RrefResult<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RrefResult")
            .field("rref", &self.rref)
            .field("transform", &self.transform)
            .field("pivot_columns", &self.pivot_columns)
            .finish()
    }
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for tests and fixtures: integer entries.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
            .expect("rectangular")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diag(values: &[S]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DenseMatrix<T> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        self.map(Scalar::to_complex)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Largest entrywise deviation `|self - other|` and its 0-based position.
    pub fn max_deviation(&self, other: &Self) -> Result<(usize, usize, f64)> {
        self.same_shape(other)?;
        let mut best = (0, 0, 0.0f64);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.get(i, j).clone() - other.get(i, j).clone()).magnitude();
                if d > best.2 || (S::EXACT && best.2 == 0.0 && self.get(i, j) != other.get(i, j)) {
                    // exact mode: report the first mismatch even if it underflows to 0.0
                    best = (i, j, d.max(f64::MIN_POSITIVE));
                }
            }
        }
        Ok(best)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Reduced row echelon form together with `transform` such that
    /// `transform · rref = self`. Exact scalars only.
    ///
    /// Pivot choice: first nonzero entry, scanning down the leftmost
    /// unfinished column.
    pub fn rref_with_transform(&self) -> Result<RrefResult<S>> {
        if !S::EXACT {
            return Err(Error::FloatModeUnsupported);
        }
        let mut r = self.clone();
        // Invariant: t · r == self. A row operation E applied to r is undone
        // on t by right-multiplying with E^{-1}, i.e. a column operation.
        let mut t = Self::identity(self.rows);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(p) = (prow..self.rows).find(|&i| !r.get(i, col).is_zero()) else {
                continue;
            };
            r.swap_rows(prow, p);
            t.swap_cols(prow, p);

            let pv = r.get(prow, col).clone();
            let inv = S::one().checked_div(&pv).ok_or(Error::DivisionByZero)?;
            for j in 0..self.cols {
                let v = r.get(prow, j).clone() * inv.clone();
                r.set(prow, j, v);
            }
            for i in 0..self.rows {
                let v = t.get(i, prow).clone() * pv.clone();
                t.set(i, prow, v);
            }

            for i in 0..self.rows {
                if i == prow {
                    continue;
                }
                let c = r.get(i, col).clone();
                if c.is_zero() {
                    continue;
                }
                // row_i -= c row_prow  <=>  col_prow(t) += c col_i(t)
                for j in 0..self.cols {
                    let v = r.get(i, j).clone() - c.clone() * r.get(prow, j).clone();
                    r.set(i, j, v);
                }
                for k in 0..self.rows {
                    let v = t.get(k, prow).clone() + c.clone() * t.get(k, i).clone();
                    t.set(k, prow, v);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Ok(RrefResult {
            rref: r,
            transform: t,
            pivot_columns: pivots,
        })
    }

    /// Exact rank by row reduction; float rank by singular values with
    /// threshold `σ_i > FLOAT_RANK_EPS · σ_1`.
    pub fn rank(&self) -> usize {
        self.rank_with_tol(FLOAT_RANK_EPS)
    }

    pub fn rank_with_tol(&self, eps: f64) -> usize {
        if S::EXACT {
            return self
                .rref_with_transform()
                .map(|r| r.pivot_columns.len())
                .expect("exact mode");
        }
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let m = nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex());
        let sv = m.singular_values();
        let s1 = sv.iter().cloned().fold(0.0f64, f64::max);
        if s1 == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > eps * s1).count()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = pivot_row(&a, col, col).ok_or(Error::Singular)?;
            a.swap_rows(col, p);
            inv.swap_rows(col, p);
            let pinv = S::one().checked_div(a.get(col, col)).ok_or(Error::Singular)?;
            for j in 0..n {
                let v = a.get(col, j).clone() * pinv.clone();
                a.set(col, j, v);
                let v = inv.get(col, j).clone() * pinv.clone();
                inv.set(col, j, v);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let c = a.get(i, col).clone();
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(i, j).clone() - c.clone() * a.get(col, j).clone();
                    a.set(i, j, v);
                    let v = inv.get(i, j).clone() - c.clone() * inv.get(col, j).clone();
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Dense Gaussian elimination with partial pivoting (first nonzero pivot
    /// in exact mode, largest modulus in float mode).
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        self.solve_counted(b).map(|(x, _)| x)
    }

    /// As [`solve`](Self::solve), also returning the number of scalar
    /// multiplications (divisions included) performed.
    pub fn solve_counted(&self, b: &[S]) -> Result<(Vec<S>, u64)> {
        if !self.is_square() || b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} system with right-hand side of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        let mut mults = 0u64;
        let scale = a.entries.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        for col in 0..n {
            let p = pivot_row(&a, col, col).ok_or(Error::Singular)?;
            if !S::EXACT && a.get(p, col).magnitude() <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            a.swap_rows(col, p);
            x.swap(col, p);
            let pv = a.get(col, col).clone();
            for i in col + 1..n {
                let c = a.get(i, col).checked_div(&pv).ok_or(Error::Singular)?;
                mults += 1;
                if c.is_zero() {
                    continue;
                }
                for j in col + 1..n {
                    let v = a.get(i, j).clone() - c.clone() * a.get(col, j).clone();
                    a.set(i, j, v);
                }
                mults += (n - col - 1) as u64 + 1;
                x[i] = x[i].clone() - c.clone() * x[col].clone();
                a.set(i, col, S::zero());
            }
        }
        for i in (0..n).rev() {
            let mut acc = x[i].clone();
            for j in i + 1..n {
                acc = acc - a.get(i, j).clone() * x[j].clone();
            }
            mults += (n - i - 1) as u64 + 1;
            x[i] = acc.checked_div(a.get(i, i)).ok_or(Error::Singular)?;
        }
        Ok((x, mults))
    }
}

fn pivot_row<S: Scalar>(a: &DenseMatrix<S>, col: usize, from: usize) -> Option<usize> {
    if S::EXACT {
        (from..a.rows).find(|&i| !a.get(i, col).is_zero())
    } else {
        (from..a.rows)
            .filter(|&i| !a.get(i, col).is_zero())
            .max_by(|&x, &y| a.get(x, col).magnitude().total_cmp(&a.get(y, col).magnitude()))
    }
}

impl<S: Scalar> fmt::Display for DenseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let w = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>w$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for DenseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational as G;
    use proptest::prelude::*;

    type M = DenseMatrix<G>;

    fn q(p: i64, d: i64) -> G {
        G::frac(p, d)
    }

    #[test]
    fn identity_product() {
        let m = M::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(M::identity(3).multiply(&m).unwrap(), m);
        assert!(M::identity(2).multiply(&m).is_err());
    }

    #[test]
    fn swap_times_antidiagonal() {
        let (a, d) = (G::from_int(7), G::from_int(-3));
        let swap = M::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let anti = M::from_rows(vec![vec![G::zero(), d.clone()], vec![a.clone(), G::zero()]]).unwrap();
        assert_eq!(swap.multiply(&anti).unwrap(), M::diag(&[a, d]));
    }

    #[test]
    fn rref_of_invertible_diagonal() {
        let r = M::diag(&[1.into(), 2.into(), 3.into()]).rref_with_transform().unwrap();
        assert_eq!(r.rref, M::identity(3));
        assert_eq!(r.pivot_columns, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one() {
        let m = M::from_i64_rows(&[&[3, 4], &[6, 8]]);
        let r = m.rref_with_transform().unwrap();
        let expected = M::from_rows(vec![vec![G::one(), q(4, 3)], vec![G::zero(), G::zero()]]).unwrap();
        assert_eq!(r.rref, expected);
        assert_eq!(r.pivot_columns, vec![0]);
        assert_eq!(r.transform.multiply(&r.rref).unwrap(), m);
    }

    #[test]
    fn rref_zero() {
        let r = M::zeros(3, 3).rref_with_transform().unwrap();
        assert!(r.rref.is_zero());
        assert_eq!(r.transform, M::identity(3));
        assert!(r.pivot_columns.is_empty());
    }

    #[test]
    fn rref_rejects_floats() {
        let m = DenseMatrix::<Complex64>::identity(2);
        assert_eq!(m.rref_with_transform().unwrap_err(), Error::FloatModeUnsupported);
    }

    #[test]
    fn ranks() {
        assert_eq!(M::identity(4).rank(), 4);
        let col = [1, -2, 3];
        let row = [2, 0, 5];
        let outer = M::from_fn(3, 3, |i, j| G::from_int(col[i] * row[j]));
        assert_eq!(outer.rank(), 1);
        // two equal columns plus an independent one
        let m = M::from_i64_rows(&[&[1, 1, 0], &[2, 2, 1], &[3, 3, 5]]);
        assert_eq!(m.rank(), 2);
        let f = DenseMatrix::<Complex64>::from_i64_rows(&[&[1, 1, 0], &[2, 2, 1], &[3, 3, 5]]);
        assert_eq!(f.rank(), 2);
    }

    #[test]
    fn inverses() {
        assert_eq!(M::identity(3).inverse().unwrap(), M::identity(3));
        assert_eq!(
            M::diag(&[2.into(), 4.into()]).inverse().unwrap(),
            M::diag(&[q(1, 2), q(1, 4)])
        );
        assert_eq!(M::zeros(2, 2).inverse().unwrap_err(), Error::Singular);
    }

    #[test]
    fn gaussian_inverse_4x4() {
        let vals = ["1+i", "2", "0", "-1/2i", "3", "1-2i", "1", "0", "0", "1/3", "2i", "1", "5", "0", "1", "1+1/2i"];
        let m = M::new(4, 4, vals.iter().map(|s| s.replace("+i", "+1i").parse().unwrap()).collect()).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.multiply(&inv).unwrap(), M::identity(4));
    }

    #[test]
    fn dense_solve() {
        let m = M::from_i64_rows(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]);
        let b: Vec<G> = vec![5.into(), 1.into(), 17.into()];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
    }

    fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec(-3i64..=3, r * c)
            .prop_map(move |v| M::new(r, c, v.into_iter().map(G::from_int).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn rref_transform_reconstructs(m in arb_matrix(4, 5)) {
            let r = m.rref_with_transform().unwrap();
            prop_assert_eq!(r.transform.multiply(&r.rref).unwrap(), m.clone());
            let inv = r.transform.inverse().unwrap();
            prop_assert_eq!(r.transform.multiply(&inv).unwrap(), M::identity(4));
            prop_assert_eq!(r.pivot_columns.len(), m.rank());
        }

        #[test]
        fn rank_of_transpose(m in arb_matrix(3, 5)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn product_associative(a in arb_matrix(2, 3), b in arb_matrix(3, 4), c in arb_matrix(4, 2)) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
