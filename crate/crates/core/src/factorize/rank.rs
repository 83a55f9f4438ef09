use super::{gate, ToeplitzDecomposition};
use crate::error::{Error, Result};
use crate::matrices::DenseMatrix;
use crate::scalar::Scalar;
use crate::toeplitz::{StructuredKind, ToeplitzMatrix};

fn check_exact_square<S: Scalar>(m: &DenseMatrix<S>) -> Result<usize> {
    if !S::EXACT {
        return Err(Error::FloatModeUnsupported);
    }
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::DimensionMismatch("expected a nonempty square matrix".into()));
    }
    Ok(m.rows())
}

/// Rank-one `m = λ aᵀ` as `L(λ) · E_{1n} · L'(a)`, where `L(λ)` is lower
/// triangular Toeplitz with first column `λ`, `E_{1n}` is the corner unit and
/// `L'(a)` is lower triangular Toeplitz with last row `a`.
pub fn decompose_rank1<S: Scalar>(m: &DenseMatrix<S>) -> Result<ToeplitzDecomposition<S>> {
    let n = check_exact_square(m)?;
    let rank = m.rank();
    if rank != 1 {
        return Err(Error::RankMismatch { expected: 1, found: rank });
    }
    if n == 1 {
        return gate(m, ToeplitzDecomposition::new(None, vec![ToeplitzMatrix::from_dense(m)?], "rank1"));
    }
    let i = (0..n).find(|&i| m.row(i).iter().any(|v| !v.is_zero())).expect("rank 1");
    let a = m.row(i).to_vec();
    let j = a.iter().position(|v| !v.is_zero()).expect("nonzero row");
    let lambda: Vec<S> = (0..n)
        .map(|k| m.get(k, j).checked_div(&a[j]).ok_or(Error::DivisionByZero))
        .collect::<Result<_>>()?;
    let factors = vec![
        ToeplitzMatrix::lower_from_column(&lambda),
        ToeplitzMatrix::structured(StructuredKind::CornerUnit, n)?,
        ToeplitzMatrix::lower_from_last_row(&a),
    ];
    gate(m, ToeplitzDecomposition::new(None, factors, "rank1"))
}

/// Intermediate data of the rank `n-1` construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFactorizationState<S> {
    /// 0-based pivot columns of `rref(m)`.
    pub pivots: Vec<usize>,
    /// Number of pivots left of the missing one.
    pub r: usize,
    /// Number of pivots right of the missing one.
    pub s: usize,
    /// Column `r+1` of the top `r x (r+1)` block before the row operations.
    pub a: Vec<S>,
    /// Same column after each round of row operations.
    pub updates: Vec<Vec<S>>,
    /// `u_0 = 1, u_1, …, u_r`: first row of the upper-triangular factor.
    pub upper: Vec<S>,
}

/// Shape of a rank `n-1` matrix after row reduction.
///
/// Returns `None` when the missing pivot is the first column, in which case
/// the reduced form is already the shift matrix.
pub fn rank_nminus1_state<S: Scalar>(m: &DenseMatrix<S>) -> Result<Option<RankFactorizationState<S>>> {
    let n = check_exact_square(m)?;
    let rr = m.rref_with_transform()?;
    if rr.pivot_columns.len() + 1 != n {
        return Err(Error::RankMismatch {
            expected: n - 1,
            found: rr.pivot_columns.len(),
        });
    }
    let missing = (0..n).find(|k| !rr.pivot_columns.contains(k)).expect("one column is missing");
    if missing == 0 {
        return Ok(None);
    }
    let r = missing;
    let s = n - 1 - r;
    // top block [I_r | a], stored row by row with r+1 columns
    let mut x: Vec<Vec<S>> = (0..r)
        .map(|i| (0..=r).map(|j| rr.rref.get(i, j).clone()).collect())
        .collect();
    let a: Vec<S> = x.iter().map(|row| row[r].clone()).collect();
    let mut updates = Vec::new();
    for k in 1..r {
        let target = x[r - k][r].clone();
        for i in 0..(r - k) {
            let mult = target.clone() - x[i][i + k].clone();
            if mult.is_zero() {
                continue;
            }
            let src = x[i + k].clone();
            for (dst, v) in x[i].iter_mut().zip(src) {
                *dst = dst.clone() + mult.clone() * v;
            }
        }
        updates.push(x.iter().map(|row| row[r].clone()).collect());
    }
    let upper = x[0].clone();
    Ok(Some(RankFactorizationState {
        pivots: rr.pivot_columns,
        r,
        s,
        a,
        updates,
        upper,
    }))
}

/// Rank `n-1` matrices as `P · T_1 · T_2` with `P` invertible, or `P · S`
/// when the first column is not a pivot column.
pub fn decompose_rank_nminus1<S: Scalar>(m: &DenseMatrix<S>) -> Result<ToeplitzDecomposition<S>> {
    let n = check_exact_square(m)?;
    if n < 2 {
        return Err(Error::BadParameter("rank n-1 construction needs n >= 2".into()));
    }
    let rr = m.rref_with_transform()?;
    let state = rank_nminus1_state(m)?;
    let Some(state) = state else {
        let t = ToeplitzMatrix::from_dense(&rr.rref)?;
        return gate(m, ToeplitzDecomposition::new(Some(rr.transform), vec![t], "rank-n-1-shift"));
    };
    let (r, s) = (state.r, state.s);
    let z = S::zero;
    let o = S::one;
    let t1 = ToeplitzMatrix::from_offsets(n, |l| {
        if (s > 0 && l == r as isize + 1) || l == -(s as isize + 1) {
            o()
        } else {
            z()
        }
    });
    let t2 = ToeplitzMatrix::from_offsets(n, |l| {
        if (0..=r as isize).contains(&l) {
            state.upper[l as usize].clone()
        } else {
            z()
        }
    });
    let a = t1.to_dense().multiply(&t2.to_dense())?;
    let ra = a.rref_with_transform()?;
    if ra.rref != rr.rref {
        return Err(Error::VerificationFailed {
            row: 0,
            col: r,
            deviation: f64::NAN,
        });
    }
    let prefix = rr.transform.multiply(&ra.transform.inverse()?)?;
    gate(m, ToeplitzDecomposition::new(Some(prefix), vec![t1, t2], "rank-n-1"))
}
