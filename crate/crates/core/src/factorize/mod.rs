//! Constructive Toeplitz decompositions.
//!
//! Every constructor returns a [`ToeplitzDecomposition`] that has already
//! passed [`verify_decomposition`] against its input; nothing is returned on
//! trust.

mod diagonal;
mod four;
mod rank;
mod small;

use crate::error::{Error, Result};
use crate::matrices::DenseMatrix;
use crate::scalar::Scalar;
use crate::toeplitz::{is_toeplitz, ToeplitzMatrix};

pub use diagonal::{
    chessboard_diag4, classify_diagonal3, decompose_diagonal_cyclic, m4_fixture, ChessboardParams,
};
pub use four::{classify_4x4_rank2, decompose_4x4_rank2, FourByFourCase};
pub use rank::{decompose_rank1, decompose_rank_nminus1, rank_nminus1_state, RankFactorizationState};
pub use small::{decompose_2x2, decompose_3x3};

/// `prefix · factors[0] ⋯ factors[s-1]`, with an optional invertible prefix.
#[derive(Clone, PartialEq)]
pub struct ToeplitzDecomposition<S> {
    pub prefix: Option<DenseMatrix<S>>,
    pub factors: Vec<ToeplitzMatrix<S>>,
    /// Name of the construction that produced the factors.
    pub provenance: String,
}

impl<S: Scalar> ToeplitzDecomposition<S> {
    pub fn new(prefix: Option<DenseMatrix<S>>, factors: Vec<ToeplitzMatrix<S>>, provenance: impl Into<String>) -> Self {
        ToeplitzDecomposition {
            prefix,
            factors,
            provenance: provenance.into(),
        }
    }

    pub fn size(&self) -> Option<usize> {
        self.prefix
            .as_ref()
            .map(DenseMatrix::rows)
            .or_else(|| self.factors.first().map(ToeplitzMatrix::size))
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn product(&self) -> Result<DenseMatrix<S>> {
        let n = self.size().ok_or_else(|| Error::BadParameter("empty decomposition".into()))?;
        let mut acc = self.prefix.clone().unwrap_or_else(|| DenseMatrix::identity(n));
        for t in &self.factors {
            acc = acc.multiply(&t.to_dense())?;
        }
        Ok(acc)
    }

    /// `(T_1 ⋯ T_s)ᵀ = T_sᵀ ⋯ T_1ᵀ`. Only defined without a prefix.
    pub fn transposed(&self) -> Option<Self> {
        if self.prefix.is_some() {
            return None;
        }
        Some(ToeplitzDecomposition {
            prefix: None,
            factors: self.factors.iter().rev().map(ToeplitzMatrix::transpose).collect(),
            provenance: self.provenance.clone(),
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ToeplitzDecomposition<T> {
        ToeplitzDecomposition {
            prefix: self.prefix.as_ref().map(|p| p.map(f)),
            factors: self
                .factors
                .iter()
                .map(|t| ToeplitzMatrix::new(t.size(), t.coeffs().iter().map(f).collect()).expect("same size"))
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

impl<S: Scalar> std::fmt::Debug for ToeplitzDecomposition<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToeplitzDecomposition")
            .field("prefix", &self.prefix)
            .field("factors", &self.factors)
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Outcome of a successful [`verify_decomposition`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub max_deviation: f64,
    pub factors: usize,
    pub has_prefix: bool,
}

/// Checks `prefix · ∏ factors == m`: exactly for exact scalars, within `tol`
/// (max-norm) otherwise. Each factor must also be a valid Toeplitz matrix of
/// the right size.
pub fn verify_decomposition<S: Scalar>(
    m: &DenseMatrix<S>,
    d: &ToeplitzDecomposition<S>,
    tol: f64,
) -> Result<VerifyReport> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("decomposed matrices are square".into()));
    }
    let n = m.rows();
    if d.size() != Some(n) || d.factors.iter().any(|t| t.size() != n) {
        return Err(Error::DimensionMismatch(format!(
            "decomposition of size {:?} for a {n}x{n} matrix",
            d.size()
        )));
    }
    if let Some(p) = &d.prefix {
        if !p.is_square() || p.rows() != n {
            return Err(Error::DimensionMismatch("prefix has the wrong shape".into()));
        }
    }
    let prod = d.product()?;
    let (row, col, deviation) = prod.max_deviation(m)?;
    let ok = if S::EXACT { prod == *m } else { deviation <= tol };
    if !ok {
        return Err(Error::VerificationFailed { row, col, deviation });
    }
    Ok(VerifyReport {
        max_deviation: if S::EXACT { 0.0 } else { deviation },
        factors: d.factors.len(),
        has_prefix: d.prefix.is_some(),
    })
}

/// Verification gate used by every constructor before returning.
pub(crate) fn gate<S: Scalar>(m: &DenseMatrix<S>, d: ToeplitzDecomposition<S>) -> Result<ToeplitzDecomposition<S>> {
    let scale = m.entries().iter().map(Scalar::magnitude).fold(0.0, f64::max);
    verify_decomposition(m, &d, 1e-9 * (1.0 + scale))?;
    if let Some(p) = &d.prefix {
        if S::EXACT && p.rank() != p.rows() {
            return Err(Error::Singular);
        }
    }
    Ok(d)
}

/// Published bounds on the number of Toeplitz factors, attached to every
/// decomposition produced by [`decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    pub n: usize,
    pub rank: usize,
    pub factors_used: usize,
    pub has_prefix: bool,
    pub provenance: String,
    /// Upper bound on the maximal Toeplitz number for size `n`.
    pub known_upper_bound: usize,
    /// Bound for invertible matrices, `2⌊n/2⌋+2`.
    pub invertible_bound: usize,
    /// Bound for generic matrices, `⌊n/2⌋+1`.
    pub generic_bound: usize,
    pub lower_bound_note: String,
}

/// Best known upper bound on the maximal Toeplitz number of size `n`.
pub fn known_upper_bound(n: usize) -> usize {
    match n {
        0 | 1 => 1,
        2 => 2,
        3 => 4,
        4 => 9,
        _ => 4 * (n / 2) + 5,
    }
}

pub fn invertible_bound(n: usize) -> usize {
    2 * (n / 2) + 2
}

pub fn generic_bound(n: usize) -> usize {
    n / 2 + 1
}

fn lower_bound_note(n: usize) -> String {
    match n {
        0 | 1 => "every 1x1 matrix is Toeplitz".into(),
        2 => "every 2x2 matrix is a product of two Toeplitz factors".into(),
        3 | 4 => format!("3 <= Toep_{n}: some {n}x{n} matrices need at least 3 factors"),
        _ => format!("generic matrices cannot use fewer than {} factors", generic_bound(n)),
    }
}

/// Routes `m` to the most specific construction for its size and rank.
///
/// Guaranteed constructive for `n <= 4` except invertible non-diagonal
/// inputs of size 3 and 4, and for any `n` when the input is Toeplitz,
/// diagonal, or of rank `0`, `1` or `n-1`.
pub fn decompose<S: Scalar>(m: &DenseMatrix<S>) -> Result<(ToeplitzDecomposition<S>, DecompositionReport)> {
    if !S::EXACT {
        return Err(Error::FloatModeUnsupported);
    }
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::DimensionMismatch("decompose expects a nonempty square matrix".into()));
    }
    let n = m.rows();
    let rank = m.rank();
    let d = if is_toeplitz(m, 0.0) {
        gate(m, ToeplitzDecomposition::new(None, vec![ToeplitzMatrix::from_dense(m)?], "toeplitz"))?
    } else if m.is_diagonal() {
        if n == 3 {
            let diag = m.diagonal();
            classify_diagonal3(&diag[0], &diag[1], &diag[2])?.1
        } else {
            decompose_diagonal_cyclic(&m.diagonal())?
        }
    } else if n == 2 {
        decompose_2x2(m)?
    } else if n == 3 {
        decompose_3x3(m)?
    } else if rank == 1 {
        decompose_rank1(m)?
    } else if n == 4 && rank == 2 {
        decompose_4x4_rank2(m)?
    } else if rank + 1 == n {
        decompose_rank_nminus1(m)?
    } else if rank == n {
        return Err(Error::InvertibleFallback {
            n,
            bound: invertible_bound(n),
        });
    } else {
        return Err(Error::NoConstruction {
            n,
            rank,
            bound: known_upper_bound(n),
        });
    };
    let report = DecompositionReport {
        n,
        rank,
        factors_used: d.factors.len(),
        has_prefix: d.prefix.is_some(),
        provenance: d.provenance.clone(),
        known_upper_bound: known_upper_bound(n),
        invertible_bound: invertible_bound(n),
        generic_bound: generic_bound(n),
        lower_bound_note: lower_bound_note(n),
    };
    Ok((d, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational as G;

    #[test]
    fn mismatched_factors_fail_verification() {
        let m = DenseMatrix::diag(&[G::from_int(1), G::from_int(2), G::from_int(3)]);
        let d = ToeplitzDecomposition::new(None, vec![ToeplitzMatrix::identity(3)], "wrong");
        assert!(matches!(
            verify_decomposition(&m, &d, 0.0),
            Err(Error::VerificationFailed { row: 2, col: 2, .. })
        ));
        let wrong_size = ToeplitzDecomposition::new(None, vec![ToeplitzMatrix::<G>::identity(2)], "wrong");
        assert!(matches!(verify_decomposition(&m, &wrong_size, 0.0), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn diag_of_any_size_uses_cyclic_factors() {
        for n in [2usize, 4, 5, 7] {
            let m = DenseMatrix::diag(&(1..=n as i64).map(G::from_int).collect::<Vec<_>>());
            let (d, report) = decompose(&m).unwrap();
            assert_eq!(d.factors.len(), n);
            assert_eq!(report.factors_used, n);
            assert!(d.prefix.is_none());
        }
    }

    #[test]
    fn rank_one_4x4_uses_three_factors() {
        let col = [1, 0, -2, 3];
        let row = [2, 5, 0, 1];
        let m = DenseMatrix::from_fn(4, 4, |i, j| G::from_int(col[i] * row[j]));
        let (d, report) = decompose(&m).unwrap();
        assert_eq!(d.factors.len(), 3);
        assert_eq!(report.rank, 1);
        assert!(report.factors_used <= report.known_upper_bound);
    }

    #[test]
    fn generic_invertible_5x5_falls_back() {
        let m = DenseMatrix::<G>::from_fn(5, 5, |i, j| G::from_int(((i * 7 + j * j * 3 + i * j) % 11) as i64 - 5));
        assert_eq!(m.rank(), 5);
        assert_eq!(decompose(&m).unwrap_err(), Error::InvertibleFallback { n: 5, bound: 6 });
    }

    #[test]
    fn bounds() {
        assert_eq!(known_upper_bound(3), 4);
        assert_eq!(known_upper_bound(4), 9);
        assert_eq!(known_upper_bound(6), 17);
        assert_eq!(invertible_bound(5), 6);
        assert_eq!(generic_bound(3), 2);
    }
}
