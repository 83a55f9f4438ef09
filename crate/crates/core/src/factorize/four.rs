use super::{gate, ToeplitzDecomposition};
use crate::error::{Error, Result};
use crate::matrices::DenseMatrix;
use crate::scalar::Scalar;
use crate::toeplitz::{StructuredKind, ToeplitzMatrix};

/// Pivot pattern of a rank-2 4x4 matrix, with the subcase where the
/// construction branches on a vanishing entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourByFourCase {
    /// Pivots in columns 1, 2.
    Pivots12 { sub: char },
    /// Pivots in columns 1, 3.
    Pivots13 { sub: char },
    Pivots14,
    Pivots23,
    Pivots24,
    Pivots34,
}

impl FourByFourCase {
    pub fn label(&self) -> String {
        match self {
            FourByFourCase::Pivots12 { sub } => format!("4x4-rank2-case1{sub}"),
            FourByFourCase::Pivots13 { sub } => format!("4x4-rank2-case2{sub}"),
            FourByFourCase::Pivots14 => "4x4-rank2-case3".into(),
            FourByFourCase::Pivots23 => "4x4-rank2-case4".into(),
            FourByFourCase::Pivots24 => "4x4-rank2-case5".into(),
            FourByFourCase::Pivots34 => "4x4-rank2-case6".into(),
        }
    }
}

fn rows<S: Scalar>(first: [S; 4], last: [S; 4]) -> Result<ToeplitzMatrix<S>> {
    ToeplitzMatrix::from_first_and_last_rows(&first, &last)
}

/// Rank-2 4x4 matrices as `P · T_1 ⋯ T_k` with `k ≤ 3` and `P` invertible,
/// one construction per pivot pattern of the reduced row echelon form.
pub fn decompose_4x4_rank2<S: Scalar>(m: &DenseMatrix<S>) -> Result<ToeplitzDecomposition<S>> {
    if !S::EXACT {
        return Err(Error::FloatModeUnsupported);
    }
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch("expected a 4x4 matrix".into()));
    }
    let rr = m.rref_with_transform()?;
    if rr.pivot_columns.len() != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            found: rr.pivot_columns.len(),
        });
    }
    let r = |i: usize, j: usize| rr.rref.get(i, j).clone();
    let z = S::zero;
    let o = S::one;
    let inv = |v: &S| o().checked_div(v).ok_or(Error::DivisionByZero);
    let corners = || ToeplitzMatrix::structured(StructuredKind::CornerPair(o(), o()), 4);

    let (case, factors) = match (rr.pivot_columns[0], rr.pivot_columns[1]) {
        (0, 1) => {
            let (a, b, c, d) = (r(0, 2), r(0, 3), r(1, 2), r(1, 3));
            if !d.is_zero() {
                let dp = inv(&d)?;
                let cp = c.checked_div(&d).ok_or(Error::DivisionByZero)?;
                let t = rows([o(), z(), a, b], [z(), dp, cp, o()])?;
                (FourByFourCase::Pivots12 { sub: 'a' }, vec![corners()?, t])
            } else if !c.is_zero() {
                let cp = inv(&c)?;
                let u = ToeplitzMatrix::from_offsets(4, |l| if l == 3 || l == -2 { o() } else { z() });
                let v = ToeplitzMatrix::structured(StructuredKind::BackshiftPower(1), 4)?;
                let t = rows([o(), z(), a, b], [z(), z(), cp, o()])?;
                (FourByFourCase::Pivots12 { sub: 'b' }, vec![u, v, t])
            } else {
                let t = rows([b.clone(), o(), a.clone() * b.clone(), b.clone() * b.clone()], [o(), z(), a, b])?;
                (FourByFourCase::Pivots12 { sub: 'c' }, vec![corners()?, t])
            }
        }
        (0, 2) => {
            let (a, b, c) = (r(0, 1), r(0, 3), r(1, 3));
            if !c.is_zero() {
                let cp = inv(&c)?;
                let t = rows([o(), a, z(), b], [z(), z(), cp, o()])?;
                (FourByFourCase::Pivots13 { sub: 'a' }, vec![corners()?, t])
            } else {
                let t = rows([b.clone(), a.clone() * b.clone(), o(), b.clone() * b.clone()], [o(), a, z(), b])?;
                (FourByFourCase::Pivots13 { sub: 'b' }, vec![corners()?, t])
            }
        }
        (0, 3) => {
            let (a, b) = (r(0, 1), r(0, 2));
            let t = rows([z(), z(), z(), o()], [o(), a, b, z()])?;
            (FourByFourCase::Pivots14, vec![corners()?, t])
        }
        (1, 2) => {
            let (a, b) = (r(0, 3), r(1, 3));
            let ap = a + b.clone() * b.clone();
            let t = ToeplitzMatrix::from_offsets(4, |l| match l {
                1 => o(),
                2 => b.clone(),
                3 => ap.clone(),
                _ => z(),
            });
            let back2 = ToeplitzMatrix::structured(StructuredKind::BackshiftPower(2), 4)?;
            (FourByFourCase::Pivots23, vec![back2, t])
        }
        (1, 3) => {
            let a = r(0, 2);
            let t = rows([z(), z(), z(), o()], [z(), o(), a, z()])?;
            (FourByFourCase::Pivots24, vec![corners()?, t])
        }
        (2, 3) => {
            let t = ToeplitzMatrix::structured(StructuredKind::ShiftPower(2), 4)?;
            (FourByFourCase::Pivots34, vec![t])
        }
        other => unreachable!("pivot pair {other:?} for a 4x4 matrix"),
    };
    let x = factors
        .iter()
        .try_fold(DenseMatrix::identity(4), |acc, t| acc.multiply(&t.to_dense()))?;
    let rx = x.rref_with_transform()?;
    if rx.rref != rr.rref {
        return Err(Error::VerificationFailed {
            row: 0,
            col: 0,
            deviation: f64::NAN,
        });
    }
    let prefix = rr.transform.multiply(&rx.transform.inverse()?)?;
    gate(m, ToeplitzDecomposition::new(Some(prefix), factors, case.label()))
}

/// Pivot pattern [`decompose_4x4_rank2`] would use for `m`.
pub fn classify_4x4_rank2<S: Scalar>(m: &DenseMatrix<S>) -> Result<FourByFourCase> {
    let d = decompose_4x4_rank2(m)?;
    let label = d.provenance.trim_start_matches("4x4-rank2-case");
    let mut ch = label.chars();
    Ok(match (ch.next(), ch.next()) {
        (Some('1'), Some(sub)) => FourByFourCase::Pivots12 { sub },
        (Some('2'), Some(sub)) => FourByFourCase::Pivots13 { sub },
        (Some('3'), _) => FourByFourCase::Pivots14,
        (Some('4'), _) => FourByFourCase::Pivots23,
        (Some('5'), _) => FourByFourCase::Pivots24,
        _ => FourByFourCase::Pivots34,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational as G;
    use proptest::prelude::*;

    fn from_rows(r1: [i64; 4], r2: [i64; 4]) -> DenseMatrix<G> {
        // rows r1, r2, r1 + r2, r1 - 2 r2
        let rows: Vec<Vec<G>> = vec![
            r1.iter().map(|&v| G::from_int(v)).collect(),
            r2.iter().map(|&v| G::from_int(v)).collect(),
            r1.iter().zip(&r2).map(|(&a, &b)| G::from_int(a + b)).collect(),
            r1.iter().zip(&r2).map(|(&a, &b)| G::from_int(a - 2 * b)).collect(),
        ];
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn every_case() {
        let cases = [
            (from_rows([1, 0, 2, 3], [0, 1, 4, 5]), "1a"),
            (from_rows([1, 0, 2, 3], [0, 1, 4, 0]), "1b"),
            (from_rows([1, 0, 2, 3], [0, 1, 0, 0]), "1c"),
            (from_rows([1, 2, 0, 3], [0, 0, 1, 5]), "2a"),
            (from_rows([1, 2, 0, 3], [0, 0, 1, 0]), "2b"),
            (from_rows([1, 2, 3, 0], [0, 0, 0, 1]), "3"),
            (from_rows([0, 1, 0, 2], [0, 0, 1, 3]), "4"),
            (from_rows([0, 1, 2, 0], [0, 0, 0, 1]), "5"),
            (from_rows([0, 0, 1, 0], [0, 0, 0, 1]), "6"),
        ];
        for (m, label) in cases {
            let d = decompose_4x4_rank2(&m).unwrap_or_else(|e| panic!("case {label}: {e}"));
            assert_eq!(d.provenance, format!("4x4-rank2-case{label}"));
            assert!(d.factors.len() <= 3);
            assert!(d.prefix.is_some());
        }
    }

    #[test]
    fn classify_reports_case() {
        let m = from_rows([0, 1, 0, 2], [0, 0, 1, 3]);
        assert_eq!(classify_4x4_rank2(&m).unwrap(), FourByFourCase::Pivots23);
    }

    proptest! {
        #[test]
        fn random_rank2(r1 in prop::array::uniform4(-2i64..3), r2 in prop::array::uniform4(-2i64..3)) {
            let m = from_rows(r1, r2);
            prop_assume!(m.rank() == 2);
            let d = decompose_4x4_rank2(&m).unwrap();
            prop_assert_eq!(d.product().unwrap(), m);
        }
    }
}
