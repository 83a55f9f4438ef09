use super::{gate, ToeplitzDecomposition};
use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;
use crate::matrices::DenseMatrix;
use crate::scalar::Scalar;
use crate::toeplitz::{StructuredKind, ToeplitzMatrix};

fn cyclic<S: Scalar>(x: &S, n: usize) -> ToeplitzMatrix<S> {
    ToeplitzMatrix::structured(StructuredKind::CyclicFactor(x.clone()), n).expect("n >= 2")
}

fn offsets3<S: Scalar>(m2: S, m1: S, z: S, p1: S, p2: S) -> ToeplitzMatrix<S> {
    ToeplitzMatrix::new(3, vec![m2, m1, z, p1, p2]).expect("five coefficients")
}

/// `diag(d_1, …, d_n) = F(d_1) ⋯ F(d_n)` where `F(x)` has `x` in the top
/// right corner and ones on the subdiagonal.
pub fn decompose_diagonal_cyclic<S: Scalar>(d: &[S]) -> Result<ToeplitzDecomposition<S>> {
    let n = d.len();
    if n == 0 {
        return Err(Error::BadParameter("empty diagonal".into()));
    }
    let m = DenseMatrix::diag(d);
    let factors = if n == 1 {
        vec![ToeplitzMatrix::new(1, vec![d[0].clone()])?]
    } else {
        d.iter().map(|x| cyclic(x, n)).collect()
    };
    gate(&m, ToeplitzDecomposition::new(None, factors, "diagonal-cyclic"))
}

/// Minimal number of Toeplitz factors for `diag(d, e, f)` together with a
/// decomposition attaining it.
///
/// * `1` when `d = e = f`;
/// * `3` when `d, e, f` are pairwise distinct and `e ≠ 0`;
/// * `2` otherwise.
pub fn classify_diagonal3<S: Scalar>(d: &S, e: &S, f: &S) -> Result<(u8, ToeplitzDecomposition<S>)> {
    if !S::EXACT {
        return Err(Error::FloatModeUnsupported);
    }
    let m = DenseMatrix::diag(&[d.clone(), e.clone(), f.clone()]);
    let z = S::zero;
    let o = S::one;
    if d == e && e == f {
        let t = ToeplitzMatrix::from_offsets(3, |l| if l == 0 { d.clone() } else { z() });
        return Ok((1, gate(&m, ToeplitzDecomposition::new(None, vec![t], "diag3-scalar"))?));
    }
    if d != e && e != f && d != f && !e.is_zero() {
        let factors = vec![cyclic(d, 3), cyclic(e, 3), cyclic(f, 3)];
        return Ok((3, gate(&m, ToeplitzDecomposition::new(None, factors, "diag3-cyclic"))?));
    }
    let (t1, t2, name) = if e.is_zero() {
        (
            offsets3(f.clone(), z(), z(), z(), d.clone()),
            offsets3(o(), z(), z(), z(), o()),
            "diag3-middle-zero",
        )
    } else if d == e {
        (
            offsets3(f.clone(), z(), z(), d.clone(), z()),
            offsets3(z(), o(), z(), z(), o()),
            "diag3-first-pair",
        )
    } else if e == f {
        (
            offsets3(z(), e.clone(), z(), z(), d.clone()),
            offsets3(o(), z(), z(), o(), z()),
            "diag3-last-pair",
        )
    } else {
        // d == f, e ≠ 0
        let r = (e.clone() - d.clone()).checked_div(e).ok_or(Error::DivisionByZero)?;
        (
            offsets3(r, z(), o(), z(), o()),
            offsets3(d.clone() - e.clone(), z(), e.clone(), z(), -e.clone()),
            "diag3-outer-pair",
        )
    };
    Ok((2, gate(&m, ToeplitzDecomposition::new(None, vec![t1, t2], name))?))
}

/// Free coefficients of the three-factor chessboard decomposition of a
/// 4x4 diagonal matrix. `a_j` is the coefficient at diagonal offset `j-3`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChessboardParams<S> {
    pub a0: S,
    pub a6: S,
    pub b0: S,
    pub b6: S,
    pub c1: S,
    pub c5: S,
}

impl<S: Scalar> ChessboardParams<S> {
    pub fn factors(&self) -> Vec<ToeplitzMatrix<S>> {
        let z = S::zero;
        let o = S::one;
        let a = ToeplitzMatrix::new(4, vec![self.a0.clone(), z(), o(), z(), o(), z(), self.a6.clone()]);
        let b = ToeplitzMatrix::new(4, vec![self.b0.clone(), z(), -o(), z(), o(), z(), self.b6.clone()]);
        let c = ToeplitzMatrix::new(4, vec![z(), self.c1.clone(), z(), z(), z(), self.c5.clone(), z()]);
        vec![a.expect("7"), b.expect("7"), c.expect("7")]
    }
}

/// Solves the chessboard system for `diag(d_1, d_2, d_3, d_4)`.
///
/// Needs `d_1 d_4 ≠ d_2 d_3`, `d_1 ≠ d_2`, `d_3 ≠ d_4` and every `d_i ≠ 0`.
pub fn chessboard_diag4<S: Scalar>(d: &[S; 4]) -> Result<(ChessboardParams<S>, ToeplitzDecomposition<S>)> {
    let [d1, d2, d3, d4] = d.clone();
    let nz = |v: &S, what: &str| {
        if v.is_zero() {
            Err(Error::DegenerateDiagonal(format!("{what} vanishes")))
        } else {
            Ok(())
        }
    };
    for (v, what) in [(&d1, "d1"), (&d2, "d2"), (&d3, "d3"), (&d4, "d4")] {
        nz(v, what)?;
    }
    let det = d1.clone() * d4.clone() - d2.clone() * d3.clone();
    nz(&det, "d1*d4 - d2*d3")?;
    nz(&(d1.clone() - d2.clone()), "d1 - d2")?;
    nz(&(d3.clone() - d4.clone()), "d3 - d4")?;
    let div = |a: S, b: S| a.checked_div(&b).ok_or(Error::DivisionByZero);

    let c5 = -div(d1.clone() * d3.clone() * d4.clone() - d2.clone() * d3.clone() * d4.clone(), det)?;
    let c1 = div(c5.clone() * d2.clone() + d2.clone() * d4.clone(), d4.clone())?;
    let b6 = -div(
        d1.clone() * d3.clone() - d2.clone() * d3.clone(),
        d1.clone() * (d3.clone() - d4.clone()),
    )?;
    let b0 = div(
        d2.clone() * d3.clone() - d2.clone() * d4.clone(),
        d4.clone() * (d1.clone() - d2.clone()),
    )?;
    let a6 = -div(b6.clone() * d1.clone() + d1.clone() - d2.clone(), d2.clone())?;
    let a0 = div(b0.clone() * d4.clone() + d3.clone() - d4.clone(), d3.clone())?;
    let params = ChessboardParams { a0, a6, b0, b6, c1, c5 };
    let m = DenseMatrix::diag(d);
    let dec = gate(&m, ToeplitzDecomposition::new(None, params.factors(), "chessboard"))?;
    Ok((params, dec))
}

/// Three-factor decomposition of `diag(1, 2, 3, 4)` with integer and
/// half-integer entries.
pub fn m4_fixture() -> ToeplitzDecomposition<GaussianRational> {
    let g = GaussianRational::from_int;
    let h = GaussianRational::frac;
    let z = GaussianRational::zero;
    let t1 = ToeplitzMatrix::new(4, vec![h(-1, 3), z(), g(1), z(), g(-1), z(), g(2)]);
    let t2 = ToeplitzMatrix::new(4, vec![h(1, 2), z(), g(1), z(), g(1), z(), g(3)]);
    let t3 = ToeplitzMatrix::new(4, vec![z(), g(1), z(), z(), z(), g(6), z()]);
    let dec = ToeplitzDecomposition::new(None, vec![t1.unwrap(), t2.unwrap(), t3.unwrap()], "m4-fixture");
    let m = DenseMatrix::diag(&[g(1), g(2), g(3), g(4)]);
    gate(&m, dec).expect("fixture reproduces diag(1,2,3,4)")
}
