use super::{classify_diagonal3, decompose_rank1, gate, invertible_bound, ToeplitzDecomposition};
use crate::error::{Error, Result};
use crate::matrices::DenseMatrix;
use crate::scalar::Scalar;
use crate::toeplitz::{is_toeplitz, ToeplitzMatrix};

type Factors<S> = Vec<ToeplitzMatrix<S>>;

fn single<S: Scalar>(m: &DenseMatrix<S>) -> Result<ToeplitzDecomposition<S>> {
    gate(m, ToeplitzDecomposition::new(None, vec![ToeplitzMatrix::from_dense(m)?], "toeplitz"))
}

fn square_of_size<S: Scalar>(m: &DenseMatrix<S>, n: usize) -> Result<()> {
    if !S::EXACT {
        return Err(Error::FloatModeUnsupported);
    }
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Every 2x2 matrix is a product of at most two Toeplitz matrices.
pub fn decompose_2x2<S: Scalar>(m: &DenseMatrix<S>) -> Result<ToeplitzDecomposition<S>> {
    square_of_size(m, 2)?;
    if is_toeplitz(m, 0.0) {
        return single(m);
    }
    let [a, b, c, d] = [0, 1, 2, 3].map(|k| m.entries()[k].clone());
    let z = S::zero;
    let o = S::one;
    let t2 = |m1: S, c0: S, p1: S| ToeplitzMatrix::new(2, vec![m1, c0, p1]).expect("three coefficients");
    let dec = if !b.is_zero() {
        let q = (d - a.clone()).checked_div(&b).ok_or(Error::DivisionByZero)?;
        let low = t2(q.clone(), o(), z());
        let right = t2(c - a.clone() * q, a, b);
        ToeplitzDecomposition::new(None, vec![low, right], "2x2-shear")
    } else if !c.is_zero() {
        let t = decompose_2x2(&m.transpose())?;
        let mut t = t.transposed().expect("no prefix");
        t.provenance = "2x2-shear-transposed".into();
        t
    } else {
        ToeplitzDecomposition::new(None, vec![t2(o(), z(), o()), t2(a, z(), d)], "2x2-swap")
    };
    gate(m, dec)
}

fn t3<S: Scalar>(m2: S, m1: S, c0: S, p1: S, p2: S) -> ToeplitzMatrix<S> {
    ToeplitzMatrix::new(3, vec![m2, m1, c0, p1, p2]).expect("five coefficients")
}

fn product<S: Scalar>(fs: &[ToeplitzMatrix<S>], n: usize) -> DenseMatrix<S> {
    fs.iter().fold(DenseMatrix::identity(n), |acc, t| acc.multiply(&t.to_dense()).expect("square"))
}

/// `(λ, β)` with `c2 = λ c1 + β c3`, when `c1` and `c3` are independent.
fn column_relation<S: Scalar>(m: &DenseMatrix<S>) -> Option<(S, S)> {
    let (c1, c2, c3) = (m.column(0), m.column(1), m.column(2));
    for (p, q) in [(0, 1), (0, 2), (1, 2)] {
        let det = c1[p].clone() * c3[q].clone() - c1[q].clone() * c3[p].clone();
        if det.is_zero() {
            continue;
        }
        let lambda = (c2[p].clone() * c3[q].clone() - c2[q].clone() * c3[p].clone()).checked_div(&det)?;
        let beta = (c1[p].clone() * c2[q].clone() - c1[q].clone() * c2[p].clone()).checked_div(&det)?;
        let ok = (0..3).all(|k| c2[k] == lambda.clone() * c1[k].clone() + beta.clone() * c3[k].clone());
        return ok.then_some((lambda, beta));
    }
    None
}

/// Finishes a two-factor product `[C1|0|C3]` or `[C3|0|C1]` into `m`.
fn finish_outer_columns<S: Scalar>(
    m: &DenseMatrix<S>,
    mut fs: Factors<S>,
    lambda: S,
    beta: S,
) -> Option<Factors<S>> {
    let p = product(&fs, 3);
    let (c1, c3) = (m.column(0), m.column(2));
    let z = S::zero;
    let o = S::one;
    let zero_col = p.column(1).iter().all(Scalar::is_zero);
    if zero_col && p.column(0) == c1 && p.column(2) == c3 {
        fs.push(t3(z(), beta, o(), lambda, z()));
    } else if zero_col && p.column(0) == c3 && p.column(2) == c1 {
        fs.push(t3(o(), lambda, z(), beta, o()));
    } else {
        return None;
    }
    Some(fs)
}

/// Rank-2 constructions keyed on the corner entries `c = m_{13}` and
/// `g = m_{31}`, for `m = [[a,b,c],[d,e,f],[g,h,i]]`.
fn corner_cases<S: Scalar>(m: &DenseMatrix<S>, rotate: bool) -> Option<(Factors<S>, &'static str)> {
    let x = |i: usize, j: usize| m.get(i, j).clone();
    let (a, d, e, f) = (x(0, 0), x(1, 0), x(1, 1), x(1, 2));
    let (c, g, h, i) = (x(0, 2), x(2, 0), x(2, 1), x(2, 2));
    let z = S::zero;
    let o = S::one;
    let corner = |top: S, bottom: S| t3(bottom, z(), z(), z(), top);
    let rel = column_relation(m);
    if c.is_zero() && g.is_zero() {
        let (l, b) = rel?;
        let fs = vec![t3(i, f, z(), d, a), corner(o(), o())];
        return finish_outer_columns(m, fs, l, b).map(|fs| (fs, "3x3-rank2-corners-zero"));
    }
    if !c.is_zero() && !g.is_zero() {
        let (l, b) = rel?;
        let fg_c = (f * g.clone()).checked_div(&c)?;
        let ig_c = (i * g.clone()).checked_div(&c)?;
        let c_g = c.checked_div(&g)?;
        let fs = vec![t3(ig_c, fg_c, g, d, a), corner(c_g, o())];
        return finish_outer_columns(m, fs, l, b).map(|fs| (fs, "3x3-rank2-corners-nonzero"));
    }
    if !c.is_zero() {
        return None;
    }
    // c = 0 ≠ g
    if !a.is_zero() && !i.is_zero() {
        let (l, b) = rel?;
        let af_i = (a.clone() * f).checked_div(&i)?;
        let i_a = i.checked_div(&a)?;
        let fs = vec![t3(g, d, a, af_i, z()), corner(o(), i_a)];
        return finish_outer_columns(m, fs, l, b).map(|fs| (fs, "3x3-rank2-top-left"));
    }
    if a.is_zero() {
        if i.is_zero() {
            let (l, b) = rel?;
            let fs = vec![t3(g, d, z(), f, z()), corner(o(), o())];
            return finish_outer_columns(m, fs, l, b).map(|fs| (fs, "3x3-rank2-anti"));
        }
        if !d.is_zero() {
            let i_d = i.checked_div(&d)?;
            let hd_i = (h * d.clone()).checked_div(&i)?;
            let gd_i = (g * d.clone()).checked_div(&i)?;
            let fs = vec![
                t3(o(), z(), z(), o(), z()),
                corner(i_d, o()),
                t3(gd_i, hd_i, d, e, f),
            ];
            return (product(&fs, 3) == *m).then_some((fs, "3x3-rank2-cyclic-left"));
        }
        if !f.is_zero() {
            let f_g = f.checked_div(&g)?;
            let eg_f = (e * g.clone()).checked_div(&f)?;
            let fs = vec![
                t3(z(), o(), z(), z(), z()),
                t3(z(), o(), z(), z(), f_g),
                t3(z(), eg_f, g, h, i),
            ];
            return (product(&fs, 3) == *m).then_some((fs, "3x3-rank2-backshift"));
        }
        return None;
    }
    // a ≠ 0, c = i = 0: rotate the rows so the corners become nonzero
    if !rotate {
        return None;
    }
    let rows = DenseMatrix::from_rows(vec![m.row(1).to_vec(), m.row(2).to_vec(), m.row(0).to_vec()]).ok()?;
    let (inner, _) = corner_cases(&rows, false)?;
    let mut fs = vec![t3(z(), o(), z(), z(), o())];
    fs.extend(inner);
    (product(&fs, 3) == *m).then_some((fs, "3x3-rank2-row-rotation"))
}

fn flip<S: Scalar>(m: &DenseMatrix<S>) -> DenseMatrix<S> {
    let n = m.rows();
    DenseMatrix::from_fn(n, n, |i, j| m.get(n - 1 - i, n - 1 - j).clone())
}

/// Direct constructions on `m`, `mᵀ`, `JmJ` and `JmᵀJ` (`J` the exchange
/// matrix, which maps a Toeplitz matrix to its transpose).
fn direct<S: Scalar>(m: &DenseMatrix<S>) -> Vec<(Factors<S>, String)> {
    let mut out = Vec::new();
    let t = |fs: &Factors<S>| fs.iter().map(ToeplitzMatrix::transpose).collect::<Factors<S>>();
    if let Some((fs, name)) = corner_cases(m, true) {
        out.push((fs, name.to_string()));
    }
    if let Some((fs, name)) = corner_cases(&m.transpose(), true) {
        out.push((t(&fs).into_iter().rev().collect(), format!("{name}-transposed")));
    }
    if let Some((fs, name)) = corner_cases(&flip(m), true) {
        out.push((t(&fs), format!("{name}-flipped")));
    }
    if let Some((fs, name)) = corner_cases(&flip(&m.transpose()), true) {
        out.push((fs.into_iter().rev().collect(), format!("{name}-flipped-transposed")));
    }
    out
}

/// Rank-2 3x3 matrices: direct constructions first, then the same after
/// splitting off one invertible Toeplitz factor on either side.
fn decompose_3x3_rank2<S: Scalar>(m: &DenseMatrix<S>) -> Result<ToeplitzDecomposition<S>> {
    let z = S::zero;
    let o = S::one;
    let pick = |cands: Vec<(Factors<S>, String)>| {
        cands
            .into_iter()
            .filter(|(fs, _)| product(fs, 3) == *m)
            .min_by_key(|(fs, _)| fs.len())
    };
    let mut best = pick(direct(m));
    if best.as_ref().is_none_or(|(fs, _)| fs.len() > 3) {
        let splits = [
            ("rot", t3(o(), z(), z(), o(), z())),
            ("rot2", t3(z(), o(), z(), z(), o())),
            ("unip", t3(z(), z(), o(), -o(), o())),
            ("unip-t", t3(o(), -o(), o(), z(), z())),
            ("shear", t3(z(), z(), o(), o(), z())),
            ("shear-t", t3(z(), o(), o(), z(), z())),
            ("tridiag", t3(z(), o(), o(), o(), z())),
        ];
        // generic splits: for almost every invertible K the columns of m·K⁻¹
        // avoid the degenerate corner patterns
        let int = |v: i64| S::from_i64(v);
        let generic = [[1, 2, 3, 5, 7], [-2, 1, 1, 3, -1], [3, -1, 2, 1, 4]]
            .map(|c| ("generic", t3(int(c[0]), int(c[1]), int(c[2]), int(c[3]), int(c[4]))));
        let splits = splits.into_iter().chain(generic);
        let mut cands = Vec::new();
        for (name, k) in splits {
            let Ok(k_inv) = k.to_dense().inverse() else {
                continue;
            };
            for (mut fs, inner) in direct(&m.multiply(&k_inv)?) {
                fs.push(k.clone());
                cands.push((fs, format!("{inner}+{name}")));
            }
            for (fs, inner) in direct(&k_inv.multiply(m)?) {
                let mut all = vec![k.clone()];
                all.extend(fs);
                cands.push((all, format!("{name}+{inner}")));
            }
        }
        if let Some(c) = pick(cands) {
            if best.as_ref().is_none_or(|b| c.0.len() < b.0.len()) {
                best = Some(c);
            }
        }
    }
    let (fs, name) = best.ok_or(Error::NoConstruction { n: 3, rank: 2, bound: 4 })?;
    gate(m, ToeplitzDecomposition::new(None, fs, name))
}

/// Constructive decomposition of a singular or diagonal 3x3 matrix into at
/// most four Toeplitz factors.
pub fn decompose_3x3<S: Scalar>(m: &DenseMatrix<S>) -> Result<ToeplitzDecomposition<S>> {
    square_of_size(m, 3)?;
    if is_toeplitz(m, 0.0) {
        return single(m);
    }
    if m.is_diagonal() {
        let d = m.diagonal();
        return Ok(classify_diagonal3(&d[0], &d[1], &d[2])?.1);
    }
    match m.rank() {
        1 => decompose_rank1(m),
        2 => decompose_3x3_rank2(m),
        _ => Err(Error::InvertibleFallback {
            n: 3,
            bound: invertible_bound(3),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational as G;
    use proptest::prelude::*;

    fn m3(rows: [[i64; 3]; 3]) -> DenseMatrix<G> {
        DenseMatrix::from_i64_rows(&[&rows[0], &rows[1], &rows[2]])
    }

    #[test]
    fn two_by_two_examples() {
        for rows in [[[1, 2], [3, 4]], [[1, 0], [3, 4]], [[5, 0], [0, 7]], [[0, 0], [1, 0]], [[2, 1], [0, 2]]] {
            let m = DenseMatrix::<G>::from_i64_rows(&[&rows[0], &rows[1]]);
            let d = decompose_2x2(&m).unwrap();
            assert!(d.factors.len() <= 2);
            assert_eq!(d.product().unwrap(), m);
        }
    }

    #[test]
    fn rank2_cases() {
        let cases = [
            // corners nonzero
            [[1, 2, 1], [0, 1, 1], [1, 3, 2]],
            // c = g = 0
            [[1, 1, 0], [2, 3, 1], [0, 1, 1]],
            // c = 0, a, g, i nonzero
            [[1, 1, 0], [1, 2, 1], [1, 3, 2]],
            // a = c = i = 0
            [[0, 0, 0], [1, 1, 1], [2, 2, 0]],
            // a = c = 0, d, g, i nonzero
            [[0, 0, 0], [1, 2, 3], [4, 5, 6]],
            // a = c = d = 0
            [[0, 0, 0], [0, 1, 1], [1, 1, 1]],
            // c = i = 0, a, g nonzero
            [[1, 2, 0], [3, 4, 5], [1, 2, 0]],
            // middle column zero
            [[1, 0, 2], [3, 0, 4], [5, 0, 6]],
            // b, h force the repair route
            [[0, 1, 0], [1, 0, 0], [0, 1, 0]],
            [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
            [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
        ];
        for rows in cases {
            let m = m3(rows);
            assert_eq!(m.rank(), 2, "{rows:?}");
            let d = decompose_3x3(&m).unwrap_or_else(|e| panic!("{rows:?}: {e}"));
            assert!(d.factors.len() <= 4, "{rows:?} used {}", d.factors.len());
        }
    }

    #[test]
    fn invertible_non_diagonal_falls_back() {
        let m = m3([[1, 2, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(decompose_3x3(&m).unwrap_err(), Error::InvertibleFallback { n: 3, bound: 4 });
    }

    #[test]
    fn rank2_gaussian_entries() {
        let i = G::i();
        let one = G::one();
        let z = G::zero();
        let m = DenseMatrix::from_rows(vec![
            vec![i.clone(), one.clone(), z.clone()],
            vec![one.clone(), i.clone() + one.clone(), one.clone()],
            vec![-i.clone(), one.clone() - i.clone(), z.clone() - one.clone() + i.clone()],
        ])
        .unwrap();
        if m.rank() == 2 {
            assert!(decompose_3x3(&m).unwrap().factors.len() <= 4);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2048))]

        #[test]
        fn rank2_always_constructive(
            u in prop::array::uniform3(-2i64..3),
            v in prop::array::uniform3(-2i64..3),
            p in prop::array::uniform3(-2i64..3),
            q in prop::array::uniform3(-2i64..3),
        ) {
            let m = DenseMatrix::<G>::from_fn(3, 3, |i, j| G::from_int(u[i] * p[j] + v[i] * q[j]));
            prop_assume!(m.rank() == 2);
            let d = decompose_3x3(&m).unwrap();
            prop_assert!(d.factors.len() <= 4);
            prop_assert_eq!(d.product().unwrap(), m);
        }

        #[test]
        fn two_by_two_always(e in prop::array::uniform4(-3i64..4)) {
            let m = DenseMatrix::<G>::from_i64_rows(&[&e[..2], &e[2..]]);
            let d = decompose_2x2(&m).unwrap();
            prop_assert!(d.factors.len() <= 2);
        }
    }
}
