//! Toeplitz matrices: storage by diagonal, structured constructors, the
//! (quasi-)Toeplitz predicates, Levinson recursion and chained solves
//! through a [`ToeplitzDecomposition`].

use std::fmt;

use crate::error::{Error, Result};
use crate::factorize::ToeplitzDecomposition;
use crate::matrices::DenseMatrix;
use crate::scalar::Scalar;

/// An `n×n` Toeplitz matrix stored as its `2n-1` diagonals.
///
/// `coeffs[ℓ + n - 1]` holds the value on diagonal offset `ℓ = j - i`, so
/// `entry(i, j) = coeffs[j - i + n - 1]`.
#[derive(Clone, PartialEq)]
pub struct ToeplitzMatrix<S> {
    n: usize,
    coeffs: Vec<S>,
}

/// Patterns built from shifts and cyclic factors.
#[derive(Clone, Debug, PartialEq)]
pub enum StructuredKind<S> {
    /// `S_n^k`: ones on the `k`-th superdiagonal.
    ShiftPower(usize),
    /// `B_n^k`: ones on the `k`-th subdiagonal.
    BackshiftPower(usize),
    /// `F(x)`: `x` at `(1,n)` and ones on the subdiagonal.
    CyclicFactor(S),
    /// A single one at `(1,n)`.
    CornerUnit,
    /// `top` at `(1,n)` and `bottom` at `(n,1)`.
    CornerPair(S, S),
}

impl<S: Scalar> ToeplitzMatrix<S> {
    pub fn new(n: usize, coeffs: Vec<S>) -> Result<Self> {
        if n == 0 || coeffs.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal coefficients for size {n}",
                coeffs.len()
            )));
        }
        Ok(ToeplitzMatrix { n, coeffs })
    }

    /// Builds from a function of the diagonal offset `ℓ ∈ [-(n-1), n-1]`.
    pub fn from_offsets(n: usize, f: impl FnMut(isize) -> S) -> Self {
        let m = n as isize;
        ToeplitzMatrix {
            n,
            coeffs: (-(m - 1)..m).map(f).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_offsets(n, |_| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_offsets(n, |l| if l == 0 { S::one() } else { S::zero() })
    }

    /// First column `col` (top to bottom) and first row `row`; `col[0]` and
    /// `row[0]` must agree.
    pub fn from_column_and_row(col: &[S], row: &[S]) -> Result<Self> {
        let n = col.len();
        if n == 0 || row.len() != n {
            return Err(Error::DimensionMismatch("column and row lengths differ".into()));
        }
        if col[0] != row[0] {
            return Err(Error::BadParameter("first column and first row disagree at (1,1)".into()));
        }
        Ok(Self::from_offsets(n, |l| {
            if l >= 0 {
                row[l as usize].clone()
            } else {
                col[(-l) as usize].clone()
            }
        }))
    }

    /// First row `(t_0, …, t_{n-1})` and last row `(t_{-(n-1)}, …, t_0)`.
    pub fn from_first_and_last_rows(first: &[S], last: &[S]) -> Result<Self> {
        let n = first.len();
        if n == 0 || last.len() != n {
            return Err(Error::DimensionMismatch("row lengths differ".into()));
        }
        if first[0] != last[n - 1] {
            return Err(Error::BadParameter(
                "first and last rows disagree on the main diagonal".into(),
            ));
        }
        let col: Vec<S> = (0..n).map(|k| last[n - 1 - k].clone()).collect();
        Self::from_column_and_row(&col, first)
    }

    /// Lower-triangular Toeplitz matrix with first column `col`.
    pub fn lower_from_column(col: &[S]) -> Self {
        Self::from_offsets(col.len(), |l| {
            if l <= 0 {
                col[(-l) as usize].clone()
            } else {
                S::zero()
            }
        })
    }

    /// Lower-triangular Toeplitz matrix whose last row is `row`.
    pub fn lower_from_last_row(row: &[S]) -> Self {
        let n = row.len() as isize;
        Self::from_offsets(row.len(), |l| {
            if l <= 0 {
                row[(n - 1 + l) as usize].clone()
            } else {
                S::zero()
            }
        })
    }

    pub fn structured(kind: StructuredKind<S>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParameter("size must be positive".into()));
        }
        let last = n as isize - 1;
        let single = |offset: isize, v: S| {
            Self::from_offsets(n, move |l| if l == offset { v.clone() } else { S::zero() })
        };
        match kind {
            StructuredKind::ShiftPower(k) | StructuredKind::BackshiftPower(k) if k == 0 || k >= n => Err(
                Error::BadParameter(format!("power {k} outside 1..={} for size {n}", n - 1)),
            ),
            StructuredKind::ShiftPower(k) => Ok(single(k as isize, S::one())),
            StructuredKind::BackshiftPower(k) => Ok(single(-(k as isize), S::one())),
            StructuredKind::CyclicFactor(x) => {
                if n < 2 {
                    return Err(Error::BadParameter("cyclic factor needs n >= 2".into()));
                }
                Ok(Self::from_offsets(n, |l| {
                    if l == last {
                        x.clone()
                    } else if l == -1 {
                        S::one()
                    } else {
                        S::zero()
                    }
                }))
            }
            StructuredKind::CornerUnit => Ok(single(last, S::one())),
            StructuredKind::CornerPair(top, bottom) => {
                if n < 2 {
                    return Err(Error::BadParameter("corner pair needs n >= 2".into()));
                }
                Ok(Self::from_offsets(n, |l| {
                    if l == last {
                        top.clone()
                    } else if l == -last {
                        bottom.clone()
                    } else {
                        S::zero()
                    }
                }))
            }
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// The `2n-1` diagonal values, from offset `-(n-1)` up to `n-1`.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, offset: isize) -> &S {
        &self.coeffs[(offset + self.n as isize - 1) as usize]
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.coeffs[j + self.n - 1 - i]
    }

    pub fn to_dense(&self) -> DenseMatrix<S> {
        DenseMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j).clone())
    }

    /// Exact read-back of a Toeplitz matrix (tolerance 0).
    pub fn from_dense(m: &DenseMatrix<S>) -> Result<Self> {
        Self::from_dense_tol(m, 0.0)
    }

    /// Reads the diagonals from the first row and column after checking
    /// `|m(i,j) - m(i+1,j+1)| <= tol` everywhere.
    pub fn from_dense_tol(m: &DenseMatrix<S>, tol: f64) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::DimensionMismatch("Toeplitz matrices are square and nonempty".into()));
        }
        if let Some((row, col)) = first_violation(m, tol) {
            return Err(Error::NotToeplitz { row, col });
        }
        let n = m.rows();
        Ok(Self::from_offsets(n, |l| {
            if l >= 0 {
                m.get(0, l as usize).clone()
            } else {
                m.get((-l) as usize, 0).clone()
            }
        }))
    }

    pub fn transpose(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        ToeplitzMatrix { n: self.n, coeffs }
    }

    pub fn scale(&self, c: &S) -> Self {
        ToeplitzMatrix {
            n: self.n,
            coeffs: self.coeffs.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for size {}",
                v.len(),
                self.n
            )));
        }
        Ok((0..self.n)
            .map(|i| {
                (0..self.n).fold(S::zero(), |acc, j| acc + self.entry(i, j).clone() * v[j].clone())
            })
            .collect())
    }

    /// Solves `self · x = b` by the non-symmetric Levinson recursion.
    /// Requires every leading principal minor to be nonzero.
    pub fn levinson_solve(&self, b: &[S]) -> Result<Vec<S>> {
        self.levinson_solve_counted(b).map(|(x, _)| x)
    }

    /// As [`levinson_solve`](Self::levinson_solve), also returning the number
    /// of multiplications (divisions included).
    pub fn levinson_solve_counted(&self, b: &[S]) -> Result<(Vec<S>, u64)> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for size {n}",
                b.len()
            )));
        }
        let mut state = LevinsonState::start(self)?;
        let mut x = vec![b[0].checked_div(self.coeff(0)).ok_or(Error::Breakdown { order: 1, factor: None })?];
        state.mults += 1;
        for k in 1..n {
            state.extend(self)?;
            // ex = row k of the (k+1)-leading block applied to [x; 0]
            let ex = (0..k).fold(S::zero(), |acc, j| acc + self.entry(k, j).clone() * x[j].clone());
            let c = b[k].clone() - ex;
            x.push(S::zero());
            for (xi, bi) in x.iter_mut().zip(&state.backward) {
                *xi = xi.clone() + c.clone() * bi.clone();
            }
            state.mults += 2 * k as u64 + 1;
        }
        let resid = self
            .mul_vec(&x)?
            .iter()
            .zip(b)
            .map(|(a, c)| (a.clone() - c.clone()).magnitude())
            .fold(0.0, f64::max);
        let bnorm = b.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        let ok = if S::EXACT {
            resid == 0.0
        } else {
            resid <= 1e-8 * (1.0 + bnorm)
        };
        if !ok {
            return Err(Error::Breakdown { order: n, factor: None });
        }
        Ok((x, state.mults))
    }
}

/// Forward/backward vectors of the Levinson recursion at the current order:
/// `T_k · forward = e_1`, `T_k · backward = e_k` for the `k×k` leading block.
struct LevinsonState<S> {
    order: usize,
    forward: Vec<S>,
    backward: Vec<S>,
    scale: f64,
    mults: u64,
}

/// Breakdown threshold for float pivots, relative to the coefficient scale.
const LEVINSON_PIVOT_EPS: f64 = 1e-12;

impl<S: Scalar> LevinsonState<S> {
    fn start(t: &ToeplitzMatrix<S>) -> Result<Self> {
        let scale = t.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        let t0 = t.coeff(0);
        if t0.is_zero() || (!S::EXACT && t0.magnitude() <= LEVINSON_PIVOT_EPS * scale) {
            return Err(Error::Breakdown { order: 1, factor: None });
        }
        let inv = S::one().checked_div(t0).ok_or(Error::Breakdown { order: 1, factor: None })?;
        Ok(LevinsonState {
            order: 1,
            forward: vec![inv.clone()],
            backward: vec![inv],
            scale,
            mults: 1,
        })
    }

    fn extend(&mut self, t: &ToeplitzMatrix<S>) -> Result<()> {
        let k = self.order;
        let ef = (0..k).fold(S::zero(), |acc, j| acc + t.entry(k, j).clone() * self.forward[j].clone());
        let eb = (0..k).fold(S::zero(), |acc, j| acc + t.entry(0, j + 1).clone() * self.backward[j].clone());
        let denom = S::one() - ef.clone() * eb.clone();
        let breakdown = Error::Breakdown { order: k + 1, factor: None };
        if denom.is_zero() || (!S::EXACT && denom.magnitude() <= LEVINSON_PIVOT_EPS * self.scale.max(1.0)) {
            return Err(breakdown);
        }
        let alpha = S::one().checked_div(&denom).ok_or(breakdown)?;
        let mut f = Vec::with_capacity(k + 1);
        let mut b = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let fi = if i < k { self.forward[i].clone() } else { S::zero() };
            let bi = if i > 0 { self.backward[i - 1].clone() } else { S::zero() };
            f.push(alpha.clone() * (fi.clone() - ef.clone() * bi.clone()));
            b.push(alpha.clone() * (bi - eb.clone() * fi));
        }
        self.mults += 2 * k as u64 + 2 + 4 * (k as u64 + 1);
        self.forward = f;
        self.backward = b;
        self.order += 1;
        Ok(())
    }
}

fn first_violation<S: Scalar>(m: &DenseMatrix<S>, tol: f64) -> Option<(usize, usize)> {
    let n = m.rows();
    for i in 0..n.saturating_sub(1) {
        for j in 0..n - 1 {
            let a = m.get(i, j);
            let b = m.get(i + 1, j + 1);
            let bad = if S::EXACT && tol == 0.0 {
                a != b
            } else {
                (a.clone() - b.clone()).magnitude() > tol
            };
            if bad {
                return Some((i, j));
            }
        }
    }
    None
}

/// True iff `m` is square and constant along every descending diagonal up to
/// `tol` (use `0.0` for exact comparison).
pub fn is_toeplitz<S: Scalar>(m: &DenseMatrix<S>, tol: f64) -> bool {
    m.is_square() && first_violation(m, tol).is_none()
}

/// True iff some Toeplitz matrix agrees with `m` on every nonzero row of `m`.
pub fn is_quasi_toeplitz<S: Scalar>(m: &DenseMatrix<S>) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.rows();
    let live: Vec<usize> = (0..n).filter(|&i| m.row(i).iter().any(|v| !v.is_zero())).collect();
    let mut diag: Vec<Option<&S>> = vec![None; 2 * n - 1];
    for &i in &live {
        for j in 0..n {
            let slot = &mut diag[j + n - 1 - i];
            match slot {
                None => *slot = Some(m.get(i, j)),
                Some(v) if *v != m.get(i, j) => return false,
                Some(_) => {}
            }
        }
    }
    true
}

/// Which method solved each factor in [`chain_solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Levinson,
    DenseLu,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainSolution<S> {
    pub x: Vec<S>,
    /// One entry per Toeplitz factor, in order.
    pub methods: Vec<SolveMethod>,
    pub mults: u64,
}

/// Solves `(P · T_1 ⋯ T_s) x = b` one factor at a time:
/// `P z_0 = b`, `T_1 z_1 = z_0`, …, `T_s x = z_{s-1}`.
///
/// Exact scalars go through dense elimination. Float factors use Levinson
/// and fall back to dense elimination when the recursion breaks down (every
/// factor with a zero main diagonal does); a factor that is singular for the
/// dense solver too is reported as `Breakdown` with its 1-based index.
pub fn chain_solve<S: Scalar>(d: &ToeplitzDecomposition<S>, b: &[S]) -> Result<ChainSolution<S>> {
    let n = d.size().ok_or_else(|| Error::BadParameter("empty decomposition".into()))?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for size {n}",
            b.len()
        )));
    }
    let mut z = b.to_vec();
    let mut mults = 0;
    if let Some(p) = &d.prefix {
        let (v, m) = p.solve_counted(&z)?;
        z = v;
        mults += m;
    }
    let mut methods = Vec::with_capacity(d.factors.len());
    for (idx, t) in d.factors.iter().enumerate() {
        if t.size() != n {
            return Err(Error::DimensionMismatch(format!("factor {} has size {}", idx + 1, t.size())));
        }
        let attempt = if S::EXACT { None } else { t.levinson_solve_counted(&z).ok() };
        let (v, m, method) = match attempt {
            Some((v, m)) => (v, m, SolveMethod::Levinson),
            None => {
                let (v, m) = t.to_dense().solve_counted(&z).map_err(|_| Error::Breakdown {
                    order: n,
                    factor: Some(idx + 1),
                })?;
                (v, m, SolveMethod::DenseLu)
            }
        };
        z = v;
        mults += m;
        methods.push(method);
    }
    Ok(ChainSolution { x: z, methods, mults })
}

impl<S: Scalar> fmt::Debug for ToeplitzMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Toeplitz {}x{}\n{}", self.n, self.n, self.to_dense())
    }
}

impl<S: Scalar> fmt::Display for ToeplitzMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_dense(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational as G;
    use num_complex::Complex64 as C;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gi(v: i64) -> G {
        G::from_int(v)
    }

    #[test]
    fn ones_round_trip() {
        let t = ToeplitzMatrix::new(2, vec![gi(1), gi(1), gi(1)]).unwrap();
        let d = t.to_dense();
        assert_eq!(d, DenseMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]));
        assert_eq!(ToeplitzMatrix::from_dense(&d).unwrap(), t);
    }

    #[test]
    fn diagonal_is_not_toeplitz() {
        let m = DenseMatrix::diag(&[gi(1), gi(2), gi(3)]);
        assert_eq!(ToeplitzMatrix::from_dense(&m).unwrap_err(), Error::NotToeplitz { row: 0, col: 0 });
        assert!(!is_toeplitz(&m, 0.0));
        assert!(is_toeplitz(&DenseMatrix::<G>::identity(5), 0.0));
    }

    #[test]
    fn shift_coefficients() {
        let s = ToeplitzMatrix::<G>::structured(StructuredKind::ShiftPower(1), 3).unwrap();
        for l in -2..=2isize {
            assert_eq!(*s.coeff(l), if l == 1 { G::one() } else { G::zero() });
        }
        assert!(ToeplitzMatrix::<G>::structured(StructuredKind::ShiftPower(3), 3).is_err());
        assert!(ToeplitzMatrix::<G>::structured(StructuredKind::BackshiftPower(0), 3).is_err());
    }

    #[test]
    fn cyclic_and_corner() {
        let f = ToeplitzMatrix::structured(StructuredKind::CyclicFactor(gi(7)), 3).unwrap();
        assert_eq!(f.to_dense(), DenseMatrix::from_i64_rows(&[&[0, 0, 7], &[1, 0, 0], &[0, 1, 0]]));
        assert!(is_toeplitz(&f.to_dense(), 0.0));
        let c = ToeplitzMatrix::<G>::structured(StructuredKind::CornerUnit, 4).unwrap();
        let mut expect = DenseMatrix::zeros(4, 4);
        expect.set(0, 3, G::one());
        assert_eq!(c.to_dense(), expect);
    }

    #[test]
    fn triangular_builders() {
        let l = ToeplitzMatrix::lower_from_column(&[gi(1), gi(2)]);
        assert_eq!(l.to_dense(), DenseMatrix::from_i64_rows(&[&[1, 0], &[2, 1]]));
        let r = ToeplitzMatrix::lower_from_last_row(&[gi(3), gi(4)]);
        assert_eq!(r.to_dense(), DenseMatrix::from_i64_rows(&[&[4, 0], &[3, 4]]));
        let t = ToeplitzMatrix::from_first_and_last_rows(&[gi(5), gi(1), gi(2)], &[gi(8), gi(9), gi(5)]).unwrap();
        assert_eq!(t.to_dense(), DenseMatrix::from_i64_rows(&[&[5, 1, 2], &[9, 5, 1], &[8, 9, 5]]));
    }

    #[test]
    fn quasi_toeplitz() {
        let case1 = DenseMatrix::<G>::from_i64_rows(&[&[1, 2, 3, 4], &[0, 0, 0, 0], &[0, 0, 0, 0], &[7, 6, 5, 1]]);
        assert!(is_quasi_toeplitz(&case1));
        assert!(!is_toeplitz(&case1, 0.0));
        assert!(!is_quasi_toeplitz(&DenseMatrix::diag(&[gi(1), gi(2), gi(3)])));
        let t = ToeplitzMatrix::from_offsets(4, |l| gi(l as i64 * 3 + 1));
        assert!(is_quasi_toeplitz(&t.to_dense()));
    }

    #[test]
    fn levinson_small() {
        let t = ToeplitzMatrix::new(2, vec![gi(1), gi(2), gi(1)]).unwrap();
        assert_eq!(t.levinson_solve(&[gi(3), gi(3)]).unwrap(), vec![gi(1), gi(1)]);
        let s = ToeplitzMatrix::<G>::structured(StructuredKind::ShiftPower(1), 3).unwrap();
        assert!(matches!(s.levinson_solve(&[gi(1), gi(1), gi(1)]), Err(Error::Breakdown { .. })));
    }

    #[test]
    fn levinson_detects_singular_leading_minor() {
        // leading 2x2 block [[1,1],[1,1]] is singular
        let t = ToeplitzMatrix::from_offsets(3, |l| match l {
            -1..=1 => C::new(1.0, 0.0),
            _ => C::new(5.0, 0.0),
        });
        assert!(matches!(
            t.levinson_solve(&[C::new(1.0, 0.0); 3]),
            Err(Error::Breakdown { order: 2, .. })
        ));
    }

    pub(crate) fn random_regular(n: usize, rng: &mut ChaCha8Rng) -> ToeplitzMatrix<C> {
        // diagonally dominant so every leading minor is nonzero
        ToeplitzMatrix::from_offsets(n, |l| {
            let v = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / (1.0 + l.unsigned_abs() as f64).powi(2);
            if l == 0 {
                v + C::new(4.0, 0.0)
            } else {
                v
            }
        })
    }

    #[test]
    fn levinson_matches_dense_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = random_regular(8, &mut rng);
        let b: Vec<C> = (0..8).map(|_| C::new(rng.gen(), rng.gen())).collect();
        let x = t.levinson_solve(&b).unwrap();
        let y = t.to_dense().solve(&b).unwrap();
        let err = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let scale = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-10 * scale, "{err}");
    }

    #[test]
    fn exact_levinson() {
        let t = ToeplitzMatrix::from_offsets(4, |l| gi(if l == 0 { 5 } else { l as i64 }));
        let b = vec![gi(1), gi(-2), gi(0), gi(7)];
        let x = t.levinson_solve(&b).unwrap();
        assert_eq!(t.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn chain_solve_falls_back_for_zero_diagonals() {
        use crate::factorize::decompose_diagonal_cyclic;
        let diag = [C::new(2.0, 0.0), C::new(-1.0, 0.5), C::new(3.0, 0.0)];
        let d = decompose_diagonal_cyclic(&diag).unwrap();
        let sol = chain_solve(&d, &diag).unwrap();
        for v in &sol.x {
            assert!((v - C::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(sol.methods.iter().all(|&m| m == SolveMethod::DenseLu));
    }

    #[test]
    fn chain_solve_single_factor_is_levinson() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_regular(6, &mut rng);
        let b: Vec<C> = (0..6).map(|_| C::new(rng.gen(), 0.0)).collect();
        let d = ToeplitzDecomposition::new(None, vec![t.clone()], "single");
        let sol = chain_solve(&d, &b).unwrap();
        assert_eq!(sol.x, t.levinson_solve(&b).unwrap());
        assert_eq!(sol.methods, vec![SolveMethod::Levinson]);
    }

    #[test]
    fn chain_solve_reports_singular_factor() {
        let z = ToeplitzMatrix::<C>::zeros(3);
        let d = ToeplitzDecomposition::new(None, vec![ToeplitzMatrix::identity(3), z], "bad");
        let err = chain_solve(&d, &[C::new(1.0, 0.0); 3]).unwrap_err();
        assert_eq!(err, Error::Breakdown { order: 3, factor: Some(2) });
    }

    proptest! {
        #[test]
        fn dense_view_is_toeplitz(v in proptest::collection::vec(-5i64..5, 7)) {
            let t = ToeplitzMatrix::new(4, v.into_iter().map(gi).collect()).unwrap();
            prop_assert!(is_toeplitz(&t.to_dense(), 0.0));
            prop_assert_eq!(ToeplitzMatrix::from_dense(&t.to_dense()).unwrap(), t.clone());
            prop_assert_eq!(t.transpose().to_dense(), t.to_dense().transpose());
        }

        #[test]
        fn levinson_agrees_with_lu(n in 2usize..=64, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_regular(n, &mut rng);
            let b: Vec<C> = (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let x = t.levinson_solve(&b).unwrap();
            let y = t.to_dense().solve(&b).unwrap();
            let err = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let scale = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-9 * scale);
        }
    }
}
