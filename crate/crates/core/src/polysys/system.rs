use std::sync::Arc;

use super::poly::{Coeff, FieldTag, MultiPoly, Ring};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::matrices::DenseMatrix;

/// Generators of the ideal whose common zeros are the factorizations
/// `A = T_1 ⋯ T_s` into `n x n` Toeplitz matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem<C: Coeff> {
    pub ring: Arc<Ring>,
    /// Row-major: generator `i*n + j` encodes entry `(i, j)`.
    pub generators: Vec<MultiPoly<C>>,
    pub n: usize,
    pub s: usize,
    /// Rendered entries of the target matrix, row-major.
    pub source: Vec<String>,
}

/// Name of the coefficient of factor `k` (1-based) on diagonal offset
/// `j - (n-1)`.
pub fn coefficient_var(k: usize, j: usize) -> String {
    format!("x{k}_{j}")
}

/// Variable names `x<k>_<j>`, `k = 1..=s`, `j = 0..=2n-2`, in ring order.
pub fn coefficient_vars(n: usize, s: usize) -> Vec<String> {
    (1..=s)
        .flat_map(|k| (0..2 * n - 1).map(move |j| coefficient_var(k, j)))
        .collect()
}

/// Entries of the generic product `T_1 ⋯ T_s`, with `var(k, j)` the ring
/// index of the coefficient of factor `k` at offset `j - (n-1)`.
fn product_entries<C: Coeff>(
    ring: &Arc<Ring>,
    n: usize,
    s: usize,
    var: impl Fn(usize, usize) -> usize,
) -> Vec<Vec<MultiPoly<C>>> {
    let factor = |k: usize| -> Vec<Vec<MultiPoly<C>>> {
        (0..n)
            .map(|i| (0..n).map(|j| MultiPoly::var_index(ring, var(k, j + n - 1 - i))).collect())
            .collect()
    };
    let mut acc = factor(1);
    for k in 2..=s {
        let f = factor(k);
        acc = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(MultiPoly::zero(ring), |sum, l| {
                            sum.add(&acc[i][l].mul(&f[l][j]).expect("same ring")).expect("same ring")
                        })
                    })
                    .collect()
            })
            .collect();
    }
    acc
}

fn check_sizes(n: usize, s: usize) -> Result<()> {
    if n == 0 || s == 0 {
        return Err(Error::BadParameter("n and s must be positive".into()));
    }
    Ok(())
}

/// `f_{i,j} - a_{i,j}` for every entry, where `f_{i,j}` is entry `(i,j)` of
/// the generic product of `s` Toeplitz matrices.
pub fn build_toeplitz_product_system<C: Coeff>(a: &DenseMatrix<C>, s: usize) -> Result<PolySystem<C>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("target matrix must be square".into()));
    }
    let n = a.rows();
    check_sizes(n, s)?;
    let ring = Ring::new(coefficient_vars(n, s), C::FIELD)?;
    let m = 2 * n - 1;
    let prod = product_entries::<C>(&ring, n, s, |k, j| (k - 1) * m + j);
    let mut generators = Vec::with_capacity(n * n);
    for (i, row) in prod.into_iter().enumerate() {
        for (j, f) in row.into_iter().enumerate() {
            generators.push(f.sub(&MultiPoly::constant(&ring, a.get(i, j).clone()))?);
        }
    }
    Ok(PolySystem {
        ring,
        generators,
        n,
        s,
        source: a.entries().iter().map(ToString::to_string).collect(),
    })
}

/// Same system for a target whose entries are polynomials in parameter
/// variables (for example an adjoined algebraic element). The ring is the
/// coefficient variables followed by the parameter ring's variables.
pub fn build_parametric_system<C: Coeff>(entries: &[Vec<MultiPoly<C>>], s: usize) -> Result<PolySystem<C>> {
    let n = entries.len();
    check_sizes(n, s)?;
    if entries.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("target matrix must be square".into()));
    }
    let params = entries[0][0].ring().clone();
    let mut vars = coefficient_vars(n, s);
    vars.extend(params.vars().iter().cloned());
    let ring = Ring::new(vars, C::FIELD)?;
    let m = 2 * n - 1;
    let prod = product_entries::<C>(&ring, n, s, |k, j| (k - 1) * m + j);
    let mut generators = Vec::with_capacity(n * n);
    for (row_f, row_a) in prod.into_iter().zip(entries) {
        for (f, a) in row_f.into_iter().zip(row_a) {
            generators.push(f.sub(&a.embed(&ring)?)?);
        }
    }
    Ok(PolySystem {
        ring,
        generators,
        n,
        s,
        source: entries.iter().flatten().map(|p| format!("({p})")).collect(),
    })
}

/// The 3x3, two-factor system with `T_1` coefficients `a_0 … a_4`, `T_2`
/// coefficients `b_0 … b_4` and a symbolic diagonal target `diag(d, e, f)`.
pub fn diagonal_system3() -> Result<PolySystem<Rational>> {
    let mut vars: Vec<String> = (0..5).map(|j| format!("a{j}")).collect();
    vars.extend((0..5).map(|j| format!("b{j}")));
    vars.extend(["d", "e", "f"].map(String::from));
    let ring = Ring::new(vars, FieldTag::Rat)?;
    let prod = product_entries::<Rational>(&ring, 3, 2, |k, j| (k - 1) * 5 + j);
    let mut generators = Vec::with_capacity(9);
    for (i, row) in prod.into_iter().enumerate() {
        for (j, f) in row.into_iter().enumerate() {
            let target = if i == j {
                MultiPoly::var_index(&ring, 10 + i)
            } else {
                MultiPoly::zero(&ring)
            };
            generators.push(f.sub(&target)?);
        }
    }
    Ok(PolySystem {
        ring,
        generators,
        n: 3,
        s: 2,
        source: ["d", "0", "0", "0", "e", "0", "0", "0", "f"].map(String::from).to_vec(),
    })
}

/// Multipliers of the diagonal certificate, one per generator of
/// [`diagonal_system3`].
pub const DIAGONAL_CERTIFICATE: [&str; 9] = [
    "(f-e)*(a2*b2*(d-e) + a3*b1*(d-f))",
    "a3*b0*(d-f)*(e-f)",
    "a2*b0*(d-e)*(e-f)",
    "a1*b4*(d-f)*(d-e) - a2*b3*(d-e)*(e-f) + a3*b2*(d-f)*(d+f-2*e)",
    "(d-f)*(a1*b3*(e-d) + a3*b1*(e-f) + (f-e)*(d-e))",
    "(d-e)*(a2*b1*(e-f) + a3*b0*(f-d))",
    "a2*b4*(d-e)*(f-e) + a3*b3*(d-f)*(d+f-2*e)",
    "(f-d)*(a1*b4*(d-e) + a3*b2*(d+f-2*e))",
    "(d-e)*(a1*b3*(d-f) + a2*b2*(e-f))",
];

/// Right-hand side `e(d-e)(f-d)(f-e)` of the certificate identity.
pub const DIAGONAL_CERTIFICATE_RHS: &str = "e*(d-e)*(f-d)*(f-e)";

/// A verified identity `Σ q_i p_i = rhs`.
#[derive(Clone, Debug)]
pub struct DiagonalCertificate {
    pub system: PolySystem<Rational>,
    pub multipliers: Vec<MultiPoly<Rational>>,
    pub rhs: MultiPoly<Rational>,
}

impl DiagonalCertificate {
    /// Specializes to `diag(d, e, f)` and divides by the right-hand side, so
    /// that `Σ q̃_i p_i = 1`. `None` when the right-hand side vanishes there.
    pub fn scaled(&self, d: &Rational, e: &Rational, f: &Rational) -> Result<Option<Vec<MultiPoly<Rational>>>> {
        let vals = [("d", d.clone()), ("e", e.clone()), ("f", f.clone())];
        let denom = self.rhs.substitute_values(&vals)?.constant_term();
        if denom.is_zero() {
            return Ok(None);
        }
        let inv = denom.recip()?;
        self.multipliers
            .iter()
            .map(|q| Ok(q.substitute_values(&vals)?.scale(&inv)))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

/// Builds `p_1 … p_9` with symbolic `d, e, f`, multiplies by the stored
/// multipliers and checks the sum against `e(d-e)(f-d)(f-e)` exactly.
pub fn verify_diagonal_certificate() -> Result<DiagonalCertificate> {
    let system = diagonal_system3()?;
    let ring = system.ring.clone();
    let multipliers = DIAGONAL_CERTIFICATE
        .iter()
        .map(|q| MultiPoly::parse_expr(&ring, q))
        .collect::<Result<Vec<_>>>()?;
    let rhs = MultiPoly::parse_expr(&ring, DIAGONAL_CERTIFICATE_RHS)?;
    let mut sum = MultiPoly::zero(&ring);
    for (q, p) in multipliers.iter().zip(&system.generators) {
        sum = sum.add(&q.mul(p)?)?;
    }
    let diff = sum.sub(&rhs)?;
    if !diff.is_zero() {
        return Err(Error::CertificateMismatch(diff.to_string()));
    }
    Ok(DiagonalCertificate {
        system,
        multipliers,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational as G;
    use crate::toeplitz::ToeplitzMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn printed_generators() {
        let sys = diagonal_system3().unwrap();
        let expected = [
            "a2*b2 + a3*b1 + a4*b0 - d",
            "a2*b3 + a3*b2 + a4*b1",
            "a2*b4 + a3*b3 + a4*b2",
            "a1*b2 + a2*b1 + a3*b0",
            "a1*b3 + a2*b2 + a3*b1 - e",
            "a1*b4 + a2*b3 + a3*b2",
            "a0*b2 + a1*b1 + a2*b0",
            "a0*b3 + a1*b2 + a2*b1",
            "a0*b4 + a1*b3 + a2*b2 - f",
        ];
        for (g, e) in sys.generators.iter().zip(expected) {
            assert_eq!(*g, MultiPoly::parse_expr(&sys.ring, e).unwrap());
        }
    }

    #[test]
    fn p1_at_zero() {
        let a = DenseMatrix::<Rational>::identity(3);
        let sys = build_toeplitz_product_system(&a, 2).unwrap();
        let zero = vec![Rational::zero(); sys.ring.nvars()];
        assert_eq!(sys.generators[0].eval(&zero).unwrap(), Rational::from(-1));
    }

    #[test]
    fn linear_case() {
        let a = DenseMatrix::<G>::from_i64_rows(&[&[1, 2], &[3, 1]]);
        let sys = build_toeplitz_product_system(&a, 1).unwrap();
        assert_eq!(sys.generators.len(), 4);
        // x1_{j-i+1} - a_ij
        assert_eq!(sys.generators[1], MultiPoly::parse_expr(&sys.ring, "x1_2 - 2").unwrap());
        assert_eq!(sys.generators[2], MultiPoly::parse_expr(&sys.ring, "x1_0 - 3").unwrap());
        let at = |v: [i64; 3]| v.map(G::from_int).to_vec();
        assert!(sys.generators.iter().all(|g| g.eval(&at([3, 1, 2])).unwrap().is_zero()));
        assert!(!sys.generators.iter().all(|g| g.eval(&at([3, 1, 1])).unwrap().is_zero()));
    }

    #[test]
    fn three_paths_per_entry() {
        let a = DenseMatrix::<Rational>::from_fn(3, 3, |i, j| Rational::from((i * 3 + j) as i64));
        let sys = build_toeplitz_product_system(&a, 2).unwrap();
        for (k, g) in sys.generators.iter().enumerate() {
            assert_eq!(g.homogeneous_part(2).num_terms(), 3);
            assert_eq!(g.num_terms(), if k == 0 { 3 } else { 4 });
        }
    }

    #[test]
    fn homogeneity() {
        for n in 2..=4 {
            for s in 1..=3 {
                let sys = build_toeplitz_product_system(&DenseMatrix::<Rational>::zeros(n, n), s).unwrap();
                assert_eq!(sys.ring.nvars(), (2 * n - 1) * s);
                for g in &sys.generators {
                    assert!(g.is_homogeneous());
                    assert_eq!(g.total_degree(), Some(s as u32));
                }
            }
        }
    }

    #[test]
    fn certificate_identity() {
        let cert = verify_diagonal_certificate().unwrap();
        let scaled = cert.scaled(&1.into(), &2.into(), &3.into()).unwrap().unwrap();
        assert_eq!(scaled.len(), 9);
        assert!(cert.scaled(&1.into(), &0.into(), &3.into()).unwrap().is_none());
    }

    #[test]
    fn certificate_specialized_at_random_points() {
        let cert = verify_diagonal_certificate().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut point: Vec<Rational> = (0..10).map(|_| Rational::from(rng.gen_range(-9..10))).collect();
            point.extend([1, 2, 3].map(Rational::from));
            let lhs = cert
                .multipliers
                .iter()
                .zip(&cert.system.generators)
                .fold(Rational::zero(), |acc, (q, p)| acc + q.eval(&point).unwrap() * p.eval(&point).unwrap());
            assert_eq!(lhs, Rational::from(-4));
        }
    }

    #[test]
    fn certificate_vanishes_for_zero_middle() {
        let cert = verify_diagonal_certificate().unwrap();
        let zero = MultiPoly::constant(&cert.rhs.ring().clone(), Rational::zero());
        let e0 = cert.rhs.substitute("e", &zero).unwrap();
        assert!(e0.is_zero());
    }

    proptest! {
        #[test]
        fn toeplitz_pairs_are_zeros(c1 in prop::collection::vec(-3i64..4, 5), c2 in prop::collection::vec(-3i64..4, 5)) {
            let t1 = ToeplitzMatrix::new(3, c1.iter().map(|&v| G::from_int(v)).collect()).unwrap();
            let t2 = ToeplitzMatrix::new(3, c2.iter().map(|&v| G::from_int(v)).collect()).unwrap();
            let a = t1.to_dense().multiply(&t2.to_dense()).unwrap();
            let sys = build_toeplitz_product_system(&a, 2).unwrap();
            let point: Vec<G> = t1.coeffs().iter().chain(t2.coeffs()).cloned().collect();
            for g in &sys.generators {
                prop_assert!(g.eval(&point).unwrap().is_zero());
            }
        }

        #[test]
        fn single_factor_zeros_are_the_matrix(c in prop::collection::vec(-3i64..4, 5), x in prop::collection::vec(-3i64..4, 5)) {
            let a = ToeplitzMatrix::new(3, c.iter().map(|&v| Rational::from(v)).collect()).unwrap().to_dense();
            let sys = build_toeplitz_product_system(&a, 1).unwrap();
            let point: Vec<Rational> = x.iter().map(|&v| Rational::from(v)).collect();
            let vanish = sys.generators.iter().all(|g| g.eval(&point).unwrap().is_zero());
            let t = ToeplitzMatrix::new(3, point).unwrap().to_dense();
            prop_assert_eq!(vanish, t == a);
        }
    }
}
