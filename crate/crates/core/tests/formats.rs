use proptest::prelude::*;
use toepfactor::exactnum::{GaussianRational as G, Rational};
use toepfactor::factorize::{decompose, verify_decomposition};
use toepfactor::groebner::{buchberger, Budget, Ideal};
use toepfactor::io::{
    parse_toepdecomp, parse_toepgb_rat, parse_toepmat, parse_toepsys, write_toepdecomp, write_toepgb, write_toepmat,
    write_toepsys, AnyDecomposition, AnyMatrix, AnySystem,
};
use toepfactor::matrices::DenseMatrix;
use toepfactor::polysys::build_toeplitz_product_system;

fn matrix(vals: &[i64], n: usize) -> DenseMatrix<G> {
    DenseMatrix::from_fn(n, n, |i, j| G::from_int(vals[i * n + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompositions_survive_the_stream(vals in prop::collection::vec(-2i64..3, 9)) {
        let m = matrix(&vals, 3);
        prop_assume!(m.rank() < 3 || m.is_diagonal());
        let (d, _) = decompose(&m).unwrap();
        let text = write_toepdecomp(&d);
        let back = match parse_toepdecomp(&text, 0.0).unwrap() {
            AnyDecomposition::Exact(d) => d,
            AnyDecomposition::Float(_) => panic!("exact stream read as float"),
        };
        prop_assert_eq!(&back, &d);
        verify_decomposition(&m, &back, 0.0).unwrap();
    }

    #[test]
    fn gaussian_matrices_round_trip(re in prop::collection::vec(-9i64..10, 4), im in prop::collection::vec(-3i64..4, 4), den in 1i64..5) {
        let m = DenseMatrix::from_fn(2, 2, |i, j| {
            G::new(Rational::new(re[2 * i + j], den).unwrap(), Rational::from(im[2 * i + j]))
        });
        match parse_toepmat(&write_toepmat(&m)).unwrap() {
            AnyMatrix::Exact(back) => prop_assert_eq!(back, m),
            AnyMatrix::Float(_) => prop_assert!(false),
        }
    }
}

#[test]
fn systems_and_bases_round_trip() {
    let a = DenseMatrix::diag(&[Rational::from(1), Rational::from(2), Rational::from(3)]);
    let sys = build_toeplitz_product_system(&a, 2).unwrap();
    let back = match parse_toepsys(&write_toepsys(&sys)).unwrap() {
        AnySystem::Rat(s) => s,
        AnySystem::GaussRat(_) => panic!("field changed"),
    };
    assert_eq!(back.generators, sys.generators);
    assert_eq!(back.ring.vars(), sys.ring.vars());

    let t = DenseMatrix::from_i64_rows(&[&[1, 2], &[0, 1]]).map(|v: &G| v.re.clone());
    let sys = build_toeplitz_product_system(&t, 2).unwrap();
    let gb = buchberger(&Ideal::from_system(&sys), &Budget::default()).unwrap();
    let (_, ring, polys) = parse_toepgb_rat(&write_toepgb(&gb)).unwrap();
    assert_eq!(ring.vars(), sys.ring.vars());
    assert_eq!(polys, gb.polys);
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_toepmat("toepmat v1 2 2 gaussrat\n1 2\n3 4/0\n").unwrap_err().to_string();
    assert!(err.contains("line 3"), "{err}");
    let err = parse_toepmat("toepmat v1 2 2 gaussrat\n1 2\n").unwrap_err().to_string();
    assert!(err.contains("line"), "{err}");
    let err = parse_toepdecomp("toepdecomp v1 2 1 false\ntoepmat v1 2 2 gaussrat\n1 2\n3 4\n", 0.0)
        .unwrap_err()
        .to_string();
    assert!(err.to_lowercase().contains("toeplitz"), "{err}");
}
