use toepfactor::exactnum::GaussianRational as G;
use toepfactor::factorize::{decompose, verify_decomposition};
use toepfactor::matrices::DenseMatrix;

fn all_matrices(vals: &[i64]) -> impl Iterator<Item = DenseMatrix<G>> + '_ {
    let k = vals.len();
    (0..k.pow(9)).map(move |mut code| {
        DenseMatrix::from_fn(3, 3, |_, _| {
            let v = vals[code % k];
            code /= k;
            G::from_int(v)
        })
    })
}

#[test]
fn every_singular_3x3_with_unit_entries_needs_at_most_four_factors() {
    let mut seen = [0usize; 4];
    for m in all_matrices(&[-1, 0, 1]) {
        let rank = m.rank();
        if rank == 3 && !m.is_diagonal() {
            continue;
        }
        let (d, report) = decompose(&m).unwrap_or_else(|e| panic!("{m}: {e}"));
        assert!(d.prefix.is_none());
        assert!(d.factors.len() <= 4, "{m} used {}", d.factors.len());
        assert!(report.factors_used <= report.known_upper_bound);
        verify_decomposition(&m, &d, 0.0).unwrap();
        seen[rank] += 1;
    }
    assert!(seen[2] > 5_000, "{seen:?}");
}
