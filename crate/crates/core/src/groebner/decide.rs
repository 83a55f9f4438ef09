use std::fmt;
use std::ops::Neg;
use std::sync::Arc;

use super::{buchberger, BudgetExceeded, Budget, GbStats, GroebnerBasis, Ideal};
use crate::error::Result;
use crate::exactnum::{GaussianRational, Rational};
use crate::matrices::DenseMatrix;
use crate::polysys::{build_parametric_system, build_toeplitz_product_system, Coeff, FieldTag, MultiPoly, PolySystem, Ring};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    /// The ideal is proper, so the system has a complex solution.
    Factorizable,
    /// 1 lies in the ideal.
    NotFactorizable,
    /// The budget ran out first.
    Inconclusive,
}

impl Decision {
    pub fn name(self) -> &'static str {
        match self {
            Decision::Factorizable => "factorizable",
            Decision::NotFactorizable => "not-factorizable",
            Decision::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Factorizable => 0,
            Decision::NotFactorizable => 1,
            Decision::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionReport {
    pub decision: Decision,
    /// Coefficient field the computation ran over ("rat" or "gaussrat").
    pub field: &'static str,
    pub adjoined: Vec<String>,
    pub stats: GbStats,
}

/// NotFactorizable when 1 is in the (possibly partial) basis, Factorizable
/// for a completed proper basis, Inconclusive otherwise.
pub fn decision_of<C: Coeff>(r: &std::result::Result<GroebnerBasis<C>, BudgetExceeded<C>>) -> Decision {
    match r {
        Ok(gb) if gb.contains_one() => Decision::NotFactorizable,
        Ok(_) => Decision::Factorizable,
        Err(e) if e.partial.iter().any(|p| p.is_unit()) => Decision::NotFactorizable,
        Err(_) => Decision::Inconclusive,
    }
}

/// Decision for an arbitrary ideal: 1 in the basis, proper, or out of budget.
pub fn decide_ideal<C: Coeff>(ideal: &Ideal<C>, budget: &Budget) -> DecisionReport {
    let r = buchberger(ideal, budget);
    DecisionReport {
        decision: decision_of(&r),
        field: C::FIELD.name(),
        adjoined: ideal.adjunctions().iter().map(|a| a.to_string()).collect(),
        stats: match &r {
            Ok(gb) => gb.stats,
            Err(e) => e.stats,
        },
    }
}

/// Whether `a` is a product of `s` Toeplitz matrices over ℂ. Real input runs
/// over ℚ, anything else natively over ℚ(i).
pub fn decide_toeplitz_factorization(
    a: &DenseMatrix<GaussianRational>,
    s: usize,
    budget: &Budget,
) -> Result<DecisionReport> {
    if a.entries().iter().all(|v| v.is_real()) {
        let real = a.map(|v| v.re.clone());
        let sys = build_toeplitz_product_system::<Rational>(&real, s)?;
        Ok(decide_ideal(&Ideal::from_system(&sys), budget))
    } else {
        let sys = build_toeplitz_product_system::<GaussianRational>(a, s)?;
        Ok(decide_ideal(&Ideal::from_system(&sys), budget))
    }
}

/// System of `a = T_1 ⋯ T_s` over ℚ with `i` replaced by a fresh last
/// variable `z`, together with the relation `z² + 1`.
pub fn realified_system(a: &DenseMatrix<GaussianRational>, s: usize) -> Result<(PolySystem<Rational>, MultiPoly<Rational>)> {
    let params = Ring::new(vec!["z".into()], FieldTag::Rat)?;
    let z = MultiPoly::<Rational>::var(&params, "z")?;
    let entries: Vec<Vec<MultiPoly<Rational>>> = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    let v = a.get(i, j);
                    MultiPoly::constant(&params, v.re.clone()).add(&z.scale(&v.im)).expect("same ring")
                })
                .collect()
        })
        .collect();
    let sys = build_parametric_system(&entries, s)?;
    let rel = MultiPoly::parse_expr(&sys.ring, "z^2 + 1")?;
    Ok((sys, rel))
}

/// Same decision over ℚ with `i` replaced by a fresh variable `z` subject
/// to `z² + 1 = 0`.
pub fn decide_realified(a: &DenseMatrix<GaussianRational>, s: usize, budget: &Budget) -> Result<DecisionReport> {
    let (sys, rel) = realified_system(a, s)?;
    let ideal = Ideal::from_system(&sys).with_adjunction(rel)?;
    Ok(decide_ideal(&ideal, budget))
}

/// Decision for a target whose entries are polynomials in adjoined
/// algebraic elements, each given by its minimal polynomial in `relations`
/// (all in the ring of the entries).
pub fn decide_with_adjunction<C: Coeff>(
    entries: &[Vec<MultiPoly<C>>],
    s: usize,
    relations: &[MultiPoly<C>],
    budget: &Budget,
) -> Result<DecisionReport> {
    let sys = build_parametric_system(entries, s)?;
    let ring: &Arc<Ring> = &sys.ring;
    let mut ideal = Ideal::from_system(&sys);
    for r in relations {
        ideal = ideal.with_adjunction(r.embed(ring)?)?;
    }
    Ok(decide_ideal(&ideal, budget))
}

/// Rows of `[[0, d, e], [-d, 0, f], [-e, -f, 0]]`.
pub fn antisymmetric_rows<T: Clone + Neg<Output = T>>(d: T, e: T, f: T, zero: T) -> Vec<Vec<T>> {
    vec![
        vec![zero.clone(), d.clone(), e.clone()],
        vec![-d, zero.clone(), f.clone()],
        vec![-e, -f, zero],
    ]
}

pub fn antisymmetric3<S: Scalar>(d: S, e: S, f: S) -> DenseMatrix<S> {
    DenseMatrix::from_rows(antisymmetric_rows(d, e, f, S::zero())).expect("square")
}
