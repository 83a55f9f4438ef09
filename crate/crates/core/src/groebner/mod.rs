//! Buchberger's algorithm over ℚ and ℚ(i), with algebraic elements adjoined
//! as extra variables, and the factorization decision built on it.

mod decide;
mod engine;

use std::fmt;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::polysys::{Coeff, FieldTag, MultiPoly, PolySystem, Ring};

pub use decide::{
    antisymmetric3, antisymmetric_rows, decide_ideal, decide_realified, decide_toeplitz_factorization, decide_with_adjunction, decision_of,
    realified_system,
    Decision, DecisionReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    DegRevLex,
    Lex,
}

impl OrderKind {
    pub fn name(self) -> &'static str {
        match self {
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::Lex => "lex",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "degrevlex" => Some(OrderKind::DegRevLex),
            "lex" => Some(OrderKind::Lex),
            _ => None,
        }
    }
}

/// Monomial order: a kind plus the variable ranking, `perm[0]` being the
/// most significant ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    pub kind: OrderKind,
    perm: Vec<usize>,
}

impl TermOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        TermOrder {
            kind,
            perm: (0..nvars).collect(),
        }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::new(OrderKind::DegRevLex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn with_permutation(kind: OrderKind, perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadParameter("variable ranking is not a permutation".into()));
            }
        }
        Ok(TermOrder { kind, perm })
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn nvars(&self) -> usize {
        self.perm.len()
    }

    /// Leading monomial of `p` under this order, as the exponent vector in
    /// ring variable order.
    pub fn leading_exponents<C: Coeff>(&self, p: &MultiPoly<C>) -> Option<Vec<u32>> {
        let t = engine::to_terms(p, self);
        t.first().map(|(m, _)| {
            let mut e = vec![0; self.perm.len()];
            for (pos, &v) in self.perm.iter().enumerate() {
                e[v] = m.e[pos];
            }
            e
        })
    }

    /// Terms of `p` in descending order.
    pub fn sorted<C: Coeff>(&self, p: &MultiPoly<C>) -> Vec<(Vec<u32>, C)> {
        engine::to_terms(p, self)
            .into_iter()
            .map(|(m, c)| {
                let mut e = vec![0; self.perm.len()];
                for (pos, &v) in self.perm.iter().enumerate() {
                    e[v] = m.e[pos];
                }
                (e, c)
            })
            .collect()
    }
}

/// Resource limits of one basis computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Reduction steps (one per leading-term cancellation).
    pub max_steps: u64,
    /// Largest S-pair lcm degree that will be processed.
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_degree: 24,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GbStats {
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub reduction_steps: u64,
    pub product_criterion: u64,
    pub chain_criterion: u64,
    pub max_degree_seen: u32,
    pub basis_size: usize,
    pub pending_pairs: usize,
}

impl fmt::Display for GbStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairs={} zero={} steps={} product={} chain={} maxdeg={} basis={} pending={}",
            self.pairs_reduced,
            self.zero_reductions,
            self.reduction_steps,
            self.product_criterion,
            self.chain_criterion,
            self.max_degree_seen,
            self.basis_size,
            self.pending_pairs
        )
    }
}

/// Generators, algebraic relations for adjoined elements, and term order.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal<C: Coeff> {
    ring: Arc<Ring>,
    generators: Vec<MultiPoly<C>>,
    adjunctions: Vec<MultiPoly<C>>,
    order: TermOrder,
}

impl<C: Coeff> Ideal<C> {
    /// Ideal of `generators` under degrevlex. Generators must share a ring.
    pub fn new(ring: &Arc<Ring>, generators: Vec<MultiPoly<C>>) -> Result<Self> {
        if generators.iter().any(|g| g.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators,
            adjunctions: Vec::new(),
            order: TermOrder::degrevlex(ring.nvars()),
        })
    }

    pub fn from_system(sys: &PolySystem<C>) -> Self {
        Ideal {
            ring: sys.ring.clone(),
            generators: sys.generators.clone(),
            adjunctions: Vec::new(),
            order: TermOrder::degrevlex(sys.ring.nvars()),
        }
    }

    pub fn with_order(mut self, order: TermOrder) -> Result<Self> {
        if order.nvars() != self.ring.nvars() {
            return Err(Error::DimensionMismatch("order ranks a different number of variables".into()));
        }
        self.order = order;
        Ok(self)
    }

    /// Adds the minimal polynomial of an adjoined element. It must be monic,
    /// univariate in a variable no generator-side relation already uses, and
    /// irreducible (checked for degrees 1 and 2 over ℚ, degree 1 over ℚ(i)).
    pub fn with_adjunction(mut self, rel: MultiPoly<C>) -> Result<Self> {
        if rel.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let vars: Vec<usize> = (0..self.ring.nvars())
            .filter(|&v| rel.terms().any(|(m, _)| m.exponents()[v] > 0))
            .collect();
        if vars.len() != 1 {
            return Err(Error::BadParameter("adjunction relation must be univariate".into()));
        }
        let v = vars[0];
        if self
            .adjunctions
            .iter()
            .any(|a| a.terms().any(|(m, _)| m.exponents()[v] > 0))
        {
            return Err(Error::BadParameter(format!("variable {} is already adjoined", self.ring.vars()[v])));
        }
        let deg = rel.total_degree().unwrap_or(0);
        let coeff_of = |k: u32| -> C {
            rel.terms()
                .find(|(m, _)| m.exponents()[v] == k)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(C::zero)
        };
        if deg == 0 || coeff_of(deg) != C::one() {
            return Err(Error::BadParameter("adjunction relation must be monic of positive degree".into()));
        }
        match (deg, C::FIELD) {
            (1, _) => {}
            (2, FieldTag::Rat) => {
                let (b, c) = (coeff_of(1), coeff_of(0));
                let disc = b.clone() * b - C::from_i64(4) * c;
                if is_rational_square(&disc) {
                    return Err(Error::BadParameter("adjunction relation is reducible".into()));
                }
            }
            _ => {
                return Err(Error::BadParameter(
                    "irreducibility can only be checked for quadratics over rat".into(),
                ))
            }
        }
        self.adjunctions.push(rel);
        Ok(self)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly<C>] {
        &self.generators
    }

    pub fn adjunctions(&self) -> &[MultiPoly<C>] {
        &self.adjunctions
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }
}

fn is_rational_square<C: Coeff>(v: &C) -> bool {
    let Some(r) = v.as_rational() else {
        return false;
    };
    let sq = |x: &num_bigint::BigInt| {
        if x.sign() == num_bigint::Sign::Minus {
            return false;
        }
        let s = x.sqrt();
        &s * &s == *x
    };
    sq(r.numer()) && sq(r.denom())
}

/// Reduced Gröbner basis: interreduced, monic, sorted by descending leading
/// monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<C: Coeff> {
    pub ring: Arc<Ring>,
    pub order: TermOrder,
    pub polys: Vec<MultiPoly<C>>,
    pub stats: GbStats,
}

impl<C: Coeff> GroebnerBasis<C> {
    pub fn contains_one(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_unit()
    }

    pub fn reduce(&self, p: &MultiPoly<C>) -> MultiPoly<C> {
        normal_form(p, &self.polys, &self.order)
    }

    pub fn is_member(&self, p: &MultiPoly<C>) -> bool {
        self.reduce(p).is_zero()
    }
}

/// Budget ran out; `partial` generates a subideal (every element lies in
/// the input ideal).
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetExceeded<C: Coeff> {
    pub partial: Vec<MultiPoly<C>>,
    pub stats: GbStats,
}

impl<C: Coeff> fmt::Display for BudgetExceeded<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "budget exceeded ({})", self.stats)
    }
}

/// Remainder of `p` under multivariate division by `basis`: no term of the
/// result is divisible by a leading monomial of `basis`.
pub fn normal_form<C: Coeff>(p: &MultiPoly<C>, basis: &[MultiPoly<C>], order: &TermOrder) -> MultiPoly<C> {
    let bs: Vec<engine::Terms<C>> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| engine::to_terms(g, order))
        .collect();
    let refs: Vec<&engine::Terms<C>> = bs.iter().collect();
    let r = engine::reduce(order.kind, engine::to_terms(p, order), &refs, None).expect("no limit");
    engine::from_terms(&r, p, order)
}

/// Reduced Gröbner basis of the ideal, relations included.
pub fn buchberger<C: Coeff>(ideal: &Ideal<C>, budget: &Budget) -> std::result::Result<GroebnerBasis<C>, BudgetExceeded<C>> {
    let order = &ideal.order;
    let template = MultiPoly::zero(&ideal.ring);
    let inputs: Vec<engine::Terms<C>> = ideal
        .adjunctions
        .iter()
        .chain(&ideal.generators)
        .filter(|g| !g.is_zero())
        .map(|g| engine::to_terms(g, order))
        .collect();
    if inputs.is_empty() {
        return Ok(GroebnerBasis {
            ring: ideal.ring.clone(),
            order: order.clone(),
            polys: Vec::new(),
            stats: GbStats::default(),
        });
    }
    let (outcome, stats) = engine::Engine::new(order.kind).run(inputs, budget);
    let back = |v: Vec<engine::Terms<C>>| v.iter().map(|t| engine::from_terms(t, &template, order)).collect();
    match outcome {
        engine::Outcome::Done(g) => Ok(GroebnerBasis {
            ring: ideal.ring.clone(),
            order: order.clone(),
            polys: back(g),
            stats,
        }),
        engine::Outcome::OverBudget(g) => Err(BudgetExceeded { partial: back(g), stats }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{GaussianRational, Rational};
    use proptest::prelude::*;

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(vars.iter().map(|s| s.to_string()).collect(), FieldTag::Rat).unwrap()
    }

    fn p(r: &Arc<Ring>, s: &str) -> MultiPoly<Rational> {
        MultiPoly::parse_expr(r, s).unwrap()
    }

    fn gb(r: &Arc<Ring>, gens: &[&str]) -> GroebnerBasis<Rational> {
        let ideal = Ideal::new(r, gens.iter().map(|g| p(r, g)).collect()).unwrap();
        buchberger(&ideal, &Budget::default()).unwrap()
    }

    #[test]
    fn division_examples() {
        let r = ring(&["x", "y"]);
        let o = TermOrder::degrevlex(2);
        assert!(normal_form(&p(&r, "x^2"), &[p(&r, "x")], &o).is_zero());
        assert_eq!(normal_form(&p(&r, "x^2 + y"), &[p(&r, "x")], &o), p(&r, "y"));
    }

    #[test]
    fn small_bases() {
        let r = ring(&["x", "y"]);
        assert_eq!(gb(&r, &["x", "y"]).polys, vec![p(&r, "x"), p(&r, "y")]);
        assert_eq!(gb(&r, &["x^2 - 1", "x - 1"]).polys, vec![p(&r, "x - 1")]);
        assert!(gb(&r, &["x*y - 1", "y"]).contains_one());
    }

    #[test]
    fn lex_elimination() {
        let r = ring(&["x", "y"]);
        let ideal = Ideal::new(&r, vec![p(&r, "x^2 + y^2 - 1"), p(&r, "x - y")])
            .unwrap()
            .with_order(TermOrder::lex(2))
            .unwrap();
        let g = buchberger(&ideal, &Budget::default()).unwrap();
        assert_eq!(g.polys, vec![p(&r, "x - y"), p(&r, "y^2 - 1/2")]);
        // ranking y above x eliminates y instead
        let ideal = ideal.with_order(TermOrder::with_permutation(OrderKind::Lex, vec![1, 0]).unwrap()).unwrap();
        let g = buchberger(&ideal, &Budget::default()).unwrap();
        assert_eq!(g.polys, vec![p(&r, "y - x"), p(&r, "x^2 - 1/2")]);
    }

    #[test]
    fn reduction_of_first_generator() {
        let sys = crate::polysys::diagonal_system3().unwrap();
        let r = &sys.ring;
        let o = TermOrder::degrevlex(r.nvars());
        let p1 = sys.generators[0].substitute_values(&[("d", Rational::one())]).unwrap();
        let basis = [p(r, "a2"), p(r, "b2"), p(r, "a3*b1 + a4*b0 - 1")];
        assert!(normal_form(&p1, &basis, &o).is_zero());
    }

    #[test]
    fn adjunction_checks() {
        let r = ring(&["x", "w"]);
        let base = Ideal::new(&r, vec![p(&r, "x")]).unwrap();
        assert!(base.clone().with_adjunction(p(&r, "w^2 + 3")).is_ok());
        assert!(base.clone().with_adjunction(p(&r, "w^2 - 4")).is_err());
        assert!(base.clone().with_adjunction(p(&r, "2*w^2 + 3")).is_err());
        assert!(base.clone().with_adjunction(p(&r, "w*x + 1")).is_err());
        assert!(base.with_adjunction(p(&r, "w^2 - 2")).is_ok());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let a = crate::matrices::DenseMatrix::diag(&[Rational::from(1), Rational::from(2), Rational::from(3)]);
        let sys = crate::polysys::build_toeplitz_product_system(&a, 2).unwrap();
        let ideal = Ideal::from_system(&sys);
        let e = buchberger(&ideal, &Budget { max_steps: 20, max_degree: 24 }).unwrap_err();
        assert!(e.stats.reduction_steps > 20);
        assert!(!e.partial.is_empty());
        let full = buchberger(&ideal, &Budget::default()).unwrap();
        assert!(full.contains_one());
        let low = buchberger(&ideal, &Budget { max_steps: 1_000_000, max_degree: 2 }).unwrap_err();
        assert!(low.stats.pending_pairs > 0);
    }

    #[test]
    fn gaussian_coefficients() {
        let r = Ring::new(vec!["x".into()], FieldTag::GaussRat).unwrap();
        let f = MultiPoly::<GaussianRational>::parse_expr(&r, "x^2 + 1").unwrap();
        let g = MultiPoly::<GaussianRational>::parse_expr(&r, "x - i").unwrap();
        let b = buchberger(&Ideal::new(&r, vec![f, g.clone()]).unwrap(), &Budget::default()).unwrap();
        assert_eq!(b.polys, vec![g]);
    }

    fn small_poly(r: &Arc<Ring>, terms: &[(u32, u32, i64)]) -> MultiPoly<Rational> {
        MultiPoly::from_terms(
            r,
            terms
                .iter()
                .map(|&(a, b, c)| (crate::polysys::Monomial::from_exponents(vec![a, b, 0]), Rational::from(c))),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn basis_invariants(
            gens in prop::collection::vec(prop::collection::vec((0u32..3, 0u32..3, -3i64..4), 1..4), 1..4),
            lex in any::<bool>(),
        ) {
            let r = ring(&["x", "y", "z"]);
            let polys: Vec<_> = gens.iter().map(|t| small_poly(&r, t)).collect();
            let order = if lex { TermOrder::lex(3) } else { TermOrder::degrevlex(3) };
            let ideal = Ideal::new(&r, polys.clone()).unwrap().with_order(order.clone()).unwrap();
            let g = buchberger(&ideal, &Budget::default()).unwrap();
            for q in &polys {
                prop_assert!(g.reduce(q).is_zero());
            }
            // idempotence
            let again = buchberger(&Ideal::new(&r, g.polys.clone()).unwrap().with_order(order).unwrap(), &Budget::default()).unwrap();
            prop_assert_eq!(&again.polys, &g.polys);
            // S-polynomials reduce to zero
            for a in 0..g.polys.len() {
                for b in a + 1..g.polys.len() {
                    let la = crate::polysys::Monomial::from_exponents(g.order.leading_exponents(&g.polys[a]).unwrap());
                    let lb = crate::polysys::Monomial::from_exponents(g.order.leading_exponents(&g.polys[b]).unwrap());
                    let l = la.lcm(&lb);
                    let s = g.polys[a].mul_term(&la.quotient_of(&l).unwrap(), &Rational::one())
                        .sub(&g.polys[b].mul_term(&lb.quotient_of(&l).unwrap(), &Rational::one())).unwrap();
                    prop_assert!(g.reduce(&s).is_zero());
                }
            }
        }
    }
}
