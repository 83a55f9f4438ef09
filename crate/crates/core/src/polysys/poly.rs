use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, Rational};
use crate::scalar::Scalar;

/// Coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rat,
    GaussRat,
}

impl FieldTag {
    pub fn name(self) -> &'static str {
        match self {
            FieldTag::Rat => "rat",
            FieldTag::GaussRat => "gaussrat",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "rat" => Some(FieldTag::Rat),
            "gaussrat" => Some(FieldTag::GaussRat),
            _ => None,
        }
    }
}

/// Exact coefficient field for [`MultiPoly`].
pub trait Coeff: Scalar {
    const FIELD: FieldTag;

    fn parse_coeff(s: &str) -> std::result::Result<Self, (usize, String)>;

    /// The imaginary unit, when the field has one.
    fn imaginary_unit() -> Option<Self>;

    fn from_rational(r: &Rational) -> Self;

    /// The value as a rational, when it is real.
    fn as_rational(&self) -> Option<Rational>;

    /// Factor that makes a coefficient list canonical up to units: primitive
    /// integer content with positive leading coefficient over ℚ, monic over
    /// ℚ(i). `coeffs` is nonempty and leads with the leading coefficient.
    fn content_normalizer(coeffs: &[&Self]) -> Self;
}

impl Coeff for Rational {
    const FIELD: FieldTag = FieldTag::Rat;

    fn parse_coeff(s: &str) -> std::result::Result<Self, (usize, String)> {
        Rational::parse_token(s)
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn content_normalizer(coeffs: &[&Self]) -> Self {
        let (g, l) = crate::exactnum::content_parts(coeffs.iter().copied());
        let mut f = Rational::new(l, g).expect("nonzero content");
        if coeffs[0].is_negative() {
            f = -f;
        }
        f
    }
}

impl Coeff for GaussianRational {
    const FIELD: FieldTag = FieldTag::GaussRat;

    fn parse_coeff(s: &str) -> std::result::Result<Self, (usize, String)> {
        GaussianRational::parse_token(s)
    }

    fn imaginary_unit() -> Option<Self> {
        Some(GaussianRational::i())
    }

    fn from_rational(r: &Rational) -> Self {
        GaussianRational::real(r.clone())
    }

    fn as_rational(&self) -> Option<Rational> {
        self.is_real().then(|| self.re.clone())
    }

    fn content_normalizer(coeffs: &[&Self]) -> Self {
        coeffs[0].inv().expect("nonzero leading coefficient")
    }
}

/// Ordered variable names plus coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    field: FieldTag,
}

impl Ring {
    pub fn new(vars: Vec<String>, field: FieldTag) -> Result<Arc<Self>> {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::BadParameter(format!("invalid variable name {v:?}")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::BadParameter(format!("duplicate variable {v}")));
            }
        }
        Ok(Arc::new(Ring { vars, field }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Exponent vector; derived `Ord` is plain lexicographic on the vector and is
/// only used for map storage.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn var(nvars: usize, idx: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = exp;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Graded reverse lexicographic comparison with variables in ring order.
pub fn degrevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.0.iter().zip(&b.0).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Sparse polynomial: no stored zero coefficients.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C> {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        debug_assert_eq!(ring.field, C::FIELD);
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: C) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let idx = ring
            .index_of(name)
            .ok_or_else(|| Error::BadParameter(format!("unknown variable {name}")))?;
        Ok(Self::from_terms(ring, vec![(Monomial::var(ring.nvars(), idx, 1), C::one())]))
    }

    pub fn var_index(ring: &Arc<Ring>, idx: usize) -> Self {
        Self::from_terms(ring, vec![(Monomial::var(ring.nvars(), idx, 1), C::one())])
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.nvars(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().is_some_and(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    /// Terms in descending degrevlex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &C)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| degrevlex_cmp(b.0, a.0));
        t
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.ring, C::one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            terms: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(k, v)| (k.mul(m), v.clone() * c.clone())).collect()
            },
        }
    }

    /// Evaluates at `point` (one value per ring variable).
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Replaces variable `name` by `value` (a polynomial in the same ring).
    pub fn substitute(&self, name: &str, value: &Self) -> Result<Self> {
        self.same_ring(value)?;
        let idx = self
            .ring
            .index_of(name)
            .ok_or_else(|| Error::BadParameter(format!("unknown variable {name}")))?;
        let mut out = Self::zero(&self.ring);
        let mut powers = vec![Self::constant(&self.ring, C::one())];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            while powers.len() <= e {
                let next = powers.last().expect("nonempty").mul(value)?;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[idx] = 0;
            let part = powers[e].mul_term(&rest, c);
            out = out.add(&part)?;
        }
        Ok(out)
    }

    /// Substitutes constants for several variables at once.
    pub fn substitute_values(&self, values: &[(&str, C)]) -> Result<Self> {
        let mut out = self.clone();
        for (name, v) in values {
            out = out.substitute(name, &Self::constant(&self.ring, v.clone()))?;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Self> {
        let map: Vec<usize> = self
            .ring
            .vars
            .iter()
            .map(|v| target.index_of(v).ok_or(Error::RingMismatch))
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.nvars()];
            for (k, &x) in m.0.iter().enumerate() {
                e[map[k]] = x;
            }
            (Monomial(e), c.clone())
        });
        Ok(Self::from_terms(target, terms))
    }

    /// Canonical associate: primitive integer content over ℚ, monic over ℚ(i).
    pub fn normalized(&self) -> Self {
        let sorted = self.sorted_terms();
        if sorted.is_empty() {
            return self.clone();
        }
        let coeffs: Vec<&C> = sorted.iter().map(|(_, c)| *c).collect();
        self.scale(&C::content_normalizer(&coeffs))
    }

    /// Parses an arithmetic expression over the ring's variables: integers,
    /// fractions `p/q` as literals, `+ - *`, `^` with a nonnegative integer
    /// exponent, parentheses, and `i` or `I` for the imaginary unit when the
    /// field has one and no variable of that name exists.
    pub fn parse_expr(ring: &Arc<Ring>, src: &str) -> Result<Self> {
        let mut p = ExprParser {
            ring,
            src: src.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(1, p.pos + 1, "unexpected trailing input"));
        }
        Ok(v)
    }
}

struct ExprParser<'a> {
    ring: &'a Arc<Ring>,
    src: &'a [u8],
    pos: usize,
}

impl<C: Coeff> MultiPoly<C> {
    fn sum_or_err(a: Self, b: Self, neg: bool) -> Result<Self> {
        if neg {
            a.sub(&b)
        } else {
            a.add(&b)
        }
    }
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::parse(1, self.pos + 1, msg))
    }

    fn expr<C: Coeff>(&mut self) -> Result<MultiPoly<C>> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = MultiPoly::sum_or_err(acc, rhs, op == b'-')?;
        }
        Ok(acc)
    }

    fn term<C: Coeff>(&mut self) -> Result<MultiPoly<C>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = acc.mul(&rhs)?;
        }
        Ok(acc)
    }

    fn factor<C: Coeff>(&mut self) -> Result<MultiPoly<C>> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor::<C>()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .map_or_else(|| self.err("expected exponent"), Ok)?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom<C: Coeff>(&mut self) -> Result<MultiPoly<C>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/') {
                    self.pos += 1;
                }
                let tok = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let r = Rational::parse_token(tok).map_err(|(off, msg)| Error::parse(1, start + off + 1, msg))?;
                Ok(MultiPoly::constant(self.ring, C::from_rational(&r)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if let Some(idx) = self.ring.index_of(name) {
                    return Ok(MultiPoly::var_index(self.ring, idx));
                }
                match (name, C::imaginary_unit()) {
                    ("i" | "I", Some(u)) => Ok(MultiPoly::constant(self.ring, u)),
                    _ => Err(Error::parse(1, start + 1, format!("unknown variable {name}"))),
                }
            }
            _ => self.err("expected number, variable or '('"),
        }
    }
}

impl<C: Coeff> std::ops::Neg for MultiPoly<C> {
    type Output = Self;

    fn neg(self) -> Self {
        MultiPoly::neg(&self)
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    /// Line grammar of the polynomial file formats: terms in descending
    /// degrevlex order joined by ` + `, each `<scalar>*<var>^<e>*…`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in self.ring.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussianRational as G;
    use proptest::prelude::*;

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(vars.iter().map(|s| s.to_string()).collect(), FieldTag::Rat).unwrap()
    }

    fn p(r: &Arc<Ring>, s: &str) -> MultiPoly<Rational> {
        MultiPoly::parse_expr(r, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(&["x", "y"]);
        let prod = p(&r, "x+y").mul(&p(&r, "x-y")).unwrap();
        assert_eq!(prod, p(&r, "x^2-y^2"));
        assert_eq!(prod.to_string(), "1*x^2 + -1*y^2");
    }

    #[test]
    fn substitution_into_certificate_factor() {
        let r = ring(&["d", "e", "f"]);
        let q = p(&r, "e*(d-e)*(f-d)*(f-e)");
        let v = q
            .substitute_values(&[("d", Rational::from(1)), ("e", Rational::from(2)), ("f", Rational::from(3))])
            .unwrap();
        assert_eq!(v, MultiPoly::constant(&r, Rational::from(-4)));
        assert_eq!(q.eval(&[1.into(), 2.into(), 3.into()]).unwrap(), Rational::from(-4));
    }

    #[test]
    fn ring_mismatch() {
        let a = ring(&["x"]);
        let b = ring(&["y"]);
        assert_eq!(p(&a, "x").add(&p(&b, "y")).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn display_grammar() {
        let r = ring(&["x1_0", "x1_1"]);
        assert_eq!(p(&r, "3*x1_0^2*x1_1 - 1/2*x1_1 + 7").to_string(), "3*x1_0^2*x1_1 + -1/2*x1_1 + 7");
        assert_eq!(MultiPoly::<Rational>::zero(&r).to_string(), "0");
        let g = Ring::new(vec!["z".into()], FieldTag::GaussRat).unwrap();
        let q: MultiPoly<G> = MultiPoly::parse_expr(&g, "(1+2*i)*z - i").unwrap();
        assert_eq!(q.to_string(), "1+2i*z + -1i");
    }

    #[test]
    fn normalization() {
        let r = ring(&["x", "y"]);
        assert_eq!(p(&r, "-1/2*x + 3/4*y").normalized(), p(&r, "2*x - 3*y"));
        let g = Ring::new(vec!["x".into()], FieldTag::GaussRat).unwrap();
        let q: MultiPoly<G> = MultiPoly::parse_expr(&g, "2*i*x + 2").unwrap();
        assert_eq!(q.normalized(), MultiPoly::parse_expr(&g, "x - i").unwrap());
    }

    #[test]
    fn parse_errors_have_columns() {
        let r = ring(&["x"]);
        assert_eq!(
            MultiPoly::<Rational>::parse_expr(&r, "x + y").unwrap_err(),
            Error::parse(1, 5, "unknown variable y")
        );
        assert!(MultiPoly::<Rational>::parse_expr(&r, "(x").is_err());
        assert!(MultiPoly::<Rational>::parse_expr(&r, "i").is_err());
    }

    #[test]
    fn degrevlex_ties() {
        // x > y > z; x*z < y^2 in degrevlex
        let xz = Monomial::from_exponents(vec![1, 0, 1]);
        let yy = Monomial::from_exponents(vec![0, 2, 0]);
        assert_eq!(degrevlex_cmp(&xz, &yy), Ordering::Less);
    }

    proptest! {
        #[test]
        fn ring_axioms(a in prop::collection::vec(-3i64..4, 6), b in prop::collection::vec(-3i64..4, 6), c in prop::collection::vec(-3i64..4, 6)) {
            let r = ring(&["x", "y"]);
            let mk = |v: &[i64]| p(&r, &format!("{}*x^2 + {}*x*y + {}*y + {}*x + {} + {}*y^3", v[0], v[1], v[2], v[3], v[4], v[5]).replace("+ -", "- "));
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert!(a.sub(&a).unwrap().is_zero());
        }
    }
}
