//! Exact scalars: arbitrary-precision rationals and Gaussian rationals `a + b i`.
//!
//! Both types are always kept in canonical form (reduced fraction, positive
//! denominator), so structural equality, hashing and ordering agree with the
//! mathematical ones.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An arbitrary-precision rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(&self.0 / &rhs.0))
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Best rational approximation of `x` with denominator at most `max_denom`,
    /// via the continued-fraction convergents of `x`.
    pub fn approximate(x: f64, max_denom: u64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let neg = x < 0.0;
        let mut v = x.abs();
        // convergents h/k
        let (mut h0, mut h1): (i128, i128) = (0, 1);
        let (mut k0, mut k1): (i128, i128) = (1, 0);
        for _ in 0..64 {
            let a = v.floor();
            if a > 1e18 {
                break;
            }
            let a_i = a as i128;
            let h2 = a_i * h1 + h0;
            let k2 = a_i * k1 + k0;
            if k2 > max_denom as i128 {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = v - a;
            if frac < 1e-15 {
                break;
            }
            v = 1.0 / frac;
        }
        if k1 == 0 {
            return None;
        }
        let r = Rational::new(BigInt::from(h1), BigInt::from(k1)).ok()?;
        Some(if neg { -r } else { r })
    }

    /// Parse `'-'? digits ('/' digits)?`. On failure returns the byte offset
    /// of the offending character.
    pub fn parse_token(s: &str) -> std::result::Result<Self, (usize, String)> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let neg = bytes.first() == Some(&b'-');
        if neg {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == start {
            return Err((pos, "expected digits".into()));
        }
        let numer: BigInt = s[start..pos].parse().map_err(|_| (start, "bad integer".to_string()))?;
        let denom = if pos < bytes.len() {
            if bytes[pos] != b'/' {
                return Err((pos, format!("unexpected character '{}'", bytes[pos] as char)));
            }
            pos += 1;
            let dstart = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == dstart {
                return Err((pos, "expected denominator digits".into()));
            }
            if pos < bytes.len() {
                return Err((pos, format!("unexpected character '{}'", bytes[pos] as char)));
            }
            let d: BigInt = s[dstart..pos].parse().map_err(|_| (dstart, "bad integer".to_string()))?;
            if d.is_zero() {
                return Err((dstart, "zero denominator".into()));
            }
            d
        } else {
            BigInt::one()
        };
        let r = Rational(BigRational::new(numer, denom));
        Ok(if neg { -r } else { r })
    }
}

/// `gcd` of numerators and `lcm` of denominators over a set of rationals.
pub(crate) fn content_parts<'a>(it: impl Iterator<Item = &'a Rational>) -> (BigInt, BigInt) {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for r in it {
        g = g.gcd(r.numer());
        l = l.lcm(r.denom());
    }
    (g, l)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Rational::parse_token(s).map_err(|(col, msg)| Error::parse(1, col + 1, msg))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b $ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: &'b $ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $body;
                f(self, rhs)
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Rational, Add, add, |a, b| Rational(&a.0 + &b.0));
forward_binop!(Rational, Sub, sub, |a, b| Rational(&a.0 - &b.0));
forward_binop!(Rational, Mul, mul, |a, b| Rational(&a.0 * &b.0));

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// An element `re + im·i` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(Rational::from_integer(v))
    }

    /// `p/q` as a real Gaussian rational. Panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> Self {
        Self::real(Rational::new(p, q).expect("nonzero denominator"))
    }

    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re² + im²`
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(GaussianRational {
            re: c.re.checked_div(&n)?,
            im: c.im.checked_div(&n)?,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Parse the scalar grammar `rat | rat ('+'|'-') rat 'i' | rat 'i'`.
    /// On failure returns the byte offset of the offending character.
    pub fn parse_token(s: &str) -> std::result::Result<Self, (usize, String)> {
        if s.is_empty() {
            return Err((0, "empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Rational::parse_token(s).map(Self::real);
        };
        let split = body
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(p, _)| p);
        match split {
            None => Rational::parse_token(body).map(|im| GaussianRational::new(Rational::zero(), im)),
            Some(p) => {
                let re = Rational::parse_token(&body[..p])?;
                let im = Rational::parse_token(&body[p + 1..]).map_err(|(o, m)| (o + p + 1, m))?;
                let im = if body.as_bytes()[p] == b'-' { -im } else { im };
                Ok(GaussianRational::new(re, im))
            }
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GaussianRational::parse_token(s).map_err(|(col, msg)| Error::parse(1, col + 1, msg))
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        GaussianRational::from_int(v)
    }
}

forward_binop!(GaussianRational, Add, add, |a, b| GaussianRational {
    re: &a.re + &b.re,
    im: &a.im + &b.im,
});
forward_binop!(GaussianRational, Sub, sub, |a, b| GaussianRational {
    re: &a.re - &b.re,
    im: &a.im - &b.im,
});
forward_binop!(GaussianRational, Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational::real(&a.re * &b.re);
    }
    GaussianRational {
        re: &a.re * &b.re - &a.im * &b.im,
        im: &a.re * &b.im + &a.im * &b.re,
    }
});

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn norm_identity() {
        assert_eq!(g("1+2i") * g("1-2i"), g("5"));
    }

    #[test]
    fn inverse_of_i() {
        assert_eq!(GaussianRational::i().inv().unwrap(), g("-1i"));
    }

    #[test]
    fn conjugate_sum() {
        assert_eq!(g("1/2+1/3i") + g("1/2-1/3i"), GaussianRational::one());
    }

    #[test]
    fn zero_division() {
        assert_eq!(GaussianRational::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(g("3").checked_div(&g("0")), Err(Error::DivisionByZero));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn grammar() {
        assert_eq!(g("-3/6"), GaussianRational::frac(-1, 2));
        assert_eq!(g("2i"), GaussianRational::new(Rational::zero(), 2.into()));
        assert_eq!(g("-1/2i").im, Rational::new(-1, 2).unwrap());
        assert_eq!(g("1+-2i"), g("1-2i"));
        assert_eq!(g("0/5"), GaussianRational::zero());
        for bad in ["", "i", "1/0", "1.5", "1 +2i", "+1", "1/", "3/4/5", "2+i"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "{bad:?} accepted");
        }
        let err = "12/x".parse::<GaussianRational>().unwrap_err();
        assert_eq!(err, Error::parse(1, 4, "expected denominator digits"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "-7", "3/4", "2i", "-1/3i", "1+2i", "-1/2-5/7i"] {
            assert_eq!(g(s).to_string(), s);
        }
    }

    #[test]
    fn approximation() {
        assert_eq!(Rational::approximate(0.5, 100).unwrap(), Rational::new(1, 2).unwrap());
        assert_eq!(
            Rational::approximate(-1.0 / 3.0 + 1e-13, 10_000).unwrap(),
            Rational::new(-1, 3).unwrap()
        );
        assert_eq!(Rational::approximate(6.0, 10).unwrap(), Rational::from_integer(6));
        assert!(Rational::approximate(f64::NAN, 10).is_none());
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| Rational::new(p, q).unwrap())
    }

    fn arb_g() -> impl Strategy<Value = GaussianRational> {
        (arb_rat(), arb_rat()).prop_map(|(a, b)| GaussianRational::new(a, b))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_g(), y in arb_g(), z in arb_g()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn canonical_equality(x in arb_g(), y in arb_g()) {
            prop_assert_eq!((&x - &y).is_zero(), x == y);
            prop_assert_eq!(x.to_string().parse::<GaussianRational>().unwrap(), x);
        }
    }
}
