//! Dense univariate polynomials over the rationals.

mod factor;
mod matrix;
mod modp;
mod roots;
mod sturm;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use factor::{irreducibility_certificate, rational_roots, Certificate, IrreducibleWitness};
pub use matrix::PolyMatrix;
pub use roots::{complex_roots, ComplexRoot, ComplexRootSet, Quadrant};
pub use sturm::{refine_root, sturm_count, sturm_real_roots, RootIsolation};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ZeroModulus: reduction modulo the zero polynomial")]
    ZeroModulus,
    #[error("ZeroPolynomial: operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("RepeatedRoots: polynomial is not square-free")]
    RepeatedRoots,
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("bad polynomial {0:?}")]
    BadPolynomial(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Q, PolyError> {
    let s = s.trim();
    let bad = || PolyError::BadCoefficient(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Polynomial with exact rational coefficients, index i holding the coefficient of z^i.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Q>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Q, deg: usize) -> Self {
        let mut v = vec![Q::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| q(c)).collect())
    }

    pub fn from_bigints(cs: &[BigInt]) -> Self {
        Self::new(cs.iter().map(|c| Q::from_integer(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Q::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs: v }
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates at another polynomial: self(g).
    pub fn compose(&self, g: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &RatPoly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = RatPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of the value at x (-1, 0, 1).
    pub fn sign_at(&self, x: &Q) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sign of the leading term as x → +∞ (or −∞).
    pub fn sign_at_infinity(&self, negative: bool) -> i32 {
        let Some(d) = self.degree() else { return 0 };
        let s = if self.lead().is_positive() { 1 } else { -1 };
        if negative && d % 2 == 1 {
            -s
        } else {
            s
        }
    }

    pub fn div_rem(&self, m: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        let dm = m.degree().ok_or(PolyError::ZeroModulus)?;
        let mut rem = self.coeffs.clone();
        let lead_inv = m.lead().recip();
        let n = rem.len();
        if n <= dm {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![Q::zero(); n - dm];
        for i in (dm..n).rev() {
            let c = &rem[i] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, mc) in m.coeffs.iter().enumerate() {
                let t = &c * mc;
                rem[i - dm + j] -= t;
            }
            quot[i - dm] = c;
        }
        rem.truncate(dm);
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, m: &RatPoly) -> Option<RatPoly> {
        let (quo, rem) = self.div_rem(m).ok()?;
        rem.is_zero().then_some(quo)
    }

    pub fn divides(&self, other: &RatPoly) -> bool {
        other.exact_div(self).is_some()
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s·self + t·other = g, g monic.
    pub fn xgcd(&self, other: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (RatPoly::one(), RatPoly::zero());
        let (mut t0, mut t1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (quo, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&quo * &s1);
            let t = &t0 - &(&quo * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lead().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    /// Resultant via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &RatPoly) -> Q {
        let (Some(mut da), Some(mut db)) = (self.degree(), other.degree()) else { return Q::zero() };
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = Q::one();
        loop {
            if db == 0 {
                let lb = b.lead();
                let mut p = Q::one();
                for _ in 0..da {
                    p *= &lb;
                }
                return acc * p;
            }
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            let Some(dr) = r.degree() else { return Q::zero() };
            let lb = b.lead();
            for _ in 0..(da - dr) {
                acc *= &lb;
            }
            a = b;
            b = r;
            da = db;
            db = dr;
        }
    }

    pub fn discriminant(&self) -> Q {
        let Some(n) = self.degree() else { return Q::zero() };
        let r = self.resultant(&self.derivative()) / self.lead();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    pub fn is_square_free(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn square_free_part(&self) -> RatPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Least common multiple of denominators times the polynomial, then divided by the content:
    /// the primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        for c in ints.iter_mut() {
            *c = &*c / &content * &sign;
        }
        ints
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, PolyError> {
        let coeffs = items.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }

    /// Formats with a chosen variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one();
            if !unit || i == 0 {
                out.push_str(&mag.to_string());
                if i > 0 {
                    out.push('*');
                }
            }
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{i}")),
            }
        }
        out
    }
}

/// Reduces `a` modulo `m`, returning the remainder of degree below deg m.
pub fn poly_reduce_mod(a: &RatPoly, m: &RatPoly) -> Result<RatPoly, PolyError> {
    Ok(a.div_rem(m)?.1)
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("z"))
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<serde_json::Value>::deserialize(d)?;
        let strs: Vec<String> = items
            .into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => Ok(s),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                other => Err(serde::de::Error::custom(format!("bad coefficient {other}"))),
            })
            .collect::<Result<_, _>>()?;
        RatPoly::from_strings(&strs).map_err(serde::de::Error::custom)
    }
}

/// Parses sums of terms like `-3x^2`, `5*z`, `1/2`, in either variable `x` or `z`.
impl FromStr for RatPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let bad = || PolyError::BadPolynomial(s.to_string());
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad());
        }
        let mut coeffs: Vec<Q> = Vec::new();
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in text.char_indices() {
            if (c == '+' || c == '-') && i > 0 && !text[..i].ends_with('^') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            let (coef, deg) = match body.find(['x', 'z']) {
                None => (parse_rational(body).map_err(|_| bad())?, 0usize),
                Some(at) => {
                    let c = body[..at].trim_end_matches('*');
                    let c = if c.is_empty() { Q::one() } else { parse_rational(c).map_err(|_| bad())? };
                    let rest = &body[at + 1..];
                    let d = match rest.strip_prefix('^') {
                        Some(e) => e.parse().map_err(|_| bad())?,
                        None if rest.is_empty() => 1,
                        None => return Err(bad()),
                    };
                    (c, d)
                }
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Q::zero());
            }
            coeffs[deg] += if neg { -coef } else { coef };
        }
        Ok(RatPoly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultants_and_discriminants() {
        assert_eq!(RatPoly::from_ints(&[1, 0, 1]).discriminant(), q(-4));
        assert_eq!(RatPoly::from_ints(&[-1, 3, -1, 1]).discriminant(), q(-76));
        let a = RatPoly::from_ints(&[-2, 1]);
        let b = RatPoly::from_ints(&[1, 0, 1]);
        assert_eq!(a.resultant(&b), q(5));
        assert_eq!(b.resultant(&a), q(5));
        assert!((&a * &b).resultant(&a).is_zero());
    }
    use proptest::prelude::*;

    fn cubic() -> RatPoly {
        RatPoly::from_ints(&[1, 4, -4, 1])
    }

    #[test]
    fn reduce_cube_of_generator() {
        let r = poly_reduce_mod(&RatPoly::monomial(q(1), 3), &cubic()).unwrap();
        assert_eq!(r, RatPoly::from_ints(&[-1, -4, 4]));
        // re-multiply oracle: z^3 - r is a multiple of the modulus
        let diff = &RatPoly::monomial(q(1), 3) - &r;
        assert!(cubic().divides(&diff));
    }

    #[test]
    fn reduce_already_reduced_and_zero() {
        let m = cubic();
        assert_eq!(poly_reduce_mod(&RatPoly::x(), &m).unwrap(), RatPoly::x());
        assert!(poly_reduce_mod(&RatPoly::zero(), &m).unwrap().is_zero());
        assert_eq!(poly_reduce_mod(&RatPoly::x(), &RatPoly::zero()), Err(PolyError::ZeroModulus));
    }

    #[test]
    fn display_and_json_round_trip() {
        let p = RatPoly::new(vec![qf(1, 2), q(-3), q(0), q(1)]);
        assert_eq!(p.to_string(), "z^3 - 3*z + 1/2");
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"["1/2","-3","0","1"]"#);
        let back: RatPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
        let from_num: RatPoly = serde_json::from_str("[1, 4, -4, 1]").unwrap();
        assert_eq!(from_num, cubic());
    }

    #[test]
    fn xgcd_bezout() {
        let a = RatPoly::from_ints(&[-2, 3, -3, 1]);
        let (g, s, t) = a.xgcd(&cubic());
        assert!(g.is_constant());
        assert_eq!(&(&s * &a) + &(&t * &cubic()), g);
    }

    #[test]
    fn square_free_part_of_square() {
        let f = RatPoly::from_ints(&[-1, 1]);
        let g = &(&f * &f) * &RatPoly::from_ints(&[1, 0, 1]);
        assert!(!g.is_square_free());
        assert_eq!(g.square_free_part(), &f * &RatPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let p = RatPoly::new(vec![qf(-1, 2), qf(1, 3)]);
        assert_eq!(p.primitive_integer(), vec![BigInt::from(-3), BigInt::from(2)]);
    }

    fn small_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec(-9i64..=9, 0..7).prop_map(|v| RatPoly::from_ints(&v))
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_map(a in small_poly(), b in small_poly(), m in small_poly()) {
            prop_assume!(!m.is_zero());
            let lhs = poly_reduce_mod(&(&a * &b), &m).unwrap();
            let ra = poly_reduce_mod(&a, &m).unwrap();
            let rb = poly_reduce_mod(&b, &m).unwrap();
            let rhs = poly_reduce_mod(&(&ra * &rb), &m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn division_identity(a in small_poly(), m in small_poly()) {
            prop_assume!(!m.is_zero());
            let (quo, rem) = a.div_rem(&m).unwrap();
            prop_assert_eq!(&(&quo * &m) + &rem, a);
            prop_assert!(rem.degree().is_none_or(|d| d < m.degree().unwrap()) || m.is_constant() && rem.is_zero());
        }
    }

    #[test]
    fn parse_from_text() {
        let p: RatPoly = "x^6-5x^5+9x^4-4x^3-6x^2+5x+1".parse().unwrap();
        assert_eq!(p, RatPoly::from_ints(&[1, 5, -6, -4, 9, -5, 1]));
        let r: RatPoly = " 1/2*z^2 - z + 3 ".parse().unwrap();
        assert_eq!(r, RatPoly::new(vec![q(3), q(-1), qf(1, 2)]));
        assert_eq!("-7".parse::<RatPoly>().unwrap(), RatPoly::from_ints(&[-7]));
        assert_eq!("x - x".parse::<RatPoly>().unwrap(), RatPoly::zero());
        assert!("x^".parse::<RatPoly>().is_err());
        assert!("".parse::<RatPoly>().is_err());
        assert!("2y".parse::<RatPoly>().is_err());
    }
}
