//! Arithmetic in ℚ[z]/(m(z)) in the power basis, with certified embeddings.

mod matrix;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{Ball, CBall};
use crate::polycore::{
    complex_roots, irreducibility_certificate, poly_reduce_mod, q, refine_root, sturm_real_roots, Certificate,
    ComplexRootSet, RatPoly, RootIsolation, Q,
};

pub use matrix::FieldMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error("minimal polynomial must be monic with integer coefficients and degree ≥ 1: {0}")]
    BadMinpoly(String),
    #[error("no {kind} place with index {index}")]
    NoSuchPlace { kind: &'static str, index: usize },
    #[error("elements belong to different fields")]
    FieldMismatch,
}

/// Highest working precision tried by the embedding routines unless overridden.
pub const DEFAULT_PRECISION_CAP: u64 = 1024;

/// Reads the precision cap override from `GEODESICA_PRECISION_CAP`.
pub fn precision_cap() -> u64 {
    std::env::var("GEODESICA_PRECISION_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&v: &u64| v >= 53)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldDescriptor {
    pub minpoly: RatPoly,
    pub name: String,
}

pub struct NumberField {
    name: String,
    minpoly: RatPoly,
    degree: usize,
    isolation: OnceLock<RootIsolation>,
    certificate: OnceLock<Certificate>,
    real_cache: Mutex<HashMap<(usize, u64), Ball>>,
    complex_cache: Mutex<HashMap<u64, Option<ComplexRootSet>>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({}: {})", self.name, self.minpoly)
    }
}

/// A real embedding, indexed in ascending order of the real roots of the minimal polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPlace {
    pub index: usize,
    pub interval: (Q, Q),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Place {
    Real(usize),
    /// Complex embedding with positive imaginary part, indexed by (re, im) order.
    Complex(usize),
}

#[derive(Debug, Clone)]
pub enum Embedded {
    Real(Ball),
    Complex(CBall),
}

impl NumberField {
    pub fn new(name: impl Into<String>, minpoly: RatPoly) -> Result<Arc<Self>, FieldError> {
        let ok = minpoly.degree().is_some_and(|d| d >= 1) && minpoly.lead().is_one() && minpoly.has_integer_coeffs();
        if !ok {
            return Err(FieldError::BadMinpoly(minpoly.to_string()));
        }
        let degree = minpoly.degree().unwrap();
        Ok(Arc::new(NumberField {
            name: name.into(),
            minpoly,
            degree,
            isolation: OnceLock::new(),
            certificate: OnceLock::new(),
            real_cache: Mutex::new(HashMap::new()),
            complex_cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Arc<Self>, FieldError> {
        Self::new(d.name.clone(), d.minpoly.clone())
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { minpoly: self.minpoly.clone(), name: self.name.clone() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn minpoly(&self) -> &RatPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn irreducibility(&self) -> &Certificate {
        self.certificate.get_or_init(|| irreducibility_certificate(&self.minpoly))
    }

    pub fn root_isolation(&self) -> &RootIsolation {
        self.isolation.get_or_init(|| sturm_real_roots(&self.minpoly).expect("nonzero minimal polynomial"))
    }

    pub fn real_places(&self) -> Vec<RealPlace> {
        self.root_isolation()
            .real_intervals
            .iter()
            .enumerate()
            .map(|(index, iv)| RealPlace { index, interval: iv.clone() })
            .collect()
    }

    pub fn real_place_count(&self) -> usize {
        self.root_isolation().count()
    }

    pub fn complex_place_count(&self) -> usize {
        (self.degree - self.real_place_count()) / 2
    }

    /// Ball around the generator at a real place, radius below 2^(−prec).
    pub fn real_generator(&self, index: usize, prec: u64) -> Result<Ball, FieldError> {
        if let Some(b) = self.real_cache.lock().unwrap().get(&(index, prec)) {
            return Ok(b.clone());
        }
        let iso = self.root_isolation();
        let (lo, hi) = iso.real_intervals.get(index).ok_or(FieldError::NoSuchPlace { kind: "real", index })?;
        let width = Q::new(BigInt::one(), BigInt::one() << (prec as usize + 4));
        let (a, b) = refine_root(&iso.square_free, lo, hi, &width);
        let ball = Ball::from_interval(&a, &b, prec + 8);
        self.real_cache.lock().unwrap().insert((index, prec), ball.clone());
        Ok(ball)
    }

    fn complex_roots_at(&self, prec: u64) -> Option<ComplexRootSet> {
        let mut cache = self.complex_cache.lock().unwrap();
        cache
            .entry(prec)
            .or_insert_with(|| {
                let sf = self.minpoly.square_free_part();
                complex_roots(&sf, prec).ok()
            })
            .clone()
    }

    /// Ball around the generator at a complex place (positive imaginary part).
    pub fn complex_generator(&self, index: usize, prec: u64) -> Result<CBall, FieldError> {
        let set = self
            .complex_roots_at(prec + 8)
            .ok_or_else(|| FieldError::PrecisionExhausted(format!("roots of {} at {prec} bits", self.minpoly)))?;
        let upper: Vec<_> = set.roots.iter().filter(|r| !r.real && r.approx().1 > 0.0).collect();
        let root = upper.get(index).ok_or(FieldError::NoSuchPlace { kind: "complex", index })?;
        let p = prec + 8;
        let r = Ball::from_f64(root.radius, p);
        let widen = |b: &Ball| Ball::from_parts(b.mid().clone(), b.rad().add(r.mid()), p);
        Ok(CBall::new(widen(&root.center.re), widen(&root.center.im)))
    }
}

#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coeffs: Vec<Q>,
}

impl FieldElement {
    pub fn from_poly(field: &Arc<NumberField>, p: &RatPoly) -> Self {
        let r = poly_reduce_mod(p, &field.minpoly).expect("nonzero modulus");
        let mut coeffs: Vec<Q> = r.coeffs().to_vec();
        coeffs.resize(field.degree, Q::zero());
        FieldElement { field: field.clone(), coeffs }
    }

    pub fn from_coeffs(field: &Arc<NumberField>, cs: Vec<Q>) -> Self {
        Self::from_poly(field, &RatPoly::new(cs))
    }

    pub fn from_ints(field: &Arc<NumberField>, cs: &[i64]) -> Self {
        Self::from_poly(field, &RatPoly::from_ints(cs))
    }

    pub fn rational(field: &Arc<NumberField>, c: Q) -> Self {
        Self::from_poly(field, &RatPoly::constant(c))
    }

    pub fn from_i64(field: &Arc<NumberField>, c: i64) -> Self {
        Self::rational(field, q(c))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_i64(field, 1)
    }

    /// The class of z.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &RatPoly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    /// The rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.field);
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        nf_inverse(self)
    }

    pub fn div(&self, o: &Self) -> Result<Self, FieldError> {
        Ok(self * &o.inverse()?)
    }

    /// Value at a place, with radius below 2^(−prec/2) (tightened until it is).
    pub fn embed(&self, place: Place, prec: u64) -> Result<Embedded, FieldError> {
        embed(self, place, prec)
    }

    pub fn embed_real(&self, index: usize, prec: u64) -> Result<Ball, FieldError> {
        match embed(self, Place::Real(index), prec)? {
            Embedded::Real(b) => Ok(b),
            Embedded::Complex(c) => Ok(c.re),
        }
    }

    pub fn embed_complex(&self, index: usize, prec: u64) -> Result<CBall, FieldError> {
        match embed(self, Place::Complex(index), prec)? {
            Embedded::Complex(c) => Ok(c),
            Embedded::Real(b) => Ok(CBall::real(b)),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_poly())
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || a.minpoly == b.minpoly
}

fn check(a: &FieldElement, b: &FieldElement) {
    assert!(same_field(&a.field, &b.field), "field mismatch: {:?} vs {:?}", a.field, b.field);
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        check(self, o);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        check(self, o);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        check(self, o);
        FieldElement::from_poly(&self.field, &(&self.to_poly() * &o.to_poly()))
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Multiplicative inverse via the extended Euclidean algorithm.
pub fn nf_inverse(e: &FieldElement) -> Result<FieldElement, FieldError> {
    if e.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    let (g, s, _) = e.to_poly().xgcd(&e.field.minpoly);
    if g != RatPoly::one() {
        // the minimal polynomial is reducible and e is a zero divisor
        return Err(FieldError::DivisionByZero);
    }
    Ok(FieldElement::from_poly(&e.field, &s))
}

/// Monic minimal polynomial over ℚ from the first linear dependence among 1, e, e², ….
pub fn minimal_polynomial(e: &FieldElement) -> RatPoly {
    let n = e.field.degree;
    // rows: reduced echelon basis of the span, each with its combination of powers
    let mut basis: Vec<(Vec<Q>, Vec<Q>, usize)> = Vec::new();
    let mut power = FieldElement::one(&e.field);
    for k in 0..=n {
        let mut v = power.coeffs.clone();
        let mut combo = vec![Q::zero(); n + 1];
        combo[k] = Q::one();
        for (bv, bc, pivot) in &basis {
            let f = v[*pivot].clone();
            if !f.is_zero() {
                for i in 0..n {
                    v[i] -= &f * &bv[i];
                }
                for i in 0..=n {
                    combo[i] -= &f * &bc[i];
                }
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => {
                let p = RatPoly::new(combo);
                return p.monic();
            }
            Some(pivot) => {
                let inv = v[pivot].recip();
                for c in v.iter_mut() {
                    *c *= &inv;
                }
                for c in combo.iter_mut() {
                    *c *= &inv;
                }
                basis.push((v, combo, pivot));
            }
        }
        power = &power * e;
    }
    unreachable!("powers 1..e^n are always dependent in a degree-n algebra")
}

pub fn is_algebraic_integer(e: &FieldElement) -> bool {
    minimal_polynomial(e).has_integer_coeffs()
}

fn embed(e: &FieldElement, place: Place, prec: u64) -> Result<Embedded, FieldError> {
    if let Some(c) = e.as_rational() {
        return Ok(match place {
            Place::Real(_) => Embedded::Real(Ball::from_q(&c, prec)),
            Place::Complex(_) => Embedded::Complex(CBall::real(Ball::from_q(&c, prec))),
        });
    }
    let cap = precision_cap().max(prec);
    let limit = -((prec / 2) as i64);
    let mut work = prec;
    loop {
        let out = match place {
            Place::Real(i) => {
                let z = e.field.real_generator(i, work)?.with_prec(work + 16);
                let v = horner_real(&e.coeffs, &z);
                (v.rad_log2() < limit).then_some(Embedded::Real(v.with_prec(prec)))
            }
            Place::Complex(i) => {
                let z = e.field.complex_generator(i, work)?;
                let v = horner_complex(&e.coeffs, &z);
                (v.re.rad_log2() < limit && v.im.rad_log2() < limit).then_some(Embedded::Complex(v))
            }
        };
        if let Some(v) = out {
            return Ok(v);
        }
        if work >= cap {
            return Err(FieldError::PrecisionExhausted(format!("embedding {e} at {place:?}")));
        }
        work = (work * 2).min(cap);
    }
}

fn horner_real(cs: &[Q], z: &Ball) -> Ball {
    let p = z.prec();
    let mut acc = Ball::zero(p);
    for c in cs.iter().rev() {
        acc = acc.mul(z).add(&Ball::from_q(c, p));
    }
    acc
}

fn horner_complex(cs: &[Q], z: &CBall) -> CBall {
    let p = z.prec();
    let mut acc = CBall::zero(p);
    for c in cs.iter().rev() {
        acc = acc.mul(z).add(&CBall::real(Ball::from_q(c, p)));
    }
    acc
}

/// Facts about subfields relevant to the field hypotheses of the obstruction theorems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubfieldFlags {
    pub degree_odd_prime: bool,
    pub degree_odd: bool,
    pub manual_subfield_flag: Option<String>,
    pub no_proper_subfield: HypothesisStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum HypothesisStatus {
    /// Proven (prime degree has no intermediate fields).
    Certified,
    /// Taken from data, not proven here.
    Assumed,
    /// Known to fail.
    Fails(String),
}

impl HypothesisStatus {
    pub fn holds(&self) -> bool {
        !matches!(self, HypothesisStatus::Fails(_))
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn contains_obvious_subfield_flags(field: &NumberField, manual_flags: &[String]) -> SubfieldFlags {
    let d = field.degree;
    let degree_odd_prime = d % 2 == 1 && is_prime(d);
    let manual = manual_flags.first().cloned();
    let status = match (&manual, degree_odd_prime) {
        (Some(f), _) => HypothesisStatus::Fails(f.clone()),
        (None, true) => HypothesisStatus::Certified,
        (None, false) => HypothesisStatus::Assumed,
    };
    SubfieldFlags { degree_odd_prime, degree_odd: d % 2 == 1, manual_subfield_flag: manual, no_proper_subfield: status }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::qf;
    use proptest::prelude::*;

    fn k74() -> Arc<NumberField> {
        NumberField::new("7_4", RatPoly::from_ints(&[1, 4, -4, 1])).unwrap()
    }

    #[test]
    fn inverse_of_generator() {
        let f = k74();
        let z = FieldElement::generator(&f);
        let inv = nf_inverse(&z).unwrap();
        assert_eq!(inv, FieldElement::from_ints(&f, &[-4, 4, -1]));
        assert!((&z * &inv).is_one());
        assert!(nf_inverse(&FieldElement::one(&f)).unwrap().is_one());
        assert_eq!(nf_inverse(&FieldElement::zero(&f)), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn strip_conjugation_identity() {
        let f = k74();
        let a = FieldElement::from_ints(&f, &[2, -3, 1]);
        let b = FieldElement::from_ints(&f, &[-1, -1, 1]);
        assert_eq!(&a * &b, FieldElement::from_i64(&f, -2));
        assert_eq!(nf_inverse(&a).unwrap(), b.scale(&qf(-1, 2)));
    }

    #[test]
    fn minimal_polynomials() {
        let f = k74();
        let z = FieldElement::generator(&f);
        assert_eq!(minimal_polynomial(&z), *f.minpoly());
        assert_eq!(minimal_polynomial(&FieldElement::rational(&f, qf(5, 3))), RatPoly::new(vec![qf(-5, 3), q(1)]));
        let half = z.scale(&qf(1, 2));
        assert_eq!(minimal_polynomial(&half), RatPoly::new(vec![qf(1, 8), q(1), q(-2), q(1)]));
        assert!(is_algebraic_integer(&z));
        assert!(is_algebraic_integer(&nf_inverse(&z).unwrap()));
        assert!(!is_algebraic_integer(&half));
    }

    #[test]
    fn real_embedding_of_cubic() {
        let f = k74();
        assert_eq!(f.real_place_count(), 1);
        assert_eq!(f.complex_place_count(), 1);
        let z = FieldElement::generator(&f);
        let v = z.embed_real(0, 128).unwrap();
        assert!(v.is_negative() && v.add(&Ball::one(128)).is_positive());
        let v2 = (&z * &z).embed_real(0, 128).unwrap();
        assert!(v2.sub(&v.sqr()).contains_zero());
        assert!(v.rad_log2() < -64);
        let c = FieldElement::rational(&f, qf(3, 7)).embed_real(0, 64).unwrap();
        assert!(c.sub(&Ball::from_q(&qf(3, 7), 200)).contains_zero());
    }

    #[test]
    fn complex_embedding_is_a_root() {
        let f = k74();
        let z = FieldElement::generator(&f);
        let w = z.embed_complex(0, 96).unwrap();
        assert!(w.im.is_positive());
        let m = FieldElement::from_poly(&f, f.minpoly());
        assert!(m.is_zero());
        let val = w.mul(&w).mul(&w).sub(&w.mul(&w).mul_2exp(2)).add(&w.mul_2exp(2)).add(&CBall::one(96));
        assert!(val.contains_zero());
        assert!(matches!(z.embed(Place::Complex(3), 64), Err(FieldError::NoSuchPlace { .. })));
    }

    #[test]
    fn subfield_flags() {
        let cubic = contains_obvious_subfield_flags(&k74(), &[]);
        assert!(cubic.degree_odd_prime);
        assert_eq!(cubic.no_proper_subfield, HypothesisStatus::Certified);
        let lam3 = NumberField::new("P(7,7,7)", RatPoly::from_ints(&[-1, 7, -6, 14, -5, 7, -1, 1])).unwrap();
        assert_eq!(contains_obvious_subfield_flags(&lam3, &[]).no_proper_subfield, HypothesisStatus::Certified);
        let quartic = NumberField::new("quartic", RatPoly::from_ints(&[1, 0, 2, -3, 1])).unwrap();
        let fl = contains_obvious_subfield_flags(&quartic, &["contains Q(sqrt 2)".to_string()]);
        assert!(!fl.degree_odd_prime);
        assert_eq!(fl.manual_subfield_flag.as_deref(), Some("contains Q(sqrt 2)"));
        assert!(!fl.no_proper_subfield.holds());
    }

    #[test]
    fn rejects_non_monic_minpoly() {
        assert!(NumberField::new("bad", RatPoly::from_ints(&[1, 2])).is_err());
    }

    fn elem(f: &Arc<NumberField>) -> impl Strategy<Value = FieldElement> {
        let f = f.clone();
        prop::collection::vec((-6i64..6, 1i64..4), 3)
            .prop_map(move |v| FieldElement::from_coeffs(&f, v.iter().map(|&(a, b)| qf(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn field_axioms(a in elem(&k74()), b in elem(&k74()), c in elem(&k74())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn minpoly_annihilates(a in elem(&k74())) {
            let m = minimal_polynomial(&a);
            let val = FieldElement::from_poly(a.field(), &m.compose(&a.to_poly()));
            prop_assert!(val.is_zero());
        }

        #[test]
        fn embedding_is_multiplicative(a in elem(&k74()), b in elem(&k74())) {
            let ea = a.embed_real(0, 96).unwrap();
            let eb = b.embed_real(0, 96).unwrap();
            let eab = (&a * &b).embed_real(0, 96).unwrap();
            prop_assert!(eab.sub(&ea.mul(&eb)).contains_zero());
        }
    }
}
