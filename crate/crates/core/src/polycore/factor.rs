use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::modp::{small_primes, PolyP};
use super::{complex_roots, refine_root, sturm_real_roots, RatPoly, Q};
use crate::ball::{Ball, CBall};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IrreducibleWitness {
    Linear,
    /// Degree 2 or 3 with no rational root.
    NoRationalRoots,
    /// Irreducible modulo this prime (which divides neither the leading coefficient nor the discriminant).
    IrreducibleModPrime(u64),
    /// Factor-degree patterns modulo several primes whose admissible subset sums leave no proper degree.
    DegreePatterns(Vec<(u64, Vec<usize>)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Certificate {
    Irreducible(IrreducibleWitness),
    Reducible(RatPoly),
    Unknown,
}

impl Certificate {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Certificate::Irreducible(_))
    }
}

const PRIME_BUDGET: usize = 60;
const SUBSET_BUDGET: usize = 20_000;

/// All rational roots, ascending.
pub fn rational_roots(p: &RatPoly) -> Vec<Q> {
    if p.is_constant() {
        return Vec::new();
    }
    let ints = p.primitive_integer();
    let lead = ints.last().unwrap().abs();
    let Ok(iso) = sturm_real_roots(p) else { return Vec::new() };
    let width = Q::new(BigInt::one(), &lead * 4);
    let mut out = Vec::new();
    for (lo, hi) in &iso.real_intervals {
        let (a, b) = refine_root(&iso.square_free, lo, hi, &width);
        let mid = (&a + &b) / Q::from_integer(BigInt::from(2));
        let scaled = &mid * Q::from_integer(lead.clone());
        let cand = Q::new(scaled.round().to_integer(), lead.clone());
        if iso.square_free.eval(&cand).is_zero() {
            out.push(cand);
        }
    }
    out
}

fn subset_sums(pattern: &[usize], n: usize) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &d in pattern {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums.into_iter().filter(|&s| s > 0 && s < n).collect()
}

/// Searches for an integer factor among products of approximate roots.
fn numeric_factor(p: &RatPoly, degrees: &BTreeSet<usize>) -> Option<RatPoly> {
    let n = p.degree()?;
    let set = complex_roots(p, 160).or_else(|_| complex_roots(p, 320)).ok()?;
    let ints = p.primitive_integer();
    let lead = Ball::from_q(&Q::from_integer(ints.last().unwrap().clone()), 160);
    let roots: Vec<CBall> = set.roots.iter().map(|r| r.center.clone()).collect();
    let mut tried = 0usize;
    for &d in degrees.iter().filter(|&&d| d <= n / 2) {
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            tried += 1;
            if tried > SUBSET_BUDGET {
                return None;
            }
            if let Some(f) = candidate(&roots, &idx, &lead) {
                if f.divides(p) {
                    return Some(f.monic());
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    None
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let d = idx.len();
    for i in (0..d).rev() {
        if idx[i] < n - d + i {
            idx[i] += 1;
            for j in i + 1..d {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn candidate(roots: &[CBall], idx: &[usize], lead: &Ball) -> Option<RatPoly> {
    let prec = lead.prec();
    let mut coeffs = vec![CBall::real(lead.clone())];
    for &i in idx {
        // multiply by (x − r)
        let r = &roots[i];
        let mut next = vec![CBall::zero(prec); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(r));
        }
        coeffs = next;
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let (im, di) = c.im.nearest_integer();
        if !im.is_zero() || di > 0.25 {
            return None;
        }
        let (re, dr) = c.re.nearest_integer();
        if dr > 0.25 {
            return None;
        }
        ints.push(re);
    }
    let f = RatPoly::from_bigints(&ints);
    (f.degree() == Some(idx.len())).then_some(f)
}

/// Irreducibility over ℚ with a checkable witness, an explicit factor, or `Unknown`.
pub fn irreducibility_certificate(p: &RatPoly) -> Certificate {
    let Some(n) = p.degree() else { return Certificate::Unknown };
    if n == 0 {
        return Certificate::Unknown;
    }
    if n == 1 {
        return Certificate::Irreducible(IrreducibleWitness::Linear);
    }
    if !p.is_square_free() {
        return Certificate::Reducible(p.gcd(&p.derivative()));
    }
    if let Some(r) = rational_roots(p).first() {
        return Certificate::Reducible(RatPoly::new(vec![-r.clone(), Q::one()]));
    }
    if n <= 3 {
        return Certificate::Irreducible(IrreducibleWitness::NoRationalRoots);
    }
    let ints = p.primitive_integer();
    let lead = ints.last().unwrap().clone();
    let mut admissible: Option<BTreeSet<usize>> = None;
    let mut patterns = Vec::new();
    for prime in small_primes(PRIME_BUDGET) {
        if (&lead % BigInt::from(prime)).is_zero() {
            continue;
        }
        let fp = PolyP::from_ints(&ints, prime);
        if fp.degree() != Some(n) || !fp.is_square_free() {
            continue;
        }
        let degs = fp.ddf_degrees();
        if degs == vec![n] {
            return Certificate::Irreducible(IrreducibleWitness::IrreducibleModPrime(prime));
        }
        let sums = subset_sums(&degs, n);
        patterns.push((prime, degs));
        let next = match admissible {
            None => sums,
            Some(a) => a.intersection(&sums).copied().collect(),
        };
        if next.is_empty() {
            return Certificate::Irreducible(IrreducibleWitness::DegreePatterns(patterns));
        }
        admissible = Some(next);
    }
    let degrees = admissible.unwrap_or_else(|| (1..n).collect());
    if let Some(f) = numeric_factor(p, &degrees) {
        return Certificate::Reducible(f);
    }
    Certificate::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{q, qf};
    use proptest::prelude::*;

    #[test]
    fn linear_is_irreducible() {
        assert_eq!(
            irreducibility_certificate(&RatPoly::from_ints(&[-1, 1])),
            Certificate::Irreducible(IrreducibleWitness::Linear)
        );
    }

    #[test]
    fn pretzel_cubic_has_no_rational_root() {
        assert_eq!(
            irreducibility_certificate(&RatPoly::from_ints(&[-1, 3, -1, 1])),
            Certificate::Irreducible(IrreducibleWitness::NoRationalRoots)
        );
    }

    #[test]
    fn phi_one_splits_off_x2_plus_1() {
        let phi = RatPoly::from_ints(&[-1, -1, -1, 0, 0, 0, 1, -1, 1]);
        match irreducibility_certificate(&phi) {
            Certificate::Reducible(f) => {
                assert!(f.divides(&phi));
                assert_eq!(f, RatPoly::from_ints(&[1, 0, 1]));
            }
            other => panic!("expected a factor, got {other:?}"),
        }
    }

    #[test]
    fn riley_product_is_reducible_with_cubic_factor() {
        let cubic = RatPoly::from_ints(&[1, 4, -4, 1]);
        let quartic = RatPoly::from_ints(&[1, 0, 2, -3, 1]);
        let prod = &cubic * &quartic;
        match irreducibility_certificate(&prod) {
            Certificate::Reducible(f) => assert!(f == cubic || f == quartic),
            other => panic!("expected a factor, got {other:?}"),
        }
        assert!(irreducibility_certificate(&quartic).is_irreducible());
    }

    #[test]
    fn sextic_trace_field_certified() {
        let p = RatPoly::from_ints(&[1, 5, -6, -4, 9, -5, 1]);
        assert!(irreducibility_certificate(&p).is_irreducible());
    }

    #[test]
    fn rational_roots_found() {
        let p = &RatPoly::new(vec![qf(-3, 2), q(1)]) * &RatPoly::from_ints(&[2, 0, 1]);
        assert_eq!(rational_roots(&p), vec![qf(3, 2)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn never_irreducible_with_rational_root(r in -20i64..20, d in 1i64..6, rest in prop::collection::vec(-5i64..5, 1..5)) {
            let mut tail = rest.clone();
            tail.push(1);
            let p = &RatPoly::new(vec![qf(-r, d), q(1)]) * &RatPoly::from_ints(&tail);
            prop_assert!(!irreducibility_certificate(&p).is_irreducible());
        }
    }
}
