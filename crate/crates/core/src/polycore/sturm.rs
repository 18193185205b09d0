use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[cfg(test)]
use super::q;
use super::{qf, PolyError, RatPoly, Q};

/// Isolating intervals for the distinct real roots, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RootIsolation {
    /// Open intervals (lo, hi); the square-free part changes sign across each.
    pub real_intervals: Vec<(Q, Q)>,
    pub multiplicity_free: bool,
    pub square_free: RatPoly,
}

impl RootIsolation {
    pub fn count(&self) -> usize {
        self.real_intervals.len()
    }
}

fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero").1;
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(chain: &[RatPoly], x: Option<&Q>, negative_inf: bool) -> usize {
    match x {
        Some(x) => variations(chain.iter().map(|f| f.sign_at(x))),
        None => variations(chain.iter().map(|f| f.sign_at_infinity(negative_inf))),
    }
}

/// Number of distinct real roots of `p` in the half-open interval (a, b].
pub fn sturm_count(p: &RatPoly, a: &Q, b: &Q) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let chain = sturm_chain(p);
    Ok(variations_at(&chain, Some(a), false).saturating_sub(variations_at(&chain, Some(b), false)))
}

fn cauchy_bound(p: &RatPoly) -> Q {
    let lead = p.lead().abs();
    let m = p.coeffs().iter().take(p.coeffs().len() - 1).map(|c| c.abs() / &lead).fold(Q::zero(), |a, b| {
        if b > a {
            b
        } else {
            a
        }
    });
    // round up to an integer so endpoints stay simple
    let b = Q::one() + m;
    Q::from_integer(b.ceil().to_integer())
}

/// Split point strictly inside (lo, hi) at which `p` does not vanish.
fn split_point(p: &RatPoly, lo: &Q, hi: &Q) -> Q {
    let w = hi - lo;
    let mut mid = lo + &w * qf(1, 2);
    let mut k = 3u32;
    while p.sign_at(&mid).eq(&0) {
        let off = Q::new(1.into(), num_bigint::BigInt::from(2u32).pow(k));
        mid = lo + &w * (qf(1, 2) + off);
        k += 1;
    }
    mid
}

/// Isolates the distinct real roots of `p` by Sturm sequences and bisection.
pub fn sturm_real_roots(p: &RatPoly) -> Result<RootIsolation, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let multiplicity_free = p.is_square_free();
    let sf = p.square_free_part();
    if sf.is_constant() {
        return Ok(RootIsolation { real_intervals: vec![], multiplicity_free, square_free: sf });
    }
    let chain = sturm_chain(&sf);
    let b = cauchy_bound(&sf);
    let count_in = |lo: &Q, hi: &Q| variations_at(&chain, Some(lo), false) - variations_at(&chain, Some(hi), false);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_in(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = split_point(&sf, &lo, &hi);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort();
    Ok(RootIsolation { real_intervals: out, multiplicity_free, square_free: sf })
}

/// Shrinks an isolating interval of a square-free polynomial until its width is at most `width`.
/// Returns a degenerate interval when the root is hit exactly.
pub fn refine_root(sf: &RatPoly, lo: &Q, hi: &Q, width: &Q) -> (Q, Q) {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let s_lo = sf.sign_at(&lo);
    let half: BigRational = qf(1, 2);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) * &half;
        let s = sf.sign_at(&mid);
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
