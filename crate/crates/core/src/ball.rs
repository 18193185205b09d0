//! Midpoint-radius ball arithmetic over binary floating point numbers of arbitrary precision.
//!
//! A [`Ball`] holds a dyadic midpoint rounded to a working precision and a radius that is an
//! upper bound for the distance to the represented real number. Every operation widens the
//! radius by its own rounding error, so the true value never leaves the ball.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polycore::Q;

/// Exact binary number `man · 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

const RAD_BITS: u64 = 32;

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        Dyadic { man, exp }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic { man: BigInt::from(v), exp: 0 }
    }

    /// Power of two.
    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Dyadic { man: BigInt::from(m) * sign, exp: ex }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit plus one (so |x| < 2^magnitude); very negative for zero.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + self.bits() as i64
        }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << ((self.exp - e) as usize);
        let b = &o.man << ((o.exp - e) as usize);
        Dyadic { man: a + b, exp: e }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { man: &self.man * &o.man, exp: self.exp + o.exp }
    }

    pub fn mul_2exp(&self, k: i64) -> Dyadic {
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// Truncates to `prec` significant bits; returns the result and an exponent `t`
    /// with |exact − result| < 2^t (t is very negative when nothing was dropped).
    pub fn round(&self, prec: u64) -> (Dyadic, i64) {
        let b = self.bits();
        if b <= prec {
            return (self.clone(), i64::MIN / 4);
        }
        let shift = b - prec;
        let sign = self.man.sign();
        let m = self.man.abs() >> (shift as usize);
        let man = if sign == Sign::Minus { -m } else { m };
        let exp = self.exp + shift as i64;
        (Dyadic { man, exp }, exp)
    }

    /// Smallest number with at most RAD_BITS bits that is ≥ |self|.
    fn round_up_mag(&self) -> Dyadic {
        let a = self.abs();
        let b = a.bits();
        if b <= RAD_BITS {
            return a;
        }
        let shift = b - RAD_BITS;
        Dyadic { man: (a.man >> (shift as usize)) + 1, exp: a.exp + shift as i64 }
    }

    /// Quotient truncated to about `prec` bits; error below 2^t.
    pub fn div(&self, o: &Dyadic, prec: u64) -> (Dyadic, i64) {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), i64::MIN / 4);
        }
        let k = prec as i64 + o.bits() as i64 - self.bits() as i64 + 2;
        let (num, den, exp) = if k >= 0 {
            (&self.man << (k as usize), o.man.clone(), self.exp - o.exp - k)
        } else {
            (self.man.clone(), &o.man << ((-k) as usize), self.exp - o.exp - k)
        };
        let man = num / den;
        (Dyadic { man, exp }, exp)
    }

    /// Floor of the square root to about `prec` bits; error below 2^t. Requires self ≥ 0.
    pub fn sqrt(&self, prec: u64) -> (Dyadic, i64) {
        assert!(self.sign() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return (Dyadic::zero(), i64::MIN / 4);
        }
        let mut s = (2 * prec as i64 + 4 - self.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = &self.man << (s as usize);
        let r = m.sqrt();
        let exp = (self.exp - s) / 2;
        (Dyadic { man: r, exp }, exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits() as i64;
        let shift = (b - 60).max(0);
        let m = (&self.man >> (shift as usize)).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    pub fn from_rational(q: &Q, prec: u64) -> (Dyadic, i64) {
        let n = Dyadic { man: q.numer().clone(), exp: 0 };
        let d = Dyadic { man: q.denom().clone(), exp: 0 };
        if d.man.is_one() {
            return n.round(prec);
        }
        n.div(&d, prec)
    }

    /// Nearest integer (ties away from zero).
    pub fn round_to_integer(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << (self.exp as usize);
        }
        let sh = (-self.exp) as usize;
        let a = self.man.abs();
        let half = BigInt::one() << (sh - 1);
        let r = (a + half) >> sh;
        if self.man.is_negative() {
            -r
        } else {
            r
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

/// Upper-bound arithmetic on nonnegative radii.
fn rad_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
    a.add(b).round_up_mag()
}

fn rad_mul(a: &Dyadic, b: &Dyadic) -> Dyadic {
    a.mul(b).round_up_mag()
}

fn err_term(t: i64) -> Dyadic {
    if t <= i64::MIN / 8 {
        Dyadic::zero()
    } else {
        Dyadic::pow2(t)
    }
}

/// Real ball: the set of reals within `rad` of `mid`.
#[derive(Clone, Debug)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u64,
}

impl Ball {
    pub fn exact(mid: Dyadic, prec: u64) -> Ball {
        let (m, t) = mid.round(prec);
        Ball { mid: m, rad: err_term(t).round_up_mag(), prec }
    }

    pub fn from_parts(mid: Dyadic, rad: Dyadic, prec: u64) -> Ball {
        let (m, t) = mid.round(prec);
        Ball { mid: m, rad: rad_add(&rad.abs(), &err_term(t)), prec }
    }

    pub fn zero(prec: u64) -> Ball {
        Ball { mid: Dyadic::zero(), rad: Dyadic::zero(), prec }
    }

    pub fn one(prec: u64) -> Ball {
        Ball::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u64) -> Ball {
        Ball::exact(Dyadic::from_i64(v), prec)
    }

    pub fn from_f64(v: f64, prec: u64) -> Ball {
        Ball::exact(Dyadic::from_f64(v), prec)
    }

    pub fn from_q(q: &Q, prec: u64) -> Ball {
        let (m, t) = Dyadic::from_rational(q, prec);
        Ball { mid: m, rad: err_term(t).round_up_mag(), prec }
    }

    /// Ball covering the closed interval [lo, hi].
    pub fn from_interval(lo: &Q, hi: &Q, prec: u64) -> Ball {
        let half = Q::new(BigInt::one(), BigInt::from(2));
        let mid = (lo + hi) * &half;
        let w = (hi - lo) * &half;
        let b = Ball::from_q(&mid, prec);
        let (wd, t) = Dyadic::from_rational(&w, 64);
        Ball { rad: rad_add(&rad_add(&b.rad, &wd.abs()), &err_term(t)), ..b }
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(&self, prec: u64) -> Ball {
        Ball::from_parts(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// log2 of the radius, rounded up; very negative for exact balls.
    pub fn rad_log2(&self) -> i64 {
        self.rad.magnitude()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.lower().sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper().sign() < 0
    }

    /// Certified sign: Some(±1) when the ball excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    /// True when every point of self is below every point of other.
    pub fn lt(&self, other: &Ball) -> bool {
        self.upper() < other.lower()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        !(self.lt(other) || other.lt(self))
    }

    fn p(&self, o: &Ball) -> u64 {
        self.prec.max(o.prec)
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let prec = self.p(o);
        let (m, t) = self.mid.add(&o.mid).round(prec);
        let r = rad_add(&rad_add(&self.rad, &o.rad), &err_term(t));
        Ball { mid: m, rad: r, prec }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn abs(&self) -> Ball {
        if self.mid.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let prec = self.p(o);
        let (m, t) = self.mid.mul(&o.mid).round(prec);
        let a = self.mid.abs().round_up_mag();
        let b = o.mid.abs().round_up_mag();
        let r = rad_add(
            &rad_add(&rad_mul(&a, &o.rad), &rad_mul(&b, &self.rad)),
            &rad_add(&rad_mul(&self.rad, &o.rad), &err_term(t)),
        );
        Ball { mid: m, rad: r, prec }
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul(&Ball::from_i64(k, self.prec))
    }

    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball { mid: self.mid.mul_2exp(k), rad: self.rad.mul_2exp(k), prec: self.prec }
    }

    /// Quotient; `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Ball) -> Option<Ball> {
        if o.contains_zero() {
            return None;
        }
        let prec = self.p(o);
        let (qm, t) = self.mid.div(&o.mid, prec);
        // |a/b − am/bm| ≤ (ra + |am/bm|·rb) / (|bm| − rb)
        let lower_b = o.mid.abs().sub(&o.rad);
        let num = rad_add(&self.rad, &rad_mul(&qm.abs().round_up_mag(), &o.rad));
        let num = rad_add(&num, &rad_mul(&err_term(t), &o.rad));
        let (bound, bt) = num.div(&lower_b, RAD_BITS);
        let r = rad_add(&rad_add(&bound.abs(), &err_term(bt)), &err_term(t));
        Some(Ball { mid: qm, rad: r, prec })
    }

    pub fn recip(&self) -> Option<Ball> {
        Ball::one(self.prec).div(self)
    }

    /// Square root; `None` unless the ball is certainly positive (or exactly zero).
    pub fn sqrt(&self) -> Option<Ball> {
        if self.mid.is_zero() && self.rad.is_zero() {
            return Some(self.clone());
        }
        if !self.is_positive() {
            return None;
        }
        let prec = self.prec;
        let (m, t) = self.mid.sqrt(prec);
        // |√x − √mid| ≤ rad / √(mid − rad)
        let (low_sqrt, _) = self.lower().sqrt(RAD_BITS);
        if low_sqrt.is_zero() {
            return None;
        }
        let (bound, bt) = self.rad.div(&low_sqrt, RAD_BITS);
        let r = rad_add(&rad_add(&bound.abs(), &err_term(bt)), &err_term(t));
        Some(Ball { mid: m, rad: r, prec })
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.mid.abs().add(&self.rad).to_f64()
    }

    /// Nearest integer to the midpoint together with an upper bound on the distance
    /// from any point of the ball to that integer.
    pub fn nearest_integer(&self) -> (BigInt, f64) {
        let n = self.mid.round_to_integer();
        let d = self.mid.sub(&Dyadic::new(n.clone(), 0)).abs().add(&self.rad);
        (n, d.to_f64())
    }

    pub fn pi(prec: u64) -> Ball {
        pi_ball(prec)
    }

    /// Arctangent (entire real line).
    pub fn atan(&self) -> Ball {
        let prec = self.prec;
        let wp = prec + 24;
        let x = Ball::exact(self.mid.clone(), wp);
        let core = atan_exact(&x);
        // atan is 1-Lipschitz
        let r = rad_add(&core.rad, &self.rad);
        Ball::from_parts(core.mid, r, prec)
    }

    /// (sin, cos), each 1-Lipschitz.
    pub fn sin_cos(&self) -> (Ball, Ball) {
        let prec = self.prec;
        let wp = prec + 24;
        let x = Ball::exact(self.mid.clone(), wp);
        let (s, c) = sin_cos_exact(&x);
        (
            Ball::from_parts(s.mid, rad_add(&s.rad, &self.rad), prec),
            Ball::from_parts(c.mid, rad_add(&c.rad, &self.rad), prec),
        )
    }

    /// Argument of the point (x, y) in (−π, π]; `None` when the point may be the origin
    /// or may lie on the branch cut x ≤ 0, y = 0 in a way that makes the sign ambiguous.
    pub fn atan2(y: &Ball, x: &Ball) -> Option<Ball> {
        let prec = y.p(x);
        if x.is_positive() {
            return Some(y.div(x)?.atan());
        }
        if y.is_positive() {
            let t = x.div(y)?.atan();
            return Some(Ball::pi(prec).mul_2exp(-1).sub(&t));
        }
        if y.is_negative() {
            let t = x.div(y)?.atan();
            return Some(Ball::pi(prec).mul_2exp(-1).neg().sub(&t));
        }
        None
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.mid_f64(), self.rad_f64())
    }
}

/// atan on an exact (or near-exact) ball at working precision, via argument halving and
/// the alternating Taylor series.
fn atan_exact(x: &Ball) -> Ball {
    let prec = x.prec;
    let one = Ball::one(prec);
    if x.mid.is_zero() {
        return Ball::zero(prec);
    }
    if x.mid.sign() < 0 {
        return atan_exact(&x.neg()).neg();
    }
    if x.mid > Dyadic::from_i64(1) {
        // atan(x) = π/2 − atan(1/x)
        let inv = x.recip().expect("positive");
        return Ball::pi(prec).mul_2exp(-1).sub(&atan_exact(&inv));
    }
    // halve the argument: atan(x) = 2·atan(x / (1 + √(1 + x²)))
    let mut y = x.clone();
    let mut doublings = 0i64;
    while y.mid.magnitude() > -8 {
        let s = one.add(&y.sqr()).sqrt().expect("positive");
        y = y.div(&one.add(&s)).expect("positive");
        doublings += 1;
    }
    let y2 = y.sqr();
    let mut term = y.clone();
    let mut sum = y.clone();
    let mut n = 1i64;
    loop {
        term = term.mul(&y2).neg();
        let t = term.div(&Ball::from_i64(2 * n + 1, prec)).expect("nonzero");
        sum = sum.add(&t);
        n += 1;
        if t.mid.magnitude() < -(prec as i64) - 8 {
            // alternating series: the tail is bounded by the next term
            let tail = term.mul(&y2).abs();
            sum = Ball { rad: rad_add(&sum.rad, &tail.upper().round_up_mag()), ..sum };
            break;
        }
    }
    sum.mul_2exp(doublings)
}

fn sin_cos_exact(x: &Ball) -> (Ball, Ball) {
    let prec = x.prec;
    let half_pi = Ball::pi(prec).mul_2exp(-1);
    // reduce modulo π/2
    let kq = x.div(&half_pi).expect("nonzero");
    let k = kq.mid.round_to_integer();
    let kk: BigInt = &k % BigInt::from(4);
    let kk = ((kk.to_i64().unwrap_or(0)) + 4) % 4;
    let r = x.sub(&half_pi.mul(&Ball::exact(Dyadic::new(k, 0), prec)));
    let r2 = r.sqr();
    // Taylor series for sin and cos on |r| ≤ ~π/4
    let mut s_term = r.clone();
    let mut c_term = Ball::one(prec);
    let mut s = r.clone();
    let mut c = Ball::one(prec);
    let mut n = 1i64;
    loop {
        c_term = c_term.mul(&r2).div(&Ball::from_i64((2 * n - 1) * (2 * n), prec)).expect("nonzero").neg();
        s_term = s_term.mul(&r2).div(&Ball::from_i64((2 * n) * (2 * n + 1), prec)).expect("nonzero").neg();
        c = c.add(&c_term);
        s = s.add(&s_term);
        n += 1;
        if c_term.mid.magnitude() < -(prec as i64) - 8 && s_term.mid.magnitude() < -(prec as i64) - 8 {
            // for |r| < 1 the remaining terms alternate and decrease
            let tail = c_term.abs().add(&s_term.abs());
            let tb = tail.upper().round_up_mag();
            s = Ball { rad: rad_add(&s.rad, &tb), ..s };
            c = Ball { rad: rad_add(&c.rad, &tb), ..c };
            break;
        }
    }
    match kk {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}

thread_local! {
    static PI_CACHE: RefCell<HashMap<u64, Ball>> = RefCell::new(HashMap::new());
}

/// π by Machin's formula, cached per precision.
fn pi_ball(prec: u64) -> Ball {
    if let Some(b) = PI_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
        return b;
    }
    let wp = prec + 16;
    let atan_inv = |n: i64| -> Ball {
        let x = Ball::one(wp).div(&Ball::from_i64(n, wp)).expect("nonzero");
        let x2 = x.sqr();
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(&x2).neg();
            let t = term.div(&Ball::from_i64(2 * k + 1, wp)).expect("nonzero");
            sum = sum.add(&t);
            k += 1;
            if t.mid.magnitude() < -(wp as i64) - 4 {
                let tail = term.mul(&x2).abs();
                return Ball { rad: rad_add(&sum.rad, &tail.upper().round_up_mag()), ..sum };
            }
        }
    };
    let v = atan_inv(5).mul_i64(16).sub(&atan_inv(239).mul_i64(4));
    let out = Ball::from_parts(v.mid, v.rad, prec);
    PI_CACHE.with(|c| c.borrow_mut().insert(prec, out.clone()));
    out
}

/// Complex ball as a pair of real balls.
#[derive(Clone, Debug)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn real(re: Ball) -> CBall {
        let p = re.prec();
        CBall { re, im: Ball::zero(p) }
    }

    pub fn zero(prec: u64) -> CBall {
        CBall::real(Ball::zero(prec))
    }

    pub fn one(prec: u64) -> CBall {
        CBall::real(Ball::one(prec))
    }

    pub fn i(prec: u64) -> CBall {
        CBall { re: Ball::zero(prec), im: Ball::one(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u64) -> CBall {
        CBall { re: Ball::from_f64(re, prec), im: Ball::from_f64(im, prec) }
    }

    pub fn prec(&self) -> u64 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        CBall { re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)), im: self.re.mul(&o.im).add(&self.im.mul(&o.re)) }
    }

    pub fn scale(&self, k: &Ball) -> CBall {
        CBall { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn mul_2exp(&self, k: i64) -> CBall {
        CBall { re: self.re.mul_2exp(k), im: self.im.mul_2exp(k) }
    }

    pub fn abs2(&self) -> Ball {
        self.re.sqr().add(&self.im.sqr())
    }

    /// Upper bound for the modulus.
    pub fn abs_upper(&self) -> f64 {
        self.re.max_abs_f64().hypot(self.im.max_abs_f64())
    }

    pub fn div(&self, o: &CBall) -> Option<CBall> {
        let d = o.abs2();
        let n = self.mul(&o.conj());
        Some(CBall { re: n.re.div(&d)?, im: n.im.div(&d)? })
    }

    pub fn recip(&self) -> Option<CBall> {
        CBall::one(self.prec()).div(self)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Argument in (−π, π].
    pub fn arg(&self) -> Option<Ball> {
        Ball::atan2(&self.im, &self.re)
    }

    /// e^{iθ}
    pub fn cis(theta: &Ball) -> CBall {
        let (s, c) = theta.sin_cos();
        CBall { re: c, im: s }
    }

    /// Radius of a disk containing the ball (upper bound, f64).
    pub fn rad_f64(&self) -> f64 {
        self.re.rad_f64().hypot(self.im.rad_f64())
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.mid_f64();
        write!(f, "({a} {} {}i) ± {:.3e}", if b < 0.0 { '-' } else { '+' }, b.abs(), self.rad_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::qf;
    use proptest::prelude::*;

    #[test]
    fn pi_digits() {
        let p = Ball::pi(200);
        assert!((p.mid_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.rad_log2() < -190);
        // contains the known 40-digit truncation
        let lo = crate::polycore::parse_rational(
            "3141592653589793238462643383279502884197/1000000000000000000000000000000000000000",
        )
        .unwrap();
        let hi = &lo + qf(1, 1_000_000_000_000_000_000i64) * qf(1, 1_000_000_000_000_000_000i64) * qf(1, 10);
        let b_lo = Ball::from_q(&lo, 200);
        let b_hi = Ball::from_q(&hi, 200);
        assert!(b_lo.lt(&p) && p.lt(&b_hi));
    }

    #[test]
    fn atan_of_one_is_quarter_pi() {
        let a = Ball::one(256).atan();
        let q = Ball::pi(256).mul_2exp(-2);
        assert!(a.sub(&q).contains_zero());
        assert!(a.rad_log2() < -240);
    }

    #[test]
    fn sin_cos_identities() {
        let x = Ball::from_q(&qf(7, 3), 300);
        let (s, c) = x.sin_cos();
        let one = s.sqr().add(&c.sqr());
        assert!(one.sub(&Ball::one(300)).contains_zero());
        assert!((s.mid_f64() - (7.0f64 / 3.0).sin()).abs() < 1e-14);
        let big = Ball::from_i64(1000, 200);
        let (s2, _) = big.sin_cos();
        assert!((s2.mid_f64() - 1000f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn sqrt_and_division() {
        let two = Ball::from_i64(2, 128);
        let r = two.sqrt().unwrap();
        assert!(r.sqr().sub(&two).contains_zero());
        let third = Ball::one(128).div(&Ball::from_i64(3, 128)).unwrap();
        assert!(third.mul_i64(3).sub(&Ball::one(128)).contains_zero());
        assert!(Ball::one(64).div(&Ball::zero(64)).is_none());
    }

    #[test]
    fn atan2_quadrants() {
        let p = 128;
        let a = Ball::atan2(&Ball::from_i64(1, p), &Ball::from_i64(-1, p)).unwrap();
        assert!((a.mid_f64() - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let b = Ball::atan2(&Ball::from_i64(-1, p), &Ball::from_i64(0, p)).unwrap();
        assert!((b.mid_f64() + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(Ball::atan2(&Ball::zero(p), &Ball::from_i64(-1, p)).is_none());
    }

    #[test]
    fn nearest_integer_distance() {
        let b = Ball::from_q(&qf(29, 10), 64);
        let (n, d) = b.nearest_integer();
        assert_eq!(n, BigInt::from(3));
        assert!((d - 0.1).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_rational_result(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let (x, y) = (qf(a, b), qf(c, d));
            let prec = 80;
            let bx = Ball::from_q(&x, prec);
            let by = Ball::from_q(&y, prec);
            let exact = [&x * &y, &x + &y, &x - &y];
            let balls = [bx.mul(&by), bx.add(&by), bx.sub(&by)];
            for (e, bl) in exact.iter().zip(balls.iter()) {
                prop_assert!(bl.sub(&Ball::from_q(e, 200)).contains_zero());
            }
            if c != 0 {
                let qb = bx.div(&by).unwrap();
                prop_assert!(qb.sub(&Ball::from_q(&(&x / &y), 200)).contains_zero());
            }
        }

        #[test]
        fn atan_matches_f64(v in -50.0f64..50.0) {
            let b = Ball::from_f64(v, 100).atan();
            prop_assert!((b.mid_f64() - v.atan()).abs() < 1e-14);
            prop_assert!(b.rad_log2() < -80);
        }

        #[test]
        fn sin_cos_match_f64(v in -100.0f64..100.0) {
            let (s, c) = Ball::from_f64(v, 100).sin_cos();
            prop_assert!((s.mid_f64() - v.sin()).abs() < 1e-12);
            prop_assert!((c.mid_f64() - v.cos()).abs() < 1e-12);
        }
    }
}
