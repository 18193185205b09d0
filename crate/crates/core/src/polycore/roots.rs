use num_traits::ToPrimitive;

use super::{PolyError, RatPoly};
use crate::ball::{Ball, CBall};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Quadrant {
    First,
    Second,
    Third,
    Fourth,
}

/// One root enclosed by a disk: `center` is a ball whose midpoint is the approximation,
/// and `radius` bounds the distance from the midpoint to the root.
#[derive(Debug, Clone)]
pub struct ComplexRoot {
    pub center: CBall,
    pub radius: f64,
    /// The root is certified to be real.
    pub real: bool,
}

impl ComplexRoot {
    pub fn approx(&self) -> (f64, f64) {
        self.center.mid_f64()
    }

    /// Radius widened to absorb the f64 rounding of the center coordinates.
    fn eff_radius(&self) -> f64 {
        let (a, b) = self.approx();
        self.radius + 4.0 * f64::EPSILON * a.abs().max(b.abs())
    }
    fn re_lo(&self) -> f64 {
        self.center.re.mid_f64() - self.eff_radius()
    }
    fn re_hi(&self) -> f64 {
        self.center.re.mid_f64() + self.eff_radius()
    }
    fn im_lo(&self) -> f64 {
        self.center.im.mid_f64() - self.eff_radius()
    }
    fn im_hi(&self) -> f64 {
        self.center.im.mid_f64() + self.eff_radius()
    }

    /// Open quadrant containing the whole disk, if any.
    pub fn quadrant(&self) -> Option<Quadrant> {
        if self.real {
            return None;
        }
        let right = self.re_lo() > 0.0;
        let left = self.re_hi() < 0.0;
        let up = self.im_lo() > 0.0;
        let down = self.im_hi() < 0.0;
        match (right, left, up, down) {
            (true, _, true, _) => Some(Quadrant::First),
            (_, true, true, _) => Some(Quadrant::Second),
            (_, true, _, true) => Some(Quadrant::Third),
            (true, _, _, true) => Some(Quadrant::Fourth),
            _ => None,
        }
    }

    /// Some(true) if the whole disk lies in Re > 0, Some(false) if in Re < 0.
    pub fn right_half(&self) -> Option<bool> {
        if self.re_lo() > 0.0 {
            Some(true)
        } else if self.re_hi() < 0.0 {
            Some(false)
        } else {
            None
        }
    }

    /// Some(true) if every point of the disk has modulus > 1, Some(false) if all < 1.
    pub fn outside_unit_circle(&self) -> Option<bool> {
        let (a, b) = self.approx();
        let m = a.hypot(b);
        // slack for the f64 evaluation of the modulus
        let slack = 4.0 * f64::EPSILON * m;
        if m - self.radius - slack > 1.0 {
            Some(true)
        } else if m + self.radius + slack < 1.0 {
            Some(false)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComplexRootSet {
    pub roots: Vec<ComplexRoot>,
    pub precision_bits: u64,
}

impl ComplexRootSet {
    pub fn real_count(&self) -> usize {
        self.roots.iter().filter(|r| r.real).count()
    }

    pub fn max_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.radius).fold(0.0, f64::max)
    }
}

fn f64_coeffs(p: &RatPoly) -> Vec<f64> {
    p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn cdiv(a: C, b: C) -> C {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}
fn csub(a: C, b: C) -> C {
    (a.0 - b.0, a.1 - b.1)
}

fn horner_f64(cs: &[f64], x: C) -> (C, C) {
    let mut v = (0.0, 0.0);
    let mut d = (0.0, 0.0);
    for &c in cs.iter().rev() {
        d = cmul(d, x);
        d = (d.0 + v.0, d.1 + v.1);
        v = cmul(v, x);
        v = (v.0 + c, v.1);
    }
    (v, d)
}

/// Double-precision Aberth iteration from perturbed roots of unity.
fn aberth_f64(p: &RatPoly) -> Vec<C> {
    let cs = f64_coeffs(p);
    let n = cs.len() - 1;
    let lead = cs[n].abs();
    let bound = 1.0 + cs[..n].iter().map(|c| c.abs() / lead).fold(0.0, f64::max);
    let r0 = bound.clamp(0.5, 1e6);
    let mut xs: Vec<C> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            (0.5 * r0 * t.cos(), 0.5 * r0 * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = horner_f64(&cs, xs[i]);
            if v.0 == 0.0 && v.1 == 0.0 {
                continue;
            }
            let ratio = cdiv(v, d);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let inv = cdiv((1.0, 0.0), csub(xs[i], xs[j]));
                    s = (s.0 + inv.0, s.1 + inv.1);
                }
            }
            let den = csub((1.0, 0.0), cmul(ratio, s));
            let w = cdiv(ratio, den);
            if w.0.is_finite() && w.1.is_finite() {
                xs[i] = csub(xs[i], w);
                moved = moved.max(w.0.hypot(w.1) / (1.0 + xs[i].0.hypot(xs[i].1)));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    xs
}

fn eval_ball(cs: &[Ball], x: &CBall) -> (CBall, CBall) {
    let prec = x.prec();
    let mut v = CBall::zero(prec);
    let mut d = CBall::zero(prec);
    for c in cs.iter().rev() {
        d = d.mul(x).add(&v);
        v = v.mul(x).add(&CBall::real(c.clone()));
    }
    (v, d)
}

fn strip(x: &CBall, prec: u64) -> CBall {
    CBall::new(Ball::exact(x.re.mid().clone(), prec), Ball::exact(x.im.mid().clone(), prec))
}

/// One high-precision Aberth sweep; returns the largest relative correction.
fn aberth_sweep(cs: &[Ball], xs: &mut [CBall], prec: u64) -> f64 {
    let n = xs.len();
    let mut moved = 0.0f64;
    for i in 0..n {
        let (v, d) = eval_ball(cs, &xs[i]);
        let Some(ratio) = v.div(&d) else { continue };
        let mut s = CBall::zero(prec);
        for j in 0..n {
            if j != i {
                if let Some(inv) = xs[i].sub(&xs[j]).recip() {
                    s = s.add(&inv);
                }
            }
        }
        let den = CBall::one(prec).sub(&ratio.mul(&s));
        let Some(w) = ratio.div(&den) else { continue };
        let w = strip(&w, prec);
        let rel = w.abs_upper() / (1.0 + xs[i].abs_upper());
        xs[i] = strip(&xs[i].sub(&w), prec);
        moved = moved.max(rel);
    }
    moved
}

/// Inclusion radii n·|W_i| from the Weierstrass corrections; each disk contains a root and,
/// when the disks are pairwise disjoint, exactly one.
fn inclusion_radii(cs: &[Ball], xs: &[CBall]) -> Option<Vec<f64>> {
    let n = xs.len();
    let lead = CBall::real(cs[n].clone());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (v, _) = eval_ball(cs, &xs[i]);
        let mut den = lead.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&xs[i].sub(&xs[j]));
            }
        }
        let w = v.div(&den)?;
        let r = w.abs_upper() * n as f64;
        // inflate by a relative ulp of f64 to cover the conversion
        out.push(r * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    }
    Some(out)
}

fn disks_disjoint(xs: &[CBall], rs: &[f64]) -> bool {
    let n = xs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = xs[i].sub(&xs[j]);
            let (a, b) = d.mid_f64();
            if a.hypot(b) * (1.0 - 1e-12) <= rs[i] + rs[j] {
                return false;
            }
        }
    }
    true
}

/// Decides realness: a disk meeting the real axis whose mirror image meets no other disk
/// must hold a real root, since non-real roots come in conjugate pairs.
fn mark_real(xs: &[CBall], rs: &[f64]) -> Vec<bool> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            let (a, b) = xs[i].mid_f64();
            if b.abs() > rs[i] {
                return false;
            }
            (0..n).all(|j| {
                if j == i {
                    return true;
                }
                let (c, d) = xs[j].mid_f64();
                (a - c).hypot(-b - d) * (1.0 - 1e-12) > rs[i] + rs[j]
            })
        })
        .collect()
}

/// All complex roots of a square-free polynomial with certified inclusion disks.
/// Fails with `PrecisionExhausted` when the disks cannot be separated at this precision.
pub fn complex_roots(p: &RatPoly, precision_bits: u64) -> Result<ComplexRootSet, PolyError> {
    let deg = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    if !p.is_square_free() {
        return Err(PolyError::RepeatedRoots);
    }
    let prec = precision_bits.max(53);
    if deg == 0 {
        return Ok(ComplexRootSet { roots: vec![], precision_bits: prec });
    }
    let cs: Vec<Ball> = p.coeffs().iter().map(|c| Ball::from_q(c, prec + 16)).collect();
    let mut xs: Vec<CBall> = aberth_f64(p).into_iter().map(|(a, b)| CBall::from_f64(a, b, prec + 16)).collect();
    let target = 2f64.powi(-(prec as i32) + 8);
    for _ in 0..60 {
        let moved = aberth_sweep(&cs, &mut xs, prec + 16);
        if moved < target {
            break;
        }
    }
    let rs =
        inclusion_radii(&cs, &xs).ok_or_else(|| PolyError::PrecisionExhausted("root approximations collide".into()))?;
    let limit = 2f64.powi(-((prec / 2) as i32));
    if !disks_disjoint(&xs, &rs) || rs.iter().any(|&r| r.is_nan() || r >= limit) {
        return Err(PolyError::PrecisionExhausted(format!("inclusion disks not separated at {prec} bits")));
    }
    let real = mark_real(&xs, &rs);
    let mut roots: Vec<ComplexRoot> =
        xs.into_iter().zip(rs).zip(real).map(|((c, r), re)| ComplexRoot { center: c, radius: r, real: re }).collect();
    roots.sort_by(|a, b| {
        let (x, y) = a.approx();
        let (u, v) = b.approx();
        x.partial_cmp(&u).unwrap().then(y.partial_cmp(&v).unwrap())
    });
    Ok(ComplexRootSet { roots, precision_bits: prec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn psi1() -> RatPoly {
        RatPoly::from_ints(&[-1, -1, 0, 1, 0, -1, 1])
    }

    #[test]
    fn roots_of_x2_plus_1() {
        let set = complex_roots(&RatPoly::from_ints(&[1, 0, 1]), 64).unwrap();
        assert_eq!(set.roots.len(), 2);
        let (a, b) = set.roots[0].approx();
        let (c, d) = set.roots[1].approx();
        assert!(a.abs() < 1e-15 && c.abs() < 1e-15);
        assert!((b + 1.0).abs() < 1e-15 && (d - 1.0).abs() < 1e-15);
        assert_eq!(set.real_count(), 0);
    }

    #[test]
    fn psi_one_census() {
        let set = complex_roots(&psi1(), 64).unwrap();
        assert_eq!(set.roots.len(), 6);
        assert_eq!(set.real_count(), 2);
        let mut per = std::collections::HashMap::new();
        for r in &set.roots {
            if let Some(qd) = r.quadrant() {
                *per.entry(qd).or_insert(0) += 1;
                if r.right_half() == Some(true) {
                    assert_eq!(r.outside_unit_circle(), Some(true));
                }
            }
        }
        for qd in [Quadrant::First, Quadrant::Second, Quadrant::Third, Quadrant::Fourth] {
            assert_eq!(per.get(&qd), Some(&1));
        }
    }

    #[test]
    fn phi_one_adds_plus_minus_i() {
        let phi = RatPoly::from_ints(&[-1, -1, -1, 0, 0, 0, 1, -1, 1]);
        let a = complex_roots(&phi, 80).unwrap();
        let b = complex_roots(&psi1(), 80).unwrap();
        assert_eq!(a.roots.len(), b.roots.len() + 2);
        let near = |x: (f64, f64), set: &ComplexRootSet| {
            set.roots.iter().any(|r| {
                let (u, v) = r.approx();
                (u - x.0).hypot(v - x.1) < 1e-12
            })
        };
        for r in &b.roots {
            assert!(near(r.approx(), &a));
        }
        assert!(near((0.0, 1.0), &a) && near((0.0, -1.0), &a));
    }

    #[test]
    fn repeated_roots_rejected() {
        let p = RatPoly::from_ints(&[1, 2, 1]);
        assert!(matches!(complex_roots(&p, 64), Err(PolyError::RepeatedRoots)));
    }

    #[test]
    fn radii_shrink_with_precision() {
        let lo = complex_roots(&psi1(), 64).unwrap();
        let hi = complex_roots(&psi1(), 256).unwrap();
        assert!(hi.max_radius() < lo.max_radius());
        assert!(hi.max_radius() < 2f64.powi(-128));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn vieta_sum_and_product(roots in prop::collection::btree_set(-12i64..12, 1..6), quad in 1i64..5) {
            let mut p = RatPoly::from_ints(&[quad, 1, 1]);
            for r in &roots {
                p = &p * &RatPoly::from_ints(&[-r, 2]);
            }
            let set = complex_roots(&p, 96).unwrap();
            let d = p.degree().unwrap();
            prop_assert_eq!(set.roots.len(), d);
            let lead = p.lead();
            let sum_exact = -(p.coeff(d - 1) / &lead);
            let mut prod_exact = p.coeff(0) / &lead;
            if d % 2 == 1 { prod_exact = -prod_exact; }
            let (mut sr, mut si) = (0.0, 0.0);
            let mut prod = (1.0f64, 0.0f64);
            let mut rad_sum = 0.0;
            for r in &set.roots {
                let (a, b) = r.approx();
                sr += a; si += b;
                prod = (prod.0 * a - prod.1 * b, prod.0 * b + prod.1 * a);
                rad_sum += r.radius;
            }
            let tol = rad_sum + 1e-9;
            prop_assert!((sr - sum_exact.to_f64().unwrap()).abs() < tol);
            prop_assert!(si.abs() < tol);
            let pe = prod_exact.to_f64().unwrap();
            prop_assert!((prod.0 - pe).abs() < 1e-7 * (1.0 + pe.abs()));
            prop_assert!(prod.1.abs() < 1e-7 * (1.0 + pe.abs()));
        }
    }
}
