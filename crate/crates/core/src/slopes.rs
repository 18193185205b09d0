//! Boundary-slope constraints from the integrality of traces.
//!
//! For parabolics x^p ℓ^q and γ x^m ℓ^n γ⁻¹ in a Fuchsian subgroup, the trace of their product
//! is ±(−2 + c²(m + nτ)(p + qτ)) where c is the lower-left entry of γ. When the trace field has
//! no proper real subfield the non-constant power-basis coefficients of
//! c²(nq τ² + (mq + np) τ + mp) must vanish, which is a bilinear system in (p, q) and (m, n).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::knotgroup::MatrixRep;
use crate::numfield::{contains_obvious_subfield_flags, FieldElement, FieldError, HypothesisStatus};
use crate::polycore::{rational_roots, RatPoly, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("IncompleteCaseAnalysis: {0}")]
    IncompleteCaseAnalysis(String),
    #[error("FieldHypothesesFail: {0}")]
    FieldHypothesesFail(String),
    #[error("longitude is not a parabolic fixing infinity")]
    NotPeripheral,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A slope p/q in lowest terms, with 1/0 as infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Q),
    Infinity,
}

impl Slope {
    pub fn from_pair(p: &BigInt, q: &BigInt) -> Option<Slope> {
        match (p.is_zero(), q.is_zero()) {
            (true, true) => None,
            (_, true) => Some(Slope::Infinity),
            _ => Some(Slope::Finite(Q::new(p.clone(), q.clone()))),
        }
    }

    pub fn from_i64(p: i64, q: i64) -> Option<Slope> {
        Slope::from_pair(&BigInt::from(p), &BigInt::from(q))
    }

    /// Primitive (p, q) with q ≥ 0 (and p = 1 for infinity).
    pub fn pair(&self) -> (BigInt, BigInt) {
        match self {
            Slope::Infinity => (BigInt::one(), BigInt::zero()),
            Slope::Finite(r) => (r.numer().clone(), r.denom().clone()),
        }
    }
}

impl Ord for Slope {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
            (Slope::Finite(_), Slope::Infinity) => Ordering::Less,
            (Slope::Infinity, Slope::Finite(_)) => Ordering::Greater,
            (Slope::Infinity, Slope::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Infinity => write!(f, "1/0"),
            Slope::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Linear forms in u = (mp, mq, np, nq), one per non-constant basis coefficient.
#[derive(Debug, Clone)]
pub struct SlopeSystem {
    pub tau: FieldElement,
    pub weight: FieldElement,
    pub equations: Vec<[BigInt; 4]>,
}

/// Scales a rational row to coprime integers, keeping its sign.
fn primitive_row(row: &[Q; 4]) -> [BigInt; 4] {
    let den = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = row.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let g = if g.is_zero() { BigInt::one() } else { g };
    std::array::from_fn(|i| &ints[i] / &g)
}

pub fn build_system(tau: &FieldElement, weight: &FieldElement) -> SlopeSystem {
    let w2 = weight * weight;
    let a = w2.clone();
    let b = &w2 * tau;
    let c = &b * tau;
    let d = tau.field().degree();
    let mut equations = Vec::new();
    for j in 1..d {
        let row = [a.coeffs()[j].clone(), b.coeffs()[j].clone(), b.coeffs()[j].clone(), c.coeffs()[j].clone()];
        if row.iter().any(|x| !x.is_zero()) {
            equations.push(primitive_row(&row));
        }
    }
    SlopeSystem { tau: tau.clone(), weight: weight.clone(), equations }
}

impl SlopeSystem {
    /// Whether the integer quadruple satisfies every equation.
    pub fn admits(&self, p: i64, q: i64, m: i64, n: i64) -> bool {
        let u = [m * p, m * q, n * p, n * q].map(BigInt::from);
        self.equations.iter().all(|r| r.iter().zip(&u).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
    }

    /// Coefficients of c²·(nq τ² + (mq+np) τ + mp) for explicit integers.
    pub fn evaluate(&self, p: i64, q: i64, m: i64, n: i64) -> FieldElement {
        let f = self.tau.field();
        let int = |v: i64| FieldElement::from_i64(f, v);
        let lhs = &(&int(m) + &(&int(n) * &self.tau)) * &(&int(p) + &(&int(q) * &self.tau));
        &(&self.weight * &self.weight) * &lhs
    }

    /// V(p,q): row r is (r_mp p + r_mq q, r_np p + r_nq q), the coefficients of m and n.
    fn v_rows(&self, p: &BigInt, q: &BigInt) -> Vec<[BigInt; 2]> {
        self.equations.iter().map(|r| [&r[0] * p + &r[1] * q, &r[2] * p + &r[3] * q]).collect()
    }
}

/// Pairs (p/q, m/n) of slopes solving a system.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeSolution {
    pub pairs: BTreeSet<(Slope, Slope)>,
    /// Boundary slopes p/q for which every m/n solves the system.
    pub free_boundary: BTreeSet<Slope>,
    /// True when the listed pairs and free slopes are the whole solution set.
    pub exhaustive: bool,
}

impl SlopeSolution {
    pub fn slopes(&self) -> BTreeSet<Slope> {
        let mut out = BTreeSet::new();
        for (a, b) in &self.pairs {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        out.extend(self.free_boundary.iter().cloned());
        out
    }
}

fn solve_at(sys: &SlopeSystem, p: &BigInt, q: &BigInt, sol: &mut SlopeSolution) {
    let Some(ps) = Slope::from_pair(p, q) else { return };
    let rows = sys.v_rows(p, q);
    match rows.iter().find(|v| !(v[0].is_zero() && v[1].is_zero())) {
        None => {
            sol.free_boundary.insert(ps);
        }
        Some(v) => {
            let (m, n) = (v[1].clone(), -&v[0]);
            let ok = rows.iter().all(|r| (&r[0] * &m + &r[1] * &n).is_zero());
            if ok {
                let ms = Slope::from_pair(&m, &n).expect("nonzero");
                sol.pairs.insert((ps, ms));
            }
        }
    }
}

/// The 2×2 minors of V(p, q) as polynomials in t = p/q, plus their values at (1, 0).
fn minors(sys: &SlopeSystem) -> (Vec<RatPoly>, Vec<BigInt>) {
    let e = &sys.equations;
    let mut polys = Vec::new();
    let mut at_inf = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            // v_i = (e_i0 t + e_i1, e_i2 t + e_i3), minor = v_i0 v_j1 − v_i1 v_j0
            let lin = |a: &BigInt, b: &BigInt| RatPoly::from_bigints(&[b.clone(), a.clone()]);
            let m = &(&lin(&e[i][0], &e[i][1]) * &lin(&e[j][2], &e[j][3]))
                - &(&lin(&e[i][2], &e[i][3]) * &lin(&e[j][0], &e[j][1]));
            polys.push(m);
            at_inf.push(&e[i][0] * &e[j][2] - &e[i][2] * &e[j][0]);
        }
    }
    (polys, at_inf)
}

/// All slope pairs, by intersecting the rank-≤1 locus of V(p, q) with P¹(ℚ).
pub fn solve_system(sys: &SlopeSystem) -> SlopeSolution {
    let mut sol = SlopeSolution { pairs: BTreeSet::new(), free_boundary: BTreeSet::new(), exhaustive: true };
    if sys.equations.is_empty() {
        sol.exhaustive = false;
        return sol;
    }
    let (polys, at_inf) = minors(sys);
    let nonzero: Vec<&RatPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        // every boundary slope has a partner: a one-parameter family, not listed
        sol.exhaustive = false;
        return sol;
    }
    if at_inf.iter().all(|v| v.is_zero()) {
        solve_at(sys, &BigInt::one(), &BigInt::zero(), &mut sol);
    }
    let g = nonzero.iter().fold(RatPoly::zero(), |acc, p| acc.gcd(p));
    if !g.is_constant() {
        for t in rational_roots(&g) {
            solve_at(sys, t.numer(), t.denom(), &mut sol);
        }
    }
    sol
}

/// One branch of a case analysis: which lower-left weight the conjugator carries and,
/// optionally, a boundary slope p/q fixed by the branch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseDescriptor {
    pub label: String,
    /// Power-basis coefficients of the weight polynomial in z.
    pub weight: RatPoly,
    #[serde(default)]
    pub fixed_boundary: Option<(i64, i64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub equations: Vec<[String; 4]>,
    pub solution: SlopeSolution,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeSetResult {
    pub slopes: BTreeSet<Slope>,
    pub exhaustive: bool,
    pub cases: Vec<CaseResult>,
}

/// τ with ℓ = ±(1 τ; 0 1).
pub fn longitude_tau(rep: &MatrixRep) -> Result<FieldElement, SlopeError> {
    rep.longitude_tau().ok_or(SlopeError::NotPeripheral)
}

fn restrict(sol: &SlopeSolution, fixed: &Slope) -> SlopeSolution {
    SlopeSolution {
        pairs: sol.pairs.iter().filter(|(p, _)| p == fixed).cloned().collect(),
        free_boundary: sol.free_boundary.iter().filter(|p| *p == fixed).cloned().collect(),
        exhaustive: sol.exhaustive,
    }
}

pub fn slope_set_for_knot(
    rep: &MatrixRep,
    cases: &[CaseDescriptor],
    manual_flags: &[String],
) -> Result<SlopeSetResult, SlopeError> {
    if cases.is_empty() {
        return Err(SlopeError::IncompleteCaseAnalysis(rep.presentation.name.clone()));
    }
    let f = &rep.field;
    let flags = contains_obvious_subfield_flags(f, manual_flags);
    if !flags.degree_odd {
        return Err(SlopeError::FieldHypothesesFail(format!("trace field of even degree {}", f.degree())));
    }
    if let HypothesisStatus::Fails(why) = &flags.no_proper_subfield {
        return Err(SlopeError::FieldHypothesesFail(why.clone()));
    }
    let tau = longitude_tau(rep)?;
    let mut out = SlopeSetResult { slopes: BTreeSet::new(), exhaustive: true, cases: Vec::new() };
    for case in cases {
        let weight = FieldElement::from_poly(f, &case.weight);
        let sys = build_system(&tau, &weight);
        let mut sol = solve_system(&sys);
        if let Some((p, q)) = case.fixed_boundary {
            let fixed = Slope::from_i64(p, q).ok_or_else(|| SlopeError::IncompleteCaseAnalysis(case.label.clone()))?;
            // a fixed boundary slope only needs the partner slope
            let partners = solve_fixed(&sys, p, q);
            sol = restrict(&partners, &fixed);
        }
        out.exhaustive &= sol.exhaustive;
        out.slopes.extend(sol.slopes());
        out.cases.push(CaseResult {
            label: case.label.clone(),
            equations: sys.equations.iter().map(|r| r.clone().map(|x| x.to_string())).collect(),
            solution: sol,
        });
    }
    Ok(out)
}

fn solve_fixed(sys: &SlopeSystem, p: i64, q: i64) -> SlopeSolution {
    let mut sol = SlopeSolution { pairs: BTreeSet::new(), free_boundary: BTreeSet::new(), exhaustive: true };
    if sys.equations.is_empty() {
        sol.exhaustive = false;
        return sol;
    }
    solve_at(sys, &BigInt::from(p), &BigInt::from(q), &mut sol);
    sol
}

/// Every admissible (p/q, m/n) with all entries bounded by `bound`, by enumeration.
pub fn brute_force_pairs(sys: &SlopeSystem, bound: i64) -> BTreeSet<(Slope, Slope)> {
    let mut out = BTreeSet::new();
    for p in -bound..=bound {
        for q in 0..=bound {
            if (p == 0 && q == 0) || p.gcd(&q) != 1 || (q == 0 && p != 1) {
                continue;
            }
            for m in -bound..=bound {
                for n in 0..=bound {
                    if (m == 0 && n == 0) || m.gcd(&n) != 1 || (n == 0 && m != 1) {
                        continue;
                    }
                    if sys.admits(p, q, m, n) {
                        out.insert((Slope::from_i64(p, q).unwrap(), Slope::from_i64(m, n).unwrap()));
                    }
                }
            }
        }
    }
    out
}

fn fits(s: &Slope, bound: i64) -> bool {
    let (p, q) = s.pair();
    p.abs() <= BigInt::from(bound) && q <= BigInt::from(bound)
}

/// Compares the solver with enumeration over |p|, |q|, |m|, |n| ≤ bound.
pub fn agrees_with_brute_force(sys: &SlopeSystem, bound: i64) -> bool {
    let sol = solve_system(sys);
    let brute = brute_force_pairs(sys, bound);
    let mut expected: BTreeSet<(Slope, Slope)> =
        sol.pairs.iter().filter(|(a, b)| fits(a, bound) && fits(b, bound)).cloned().collect();
    for p in &sol.free_boundary {
        for (a, b) in &brute {
            if a == p {
                expected.insert((a.clone(), b.clone()));
            }
        }
    }
    sol.exhaustive && expected == brute
}

/// Case analysis for the knot 7_4 in the Riley coordinates (1 1; 0 1), (1 0; z 1).
pub fn cases_7_4() -> Vec<CaseDescriptor> {
    let c = |label: &str, w: &[i64], fixed| CaseDescriptor {
        label: label.to_string(),
        weight: RatPoly::from_ints(w),
        fixed_boundary: fixed,
    };
    vec![
        c("slope p/q, cusp in the orbit of infinity", &[-1, -1, 1], None),
        c("slope p/q, cusp in the orbit of 0", &[0, -2, 1], None),
        c("slope 2 against w(H), orbit of infinity", &[0, -2, 1], Some((2, 1))),
        c("slope 2 against w(H), orbit of 0", &[-1, -2, 1], Some((2, 1))),
    ]
}

/// Single case for the balanced pretzel knots: conjugators in the Seifert surface group have
/// lower-left entry an integer multiple of z.
pub fn cases_pretzel() -> Vec<CaseDescriptor> {
    vec![CaseDescriptor {
        label: "cusp of the Seifert surface".to_string(),
        weight: RatPoly::x(),
        fixed_boundary: None,
    }]
}
