//! Relative Euler class of a Galois conjugate at a real place, computed in the universal
//! cover of PSL(2,ℝ) ≅ PSU(1,1) with the (γ, ω) cylinder coordinates, plus the verdict
//! engine built on it.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{Ball, CBall};
use crate::knotgroup::{abelianization_exponents, MatrixRep, Word};
use crate::numfield::{
    contains_obvious_subfield_flags, is_algebraic_integer, precision_cap, FieldElement, FieldError, HypothesisStatus,
    NumberField, SubfieldFlags,
};

/// Accepted distance of an ω-difference (in units of π) from an integer.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_START_PRECISION: u64 = 128;
/// Global sign of the Euler number, chosen so that 7_3 at its first real place gives +3.
pub const EULER_SIGN: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error("NoLiftExists: relator defects {0:?} are not in the image of the exponent matrix")]
    NoLiftExists(Vec<i64>),
    #[error("MilnorWoodViolated: |{n}| > {bound}")]
    MilnorWoodViolated { n: i64, bound: i64 },
    #[error("longitude is not upper triangular with diagonal ±1")]
    NotPeripheral,
    #[error("determinant is not 1")]
    NotUnimodular,
    #[error("real place {0} does not exist")]
    NoSuchPlace(usize),
    #[error("genus missing for {0}")]
    MissingGenus(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point (γ, ω) of the universal cover: |γ| < 1, ω unreduced.
#[derive(Debug, Clone)]
pub struct LiftedElement {
    pub gamma: CBall,
    pub omega: Ball,
}

impl LiftedElement {
    pub fn identity(prec: u64) -> Self {
        LiftedElement { gamma: CBall::zero(prec), omega: Ball::zero(prec) }
    }

    /// The central element c^k = (0, kπ).
    pub fn central(k: i64, prec: u64) -> Self {
        LiftedElement { gamma: CBall::zero(prec), omega: Ball::pi(prec).mul_i64(k) }
    }

    pub fn prec(&self) -> u64 {
        self.omega.prec()
    }

    pub fn shift(&self, k: i64) -> Self {
        LiftedElement { gamma: self.gamma.clone(), omega: self.omega.add(&Ball::pi(self.prec()).mul_i64(k)) }
    }

    pub fn inverse(&self) -> Self {
        let rot = CBall::cis(&self.omega.mul_2exp(1));
        LiftedElement { gamma: self.gamma.mul(&rot).neg(), omega: self.omega.neg() }
    }

    /// ω/π as a ball.
    pub fn turns(&self) -> Ball {
        self.omega.div(&Ball::pi(self.prec())).expect("π is nonzero")
    }

    /// Image in PSU(1,1): ω reduced to [0, π) by the midpoint.
    pub fn project(&self) -> (CBall, Ball) {
        let (k, _) = self.turns().nearest_integer();
        let mut k = k.to_i64().unwrap_or(0);
        let reduced = self.omega.sub(&Ball::pi(self.prec()).mul_i64(k));
        if reduced.mid_f64() < 0.0 {
            k -= 1;
        }
        (self.gamma.clone(), self.omega.sub(&Ball::pi(self.prec()).mul_i64(k)))
    }
}

fn det_is_one(m: &[Ball; 4]) -> bool {
    let det = m[0].mul(&m[3]).sub(&m[1].mul(&m[2]));
    det.sub(&Ball::one(det.prec())).contains_zero()
}

/// Principal lift of a real determinant-one matrix (a b; c d): ω ∈ [0, π).
pub fn to_su11(m: &[Ball; 4]) -> Result<LiftedElement, EulerError> {
    if !det_is_one(m) {
        return Err(EulerError::NotUnimodular);
    }
    let tr = m[0].add(&m[3]);
    let m: [Ball; 4] = if tr.is_negative() { std::array::from_fn(|i| m[i].neg()) } else { m.clone() };
    let [a, b, c, d] = &m;
    let alpha = CBall::new(a.add(d), b.sub(c)).mul_2exp(-1);
    let beta = CBall::new(a.sub(d), b.add(c).neg()).mul_2exp(-1);
    let exhausted = || EulerError::PrecisionExhausted("α is not separated from 0".into());
    if alpha.contains_zero() {
        return Err(exhausted());
    }
    let gamma = beta.conj().div(&alpha).ok_or_else(exhausted)?;
    let mut omega = alpha.arg().ok_or_else(exhausted)?;
    if omega.mid_f64() < 0.0 {
        omega = omega.add(&Ball::pi(omega.prec()));
    }
    if !gamma.abs2().sub(&Ball::one(omega.prec())).is_negative() {
        return Err(EulerError::PrecisionExhausted("|γ| < 1 not certified".into()));
    }
    Ok(LiftedElement { gamma, omega })
}

/// Group law of the universal cover.
pub fn ucover_mul(x: &LiftedElement, y: &LiftedElement) -> Result<LiftedElement, EulerError> {
    let one = CBall::one(x.prec().max(y.prec()));
    let rot = CBall::cis(&x.omega.mul_2exp(1).neg());
    let num = x.gamma.add(&y.gamma.mul(&rot));
    let den = one.add(&y.gamma.mul(&x.gamma.conj()).mul(&rot));
    let den_bar = den.conj();
    let exhausted = || EulerError::PrecisionExhausted("log argument meets the branch cut".into());
    let gamma = num.div(&den).ok_or_else(exhausted)?;
    // (1/2i) log(den/den̄) with the principal branch
    let ratio = den.div(&den_bar).ok_or_else(exhausted)?;
    let half_log = ratio.arg().ok_or_else(exhausted)?.mul_2exp(-1);
    Ok(LiftedElement { gamma, omega: x.omega.add(&y.omega).add(&half_log) })
}

/// Canonical section value at a longitude (−1 −τ; 0 −1).
pub fn canonical_section(tau: &Ball) -> LiftedElement {
    let prec = tau.prec();
    let itau = CBall::new(Ball::zero(prec), tau.clone());
    let den = CBall::real(Ball::from_i64(2, prec)).add(&itau);
    let gamma = itau.div(&den).expect("2 + iτ is nonzero");
    LiftedElement { gamma, omega: tau.mul_2exp(-1).atan() }
}

/// Solves E·m = rhs over ℤ by column reduction to echelon form.
pub fn solve_integer_system(e: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<i64>> {
    let cols = e.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<i128>> = e.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i128).collect()).collect();
    let col_op = |h: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, j: usize, k: usize, f: [i128; 4]| {
        // (col_j, col_k) ← (f0 col_j + f1 col_k, f2 col_j + f3 col_k)
        for m in [h, u] {
            for row in m.iter_mut() {
                let (a, b) = (row[j], row[k]);
                row[j] = f[0] * a + f[1] * b;
                row[k] = f[2] * a + f[3] * b;
            }
        }
    };
    let mut pivots = Vec::new();
    let mut col = 0;
    for i in 0..h.len() {
        if col == cols {
            break;
        }
        for k in col + 1..cols {
            while h[i][k] != 0 {
                let (a, b) = (h[i][col], h[i][k]);
                if a == 0 {
                    col_op(&mut h, &mut u, col, k, [0, 1, 1, 0]);
                    continue;
                }
                let q = b.div_euclid(a);
                col_op(&mut h, &mut u, col, k, [1, 0, -q, 1]);
                if h[i][k] != 0 {
                    col_op(&mut h, &mut u, col, k, [0, 1, 1, 0]);
                }
            }
        }
        if h[i][col] != 0 {
            pivots.push((i, col));
            col += 1;
        }
    }
    let mut y = vec![0i128; cols];
    let mut next = 0;
    for (i, row) in h.iter().enumerate() {
        let known: i128 = row.iter().zip(&y).map(|(a, b)| a * b).sum();
        let target = rhs[i] as i128 - known;
        match pivots.get(next) {
            Some(&(pi, pc)) if pi == i => {
                if target % row[pc] != 0 {
                    return None;
                }
                y[pc] = target / row[pc];
                next += 1;
            }
            _ if target != 0 => return None,
            _ => {}
        }
    }
    let m = (0..cols).map(|r| (0..cols).map(|c| u[r][c] * y[c]).sum::<i128>() as i64).collect();
    Some(m)
}

pub fn evaluate_lifted(
    lifts: &[LiftedElement],
    inverses: &[LiftedElement],
    w: &Word,
) -> Result<LiftedElement, EulerError> {
    let prec = lifts.first().map_or(DEFAULT_START_PRECISION, |l| l.prec());
    let mut acc = LiftedElement::identity(prec);
    for &(g, e) in w.letters() {
        let step = if e > 0 { &lifts[g] } else { &inverses[g] };
        for _ in 0..e.unsigned_abs() {
            acc = ucover_mul(&acc, step)?;
        }
    }
    Ok(acc)
}

/// Integer k with ω = kπ and γ = 0 up to tolerance.
fn central_defect(x: &LiftedElement) -> Result<i64, EulerError> {
    let (k, residual) = x.turns().nearest_integer();
    if residual >= RESIDUAL_TOLERANCE || x.gamma.abs_upper() >= RESIDUAL_TOLERANCE {
        return Err(EulerError::PrecisionExhausted(format!("relator defect residual {residual:.3e}")));
    }
    Ok(k.to_i64().expect("small defect"))
}

/// Lifts generator images so every relator is trivial in the universal cover. Principal lifts
/// are first shifted by `offsets` (central powers), then corrected.
pub fn lift_generators(
    images: &[[Ball; 4]],
    relators: &[Word],
    offsets: &[i64],
) -> Result<Vec<LiftedElement>, EulerError> {
    let n = images.len();
    let mut lifts = images
        .iter()
        .enumerate()
        .map(|(i, m)| Ok(to_su11(m)?.shift(offsets.get(i).copied().unwrap_or(0))))
        .collect::<Result<Vec<_>, EulerError>>()?;
    let inverses: Vec<_> = lifts.iter().map(|l| l.inverse()).collect();
    let defects = relators
        .iter()
        .map(|r| central_defect(&evaluate_lifted(&lifts, &inverses, r)?))
        .collect::<Result<Vec<_>, _>>()?;
    let e: Vec<Vec<i64>> = relators.iter().map(|r| abelianization_exponents(r, n)[..n].to_vec()).collect();
    let rhs: Vec<i64> = defects.iter().map(|k| -k).collect();
    let m = solve_integer_system(&e, &rhs).ok_or(EulerError::NoLiftExists(defects))?;
    for (l, k) in lifts.iter_mut().zip(m) {
        *l = l.shift(k);
    }
    Ok(lifts)
}

fn real_images(rep: &MatrixRep, place: usize, prec: u64) -> Result<Vec<[Ball; 4]>, EulerError> {
    if place >= rep.field.real_place_count() {
        return Err(EulerError::NoSuchPlace(place));
    }
    rep.images
        .iter()
        .map(|m| {
            let e = |x: &FieldElement| x.embed_real(place, prec);
            Ok([e(&m.a)?, e(&m.b)?, e(&m.c)?, e(&m.d)?])
        })
        .collect()
}

pub fn lift_representation(rep: &MatrixRep, place: usize, prec: u64) -> Result<Vec<LiftedElement>, EulerError> {
    lift_representation_with_offsets(rep, place, prec, &[])
}

pub fn lift_representation_with_offsets(
    rep: &MatrixRep,
    place: usize,
    prec: u64,
    offsets: &[i64],
) -> Result<Vec<LiftedElement>, EulerError> {
    lift_generators(&real_images(rep, place, prec)?, &rep.presentation.relators, offsets)
}

/// τ with ρ(ℓ) = ±(1 τ; 0 1), exactly.
pub fn longitude_tau(rep: &MatrixRep) -> Result<FieldElement, EulerError> {
    rep.longitude_tau().ok_or(EulerError::NotPeripheral)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerResult {
    pub place_index: usize,
    pub n: i64,
    pub residual: f64,
    pub precision_bits: u64,
}

/// Euler number of the longitude relative to the canonical section, for a conjugate
/// g ℓ g⁻¹ of the longitude (g = 1 for the standard computation).
fn euler_attempt(
    rep: &MatrixRep,
    place: usize,
    prec: u64,
    offsets: &[i64],
    conjugator: &Word,
) -> Result<EulerResult, EulerError> {
    let lifts = lift_representation_with_offsets(rep, place, prec, offsets)?;
    let inverses: Vec<_> = lifts.iter().map(|l| l.inverse()).collect();
    let longitude = rep.presentation.longitude.conjugate_by(conjugator);
    let lifted = evaluate_lifted(&lifts, &inverses, &longitude)?;
    let tau = longitude_tau(rep)?.embed_real(place, prec)?;
    let g = evaluate_lifted(&lifts, &inverses, conjugator)?;
    let section = ucover_mul(&ucover_mul(&g, &canonical_section(&tau))?, &g.inverse())?;
    // c^n = s(ℓ)⁻¹ ρ̃(ℓ)
    let diff = ucover_mul(&section.inverse(), &lifted)?;
    let (n, residual) = diff.turns().nearest_integer();
    if residual >= RESIDUAL_TOLERANCE || diff.gamma.abs_upper() >= RESIDUAL_TOLERANCE {
        return Err(EulerError::PrecisionExhausted(format!("ω residual {residual:.3e} at {prec} bits")));
    }
    Ok(EulerResult { place_index: place, n: EULER_SIGN * n.to_i64().expect("small"), residual, precision_bits: prec })
}

fn with_ladder<T>(prec: u64, mut f: impl FnMut(u64) -> Result<T, EulerError>) -> Result<T, EulerError> {
    let cap = precision_cap().max(prec);
    let mut p = prec.max(32);
    loop {
        match f(p) {
            Err(EulerError::PrecisionExhausted(_)) | Err(EulerError::Field(FieldError::PrecisionExhausted(_)))
                if p < cap =>
            {
                p = (2 * p).min(cap)
            }
            other => return other,
        }
    }
}

pub fn euler_number(rep: &MatrixRep, place: usize, precision_bits: u64) -> Result<EulerResult, EulerError> {
    euler_number_with(rep, place, precision_bits, &[], &Word::empty())
}

/// Same as [`euler_number`] with shifted principal lifts and a conjugated longitude.
pub fn euler_number_with(
    rep: &MatrixRep,
    place: usize,
    precision_bits: u64,
    offsets: &[i64],
    conjugator: &Word,
) -> Result<EulerResult, EulerError> {
    with_ladder(precision_bits, |p| euler_attempt(rep, place, p, offsets, conjugator))
}

/// Euler numbers at every real place, in the order of the real roots.
pub fn euler_tuple(rep: &MatrixRep, precision_bits: u64) -> Result<Vec<EulerResult>, EulerError> {
    (0..rep.field.real_place_count()).into_par_iter().map(|i| euler_number(rep, i, precision_bits)).collect()
}

pub fn milnor_wood_bound(genus: u32) -> i64 {
    2 * genus as i64 - 1
}

pub fn check_milnor_wood(n: i64, genus: u32) -> Result<(), EulerError> {
    let bound = milnor_wood_bound(genus);
    if n.abs() > bound {
        return Err(EulerError::MilnorWoodViolated { n, bound });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReidRecord {
    pub degree: usize,
    pub odd_degree: bool,
    pub no_real_subfield: HypothesisStatus,
    pub integral_traces: bool,
    pub no_closed_tgs: bool,
}

/// Traces of generators, of pairwise products and of triple products.
fn generating_traces(rep: &MatrixRep) -> Vec<FieldElement> {
    let n = rep.images.len();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(rep.images[i].trace());
        for j in i + 1..n {
            let ij = rep.images[i].mul(&rep.images[j]);
            out.push(ij.trace());
            for k in j + 1..n {
                out.push(ij.mul(&rep.images[k]).trace());
            }
        }
    }
    out
}

/// Odd degree, no proper real subfield and integral traces rule out closed totally geodesic
/// surfaces.
pub fn reid_predicate(rep: &MatrixRep, manual_flags: &[String]) -> ReidRecord {
    let flags = contains_obvious_subfield_flags(&rep.field, manual_flags);
    let integral_traces = generating_traces(rep).iter().all(is_algebraic_integer);
    let no_closed_tgs = flags.degree_odd && flags.no_proper_subfield.holds() && integral_traces;
    ReidRecord {
        degree: rep.field.degree(),
        odd_degree: flags.degree_odd,
        no_real_subfield: flags.no_proper_subfield,
        integral_traces,
        no_closed_tgs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Orientability {
    /// No element has a purely imaginary trace, so every totally geodesic surface is orientable.
    OrientableOnly,
    Undetermined,
}

pub fn orientability_predicate(field: &NumberField) -> Orientability {
    if field.degree() % 2 == 1 {
        Orientability::OrientableOnly
    } else {
        Orientability::Undetermined
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NoTGS_Calegari_fibered")]
    NoTgsCalegariFibered,
    #[serde(rename = "NoTGS_EulerBound")]
    NoTgsEulerBound,
    #[serde(rename = "NoClosedTGS_Reid")]
    NoClosedTgsReid,
    Inconclusive,
    KnownUniqueSurface,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldFacts {
    pub degree: usize,
    pub real_places: usize,
    pub integral_traces: bool,
    pub subfield: SubfieldFlags,
}

#[derive(Debug, Clone, Serialize)]
pub struct KnotFacts {
    pub name: String,
    pub genus: Option<u32>,
    pub fibered: bool,
    pub known_unique_surface: bool,
    pub field: FieldFacts,
}

impl KnotFacts {
    /// `genus` falls back to the presentation's genus when absent.
    pub fn from_rep(
        rep: &MatrixRep,
        genus: Option<u32>,
        fibered: bool,
        known_unique_surface: bool,
        manual_flags: &[String],
    ) -> Self {
        let reid = reid_predicate(rep, manual_flags);
        KnotFacts {
            name: rep.presentation.name.clone(),
            genus: genus.or(rep.presentation.genus),
            fibered,
            known_unique_surface,
            field: FieldFacts {
                degree: rep.field.degree(),
                real_places: rep.field.real_place_count(),
                integral_traces: reid.integral_traces,
                subfield: contains_obvious_subfield_flags(&rep.field, manual_flags),
            },
        }
    }

    fn reid_holds(&self) -> bool {
        self.field.subfield.degree_odd && self.field.subfield.no_proper_subfield.holds() && self.field.integral_traces
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub knot: String,
    pub field: FieldFacts,
    pub genus: u32,
    pub fibered: bool,
    pub euler: Vec<i64>,
    /// What the obstruction rules alone decide.
    pub obstruction: Verdict,
    /// `obstruction`, with an inconclusive result replaced by a literature tag when present.
    pub verdict: Verdict,
    pub justification: String,
}

pub fn obstruction_verdict(facts: &KnotFacts, euler: &[i64]) -> Result<ObstructionReport, EulerError> {
    let genus = facts.genus.ok_or_else(|| EulerError::MissingGenus(facts.name.clone()))?;
    for &n in euler {
        check_milnor_wood(n, genus)?;
    }
    let bound = milnor_wood_bound(genus);
    let hypotheses = facts.field.subfield.no_proper_subfield.holds();
    let (obstruction, mut justification) = if genus == 1 {
        (
            Verdict::Inconclusive,
            "genus one: Milnor-Wood forces |e| = 1 = 2g-1, so the Euler bound cannot apply".to_string(),
        )
    } else if facts.fibered {
        (Verdict::NoTgsCalegariFibered, "fibered knot: Calegari's criterion applies at every real place".to_string())
    } else if let Some((i, n)) = euler.iter().enumerate().find(|(_, n)| n.abs() < bound).filter(|_| hypotheses) {
        (Verdict::NoTgsEulerBound, format!("Euler bound: |e| = {} < 2g-1 = {bound} at real place {}", n.abs(), i + 1))
    } else if facts.reid_holds() {
        (Verdict::NoClosedTgsReid, "Reid: odd degree, no proper real subfield, integral traces".to_string())
    } else {
        (Verdict::Inconclusive, "no rule applies".to_string())
    };
    let verdict = if obstruction == Verdict::Inconclusive && facts.known_unique_surface {
        justification = format!("known unique surface; {justification}");
        Verdict::KnownUniqueSurface
    } else {
        obstruction
    };
    Ok(ObstructionReport {
        knot: facts.name.clone(),
        field: facts.field.clone(),
        genus,
        fibered: facts.fibered,
        euler: euler.to_vec(),
        obstruction,
        verdict,
        justification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotgroup::{build_representation, two_bridge_presentation};
    use crate::polycore::RatPoly;
    use proptest::prelude::*;

    const P: u64 = 128;

    fn b(v: f64) -> Ball {
        Ball::from_f64(v, P)
    }

    fn mat(a: f64, bb: f64, c: f64, d: f64) -> [Ball; 4] {
        [b(a), b(bb), b(c), b(d)]
    }

    fn close(x: &Ball, y: f64) -> bool {
        (x.mid_f64() - y).abs() < 1e-12
    }

    fn rep(p: i64, q: i64, minpoly: &[i64]) -> MatrixRep {
        build_representation(&two_bridge_presentation(p, q).unwrap(), &RatPoly::from_ints(minpoly)).unwrap()
    }

    fn rep73() -> MatrixRep {
        rep(13, 9, &[1, 5, -6, -4, 9, -5, 1])
    }

    #[test]
    fn su11_examples() {
        let id = to_su11(&mat(1.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(id.gamma.abs_upper() < 1e-30 && close(&id.omega, 0.0));
        let a = to_su11(&mat(1.0, 1.0, 0.0, 1.0)).unwrap();
        let (re, im) = a.gamma.mid_f64();
        assert!((re - 0.2).abs() < 1e-15 && (im - 0.4).abs() < 1e-15);
        assert!(close(&a.omega, 0.5f64.atan()));
        let z = -0.7;
        let bz = to_su11(&mat(1.0, 0.0, z, 1.0)).unwrap();
        // zi/(2 − zi) and −arctan(z/2), reduced into [0, π)
        let (re, im) = bz.gamma.mid_f64();
        let d = 4.0 + z * z;
        assert!((re - (-z * z / d)).abs() < 1e-15 && (im - 2.0 * z / d).abs() < 1e-15);
        assert!(close(&bz.omega, -(z / 2.0f64).atan()));
        assert!(to_su11(&mat(2.0, 0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn central_elements() {
        let c = LiftedElement::central(1, P);
        let c2 = ucover_mul(&c, &c).unwrap();
        assert!(close(&c2.omega, 2.0 * std::f64::consts::PI));
        let x = to_su11(&mat(2.0, 1.0, 3.0, 2.0)).unwrap();
        let y = ucover_mul(&x, &LiftedElement::identity(P)).unwrap();
        assert!(close(&y.omega, x.omega.mid_f64()));
        let e = ucover_mul(&x, &x.inverse()).unwrap();
        assert!(e.gamma.abs_upper() < 1e-30 && close(&e.omega, 0.0));
    }

    #[test]
    fn section_values() {
        let s = canonical_section(&b(2.0));
        let (re, im) = s.gamma.mid_f64();
        assert!((re - 0.5).abs() < 1e-15 && (im - 0.5).abs() < 1e-15);
        assert!(close(&s.omega, std::f64::consts::FRAC_PI_4));
        let s0 = canonical_section(&b(0.0));
        assert!(s0.gamma.abs_upper() < 1e-30 && close(&s0.omega, 0.0));
        // a parabolic (1 t; 0 1) lifts to the section value at t
        let t = to_su11(&mat(1.0, 0.75, 0.0, 1.0)).unwrap();
        assert!(close(&t.omega, canonical_section(&b(0.75)).omega.mid_f64()));
    }

    #[test]
    fn integer_systems() {
        assert_eq!(solve_integer_system(&[vec![1, -1]], &[3]).map(|m| m[0] - m[1]), Some(3));
        assert_eq!(solve_integer_system(&[vec![2]], &[1]), None);
        let e = vec![vec![2, 4, 0], vec![0, 3, 3]];
        let m = solve_integer_system(&e, &[6, 9]).unwrap();
        assert_eq!(2 * m[0] + 4 * m[1], 6);
        assert_eq!(3 * m[1] + 3 * m[2], 9);
        assert_eq!(solve_integer_system(&[vec![2, 4], vec![1, 2]], &[2, 2]), None);
    }

    #[test]
    fn broken_relator_has_no_lift() {
        // a rotation by π/2 with relator g², whose lift is the central element c
        let images = vec![mat(0.0, -1.0, 1.0, 0.0)];
        let r = lift_generators(&images, &[Word::letter(0, 2)], &[]);
        assert_eq!(r.unwrap_err(), EulerError::NoLiftExists(vec![1]));
    }

    #[test]
    fn example_lifts_of_7_3() {
        let rep = rep73();
        for place in 0..2 {
            let lifts = lift_representation(&rep, place, P).unwrap();
            let z = rep.field.real_generator(place, P).unwrap().mid_f64();
            let (re, im) = lifts[0].gamma.mid_f64();
            assert!((re - 0.2).abs() < 1e-15 && (im - 0.4).abs() < 1e-15);
            // the corrected lifts differ from the stated ones by central powers only
            let ka = (lifts[0].omega.mid_f64() - 0.5f64.atan()) / std::f64::consts::PI;
            let kb = (lifts[1].omega.mid_f64() + (z / 2.0).atan()) / std::f64::consts::PI;
            assert!((ka - ka.round()).abs() < 1e-12 && (kb - kb.round()).abs() < 1e-12);
            let inv: Vec<_> = lifts.iter().map(|l| l.inverse()).collect();
            let r = evaluate_lifted(&lifts, &inv, &rep.presentation.relators[0]).unwrap();
            assert!(r.gamma.abs_upper() < 1e-15 && r.omega.max_abs_f64() < 1e-15);
        }
    }

    #[test]
    fn euler_numbers_of_7_3() {
        let rep = rep73();
        let t: Vec<i64> = euler_tuple(&rep, P).unwrap().iter().map(|r| r.n).collect();
        assert_eq!(t, vec![3, 1]);
        let r = euler_number(&rep, 0, P).unwrap();
        assert!(r.residual < RESIDUAL_TOLERANCE);
        assert!(matches!(euler_number(&rep, 2, P), Err(EulerError::NoSuchPlace(2))));
    }

    #[test]
    fn euler_anchors() {
        let r86 = rep(23, 13, &[1, -2, -1, 15, -29, 40, -40, 32, -19, 10, -3, 1]);
        assert_eq!(euler_number(&r86, 0, P).unwrap().n, -1);
        let r910 = rep(33, 23, &[1, 8, -6, -9, 13, -6, 1]);
        let t: Vec<i64> = euler_tuple(&r910, P).unwrap().iter().map(|r| r.n).collect();
        assert_eq!(t, vec![3, 1]);
    }

    #[test]
    fn lift_offsets_and_conjugation() {
        let rep = rep73();
        for (i, off) in [[1, 0], [0, 1], [-3, 2], [5, 5]].iter().enumerate() {
            assert_eq!(euler_number_with(&rep, i % 2, P, off, &Word::empty()).unwrap().n, [3, 1][i % 2]);
        }
        let names = ["a", "b"];
        for g in ["b", "a b", "b^-2 a"] {
            let g = Word::parse(g, &names).unwrap();
            assert_eq!(euler_number_with(&rep, 0, P, &[], &g).unwrap().n, 3);
        }
    }

    #[test]
    fn genus_one_knot_7_4() {
        let rep = rep(15, 11, &[1, 4, -4, 1]);
        let e = euler_number(&rep, 0, P).unwrap();
        assert_eq!(e.n.abs(), 1);
        let reid = reid_predicate(&rep, &[]);
        assert!(reid.odd_degree && reid.integral_traces && reid.no_closed_tgs);
        assert_eq!(reid.degree, 3);
        assert_eq!(orientability_predicate(&rep.field), Orientability::OrientableOnly);
        let facts = KnotFacts::from_rep(&rep, Some(1), false, false, &[]);
        let report = obstruction_verdict(&facts, &[e.n]).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        let tagged = KnotFacts { known_unique_surface: true, ..facts };
        assert_eq!(obstruction_verdict(&tagged, &[e.n]).unwrap().verdict, Verdict::KnownUniqueSurface);
    }

    #[test]
    fn verdict_rules() {
        let rep = rep73();
        let facts = KnotFacts::from_rep(&rep, Some(2), false, false, &[]);
        let r = obstruction_verdict(&facts, &[3, 1]).unwrap();
        assert_eq!(r.verdict, Verdict::NoTgsEulerBound);
        assert!(r.justification.contains("real place 2"));
        let fibered = KnotFacts { fibered: true, ..facts.clone() };
        assert_eq!(obstruction_verdict(&fibered, &[3, 1]).unwrap().verdict, Verdict::NoTgsCalegariFibered);
        assert!(matches!(obstruction_verdict(&facts, &[5, 1]), Err(EulerError::MilnorWoodViolated { n: 5, bound: 3 })));
        let flagged =
            KnotFacts::from_rep(&rep, Some(2), false, false, &["contains a real quadratic field".to_string()]);
        assert_ne!(obstruction_verdict(&flagged, &[3, 1]).unwrap().verdict, Verdict::NoTgsEulerBound);
        let no_genus = KnotFacts { genus: None, ..facts };
        assert!(matches!(obstruction_verdict(&no_genus, &[]), Err(EulerError::MissingGenus(_))));
    }

    fn sl2() -> impl Strategy<Value = [f64; 4]> {
        (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
            .prop_filter("a away from 0", |(a, _, _)| a.abs() > 0.2)
            .prop_map(|(a, bb, c)| [a, bb, c, (1.0 + bb * c) / a])
    }

    fn exact(m: [f64; 4]) -> [Ball; 4] {
        // rebuild d exactly from the dyadic a, b, c so that det = 1 within radius
        let [a, bb, c, _] = m.map(|x| Ball::from_f64(x, P));
        let d = Ball::one(P).add(&bb.mul(&c)).div(&a).unwrap();
        [a, bb, c, d]
    }

    fn mul_balls(x: &[Ball; 4], y: &[Ball; 4]) -> [Ball; 4] {
        [
            x[0].mul(&y[0]).add(&x[1].mul(&y[2])),
            x[0].mul(&y[1]).add(&x[1].mul(&y[3])),
            x[2].mul(&y[0]).add(&x[3].mul(&y[2])),
            x[2].mul(&y[1]).add(&x[3].mul(&y[3])),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn projection_is_a_homomorphism(m1 in sl2(), m2 in sl2()) {
            let (x, y) = (exact(m1), exact(m2));
            let prod = ucover_mul(&to_su11(&x).unwrap(), &to_su11(&y).unwrap()).unwrap();
            let direct = to_su11(&mul_balls(&x, &y)).unwrap();
            let (g, w) = prod.project();
            let dg = g.sub(&direct.gamma);
            prop_assert!(dg.abs_upper() < 1e-20);
            let dw = (w.mid_f64() - direct.omega.mid_f64()).abs();
            prop_assert!(dw < 1e-20 || (dw - std::f64::consts::PI).abs() < 1e-20);
        }

        #[test]
        fn group_law_is_associative(m1 in sl2(), m2 in sl2(), m3 in sl2(), k in -2i64..3) {
            let x = to_su11(&exact(m1)).unwrap().shift(k);
            let y = to_su11(&exact(m2)).unwrap();
            let z = to_su11(&exact(m3)).unwrap();
            let l = ucover_mul(&ucover_mul(&x, &y).unwrap(), &z).unwrap();
            let r = ucover_mul(&x, &ucover_mul(&y, &z).unwrap()).unwrap();
            prop_assert!(l.gamma.sub(&r.gamma).abs_upper() < 1e-20);
            prop_assert!(l.omega.sub(&r.omega).max_abs_f64() < 1e-20);
        }
    }
}
