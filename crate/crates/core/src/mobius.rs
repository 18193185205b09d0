//! Boundary geometry on the Riemann sphere: Möbius images of lines and circles, tangency,
//! geodesic endpoint typing, the denominator systems behind the uniqueness arguments, and SVG
//! output of the lift configurations.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::ball::{Ball, CBall};
use crate::knotgroup::{build_representation, two_bridge_presentation, KnotError, MatrixRep, Word};
use crate::numfield::{minimal_polynomial, FieldElement, FieldError, FieldMatrix};
use crate::polycore::{RatPoly, Q};
use crate::pretzel::{pretzel_holonomy, PretzelData, PretzelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MobiusError {
    #[error("DegenerateCline")]
    DegenerateCline,
    #[error("UnsupportedCase: {0}")]
    UnsupportedCase(String),
    #[error("NotAGeodesicEndpoint: degree {0}")]
    NotAGeodesicEndpoint(usize),
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    Pretzel(#[from] PretzelError),
}

/// A point of ℂ ∪ {∞} with coordinates in the field.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Finite(FieldElement),
    Infinity,
}

impl Point {
    pub fn embed(&self, place: usize, prec: u64) -> Result<NumPoint, MobiusError> {
        Ok(match self {
            Point::Infinity => NumPoint::Infinity,
            Point::Finite(x) => NumPoint::Finite(x.embed_complex(place, prec)?),
        })
    }
}

pub fn mobius_apply(m: &FieldMatrix, pt: &Point) -> Point {
    match pt {
        Point::Infinity => {
            if m.c.is_zero() {
                Point::Infinity
            } else {
                Point::Finite(m.a.div(&m.c).expect("nonzero"))
            }
        }
        Point::Finite(w) => {
            let den = &(&m.c * w) + &m.d;
            if den.is_zero() {
                Point::Infinity
            } else {
                Point::Finite((&(&m.a * w) + &m.b).div(&den).expect("nonzero"))
            }
        }
    }
}

/// Whether `x` is a rational multiple of `dir`.
fn rational_ratio(x: &FieldElement, dir: &FieldElement) -> bool {
    x.div(dir).ok().and_then(|r| r.as_rational()).is_some()
}

/// The image under `map` of the line through 0 and ∞ in direction `dir`.
#[derive(Debug, Clone)]
pub struct ExactCline {
    pub map: FieldMatrix,
    pub dir: FieldElement,
}

impl ExactCline {
    pub fn line(dir: FieldElement) -> Self {
        ExactCline { map: FieldMatrix::identity(dir.field()), dir }
    }

    pub fn image(&self, m: &FieldMatrix) -> Self {
        ExactCline { map: m.mul(&self.map), dir: self.dir.clone() }
    }

    fn base_point(&self, t: i64) -> Point {
        Point::Finite(self.dir.scale(&Q::from_integer(t.into())))
    }

    fn on_base(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Finite(w) => w.is_zero() || rational_ratio(w, &self.dir),
        }
    }

    /// Exact membership; `false` only means no rational parameter was found.
    pub fn contains(&self, p: &Point) -> Result<bool, MobiusError> {
        Ok(self.on_base(&mobius_apply(&self.map.inverse()?, p)))
    }

    pub fn is_line(&self) -> Result<bool, MobiusError> {
        self.contains(&Point::Infinity)
    }

    /// Two distinct finite points of the cline, avoiding the preimage of ∞.
    fn finite_points(&self) -> Result<(FieldElement, FieldElement), MobiusError> {
        let pre = mobius_apply(&self.map.inverse()?, &Point::Infinity);
        let mut out = Vec::new();
        for cand in [self.base_point(0), self.base_point(1), self.base_point(2), Point::Infinity] {
            if cand != pre {
                if let Point::Finite(x) = mobius_apply(&self.map, &cand) {
                    out.push(x);
                }
            }
            if out.len() == 2 {
                break;
            }
        }
        Ok((out[0].clone(), out[1].clone()))
    }

    pub fn to_numeric(&self, place: usize, prec: u64) -> Result<Cline, MobiusError> {
        let emb = |x: &FieldElement| x.embed_complex(place, prec).map_err(MobiusError::from);
        if self.is_line()? {
            let (u, v) = self.finite_points()?;
            let (u, v) = (emb(&u)?, emb(&v)?);
            return Ok(Cline::Line { direction: v.sub(&u), point: u });
        }
        let pts: Vec<CBall> = [self.base_point(0), self.base_point(1), Point::Infinity]
            .iter()
            .map(|p| match mobius_apply(&self.map, p) {
                Point::Finite(x) => emb(&x),
                Point::Infinity => Err(MobiusError::DegenerateCline),
            })
            .collect::<Result<_, _>>()?;
        circle_through(&pts[0], &pts[1], &pts[2])
    }
}

/// Image of a cline under a field Möbius map, returned with certified coordinates.
pub fn cline_image(m: &FieldMatrix, c: &ExactCline, place: usize, prec: u64) -> Result<Cline, MobiusError> {
    c.image(m).to_numeric(place, prec)
}

#[derive(Debug, Clone)]
pub enum NumPoint {
    Finite(CBall),
    Infinity,
}

#[derive(Debug, Clone)]
pub enum Cline {
    Circle { center: CBall, radius: Ball },
    Line { point: CBall, direction: CBall },
}

fn circle_through(a: &CBall, b: &CBall, c: &CBall) -> Result<Cline, MobiusError> {
    // circumcenter of a triangle via the standard determinant formula
    let sq = |p: &CBall| p.abs2();
    let d = a.re.mul(&b.im.sub(&c.im)).add(&b.re.mul(&c.im.sub(&a.im))).add(&c.re.mul(&a.im.sub(&b.im))).mul_2exp(1);
    if d.contains_zero() {
        return Err(MobiusError::DegenerateCline);
    }
    let ux = sq(a).mul(&b.im.sub(&c.im)).add(&sq(b).mul(&c.im.sub(&a.im))).add(&sq(c).mul(&a.im.sub(&b.im)));
    let uy = sq(a).mul(&c.re.sub(&b.re)).add(&sq(b).mul(&a.re.sub(&c.re))).add(&sq(c).mul(&b.re.sub(&a.re)));
    let center =
        CBall::new(ux.div(&d).ok_or(MobiusError::DegenerateCline)?, uy.div(&d).ok_or(MobiusError::DegenerateCline)?);
    let radius = a.sub(&center).abs2().sqrt().ok_or(MobiusError::DegenerateCline)?;
    Ok(Cline::Circle { center, radius })
}

#[derive(Debug, Clone)]
pub enum Tangency {
    Disjoint,
    Tangent(NumPoint),
    Secant(NumPoint, NumPoint),
    Indeterminate,
}

impl Tangency {
    pub fn label(&self) -> &'static str {
        match self {
            Tangency::Disjoint => "disjoint",
            Tangency::Tangent(_) => "tangent",
            Tangency::Secant(..) => "secant",
            Tangency::Indeterminate => "indeterminate",
        }
    }
}

fn cross(u: &CBall, v: &CBall) -> Ball {
    u.re.mul(&v.im).sub(&u.im.mul(&v.re))
}

fn dot(u: &CBall, v: &CBall) -> Ball {
    u.re.mul(&v.re).add(&u.im.mul(&v.im))
}

fn line_circle(p: &CBall, dir: &CBall, c: &CBall, r: &Ball) -> Tangency {
    let n2 = dir.abs2();
    let Some(dist2) = cross(dir, &c.sub(p)).sqr().div(&n2) else { return Tangency::Indeterminate };
    let gap = r.sqr().sub(&dist2);
    if gap.is_negative() {
        return Tangency::Disjoint;
    }
    if !gap.is_positive() {
        return Tangency::Indeterminate;
    }
    let (Some(t), Some(h), Some(n)) = (dot(dir, &c.sub(p)).div(&n2), gap.sqrt(), n2.sqrt()) else {
        return Tangency::Indeterminate;
    };
    let foot = p.add(&dir.scale(&t));
    let Some(step) = h.div(&n) else { return Tangency::Indeterminate };
    let off = dir.scale(&step);
    Tangency::Secant(NumPoint::Finite(foot.sub(&off)), NumPoint::Finite(foot.add(&off)))
}

/// Numeric classification; never certifies a tangency, which needs exact data.
pub fn tangency(c1: &Cline, c2: &Cline) -> Tangency {
    match (c1, c2) {
        (Cline::Circle { center: a, radius: ra }, Cline::Circle { center: b, radius: rb }) => {
            let d2 = b.sub(a).abs2();
            let outer = ra.add(rb).sqr();
            let inner = ra.sub(rb).sqr();
            if outer.lt(&d2) || d2.lt(&inner) {
                return Tangency::Disjoint;
            }
            if !(d2.lt(&outer) && inner.lt(&d2)) {
                return Tangency::Indeterminate;
            }
            // radical line, then intersect it with the first circle
            let ab = b.sub(a);
            let Some(t) = ra.sqr().sub(&rb.sqr()).add(&d2).div(&d2.mul_2exp(1)) else {
                return Tangency::Indeterminate;
            };
            let foot = a.add(&ab.scale(&t));
            let perp = CBall::new(ab.im.neg(), ab.re.clone());
            line_circle(&foot, &perp, a, ra)
        }
        (Cline::Line { point, direction }, Cline::Circle { center, radius })
        | (Cline::Circle { center, radius }, Cline::Line { point, direction }) => {
            line_circle(point, direction, center, radius)
        }
        (Cline::Line { point: p, direction: u }, Cline::Line { point: q, direction: v }) => {
            let det = cross(u, v);
            if det.contains_zero() {
                return Tangency::Indeterminate;
            }
            let Some(s) = cross(&q.sub(p), v).div(&det) else { return Tangency::Indeterminate };
            Tangency::Secant(NumPoint::Finite(p.add(&u.scale(&s))), NumPoint::Infinity)
        }
    }
}

/// Exact test that two clines are tangent at `p`: both contain `p`, and after sending `p` to ∞
/// they become parallel lines (rational direction ratio) that are certified distinct.
pub fn tangent_at(e1: &ExactCline, e2: &ExactCline, p: &Point, place: usize, prec: u64) -> Result<bool, MobiusError> {
    if !e1.contains(p)? || !e2.contains(p)? {
        return Ok(false);
    }
    let f = e1.dir.field();
    let transport = match p {
        Point::Infinity => FieldMatrix::identity(f),
        Point::Finite(w) => {
            FieldMatrix::new(FieldElement::zero(f), FieldElement::one(f), -&FieldElement::one(f), w.clone())
        }
    };
    let (l1, l2) = (e1.image(&transport), e2.image(&transport));
    let (u1, v1) = l1.finite_points()?;
    let (u2, v2) = l2.finite_points()?;
    let (d1, d2) = (&v1 - &u1, &v2 - &u2);
    if !rational_ratio(&d1, &d2) {
        return Ok(false);
    }
    let offset = cross(&d1.embed_complex(place, prec)?, &(&u2 - &u1).embed_complex(place, prec)?);
    Ok(!offset.contains_zero())
}

/// Numeric classification, upgraded to an exact tangency at one of `candidates` when the
/// numeric answer is indeterminate.
pub fn classify(
    e1: &ExactCline,
    e2: &ExactCline,
    candidates: &[Point],
    place: usize,
    prec: u64,
) -> Result<Tangency, MobiusError> {
    let t = tangency(&e1.to_numeric(place, prec)?, &e2.to_numeric(place, prec)?);
    if !matches!(t, Tangency::Indeterminate) {
        return Ok(t);
    }
    for p in candidates {
        if tangent_at(e1, e2, p, place, prec)? {
            return Ok(Tangency::Tangent(p.embed(place, prec)?));
        }
    }
    Ok(Tangency::Indeterminate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndpointType {
    CuspToCusp,
    ClosedGeodesicCandidate,
}

/// Rational endpoints come from cusps, quadratic irrationals from closed geodesics.
pub fn endpoint_type(sigma: &FieldElement) -> Result<EndpointType, MobiusError> {
    match minimal_polynomial(sigma).degree().unwrap_or(0) {
        1 => Ok(EndpointType::CuspToCusp),
        2 => Ok(EndpointType::ClosedGeodesicCandidate),
        d => Err(MobiusError::NotAGeodesicEndpoint(d)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UniqVerdict {
    OnlyZeroSolution,
    NonzeroSolutionExists,
}

/// Linear conditions on e₁ = σ₁ + σ₂ and e₂ = σ₁σ₂ for the denominator
/// (c δ σ₁ + d)(c δ σ₂ + d) = d² + cdδ e₁ + c²δ² e₂ to be rational.
#[derive(Debug, Clone, Serialize)]
pub struct UniqSystem {
    pub word: String,
    pub case_label: String,
    /// Rows for the z², z¹ coefficients (highest first), columns (e₁, e₂).
    #[serde(serialize_with = "ser::matrix")]
    pub matrix: [[Q; 2]; 2],
    #[serde(serialize_with = "ser::pair")]
    pub rhs: [Q; 2],
    /// The remaining non-constant coefficients for fields of degree above 3.
    #[serde(serialize_with = "ser::rows")]
    pub extra_rows: Vec<([Q; 2], Q)>,
    /// (θ₁ − θ₂)/direction = prefactor · (σ₁ − σ₂)/denominator.
    #[serde(serialize_with = "ser::single")]
    pub prefactor: Q,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniqOutcome {
    pub system: UniqSystem,
    pub verdict: UniqVerdict,
    /// The unique (e₁, e₂), when the system determines one.
    #[serde(serialize_with = "ser::solution")]
    pub solution: Option<(Q, Q)>,
    /// Whether some solution has distinct real roots σ₁ ≠ σ₂ of t² − e₁t + e₂.
    pub real_distinct_sigma: bool,
}

mod ser {
    use super::Q;
    use serde::{Serialize, Serializer};

    pub fn single<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        x.to_string().serialize(s)
    }

    pub fn pair<S: Serializer>(x: &[Q; 2], s: S) -> Result<S::Ok, S::Error> {
        [x[0].to_string(), x[1].to_string()].serialize(s)
    }

    pub fn matrix<S: Serializer>(m: &[[Q; 2]; 2], s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|r| [r[0].to_string(), r[1].to_string()]).collect::<Vec<_>>().serialize(s)
    }

    pub fn rows<S: Serializer>(rows: &[([Q; 2], Q)], s: S) -> Result<S::Ok, S::Error> {
        rows.iter().map(|(r, c)| [r[0].to_string(), r[1].to_string(), c.to_string()]).collect::<Vec<_>>().serialize(s)
    }

    pub fn solution<S: Serializer>(x: &Option<(Q, Q)>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|(a, b)| [a.to_string(), b.to_string()]).serialize(s)
    }
}

/// `None`: inconsistent. `Some(None)`: a one- or two-parameter family. `Some(Some(x))`: unique.
fn solve_rows(rows: &[([Q; 2], Q)]) -> Option<Option<(Q, Q)>> {
    let zero = Q::from_integer(0.into());
    let consistent = |x: &Q, y: &Q| rows.iter().all(|([a, b], r)| a * x + b * y == *r);
    for (i, ([a, b], r)) in rows.iter().enumerate() {
        for ([c, d], s) in &rows[i + 1..] {
            let det = a * d - b * c;
            if det != zero {
                let (x, y) = ((r * d - b * s) / &det, (a * s - r * c) / &det);
                return consistent(&x, &y).then_some(Some((x, y)));
            }
        }
    }
    // rank at most one: test a particular solution of the first nonzero row
    match rows.iter().find(|([a, b], _)| *a != zero || *b != zero) {
        None => rows.iter().all(|(_, r)| *r == zero).then_some(None),
        Some(([a, b], r)) => {
            let (x, y) = if *a != zero { (r / a, zero.clone()) } else { (zero.clone(), r / b) };
            consistent(&x, &y).then_some(None)
        }
    }
}

pub fn uniqueness_system(
    gamma: &FieldMatrix,
    scale: &FieldElement,
    direction: &FieldElement,
    word: &str,
    case_label: &str,
) -> Result<UniqOutcome, MobiusError> {
    let f = scale.field();
    if f.degree() < 3 {
        return Err(MobiusError::UnsupportedCase(format!("field of degree {}", f.degree())));
    }
    let prefactor = scale
        .div(direction)?
        .as_rational()
        .ok_or_else(|| MobiusError::UnsupportedCase("scale is not a rational multiple of the direction".into()))?;
    let (c, d) = (&gamma.c, &gamma.d);
    let constant = d * d;
    let lin = &(c * d) * scale;
    let quad = &(&(c * c) * scale) * scale;
    let row = |i: usize| ([lin.coeffs()[i].clone(), quad.coeffs()[i].clone()], -constant.coeffs()[i].clone());
    let (r2, r1) = (row(2), row(1));
    let extra_rows: Vec<_> = (3..f.degree()).map(row).collect();
    let mut rows = vec![r2.clone(), r1.clone()];
    rows.extend(extra_rows.iter().cloned());
    let zero = Q::from_integer(0.into());
    let four = Q::from_integer(4.into());
    let (verdict, solution, real_distinct_sigma) = match solve_rows(&rows) {
        None => (UniqVerdict::OnlyZeroSolution, None, false),
        Some(Some((e1, e2))) => {
            let nonzero = e1 != zero || e2 != zero;
            let real = &e1 * &e1 - &four * &e2 > zero;
            let v = if nonzero { UniqVerdict::NonzeroSolutionExists } else { UniqVerdict::OnlyZeroSolution };
            (v, Some((e1, e2)), real)
        }
        Some(None) => (UniqVerdict::NonzeroSolutionExists, None, true),
    };
    Ok(UniqOutcome {
        system: UniqSystem {
            word: word.to_string(),
            case_label: case_label.to_string(),
            matrix: [r2.0, r1.0],
            rhs: [r2.1, r1.1],
            extra_rows,
            prefactor,
        },
        verdict,
        solution,
        real_distinct_sigma,
    })
}

/// 7_4 in Riley coordinates x = (1 1; 0 1), y = (1 0; z 1).
pub fn rep_7_4() -> Result<MatrixRep, MobiusError> {
    Ok(build_representation(&two_bridge_presentation(15, 11)?, &RatPoly::from_ints(&[1, 4, -4, 1]))?)
}

/// (z − 1)(z − 2): the diagonal conjugator squared, and the direction of ∂H.
fn strip_scale_7_4(rep: &MatrixRep) -> FieldElement {
    FieldElement::from_ints(&rep.field, &[2, -3, 1])
}

pub fn uniqueness_systems_7_4() -> Result<Vec<UniqOutcome>, MobiusError> {
    let rep = rep_7_4()?;
    let scale = strip_scale_7_4(&rep);
    let tau = rep.longitude_tau().ok_or_else(|| MobiusError::UnsupportedCase("longitude".into()))?;
    let direction = &tau + &FieldElement::from_i64(&rep.field, 2);
    let names = ["x", "y"];
    [("y", "case 1"), ("x y^-1", "case 2")]
        .iter()
        .map(|(w, label)| {
            let g = rep.evaluate(&Word::parse(w, &names)?);
            uniqueness_system(&g, &scale, &direction, w, label)
        })
        .collect()
}

/// Systems for the circles g_j(H_τ) of P(2k+1, 2k+1, 2k+1).
pub fn uniqueness_systems_pretzel(k: u32, js: &[usize]) -> Result<Vec<UniqOutcome>, MobiusError> {
    let d = pretzel_holonomy(k)?;
    let scale = d.z().inverse()?;
    js.iter()
        .map(|&j| {
            let w = d.words.g[j].display_with(&["s1", "s2", "s3"]);
            uniqueness_system(&d.g(j), &scale, &d.tau, &w, &format!("j = {j}"))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub knot: String,
    pub checks: Vec<(String, bool)>,
    pub systems: Vec<UniqOutcome>,
    /// Every system rules out distinct real endpoints and every geometric check passed.
    pub unique: bool,
}

fn complex_place_prec() -> (usize, u64) {
    (0, 128)
}

/// The slope-2 strip of 7_4 between H and x(H).
pub fn uniqueness_check_7_4() -> Result<UniquenessReport, MobiusError> {
    let rep = rep_7_4()?;
    let (place, prec) = complex_place_prec();
    let f = &rep.field;
    let names = ["x", "y"];
    let ev = |w: &str| -> Result<FieldMatrix, MobiusError> { Ok(rep.evaluate(&Word::parse(w, &names)?)) };
    let tau = rep.longitude_tau().ok_or_else(|| MobiusError::UnsupportedCase("longitude".into()))?;
    let q = |n: i64, d: i64| Q::new(n.into(), d.into());
    let tp2 = &tau + &FieldElement::from_i64(f, 2);
    let m = ev("y^-1 x y^-1")?;
    let mut checks = Vec::new();
    checks.push((
        "y^-1 x y^-1 sends (tau+2)/4 to infinity".to_string(),
        mobius_apply(&m, &Point::Finite(tp2.scale(&q(1, 4)))) == Point::Infinity,
    ));
    checks.push((
        "y^-1 x y^-1 sends infinity to -(tau+2)/4".to_string(),
        mobius_apply(&m, &Point::Infinity) == Point::Finite(tp2.scale(&q(-1, 4))),
    ));
    let at0 = &tau.scale(&q(-1, 8)) - &FieldElement::rational(f, q(3, 4));
    checks.push((
        "y^-1 x y^-1 sends 0 to -tau/8 - 3/4".to_string(),
        mobius_apply(&m, &Point::Finite(FieldElement::zero(f))) == Point::Finite(at0),
    ));
    let h = ExactCline::line(strip_scale_7_4(&rep));
    let image = h.image(&m);
    let (u, v) = image.finite_points()?;
    let slope_minus_two = image.is_line()? && rational_ratio(&(&v - &u), &(&tau - &FieldElement::from_i64(f, 2)));
    checks.push(("y^-1 x y^-1 (H) is vertical with slope -2".to_string(), slope_minus_two));
    let xh = h.image(&ev("x")?);
    let c1 = h.image(&ev("y")?);
    let c2 = h.image(&ev("x y^-1")?);
    let zero = Point::Finite(FieldElement::zero(f));
    let one = Point::Finite(FieldElement::one(f));
    checks.push(("C1 tangent to H at 0".to_string(), tangent_at(&c1, &h, &zero, place, prec)?));
    checks.push(("C2 tangent to x(H) at 1".to_string(), tangent_at(&c2, &xh, &one, place, prec)?));
    let meet = classify(&c1, &c2, &[], place, prec)?;
    checks.push(("C1 and C2 meet in two points".to_string(), matches!(meet, Tangency::Secant(..))));
    let systems = uniqueness_systems_7_4()?;
    let unique = checks.iter().all(|c| c.1) && systems.iter().all(|s| !s.real_distinct_sigma);
    Ok(UniquenessReport { knot: "7_4".into(), checks, systems, unique })
}

/// Chain of circles g_j(H_τ), h_j(H_τ) for P(2k+1, 2k+1, 2k+1) and the systems for j = 1, 2.
pub fn uniqueness_check_pretzel(k: u32) -> Result<UniquenessReport, MobiusError> {
    let d = pretzel_holonomy(k)?;
    let (place, prec) = complex_place_prec();
    let chain = pretzel_clines(&d);
    let mut checks = Vec::new();
    let zero = Point::Finite(FieldElement::zero(&d.field));
    let meeting = Point::Finite((&d.z() - &FieldElement::one(&d.field)).div(&d.z().scale(&Q::from_integer(2.into())))?);
    let n = 2 * k as usize;
    checks.push(("C1 tangent to C0 at 0".to_string(), tangent_at(&chain.c[1], &chain.c[0], &zero, place, prec)?));
    let mut consecutive = true;
    for j in 1..n {
        let g = d.g(j);
        let cands = [mobius_apply(&g, &zero), mobius_apply(&g, &Point::Infinity)];
        consecutive &= matches!(classify(&chain.c[j], &chain.c[j + 1], &cands, place, prec)?, Tangency::Tangent(_));
    }
    checks.push(("consecutive C_j tangent".to_string(), consecutive));
    checks.push((
        format!("C{n} tangent to D{n} at (z-1)/(2z)"),
        tangent_at(&chain.c[n], &chain.d[n], &meeting, place, prec)?,
    ));
    let systems = uniqueness_systems_pretzel(k, &[1, 2])?;
    let unique = checks.iter().all(|c| c.1) && systems.iter().all(|s| !s.real_distinct_sigma);
    Ok(UniquenessReport { knot: d.rep.presentation.name.clone(), checks, systems, unique })
}

pub struct PretzelClines {
    pub h_tau: ExactCline,
    pub c: Vec<ExactCline>,
    pub d: Vec<ExactCline>,
}

pub fn pretzel_clines(d: &PretzelData) -> PretzelClines {
    let h_tau = ExactCline::line(d.tau.clone());
    let n = 2 * d.k as usize;
    PretzelClines {
        c: (0..=n).map(|j| h_tau.image(&d.g(j))).collect(),
        d: (0..=n).map(|j| h_tau.image(&d.h(j))).collect(),
        h_tau,
    }
}

/// Plain coordinates for drawing.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Circle { cx: f64, cy: f64, r: f64 },
    Line { px: f64, py: f64, dx: f64, dy: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub x: f64,
    pub y: f64,
    pub text: String,
}

impl Cline {
    pub fn to_shape(&self) -> Shape {
        match self {
            Cline::Circle { center, radius } => {
                let (cx, cy) = center.mid_f64();
                Shape::Circle { cx, cy, r: radius.mid_f64() }
            }
            Cline::Line { point, direction } => {
                let (px, py) = point.mid_f64();
                let (dx, dy) = direction.mid_f64();
                Shape::Line { px, py, dx, dy }
            }
        }
    }
}

fn clip(px: f64, py: f64, dx: f64, dy: f64, b: [f64; 4]) -> Option<[f64; 4]> {
    // Liang–Barsky against [x0, x1] × [y0, y1]
    let [x0, y0, x1, y1] = b;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p, q0, q1) in [(dx, x0 - px, x1 - px), (dy, y0 - py, y1 - py)] {
        if p == 0.0 {
            if q0 > 0.0 || q1 < 0.0 {
                return None;
            }
            continue;
        }
        let (a, c) = ((q0 / p).min(q1 / p), (q0 / p).max(q1 / p));
        lo = lo.max(a);
        hi = hi.min(c);
    }
    (lo <= hi).then_some([px + lo * dx, py + lo * dy, px + hi * dx, py + hi * dy])
}

/// Deterministic SVG: the view box is the bounding box of circles, line anchors and labels
/// with a 10% margin; y points up.
pub fn render_svg(shapes: &[Shape], labels: &[Label]) -> String {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in shapes {
        match s {
            Shape::Circle { cx, cy, r } => {
                pts.push((cx - r, cy - r));
                pts.push((cx + r, cy + r));
            }
            Shape::Line { px, py, .. } => pts.push((*px, *py)),
        }
    }
    pts.extend(labels.iter().map(|l| (l.x, l.y)));
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if pts.is_empty() {
        out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 1 1\"/>\n");
        return out;
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, y) in &pts {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-6);
    let m = 0.1 * span;
    let (x0, y0, x1, y1) = (x0 - m, y0 - m, x1 + m, y1 + m);
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = span / 300.0;
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\" width=\"640\" height=\"{:.0}\">",
        x0,
        -y1,
        w,
        h,
        640.0 * h / w
    );
    let _ = writeln!(out, "<g fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.6}\">");
    for s in shapes {
        match s {
            Shape::Circle { cx, cy, r } => {
                let _ = writeln!(out, "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\"/>", cx, -cy, r);
            }
            Shape::Line { px, py, dx, dy } => {
                if let Some([ax, ay, bx, by]) = clip(*px, *py, *dx, *dy, [x0, y0, x1, y1]) {
                    let _ =
                        writeln!(out, "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\"/>", ax, -ay, bx, -by);
                }
            }
        }
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, "<g font-family=\"serif\" font-size=\"{:.6}\">", span / 30.0);
    for l in labels {
        let text = l.text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(out, "<text x=\"{:.6}\" y=\"{:.6}\">{text}</text>", l.x, -l.y);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn labelled(items: &[(String, &ExactCline)], place: usize, prec: u64) -> Result<(Vec<Shape>, Vec<Label>), MobiusError> {
    let mut shapes = Vec::new();
    let mut labels = Vec::new();
    for (name, c) in items {
        let shape = c.to_numeric(place, prec)?.to_shape();
        let (x, y) = match &shape {
            Shape::Circle { cx, cy, r } => (*cx, cy + r),
            Shape::Line { px, py, .. } => (*px, *py),
        };
        labels.push(Label { x, y, text: name.clone() });
        shapes.push(shape);
    }
    Ok((shapes, labels))
}

/// Lifts ∂H_τ, s₁(H_τ), C_j, D_j for P(2k+1, 2k+1, 2k+1).
pub fn render_pretzel_chain(k: u32) -> Result<String, MobiusError> {
    let d = pretzel_holonomy(k)?;
    let (place, prec) = complex_place_prec();
    let chain = pretzel_clines(&d);
    let s1 = chain.h_tau.image(&d.rep.images[0]);
    let mut items = vec![("H".to_string(), &chain.h_tau), ("s1(H)".to_string(), &s1)];
    for j in 1..chain.c.len() {
        items.push((format!("C{j}"), &chain.c[j]));
    }
    for j in 1..chain.d.len() {
        items.push((format!("D{j}"), &chain.d[j]));
    }
    let (shapes, labels) = labelled(&items, place, prec)?;
    Ok(render_svg(&shapes, &labels))
}

/// H, x(H), C₁ = y(H), C₂ = xy⁻¹(H) for 7_4.
pub fn render_strip_7_4() -> Result<String, MobiusError> {
    let rep = rep_7_4()?;
    let (place, prec) = complex_place_prec();
    let names = ["x", "y"];
    let ev = |w: &str| -> Result<FieldMatrix, MobiusError> { Ok(rep.evaluate(&Word::parse(w, &names)?)) };
    let h = ExactCline::line(strip_scale_7_4(&rep));
    let xh = h.image(&ev("x")?);
    let c1 = h.image(&ev("y")?);
    let c2 = h.image(&ev("x y^-1")?);
    let items =
        vec![("H".to_string(), &h), ("x(H)".to_string(), &xh), ("C1".to_string(), &c1), ("C2".to_string(), &c2)];
    let (shapes, labels) = labelled(&items, place, prec)?;
    Ok(render_svg(&shapes, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;
    use crate::polycore::qf;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn identity_and_infinity() {
        let rep = rep_7_4().unwrap();
        let f = &rep.field;
        let id = FieldMatrix::identity(f);
        let p = Point::Finite(FieldElement::from_ints(f, &[1, 2]));
        assert_eq!(mobius_apply(&id, &p), p);
        assert_eq!(mobius_apply(&id, &Point::Infinity), Point::Infinity);
        let x = &rep.images[0];
        assert_eq!(mobius_apply(x, &Point::Infinity), Point::Infinity);
    }

    #[test]
    fn strip_of_7_4() {
        let r = uniqueness_check_7_4().unwrap();
        for (name, ok) in &r.checks {
            assert!(ok, "{name}");
        }
        assert!(r.unique);
    }

    #[test]
    fn systems_of_7_4() {
        let s = uniqueness_systems_7_4().unwrap();
        assert_eq!(s[0].system.matrix, [[q(1), q(-2)], [q(-2), q(3)]]);
        assert_eq!(s[1].system.matrix, [[q(-1), q(-2)], [q(2), q(3)]]);
        for o in &s {
            assert_eq!(o.verdict, UniqVerdict::OnlyZeroSolution);
            assert_eq!(o.system.rhs, [q(0), q(0)]);
            assert_eq!(o.system.prefactor, qf(-1, 4));
        }
    }

    #[test]
    fn systems_of_9_35() {
        let s = uniqueness_systems_pretzel(1, &[1, 2]).unwrap();
        assert_eq!(s[0].system.matrix, [[q(0), q(1)], [q(-1), q(0)]]);
        assert_eq!(s[0].verdict, UniqVerdict::OnlyZeroSolution);
        // j = 2: the rational solution e₁ = e₂ = 1 gives t² − t + 1, which has no real roots
        assert_eq!(s[1].system.matrix, [[q(-1), q(1)], [q(2), q(0)]]);
        assert_eq!(s[1].system.rhs, [q(0), q(2)]);
        assert_eq!(s[1].solution, Some((q(1), q(1))));
        assert_eq!(s[1].verdict, UniqVerdict::NonzeroSolutionExists);
        assert!(!s[1].real_distinct_sigma);
    }

    #[test]
    fn pretzel_chain_k1() {
        let r = uniqueness_check_pretzel(1).unwrap();
        for (name, ok) in &r.checks {
            assert!(ok, "{name}");
        }
        assert!(r.unique);
        let d = pretzel_holonomy(1).unwrap();
        let meeting = (&d.z() - &FieldElement::one(&d.field)).div(&d.z().scale(&q(2))).unwrap();
        let g2 = d.g(2);
        assert_eq!(mobius_apply(&g2, &Point::Finite(FieldElement::zero(&d.field))), Point::Finite(meeting));
    }

    #[test]
    fn pretzel_circles_are_circles() {
        let d = pretzel_holonomy(1).unwrap();
        let chain = pretzel_clines(&d);
        assert!(chain.h_tau.is_line().unwrap());
        for j in 1..=2 {
            assert!(!chain.c[j].is_line().unwrap());
            assert!(!chain.d[j].is_line().unwrap());
        }
        // C₁ = s₂(H_τ) is tangent to H_τ at 0
        let t = classify(&chain.c[1], &chain.h_tau, &[Point::Finite(FieldElement::zero(&d.field))], 0, 128).unwrap();
        assert!(matches!(t, Tangency::Tangent(_)));
    }

    fn c(x: f64, y: f64) -> CBall {
        CBall::from_f64(x, y, 64)
    }

    #[test]
    fn numeric_tangency() {
        let unit = Cline::Circle { center: c(0.0, 0.0), radius: Ball::from_f64(1.0, 64) };
        let vline = |x: f64| Cline::Line { point: c(x, 0.0), direction: c(0.0, 1.0) };
        assert!(matches!(tangency(&unit, &vline(1.0)), Tangency::Indeterminate));
        assert!(matches!(tangency(&unit, &vline(2.0)), Tangency::Disjoint));
        match tangency(&unit, &vline(0.0)) {
            Tangency::Secant(NumPoint::Finite(a), NumPoint::Finite(b)) => {
                assert!((a.im.mid_f64() + 1.0).abs() < 1e-12 && (b.im.mid_f64() - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let small = Cline::Circle { center: c(0.5, 0.0), radius: Ball::from_f64(0.25, 64) };
        assert!(matches!(tangency(&unit, &small), Tangency::Disjoint));
        let other = Cline::Circle { center: c(1.5, 0.0), radius: Ball::from_f64(1.0, 64) };
        assert!(matches!(tangency(&unit, &other), Tangency::Secant(..)));
        assert!(matches!(tangency(&other, &unit), Tangency::Secant(..)));
    }

    #[test]
    fn exact_tangency_of_unit_circle_and_line() {
        // the unit circle is the Cayley image of the real line; x = 1 touches it at 1
        let f = NumberField::new("Q(i)", RatPoly::from_ints(&[1, 0, 1])).unwrap();
        let i = FieldElement::generator(&f);
        let one = FieldElement::one(&f);
        let m = FieldMatrix::new(one.clone(), i.clone(), i.clone(), one.clone());
        let circle = ExactCline::line(one.clone()).image(&m);
        let line = ExactCline::line(i.clone()).image(&FieldMatrix::new(
            one.clone(),
            one.clone(),
            FieldElement::zero(&f),
            one.clone(),
        ));
        assert!(circle.contains(&Point::Finite(one.clone())).unwrap());
        assert!(tangent_at(&circle, &line, &Point::Finite(one.clone()), 0, 64).unwrap());
        assert!(tangent_at(&line, &circle, &Point::Finite(one.clone()), 0, 64).unwrap());
        assert!(!tangent_at(&circle, &ExactCline::line(i.clone()), &Point::Finite(i.clone()), 0, 64).unwrap());
    }

    #[test]
    fn endpoint_types() {
        let f = NumberField::new("Q(sqrt2)", RatPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(endpoint_type(&FieldElement::rational(&f, qf(3, 2))).unwrap(), EndpointType::CuspToCusp);
        assert_eq!(endpoint_type(&FieldElement::generator(&f)).unwrap(), EndpointType::ClosedGeodesicCandidate);
        let g = NumberField::new("cubic", RatPoly::from_ints(&[-1, -1, 0, 1])).unwrap();
        assert_eq!(endpoint_type(&FieldElement::generator(&g)), Err(MobiusError::NotAGeodesicEndpoint(3)));
    }

    #[test]
    fn svg_output() {
        let one = render_svg(&[Shape::Circle { cx: 0.0, cy: 0.0, r: 1.0 }], &[]);
        assert_eq!(one.matches("<circle").count(), 1);
        assert!(one.contains("cx=\"0.000000\""));
        let empty = render_svg(&[], &[]);
        assert!(empty.contains("<svg") && empty.trim_end().ends_with("/>"));
        let a = render_pretzel_chain(1).unwrap();
        assert_eq!(a, render_pretzel_chain(1).unwrap());
        assert_eq!(a.matches("<circle").count(), 4);
        assert_eq!(a.matches("<line").count(), 2);
        let b = render_strip_7_4().unwrap();
        assert_eq!(b.matches("<circle").count(), 2);
        assert_eq!(b.matches("<line").count(), 2);
    }

    #[test]
    fn small_linear_systems() {
        let row = |a: i64, b: i64, r: i64| ([q(a), q(b)], q(r));
        assert_eq!(solve_rows(&[row(1, -2, 0), row(-2, 3, 0)]), Some(Some((q(0), q(0)))));
        assert_eq!(solve_rows(&[row(1, 0, 1), row(2, 0, 3)]), None);
        assert_eq!(solve_rows(&[row(1, 1, 1), row(2, 2, 2)]), Some(None));
        assert_eq!(solve_rows(&[row(0, 0, 1), row(2, 0, 0)]), None);
        assert_eq!(solve_rows(&[row(0, 0, 0)]), Some(None));
        assert_eq!(solve_rows(&[row(1, 0, 1), row(0, 1, 2), row(1, 1, 4)]), None);
    }

    #[test]
    fn unsupported_case() {
        let rep = rep_7_4().unwrap();
        let z = FieldElement::generator(&rep.field);
        let r = uniqueness_system(&rep.images[1], &z, &FieldElement::one(&rep.field), "y", "bad");
        assert!(matches!(r, Err(MobiusError::UnsupportedCase(_))));
    }

    fn word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..2, -2i64..3), 0..5).prop_map(Word::new)
    }

    fn close(a: &Cline, b: &Cline) -> bool {
        match (a.to_shape(), b.to_shape()) {
            (Shape::Circle { cx, cy, r }, Shape::Circle { cx: x, cy: y, r: s }) => {
                (cx - x).abs() + (cy - y).abs() + (r - s).abs() < 1e-9 * (1.0 + r.abs())
            }
            (Shape::Line { px, py, dx, dy }, Shape::Line { px: qx, py: qy, dx: ex, dy: ey }) => {
                (dx * ey - dy * ex).abs() < 1e-9 * (dx.hypot(dy) * ex.hypot(ey))
                    && ((qx - px) * dy - (qy - py) * dx).abs() < 1e-9 * dx.hypot(dy) * (1.0 + (qx - px).hypot(qy - py))
            }
            _ => false,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn images_compose(u in word(), v in word()) {
            let rep = rep_7_4().unwrap();
            let h = ExactCline::line(strip_scale_7_4(&rep));
            let (mu, mv) = (rep.evaluate(&u), rep.evaluate(&v));
            let direct = cline_image(&mu.mul(&mv), &h, 0, 128).unwrap();
            let stepwise = cline_image(&mu, &h.image(&mv), 0, 128).unwrap();
            prop_assert!(close(&direct, &stepwise));
        }

        #[test]
        fn tangency_is_symmetric_and_invariant(u in word()) {
            let d = pretzel_holonomy(1).unwrap();
            let chain = pretzel_clines(&d);
            let m = d.rep.evaluate(&Word::new(u.letters().iter().map(|&(g, e)| (g + 1, e)).collect()));
            let zero = Point::Finite(FieldElement::zero(&d.field));
            prop_assert!(tangent_at(&chain.c[1], &chain.c[0], &zero, 0, 128).unwrap());
            prop_assert!(tangent_at(&chain.c[0], &chain.c[1], &zero, 0, 128).unwrap());
            let p = mobius_apply(&m, &zero);
            prop_assert!(tangent_at(&chain.c[1].image(&m), &chain.c[0].image(&m), &p, 0, 128).unwrap());
        }
    }
}
