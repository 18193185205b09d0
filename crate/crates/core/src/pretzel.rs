//! The balanced pretzel knots P(2k+1, 2k+1, 2k+1).

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::knotgroup::{KnotError, KnotPresentation, MatrixRep, Word};
use crate::numfield::{FieldElement, FieldError, FieldMatrix, NumberField};
use crate::polycore::{
    complex_roots, irreducibility_certificate, q, sturm_real_roots, Certificate, PolyError, PolyMatrix, RatPoly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PretzelError {
    #[error("FactorIdentityFailed: {0}")]
    FactorIdentityFailed(String),
    #[error("IdentityFailed: {0}")]
    IdentityFailed(String),
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error("2k+1 = {0} is not prime")]
    NotPrime(u32),
    #[error("k must be at least 1")]
    BadIndex,
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn z2_plus_2() -> RatPoly {
    RatPoly::from_ints(&[2, 0, 1])
}

/// Runs p_k = (z²+2) p_{k−1} − p_{k−2} from p_0, p_1.
fn recurse(p0: RatPoly, p1: RatPoly, k: u32) -> RatPoly {
    if k == 0 {
        return p0;
    }
    let m = z2_plus_2();
    let (mut a, mut b) = (p0, p1);
    for _ in 1..k {
        let c = &(&m * &b) - &a;
        a = b;
        b = c;
    }
    b
}

/// Λ_k by the three-term recursion, Λ_0 = z − 1, Λ_1 = z³ − z² + 3z − 1.
pub fn lambda_poly(k: u32) -> RatPoly {
    recurse(RatPoly::from_ints(&[-1, 1]), RatPoly::from_ints(&[-1, 3, -1, 1]), k)
}

fn binom(n: u64, r: u64) -> i64 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as i64
}

/// Λ_k from the binomial closed form.
pub fn lambda_closed_form(k: u32) -> RatPoly {
    let k = k as u64;
    let mut cs = vec![0i64; 2 * k as usize + 2];
    for j in 0..=k {
        cs[2 * j as usize] -= binom(k + j, 2 * j);
        cs[2 * j as usize + 1] += binom(k + j, 2 * j + 1) + binom(k + j + 1, 2 * j + 1);
    }
    RatPoly::from_ints(&cs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaBetaDelta {
    pub alpha: RatPoly,
    pub beta: RatPoly,
    pub delta: RatPoly,
}

impl AlphaBetaDelta {
    /// −β z + α
    pub fn linear_factor(&self) -> RatPoly {
        &self.alpha - &(&self.beta * &RatPoly::x())
    }

    /// β z² + (β − α) z + α, which is −Λ_k.
    pub fn quadratic_form(&self) -> RatPoly {
        let z = RatPoly::x();
        &(&(&self.beta * &(&z * &z)) + &(&(&self.beta - &self.alpha) * &z)) + &self.alpha
    }

    /// δ = α − 2βz + βz²
    pub fn delta_identity_holds(&self) -> bool {
        let z = RatPoly::x();
        let rhs = &(&self.alpha - &(&self.beta * &z).scale(&q(2))) + &(&self.beta * &(&z * &z));
        rhs == self.delta
    }
}

pub fn alpha_beta_delta(k: u32) -> AlphaBetaDelta {
    let one = RatPoly::one;
    AlphaBetaDelta {
        alpha: recurse(one(), RatPoly::from_ints(&[1, -1, 1]), k),
        beta: recurse(RatPoly::zero(), RatPoly::constant(q(-1)), k),
        delta: recurse(one(), RatPoly::from_ints(&[1, 1]), k),
    }
}

/// Images of s1, s2, s3 over ℤ[z].
pub fn generator_polys() -> [PolyMatrix; 3] {
    [
        PolyMatrix::from_ints(&[1], &[1], &[], &[1]),
        PolyMatrix::from_ints(&[1], &[], &[0, 0, -1], &[1]),
        PolyMatrix::from_ints(&[1, 1], &[1], &[0, 0, -1], &[1, -1]),
    ]
}

/// Ψ_k(x) = x^(4k+2) − 1 + Σ_{j=0}^{2k} (−1)^(j+1) x^(2j+1)
pub fn psi_poly(k: u32) -> RatPoly {
    let n = 4 * k as usize + 2;
    let mut cs = vec![0i64; n + 1];
    cs[n] = 1;
    cs[0] = -1;
    for j in 0..=2 * k as usize {
        cs[2 * j + 1] += if j % 2 == 0 { -1 } else { 1 };
    }
    RatPoly::from_ints(&cs)
}

/// Φ_k(x) = x^(4k+4) − x^(4k+3) + x^(4k+2) − x² − x − 1
pub fn phi_poly(k: u32) -> RatPoly {
    let n = 4 * k as usize + 4;
    let mut cs = vec![0i64; n + 1];
    cs[n] = 1;
    cs[n - 1] = -1;
    cs[n - 2] = 1;
    cs[2] = -1;
    cs[1] = -1;
    cs[0] = -1;
    RatPoly::from_ints(&cs)
}

/// x^(2k+1) Λ_k(x − 1/x), expanded as Σ c_i x^(2k+1−i) (x² − 1)^i.
pub fn lambda_substituted(k: u32) -> RatPoly {
    let lam = lambda_poly(k);
    let top = 2 * k as usize + 1;
    let x2m1 = RatPoly::from_ints(&[-1, 0, 1]);
    let mut acc = RatPoly::zero();
    for (i, c) in lam.coeffs().iter().enumerate() {
        acc = &acc + &(&RatPoly::monomial(c.clone(), top - i) * &x2m1.pow(i as u32));
    }
    acc
}

/// Words of the pretzel group on s1, s2, s3.
#[derive(Debug, Clone, Serialize)]
pub struct PretzelWords {
    pub v: Word,
    pub w: Word,
    pub x: Word,
    pub y: Word,
    /// g_j for 0 ≤ j ≤ 2k
    pub g: Vec<Word>,
    /// h_j for 0 ≤ j ≤ 2k
    pub h: Vec<Word>,
}

pub fn pretzel_words(k: u32) -> PretzelWords {
    let k = k as i64;
    let s = |i: usize, e: i64| Word::letter(i, e);
    let cat = |ws: &[Word]| ws.iter().fold(Word::empty(), |acc, u| acc.concat(u));
    let s3i_s2 = cat(&[s(2, -1), s(1, 1)]);
    let s1_s3i = cat(&[s(0, 1), s(2, -1)]);
    let s1i_s3 = cat(&[s(0, -1), s(2, 1)]);
    let s2_s1i = cat(&[s(1, 1), s(0, -1)]);
    let v = cat(&[s3i_s2.pow(k), s(2, -1), s1_s3i.pow(k)]);
    let w = cat(&[s1i_s3.pow(k), s(0, -1), s2_s1i.pow(k)]);
    let x = cat(&[cat(&[s(0, 1), s(1, -1)]).pow(k + 1), cat(&[s(2, 1), s(1, -1)]).pow(k)]);
    let y = cat(&[cat(&[s(1, 1), s(2, -1)]).pow(k + 1), s1_s3i.pow(k)]);
    let g = (0..=2 * k)
        .map(|j| if j % 2 == 1 { cat(&[s2_s1i.pow((j - 1) / 2), s(1, 1)]) } else { s2_s1i.pow(j / 2) })
        .collect();
    let h = (0..=2 * k)
        .map(|j| if j % 2 == 1 { s1_s3i.pow((j + 1) / 2) } else { cat(&[s1_s3i.pow(j / 2), s(0, 1)]) })
        .collect();
    PretzelWords { v, w, x, y, g, h }
}

pub fn pretzel_presentation(k: u32) -> KnotPresentation {
    let n = 2 * k + 1;
    let pw = pretzel_words(k);
    let s = Word::generator;
    let r1 = pw.v.concat(&s(0)).concat(&pw.v.inverse()).concat(&s(1).inverse());
    let r2 = pw.w.concat(&s(1)).concat(&pw.w.inverse()).concat(&s(2).inverse());
    let longitude = pw.y.inverse().concat(&pw.x).concat(&pw.y).concat(&pw.x.inverse());
    KnotPresentation {
        name: format!("P({n},{n},{n})"),
        generator_names: vec!["s1".into(), "s2".into(), "s3".into()],
        relators: vec![r1, r2],
        meridian: s(0),
        longitude,
        genus: Some(1),
        fibered: Some(false),
        two_bridge: None,
    }
}

fn eval_poly_word(w: &Word) -> PolyMatrix {
    let gens = generator_polys();
    let mut acc = PolyMatrix::identity();
    for &(g, e) in w.letters() {
        let m = if e > 0 { gens[g].clone() } else { gens[g].adjugate() };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&m);
        }
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub k: u32,
    pub checks: Vec<(String, bool)>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

/// The entry identities for P(V), P(W) and the prefix/suffix powers, against given α, β, δ.
pub fn check_factor_identities(k: u32, abd: &AlphaBetaDelta) -> Result<IdentityReport, PretzelError> {
    if k == 0 {
        return Err(PretzelError::BadIndex);
    }
    let z = RatPoly::x();
    let zk = |e: usize| RatPoly::monomial(q(1), e);
    let (al, be, de) = (&abd.alpha, &abd.beta, &abd.delta);
    let pw = pretzel_words(k);
    let ki = k as i64;
    let pw_pow = |a: (usize, i64), b: (usize, i64)| eval_poly_word(&Word::new(vec![a, b]).pow(ki));
    let mut checks = Vec::new();

    let expect = PolyMatrix::new(al.clone(), be.clone(), &zk(3) * be, de.clone());
    checks.push(("P(S3^-1 S2)^k".to_string(), pw_pow((2, -1), (1, 1)) == expect));
    let expect = PolyMatrix::new(al.clone(), -&(&z * be), -&(&zk(2) * be), de.clone());
    checks.push(("P(S1 S3^-1)^k".to_string(), pw_pow((0, 1), (2, -1)) == expect));
    let two_zb = (&z * be).scale(&q(2));
    let expect = PolyMatrix::new(al - &two_zb, -&(&z * be), &zk(2) * be, de + &two_zb);
    checks.push(("P(S1^-1 S3)^k".to_string(), pw_pow((0, -1), (2, 1)) == expect));
    let expect = PolyMatrix::new(de + &(&z * be), be.clone(), &zk(2) * be, al - &(&z * be));
    checks.push(("P(S2 S1^-1)^k".to_string(), pw_pow((1, 1), (0, -1)) == expect));

    let pv = eval_poly_word(&pw.v);
    let pwm = eval_poly_word(&pw.w);
    let product = &abd.linear_factor() * &abd.quadratic_form();
    checks.push(("v11 factorization".to_string(), *pv.a() == product));
    checks.push(("v21 = -z^2 v12".to_string(), *pv.c() == -&(&zk(2) * pv.b())));
    checks.push(("(w11 - w22) z + w21 = 0".to_string(), (&(&(pwm.a() - pwm.d()) * &z) + pwm.c()).is_zero()));
    checks.push(("w12 z + w22 factorization".to_string(), &(pwm.b() * &z) + pwm.d() == product));
    let h = Word::new(vec![(0, 1), (2, -1)]).pow(ki).concat(&Word::generator(0));
    checks.push((
        "tr P((S1 S3^-1)^k S1) = 2(-beta z + alpha)".to_string(),
        eval_poly_word(&h).trace() == abd.linear_factor().scale(&q(2)),
    ));
    checks.push(("quadratic form = -Lambda_k".to_string(), abd.quadratic_form() == -&lambda_poly(k)));
    checks.push(("delta identity".to_string(), abd.delta_identity_holds()));

    if let Some((name, _)) = checks.iter().find(|c| !c.1) {
        return Err(PretzelError::FactorIdentityFailed(name.clone()));
    }
    Ok(IdentityReport { k, checks })
}

pub fn relator_factorization_check(k: u32) -> Result<IdentityReport, PretzelError> {
    check_factor_identities(k, &alpha_beta_delta(k))
}

#[derive(Debug, Clone)]
pub struct PretzelData {
    pub k: u32,
    pub lambda: RatPoly,
    pub irreducibility: Certificate,
    pub field: Arc<NumberField>,
    pub rep: MatrixRep,
    pub words: PretzelWords,
    /// τ = −6/z, the longitude translation length in the meridian coordinate.
    pub tau: FieldElement,
    /// The order-two symmetry with its scalar factor i removed: (1, (1−z)/z; 0, −1).
    pub sigma: FieldMatrix,
}

impl PretzelData {
    pub fn eval(&self, w: &Word) -> FieldMatrix {
        self.rep.evaluate(w)
    }

    pub fn g(&self, j: usize) -> FieldMatrix {
        self.eval(&self.words.g[j])
    }

    pub fn h(&self, j: usize) -> FieldMatrix {
        self.eval(&self.words.h[j])
    }

    pub fn z(&self) -> FieldElement {
        FieldElement::generator(&self.field)
    }
}

pub fn pretzel_holonomy(k: u32) -> Result<PretzelData, PretzelError> {
    if k == 0 {
        return Err(PretzelError::BadIndex);
    }
    let lambda = lambda_poly(k);
    let pres = pretzel_presentation(k);
    let field = NumberField::new(pres.name.clone(), lambda.clone())?;
    let to_field = |m: &PolyMatrix| {
        let e = |p: &RatPoly| FieldElement::from_poly(&field, p);
        FieldMatrix::new(e(m.a()), e(m.b()), e(m.c()), e(m.d()))
    };
    let images = generator_polys().iter().map(to_field).collect();
    let rep = MatrixRep::new(pres, field.clone(), images)?;
    let z = FieldElement::generator(&field);
    let tau = FieldElement::from_i64(&field, -6).div(&z)?;
    let one = FieldElement::one(&field);
    let corner = (&one - &z).div(&z)?;
    let sigma = FieldMatrix::new(one.clone(), corner, FieldElement::zero(&field), -&one);
    Ok(PretzelData {
        k,
        irreducibility: irreducibility_certificate(&lambda),
        lambda,
        field,
        rep,
        words: pretzel_words(k),
        tau,
        sigma,
    })
}

/// tr(s1 s2) and tr(s1 s2 s3).
pub fn trace_field_generators(data: &PretzelData) -> (FieldElement, FieldElement) {
    let w = |l: Vec<(usize, i64)>| data.eval(&Word::new(l)).trace();
    (w(vec![(0, 1), (1, 1)]), w(vec![(0, 1), (1, 1), (2, 1)]))
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiCensus {
    pub k: u32,
    pub psi: RatPoly,
    pub substitution_identity: bool,
    pub phi_quotient_identity: bool,
    pub real_roots: usize,
    pub sturm_real_roots: usize,
    pub per_quadrant: [usize; 4],
    pub uncertain: usize,
    pub right_half_outside_unit_circle: bool,
    pub precision_bits: u64,
}

impl PsiCensus {
    pub fn matches_expected(&self) -> bool {
        let k = self.k as usize;
        self.substitution_identity
            && self.phi_quotient_identity
            && self.real_roots == 2
            && self.sturm_real_roots == 2
            && self.per_quadrant == [k; 4]
            && self.uncertain == 0
            && self.right_half_outside_unit_circle
    }
}

/// Certified census of the roots of Ψ_k, raising the precision from `precision_bits` up to
/// at least 256 bits until every disk is placed.
pub fn psi_root_census(k: u32, precision_bits: u64) -> Result<PsiCensus, PretzelError> {
    if k == 0 {
        return Err(PretzelError::BadIndex);
    }
    let psi = psi_poly(k);
    let substitution_identity = psi == lambda_substituted(k);
    let phi_quotient_identity =
        phi_poly(k).div_rem(&psi).ok() == Some((RatPoly::from_ints(&[1, 0, 1]), RatPoly::zero()));
    let sturm = sturm_real_roots(&psi).map_err(|e| PretzelError::PrecisionExhausted(e.to_string()))?.count();
    let mut prec = precision_bits.max(53);
    let cap = precision_bits.max(256);
    loop {
        match complex_roots(&psi, prec) {
            Ok(set) => {
                let mut per = [0usize; 4];
                let mut uncertain = 0;
                let mut outside = true;
                for r in &set.roots {
                    if r.real {
                        if r.approx().0 > 0.0 && r.outside_unit_circle() != Some(true) {
                            outside = false;
                        }
                        continue;
                    }
                    match r.quadrant() {
                        Some(qd) => {
                            per[qd as usize] += 1;
                            if r.right_half() == Some(true) && r.outside_unit_circle() != Some(true) {
                                outside = false;
                            }
                        }
                        None => uncertain += 1,
                    }
                }
                let census = PsiCensus {
                    k,
                    psi: psi.clone(),
                    substitution_identity,
                    phi_quotient_identity,
                    real_roots: set.real_count(),
                    sturm_real_roots: sturm,
                    per_quadrant: per,
                    uncertain,
                    right_half_outside_unit_circle: outside,
                    precision_bits: prec,
                };
                if uncertain == 0 || prec >= cap {
                    return Ok(census);
                }
            }
            Err(PolyError::PrecisionExhausted(_)) if prec < cap => {}
            Err(e) => return Err(PretzelError::PrecisionExhausted(e.to_string())),
        }
        prec = (prec * 2).min(cap);
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub k: u32,
    pub checks: Vec<(String, bool)>,
    /// g_{2k}(0), the fixed point of the symmetry.
    pub meeting_point: FieldElement,
}

/// Algebraic facts behind the chain of tangent circles g_j(H), h_j(H).
pub fn tangency_chain(k: u32) -> Result<ChainReport, PretzelError> {
    if !is_prime(2 * k + 1) {
        return Err(PretzelError::NotPrime(2 * k + 1));
    }
    let data = pretzel_holonomy(k)?;
    let f = &data.field;
    let z = data.z();
    let one = FieldElement::one(f);
    let s = |i: usize, e: i64| data.eval(&Word::letter(i, e));
    let sig = &data.sigma;
    let mut checks = Vec::new();

    let g2k = data.g(2 * k as usize);
    let at_zero = g2k.b.div(&g2k.d)?;
    let expected = (&z - &one).div(&z.scale(&q(2)))?;
    checks.push(("g_2k(0) = (z-1)/(2z)".to_string(), at_zero == expected));

    // σ = i·σ' so σ² = −σ'² and conjugation by σ equals conjugation by σ'
    checks.push(("sigma^2 = -I".to_string(), sig.mul(sig) == FieldMatrix::identity(f)));
    let sig_inv = sig.inverse()?;
    let conj = |m: &FieldMatrix| sig.mul(m).mul(&sig_inv);
    checks.push(("sigma s1 sigma^-1 = s1^-1".to_string(), conj(&s(0, 1)) == s(0, -1)));
    checks.push((
        "sigma s2 sigma^-1 = s1 s3^-1 s1^-1".to_string(),
        conj(&s(1, 1)) == s(0, 1).mul(&s(2, -1)).mul(&s(0, -1)),
    ));
    checks.push((
        "sigma s3 sigma^-1 = s1 s2^-1 s1^-1".to_string(),
        conj(&s(2, 1)) == s(0, 1).mul(&s(1, -1)).mul(&s(0, -1)),
    ));
    let fixed = sig.b.div(&(&sig.d - &sig.a))?;
    checks.push(("sigma fixes (z-1)/(2z)".to_string(), fixed == expected));
    let chain_ok = (0..=2 * k as usize).all(|j| {
        let lhs = sig.mul(&data.g(j)).mul(sig);
        lhs.eq_up_to_sign(&data.h(j).mul(&s(0, -1)))
    });
    checks.push(("sigma g_j sigma = h_j s1^-1".to_string(), chain_ok));

    let base = PolyMatrix::from_ints(&[1], &[], &[0, 0, -1], &[1]).mul(&PolyMatrix::from_ints(&[1], &[-1], &[], &[1]));
    for r in 1..=k {
        let abd = alpha_beta_delta(r);
        let tr = base.pow(r).trace();
        let zpoly = RatPoly::x();
        let formula =
            &(&abd.alpha.scale(&q(2)) - &(&abd.beta * &zpoly).scale(&q(2))) + &(&abd.beta * &(&zpoly * &zpoly));
        let elem = FieldElement::from_poly(f, &tr);
        checks.push((
            format!("tr (s2 s1^-1)^{r} has degree {} and is irrational", 2 * r),
            tr == formula && tr.degree() == Some(2 * r as usize) && elem.as_rational().is_none(),
        ));
    }
    if let Some((name, _)) = checks.iter().find(|c| !c.1) {
        return Err(PretzelError::IdentityFailed(name.clone()));
    }
    Ok(ChainReport { k, checks, meeting_point: at_zero })
}
