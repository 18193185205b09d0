//! Knot groups as finitely presented groups, and their matrix representations.

mod word;

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::numfield::{FieldElement, FieldError, FieldMatrix, NumberField};
use crate::polycore::{PolyMatrix, RatPoly};

pub use word::{abelianization_exponents, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotError {
    #[error("BadFraction: {0}")]
    BadFraction(String),
    #[error("NotTwoBridge: {0}")]
    NotTwoBridge(String),
    #[error("NotARepresentation: {0}")]
    NotARepresentation(String),
    #[error("IdentityFailed: {0}")]
    IdentityFailed(String),
    #[error("bad word token {0:?}")]
    BadWord(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Words describing a two-bridge knot group ⟨a, b | a w = w b⟩.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoBridgeData {
    pub p: i64,
    /// The odd representative actually used for the sign rule.
    pub q: i64,
    pub signs: Vec<i64>,
    pub w: Word,
    pub exponent_sum: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotPresentation {
    pub name: String,
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
    pub meridian: Word,
    pub longitude: Word,
    pub genus: Option<u32>,
    pub fibered: Option<bool>,
    pub two_bridge: Option<TwoBridgeData>,
}

impl KnotPresentation {
    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.generator_names.iter().map(|s| s.as_str()).collect()
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, KnotError> {
        Word::parse(s, &self.names())
    }

    pub fn show(&self, w: &Word) -> String {
        w.display_with(&self.names())
    }

    /// Checks that the longitude lies in the commutator subgroup.
    pub fn check_longitude(&self) -> Result<(), KnotError> {
        let total: i64 = abelianization_exponents(&self.longitude, self.generator_count()).iter().sum();
        if total != 0 {
            return Err(KnotError::NotARepresentation(format!(
                "longitude {} has total exponent {total}",
                self.show(&self.longitude)
            )));
        }
        Ok(())
    }
}

/// Signs ε_i = (−1)^⌊iq/p⌋ for i = 1..p−1.
pub fn two_bridge_signs(p: i64, q: i64) -> Vec<i64> {
    (1..p).map(|i| if Integer::div_floor(&(i * q), &p) % 2 == 0 { 1 } else { -1 }).collect()
}

/// Presentation ⟨a, b | a w b⁻¹ w⁻¹⟩ of the two-bridge knot p/q with longitude w v a^(−2e).
/// An even q is replaced by p − q, which gives the same knot up to mirror image.
pub fn two_bridge_presentation(p: i64, q: i64) -> Result<KnotPresentation, KnotError> {
    if p < 3 || p % 2 == 0 || q <= 0 || q >= p || p.gcd(&q) != 1 {
        return Err(KnotError::BadFraction(format!("{p}/{q}")));
    }
    let qn = if q % 2 == 0 { p - q } else { q };
    let signs = two_bridge_signs(p, qn);
    let w = Word::alternating(1, 0, &signs);
    let e: i64 = signs.iter().sum();
    let a = Word::generator(0);
    let b = Word::generator(1);
    let relator = a.concat(&w).concat(&b.inverse()).concat(&w.inverse());
    let longitude = w.concat(&w.reversed()).concat(&Word::letter(0, -2 * e));
    let pres = KnotPresentation {
        name: format!("{p}/{q}"),
        generator_names: vec!["a".into(), "b".into()],
        relators: vec![relator],
        meridian: a,
        longitude,
        genus: None,
        fibered: None,
        two_bridge: Some(TwoBridgeData { p, q: qn, signs, w, exponent_sum: e }),
    };
    pres.check_longitude()?;
    Ok(pres)
}

fn pm_word(w: &Word, gens: &[(PolyMatrix, PolyMatrix)]) -> PolyMatrix {
    let mut acc = PolyMatrix::identity();
    for &(g, e) in w.letters() {
        let m = if e > 0 { &gens[g].0 } else { &gens[g].1 };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(m);
        }
    }
    acc
}

/// Recovers w from a relator of the shape a w b⁻¹ w⁻¹.
fn split_two_bridge_relator(pres: &KnotPresentation) -> Result<Word, KnotError> {
    let bad = || KnotError::NotTwoBridge(pres.name.clone());
    if pres.generator_count() != 2 || pres.relators.len() != 1 {
        return Err(bad());
    }
    let r = pres.relators[0].letters();
    if r.len() < 2 || r[0] != (0, 1) || !r.len().is_multiple_of(2) {
        return Err(bad());
    }
    let n = (r.len() - 2) / 2;
    let w = Word::new(r[1..1 + n].to_vec());
    if w.len() != n || r[1 + n] != (1, -1) || Word::new(r[2 + n..].to_vec()) != w.inverse() {
        return Err(bad());
    }
    Ok(w)
}

/// Monic square-free gcd of the entries of a·w − w·b with a = (1 1; 0 1), b = (1 0; z 1).
pub fn riley_polynomial(pres: &KnotPresentation) -> Result<RatPoly, KnotError> {
    let w = split_two_bridge_relator(pres)?;
    let a = PolyMatrix::from_ints(&[1], &[1], &[], &[1]);
    let b = PolyMatrix::from_ints(&[1], &[], &[0, 1], &[1]);
    let wm = pm_word(&w, &[(a.clone(), a.adjugate()), (b.clone(), b.adjugate())]);
    let diff = a.mul(&wm).sub(&wm.mul(&b));
    let mut g = RatPoly::zero();
    for e in &diff.0 {
        g = g.gcd(e);
    }
    if g.is_zero() {
        return Err(KnotError::NotTwoBridge(format!("{}: relator holds identically", pres.name)));
    }
    Ok(g.square_free_part().monic())
}

/// Generator images over a number field, checked to satisfy the relators projectively.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub presentation: KnotPresentation,
    pub field: Arc<NumberField>,
    pub images: Vec<FieldMatrix>,
    inverses: Vec<FieldMatrix>,
}

impl MatrixRep {
    pub fn new(
        presentation: KnotPresentation,
        field: Arc<NumberField>,
        images: Vec<FieldMatrix>,
    ) -> Result<Self, KnotError> {
        let name = presentation.name.clone();
        let bad = |s: String| KnotError::NotARepresentation(format!("{name}: {s}"));
        if images.len() != presentation.generator_count() {
            return Err(bad(format!("{} images for {} generators", images.len(), presentation.generator_count())));
        }
        for (i, m) in images.iter().enumerate() {
            if !m.det().is_one() {
                return Err(bad(format!("det of image {i} is {}", m.det())));
            }
        }
        let inverses = images.iter().map(|m| m.adjugate()).collect();
        let rep = MatrixRep { presentation, field, images, inverses };
        for r in &rep.presentation.relators {
            let m = rep.evaluate(r);
            if !m.is_scalar() || !(m.a.is_one() || (-&m.a).is_one()) {
                return Err(bad(format!("relator {} is not ±I", rep.presentation.show(r))));
            }
        }
        let t = rep.evaluate(&rep.presentation.meridian).trace();
        let two = FieldElement::from_i64(&rep.field, 2);
        if t != two && t != -&two {
            return Err(bad(format!("meridian trace {t}")));
        }
        rep.presentation.check_longitude()?;
        Ok(rep)
    }

    pub fn evaluate(&self, w: &Word) -> FieldMatrix {
        evaluate_word(self, w)
    }

    pub fn identity(&self) -> FieldMatrix {
        FieldMatrix::identity(&self.field)
    }

    pub fn longitude_matrix(&self) -> FieldMatrix {
        self.evaluate(&self.presentation.longitude)
    }

    pub fn meridian_matrix(&self) -> FieldMatrix {
        self.evaluate(&self.presentation.meridian)
    }

    /// τ with ρ(ℓ) = ±(1 τ; 0 1), or `None` when the longitude is not of that shape.
    pub fn longitude_tau(&self) -> Option<FieldElement> {
        let l = self.longitude_matrix();
        let one = FieldElement::one(&self.field);
        if !l.c.is_zero() || l.a != l.d || !(l.a == one || l.a == -&one) {
            return None;
        }
        l.b.div(&l.a).ok()
    }
}

/// Exact product of generator-image powers.
pub fn evaluate_word(rep: &MatrixRep, w: &Word) -> FieldMatrix {
    let mut acc = rep.identity();
    for &(g, e) in w.letters() {
        let m = if e > 0 { &rep.images[g] } else { &rep.inverses[g] };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(m);
        }
    }
    acc
}

/// Riley representation a ↦ (1 1; 0 1), b ↦ (1 0; z 1) over ℚ[z]/(minpoly).
pub fn build_representation(pres: &KnotPresentation, minpoly: &RatPoly) -> Result<MatrixRep, KnotError> {
    let riley = riley_polynomial(pres)?;
    if !minpoly.divides(&riley) {
        return Err(KnotError::NotARepresentation(format!(
            "{}: {} does not divide the Riley polynomial",
            pres.name, minpoly
        )));
    }
    let field = NumberField::new(pres.name.clone(), minpoly.clone())?;
    let one = FieldElement::one(&field);
    let zero = FieldElement::zero(&field);
    let z = FieldElement::generator(&field);
    let a = FieldMatrix::new(one.clone(), one.clone(), zero.clone(), one.clone());
    let b = FieldMatrix::new(one.clone(), zero, z, one);
    MatrixRep::new(pres.clone(), field, vec![a, b])
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub word: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupReport {
    pub checks: Vec<IdentityCheck>,
}

/// Checks the twice-punctured torus generators and the cusp element of the 7_4 group.
pub fn verify_subgroup_identities(rep: &MatrixRep) -> Result<SubgroupReport, KnotError> {
    let pres = &rep.presentation;
    let w = pres.two_bridge.as_ref().map(|t| t.w.clone()).ok_or_else(|| KnotError::NotTwoBridge(pres.name.clone()))?;
    let f = &rep.field;
    let x = Word::generator(0);
    let y = Word::generator(1);
    let xi = x.inverse();
    let yi = y.inverse();
    let wi = w.inverse();
    let ell = pres.longitude.clone();
    let cat = |ws: &[&Word]| ws.iter().fold(Word::empty(), |acc, u| acc.concat(u));

    let gen_a = cat(&[&x.pow(2), &ell]);
    let gen_b = cat(&[&w, &yi, &x, &yi, &x, &yi]);
    let gen_c = cat(&[&xi, &w, &x, &yi, &x, &wi, &x.pow(2), &wi, &x]);
    let cusp_d = cat(&[&gen_a.inverse(), &gen_c, &gen_b.inverse(), &gen_c.inverse(), &gen_b]);

    let el = |cs: &[i64]| FieldElement::from_ints(f, cs);
    // (z−1)(z−2) = z² − 3z + 2
    let strip = |k: i64| el(&[2 * k, -3 * k, k]);
    let m = |a, b, c, d| FieldMatrix::new(a, b, c, d);
    let expect_a = m(el(&[-1]), strip(4), el(&[0]), el(&[-1]));
    let expect_b = m(el(&[5]), strip(3), el(&[-1, -1, 1]), el(&[-1]));
    let expect_c = m(el(&[7]), strip(11), el(&[-1, -1, 1]), el(&[-3]));
    let expect_d = m(el(&[-1]), el(&[0]), el(&[-4, -4, 4]), el(&[-1]));

    let ev = |u: &Word| rep.evaluate(u);
    let cases = [
        ("a = x^2 l", &gen_a, ev(&gen_a) == expect_a),
        ("b", &gen_b, ev(&gen_b) == expect_b),
        ("c", &gen_c, ev(&gen_c) == expect_c),
        ("d = a^-1 c b^-1 c^-1 b", &cusp_d, ev(&cusp_d) == expect_d),
        ("w d w^-1 = x^-2 l", &cusp_d.conjugate_by(&w), ev(&cusp_d.conjugate_by(&w)) == ev(&cat(&[&x.pow(-2), &ell]))),
    ];
    let mut checks = Vec::new();
    for (label, word, holds) in cases {
        let word = pres.show(word);
        if !holds {
            return Err(KnotError::IdentityFailed(format!("{label}: {word}")));
        }
        checks.push(IdentityCheck { label: label.to_string(), word, holds });
    }
    Ok(SubgroupReport { checks })
}
