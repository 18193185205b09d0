use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{FieldElement, FieldError, NumberField};

/// A 2×2 matrix over a number field, stored row-major as (a b; c d).
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct FieldMatrix {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl FieldMatrix {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        FieldMatrix { a, b, c, d }
    }

    pub fn identity(f: &Arc<NumberField>) -> Self {
        Self::scalar(&FieldElement::one(f))
    }

    pub fn scalar(s: &FieldElement) -> Self {
        let z = FieldElement::zero(s.field());
        FieldMatrix::new(s.clone(), z.clone(), z, s.clone())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.a.field()
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, o: &Self) -> Self {
        FieldMatrix {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn det(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> FieldElement {
        &self.a + &self.d
    }

    pub fn adjugate(&self) -> Self {
        FieldMatrix { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        let inv = self.det().inverse()?;
        Ok(self.adjugate().scale(&inv))
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        FieldMatrix { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }

    pub fn neg(&self) -> Self {
        FieldMatrix { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FieldMatrix { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c, d: &self.d - &o.d }
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.field());
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn conjugate_by(&self, g: &Self) -> Result<Self, FieldError> {
        Ok(g.mul(self).mul(&g.inverse()?))
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Equality up to a nonzero scalar factor.
    pub fn eq_projective(&self, o: &Self) -> bool {
        let x = [&self.a, &self.b, &self.c, &self.d];
        let y = [&o.a, &o.b, &o.c, &o.d];
        (0..4).all(|i| (i + 1..4).all(|j| (x[i] * y[j]) == (x[j] * y[i])))
            && x.iter().zip(&y).all(|(p, q)| p.is_zero() == q.is_zero())
    }

    /// Equality up to sign, the identification in PSL(2).
    pub fn eq_up_to_sign(&self, o: &Self) -> bool {
        self == o || *self == o.neg()
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} , {} ; {} , {})", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::RatPoly;

    #[test]
    fn inverse_and_projective_equality() {
        let f = NumberField::new("c", RatPoly::from_ints(&[1, 4, -4, 1])).unwrap();
        let z = FieldElement::generator(&f);
        let one = FieldElement::one(&f);
        let zero = FieldElement::zero(&f);
        let m = FieldMatrix::new(one.clone(), one.clone(), z.clone(), &one + &z);
        assert!(m.mul(&m.inverse().unwrap()) == FieldMatrix::identity(&f));
        assert!(m.scale(&z).eq_projective(&m));
        assert!(m.neg().eq_up_to_sign(&m));
        let other = FieldMatrix::new(one.clone(), zero.clone(), z.clone(), one.clone());
        assert!(!other.eq_projective(&m));
        assert_eq!(m.pow(-2).unwrap().mul(&m.pow(2).unwrap()), FieldMatrix::identity(&f));
        assert_eq!(m.det(), one);
    }
}
