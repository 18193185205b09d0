use super::{RatPoly, Q};

/// A 2×2 matrix over ℚ[z], row-major (a b; c d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix(pub [RatPoly; 4]);

impl PolyMatrix {
    pub fn new(a: RatPoly, b: RatPoly, c: RatPoly, d: RatPoly) -> Self {
        PolyMatrix([a, b, c, d])
    }

    pub fn from_ints(a: &[i64], b: &[i64], c: &[i64], d: &[i64]) -> Self {
        PolyMatrix::new(RatPoly::from_ints(a), RatPoly::from_ints(b), RatPoly::from_ints(c), RatPoly::from_ints(d))
    }

    pub fn identity() -> Self {
        PolyMatrix::new(RatPoly::one(), RatPoly::zero(), RatPoly::zero(), RatPoly::one())
    }

    pub fn a(&self) -> &RatPoly {
        &self.0[0]
    }
    pub fn b(&self) -> &RatPoly {
        &self.0[1]
    }
    pub fn c(&self) -> &RatPoly {
        &self.0[2]
    }
    pub fn d(&self) -> &RatPoly {
        &self.0[3]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (x, y) = (&self.0, &o.0);
        PolyMatrix([
            &(&x[0] * &y[0]) + &(&x[1] * &y[2]),
            &(&x[0] * &y[1]) + &(&x[1] * &y[3]),
            &(&x[2] * &y[0]) + &(&x[3] * &y[2]),
            &(&x[2] * &y[1]) + &(&x[3] * &y[3]),
        ])
    }

    pub fn sub(&self, o: &Self) -> Self {
        PolyMatrix(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn scale(&self, s: &RatPoly) -> Self {
        PolyMatrix(std::array::from_fn(|i| &self.0[i] * s))
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        PolyMatrix(std::array::from_fn(|i| self.0[i].scale(s)))
    }

    pub fn det(&self) -> RatPoly {
        &(&self.0[0] * &self.0[3]) - &(&self.0[1] * &self.0[2])
    }

    pub fn trace(&self) -> RatPoly {
        &self.0[0] + &self.0[3]
    }

    /// Inverse of a determinant-one matrix.
    pub fn adjugate(&self) -> Self {
        PolyMatrix::new(self.0[3].clone(), -&self.0[1], -&self.0[2], self.0[0].clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unipotent_powers() {
        let a = PolyMatrix::from_ints(&[1], &[1], &[], &[1]);
        assert_eq!(a.pow(3), PolyMatrix::from_ints(&[1], &[3], &[], &[1]));
        let b = PolyMatrix::from_ints(&[1], &[], &[0, 1], &[1]);
        assert_eq!(b.mul(&b.adjugate()), PolyMatrix::identity());
        assert_eq!(a.mul(&b).trace(), RatPoly::from_ints(&[2, 1]));
        assert_eq!(a.mul(&b).det(), RatPoly::one());
    }
}
