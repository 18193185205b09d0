//! Polynomials over a small prime field, enough for distinct-degree factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PolyP {
    pub p: u64,
    pub c: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

impl PolyP {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyP { p, c }
    }

    pub fn from_ints(ints: &[BigInt], p: u64) -> Self {
        let pb = BigInt::from(p);
        let c = ints.iter().map(|a| a.mod_floor(&pb).to_u64().expect("reduced")).collect();
        Self::new(p, c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn monic(&self) -> Self {
        let Some(&l) = self.c.last() else { return self.clone() };
        let li = inv_mod(l, self.p);
        Self::new(self.p, self.c.iter().map(|&a| a * li % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        Self::new(
            p,
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).copied().unwrap_or(0);
                    let b = o.c.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn rem(&self, m: &Self) -> Self {
        let dm = m.degree().expect("nonzero modulus");
        let p = self.p;
        let mut r = self.c.clone();
        let li = inv_mod(*m.c.last().unwrap(), p);
        while r.len() > dm {
            let top = r.len() - 1;
            let f = r[top] * li % p;
            if f != 0 {
                for (j, &mc) in m.c.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = (r[idx] + p - f * mc % p) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::new(p, r)
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(p, self.c.iter().enumerate().skip(1).map(|(i, &a)| (i as u64 % p) * a % p).collect())
    }

    fn div_exact(&self, m: &Self) -> Self {
        let dm = m.degree().expect("nonzero");
        let p = self.p;
        let mut r = self.c.clone();
        let li = inv_mod(*m.c.last().unwrap(), p);
        let n = r.len();
        if n <= dm {
            return Self::new(p, vec![]);
        }
        let mut q = vec![0u64; n - dm];
        for top in (dm..n).rev() {
            let f = r[top] * li % p;
            q[top - dm] = f;
            if f != 0 {
                for (j, &mc) in m.c.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = (r[idx] + p - f * mc % p) % p;
                }
            }
        }
        Self::new(p, q)
    }

    fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn is_square_free(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).degree() == Some(0)
    }

    /// Degrees of the irreducible factors of a square-free monic polynomial, ascending.
    pub fn ddf_degrees(&self) -> Vec<usize> {
        let p = self.p;
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = Self::x(p);
        let mut h = x.rem(&f);
        let mut d = 0usize;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.powmod(p, &f);
            let g = h.sub(&x).gcd(&f);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                for _ in 0..gd / d {
                    out.push(d);
                }
                f = f.div_exact(&g);
                h = h.rem(&f);
            }
        }
        if let Some(fd) = f.degree() {
            if fd > 0 {
                out.push(fd);
            }
        }
        out
    }
}

pub(crate) fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 3u64;
    while out.len() < count {
        if (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d)) {
            out.push(n);
        }
        n += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn ddf_on_known_factorizations() {
        // x^2 + 1 splits mod 5 and stays irreducible mod 7
        assert_eq!(PolyP::from_ints(&bi(&[1, 0, 1]), 5).ddf_degrees(), vec![1, 1]);
        assert_eq!(PolyP::from_ints(&bi(&[1, 0, 1]), 7).ddf_degrees(), vec![2]);
        // (x^2+1)(x^3+x+1) mod 7
        let f = PolyP::from_ints(&bi(&[1, 0, 1]), 7).mul(&PolyP::from_ints(&bi(&[1, 1, 0, 1]), 7));
        let degs = f.ddf_degrees();
        assert_eq!(degs.iter().sum::<usize>(), 5);
        assert!(degs.contains(&2));
    }

    #[test]
    fn square_free_detection() {
        let f = PolyP::from_ints(&bi(&[1, 2, 1]), 11);
        assert!(!f.is_square_free());
        assert!(PolyP::from_ints(&bi(&[-1, 3, -1, 1]), 11).is_square_free());
    }

    #[test]
    fn primes_are_odd_primes() {
        assert_eq!(small_primes(6), vec![3, 5, 7, 11, 13, 17]);
    }
}
