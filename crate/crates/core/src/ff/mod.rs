//! Prime field arithmetic and dense exact linear algebra over GF(p).
//!
//! The modulus is runtime data so one binary can run the same construction
//! in several characteristics. Elements are stored as plain residues
//! (`u32` in `[0, p)`); the [`Field`] handle carries the modulus. Moduli are
//! restricted to odd primes below 256 so that the incremental solver can
//! pack entries into bytes.

mod echelon;
mod matrix;

pub use echelon::EchelonBuilder;
pub use matrix::{FieldMatrix, Rref};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Handle for GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u32) -> Result<Field> {
        if !(3..=255).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Field { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        (a + b * c) % self.p
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn div(self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// The inverse of 2, used for every ½ coefficient.
    #[inline]
    pub fn half(self) -> u32 {
        self.p.div_ceil(2)
    }

    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(self, odd: bool) -> u32 {
        if odd {
            self.p - 1
        } else {
            1
        }
    }

    /// Symmetric representative in `(-p/2, p/2]`, for display.
    pub fn to_signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }

    pub fn scalar(self, v: i64) -> Fp {
        Fp {
            value: self.from_i64(v),
            modulus: self.p,
        }
    }
}

/// A field element that carries its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: i64, p: u32) -> Result<Fp> {
        let f = Field::new(p)?;
        Ok(f.scalar(value))
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn field(self) -> Field {
        Field { p: self.modulus }
    }

    fn check(self, other: Fp) -> Result<Field> {
        if self.modulus != other.modulus {
            Err(Error::ModulusMismatch(self.modulus, other.modulus))
        } else {
            Ok(self.field())
        }
    }

    pub fn try_add(self, other: Fp) -> Result<Fp> {
        let f = self.check(other)?;
        Ok(Fp {
            value: f.add(self.value, other.value),
            modulus: self.modulus,
        })
    }

    pub fn try_sub(self, other: Fp) -> Result<Fp> {
        let f = self.check(other)?;
        Ok(Fp {
            value: f.sub(self.value, other.value),
            modulus: self.modulus,
        })
    }

    pub fn try_mul(self, other: Fp) -> Result<Fp> {
        let f = self.check(other)?;
        Ok(Fp {
            value: f.mul(self.value, other.value),
            modulus: self.modulus,
        })
    }

    pub fn inv(self) -> Option<Fp> {
        self.field().inv(self.value).map(|value| Fp {
            value,
            modulus: self.modulus,
        })
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator impls panic on a modulus mismatch, like slice indexing does
// on a bad index; use the `try_*` methods when operands come from outside.
impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.try_add(rhs).expect("Fp addition")
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.try_sub(rhs).expect("Fp subtraction")
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.try_mul(rhs).expect("Fp multiplication")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.field().neg(self.value),
            modulus: self.modulus,
        }
    }
}

/// Sparse vector: `(index, nonzero coefficient)` pairs sorted by index.
pub type SparseVec = Vec<(usize, u32)>;

/// Adds `c * src` into the dense accumulator `acc`.
#[inline]
pub fn accumulate(f: Field, acc: &mut [u32], src: &[(usize, u32)], c: u32) {
    if c == 0 {
        return;
    }
    for &(k, v) in src {
        acc[k] = f.mul_add(acc[k], v, c);
    }
}

/// Dense to sparse.
pub fn sparsify(v: &[u32]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect()
}

pub fn densify(v: &[(usize, u32)], n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for &(i, c) in v {
        out[i] = c;
    }
    out
}

/// Sparse linear combination `Σ cᵢ vᵢ`, merged and sorted.
pub fn sparse_combination<'a, I>(f: Field, n: usize, terms: I) -> SparseVec
where
    I: IntoIterator<Item = (u32, &'a [(usize, u32)])>,
{
    let mut acc = vec![0u32; n];
    for (c, v) in terms {
        accumulate(f, &mut acc, v, c);
    }
    sparsify(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(Field::new(2), Err(Error::InvalidModulus(2)));
        assert_eq!(Field::new(9), Err(Error::InvalidModulus(9)));
        assert_eq!(Field::new(257), Err(Error::InvalidModulus(257)));
        assert!(Field::new(251).is_ok());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [3u32, 5, 7] {
            let f = Field::new(p).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    let ia = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, ia), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn half_is_inverse_of_two() {
        for p in [3u32, 5, 7, 11] {
            let f = Field::new(p).unwrap();
            assert_eq!(f.mul(2, f.half()), 1);
        }
    }

    #[test]
    fn scalar_modulus_mismatch() {
        let a = Fp::new(1, 3).unwrap();
        let b = Fp::new(1, 5).unwrap();
        assert_eq!(a.try_add(b), Err(Error::ModulusMismatch(3, 5)));
        assert_eq!((a + a).value(), 2);
        assert_eq!((-a).value(), 2);
        assert_eq!(Fp::new(2, 5).unwrap().inv().unwrap().value(), 3);
    }
}
