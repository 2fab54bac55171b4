//! Dense linear algebra over a prime field GF(p), `p < 256`.
//!
//! Vectors are plain `u8` slices with entries in `0..p`.

mod kernel;
mod matrix;
mod quotient;
mod solver;

pub use matrix::{GfMatrix, RrefBasis};
pub use quotient::{coset_enumerator, QuotientSpace};
pub use solver::StreamingSolver;

pub(crate) use kernel::axpy;

use crate::error::{arg, Result};

/// A prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u8);

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..256).contains(&p) || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return arg(format!("{p} is not a prime below 256"));
        }
        Ok(Fp(p as u8))
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn modulus(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.0 as u16 - b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    /// Reduces any integer into `0..p`.
    #[inline]
    pub fn reduce(self, a: i64) -> u8 {
        a.rem_euclid(self.0 as i64) as u8
    }

    pub fn pow(self, mut a: u8, mut e: u64) -> u8 {
        let mut acc = 1u8 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 as u64 - 2)
    }

    /// Least generator of the multiplicative group.
    pub fn primitive_root(self) -> u8 {
        let p = self.0 as u64;
        if p == 2 {
            return 1;
        }
        let mut factors = Vec::new();
        let mut m = p - 1;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.0)
            .find(|&g| factors.iter().all(|&q| self.pow(g, (p - 1) / q) != 1))
            .expect("every prime field has a primitive root")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_only() {
        assert!(Fp::new(3).is_ok());
        assert!(Fp::new(251).is_ok());
        assert!(Fp::new(9).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(257).is_err());
    }

    #[test]
    fn field_arithmetic() {
        for p in [2u32, 3, 5, 7, 11, 13, 251] {
            let f = Fp::new(p).unwrap();
            for a in 1..p as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
            let g = f.primitive_root();
            let mut seen = std::collections::HashSet::new();
            for e in 0..(p - 1) as u64 {
                seen.insert(f.pow(g, e));
            }
            assert_eq!(seen.len(), (p - 1) as usize);
        }
        assert_eq!(Fp::new(3).unwrap().primitive_root(), 2);
        assert_eq!(Fp::new(7).unwrap().reduce(-1), 6);
    }
}
