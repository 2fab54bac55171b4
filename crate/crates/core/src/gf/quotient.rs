use super::kernel::{axpy, is_zero};
use super::{Fp, RrefBasis};
use crate::error::{arg, Result};

/// The quotient `C/B` of two row spaces with `B ⊆ C`.
///
/// Cosets are represented by a complement basis `H` of `B` inside `C`,
/// itself in reduced row-echelon form and vanishing on `B`'s pivot columns.
/// A coset is named by its coordinate vector over `H` or, equivalently, by
/// the integer whose base-`p` digits are those coordinates (first coordinate
/// most significant). Numeric order of indices agrees with the
/// lexicographic order of the canonical (`reduce_mod`) coset vectors.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    b: RrefBasis,
    h: RrefBasis,
}

impl QuotientSpace {
    pub fn new(c: &RrefBasis, b: &RrefBasis) -> Result<Self> {
        if c.fp != b.fp || c.ncols != b.ncols {
            return arg("subspaces live in different spaces");
        }
        if !b.is_subspace_of(c) {
            return arg("B is not contained in C");
        }
        let reduced: Vec<Vec<u8>> = c
            .rows
            .iter()
            .map(|r| {
                let mut w = r.clone();
                b.reduce_in_place(&mut w);
                w
            })
            .collect();
        let h = RrefBasis::span(c.fp, c.ncols, reduced)?;
        debug_assert_eq!(h.dim() + b.dim(), c.dim());
        Ok(Self { b: b.clone(), h })
    }

    pub fn field(&self) -> Fp {
        self.b.fp
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Complement basis `H`.
    pub fn complement(&self) -> &RrefBasis {
        &self.h
    }

    pub fn denominator(&self) -> &RrefBasis {
        &self.b
    }

    /// Number of cosets, or `None` if it does not fit in a `u64`.
    pub fn len(&self) -> Option<u64> {
        (self.field().p() as u64).checked_pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinates over `H` of the coset of `v`; `v` must lie in `C`.
    pub fn coords(&self, v: &[u8]) -> Result<Vec<u8>> {
        let fp = self.field();
        let mut w = self.b.reduce_mod(v)?;
        let coords: Vec<u8> = self.h.pivots.iter().map(|&c| w[c]).collect();
        for (row, &a) in self.h.rows.iter().zip(&coords) {
            axpy(fp, &mut w, row, fp.neg(a));
        }
        if !is_zero(&w) {
            return arg("vector does not lie in C");
        }
        Ok(coords)
    }

    /// Canonical coset vector for the given coordinates.
    pub fn vector(&self, coords: &[u8]) -> Vec<u8> {
        let mut v = vec![0u8; self.h.ncols];
        for (row, &a) in self.h.rows.iter().zip(coords) {
            axpy(self.field(), &mut v, row, a);
        }
        v
    }

    pub fn index_of(&self, coords: &[u8]) -> u64 {
        let p = self.field().p() as u64;
        coords.iter().fold(0, |acc, &a| acc * p + a as u64)
    }

    pub fn coords_of(&self, mut index: u64) -> Vec<u8> {
        let p = self.field().p() as u64;
        let mut coords = vec![0u8; self.dim()];
        for slot in coords.iter_mut().rev() {
            *slot = (index % p) as u8;
            index /= p;
        }
        coords
    }

    /// Canonical coset vector with the given index.
    pub fn coset(&self, index: u64) -> Vec<u8> {
        self.vector(&self.coords_of(index))
    }
}

/// Iterator over all cosets of a [`QuotientSpace`] in index order.
#[derive(Clone, Debug)]
pub struct Cosets {
    space: QuotientSpace,
    next: u64,
    end: u64,
}

impl Iterator for Cosets {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.next == self.end {
            return None;
        }
        let v = self.space.coset(self.next);
        self.next += 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

/// One canonical vector per coset of `B` in `C`.
pub fn coset_enumerator(c: &RrefBasis, b: &RrefBasis) -> Result<Cosets> {
    let space = QuotientSpace::new(c, b)?;
    let Some(end) = space.len() else {
        return arg("too many cosets to enumerate");
    };
    Ok(Cosets {
        space,
        next: 0,
        end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn equal_spaces_have_one_coset() {
        let c = RrefBasis::span(f3(), 3, vec![vec![1, 1, 0]]).unwrap();
        let all: Vec<_> = coset_enumerator(&c, &c).unwrap().collect();
        assert_eq!(all, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn cosets_are_canonical_and_distinct() {
        let c = RrefBasis::span(f3(), 3, vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let b = RrefBasis::span(f3(), 3, vec![vec![1, 1, 0]]).unwrap();
        let all: Vec<_> = coset_enumerator(&c, &b).unwrap().collect();
        assert_eq!(all.len(), 3);
        for v in &all {
            assert_eq!(&b.reduce_mod(v).unwrap(), v);
            assert!(c.contains(v).unwrap());
        }
        let q = QuotientSpace::new(&c, &b).unwrap();
        for (i, v) in all.iter().enumerate() {
            assert_eq!(q.index_of(&q.coords(v).unwrap()), i as u64);
        }
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn rejects_non_subspace() {
        let c = RrefBasis::span(f3(), 3, vec![vec![1, 1, 0]]).unwrap();
        let b = RrefBasis::span(f3(), 3, vec![vec![0, 0, 1]]).unwrap();
        assert!(coset_enumerator(&c, &b).is_err());
        let q = QuotientSpace::new(&c, &RrefBasis::empty(f3(), 3)).unwrap();
        assert!(q.coords(&[0, 0, 1]).is_err());
    }
}
