//! Variety predicates, inner mappings and element orders.
//!
//! All predicates are exhaustive scans with early exit.

use std::collections::HashSet;

use super::{LoopTable, Magma};
use crate::error::{arg, Error, Result};
use crate::perm::Permutation;

/// Generators of the inner mapping group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerKind {
    /// `T_x = L_x⁻¹ R_x`
    T,
    /// `L_{x,y} = L_{yx}⁻¹ L_y L_x`
    L,
    /// `R_{x,y} = R_{xy}⁻¹ R_y R_x`
    R,
}

impl LoopTable {
    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (x + 1..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.mul(x, y);
                (0..n).all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }

    /// `x(y(xz)) = (x(yx))z` for all triples.
    pub fn is_left_bol(&self) -> bool {
        self.left_bol_violation().is_none()
    }

    pub(crate) fn left_bol_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        let t = self.table();
        for x in 0..n {
            let rx = t.row(x);
            for y in 0..n {
                let ry = t.row(y);
                let lhs_row = t.row(t.mul(x, t.mul(y, x)));
                for z in 0..n {
                    let left = rx[ry[rx[z] as usize] as usize];
                    if left != lhs_row[z] {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// `(xy)⁻¹ = x⁻¹y⁻¹`. Errors if some element lacks a two-sided inverse.
    pub fn has_automorphic_inverse_property(&self) -> Result<bool> {
        let inv = self.two_sided_inverses()?;
        let n = self.order();
        Ok((0..n).all(|x| {
            (0..n).all(|y| {
                inv[self.mul(x, y)] as usize == self.mul(inv[x] as usize, inv[y] as usize)
            })
        }))
    }

    pub fn is_left_bruck(&self) -> bool {
        self.has_automorphic_inverse_property().unwrap_or(false) && self.is_left_bol()
    }

    /// One of `T_x`, `L_{x,y}`, `R_{x,y}`; `y` is required for the binary kinds.
    pub fn inner_mapping(&self, kind: InnerKind, x: usize, y: Option<usize>) -> Result<Permutation> {
        let t = self.table();
        t.check_index(x)?;
        if let Some(y) = y {
            t.check_index(y)?;
        }
        let images = match (kind, y) {
            (InnerKind::T, _) => self.t_map(x),
            (InnerKind::L, Some(y)) => self.l_map(x, y),
            (InnerKind::R, Some(y)) => self.r_map(x, y),
            (_, None) => return arg(format!("inner mapping {kind:?} needs two arguments")),
        };
        Ok(Permutation::from_raw(images))
    }

    /// `T_x(z) = x\(zx)`
    pub(crate) fn t_map(&self, x: usize) -> Vec<u16> {
        (0..self.order())
            .map(|z| self.ldiv(x, self.mul(z, x)) as u16)
            .collect()
    }

    /// `L_{x,y}(z) = (yx)\(y(xz))`
    pub(crate) fn l_map(&self, x: usize, y: usize) -> Vec<u16> {
        let yx = self.mul(y, x);
        (0..self.order())
            .map(|z| self.ldiv(yx, self.mul(y, self.mul(x, z))) as u16)
            .collect()
    }

    /// `R_{x,y}(z) = ((zx)y)/(xy)`
    pub(crate) fn r_map(&self, x: usize, y: usize) -> Vec<u16> {
        let xy = self.mul(x, y);
        (0..self.order())
            .map(|z| self.rdiv(self.mul(self.mul(z, x), y), xy) as u16)
            .collect()
    }

    pub(crate) fn is_automorphism_images(&self, images: &[u16]) -> bool {
        let n = self.order();
        let t = self.table();
        (0..n).all(|x| {
            let fx = images[x] as usize;
            let row = t.row(x);
            let frow = t.row(fx);
            (0..n).all(|y| images[row[y] as usize] == frow[images[y] as usize])
        })
    }

    pub fn is_automorphism(&self, alpha: &Permutation) -> bool {
        alpha.degree() == self.order() && self.is_automorphism_images(alpha.images())
    }

    fn all_automorphisms<I>(&self, maps: I) -> bool
    where
        I: Iterator<Item = Vec<u16>>,
    {
        let mut checked: HashSet<Vec<u16>> = HashSet::new();
        for m in maps {
            if checked.contains(&m) {
                continue;
            }
            if !self.is_automorphism_images(&m) {
                return false;
            }
            checked.insert(m);
        }
        true
    }

    /// Every `L_{x,y}` is an automorphism.
    pub fn is_left_automorphic(&self) -> bool {
        let n = self.order();
        self.all_automorphisms((0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| self.l_map(x, y)))
    }

    /// Every `T_x`, `L_{x,y}` and `R_{x,y}` is an automorphism.
    pub fn is_automorphic(&self) -> bool {
        let n = self.order();
        let pairs = move || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)));
        self.all_automorphisms((0..n).map(|x| self.t_map(x)))
            && self.is_left_automorphic()
            && self.all_automorphisms(pairs().map(|(x, y)| self.r_map(x, y)))
    }

    /// Commutative, automorphic inverse property, `L_x L_{x⁻¹} = L_{x⁻¹} L_x`
    /// and `P_x P_y P_x = P_{P_x(y)}` with `P_x = L_{x⁻¹}⁻¹ R_x`.
    pub fn is_gamma_loop(&self) -> Result<bool> {
        if !self.is_commutative() {
            return Err(Error::Unsupported("Γ-loop test needs a commutative loop".into()));
        }
        let inv = self.two_sided_inverses()?;
        if !self.has_automorphic_inverse_property()? {
            return Ok(false);
        }
        let n = self.order();
        for x in 0..n {
            let xi = inv[x] as usize;
            if (0..n).any(|z| self.mul(x, self.mul(xi, z)) != self.mul(xi, self.mul(x, z))) {
                return Ok(false);
            }
        }
        // P_x(z) = x⁻¹ \ (z x)
        let p: Vec<Vec<u16>> = (0..n)
            .map(|x| {
                let xi = inv[x] as usize;
                (0..n).map(|z| self.ldiv(xi, self.mul(z, x)) as u16).collect()
            })
            .collect();
        for x in 0..n {
            let px = &p[x];
            for y in 0..n {
                let py = &p[y];
                let pq = &p[px[y] as usize];
                if (0..n).any(|z| px[py[px[z] as usize] as usize] != pq[z]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `x^k` as a left power: `x^0 = 0`, `x^(k+1) = x·x^k`.
    pub fn left_power(&self, x: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(x, acc))
    }

    /// Least `m ≥ 1` with `x^m = 0`, capped at `n`.
    pub fn element_order(&self, x: usize) -> Result<usize> {
        self.table().check_index(x)?;
        let mut acc = x;
        for m in 1..=self.order() {
            if acc == 0 {
                return Ok(m);
            }
            acc = self.mul(x, acc);
        }
        Err(Error::NotPowerAssociative { element: x })
    }

    /// Checks `x^a · x^b = x^(a+b)` for every `x` and `0 ≤ a, b < |x|`.
    pub fn powers_are_consistent(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| match self.element_order(x) {
            Err(_) => false,
            Ok(m) => {
                let pw: Vec<usize> = (0..m).map(|k| self.left_power(x, k)).collect();
                (0..m).all(|a| (0..m).all(|b| self.mul(pw[a], pw[b]) == pw[(a + b) % m]))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::CayleyTable;

    fn s3() -> LoopTable {
        // Permutations of {0,1,2} in lexicographic order; product is composition.
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let t = CayleyTable::from_fn(6, |a, b| {
            let (p, q) = (perms[a], perms[b]);
            idx([p[q[0]], p[q[1]], p[q[2]]])
        })
        .unwrap();
        LoopTable::new(t).unwrap()
    }

    #[test]
    fn groups_are_left_bol() {
        assert!(LoopTable::cyclic(3).is_left_bol());
        assert!(LoopTable::abelian(&[3, 3]).is_left_bol());
        assert!(s3().is_left_bol());
    }

    #[test]
    fn aip_fails_in_s3() {
        let g = s3();
        assert!(!g.has_automorphic_inverse_property().unwrap());
        // witness by brute force
        let inv = g.inverses().unwrap();
        let witness = (0..6).flat_map(|x| (0..6).map(move |y| (x, y))).find(|&(x, y)| {
            inv[g.mul(x, y)] as usize != g.mul(inv[x] as usize, inv[y] as usize)
        });
        assert!(witness.is_some());
        assert!(!g.is_left_bruck());
        assert!(LoopTable::abelian(&[3, 9]).has_automorphic_inverse_property().unwrap());
    }

    #[test]
    fn aip_needs_inverses() {
        // A loop of order 5 in which element 1 has distinct left and right inverses.
        let t = CayleyTable::new(
            5,
            vec![
                0, 1, 2, 3, 4, //
                1, 2, 3, 4, 0, //
                2, 0, 4, 1, 3, //
                3, 4, 0, 2, 1, //
                4, 3, 1, 0, 2,
            ],
        )
        .unwrap();
        let l = LoopTable::new(t).unwrap();
        assert!(l.inverses().is_none());
        assert!(matches!(l.has_automorphic_inverse_property(), Err(Error::Unsupported(_))));
        assert!(!l.is_left_bruck());
    }

    #[test]
    fn inner_mappings_of_groups() {
        let z9 = LoopTable::cyclic(9);
        for x in 0..9 {
            assert!(z9.inner_mapping(InnerKind::T, x, None).unwrap().is_identity());
            for y in 0..9 {
                assert!(z9.inner_mapping(InnerKind::L, x, Some(y)).unwrap().is_identity());
            }
        }
        assert!(z9.inner_mapping(InnerKind::L, 1, None).is_err());
        let g = s3();
        assert!(g.is_automorphic());
        assert!(!g.is_commutative());
        assert!(g.is_left_automorphic());
    }

    #[test]
    fn gamma_and_orders() {
        assert!(LoopTable::abelian(&[3, 3]).is_gamma_loop().unwrap());
        assert!(LoopTable::cyclic(2).is_gamma_loop().unwrap());
        assert!(s3().is_gamma_loop().is_err());
        let z9 = LoopTable::cyclic(9);
        assert_eq!(z9.element_order(0).unwrap(), 1);
        assert_eq!(z9.element_order(3).unwrap(), 3);
        assert_eq!(z9.element_order(1).unwrap(), 9);
        assert!(z9.powers_are_consistent());
    }

    #[test]
    fn element_order_follows_left_translation_orbit() {
        // Left powers walk the orbit of 0 under L_x, so they always return to 0;
        // power associativity is a separate check.
        let t = CayleyTable::new(
            5,
            vec![
                0, 1, 2, 3, 4, //
                1, 0, 3, 4, 2, //
                2, 3, 4, 0, 1, //
                3, 4, 1, 2, 0, //
                4, 2, 0, 1, 3,
            ],
        )
        .unwrap();
        let l = LoopTable::new(t).unwrap();
        for x in 0..5 {
            let lx = l.left_translation(x).unwrap();
            let cycle = lx.cycles().into_iter().find(|c| c.contains(&0)).unwrap();
            assert_eq!(l.element_order(x).unwrap(), cycle.len());
        }
        assert!(!l.powers_are_consistent());
    }
}
