//! Center, central subloops, quotients and direct products.

use std::collections::BTreeSet;

use super::{CayleyTable, LoopTable, Magma};
use crate::error::{arg, Result};

impl LoopTable {
    /// The center `Z(Q)`: elements fixed by every `T_y`, `L_{y,z}`, `R_{y,z}`.
    ///
    /// `T_y(x) = x` iff `xy = yx`; `L_{y,z}(x) = x` iff `z(yx) = (zy)x`;
    /// `R_{y,z}(x) = x` iff `(xy)z = x(yz)`. Sorted ascending, always contains 0.
    pub fn center(&self) -> Vec<usize> {
        let n = self.order();
        let t = self.table();
        (0..n)
            .filter(|&x| {
                (0..n).all(|y| t.mul(x, y) == t.mul(y, x))
                    && (0..n).all(|y| {
                        let yx = t.mul(y, x);
                        let xy = t.mul(x, y);
                        (0..n).all(|z| {
                            t.mul(z, yx) == t.mul(t.mul(z, y), x)
                                && t.mul(xy, z) == t.mul(x, t.mul(y, z))
                        })
                    })
            })
            .collect()
    }

    /// All subgroups of order `p` of the center, each sorted ascending.
    ///
    /// Empty when `p` does not divide `|Z(Q)|`.
    pub fn central_subloops_of_order_p(&self, p: usize) -> Vec<Vec<usize>> {
        let center = self.center();
        if p < 2 || !center.len().is_multiple_of(p) {
            return Vec::new();
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &z in &center {
            if z == 0 {
                continue;
            }
            // The center is an abelian group, so left powers are genuine powers.
            let mut sub: Vec<usize> = (0..p).map(|k| self.left_power(z, k)).collect();
            if self.left_power(z, p) != 0 || sub[1..].contains(&0) {
                continue;
            }
            sub.sort_unstable();
            found.insert(sub);
        }
        found.into_iter().collect()
    }

    /// `Q/Z` for a central subloop `Z`. Cosets are labeled in order of their
    /// least element, so the identity coset is 0.
    pub fn quotient(&self, z: &[usize]) -> Result<LoopTable> {
        let n = self.order();
        for &x in z {
            self.table().check_index(x)?;
        }
        let zset: BTreeSet<usize> = z.iter().copied().collect();
        if !zset.contains(&0) {
            return arg("subloop must contain the identity");
        }
        if zset.iter().any(|&a| zset.iter().any(|&b| !zset.contains(&self.mul(a, b)))) {
            return arg("subset is not closed under multiplication");
        }
        let center: BTreeSet<usize> = self.center().into_iter().collect();
        if !zset.is_subset(&center) {
            return arg("subloop is not central");
        }
        if !n.is_multiple_of(zset.len()) {
            return arg("subloop order does not divide the loop order");
        }
        const UNSET: usize = usize::MAX;
        let mut label = vec![UNSET; n];
        let mut count = 0;
        for x in 0..n {
            if label[x] != UNSET {
                continue;
            }
            for &a in &zset {
                label[self.mul(x, a)] = count;
            }
            count += 1;
        }
        let m = count;
        let mut cells = vec![UNSET; m * m];
        for x in 0..n {
            for y in 0..n {
                let c = &mut cells[label[x] * m + label[y]];
                let v = label[self.mul(x, y)];
                if *c == UNSET {
                    *c = v;
                } else if *c != v {
                    return arg("coset product is not well defined");
                }
            }
        }
        LoopTable::from_cells(m, cells)
    }

    /// `Q1 × Q2` with `(a, b)` encoded as `a·|Q2| + b`.
    pub fn direct_product(&self, other: &LoopTable) -> LoopTable {
        let (n1, n2) = (self.order(), other.order());
        let t = CayleyTable::from_fn(n1 * n2, |x, y| {
            self.mul(x / n2, y / n2) * n2 + other.mul(x % n2, y % n2)
        })
        .expect("product of loops is a loop");
        LoopTable::from_valid(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_of_abelian_group_is_everything() {
        let g = LoopTable::abelian(&[3, 3]);
        assert_eq!(g.center(), (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn central_subloops() {
        let z9 = LoopTable::cyclic(9);
        assert_eq!(z9.central_subloops_of_order_p(3), vec![vec![0, 3, 6]]);
        let g = LoopTable::abelian(&[3, 3]);
        let subs = g.central_subloops_of_order_p(3);
        assert_eq!(subs.len(), 4);
        assert!(LoopTable::cyclic(9).central_subloops_of_order_p(5).is_empty());
        assert_eq!(LoopTable::cyclic(3).central_subloops_of_order_p(3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn quotient_of_z9() {
        let z9 = LoopTable::cyclic(9);
        let q = z9.quotient(&[0, 3, 6]).unwrap();
        assert_eq!(q, LoopTable::cyclic(3));
        assert!(z9.quotient(&[0, 3]).is_err());
        assert!(z9.quotient(&[3, 6]).is_err());
    }

    #[test]
    fn direct_products() {
        let p = LoopTable::cyclic(3).direct_product(&LoopTable::cyclic(3));
        assert_eq!(p, LoopTable::abelian(&[3, 3]));
        let p = LoopTable::cyclic(3).direct_product(&LoopTable::cyclic(9));
        let three_torsion = (0..27).filter(|&x| p.left_power(x, 3) == 0).count();
        assert_eq!(three_torsion, 9);
    }
}
