//! Per-element isomorphism invariants and whole-loop fingerprints.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::loops::{LoopTable, Magma};

/// Numerical invariants of one element `x` of a loop.
///
/// Orders are left-power orders, so every component is preserved by
/// isomorphisms. The order-keyed maps are stored as sorted lists of
/// `(key, count)` with zero counts omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementInvariant {
    /// Cycle lengths of `L_x`, ascending.
    pub cycle_type: Vec<u32>,
    pub order: u32,
    /// Numbers of `y` with `y² = x`, `y³ = x`, `y⁴ = x`.
    pub roots: [u32; 3],
    /// `|y| ↦ #{y : x(xy) = (xx)y}`.
    pub left_alternative: Vec<(u32, u32)>,
    /// `(|y|, |z|) ↦ #{(y, z) : y(zx) = (yz)x}`; only computed on request.
    pub right_nuclear: Option<Vec<((u32, u32), u32)>>,
    /// `|y| ↦ #{y : xy = yx}`.
    pub commuting: Vec<(u32, u32)>,
}

fn counts(keys: impl Iterator<Item = u32>) -> Vec<(u32, u32)> {
    let mut v: Vec<u32> = keys.collect();
    v.sort_unstable();
    let mut out: Vec<(u32, u32)> = Vec::new();
    for k in v {
        match out.last_mut() {
            Some((last, c)) if *last == k => *c += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

pub(crate) fn orders(q: &LoopTable) -> Vec<u32> {
    (0..q.order())
        .map(|x| q.element_order(x).expect("left powers of a loop element reach 0") as u32)
        .collect()
}

/// Invariants of every element. `deep` also computes the `O(n²)`-per-element
/// right-nuclear counts.
pub(crate) fn all_invariants(q: &LoopTable, deep: bool) -> Vec<ElementInvariant> {
    let n = q.order();
    let t = q.table();
    let ord = orders(q);
    let mut roots = vec![[0u32; 3]; n];
    for y in 0..n {
        let y2 = t.mul(y, y);
        let y3 = t.mul(y, y2);
        let y4 = t.mul(y, y3);
        roots[y2][0] += 1;
        roots[y3][1] += 1;
        roots[y4][2] += 1;
    }
    (0..n)
        .map(|x| {
            let lx = q.left_translation(x).expect("index in range");
            let xx = t.mul(x, x);
            let rx = t.row(x);
            let rxx = t.row(xx);
            let left_alternative =
                counts((0..n).filter(|&y| rx[rx[y] as usize] == rxx[y]).map(|y| ord[y]));
            let commuting = counts((0..n).filter(|&y| rx[y] as usize == t.mul(y, x)).map(|y| ord[y]));
            let right_nuclear = deep.then(|| {
                let mut m: Vec<((u32, u32), u32)> = Vec::new();
                let mut keys = Vec::new();
                for y in 0..n {
                    let ry = t.row(y);
                    for z in 0..n {
                        let zx = t.mul(z, x);
                        let yz = ry[z] as usize;
                        if ry[zx] as usize == t.mul(yz, x) {
                            keys.push((ord[y], ord[z]));
                        }
                    }
                }
                keys.sort_unstable();
                for k in keys {
                    match m.last_mut() {
                        Some((last, c)) if *last == k => *c += 1,
                        _ => m.push((k, 1)),
                    }
                }
                m
            });
            ElementInvariant {
                cycle_type: lx.cycle_type().into_iter().map(|c| c as u32).collect(),
                order: ord[x],
                roots: roots[x],
                left_alternative,
                right_nuclear,
                commuting,
            }
        })
        .collect()
}

/// Invariants of one element, including the right-nuclear counts. Errors
/// unless the loop is power associative.
pub fn element_invariant(q: &LoopTable, x: usize) -> Result<ElementInvariant> {
    q.table().check_index(x)?;
    Ok(element_invariants(q)?.swap_remove(x))
}

/// Invariants of all elements, including the right-nuclear counts.
pub fn element_invariants(q: &LoopTable) -> Result<Vec<ElementInvariant>> {
    if !q.powers_are_consistent() {
        let x = (0..q.order())
            .find(|&x| {
                let m = q.element_order(x).unwrap_or(0);
                let pw: Vec<usize> = (0..m).map(|k| q.left_power(x, k)).collect();
                !(0..m).all(|a| (0..m).all(|b| q.mul(pw[a], pw[b]) == pw[(a + b) % m]))
            })
            .unwrap_or(0);
        return Err(Error::Unsupported(format!("loop is not power associative at element {x}")));
    }
    Ok(all_invariants(q, true))
}

/// Isomorphism invariant of a whole loop: its order, the size of its
/// center, and the sorted multiset of element invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopFingerprint {
    pub order: u32,
    pub center_size: u32,
    pub invariants: Vec<ElementInvariant>,
}

impl LoopFingerprint {
    /// Fingerprint without the right-nuclear counts.
    pub fn new(q: &LoopTable) -> Self {
        Self::from_invariants(q, all_invariants(q, false))
    }

    /// Fingerprint including the right-nuclear counts.
    pub fn deep(q: &LoopTable) -> Self {
        Self::from_invariants(q, all_invariants(q, true))
    }

    pub(crate) fn from_invariants(q: &LoopTable, mut invariants: Vec<ElementInvariant>) -> Self {
        invariants.sort();
        Self {
            order: q.order() as u32,
            center_size: q.center().len() as u32,
            invariants,
        }
    }

    /// Canonical serialization: big-endian `u32`s in field order, every list
    /// prefixed by its length, an absent right-nuclear map written as
    /// `0xffffffff`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut put = |v: u32| out.extend_from_slice(&v.to_be_bytes());
        put(self.order);
        put(self.center_size);
        put(self.invariants.len() as u32);
        for inv in &self.invariants {
            put(inv.cycle_type.len() as u32);
            inv.cycle_type.iter().for_each(|&c| put(c));
            put(inv.order);
            inv.roots.iter().for_each(|&c| put(c));
            put(inv.left_alternative.len() as u32);
            for &(k, c) in &inv.left_alternative {
                put(k);
                put(c);
            }
            match &inv.right_nuclear {
                None => put(u32::MAX),
                Some(m) => {
                    put(m.len() as u32);
                    for &((a, b), c) in m {
                        put(a);
                        put(b);
                        put(c);
                    }
                }
            }
            put(inv.commuting.len() as u32);
            for &(k, c) in &inv.commuting {
                put(k);
                put(c);
            }
        }
        out
    }

    /// Hex SHA-256 of [`to_bytes`](Self::to_bytes).
    pub fn hash_hex(&self) -> String {
        hex::encode(Sha256::digest(self.to_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_group_invariants() {
        let g = LoopTable::abelian(&[3, 9]);
        let invs = element_invariants(&g).unwrap();
        let by_order = counts(invs.iter().map(|i| i.order));
        for inv in &invs {
            assert_eq!(inv.commuting, by_order);
            assert_eq!(inv.left_alternative, by_order);
        }
    }

    #[test]
    fn generator_of_z9() {
        let inv = element_invariant(&LoopTable::cyclic(9), 1).unwrap();
        assert_eq!(inv.cycle_type, vec![9]);
        assert_eq!(inv.order, 9);
        assert_eq!(inv.roots, [1, 0, 1]);
    }

    #[test]
    fn non_power_associative_loops_are_rejected() {
        let q = LoopTable::from_cells(
            5,
            vec![0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 3, 4, 0, 1, 3, 4, 1, 2, 0, 4, 2, 0, 1, 3],
        )
        .unwrap();
        assert!(matches!(element_invariant(&q, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn fingerprints_separate_small_groups() {
        let a = LoopFingerprint::new(&LoopTable::cyclic(9));
        let b = LoopFingerprint::new(&LoopTable::abelian(&[3, 3]));
        assert_ne!(a, b);
        assert_ne!(a.hash_hex(), b.hash_hex());
        assert_eq!(a.hash_hex().len(), 64);
        assert_eq!(a.to_bytes(), LoopFingerprint::new(&LoopTable::cyclic(9)).to_bytes());
    }
}
