//! Isomorphism testing for loops and quandles.
//!
//! Elements are first sorted into cells by [`ElementInvariant`]; an
//! isomorphism must map each cell onto the corresponding cell of the other
//! loop, and loops with different [`LoopFingerprint`]s are never compared.

mod invariants;
pub(crate) mod search;

use std::collections::HashMap;

use rayon::prelude::*;

pub use invariants::{element_invariant, element_invariants, ElementInvariant, LoopFingerprint};

use crate::loops::{LoopTable, Magma, QuandleTable};
use crate::perm::Permutation;
use search::{find_isomorphism, Partitioned};

/// Buckets with more members than this are split further using the
/// right-nuclear counts before pairwise testing.
pub const DEEP_BUCKET_THRESHOLD: usize = 8;

/// A loop prepared for repeated isomorphism tests.
#[derive(Clone, Debug)]
pub struct IsoProfile<'a> {
    pub(crate) part: Partitioned<'a>,
    fingerprint: LoopFingerprint,
}

impl<'a> IsoProfile<'a> {
    pub fn new(q: &'a LoopTable) -> Self {
        Self::build(q, false)
    }

    /// Uses the full invariants, including the right-nuclear counts.
    pub fn deep(q: &'a LoopTable) -> Self {
        Self::build(q, true)
    }

    fn build(q: &'a LoopTable, deep: bool) -> Self {
        let invs = invariants::all_invariants(q, deep);
        let part = Partitioned::new(q.table(), &invs, vec![0]);
        Self {
            part,
            fingerprint: LoopFingerprint::from_invariants(q, invs),
        }
    }

    pub fn fingerprint(&self) -> &LoopFingerprint {
        &self.fingerprint
    }

    /// Generating sequence used by the search (identity excluded).
    pub fn generators(&self) -> Vec<usize> {
        self.part.gens.iter().map(|&g| g as usize).collect()
    }
}

/// An isomorphism between two prepared loops, if any.
pub fn isomorphism(a: &IsoProfile, b: &IsoProfile) -> Option<Permutation> {
    if a.fingerprint != b.fingerprint {
        return None;
    }
    find_isomorphism(&a.part, &b.part)
}

/// An explicit isomorphism `q1 → q2` fixing the identity, if one exists.
pub fn are_isomorphic(q1: &LoopTable, q2: &LoopTable) -> Option<Permutation> {
    if q1.order() != q2.order() {
        return None;
    }
    isomorphism(&IsoProfile::new(q1), &IsoProfile::new(q2))
}

/// An explicit quandle isomorphism `q1 → q2`, if one exists.
///
/// Latin quandles are homogeneous, so every element has the same local
/// invariants and the search runs on a single cell with no fixed point.
/// Pairs whose associated Bruck loops have different fingerprints are
/// rejected without searching.
pub fn quandle_isomorphism(q1: &QuandleTable, q2: &QuandleTable) -> Option<Permutation> {
    if q1.order() != q2.order() {
        return None;
    }
    let b1 = crate::correspond::quandle_to_bruck(q1, 0).ok()?;
    let b2 = crate::correspond::quandle_to_bruck(q2, 0).ok()?;
    if LoopFingerprint::new(&b1) != LoopFingerprint::new(&b2) {
        return None;
    }
    let keys = vec![(); q1.order()];
    let a = Partitioned::new(q1.table(), &keys, Vec::new());
    let b = Partitioned::new(q2.table(), &keys, Vec::new());
    find_isomorphism(&a, &b)
}

/// Result of [`filter_up_to_iso`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtered {
    /// Indices of the kept loops, ascending: the first member of every
    /// isomorphism class.
    pub kept: Vec<usize>,
    /// Number of pairwise isomorphism searches performed.
    pub checks: usize,
}

/// Keeps one loop per isomorphism class, preferring first occurrences.
///
/// Loops are bucketed by fingerprint; only members of the same bucket are
/// compared.
pub fn filter_up_to_iso(loops: &[LoopTable]) -> Filtered {
    let fingerprints: Vec<LoopFingerprint> = loops.par_iter().map(LoopFingerprint::new).collect();
    let buckets = group_by_key(&fingerprints);
    let results: Vec<(Vec<usize>, usize)> = buckets
        .into_par_iter()
        .map(|bucket| {
            if bucket.len() == 1 {
                return (bucket, 0);
            }
            let deep = bucket.len() > DEEP_BUCKET_THRESHOLD;
            let profiles: Vec<IsoProfile> = bucket
                .iter()
                .map(|&i| if deep { IsoProfile::deep(&loops[i]) } else { IsoProfile::new(&loops[i]) })
                .collect();
            let keys: Vec<&LoopFingerprint> = profiles.iter().map(|p| p.fingerprint()).collect();
            let mut kept = Vec::new();
            let mut checks = 0;
            for sub in group_by_key(&keys) {
                let mut reps: Vec<usize> = Vec::new();
                for &j in &sub {
                    let mut found = false;
                    for &r in &reps {
                        checks += 1;
                        if isomorphism(&profiles[j], &profiles[r]).is_some() {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        reps.push(j);
                    }
                }
                kept.extend(reps.into_iter().map(|j| bucket[j]));
            }
            (kept, checks)
        })
        .collect();
    let mut kept: Vec<usize> = results.iter().flat_map(|(k, _)| k.iter().copied()).collect();
    kept.sort_unstable();
    Filtered {
        kept,
        checks: results.iter().map(|(_, c)| c).sum(),
    }
}

/// Groups indices by equal keys, groups ordered by first occurrence.
fn group_by_key<K: std::hash::Hash + Eq>(keys: &[K]) -> Vec<Vec<usize>> {
    let mut slot: HashMap<&K, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        let g = *slot.entry(k).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_non_isomorphic_groups() {
        let z27 = LoopTable::cyclic(27);
        let phi = are_isomorphic(&z27, &z27).unwrap();
        assert!(z27.table().is_isomorphism_onto(z27.table(), &phi));
        assert!(are_isomorphic(&LoopTable::cyclic(9), &LoopTable::abelian(&[3, 3])).is_none());
    }

    #[test]
    fn relabeled_copies_are_found() {
        let g = LoopTable::abelian(&[3, 9]);
        let phi = Permutation::from_images(vec![0, 5, 3, 7, 1, 2, 26, 4, 6, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25]).unwrap();
        let h = g.relabel(&phi).unwrap();
        let psi = are_isomorphic(&g, &h).unwrap();
        assert_eq!(psi.apply(0), 0);
        assert!(g.table().is_isomorphism_onto(h.table(), &psi));
    }

    #[test]
    fn filtering() {
        let a = LoopTable::cyclic(9);
        let b = LoopTable::abelian(&[3, 3]);
        let r = filter_up_to_iso(&[a.clone(), b.clone()]);
        assert_eq!(r.kept, vec![0, 1]);
        let r = filter_up_to_iso(&[a.clone(), a.clone()]);
        assert_eq!(r.kept, vec![0]);
        assert_eq!(r.checks, 1);
        assert_eq!(filter_up_to_iso(&[]).kept, Vec::<usize>::new());
    }

    #[test]
    fn dihedral_quandles() {
        let q = QuandleTable::dihedral(9).unwrap();
        let shift = Permutation::from_images((0..9).map(|x| (x + 4) % 9).collect()).unwrap();
        let r = q.relabel(&shift).unwrap();
        let phi = quandle_isomorphism(&q, &r).unwrap();
        assert!(q.table().is_isomorphism_onto(r.table(), &phi));
    }
}
