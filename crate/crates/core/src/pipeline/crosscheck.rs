use super::catalog::Catalog;
use crate::cocycle::Variety;
use crate::correspond::{bruck_to_gamma, gamma_to_bruck};
use crate::error::{arg, Result};
use crate::iso::{isomorphism, IsoProfile};

/// How the Bruck-to-Γ correspondence maps one catalog onto another.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrosscheckReport {
    /// `(bruck id, ca id)` for every Bruck entry whose image was found.
    pub pairs: Vec<(usize, usize)>,
    /// Bruck ids whose image is not a commutative automorphic loop.
    pub not_automorphic: Vec<usize>,
    /// Bruck ids whose image is isomorphic to no CA entry.
    pub unmatched: Vec<usize>,
    /// Bruck ids for which going back does not return an isomorphic loop.
    pub round_trip_failures: Vec<usize>,
    /// CA ids hit by no Bruck entry.
    pub missed: Vec<usize>,
}

impl CrosscheckReport {
    /// Every Bruck entry maps to a distinct CA entry and every CA entry is
    /// hit.
    pub fn is_bijection(&self) -> bool {
        self.not_automorphic.is_empty()
            && self.unmatched.is_empty()
            && self.round_trip_failures.is_empty()
            && self.missed.is_empty()
            && {
                let mut ca: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
                ca.sort_unstable();
                ca.windows(2).all(|w| w[0] != w[1])
            }
    }
}

/// Maps each Bruck entry to its Γ-loop and locates it in the CA catalog.
pub fn crosscheck_correspondences(bruck: &Catalog, ca: &Catalog) -> Result<CrosscheckReport> {
    if bruck.order != ca.order || bruck.prime != ca.prime {
        return arg("catalogs have different orders or primes");
    }
    if bruck.kind.loop_variety() != Variety::Bruck || ca.kind.loop_variety() != Variety::CommutativeAutomorphic {
        return arg("expected a Bruck (or quandle) catalog and a CA catalog");
    }
    let ca_loops = ca.loops()?;
    let ca_profiles: Vec<IsoProfile> = ca_loops.iter().map(IsoProfile::new).collect();
    let mut report = CrosscheckReport::default();
    let mut hit = vec![false; ca_loops.len()];
    for e in &bruck.entries {
        let b = e.as_loop()?;
        let g = bruck_to_gamma(&b)?;
        if !Variety::CommutativeAutomorphic.contains(&g) {
            report.not_automorphic.push(e.id);
            continue;
        }
        let back = gamma_to_bruck(&g)?;
        if isomorphism(&IsoProfile::new(&back), &IsoProfile::new(&b)).is_none() {
            report.round_trip_failures.push(e.id);
        }
        let pg = IsoProfile::new(&g);
        let found = ca_profiles
            .iter()
            .position(|pc| pc.fingerprint() == pg.fingerprint() && isomorphism(&pg, pc).is_some());
        match found {
            Some(j) => {
                hit[j] = true;
                report.pairs.push((e.id, ca.entries[j].id));
            }
            None => report.unmatched.push(e.id),
        }
    }
    report.missed = ca
        .entries
        .iter()
        .zip(&hit)
        .filter(|(_, &h)| !h)
        .map(|(e, _)| e.id)
        .collect();
    Ok(report)
}
