use sha2::{Digest, Sha256};

use crate::cocycle::{coboundary_space, extension, variety_cocycle_space, Variety};
use crate::error::{Error, Result};
use crate::gf::{Fp, QuotientSpace, RrefBasis};
use crate::iso::{filter_up_to_iso, isomorphism, IsoProfile};
use crate::loops::{LoopTable, Magma};
use crate::symmetry::{automorphism_group, orbit_representatives, OrbitRepresentative};

/// Variety checks on extensions are skipped above this order, where the
/// automorphic-loop test alone would dominate the run time.
const CHECK_ORDER_LIMIT: usize = 81;

/// The spaces `B ⊆ C_V` of one factor.
#[derive(Clone, Debug)]
pub struct CocycleSpaces {
    pub coboundaries: RrefBasis,
    pub cocycles: RrefBasis,
}

impl CocycleSpaces {
    pub fn compute(f: &LoopTable, fp: Fp, v: Variety) -> Result<Self> {
        let cocycles = variety_cocycle_space(f, fp, v)?;
        let coboundaries = coboundary_space(f, fp);
        if !coboundaries.is_subspace_of(&cocycles) {
            return Err(Error::Internal("coboundaries are not V-cocycles".into()));
        }
        Ok(Self {
            coboundaries,
            cocycles,
        })
    }

    /// `dim C_V − dim B`.
    pub fn quotient_dim(&self) -> usize {
        self.cocycles.dim() - self.coboundaries.dim()
    }

    pub fn check_limit(&self, limit: u64) -> Result<()> {
        let space = QuotientSpace::new(&self.cocycles, &self.coboundaries)?;
        match space.len() {
            Some(t) if t <= limit => Ok(()),
            _ => Err(Error::Refused(format!(
                "coset space has {}^{} elements, above the limit {limit}",
                self.cocycles.field().p(),
                space.dim()
            ))),
        }
    }
}

/// Hex SHA-256 of a representative cocycle's text form.
pub fn orbit_hash(rep: &OrbitRepresentative) -> String {
    hex::encode(Sha256::digest(rep.cocycle.to_text().as_bytes()))
}

/// The extensions of `F` by `Z_p` in `V`, up to isomorphism.
#[derive(Clone, Debug)]
pub struct Classified {
    pub b_dim: usize,
    pub c_dim: usize,
    pub representatives: Vec<OrbitRepresentative>,
    /// Indices into `representatives` of the extensions kept by the
    /// isomorphism filter.
    pub kept: Vec<usize>,
    pub loops: Vec<LoopTable>,
    pub iso_checks: usize,
}

/// Orbit representatives of `Aut(F) × Z_p^×` on `C_V/B`.
pub fn representatives(f: &LoopTable, spaces: &CocycleSpaces, limit: u64) -> Result<Vec<OrbitRepresentative>> {
    spaces.check_limit(limit)?;
    let g = automorphism_group(f);
    orbit_representatives(f, &spaces.cocycles, &spaces.coboundaries, &g, limit)
}

/// Builds the extensions of the given representatives, checks them, and
/// keeps one per isomorphism class. Returns the kept indices, the loops
/// and the number of isomorphism checks.
pub fn filter_extensions(
    f: &LoopTable,
    v: Variety,
    reps: &[OrbitRepresentative],
) -> Result<(Vec<usize>, Vec<LoopTable>, usize)> {
    let all: Vec<LoopTable> = reps
        .iter()
        .map(|r| extension(f, &r.cocycle))
        .collect::<Result<_>>()?;
    if f.order() * reps.first().map_or(1, |r| r.cocycle.field().modulus()) <= CHECK_ORDER_LIMIT {
        if let Some(q) = all.iter().find(|q| !v.contains(q)) {
            return Err(Error::Internal(format!(
                "an extension of order {} is not in the variety {v}",
                q.order()
            )));
        }
    }
    let filtered = filter_up_to_iso(&all);
    let loops = filtered.kept.iter().map(|&i| all[i].clone()).collect();
    Ok((filtered.kept, loops, filtered.checks))
}

/// Computes `Q*_V(F, Z_p)`: all central extensions of `Z_p` by `F` lying
/// in `V`, up to isomorphism. Refuses when `|C_V/B|` exceeds `limit`.
pub fn classify_extensions(f: &LoopTable, fp: Fp, v: Variety, limit: u64) -> Result<Classified> {
    let spaces = CocycleSpaces::compute(f, fp, v)?;
    let representatives = representatives(f, &spaces, limit)?;
    let (kept, loops, iso_checks) = filter_extensions(f, v, &representatives)?;
    Ok(Classified {
        b_dim: spaces.coboundaries.dim(),
        c_dim: spaces.cocycles.dim(),
        representatives,
        kept,
        loops,
        iso_checks,
    })
}

/// A factor prepared for quotient comparisons.
pub(crate) struct FactorIndex<'a> {
    profiles: Vec<IsoProfile<'a>>,
}

impl<'a> FactorIndex<'a> {
    pub fn new(factors: &'a [LoopTable]) -> Self {
        Self {
            profiles: factors.iter().map(IsoProfile::new).collect(),
        }
    }

    /// Positions of the factors isomorphic to `q`.
    pub fn matches(&self, q: &LoopTable) -> Vec<usize> {
        let pq = IsoProfile::new(q);
        self.profiles
            .iter()
            .enumerate()
            .filter(|(_, pf)| pf.fingerprint() == pq.fingerprint() && isomorphism(&pq, pf).is_some())
            .map(|(i, _)| i)
            .collect()
    }
}

/// The cross-factor rule: an extension `Q` of factor `i` (0-based) is kept
/// iff no quotient by a central subgroup of order `p` is isomorphic to an
/// earlier factor or to a refused one.
pub(crate) fn keep_extension(q: &LoopTable, p: usize, i: usize, index: &FactorIndex, refused: &[bool]) -> Result<bool> {
    if q.center().len() == p {
        return Ok(true);
    }
    for z in q.central_subloops_of_order_p(p) {
        let quotient = q.quotient(&z)?;
        let hits = index.matches(&quotient);
        if hits.is_empty() {
            return Err(Error::Internal(
                "a central quotient matches no factor; the factor catalog is incomplete".into(),
            ));
        }
        if hits.iter().any(|&t| t < i || refused[t]) {
            return Ok(false);
        }
    }
    Ok(true)
}
