//! Automorphism groups and the action of `Aut(F) × Aut(Z_p)` on cocycles.

use std::collections::{HashSet, VecDeque};

use crate::cocycle::Cocycle;
use crate::error::{arg, Error, Result};
use crate::gf::{Fp, QuotientSpace, RrefBasis};
use crate::iso::search::Search;
use crate::iso::IsoProfile;
use crate::loops::{LoopTable, Magma};
use crate::perm::Permutation;

/// Default bound on the number of cosets an orbit computation may visit.
pub const DEFAULT_COSET_LIMIT: u64 = 100_000_000;

/// The automorphism group of a loop, as a strong generating set relative
/// to a base.
///
/// `base[i]` has orbit length `orbit_lengths[i]` under the pointwise
/// stabilizer of `base[..i]`, so the group order is the product of the
/// orbit lengths.
#[derive(Clone, Debug)]
pub struct AutGroup {
    degree: usize,
    generators: Vec<Permutation>,
    base: Vec<usize>,
    orbit_lengths: Vec<usize>,
}

impl AutGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn orbit_lengths(&self) -> &[usize] {
        &self.orbit_lengths
    }

    pub fn order(&self) -> u128 {
        self.orbit_lengths.iter().map(|&l| l as u128).product()
    }

    /// All elements, by closure of the generators. Refuses groups larger
    /// than `limit`.
    pub fn elements(&self, limit: u128) -> Result<Vec<Permutation>> {
        if self.order() > limit {
            return Err(Error::Refused(format!(
                "group of order {} exceeds the element limit {limit}",
                self.order()
            )));
        }
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        let mut out = Vec::new();
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose(&g);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
            out.push(g);
        }
        Ok(out)
    }
}

fn orbit_of(x: usize, gens: &[Permutation], n: usize) -> Vec<bool> {
    let mut inside = vec![false; n];
    inside[x] = true;
    let mut stack = vec![x];
    while let Some(u) = stack.pop() {
        for g in gens {
            let v = g.apply(u);
            if !inside[v] {
                inside[v] = true;
                stack.push(v);
            }
        }
    }
    inside
}

/// The full automorphism group of `q`.
///
/// The base is the generating sequence chosen by the isomorphism search.
/// Level by level from the deepest, every candidate image of the base point
/// that is not yet in its orbit is tried with a backtracking search; each
/// success is a new strong generator.
pub fn automorphism_group(q: &LoopTable) -> AutGroup {
    let n = q.order();
    let profile = IsoProfile::deep(q);
    let part = &profile.part;
    let base: Vec<u16> = part.gens.clone();
    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbit_lengths = vec![0; base.len()];
    for level in (0..base.len()).rev() {
        let x = base[level] as usize;
        let mut orbit = orbit_of(x, &generators, n);
        for &y in &part.cells[part.cell[x] as usize] {
            if orbit[y as usize] {
                continue;
            }
            let mut s = Search::new(part, part);
            let ok = s.assign_seed()
                && base[..level].iter().all(|&b| s.assign(b, b))
                && s.assign(x as u16, y);
            if !ok {
                continue;
            }
            if let Some(phi) = s.extend(level + 1) {
                generators.push(phi);
                orbit = orbit_of(x, &generators, n);
            }
        }
        orbit_lengths[level] = orbit.iter().filter(|&&b| b).count();
    }
    AutGroup {
        degree: n,
        generators,
        base: base.into_iter().map(|b| b as usize).collect(),
        orbit_lengths,
    }
}

/// `θ^(α,β)(x, y) = β⁻¹ θ(α(x), α(y))` on a raw flattened vector.
fn act_vector(fp: Fp, n: usize, v: &[u8], alpha: &Permutation, beta_inv: u8) -> Vec<u8> {
    let a = alpha.images();
    let mut out = vec![0u8; n * n];
    for x in 0..n {
        let ax = a[x] as usize * n;
        for y in 0..n {
            out[x * n + y] = fp.mul(beta_inv, v[ax + a[y] as usize]);
        }
    }
    out
}

/// The action of `(α, β) ∈ Aut(F) × Z_p^×` on cocycles. It is a right
/// action: acting by `(α₁, β₁)` then `(α₂, β₂)` equals acting by
/// `(α₁∘α₂, β₁β₂)`.
pub fn act(f: &LoopTable, theta: &Cocycle, alpha: &Permutation, beta: u8) -> Result<Cocycle> {
    let n = f.order();
    let fp = theta.field();
    if theta.order() != n || alpha.degree() != n {
        return arg("cocycle, permutation and loop must have the same order");
    }
    if !f.is_automorphism(alpha) {
        return arg("permutation is not an automorphism of the loop");
    }
    if beta == 0 || beta >= fp.p() {
        return arg(format!("{beta} is not a unit mod {}", fp.p()));
    }
    let v = act_vector(fp, n, theta.as_vector(), alpha, fp.inv(beta));
    Cocycle::from_vector(n, fp, v)
}

/// One orbit of `Aut(F) × Z_p^×` on `C/B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRepresentative {
    /// The canonical coset vector with the least index in the orbit.
    pub cocycle: Cocycle,
    /// Coset index of the representative in the quotient space.
    pub index: u64,
    pub orbit_size: u64,
}

/// Representatives of the orbits of `Aut(F) × Z_p^×` on `C/B`, in
/// increasing index order. Refuses when `|C/B|` exceeds `limit`.
pub fn orbit_representatives(
    f: &LoopTable,
    c: &RrefBasis,
    b: &RrefBasis,
    g: &AutGroup,
    limit: u64,
) -> Result<Vec<OrbitRepresentative>> {
    let n = f.order();
    let fp = c.field();
    if c.ncols() != n * n || g.degree() != n {
        return arg("spaces, group and loop do not match");
    }
    let space = QuotientSpace::new(c, b)?;
    let d = space.dim();
    let total = match space.len() {
        Some(t) if t <= limit => t,
        _ => {
            return Err(Error::Refused(format!(
                "coset space has {}^{d} elements, above the limit {limit}",
                fp.p()
            )))
        }
    };
    for alpha in g.generators() {
        for row in b.rows() {
            if !b.contains(&act_vector(fp, n, row, alpha, 1))? {
                return arg("group action does not preserve the coboundary space");
            }
        }
    }
    // One d × d matrix per generator, acting on coordinate row vectors.
    let mut mats: Vec<Vec<Vec<u8>>> = Vec::new();
    for alpha in g.generators() {
        let m = space
            .complement()
            .rows()
            .iter()
            .map(|h| space.coords(&act_vector(fp, n, h, alpha, 1)))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::Argument("group action does not preserve C".into()))?;
        mats.push(m);
    }
    let scalar = fp.inv(fp.primitive_root());
    let mut visited = vec![0u64; (total as usize).div_ceil(64)];
    let mut reps = Vec::new();
    let mut queue: Vec<u64> = Vec::new();
    let mut image = vec![0u8; d];
    let mut covered = 0u64;
    for start in 0..total {
        if visited[(start / 64) as usize] >> (start % 64) & 1 == 1 {
            continue;
        }
        visited[(start / 64) as usize] |= 1 << (start % 64);
        queue.clear();
        queue.push(start);
        let mut size = 0u64;
        while let Some(idx) = queue.pop() {
            size += 1;
            let coords = space.coords_of(idx);
            let mut visit = |img: &[u8], queue: &mut Vec<u64>| {
                let j = space.index_of(img);
                let (w, bit) = ((j / 64) as usize, j % 64);
                if visited[w] >> bit & 1 == 0 {
                    visited[w] |= 1 << bit;
                    queue.push(j);
                }
            };
            for m in &mats {
                image.iter_mut().for_each(|a| *a = 0);
                for (i, &ci) in coords.iter().enumerate() {
                    if ci != 0 {
                        crate::gf::axpy(fp, &mut image, &m[i], ci);
                    }
                }
                visit(&image, &mut queue);
            }
            for (a, &ci) in image.iter_mut().zip(&coords) {
                *a = fp.mul(ci, scalar);
            }
            visit(&image, &mut queue);
        }
        covered += size;
        reps.push(OrbitRepresentative {
            cocycle: Cocycle::from_vector(n, fp, space.coset(start))?,
            index: start,
            orbit_size: size,
        });
    }
    if covered != total {
        return Err(Error::Internal("orbit sizes do not sum to the coset count".into()));
    }
    Ok(reps)
}
