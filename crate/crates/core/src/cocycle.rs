//! Loop cocycles over `Z_p`, coboundaries, the linear systems cutting out
//! variety cocycles, and central extensions.
//!
//! A cocycle `θ: F × F → Z_p` is stored as the row-major vector
//! `θ(x, y) ↦ entries[x·n + y]`; every linear-algebra routine in the crate
//! uses that flattening. Extensions encode the pair `(x, a)` as `x·p + a`,
//! so the kernel `{(0, a)}` is `0..p` and projecting onto `F` is division
//! by `p`.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{arg, Error, Result};
use crate::gf::{Fp, RrefBasis, StreamingSolver};
use crate::loops::text::{parse_header_and_rows, write_rows};
use crate::loops::{CayleyTable, LoopTable, Magma};

/// A normalized loop cocycle: row 0 and column 0 vanish.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle {
    n: usize,
    fp: Fp,
    entries: Vec<u8>,
}

impl Cocycle {
    pub fn zero(n: usize, fp: Fp) -> Self {
        Self {
            n,
            fp,
            entries: vec![0; n * n],
        }
    }

    /// Wraps a flattened `n²`-vector. Errors unless the entries lie in
    /// `0..p` and `θ(x, 0) = θ(0, x) = 0`.
    pub fn from_vector(n: usize, fp: Fp, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != n * n {
            return arg(format!("cocycle vector has length {}, expected {}", entries.len(), n * n));
        }
        if entries.iter().any(|&a| a >= fp.p()) {
            return arg(format!("cocycle entry out of range for p = {}", fp.p()));
        }
        if let Some(x) = (0..n).find(|&x| entries[x * n] != 0 || entries[x] != 0) {
            return arg(format!("cocycle is not normalized at element {x}"));
        }
        Ok(Self { n, fp, entries })
    }

    pub fn from_fn(n: usize, fp: Fp, f: impl Fn(usize, usize) -> i64) -> Result<Self> {
        let entries = (0..n * n).map(|i| fp.reduce(f(i / n, i % n))).collect();
        Self::from_vector(n, fp, entries)
    }

    /// Order of the loop the cocycle lives on.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.entries[x * self.n + y]
    }

    pub fn as_vector(&self) -> &[u8] {
        &self.entries
    }

    pub fn into_vector(self) -> Vec<u8> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Cocycle) -> Result<Cocycle> {
        if self.n != other.n || self.fp != other.fp {
            return arg("cocycles of different shape");
        }
        let fp = self.fp;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| fp.add(a, b)).collect();
        Ok(Cocycle { entries, ..*self })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("cocycle {} {}\n", self.n, self.fp.p());
        write_rows(&mut out, self.n, |x, y| self.get(x, y) as usize);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (header, rows) = parse_header_and_rows(text)?;
        let bad = |msg: &str| Error::Parse {
            line: 1,
            msg: msg.into(),
        };
        let [kind, n, p] = header.as_slice() else {
            return Err(bad("expected `cocycle n p`"));
        };
        if kind != "cocycle" {
            return Err(bad("expected `cocycle n p`"));
        }
        let n: usize = n.parse().map_err(|_| bad("bad order"))?;
        let p: u32 = p.parse().map_err(|_| bad("bad prime"))?;
        let fp = Fp::new(p)?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(bad(&format!("expected {n} rows of {n} values")));
        }
        let entries = rows
            .into_iter()
            .flatten()
            .map(|a| u8::try_from(a).unwrap_or(u8::MAX))
            .collect();
        Self::from_vector(n, fp, entries)
    }
}

impl std::fmt::Display for Cocycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The loop varieties whose cocycles can be computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variety {
    Bruck,
    CommutativeAutomorphic,
}

impl Variety {
    pub fn name(self) -> &'static str {
        match self {
            Variety::Bruck => "bruck",
            Variety::CommutativeAutomorphic => "ca",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "bruck" => Ok(Variety::Bruck),
            "ca" => Ok(Variety::CommutativeAutomorphic),
            other => arg(format!("unknown variety {other:?}")),
        }
    }

    /// Checks that `f` lies in the variety, naming the first failed identity.
    pub fn check_member(self, f: &LoopTable) -> Result<()> {
        let fail = |msg: String| Err(Error::Precondition(msg));
        match self {
            Variety::Bruck => {
                if let Some((x, y, z)) = f.left_bol_violation() {
                    return fail(format!("left Bol identity fails at x={x}, y={y}, z={z}"));
                }
                if !f.has_automorphic_inverse_property().unwrap_or(false) {
                    return fail("automorphic inverse property fails".into());
                }
            }
            Variety::CommutativeAutomorphic => {
                if !f.is_commutative() {
                    return fail("loop is not commutative".into());
                }
                if !f.is_left_automorphic() {
                    return fail("some L_{x,y} is not an automorphism".into());
                }
            }
        }
        Ok(())
    }

    pub fn contains(self, f: &LoopTable) -> bool {
        self.check_member(f).is_ok()
    }
}

impl std::fmt::Display for Variety {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `τ̂(x, y) = τ(xy) − τ(x) − τ(y)`; requires `τ(0) = 0`.
pub fn coboundary(f: &LoopTable, fp: Fp, tau: &[u8]) -> Result<Cocycle> {
    let n = f.order();
    if tau.len() != n {
        return arg(format!("map has length {}, expected {n}", tau.len()));
    }
    if tau[0] != 0 {
        return arg("map must vanish at the identity");
    }
    let t = |x: usize| tau[x] as i64;
    Cocycle::from_fn(n, fp, |x, y| t(f.mul(x, y)) - t(x) - t(y))
}

/// Basis of `B(F, Z_p)`, spanned by the coboundaries of the delta maps at
/// the non-identity elements.
pub fn coboundary_space(f: &LoopTable, fp: Fp) -> RrefBasis {
    let n = f.order();
    let vectors = (1..n)
        .map(|c| {
            let mut tau = vec![0u8; n];
            tau[c] = 1;
            coboundary(f, fp, &tau).expect("delta map vanishes at 0").into_vector()
        })
        .collect();
    RrefBasis::span(fp, n * n, vectors).expect("coboundaries have length n²")
}

/// `θ + τ̂`. The extensions by `θ` and by `θ + τ̂` are isomorphic via
/// `(x, a) ↦ (x, a + τ(x))`.
pub fn shift_by_coboundary(f: &LoopTable, theta: &Cocycle, tau: &[u8]) -> Result<Cocycle> {
    if theta.order() != f.order() {
        return arg("cocycle and loop have different orders");
    }
    theta.add(&coboundary(f, theta.field(), tau)?)
}

/// The central extension `Q(F, Z_p, θ)` with product
/// `(x, a)(y, b) = (xy, a + b + θ(x, y))`.
pub fn extension(f: &LoopTable, theta: &Cocycle) -> Result<LoopTable> {
    let n = f.order();
    if theta.order() != n {
        return arg("cocycle and loop have different orders");
    }
    let fp = theta.field();
    let p = fp.modulus();
    let mut cells = Vec::with_capacity(n * n * p * p);
    for x in 0..n {
        for a in 0..p {
            for y in 0..n {
                let xy = f.mul(x, y);
                let t = theta.get(x, y);
                for b in 0..p {
                    let c = fp.add(fp.add(a as u8, b as u8), t) as usize;
                    cells.push((xy * p + c) as u16);
                }
            }
        }
    }
    Ok(LoopTable::from_valid(CayleyTable::from_raw(n * p, cells)))
}

/// Number of equations in the system for a loop of order `n`.
pub fn equation_count(n: usize, v: Variety) -> u128 {
    let n = n as u128;
    match v {
        Variety::Bruck => 2 * n + n * n + n * n * n,
        Variety::CommutativeAutomorphic => 2 * n + n * n + n * n * n * n,
    }
}

/// Generator of the homogeneous system whose solutions are the
/// `V`-cocycles of `F`. Equations are grouped by their first variable `x`
/// so blocks can be produced independently.
pub struct CocycleSystem<'a> {
    f: &'a LoopTable,
    v: Variety,
    inv: Vec<u16>,
    lmaps: Vec<u16>,
}

impl<'a> CocycleSystem<'a> {
    pub fn new(f: &'a LoopTable, v: Variety) -> Result<Self> {
        v.check_member(f)?;
        let n = f.order();
        let inv = f.two_sided_inverses()?.to_vec();
        let lmaps = match v {
            Variety::Bruck => Vec::new(),
            Variety::CommutativeAutomorphic => {
                let mut m = Vec::with_capacity(n * n * n);
                for x in 0..n {
                    for y in 0..n {
                        m.extend(f.l_map(x, y));
                    }
                }
                m
            }
        };
        Ok(Self { f, v, inv, lmaps })
    }

    pub fn ncols(&self) -> usize {
        self.f.order() * self.f.order()
    }

    /// Emits every equation whose leading variable is `x`. Each equation is
    /// a list of `(column, coefficient)` terms summing to zero.
    pub fn block(&self, x: usize, sink: &mut impl FnMut(&[(usize, i64)])) {
        let f = self.f;
        let n = f.order();
        let c = |a: usize, b: usize| a * n + b;
        let m = |a: usize, b: usize| f.mul(a, b);
        sink(&[(c(x, 0), 1)]);
        sink(&[(c(0, x), 1)]);
        match self.v {
            Variety::Bruck => {
                let inv = |a: usize| self.inv[a] as usize;
                for y in 0..n {
                    let xy = m(x, y);
                    sink(&[
                        (c(x, y), 1),
                        (c(inv(x), inv(y)), 1),
                        (c(xy, inv(xy)), 1),
                        (c(x, inv(x)), -1),
                        (c(y, inv(y)), -1),
                    ]);
                }
                for y in 0..n {
                    let yx = m(y, x);
                    let xyx = m(x, yx);
                    for z in 0..n {
                        let xz = m(x, z);
                        sink(&[
                            (c(x, z), 1),
                            (c(y, xz), 1),
                            (c(x, m(y, xz)), 1),
                            (c(y, x), -1),
                            (c(x, yx), -1),
                            (c(xyx, z), -1),
                        ]);
                    }
                }
            }
            Variety::CommutativeAutomorphic => {
                for y in 0..n {
                    sink(&[(c(x, y), 1), (c(y, x), -1)]);
                }
                for y in 0..n {
                    let yx = m(y, x);
                    let l = &self.lmaps[(x * n + y) * n..(x * n + y + 1) * n];
                    let l = |a: usize| l[a] as usize;
                    for z in 0..n {
                        let xz = m(x, z);
                        for u in 0..n {
                            let zu = m(z, u);
                            sink(&[
                                (c(x, z), 1),
                                (c(x, u), 1),
                                (c(y, xz), 1),
                                (c(y, m(x, u)), 1),
                                (c(yx, l(zu)), 1),
                                (c(l(z), l(u)), 1),
                                (c(z, u), -1),
                                (c(y, x), -1),
                                (c(x, zu), -1),
                                (c(y, m(x, zu)), -1),
                                (c(yx, l(z)), -1),
                                (c(yx, l(u)), -1),
                            ]);
                        }
                    }
                }
            }
        }
    }

    pub fn for_each(&self, mut sink: impl FnMut(&[(usize, i64)])) {
        for x in 0..self.f.order() {
            self.block(x, &mut sink);
        }
    }

    /// Whether `θ` satisfies every equation.
    pub fn is_solution(&self, theta: &Cocycle) -> bool {
        let fp = theta.field();
        let mut ok = true;
        for x in 0..self.f.order() {
            self.block(x, &mut |eq| {
                let s: i64 = eq.iter().map(|&(col, a)| a * theta.as_vector()[col] as i64).sum();
                ok &= fp.reduce(s) == 0;
            });
            if !ok {
                break;
            }
        }
        ok
    }

    /// Solves the system with one streaming solver per block range, merging
    /// the partial bases at the end.
    pub fn solve(&self, fp: Fp) -> RrefBasis {
        let n = self.f.order();
        let workers = rayon::current_num_threads().clamp(1, 8).min(n);
        let ranges: Vec<Range<usize>> = (0..workers)
            .map(|w| w * n / workers..(w + 1) * n / workers)
            .collect();
        let solvers: Vec<StreamingSolver> = ranges
            .into_par_iter()
            .map(|r| {
                let mut s = StreamingSolver::new(fp, self.ncols());
                for x in r {
                    self.block(x, &mut |eq| s.ingest_sparse(eq).expect("columns in range"));
                }
                s
            })
            .collect();
        let mut it = solvers.into_iter();
        let mut acc = it.next().expect("at least one worker");
        for s in it {
            acc.merge(s).expect("solvers share a shape");
        }
        acc.nullspace()
    }
}

/// Basis of `C_V(F, Z_p)`, the normalized cocycles whose extension lies in
/// `V`. Errors if `F` itself is not in `V`.
pub fn variety_cocycle_space(f: &LoopTable, fp: Fp, v: Variety) -> Result<RrefBasis> {
    Ok(CocycleSystem::new(f, v)?.solve(fp))
}
